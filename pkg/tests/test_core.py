import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qvseg.core import (Circuit, Gate, Histogram, SparseState, ccx, cswap, cx, distribution,
                        fragment, mcx, measure, neg, new_circuit, quantum_cost, reset,
                        run_dense_trajectory, run_sparse, sample_dense, swap,
                        total_variation, x)
from qvseg.errors import InvalidArgument, InvalidGate, Unsupported


def reference_apply(value: int, gate: Gate) -> int:
    """Bit-by-bit gate semantics on a Python int, independent of the vectorised path."""
    bit = lambda w: (value >> w) & 1
    if gate.kind == "RESET":
        return value & ~(1 << gate.targets[0])
    if not all(bit(c) == int(pol) for c, pol in gate.controls):
        return value
    if gate.kind in ("SWAP", "CSWAP"):
        a, b = gate.targets
        if bit(a) != bit(b):
            value ^= (1 << a) | (1 << b)
        return value
    return value ^ (1 << gate.targets[0])


@st.composite
def circuits(draw, max_width=6, resets=True, max_gates=25):
    width = draw(st.integers(2, max_width))
    kinds = ["X", "CX", "CCX", "MCX", "SWAP", "CSWAP"] + (["RESET"] if resets else [])
    circ = Circuit(width)
    for _ in range(draw(st.integers(0, max_gates))):
        kind = draw(st.sampled_from(kinds))
        need = {"X": 1, "CX": 2, "CCX": 3, "MCX": 2, "SWAP": 2, "CSWAP": 3, "RESET": 1}[kind]
        if kind == "MCX":
            need = draw(st.integers(2, width))
        if need > width:
            continue
        wires = draw(st.permutations(range(width)))[:need]
        pols = [draw(st.booleans()) for _ in wires]
        if kind in ("X", "CX", "CCX", "MCX"):
            circ.append(mcx(list(zip(wires[1:], pols[1:])), wires[0]))
        elif kind == "SWAP":
            circ.append(swap(*wires))
        elif kind == "CSWAP":
            circ.append(cswap((wires[2], pols[2]), wires[0], wires[1]))
        else:
            circ.append(reset(wires[0]))
    return circ.freeze()


# -- construction


def test_new_circuit():
    assert new_circuit(18).width == 18 and len(new_circuit(18)) == 0
    assert new_circuit(1).width == 1
    with pytest.raises(InvalidArgument):
        new_circuit(0)


def test_append_examples():
    c = new_circuit(2).append(x(0))
    assert len(c) == 1
    with pytest.raises(InvalidGate):
        new_circuit(4).append(cx(5, 0))
    with pytest.raises(InvalidGate):
        ccx(1, 2, 2)


@pytest.mark.parametrize("kind, targets, controls", [
    ("X", (0,), ((1, True),)),
    ("CX", (0,), ()),
    ("RESET", (0,), ((1, True),)),
    ("SWAP", (0,), ()),
    ("CSWAP", (0, 1), ()),
    ("MCX", (0,), ()),
    ("H", (0,), ()),
])
def test_gate_arity_rejected(kind, targets, controls):
    with pytest.raises(InvalidGate):
        Gate(kind, targets, controls)


def test_frozen_circuit_rejects_append():
    c = fragment([x(0)])
    with pytest.raises(InvalidArgument):
        c.append(x(0))


def test_mcx_alias_by_control_count():
    assert mcx([], 0).kind == "X"
    assert mcx([1], 0).kind == "CX"
    assert mcx([1, 2], 0).kind == "CCX"
    assert mcx([1, 2, 3], 0).kind == "MCX"


def test_dump_format():
    c = Circuit(3)
    c.append(ccx(0, neg(1), 2), "AND").append(reset(1))
    assert c.dump() == (
        "CCX targets=[2] controls=[(0,+),(1,-)] block=AND\n"
        "RESET targets=[1] controls=[] block=-"
    )


# -- sparse simulation


def test_run_sparse_examples():
    s = run_sparse(fragment([x(0)], 2), SparseState.from_dict({"00": 1.0}))
    assert s.to_dict() == {"01": 1.0}
    s = run_sparse(fragment([reset(0)], 2), SparseState.from_dict({"01": 0.5, "00": 0.5}))
    assert s.to_dict() == {"00": 1.0}
    s = run_sparse(fragment([ccx(0, 1, 2)], 3), SparseState.from_dict({"011": 0.5, "001": 0.5}))
    assert s.to_dict() == {"111": 0.5, "001": 0.5}


def test_run_sparse_width_mismatch():
    with pytest.raises(InvalidArgument):
        run_sparse(Circuit(3), SparseState.from_dict({"00": 1.0}))


def test_sparse_state_validation():
    with pytest.raises(InvalidArgument):
        SparseState.from_dict({"00": 0.5, "01": 0.4})
    with pytest.raises(InvalidArgument):
        SparseState(2, [1, 1], [0.5, 0.5])
    with pytest.raises(Unsupported):
        SparseState(65, [0], [1.0])


@settings(max_examples=60, deadline=None)
@given(circuits())
def test_sparse_matches_reference_semantics(circ):
    for start in range(1 << circ.width):
        expected = start
        for gate in circ.gates:
            expected = reference_apply(expected, gate)
        out = run_sparse(circ, SparseState.basis_state(circ.width, start))
        assert out.basis.tolist() == [expected]


@settings(max_examples=60, deadline=None)
@given(circuits(), st.integers(0, 2**32 - 1))
def test_probability_conservation(circ, seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 1 << circ.width))
    basis = rng.choice(1 << circ.width, size=k, replace=False)
    probs = rng.random(k) + 0.01
    out = run_sparse(circ, SparseState(circ.width, basis, probs / probs.sum()))
    assert abs(out.probs.sum() - 1.0) <= 1e-12
    assert len(np.unique(out.basis)) == len(out.basis)


@settings(max_examples=25, deadline=None)
@given(circuits(max_width=10, resets=False, max_gates=40))
def test_reversibility_exhaustive(circ):
    # distinct weights tag every basis state, so equality means each one came back
    n = 1 << circ.width
    weights = np.arange(1, n + 1, dtype=float)
    start = SparseState(circ.width, np.arange(n), weights / weights.sum())
    back = run_sparse(circ.inverse(), run_sparse(circ, start))
    assert back.to_dict() == start.to_dict()


def test_inverse_rejects_reset():
    with pytest.raises(InvalidArgument):
        fragment([reset(0)]).inverse()


# -- dense trajectories


def test_dense_examples():
    assert run_dense_trajectory(fragment([x(0)]), "0", rng_seed=1) == "1"
    assert run_dense_trajectory(Circuit(2).freeze(), "10", rng_seed=1) == "10"


def test_dense_width_limit():
    with pytest.raises(Unsupported):
        run_dense_trajectory(Circuit(25).freeze(), 0, rng_seed=0)


@settings(max_examples=10, deadline=None)
@given(circuits(max_width=5), st.integers(0, 1000))
def test_sparse_dense_agreement(circ, seed):
    w = circ.width
    rng = np.random.default_rng(seed)
    basis = rng.choice(1 << w, size=min(4, 1 << w), replace=False)
    start = SparseState(w, basis, np.full(len(basis), 1.0 / len(basis)))
    wires = list(range(w))
    dense = sample_dense(circ, start, wires, 4096, rng_seed=seed)
    exact = distribution(run_sparse(circ, start), wires)
    assert total_variation(dense.probabilities(), exact) < 0.05


def test_dense_reset_is_projective():
    # whichever branch the measurement picks, the wire ends at 0
    c = fragment([reset(0)], 1)
    start = SparseState.from_dict({"0": 0.5, "1": 0.5})
    h = sample_dense(c, start, [0], 200, rng_seed=3)
    assert h.counts == {"0": 200}


# -- measurement


def test_measure_examples():
    h = measure(SparseState.from_dict({"01": 1.0}), [0], 1024, rng_seed=0)
    assert h.counts == {"1": 1024} and h.shots == 1024


def test_measure_uniform():
    uniform = SparseState.from_dict({k: 0.25 for k in ("00", "01", "10", "11")})
    h = measure(uniform, [0, 1], 1024, rng_seed=7)
    assert sorted(h.counts) == ["00", "01", "10", "11"]
    assert sum(h.counts.values()) == 1024
    # binomial sd for 1024 draws at p = 1/4 is about 13.9
    assert all(abs(c - 256) < 5 * 13.9 for c in h.counts.values())


def test_measure_deterministic_and_ordered():
    s = SparseState.from_dict({"110": 0.5, "001": 0.5})
    assert measure(s, [0, 2], 100, 5) == measure(s, [0, 2], 100, 5)
    assert set(measure(s, [0, 2], 100, 5).counts) <= {"10", "01"}


def test_measure_errors():
    s = SparseState.from_dict({"0": 1.0})
    with pytest.raises(InvalidArgument):
        measure(s, [], 10, 0)
    with pytest.raises(InvalidArgument):
        measure(s, [0], 0, 0)
    with pytest.raises(InvalidArgument):
        measure(s, [3], 10, 0)


def test_histogram_roundtrip():
    h = Histogram((3, 1), {"01": 3, "11": 1}, 4)
    assert Histogram.from_dict(h.to_dict()) == h
    with pytest.raises(InvalidArgument):
        Histogram((0,), {"1": 3}, 4)


# -- cost


def toffoli_chain_oracle(k: int) -> int:
    # k-control NOT as V-chain: k-2 compute Toffolis, 1 target Toffoli, k-2 uncompute
    return 5 * ((k - 2) + 1 + (k - 2))


def test_cost_examples():
    assert quantum_cost(fragment([ccx(0, 1, 2)])).total_cost == 5
    assert quantum_cost(fragment([cswap(0, 1, 2)])).total_cost == 3
    assert quantum_cost(fragment([mcx([0, 1, 2, 3], 4)])).total_cost == toffoli_chain_oracle(4) == 25


@pytest.mark.parametrize("gate, cost", [
    (x(0), 1), (cx(0, 1), 1), (swap(0, 1), 1), (reset(0), 1),
    (ccx(neg(0), neg(1), 2), 5), (mcx([0, 1, 2, 3, 4], 5), toffoli_chain_oracle(5)),
])
def test_unit_costs(gate, cost):
    assert gate.cost == cost


def test_cost_per_block():
    c = Circuit(3)
    c.append(x(0), "a").append(ccx(0, 1, 2), "b").append(cx(0, 1), "a").append(reset(2))
    rep = quantum_cost(c)
    assert rep.per_block == {"a": 2, "b": 5, "unlabeled": 1}
    assert rep.total_cost == 8 and rep.gate_census == {"X": 1, "CCX": 1, "CX": 1, "RESET": 1}
    assert c.frozen


@settings(max_examples=30, deadline=None)
@given(circuits(), circuits())
def test_cost_additivity(c1, c2):
    w = max(c1.width, c2.width)
    joined = Circuit(w).extend(c1).extend(c2)
    assert quantum_cost(joined).total_cost == quantum_cost(c1).total_cost + quantum_cost(c2).total_cost


def test_total_variation():
    assert total_variation({"0": 1.0}, {"1": 1.0}) == 1.0
    assert total_variation({"0": 0.5, "1": 0.5}, {"0": 0.5, "1": 0.5}) == 0.0
