"""Gate/circuit model, exact simulators and quantum-cost accounting.

Bit order is ``lsb0`` everywhere: wire 0 is the least significant bit of a
basis index, and the rightmost character of a bitstring.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import InvalidArgument, InvalidGate, Unsupported

MAX_SPARSE_WIDTH = 64
DENSE_LIMIT = 24
PROB_TOL = 1e-12

KINDS = ("X", "CX", "CCX", "MCX", "SWAP", "CSWAP", "RESET")
_FLIP_KINDS = ("X", "CX", "CCX", "MCX")
# (min controls, max controls, number of targets)
_ARITY = {
    "X": (0, 0, 1),
    "CX": (1, 1, 1),
    "CCX": (2, 2, 1),
    "MCX": (1, None, 1),
    "SWAP": (0, 0, 2),
    "CSWAP": (1, 1, 2),
    "RESET": (0, 0, 1),
}


@dataclass(frozen=True)
class Gate:
    """One reversible gate or reset.

    ``controls`` holds ``(wire, positive)`` pairs; a negative control fires
    when its wire is 0.
    """

    kind: str
    targets: tuple[int, ...]
    controls: tuple[tuple[int, bool], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "controls", tuple(_control(c) for c in self.controls))
        if self.kind not in _ARITY:
            raise InvalidGate(f"unknown gate kind {self.kind!r}")
        lo, hi, n_targets = _ARITY[self.kind]
        k = len(self.controls)
        if k < lo or (hi is not None and k > hi):
            raise InvalidGate(f"{self.kind} cannot take {k} controls")
        if len(self.targets) != n_targets:
            raise InvalidGate(f"{self.kind} needs {n_targets} target(s), got {len(self.targets)}")
        wires = self.qubits
        if any((not isinstance(w, (int, np.integer))) or w < 0 for w in wires):
            raise InvalidGate(f"wire indices must be non-negative integers: {wires}")
        if len(set(wires)) != len(wires):
            raise InvalidGate(f"{self.kind} uses a wire twice: {wires}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(self.targets) + tuple(c for c, _ in self.controls)

    @property
    def cost(self) -> int:
        if self.kind in ("SWAP", "RESET"):
            return 1
        if self.kind == "CSWAP":
            return 3
        return toffoli_chain_cost(len(self.controls))

    def describe(self, block: str | None = None) -> str:
        targets = ",".join(str(t) for t in self.targets)
        controls = ",".join(f"({c},{'+' if pol else '-'})" for c, pol in self.controls)
        return f"{self.kind} targets=[{targets}] controls=[{controls}] block={block or '-'}"


def toffoli_chain_cost(n_controls: int) -> int:
    """Cost of a NOT with ``n_controls`` controls.

    Three or more controls are priced as a chain of 2k-3 Toffolis over k-2
    ancillas.
    """
    if n_controls <= 1:
        return 1
    if n_controls == 2:
        return 5
    return 5 * (2 * n_controls - 3)


def _control(spec) -> tuple[int, bool]:
    if isinstance(spec, tuple):
        wire, pol = spec
        if isinstance(pol, str):
            if pol not in "+-" or len(pol) != 1:
                raise InvalidGate(f"bad control polarity {pol!r}")
            pol = pol == "+"
        return int(wire), bool(pol)
    return int(spec), True


def neg(wire: int) -> tuple[int, bool]:
    """Negative control on ``wire``."""
    return int(wire), False


def x(target: int) -> Gate:
    return Gate("X", (int(target),))


def cx(control, target: int) -> Gate:
    return Gate("CX", (int(target),), (_control(control),))


def ccx(c1, c2, target: int) -> Gate:
    return Gate("CCX", (int(target),), (_control(c1), _control(c2)))


def mcx(controls: Iterable, target: int) -> Gate:
    """Controlled NOT using the cheapest kind that fits the control count."""
    ctrls = tuple(_control(c) for c in controls)
    kind = {0: "X", 1: "CX", 2: "CCX"}.get(len(ctrls), "MCX")
    return Gate(kind, (int(target),), ctrls)


def swap(a: int, b: int) -> Gate:
    return Gate("SWAP", (int(a), int(b)))


def cswap(control, a: int, b: int) -> Gate:
    return Gate("CSWAP", (int(a), int(b)), (_control(control),))


def reset(target: int) -> Gate:
    return Gate("RESET", (int(target),))


class Circuit:
    """Ordered gate list over ``width`` wires with an optional block label per gate."""

    def __init__(self, width: int):
        if not isinstance(width, (int, np.integer)) or width < 1:
            raise InvalidArgument(f"circuit width must be >= 1, got {width!r}")
        self.width = int(width)
        self._gates: list[Gate] = []
        self._labels: list[str | None] = []
        self._frozen = False

    @property
    def gates(self) -> tuple[Gate, ...]:
        return tuple(self._gates)

    @property
    def labels(self) -> tuple[str | None, ...]:
        return tuple(self._labels)

    @property
    def frozen(self) -> bool:
        return self._frozen

    def __len__(self) -> int:
        return len(self._gates)

    def __iter__(self) -> Iterator[tuple[Gate, str | None]]:
        return iter(zip(self._gates, self._labels))

    def append(self, gate: Gate, block: str | None = None) -> "Circuit":
        if self._frozen:
            raise InvalidArgument("circuit is frozen")
        bad = [w for w in gate.qubits if w >= self.width]
        if bad:
            raise InvalidGate(f"{gate.kind} touches wire(s) {bad} outside width {self.width}")
        self._gates.append(gate)
        self._labels.append(block)
        return self

    def extend(self, other: "Circuit | Iterable[Gate]", block: str | None = None) -> "Circuit":
        """Append every gate of ``other``.

        ``block`` overrides the fragment's own labels when given.
        """
        if isinstance(other, Circuit):
            for gate, label in other:
                self.append(gate, block if block is not None else label)
        else:
            for gate in other:
                self.append(gate, block)
        return self

    def freeze(self) -> "Circuit":
        self._frozen = True
        return self

    def inverse(self) -> "Circuit":
        # every non-reset kind here is an involution
        if any(g.kind == "RESET" for g in self._gates):
            raise InvalidArgument("a circuit containing RESET has no inverse")
        inv = Circuit(self.width)
        for gate, label in reversed(list(self)):
            inv.append(gate, label)
        return inv.freeze()

    def census(self) -> dict[str, int]:
        return dict(Counter(g.kind for g in self._gates))

    def dump(self) -> str:
        return "\n".join(g.describe(label) for g, label in self)

    def __repr__(self) -> str:
        state = "frozen" if self._frozen else "open"
        return f"Circuit(width={self.width}, gates={len(self)}, {state})"


def new_circuit(width: int) -> Circuit:
    return Circuit(width)


def fragment(gates: Iterable[Gate], width: int | None = None) -> Circuit:
    """Frozen circuit holding ``gates``, wide enough for every wire they touch."""
    gates = list(gates)
    needed = max((w for g in gates for w in g.qubits), default=0) + 1
    circ = Circuit(max(needed, width or 1))
    circ.extend(gates)
    return circ.freeze()


# --------------------------------------------------------------------------
# sparse ensemble simulation


def _bits_to_int(bits: str) -> int:
    if not bits or set(bits) - {"0", "1"}:
        raise InvalidArgument(f"not a bitstring: {bits!r}")
    return int(bits, 2)


class SparseState:
    """Probability-weighted set of computational-basis states."""

    def __init__(self, width: int, basis, probs, check: bool = True):
        if width < 1 or width > MAX_SPARSE_WIDTH:
            raise Unsupported(f"sparse width must be in [1, {MAX_SPARSE_WIDTH}], got {width}")
        self.width = int(width)
        self.basis = np.asarray(basis, dtype=np.uint64)
        self.probs = np.asarray(probs, dtype=np.float64)
        if check:
            self._check()

    def _check(self):
        if self.basis.shape != self.probs.shape or self.basis.ndim != 1:
            raise InvalidArgument("basis and probs must be 1-D arrays of equal length")
        if len(self.basis) == 0:
            raise InvalidArgument("state has no components")
        if len(np.unique(self.basis)) != len(self.basis):
            raise InvalidArgument("duplicate basis states")
        if self.width < 64 and np.any(self.basis >> np.uint64(self.width)):
            raise InvalidArgument("basis state wider than the register")
        if np.any(self.probs <= 0) or np.any(self.probs > 1 + PROB_TOL):
            raise InvalidArgument("component probabilities must lie in (0, 1]")
        if abs(self.probs.sum() - 1.0) > PROB_TOL:
            raise InvalidArgument(f"probabilities sum to {self.probs.sum()!r}, not 1")

    @classmethod
    def from_dict(cls, mapping: Mapping[str, float], width: int | None = None) -> "SparseState":
        keys = list(mapping)
        if width is None:
            width = len(keys[0]) if keys else 0
        if any(len(k) != width for k in keys):
            raise InvalidArgument(f"all bitstrings must have length {width}")
        basis = [_bits_to_int(k) for k in keys]
        return cls(width, basis, [mapping[k] for k in keys])

    @classmethod
    def basis_state(cls, width: int, value: int | str) -> "SparseState":
        if isinstance(value, str):
            if len(value) != width:
                raise InvalidArgument(f"bitstring {value!r} does not have {width} bits")
            value = _bits_to_int(value)
        return cls(width, [value], [1.0])

    def to_dict(self) -> dict[str, float]:
        return {format(int(b), f"0{self.width}b"): float(p) for b, p in zip(self.basis, self.probs)}

    def __len__(self) -> int:
        return len(self.basis)

    def copy(self) -> "SparseState":
        return SparseState(self.width, self.basis.copy(), self.probs.copy(), check=False)

    def field(self, wires: Sequence[int]) -> np.ndarray:
        """Integer value of ``wires`` (wires[0] least significant) per component."""
        out = np.zeros(len(self.basis), dtype=np.uint64)
        for k, w in enumerate(wires):
            out |= ((self.basis >> np.uint64(w)) & np.uint64(1)) << np.uint64(k)
        return out

    def marginal(self, wires: Sequence[int]) -> dict[int, float]:
        vals = self.field(wires)
        uniq, inv = np.unique(vals, return_inverse=True)
        weights = np.bincount(inv, weights=self.probs)
        return {int(v): float(p) for v, p in zip(uniq, weights)}


def _masks(gate: Gate) -> tuple[np.uint64, np.uint64]:
    pos = 0
    negm = 0
    for c, pol in gate.controls:
        if pol:
            pos |= 1 << c
        else:
            negm |= 1 << c
    return np.uint64(pos), np.uint64(negm)


def _apply_sparse(basis: np.ndarray, probs: np.ndarray, gate: Gate):
    if gate.kind == "RESET":
        basis = basis & ~np.uint64(1 << gate.targets[0])
        uniq, inv = np.unique(basis, return_inverse=True)
        if len(uniq) == len(basis):
            return basis, probs
        return uniq, np.bincount(inv, weights=probs)
    pos, negm = _masks(gate)
    fire = ((basis & pos) == pos) & ((basis & negm) == 0)
    if gate.kind in _FLIP_KINDS:
        flip = fire.astype(np.uint64) << np.uint64(gate.targets[0])
        return basis ^ flip, probs
    t1, t2 = (np.uint64(t) for t in gate.targets)
    differ = ((basis >> t1) ^ (basis >> t2)) & np.uint64(1)
    flip = (fire.astype(np.uint64) & differ) * np.uint64((1 << int(t1)) | (1 << int(t2)))
    return basis ^ flip, probs


def run_sparse(circuit: Circuit, initial: SparseState) -> SparseState:
    """Apply ``circuit`` to every component of ``initial``.

    Resets clear the target bit and merge components that collide.
    """
    if initial.width != circuit.width:
        raise InvalidArgument(f"state width {initial.width} != circuit width {circuit.width}")
    basis, probs = initial.basis.copy(), initial.probs.copy()
    for gate in circuit.gates:
        basis, probs = _apply_sparse(basis, probs, gate)
    return SparseState(circuit.width, basis, probs, check=False)


# --------------------------------------------------------------------------
# dense state-vector trajectories (cross-validation only)


class _DenseRunner:
    """Real-amplitude state vector reshaped as one axis per wire.

    Wire k lives on axis ``width - 1 - k`` so that the flat C-order index is
    the lsb0 basis index.
    """

    def __init__(self, circuit: Circuit, initial, limit: int = DENSE_LIMIT):
        if circuit.width > limit:
            raise Unsupported(f"dense simulation limited to {limit} qubits, circuit has {circuit.width}")
        self.circuit = circuit
        self.width = w = circuit.width
        psi = np.zeros(1 << w, dtype=np.float64)
        if isinstance(initial, SparseState):
            if initial.width != w:
                raise InvalidArgument(f"state width {initial.width} != circuit width {w}")
            psi[initial.basis.astype(np.int64)] = np.sqrt(initial.probs)
        else:
            if isinstance(initial, str):
                if len(initial) != w:
                    raise InvalidArgument(f"bitstring {initial!r} does not have {w} bits")
                initial = _bits_to_int(initial)
            psi[int(initial)] = 1.0
        self.psi0 = psi.reshape((2,) * w)
        # everything before the first reset is deterministic; run it once
        gates = circuit.gates
        self.split = next((k for k, g in enumerate(gates) if g.kind == "RESET"), len(gates))
        for gate in gates[: self.split]:
            self._unitary(self.psi0, gate)

    def _axis(self, wire: int) -> int:
        return self.width - 1 - wire

    def _unitary(self, psi: np.ndarray, gate: Gate):
        index = [slice(None)] * self.width
        for c, pol in gate.controls:
            index[self._axis(c)] = 1 if pol else 0
        index = tuple(index)
        ctrl_axes = [self._axis(c) for c, _ in gate.controls]

        def sub_axis(ax):
            return ax - sum(1 for a in ctrl_axes if a < ax)

        sub = psi[index]
        if gate.kind in _FLIP_KINDS:
            psi[index] = np.flip(sub, axis=sub_axis(self._axis(gate.targets[0]))).copy()
        else:
            a1, a2 = (sub_axis(self._axis(t)) for t in gate.targets)
            psi[index] = np.swapaxes(sub, a1, a2).copy()

    def _reset(self, psi: np.ndarray, wire: int, rng: np.random.Generator):
        ax = self._axis(wire)
        zero = [slice(None)] * self.width
        one = list(zero)
        zero[ax], one[ax] = 0, 1
        zero, one = tuple(zero), tuple(one)
        p1 = float(np.sum(psi[one] ** 2))
        if rng.random() < p1:
            psi[zero] = psi[one] / np.sqrt(p1)
        else:
            psi[zero] = psi[zero] / np.sqrt(1.0 - p1)
        psi[one] = 0.0

    def trajectory(self, rng: np.random.Generator) -> int:
        psi = self.psi0.copy()
        for gate in self.circuit.gates[self.split:]:
            if gate.kind == "RESET":
                self._reset(psi, gate.targets[0], rng)
            else:
                self._unitary(psi, gate)
        p = psi.ravel() ** 2
        return int(rng.choice(p.size, p=p / p.sum()))


def run_dense_trajectory(circuit: Circuit, initial, rng_seed=None, limit: int = DENSE_LIMIT) -> str:
    """One measured bitstring from a single stochastic state-vector run.

    ``initial`` may be a bitstring, an integer basis index, or a SparseState
    (loaded as the real superposition with amplitudes sqrt(p)).
    """
    runner = _DenseRunner(circuit, initial, limit)
    outcome = runner.trajectory(np.random.default_rng(rng_seed))
    return format(outcome, f"0{circuit.width}b")


def sample_dense(circuit: Circuit, initial, qubits: Sequence[int], trajectories: int,
                 rng_seed=None, limit: int = DENSE_LIMIT) -> "Histogram":
    """Histogram over ``qubits`` from ``trajectories`` independent dense runs."""
    qubits = _check_subset(qubits, circuit.width)
    if trajectories < 1:
        raise InvalidArgument("trajectories must be >= 1")
    runner = _DenseRunner(circuit, initial, limit)
    rng = np.random.default_rng(rng_seed)
    counts: Counter[str] = Counter()
    for _ in range(trajectories):
        outcome = runner.trajectory(rng)
        counts[_pack(outcome, qubits)] += 1
    return Histogram(qubits, dict(sorted(counts.items())), trajectories)


# --------------------------------------------------------------------------
# measurement


@dataclass
class Histogram:
    """Shot counts keyed by bitstrings over ``qubits`` (qubits[0] is the rightmost char)."""

    qubits: tuple[int, ...]
    counts: dict[str, int]
    shots: int

    def __post_init__(self):
        self.qubits = tuple(int(q) for q in self.qubits)
        if sum(self.counts.values()) != self.shots:
            raise InvalidArgument("histogram counts do not sum to shots")
        if any(v < 0 for v in self.counts.values()):
            raise InvalidArgument("negative count")

    def probabilities(self) -> dict[str, float]:
        return {k: v / self.shots for k, v in self.counts.items()}

    def to_dict(self) -> dict:
        return {
            "bit_order": "lsb0",
            "qubits": list(self.qubits),
            "shots": self.shots,
            "counts": dict(sorted(self.counts.items())),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Histogram":
        return cls(tuple(data["qubits"]), {str(k): int(v) for k, v in data["counts"].items()},
                   int(data["shots"]))


def _check_subset(qubits: Sequence[int], width: int) -> tuple[int, ...]:
    qubits = tuple(int(q) for q in qubits)
    if not qubits:
        raise InvalidArgument("measured qubit subset is empty")
    if len(set(qubits)) != len(qubits) or any(q < 0 or q >= width for q in qubits):
        raise InvalidArgument(f"bad qubit subset {qubits} for width {width}")
    return qubits


def _pack(index: int, qubits: Sequence[int]) -> str:
    return "".join(str((index >> q) & 1) for q in reversed(qubits))


def distribution(state: SparseState, qubits: Sequence[int]) -> dict[str, float]:
    """Exact outcome distribution of measuring ``qubits``."""
    qubits = _check_subset(qubits, state.width)
    k = len(qubits)
    return {format(v, f"0{k}b"): p for v, p in state.marginal(qubits).items()}


def measure(state: SparseState, qubits: Sequence[int], shots: int, rng_seed=None) -> Histogram:
    """Multinomial sampling of ``shots`` outcomes on ``qubits``; deterministic per seed."""
    if shots < 1:
        raise InvalidArgument("shots must be >= 1")
    dist = distribution(state, qubits)
    keys = sorted(dist)
    p = np.array([dist[k] for k in keys])
    draws = np.random.default_rng(rng_seed).multinomial(shots, p / p.sum())
    counts = {k: int(c) for k, c in zip(keys, draws) if c}
    return Histogram(tuple(qubits), counts, shots)


def total_variation(p: Mapping[str, float], q: Mapping[str, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


# --------------------------------------------------------------------------
# cost accounting


@dataclass
class CostReport:
    per_block: dict[str, int]
    total_cost: int
    qubit_count: int
    gate_census: dict[str, int]
    compact_qubit_count: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "bit_order": "lsb0",
            "per_block": dict(sorted(self.per_block.items())),
            "total_cost": self.total_cost,
            "qubit_count": self.qubit_count,
            "gate_census": dict(sorted(self.gate_census.items())),
        }
        if self.compact_qubit_count is not None:
            out["compact_qubit_count"] = self.compact_qubit_count
        out.update(self.extra)
        return out


def quantum_cost(circuit: Circuit) -> CostReport:
    """Weighted gate count: 1-2 qubit gates and resets 1, CCX 5, CSWAP 3."""
    circuit.freeze()
    per_block: Counter[str] = Counter()
    for gate, label in circuit:
        per_block[label or "unlabeled"] += gate.cost
    return CostReport(
        per_block=dict(per_block),
        total_cost=sum(per_block.values()),
        qubit_count=circuit.width,
        gate_census=circuit.census(),
    )
