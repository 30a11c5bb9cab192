"""Reversible building blocks: comparator, subtractors, copy, cycle shift,
threshold comparison, binarization and AND.

Every builder takes wire lists with the least significant bit first and
returns a frozen fragment circuit. Comparator outputs use a 2-wire slice
``y = [y0, y1]``, so the slice value reads ``y1y0``: 2 means a > b, 1 means
a < b, 0 means equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .core import Circuit, ccx, cswap, cx, fragment, mcx, neg, quantum_cost, reset, x
from .errors import InvalidArgument

GT, LT, EQ = 0b10, 0b01, 0b00


@dataclass(frozen=True)
class BlockSpec:
    name: str
    inputs: dict[str, list[int]]
    scratch: dict[str, list[int]] = field(default_factory=dict)
    contract: str = ""

    def __post_init__(self):
        seen: list[int] = []
        for wires in list(self.inputs.values()) + list(self.scratch.values()):
            seen.extend(wires)
        if len(seen) != len(set(seen)):
            raise InvalidArgument(f"{self.name}: slices overlap")


def _disjoint(*groups: Sequence[int]):
    flat = [w for g in groups for w in g]
    if len(flat) != len(set(flat)):
        raise InvalidArgument(f"wire slices overlap: {[list(g) for g in groups]}")


def _same_size(a, b, what="a and b"):
    if len(a) != len(b) or not len(a):
        raise InvalidArgument(f"{what} must be non-empty and equally sized ({len(a)} vs {len(b)})")


def _sized(wires, n, name):
    if len(wires) != n:
        raise InvalidArgument(f"{name} needs {n} wires, got {len(wires)}")


def _scan(bit_gates, anc, y):
    """Shared most-significant-first scan for both comparators.

    ``bit_gates(live, fire, y1)`` emits the per-bit gates that raise ``fire``
    when bit i decides the comparison and record a > b into y1. ``live``
    stays 1 while all higher bits have been equal.
    """
    live, fire = anc[0], anc[1]
    y0, y1 = y
    gates = [x(live)]
    gates += bit_gates(live, fire, y1)
    # y0 = decided and not greater; then clear live when nothing was decided
    gates += [ccx(neg(live), neg(y1), y0), ccx(neg(y1), neg(y0), live)]
    return gates


def build_comparator(a, b, anc, y, width: int | None = None) -> Circuit:
    """y1y0 <- compare(a, b); a, b preserved; anc returned to 0.

    Cost is 14q + 11.
    """
    _same_size(a, b)
    _sized(anc, 3, "anc")
    _sized(y, 2, "y")
    _disjoint(a, b, anc, y)

    def per_bit(live, fire, y1):
        gates = []
        for ai, bi in zip(reversed(a), reversed(b)):
            gates += [
                cx(ai, bi),             # bi = ai xor bi
                ccx(bi, live, fire),
                ccx(fire, ai, y1),      # deciding bit with ai = 1 -> a > b
                cx(fire, live),
                reset(fire),
                cx(ai, bi),
            ]
        return gates

    return fragment(_scan(per_bit, anc, y), width)


def build_threshold_compare(c, threshold: int, anc, y, width: int | None = None) -> Circuit:
    """y1y0 <- compare(c, threshold) with the constant folded into control polarities.

    Cost is 7q + 11 plus one per zero bit of the threshold.
    """
    q = len(c)
    if not q:
        raise InvalidArgument("c must be non-empty")
    if not 0 <= threshold < (1 << q):
        raise InvalidArgument(f"threshold {threshold} outside [0, {(1 << q) - 1}]")
    _sized(anc, 3, "anc")
    _sized(y, 2, "y")
    _disjoint(c, anc, y)

    def per_bit(live, fire, y1):
        gates = []
        for k in reversed(range(q)):
            t_bit = (threshold >> k) & 1
            # fires when c_k differs from the threshold bit
            gates.append(ccx((c[k], not t_bit), live, fire))
            if not t_bit:
                gates.append(cx(fire, y1))
            gates += [cx(fire, live), reset(fire)]
        return gates

    return fragment(_scan(per_bit, anc, y), width)


def _maj(c, b, a):
    return [cx(a, b), cx(a, c), ccx(c, b, a)]


def _uma(c, b, a):
    return [ccx(c, b, a), cx(a, c), cx(c, b)]


def build_subtractor(a, b, anc, width: int | None = None) -> Circuit:
    """b <- (a - b) mod 2**q with a preserved.

    Ripple-borrow through anc[0]: a - b = ~(~a + b), evaluated with a
    majority/unmajority carry chain. When a < b the result wraps around.
    """
    _same_size(a, b)
    _sized(anc, 3, "anc")
    _disjoint(a, b, anc)
    q = len(a)
    gates = [x(w) for w in a]
    carry_in = [anc[0]] + list(a[:-1])
    for k in range(q):
        gates += _maj(carry_in[k], b[k], a[k])
    for k in reversed(range(q)):
        gates += _uma(carry_in[k], b[k], a[k])
    gates += [x(w) for w in a] + [x(w) for w in b]
    return fragment(gates, width)


def build_abs_subtractor(a, b, anc, y, width: int | None = None) -> Circuit:
    """b <- |a - b|, a <- max(a, b); anc and y end at 0.

    Compare, swap the operands when a < b, subtract, then reset the
    comparison flags, which can no longer be uncomputed.
    """
    _same_size(a, b)
    _sized(anc, 3, "anc")
    _sized(y, 2, "y")
    _disjoint(a, b, anc, y)
    y0, y1 = y
    circ = Circuit(max(width or 1, max([*a, *b, *anc, *y]) + 1))
    circ.extend(build_comparator(a, b, anc, y))
    circ.extend(cswap(y0, ai, bi) for ai, bi in zip(a, b))
    circ.extend(build_subtractor(a, b, anc))
    circ.extend([reset(y0), reset(y1)])
    return circ.freeze()


def build_copy(src, dst, width: int | None = None) -> Circuit:
    """dst ^= src; with dst = 0 this copies. Exactly len(src) CX gates."""
    _same_size(src, dst, "src and dst")
    _disjoint(src, dst)
    return fragment([cx(s, d) for s, d in zip(src, dst)], width)


def build_cycle_shift(frame, direction: int, width: int | None = None) -> Circuit:
    """|j> -> |(j + direction) mod 2**m> on the frame register.

    Cascade of NOTs from the top bit down, each controlled by all lower bits
    (positive for +1, negative for -1).
    """
    if direction not in (1, -1):
        raise InvalidArgument(f"direction must be +1 or -1, got {direction}")
    if not len(frame):
        raise InvalidArgument("frame register is empty")
    pol = direction == 1
    gates = [mcx([(w, pol) for w in frame[:k]], frame[k]) for k in reversed(range(len(frame)))]
    return fragment(gates, width)


def build_binarization(c, threshold: int, anc, y, width: int | None = None) -> Circuit:
    """c[0] <- [c >= threshold]; higher c wires keep stale bits; anc, y end at 0."""
    circ = Circuit(max(width or 1, max([*c, *anc, *y]) + 1))
    circ.extend(build_threshold_compare(c, threshold, anc, y))
    y0, y1 = y
    circ.extend([reset(c[0]), cx(neg(y0), c[0]), reset(y0), reset(y1)])
    return circ.freeze()


def build_and(b1: int, b2: int, out: int, width: int | None = None) -> Circuit:
    _disjoint([b1], [b2], [out])
    return fragment([ccx(b1, b2, out)], width)


# --------------------------------------------------------------------------
# documentation registry


def _demo_wires(q: int):
    a = list(range(q))
    b = list(range(q, 2 * q))
    anc = list(range(2 * q, 2 * q + 3))
    y = [2 * q + 3, 2 * q + 4]
    return a, b, anc, y


def block_spec(name: str, q: int = 3, m: int = 2, threshold: int = 1) -> tuple[BlockSpec, Circuit]:
    """Spec and an example instance of block ``name`` on a compact wire map."""
    a, b, anc, y = _demo_wires(q)
    if name == "comparator":
        spec = BlockSpec(name, {"a": a, "b": b, "y": y}, {"anc": anc},
                         "y1y0 = 10 if a > b, 01 if a < b, 00 if equal; a, b preserved")
        return spec, build_comparator(a, b, anc, y)
    if name == "subtractor":
        spec = BlockSpec(name, {"a": a, "b": b}, {"anc": anc},
                         "b <- a - b (requires a >= b, wraps mod 2^q otherwise); a preserved")
        return spec, build_subtractor(a, b, anc)
    if name == "abs_subtractor":
        spec = BlockSpec(name, {"a": a, "b": b}, {"anc": anc, "y": y},
                         "b <- |a - b|; a <- max(a, b); anc and y reset to 0")
        return spec, build_abs_subtractor(a, b, anc, y)
    if name == "copy":
        spec = BlockSpec(name, {"src": a, "dst": b}, {}, "dst <- src (dst must start at 0); q CX gates")
        return spec, build_copy(a, b)
    if name == "cycle_shift":
        frame = list(range(m))
        spec = BlockSpec(name, {"frame": frame}, {}, "|j> -> |(j + 1) mod 2^m>; direction -1 mirrors it")
        return spec, build_cycle_shift(frame, 1)
    if name == "threshold_compare":
        spec = BlockSpec(name, {"c": a, "y": y}, {"anc": anc},
                         f"y1y0 = compare(c, T={threshold}); c preserved")
        return spec, build_threshold_compare(a, threshold, anc, y)
    if name == "binarization":
        spec = BlockSpec(name, {"c": a}, {"anc": anc, "y": y},
                         f"c0 <- [c >= T={threshold}]; c1.. left as garbage")
        return spec, build_binarization(a, threshold, anc, y)
    if name == "and":
        spec = BlockSpec(name, {"b1": [0], "b2": [1], "out": [2]}, {}, "out <- b1 AND b2 (out must start at 0)")
        return spec, build_and(0, 1, 2)
    raise InvalidArgument(f"unknown block {name!r}; choose from {', '.join(BLOCK_NAMES)}")


BLOCK_NAMES = ("comparator", "subtractor", "abs_subtractor", "copy", "cycle_shift",
               "threshold_compare", "binarization", "and")


def describe(name: str, q: int = 3, m: int = 2, threshold: int = 1) -> str:
    spec, circ = block_spec(name, q, m, threshold)
    report = quantum_cost(circ)
    lines = [f"block: {spec.name}", f"contract: {spec.contract}"]
    lines += [f"input {k}: wires {v}" for k, v in spec.inputs.items()]
    lines += [f"scratch {k}: wires {v}" for k, v in spec.scratch.items()]
    census = ", ".join(f"{k}={v}" for k, v in sorted(report.gate_census.items()))
    lines += [f"example size: q={q}" + (f", m={m}" if name == "cycle_shift" else ""),
              f"quantum cost: {report.total_cost}", f"gate census: {census}", "gates:", circ.dump()]
    return "\n".join(lines)
