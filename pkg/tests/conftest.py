import itertools

import numpy as np
import pytest

from qvseg.core import SparseState, run_sparse
from qvseg.encoding import Video

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def pack(assign):
    """Basis index from [(wires, value), ...]."""
    v = 0
    for wires, value in assign:
        for k, w in enumerate(wires):
            v |= ((value >> k) & 1) << w
    return v


def read(basis, wires):
    return sum(((int(basis) >> w) & 1) << k for k, w in enumerate(wires))


def exhaust(circuit, regs, width):
    """Run ``circuit`` on every assignment of ``regs`` at once.

    Each input is tagged by a copy of its values on spare wires above
    ``width`` so that resets can never merge two inputs. Yields
    (input values, output basis index).
    """
    tag_wires = []
    start = width
    for wires in regs:
        tag_wires.append(list(range(start, start + len(wires))))
        start += len(wires)
    total = start
    combos = list(itertools.product(*(range(1 << len(w)) for w in regs)))
    basis = [pack(list(zip(regs, vals)) + list(zip(tag_wires, vals))) for vals in combos]
    state = SparseState(total, basis, np.full(len(basis), 1.0 / len(basis)))
    wide = type(circuit)(total)
    wide.extend(circuit)
    out = run_sparse(wide.freeze(), state)
    assert len(out) == len(combos)
    for b in out.basis:
        vals = tuple(read(b, t) for t in tag_wires)
        yield vals, int(b)


def experiment_video() -> Video:
    """4 frames of 4x4, q=3: background 1, one bright pixel walking along row 1."""
    frames = np.ones((4, 4, 4), dtype=np.int64)
    for j in range(4):
        frames[j, 1, j] = 5
    return Video(2, 2, 3, frames)


def random_video(rng, m, n, q) -> Video:
    return Video(m, n, q, rng.integers(0, 1 << q, size=(1 << m, 1 << n, 1 << n)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
