"""Classical video <-> QVNEQR ensemble conversion and the register layout."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Circuit, Histogram, SparseState, mcx
from .errors import CorruptState, IncompleteSampling, InvalidArgument, Unsupported

MAX_DEPTH = 8

SLICE_ORDER = ("color", "pos", "frame", "diff_prev", "diff_next", "anc", "cmp_out", "seg_out")


@dataclass
class Video:
    """``pixels[j, Y, X]`` for 2**m_exp frames of 2**n_exp x 2**n_exp pixels, q-bit depth."""

    m_exp: int
    n_exp: int
    q: int
    pixels: np.ndarray

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.int64)

    @classmethod
    def from_frames(cls, frames, q: int) -> "Video":
        pixels = np.asarray(frames, dtype=np.int64)
        if pixels.ndim != 3:
            raise InvalidArgument(f"frames must be a 3-D array (frame, Y, X), got shape {pixels.shape}")
        m_exp = max(pixels.shape[0], 1).bit_length() - 1
        n_exp = max(pixels.shape[1], 1).bit_length() - 1
        return cls(m_exp, n_exp, q, pixels)

    @property
    def n_frames(self) -> int:
        return 1 << self.m_exp

    @property
    def side(self) -> int:
        return 1 << self.n_exp

    def __eq__(self, other):
        if not isinstance(other, Video):
            return NotImplemented
        return ((self.m_exp, self.n_exp, self.q) == (other.m_exp, other.n_exp, other.q)
                and self.pixels.shape == other.pixels.shape
                and bool(np.array_equal(self.pixels, other.pixels)))

    def to_manifest(self) -> dict:
        return {
            "m_exp": self.m_exp,
            "n_exp": self.n_exp,
            "q": self.q,
            "frames": self.pixels.tolist(),
        }

    @classmethod
    def from_manifest(cls, data) -> "Video":
        try:
            return cls(int(data["m_exp"]), int(data["n_exp"]), int(data["q"]),
                       np.asarray(data["frames"], dtype=np.int64))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgument(f"malformed video manifest: {exc}") from exc


def _is_pow2(k: int) -> bool:
    return k >= 1 and k & (k - 1) == 0


def validate_video(video: Video) -> list[str]:
    """All problems with ``video``; an empty list means it is usable."""
    problems = []
    px = video.pixels
    if not 1 <= video.q <= MAX_DEPTH:
        problems.append(f"bit depth q={video.q} outside [1, {MAX_DEPTH}]")
    if video.m_exp < 1:
        problems.append(f"m_exp={video.m_exp} must be >= 1")
    if video.n_exp < 1:
        problems.append(f"n_exp={video.n_exp} must be >= 1")
    if px.ndim != 3:
        problems.append(f"pixel array must be 3-D (frame, Y, X), got {px.ndim}-D")
        return problems
    frames, rows, cols = px.shape
    if not _is_pow2(frames):
        problems.append(f"frame count {frames} is not a power of two")
    elif frames != 1 << max(video.m_exp, 0):
        problems.append(f"frame count {frames} != 2**m_exp = {1 << max(video.m_exp, 0)}")
    if rows != cols:
        problems.append(f"frames are {rows}x{cols}, not square")
    for name, size in (("height", rows), ("width", cols)):
        if not _is_pow2(size):
            problems.append(f"frame {name} {size} is not a power of two")
        elif size != 1 << max(video.n_exp, 0):
            problems.append(f"frame {name} {size} != 2**n_exp = {1 << max(video.n_exp, 0)}")
    if px.size:
        lo, hi = int(px.min()), int(px.max())
        top = (1 << video.q) - 1 if video.q >= 0 else 0
        if lo < 0 or hi > top:
            bad = int(np.count_nonzero((px < 0) | (px > top)))
            problems.append(f"{bad} pixel(s) outside [0, {top}] (min {lo}, max {hi})")
    return problems


@dataclass(frozen=True)
class RegisterLayout:
    """Named wire ranges; ``slices[name] = (start, stop)``."""

    m_exp: int
    n_exp: int
    q: int
    slices: dict

    @property
    def width(self) -> int:
        return max(stop for _, stop in self.slices.values())

    @property
    def compact_width(self) -> int:
        # the published count omits the comparator output pair and the AND output
        return 3 * self.q + 2 * self.n_exp + self.m_exp + 3

    def wires(self, name: str) -> list[int]:
        start, stop = self.slices[name]
        return list(range(start, stop))

    @property
    def color(self):
        return self.wires("color")

    @property
    def pos(self):
        return self.wires("pos")

    @property
    def frame(self):
        return self.wires("frame")

    @property
    def diff_prev(self):
        return self.wires("diff_prev")

    @property
    def diff_next(self):
        return self.wires("diff_next")

    @property
    def anc(self):
        return self.wires("anc")

    @property
    def cmp_out(self):
        return self.wires("cmp_out")

    @property
    def seg_out(self) -> int:
        return self.wires("seg_out")[0]

    def measured_wires(self) -> tuple[int, ...]:
        """Key qubits read out after segmentation: position, frame, result bit."""
        return tuple(self.pos + self.frame + [self.seg_out])

    def to_dict(self) -> dict:
        return {
            "bit_order": "lsb0",
            "m_exp": self.m_exp,
            "n_exp": self.n_exp,
            "q": self.q,
            "width": self.width,
            "compact_width": self.compact_width,
            "slices": {name: list(self.slices[name]) for name in SLICE_ORDER},
        }


def layout_for(m_exp: int, n_exp: int, q: int) -> RegisterLayout:
    if q > MAX_DEPTH:
        raise Unsupported(f"bit depth {q} > {MAX_DEPTH} (grayscale only)")
    if m_exp < 1 or n_exp < 1 or q < 1:
        raise InvalidArgument(f"need m_exp, n_exp, q >= 1, got ({m_exp}, {n_exp}, {q})")
    sizes = dict(zip(SLICE_ORDER, (q, 2 * n_exp, m_exp, q, q, 3, 2, 1)))
    slices = {}
    start = 0
    for name in SLICE_ORDER:
        slices[name] = (start, start + sizes[name])
        start += sizes[name]
    return RegisterLayout(m_exp, n_exp, q, slices)


def _check_match(video: Video, layout: RegisterLayout):
    problems = validate_video(video)
    if problems:
        raise InvalidArgument("invalid video: " + "; ".join(problems))
    if (video.m_exp, video.n_exp, video.q) != (layout.m_exp, layout.n_exp, layout.q):
        raise InvalidArgument(
            f"video (m={video.m_exp}, n={video.n_exp}, q={video.q}) does not match layout "
            f"(m={layout.m_exp}, n={layout.n_exp}, q={layout.q})")


def _cell_basis(layout: RegisterLayout) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(frame j, position i, label bits) for every cell in (j, i) order."""
    n_cells = 1 << (2 * layout.n_exp)
    j, i = np.divmod(np.arange((1 << layout.m_exp) * n_cells, dtype=np.uint64), np.uint64(n_cells))
    labels = (i << np.uint64(layout.slices["pos"][0])) | (j << np.uint64(layout.slices["frame"][0]))
    return j, i, labels


def label_ensemble(layout: RegisterLayout) -> SparseState:
    """Uniform ensemble over every (frame, position) label with all other wires 0."""
    _, _, labels = _cell_basis(layout)
    return SparseState(layout.width, labels, np.full(len(labels), 1.0 / len(labels)))


def encode_video(video: Video, layout: RegisterLayout) -> SparseState:
    _check_match(video, layout)
    j, i, labels = _cell_basis(layout)
    colors = video.pixels.reshape(len(labels)).astype(np.uint64)
    basis = labels | (colors << np.uint64(layout.slices["color"][0]))
    return SparseState(layout.width, basis, np.full(len(basis), 1.0 / len(basis)))


def build_video_loader(video: Video, layout: RegisterLayout, target: str = "color") -> Circuit:
    """Preparation oracle |j>|i>|0> -> |j>|i>|pixel(j, i)> writing into ``target``.

    One fully-controlled NOT per set pixel bit, addressed by the frame and
    position registers.
    """
    _check_match(video, layout)
    address = layout.pos + layout.frame
    dest = layout.wires(target)
    circ = Circuit(layout.width)
    flat = video.pixels.reshape(-1)
    for cell, value in enumerate(flat):
        value = int(value)
        if not value:
            continue
        # address wires are pos then frame, so the label is the flat cell index
        controls = [(w, bool((cell >> k) & 1)) for k, w in enumerate(address)]
        for bit, wire in enumerate(dest):
            if (value >> bit) & 1:
                circ.append(mcx(controls, wire))
    return circ.freeze()


def decode_colors(state: SparseState, layout: RegisterLayout, target: str = "color") -> Video:
    """Read ``target`` back per (j, i); inverse of :func:`encode_video` on the color slice."""
    return _decode_cells(state, layout, layout.wires(target), layout.q)


def _decode_cells(state: SparseState, layout: RegisterLayout, wires, q: int) -> Video:
    frames = state.field(layout.frame).astype(np.int64)
    pos = state.field(layout.pos).astype(np.int64)
    values = state.field(wires).astype(np.int64)
    n_cells = 1 << (2 * layout.n_exp)
    cell = frames * n_cells + pos
    total = (1 << layout.m_exp) * n_cells
    out = np.full(total, -1, dtype=np.int64)
    for c, v in zip(cell, values):
        if out[c] not in (-1, v):
            j, i = divmod(int(c), n_cells)
            raise CorruptState(f"cell (j={j}, i={i}) carries both {out[c]} and {v}")
        out[c] = v
    if np.any(out < 0):
        missing = [divmod(int(c), n_cells) for c in np.flatnonzero(out < 0)]
        raise CorruptState(f"{len(missing)} cells absent from the state, first {missing[0]}")
    side = 1 << layout.n_exp
    return Video(layout.m_exp, layout.n_exp, q, out.reshape(1 << layout.m_exp, side, side))


def decode_segmentation(state: SparseState, layout: RegisterLayout) -> Video:
    """Binary video from the seg_out bit of each (j, i) component."""
    return _decode_cells(state, layout, [layout.seg_out], 1)


def decode_histogram(hist: Histogram, layout: RegisterLayout) -> Video:
    """Binary video from sampled counts over frame, position and seg_out wires.

    Presence is enough: every observed key for a cell must agree on the bit.
    """
    where = {w: k for k, w in enumerate(hist.qubits)}
    needed = layout.frame + layout.pos + [layout.seg_out]
    absent = [w for w in needed if w not in where]
    if absent:
        raise InvalidArgument(f"histogram does not cover wires {absent}")
    width = len(hist.qubits)

    def read(key: str, wires) -> int:
        return sum(int(key[width - 1 - where[w]]) << k for k, w in enumerate(wires))

    n_cells = 1 << (2 * layout.n_exp)
    side = 1 << layout.n_exp
    out = np.full((1 << layout.m_exp) * n_cells, -1, dtype=np.int64)
    for key, count in hist.counts.items():
        if not count:
            continue
        cell = read(key, layout.frame) * n_cells + read(key, layout.pos)
        bit = read(key, [layout.seg_out])
        if out[cell] not in (-1, bit):
            j, i = divmod(cell, n_cells)
            raise CorruptState(f"cell (j={j}, i={i}) observed with both result bits")
        out[cell] = bit
    if np.any(out < 0):
        raise IncompleteSampling(
            [(c // n_cells, (c % n_cells) // side, c % side) for c in map(int, np.flatnonzero(out < 0))])
    return Video(layout.m_exp, layout.n_exp, 1, out.reshape(1 << layout.m_exp, side, side))
