"""Full segmentation circuit: copy, frame shifts, absolute differences,
binarization and AND, plus execution and cost reporting.

The QVNEQR state carries one pixel value per (frame, position) component,
and no fixed circuit can move a value from one component into another. The
neighbouring frames are therefore fetched with the preparation oracle,
addressed through a cycle-shifted frame register: shift, load, shift back.
The oracle blocks are labelled ``prep`` and, like the initial encoding, are
left out of the processing cost.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blocks import (build_abs_subtractor, build_and, build_binarization, build_copy,
                     build_cycle_shift)
from .core import (Circuit, CostReport, Histogram, SparseState, distribution, measure,
                   quantum_cost, reset, run_sparse, sample_dense, total_variation)
from .encoding import (RegisterLayout, Video, build_video_loader, decode_segmentation,
                       encode_video, layout_for, validate_video)
from .errors import InvalidArgument

DEFAULT_SHOTS = 1024
DENSE_TV_LIMIT = 0.05
PREP = "prep"
MODES = ("sparse", "dense-check")


def _check_threshold(threshold: int, q: int):
    if not 0 <= threshold < (1 << q):
        raise InvalidArgument(f"threshold {threshold} outside [0, {(1 << q) - 1}] for q={q}")


def build_segmentation_circuit(m_exp: int, n_exp: int, q: int, threshold: int,
                               video: Video | None = None) -> tuple[Circuit, RegisterLayout]:
    """Segmentation circuit over the layout for (m_exp, n_exp, q).

    Without ``video`` the neighbour loads are left out, which gives the
    video-independent processing circuit used for costing. With it, the
    circuit is executable on ``encode_video(video, layout)``.
    """
    layout = layout_for(m_exp, n_exp, q)
    _check_threshold(threshold, q)
    if video is not None and (video.m_exp, video.n_exp, video.q) != (m_exp, n_exp, q):
        raise InvalidArgument("video parameters do not match (m_exp, n_exp, q)")
    L = layout
    circ = Circuit(L.width)

    def fetch(direction: int, target: str):
        # label the frame register j + direction, read that frame, restore j
        circ.extend(build_cycle_shift(L.frame, direction), "CT")
        if video is not None:
            circ.extend(build_video_loader(video, L, target), PREP)
        circ.extend(build_cycle_shift(L.frame, -direction), "CT")

    # working copy of the current frame; the first QAS overwrites it with max()
    circ.extend(build_copy(L.color, L.diff_next), "copy")
    fetch(-1, "diff_prev")
    circ.extend(build_abs_subtractor(L.diff_next, L.diff_prev, L.anc, L.cmp_out), "QAS")
    circ.extend([reset(w) for w in L.diff_next], "reset")
    fetch(+1, "diff_next")
    circ.extend(build_abs_subtractor(L.color, L.diff_next, L.anc, L.cmp_out), "QAS")
    circ.extend(build_binarization(L.diff_prev, threshold, L.anc, L.cmp_out), "QB")
    circ.extend(build_binarization(L.diff_next, threshold, L.anc, L.cmp_out), "QB")
    circ.extend(build_and(L.diff_prev[0], L.diff_next[0], L.seg_out), "AND")
    return circ.freeze(), layout


def qubit_and_cost_summary(m_exp: int, n_exp: int, q: int, threshold: int = 1) -> CostReport:
    circ, layout = build_segmentation_circuit(m_exp, n_exp, q, threshold)
    report = quantum_cost(circ)
    report.compact_qubit_count = layout.compact_width
    report.extra = {"m_exp": m_exp, "n_exp": n_exp, "q": q, "threshold": threshold,
                    "gate_count": len(circ)}
    return report


@dataclass
class SegmentationResult:
    result_video: Video
    cost: CostReport
    layout: RegisterLayout
    state: SparseState
    histogram: Histogram | None = None
    dense_histogram: Histogram | None = None
    dense_tv: float | None = None

    def to_dict(self) -> dict:
        out = {
            "bit_order": "lsb0",
            "result": self.result_video.to_manifest(),
            "histogram": self.histogram.to_dict() if self.histogram else None,
            "cost": self.cost.to_dict(),
            "layout": self.layout.to_dict(),
        }
        if self.dense_tv is not None:
            out["dense_check"] = {"total_variation": self.dense_tv,
                                  "trajectories": self.dense_histogram.shots,
                                  "limit": DENSE_TV_LIMIT}
        return out


def segment_video(video: Video, threshold: int, mode: str = "sparse",
                  shots: int | None = DEFAULT_SHOTS, seed=0,
                  trajectories: int = 4096) -> SegmentationResult:
    """Run the circuit on the encoded video and decode the foreground mask.

    ``dense-check`` additionally samples state-vector trajectories and
    records their total-variation distance from the exact distribution on
    the measured wires.
    """
    if mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}, got {mode!r}")
    problems = validate_video(video)
    if problems:
        raise InvalidArgument("invalid video: " + "; ".join(problems))
    _check_threshold(threshold, video.q)
    circ, layout = build_segmentation_circuit(video.m_exp, video.n_exp, video.q, threshold, video)
    initial = encode_video(video, layout)
    final = run_sparse(circ, initial)
    result = SegmentationResult(
        result_video=decode_segmentation(final, layout),
        cost=qubit_and_cost_summary(video.m_exp, video.n_exp, video.q, threshold),
        layout=layout,
        state=final,
    )
    wires = layout.measured_wires()
    if shots:
        result.histogram = measure(final, wires, shots, seed)
    if mode == "dense-check":
        result.dense_histogram = sample_dense(circ, initial, wires, trajectories, seed)
        result.dense_tv = total_variation(result.dense_histogram.probabilities(),
                                          distribution(final, wires))
    return result
