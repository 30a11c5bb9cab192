"""Classical three-frame difference, used as the bit-exact reference."""

from __future__ import annotations

import numpy as np

from .encoding import Video, validate_video
from .errors import InvalidArgument

BOUNDARIES = ("cyclic", "clamp")


def abs_diff_frames(f_a, f_b) -> np.ndarray:
    f_a = np.asarray(f_a, dtype=np.int64)
    f_b = np.asarray(f_b, dtype=np.int64)
    if f_a.shape != f_b.shape:
        raise InvalidArgument(f"frame shapes differ: {f_a.shape} vs {f_b.shape}")
    return np.abs(f_a - f_b)


def threshold_frame(d, threshold: int) -> np.ndarray:
    return (np.asarray(d) >= threshold).astype(np.int64)


def neighbours(j: int, n_frames: int, boundary: str = "cyclic") -> tuple[int, int]:
    if boundary == "cyclic":
        return (j - 1) % n_frames, (j + 1) % n_frames
    if boundary == "clamp":
        return max(j - 1, 0), min(j + 1, n_frames - 1)
    raise InvalidArgument(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")


def classical_three_frame_diff(video: Video, threshold: int, boundary: str = "cyclic") -> Video:
    """Foreground where a pixel differs by >= threshold from both neighbouring frames.

    With ``clamp`` the first and last frames are their own outer neighbour,
    so those frames come out empty.
    """
    problems = validate_video(video)
    if problems:
        raise InvalidArgument("invalid video: " + "; ".join(problems))
    frames = video.pixels
    n = len(frames)
    out = np.zeros_like(frames)
    for j in range(n):
        prev, nxt = neighbours(j, n, boundary)
        d1 = threshold_frame(abs_diff_frames(frames[j], frames[prev]), threshold)
        d2 = threshold_frame(abs_diff_frames(frames[j], frames[nxt]), threshold)
        out[j] = d1 & d2
    return Video(video.m_exp, video.n_exp, 1, out)
