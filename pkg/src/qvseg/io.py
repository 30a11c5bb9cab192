"""Video manifests (JSON) and PGM frame directories."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .encoding import Video
from .errors import InvalidArgument

FRAME_PATTERN = "frame_{:04d}.pgm"


def _tokens(data: bytes, count: int, pos: int = 0) -> tuple[list[bytes], int]:
    """First ``count`` whitespace-separated header tokens, skipping # comments."""
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise InvalidArgument("truncated PGM header")
        out.append(data[start:pos])
    return out, pos


def parse_pgm(data: bytes) -> tuple[np.ndarray, int]:
    """(pixels[Y, X], maxval) from P2 or P5 bytes."""
    try:
        (magic, w, h, maxval), pos = _tokens(data, 4)
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise InvalidArgument(f"bad PGM header: {exc}") from exc
    if not 0 < maxval < 65536:
        raise InvalidArgument(f"PGM maxval {maxval} out of range")
    if magic == b"P2":
        values, _ = _tokens(data, width * height, pos)
        pixels = np.array([int(v) for v in values], dtype=np.int64)
    elif magic == b"P5":
        raw = data[pos + 1:]  # exactly one whitespace byte ends the header
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = width * height * dtype.itemsize
        if len(raw) < need:
            raise InvalidArgument(f"PGM raster truncated: {len(raw)} of {need} bytes")
        pixels = np.frombuffer(raw[:need], dtype=dtype).astype(np.int64)
    else:
        raise InvalidArgument(f"not a grayscale PGM (magic {magic!r})")
    if pixels.size and pixels.max() > maxval:
        raise InvalidArgument(f"PGM sample exceeds maxval {maxval}")
    return pixels.reshape(height, width), maxval


def read_pgm(path) -> tuple[np.ndarray, int]:
    return parse_pgm(Path(path).read_bytes())


def format_pgm(pixels, maxval: int, plain: bool = False) -> bytes:
    pixels = np.asarray(pixels, dtype=np.int64)
    height, width = pixels.shape
    header = f"{'P2' if plain else 'P5'}\n{width} {height}\n{maxval}\n".encode()
    if plain:
        rows = "\n".join(" ".join(str(v) for v in row) for row in pixels)
        return header + rows.encode() + b"\n"
    dtype = ">u2" if maxval > 255 else "u1"
    return header + pixels.astype(dtype).tobytes()


def write_pgm(path, pixels, maxval: int, plain: bool = False):
    Path(path).write_bytes(format_pgm(pixels, maxval, plain))


def load_pgm_dir(path) -> Video:
    files = sorted(Path(path).glob("frame_*.pgm"))
    if not files:
        raise InvalidArgument(f"no frame_*.pgm files in {path}")
    frames, maxvals = zip(*(read_pgm(f) for f in files))
    if len(set(maxvals)) != 1:
        raise InvalidArgument(f"frames disagree on maxval: {sorted(set(maxvals))}")
    maxval = maxvals[0]
    q = (maxval + 1).bit_length() - 1
    if (1 << q) - 1 != maxval:
        raise InvalidArgument(f"maxval {maxval} is not 2**q - 1")
    if len({f.shape for f in frames}) != 1:
        raise InvalidArgument("frames have different sizes")
    return Video.from_frames(np.stack(frames), q)


def load_manifest(path) -> Video:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"{path}: not valid JSON ({exc})") from exc
    return Video.from_manifest(data)


def load_video(path) -> Video:
    path = Path(path)
    if not path.exists():
        raise InvalidArgument(f"input {path} does not exist")
    return load_pgm_dir(path) if path.is_dir() else load_manifest(path)


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def save_manifest(path, video: Video):
    Path(path).write_text(dumps(video.to_manifest()))


def write_frames(directory, video: Video, scale: bool = False, plain: bool = False) -> list[Path]:
    """One PGM per frame; binary videos may be scaled to 0/255 for viewing."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    maxval = (1 << video.q) - 1
    pixels = video.pixels
    if scale and video.q == 1:
        maxval, pixels = 255, pixels * 255
    paths = []
    for j, frame in enumerate(pixels):
        p = directory / FRAME_PATTERN.format(j)
        write_pgm(p, frame, maxval, plain)
        paths.append(p)
    return paths
