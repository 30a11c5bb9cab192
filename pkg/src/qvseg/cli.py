"""Command line: ``qvseg segment|compare|cost|blocks describe``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import blocks
from .classical import BOUNDARIES, classical_three_frame_diff
from .core import quantum_cost
from .encoding import validate_video
from .errors import CorruptState, IncompleteSampling, InvalidArgument, QVSegError, Unsupported
from .io import dumps, load_video, write_frames
from .pipeline import DEFAULT_SHOTS, MODES, qubit_and_cost_summary, segment_video

EXIT_OK, EXIT_DIFF, EXIT_INPUT, EXIT_PARAM, EXIT_CORRUPT = 0, 1, 2, 3, 4

PUBLISHED_COMPARATOR = {"ancillas": 3, "cost": "7n+6", "slope": 7, "intercept": 6}
LITERATURE_COMPARATORS = [
    {"name": "reference-1", "ancillas": "3n-1", "cost": "30n-15", "distinguishable": 3},
    {"name": "reference-2", "ancillas": "1", "cost": "12n-8", "distinguishable": 2},
    {"name": "reference-3", "ancillas": "5", "cost": "28n-15", "distinguishable": 3},
]


class ParamError(QVSegError):
    pass


def parse_threshold(text: str, q: int) -> int:
    """Decimal, ``0b``-prefixed, or a q-character binary string such as ``001``."""
    text = text.strip()
    try:
        if text.lower().startswith("0b"):
            value = int(text[2:], 2)
        elif q > 1 and len(text) == q and set(text) <= {"0", "1"}:
            value = int(text, 2)
        else:
            value = int(text)
    except ValueError:
        raise ParamError(f"cannot parse threshold {text!r}") from None
    if not 0 <= value < (1 << q):
        raise ParamError(f"threshold {value} outside [0, {(1 << q) - 1}] for q={q}")
    return value


def parse_range(text: str) -> list[int]:
    """``3``, ``1-4`` or ``1,2,5``."""
    try:
        if "-" in text:
            lo, hi = (int(v) for v in text.split("-", 1))
            return list(range(lo, hi + 1))
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise ParamError(f"bad range {text!r}") from None


def _load(args):
    try:
        video = load_video(args.input)
    except (InvalidArgument, OSError) as exc:
        raise _InputError(str(exc)) from exc
    problems = validate_video(video)
    if problems:
        raise _InputError("invalid video: " + "; ".join(problems))
    return video


class _InputError(QVSegError):
    pass


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_segment(args) -> int:
    video = _load(args)
    threshold = parse_threshold(args.threshold, video.q)
    if args.shots < 1:
        raise ParamError("shots must be >= 1")
    result = segment_video(video, threshold, mode=args.mode, shots=args.shots, seed=args.seed,
                           trajectories=args.trajectories)
    out = _out_dir(args)
    write_frames(out / "frames", result.result_video, scale=args.binary_scale)
    (out / "histogram.json").write_text(dumps(result.histogram.to_dict()))
    (out / "cost.json").write_text(dumps(result.cost.to_dict()))
    (out / "layout.json").write_text(dumps(result.layout.to_dict()))
    (out / "result.json").write_text(dumps(result.to_dict()))
    foreground = int(result.result_video.pixels.sum())
    line = (f"width={result.layout.width} compact_width={result.layout.compact_width} "
            f"total_cost={result.cost.total_cost} foreground={foreground}")
    if result.dense_tv is not None:
        line += f" dense_tv={result.dense_tv:.4f}"
    print(line)
    return EXIT_OK


def cmd_compare(args) -> int:
    video = _load(args)
    threshold = parse_threshold(args.threshold, video.q)
    quantum = segment_video(video, threshold, shots=None).result_video
    if args.inject_fault:
        j, y, x = (int(v) for v in args.inject_fault.split(","))
        quantum.pixels[j, y, x] ^= 1
    classical = classical_three_frame_diff(video, threshold, args.boundary)
    mismatches = [[int(j), int(y), int(x)] for j, y, x in zip(*(quantum.pixels != classical.pixels).nonzero())]
    report = {"bit_order": "lsb0", "boundary": args.boundary, "threshold": threshold,
              "mismatches": mismatches, "count": len(mismatches)}
    (_out_dir(args) / "diff.json").write_text(dumps(report))
    print(f"mismatches={len(mismatches)} boundary={args.boundary}")
    return EXIT_OK if not mismatches else EXIT_DIFF


def comparator_fit(qs) -> dict:
    """Exact affine fit of comparator cost over ``qs``."""
    costs = {}
    for q in qs:
        a, b, anc, y = blocks._demo_wires(q)
        costs[q] = quantum_cost(blocks.build_comparator(a, b, anc, y)).total_cost
    q0, q1 = min(costs), max(costs)
    slope = (costs[q1] - costs[q0]) / (q1 - q0) if q1 > q0 else 0.0
    intercept = costs[q0] - slope * q0
    exact = all(abs(c - (slope * q + intercept)) < 1e-9 for q, c in costs.items())
    return {"costs": {str(q): c for q, c in costs.items()}, "slope": slope,
            "intercept": intercept, "exact": exact}


def cmd_cost(args) -> int:
    ms, ns, qs = parse_range(args.m), parse_range(args.n), parse_range(args.q)
    fit = comparator_fit(parse_range(args.comparator_q))
    rows = []
    for m in ms:
        for n in ns:
            for q in qs:
                try:
                    threshold = min(args.threshold, (1 << q) - 1)
                    rep = qubit_and_cost_summary(m, n, q, threshold)
                except (InvalidArgument, Unsupported) as exc:
                    raise ParamError(str(exc)) from exc
                rows.append({"m_exp": m, "n_exp": n, "q": q, "width": rep.qubit_count,
                             "compact_width": rep.compact_qubit_count, "total_cost": rep.total_cost,
                             "gate_count": rep.extra["gate_count"], "per_block": rep.per_block})
    print(f"comparator cost = {fit['slope']:g}q {fit['intercept']:+g} "
          f"(exact={fit['exact']}); published 7n+6")
    for ref in LITERATURE_COMPARATORS:
        print(f"  {ref['name']}: cost {ref['cost']}, ancillas {ref['ancillas']}")
    print(f"{'m':>3} {'n':>3} {'q':>3} {'width':>6} {'compact':>8} {'cost':>7} {'gates':>6}")
    for r in rows:
        print(f"{r['m_exp']:>3} {r['n_exp']:>3} {r['q']:>3} {r['width']:>6} {r['compact_width']:>8} "
              f"{r['total_cost']:>7} {r['gate_count']:>6}")
    if args.json:
        Path(args.json).write_text(dumps({
            "bit_order": "lsb0",
            "comparator": {**fit, "published": PUBLISHED_COMPARATOR,
                           "literature": LITERATURE_COMPARATORS},
            "pipeline": rows,
        }))
    return EXIT_OK


def cmd_blocks(args) -> int:
    try:
        print(blocks.describe(args.name, q=args.q, m=args.m, threshold=args.threshold))
    except InvalidArgument as exc:
        raise ParamError(str(exc)) from exc
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qvseg", description="Quantum three-frame-difference video segmentation")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="PGM frame directory or JSON manifest")
        p.add_argument("--threshold", default="1", help="decimal, 0b101, or q-bit string like 001")
        p.add_argument("--out", default="out")

    seg = sub.add_parser("segment", help="run the quantum pipeline")
    common(seg)
    seg.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    seg.add_argument("--seed", type=int, default=0)
    seg.add_argument("--mode", choices=MODES, default="sparse")
    seg.add_argument("--trajectories", type=int, default=4096, help="dense-check sample count")
    seg.add_argument("--binary-scale", action="store_true", help="write 0/255 instead of 0/1")
    seg.set_defaults(func=cmd_segment)

    cmp_ = sub.add_parser("compare", help="quantum vs classical result")
    common(cmp_)
    cmp_.add_argument("--boundary", choices=BOUNDARIES, default="cyclic")
    cmp_.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    cmp_.set_defaults(func=cmd_compare)

    cost = sub.add_parser("cost", help="cost and qubit tables")
    cost.add_argument("--m", default="1-4")
    cost.add_argument("--n", default="1-4")
    cost.add_argument("--q", default="3")
    cost.add_argument("--threshold", type=int, default=1)
    cost.add_argument("--comparator-q", default="2-8")
    cost.add_argument("--json", default=None)
    cost.set_defaults(func=cmd_cost)

    blk = sub.add_parser("blocks", help="block documentation")
    blk_sub = blk.add_subparsers(dest="action", required=True)
    desc = blk_sub.add_parser("describe")
    desc.add_argument("name", choices=blocks.BLOCK_NAMES)
    desc.add_argument("--q", type=int, default=3)
    desc.add_argument("--m", type=int, default=2)
    desc.add_argument("--threshold", type=int, default=1)
    desc.set_defaults(func=cmd_blocks)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CorruptState, IncompleteSampling) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except (ParamError, InvalidArgument, Unsupported) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
