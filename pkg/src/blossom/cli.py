"""Command line entry point: ``blossom cluster | evaluate | synth``.

Exit status is 0 on success, 1 on input or validation errors and 2 on
usage errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import report as report_io
from .annotation_io import Mode, parse_names, read_label_dir, write_label_dir
from .clustering import KmeansConfig
from .errors import BlossomError
from .evaluation import evaluate_dataset
from .pipeline import PipelineConfig, render_overlay, run_sequence
from .synth import SceneSpec, generate_scene, perturb_detections, scene_sidecar

SEED_ENV = "BLOSSOM_SEED"


class UsageError(Exception):
    pass


def _pair(text: str, sep: str, kind=float):
    parts = text.lower().split(sep)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two values separated by {sep!r}, got {text!r}")
    try:
        return kind(parts[0]), kind(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid value {text!r}") from None


def canvas(text: str) -> tuple[int, int]:
    return _pair(text, "x", int)


def box_size(text: str) -> tuple[float, float]:
    return _pair(text, "x", float)


def member_range(text: str) -> tuple[int, int]:
    return _pair(text, "..", int)


def _seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blossom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cluster", help="cluster detections of every frame in a label directory")
    c.add_argument("labels_dir", type=Path)
    c.add_argument("--k-max", type=int, default=20)
    c.add_argument("--k1-threshold", type=float, default=0.0)
    c.add_argument("--category", action="append", default=None,
                   help="keep only this category (name or index); repeatable")
    c.add_argument("--max-items", type=int, default=None)
    c.add_argument("--seed", type=int, default=None, help=f"k-means seed (default ${SEED_ENV}, else 0)")
    c.add_argument("--restarts", type=int, default=10)
    c.add_argument("--names", type=Path, default=None, help="category names file")
    c.add_argument("--mode", choices=["auto", "ground_truth", "prediction"], default="auto")
    c.add_argument("--jobs", type=int, default=1, help="frames processed in parallel")
    c.add_argument("--out", type=Path, default=None, help="JSON report (default: stdout)")
    c.add_argument("--csv", type=Path, default=None)
    c.add_argument("--render", type=Path, default=None, help="directory for SVG overlays")
    c.add_argument("--canvas", type=canvas, default=(640, 640), help="overlay size WxH")

    e = sub.add_parser("evaluate", help="score prediction labels against ground truth")
    e.add_argument("--pred", type=Path, required=True)
    e.add_argument("--gt", type=Path, required=True)
    e.add_argument("--iou", type=float, default=0.5)
    e.add_argument("--conf", type=float, default=0.25)
    e.add_argument("--names", type=Path, default=None)
    e.add_argument("--out", type=Path, default=None, help="JSON report (default: stdout)")
    e.add_argument("--csv", type=Path, default=None, help="one-row model,mAP@0.5,precision,recall table")
    e.add_argument("--model-tag", default="model")

    s = sub.add_parser("synth", help="write synthetic orchard frames with known clusters")
    s.add_argument("--clusters", type=int, required=True)
    s.add_argument("--members", type=member_range, required=True, help="member count range A..B")
    s.add_argument("--spread", type=float, required=True)
    s.add_argument("--separation", type=float, required=True)
    s.add_argument("--opened-frac", type=float, default=0.1)
    s.add_argument("--box", type=box_size, default=(0.03, 0.03), help="box size WxH, normalized")
    s.add_argument("--frames", type=int, default=10)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out", type=Path, required=True)
    s.add_argument("--pred-out", type=Path, default=None, help="also write perturbed predictions here")
    s.add_argument("--jitter", type=float, default=0.0)
    s.add_argument("--drop-rate", type=float, default=0.0)
    s.add_argument("--spurious-rate", type=float, default=0.0)
    return parser


def _names(path: Path | None):
    if path is None:
        return None
    return parse_names(path.read_text(encoding="utf-8"))


def _category_filter(values, names) -> frozenset[int] | None:
    if not values:
        return None
    keep = set()
    for v in values:
        if v in names:
            keep.add(names.index(v))
        elif v.isdigit() and int(v) < len(names):
            keep.add(int(v))
        else:
            raise UsageError(f"--category {v!r}: not one of {list(names)} or their indices")
    return frozenset(keep)


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def cmd_cluster(args) -> int:
    mode = None if args.mode == "auto" else Mode(args.mode)
    frames, names = read_label_dir(args.labels_dir, mode, _names(args.names))
    config = PipelineConfig(
        k_max=args.k_max,
        k1_threshold=args.k1_threshold,
        category_filter=_category_filter(args.category, names),
        kmeans=KmeansConfig(restarts=args.restarts, seed=_seed(args.seed)),
        max_items_warning=args.max_items,
        names=names,
    )
    reports = run_sequence(frames, config, jobs=args.jobs)
    _write(args.out, report_io.dumps(report_io.cluster_report_dict(reports, config)))
    if args.csv is not None:
        _write(args.csv, report_io.cluster_csv(reports, names))
    if args.render is not None:
        args.render.mkdir(parents=True, exist_ok=True)
        width, height = args.canvas
        for frame, rep in zip(frames, reports):
            (args.render / f"{frame.frame_id}.svg").write_text(
                render_overlay(frame, rep, width, height), encoding="utf-8")
    if args.out is not None:
        print(f"clustered {len(reports)} frames -> {args.out}", file=sys.stderr)
    return 0


def cmd_evaluate(args) -> int:
    names = _names(args.names)
    gt, gt_names = read_label_dir(args.gt, Mode.GROUND_TRUTH, names)
    pred, _ = read_label_dir(args.pred, Mode.PREDICTION, names if names is not None else gt_names)
    result = evaluate_dataset(pred, gt, args.iou, args.conf)
    _write(args.out, report_io.dumps(report_io.eval_report_dict(result)))
    if args.csv is not None:
        _write(args.csv, report_io.eval_table_csv(result, args.model_tag))
    if args.out is not None:
        print(f"mAP@{args.iou:g}={result.map_at_50:.6f} precision={result.precision:.6f} "
              f"recall={result.recall:.6f}", file=sys.stderr)
    return 0


def cmd_synth(args) -> int:
    seed = _seed(args.seed)
    if args.frames < 1:
        raise ValueError("--frames must be >= 1")
    scenes = []
    for i in range(args.frames):
        frame_seed = int(np.random.SeedSequence([seed, i]).generate_state(1, np.uint64)[0])
        spec = SceneSpec(args.clusters, tuple(args.members), args.spread, args.separation,
                         tuple(args.box), args.opened_frac, frame_seed)
        scenes.append(generate_scene(spec, frame_id=f"frame_{i:04d}"))
    write_label_dir([s.frame for s in scenes], args.out, Mode.GROUND_TRUTH)
    for scene in scenes:
        (args.out / f"{scene.frame.frame_id}.json").write_text(
            report_io.dumps(scene_sidecar(scene)), encoding="utf-8")
    if args.pred_out is not None:
        preds = []
        for i, scene in enumerate(scenes):
            pseed = int(np.random.SeedSequence([seed, i, 1]).generate_state(1, np.uint64)[0])
            preds.append(perturb_detections(scene, args.jitter, args.drop_rate, args.spurious_rate, pseed))
        write_label_dir(preds, args.pred_out, Mode.PREDICTION)
    print(f"wrote {len(scenes)} frames to {args.out}", file=sys.stderr)
    return 0


COMMANDS = {"cluster": cmd_cluster, "evaluate": cmd_evaluate, "synth": cmd_synth}


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"blossom: error: {err}", file=sys.stderr)
        return 2
    except (BlossomError, ValueError, OSError) as err:
        print(f"blossom: error: {err}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
