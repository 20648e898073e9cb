"""Canonical JSON and CSV forms of cluster and evaluation reports.

JSON has sorted keys and every float printed with six fractional digits so
that equal reports are equal bytes.
"""
from __future__ import annotations

import csv
import io
import json

from .evaluation import EvalReport, precision, recall


def format_float(value: float) -> str:
    text = f"{value:.6f}"
    return "0.000000" if text == "-0.000000" else text


def dumps(obj, indent: int = 2) -> str:
    return _emit(obj, indent, 0) + "\n"


def _emit(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if obj != obj or obj in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite number {obj} cannot be written to JSON")
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = sorted((str(k), v) for k, v in obj.items())
        body = ",\n".join(f"{pad}{json.dumps(k)}: {_emit(v, indent, level + 1)}" for k, v in items)
        return "{\n" + body + "\n" + close + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        body = ",\n".join(pad + _emit(v, indent, level + 1) for v in obj)
        return "[\n" + body + "\n" + close + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def frame_report_dict(report) -> dict:
    return {
        "frame_id": report.frame_id,
        "chosen_k": report.chosen_k,
        "detection_count": report.detection_count,
        "sweep_scores": {str(k): v for k, v in report.sweep_scores.items()},
        "clusters": [
            {
                "id": c.id,
                "centroid": {"x": c.centroid.x, "y": c.centroid.y},
                "member_indices": list(c.member_indices),
                "member_count": len(c.member_indices),
                "category_counts": dict(c.category_counts),
                "warnings": list(c.warnings),
            }
            for c in report.clusters
        ],
    }


def cluster_report_dict(reports, config) -> dict:
    return {
        "config": {
            "k_max": config.k_max,
            "k1_threshold": config.k1_threshold,
            "category_filter": None if config.category_filter is None else sorted(config.category_filter),
            "max_items_warning": config.max_items_warning,
            "kmeans": {
                "restarts": config.kmeans.restarts,
                "max_iterations": config.kmeans.max_iterations,
                "convergence_epsilon": repr(config.kmeans.convergence_epsilon),
                "seed": config.kmeans.seed,
            },
            "categories": list(config.names),
        },
        "frames": [frame_report_dict(r) for r in reports],
    }


def cluster_csv(reports, names) -> str:
    """One row per cluster: frame_id, cluster_id, cx, cy, member_count, then one count per category."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["frame_id", "cluster_id", "cx", "cy", "member_count", *names])
    for r in reports:
        for c in r.clusters:
            writer.writerow([r.frame_id, c.id, format_float(c.centroid.x), format_float(c.centroid.y),
                             len(c.member_indices), *(c.category_counts.get(n, 0) for n in names)])
    return buf.getvalue()


def eval_report_dict(report: EvalReport) -> dict:
    return {
        "map_at_50": report.map_at_50,
        "precision": report.precision,
        "recall": report.recall,
        "iou_threshold": report.iou_threshold,
        "confidence_threshold": report.confidence_threshold,
        "per_category": {
            cat.name: {
                "index": cat.index,
                "ap": res.ap,
                "true_positive": res.counts.true_positive,
                "false_positive": res.counts.false_positive,
                "false_negative": res.counts.false_negative,
                "precision": precision(res.counts),
                "recall": recall(res.counts),
                "pr_curve": [list(p) for p in res.pr_curve.points],
            }
            for cat, res in sorted(report.per_category.items())
        },
    }


TABLE_HEADER = ("model", "mAP@0.5", "precision", "recall")


def table_csv(rows) -> str:
    """Scoreboard CSV; ``rows`` are (model_tag, map, precision, recall)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_HEADER)
    for tag, m, p, r in rows:
        writer.writerow([tag, format_float(m), format_float(p), format_float(r)])
    return buf.getvalue()


def eval_table_csv(report: EvalReport, model_tag: str = "model") -> str:
    return table_csv([(model_tag, report.map_at_50, report.precision, report.recall)])
