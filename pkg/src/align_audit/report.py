"""Serialization of audit results: alignment JSON, rankings CSV, run
metadata, and the rank-agreement figures.

The alignment JSON is the machine-readable product and must be
byte-identical across reruns with the same configuration, so nothing
time- or environment-dependent goes in it. Timestamps and library
versions belong to run_meta.json.
"""

from __future__ import annotations

import csv
import json
import math
import platform
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .plotting import rank_scatter_svg

ALIGNMENT_JSON = "alignment.json"
RANKINGS_CSV = "rankings.csv"
RUN_META_JSON = "run_meta.json"


def _jsonable(value):
    """Strict-JSON-safe copy of `value`; non-finite floats become strings."""
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            raise ValueError("NaN has no place in the report")
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, np.integer):
        return int(value)
    return value


def alignment_payload(report):
    """The alignment.json structure for an :class:`AlignmentReport`.

    Rows keep the original feature order. Methods that did not run simply
    contribute null columns.
    """
    methods = [m for m in ("tree", "shap") if m in report.rankings]
    smd_ranking = report.rankings["smd"]
    rows = []
    for i, name in enumerate(smd_ranking.feature_names):
        row = {
            "feature": name,
            "smd": smd_ranking.scores[i],
            "smd_rank": smd_ranking.ranks[i],
        }
        for m in methods:
            row[f"{m}_importance"] = report.rankings[m].scores[i]
            row[f"{m}_rank"] = report.rankings[m].ranks[i]
        for m in ("tree", "shap"):
            if m not in methods:
                row[f"{m}_importance"] = None
                row[f"{m}_rank"] = None
        rows.append(row)
    return _jsonable(
        {
            "dataset": report.dataset,
            "rho": {
                "smd_tree": report.rho.get("smd_tree"),
                "smd_shap": report.rho.get("smd_shap"),
            },
            "strength": {
                "smd_tree": report.strength.get("smd_tree", "undefined"),
                "smd_shap": report.strength.get("smd_shap", "undefined"),
            },
            "rankings": rows,
            "accuracies": report.accuracies,
            "config": report.config,
        }
    )


def write_alignment_json(report, out_dir):
    payload = alignment_payload(report)
    path = Path(out_dir) / ALIGNMENT_JSON
    text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def write_rankings_csv(report, out_dir):
    """Flat CSV mirror of the ranking rows, one line per feature."""
    payload = alignment_payload(report)
    path = Path(out_dir) / RANKINGS_CSV
    fields = ["feature", "smd", "smd_rank", "tree_importance", "tree_rank",
              "shap_importance", "shap_rank"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for row in payload["rankings"]:
            writer.writerow(["" if row[f] is None else row[f] for f in fields])
    return path


def write_run_meta(out_dir, *, config, decisions, encoding, timings,
                   extra=None):
    """Everything a reader needs to reproduce or question the run.

    Unlike the alignment report this may carry timestamps and version
    strings, since nobody diffs it for determinism.
    """
    meta = {
        "written_at": datetime.now(timezone.utc).isoformat(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "config": config,
        "decisions": decisions,
        "encoding": encoding,
        "stage_seconds": timings,
    }
    if extra:
        meta.update(extra)
    path = Path(out_dir) / RUN_META_JSON
    path.write_text(
        json.dumps(_jsonable(meta), indent=2, sort_keys=True, allow_nan=False) + "\n",
        encoding="utf-8",
    )
    return path


def write_rank_scatter(report, method, out_dir):
    """SVG of the data-level ranking against one model's ranking."""
    smd_ranking = report.rankings["smd"]
    other = report.rankings[method]
    rho = report.rho.get(f"smd_{method}")
    rho_text = "undefined" if rho is None else f"{rho:.3f}"
    svg = rank_scatter_svg(
        smd_ranking.ranks,
        other.ranks,
        smd_ranking.feature_names,
        "rank by effect size",
        f"rank by {method} importance",
        f"{report.dataset}: effect size vs {method} (spearman {rho_text})",
    )
    path = Path(out_dir) / f"rank_scatter_{method}.svg"
    path.write_text(svg, encoding="utf-8")
    return path
