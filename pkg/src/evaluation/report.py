# src/evaluation/report.py
# Aligned text tables plus JSON / CSV / Markdown report writers

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from src.config import SCHEMA_VERSION
from src.evaluation.compare import ComparisonReport
from src.utils import atomic_write_text, write_json

logger = logging.getLogger(__name__)

ANNOTATION_GT_NOTE = (
    "Ground truth for annotated cases is the annotation disc (centre, radius); "
    "it only approximates the true mass outline."
)


def fmt(value: Optional[float], digits: int = 4) -> str:
    return "n/a" if value is None else f"{value:.{digits}f}"


def text_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Left-aligned columns separated by two spaces, with a dashed rule under the header."""
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    line = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()  # noqa: E731
    out = [line(header), line(["-" * w for w in widths])]
    out.extend(line(row) for row in rows)
    return "\n".join(out) + "\n"


# -------- comparison --------

COMPARISON_HEADER = ("case", "method", "status", "dice", "jaccard", "hausdorff")


def comparison_table(reports: Sequence[ComparisonReport]) -> str:
    rows = []
    for report in reports:
        for r in report.rows:
            status = r.status if r.error is None else f"failed ({r.error.split(':')[0]})"
            rows.append([report.case_id, r.method, status, fmt(r.dice), fmt(r.jaccard), fmt(r.hausdorff, 2)])
    return text_table(COMPARISON_HEADER, rows)


def comparison_summary(
    reports: Sequence[ComparisonReport], means: Dict[str, Any], record_timings: bool = False
) -> Dict[str, Any]:
    summary = {
        "schema_version": SCHEMA_VERSION,
        "num_cases": len(reports),
        "methods": means,
        "cases": [r.to_dict(record_timings) for r in reports],
    }
    if any(r.ground_truth == "annotation" for r in reports):
        summary["note"] = ANNOTATION_GT_NOTE
    return summary


def write_comparison_report(
    out_dir: Path,
    reports: Sequence[ComparisonReport],
    means: Dict[str, Any],
    record_timings: bool = False,
    stem: str = "comparison",
) -> List[Path]:
    json_path = out_dir / f"{stem}.json"
    txt_path = out_dir / f"{stem}.txt"
    md_path = out_dir / f"{stem}.md"

    write_json(json_path, comparison_summary(reports, means, record_timings))
    atomic_write_text(txt_path, comparison_table(reports))

    md = ["# Segmentation comparison\n\n", f"- Cases: {len(reports)}\n\n", "## Mean scores\n\n"]
    md.append("| method | cases | failed | dice | jaccard | hausdorff |\n|---|---|---|---|---|---|\n")
    for method, m in means.items():
        md.append(
            f"| {method} | {m['cases']} | {m['failed']} | {fmt(m['dice'])} | "
            f"{fmt(m['jaccard'])} | {fmt(m['hausdorff'], 2)} |\n"
        )
    if any(r.ground_truth == "annotation" for r in reports):
        md.append(f"\n{ANNOTATION_GT_NOTE}\n")
    atomic_write_text(md_path, "".join(md))

    for path in (json_path, txt_path, md_path):
        logger.info(f"Wrote: {path}")
    return [json_path, txt_path, md_path]


# -------- screening --------

SCREENING_HEADER = ("source", "n", "TP", "FP", "TN", "FN", "sensitivity", "specificity", "fnr", "accuracy")


def screening_table(results: Dict[str, Dict[str, Any]]) -> str:
    rows = []
    for name, res in results.items():
        cm, m = res["confusion"], res["metrics"]
        rows.append([
            name, str(res["n"]), str(cm["tp"]), str(cm["fp"]), str(cm["tn"]), str(cm["fn"]),
            fmt(m["sensitivity"]), fmt(m["specificity"]), fmt(m["fnr"]), fmt(m["accuracy"]),
        ])
    return text_table(SCREENING_HEADER, rows)


def write_screening_report(out_dir: Path, results: Dict[str, Dict[str, Any]], stem: str = "screening") -> List[Path]:
    json_path = out_dir / f"{stem}.json"
    csv_path = out_dir / f"{stem}.csv"
    txt_path = out_dir / f"{stem}.txt"
    md_path = out_dir / f"{stem}.md"

    write_json(json_path, {"schema_version": SCHEMA_VERSION, "results": results})

    csv = ["source,n,tp,fp,tn,fn,sensitivity,specificity,fnr,accuracy,precision\n"]
    for name, res in results.items():
        cm, m = res["confusion"], res["metrics"]
        cells = [m[k] for k in ("sensitivity", "specificity", "fnr", "accuracy", "precision")]
        csv.append(
            f"{name},{res['n']},{cm['tp']},{cm['fp']},{cm['tn']},{cm['fn']},"
            + ",".join("" if c is None else repr(c) for c in cells)
            + "\n"
        )
    atomic_write_text(csv_path, "".join(csv))
    atomic_write_text(txt_path, screening_table(results))

    md = ["# Screening outcomes\n\n"]
    for name, res in results.items():
        cm, m = res["confusion"], res["metrics"]
        md.append(f"## {name}\n\n")
        md.append(f"- Cases: {res['n']}\n")
        md.append(f"- TP {cm['tp']} / FP {cm['fp']} / TN {cm['tn']} / FN {cm['fn']}\n")
        for key in ("sensitivity", "specificity"):
            ci = m[f"{key}_ci95"]
            ci_text = f" (95% CI {ci[0]:.3f}-{ci[1]:.3f})" if ci else ""
            md.append(f"- {key.capitalize()}: {fmt(m[key], 3)}{ci_text}\n")
        md.append(f"- False-negative rate: {fmt(m['fnr'], 3)}\n\n")
    atomic_write_text(md_path, "".join(md))

    for path in (json_path, csv_path, txt_path, md_path):
        logger.info(f"Wrote: {path}")
    return [json_path, csv_path, txt_path, md_path]
