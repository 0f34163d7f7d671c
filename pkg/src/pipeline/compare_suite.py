# src/pipeline/compare_suite.py
# Step 2: run the three segmentation methods on every phantom and score them

import argparse
import logging
from pathlib import Path
from typing import List

from src.config import (
    COMPARISON_ROWS_JSONL,
    COMPARISONS_DIR,
    LOG_LEVEL,
    PHANTOM_MANIFEST_JSONL,
    PHANTOMS_DIR,
    REPORTS_DIR,
    ensure_dirs,
)
from src.evaluation.compare import CompareConfig, ComparisonReport, compare_methods, mean_scores, overlay_image
from src.evaluation.report import write_comparison_report
from src.imgio.pgm import image_to_mask, mask_to_image, read_pgm, save_pgm
from src.imgio.phantoms import PhantomSpec
from src.utils import read_jsonl, write_jsonl

logger = logging.getLogger(__name__)


def saliency_mask_path(case_id: str, out_dir: Path = COMPARISONS_DIR) -> Path:
    return out_dir / "masks" / f"{case_id}_saliency.pgm"


def compare_case(row: dict, phantom_dir: Path, out_dir: Path, config: CompareConfig) -> ComparisonReport:
    case_id = row["case_id"]
    image = read_pgm(phantom_dir / f"{case_id}.pgm")
    truth = image_to_mask(read_pgm(phantom_dir / f"{case_id}_mask.pgm"))
    # the phantom spec stands in for a reader's circle annotation
    radius = PhantomSpec.from_dict(row["spec"]).annotation_radius() if "spec" in row else None
    report = compare_methods(
        image, tuple(row["seed"]), truth, config,
        case_id=case_id, ground_truth_kind="phantom", annotation_radius=radius,
    )

    for r in report.rows:
        if r.mask is None:
            continue
        save_pgm(out_dir / "masks" / f"{case_id}_{r.method}.pgm", mask_to_image(r.mask))
        save_pgm(out_dir / "overlays" / f"{case_id}_{r.method}.pgm", overlay_image(image, r.mask))
    return report


def run(
    manifest: Path = PHANTOM_MANIFEST_JSONL,
    phantom_dir: Path = PHANTOMS_DIR,
    out_dir: Path = COMPARISONS_DIR,
    report_dir: Path = REPORTS_DIR,
    config: CompareConfig = CompareConfig(),
) -> List[ComparisonReport]:
    reports = []
    for row in read_jsonl(manifest):
        report = compare_case(row, phantom_dir, out_dir, config)
        summary = ", ".join(
            f"{r.method}={r.dice:.3f}" if r.status == "ok" else f"{r.method}=failed" for r in report.rows
        )
        logger.info(f"{report.case_id}: dice {summary}")
        reports.append(report)

    write_jsonl(out_dir / COMPARISON_ROWS_JSONL.name, (r.to_dict(config.record_timings) for r in reports))
    write_comparison_report(report_dir, reports, mean_scores(reports), config.record_timings)
    return reports


def main():
    logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s [%(levelname)s] %(message)s")
    parser = argparse.ArgumentParser(description="Compare saliency, region growing and active contour on the phantoms")
    parser.add_argument("--manifest", type=Path, default=PHANTOM_MANIFEST_JSONL)
    parser.add_argument("--record-timings", action="store_true", help="Include per-method seconds in the JSON rows")
    args = parser.parse_args()

    ensure_dirs()
    if not args.manifest.exists():
        raise FileNotFoundError(f"Phantom manifest not found: {args.manifest} (run step 1 first)")
    run(args.manifest, args.manifest.parent, config=CompareConfig(record_timings=args.record_timings))


if __name__ == "__main__":
    main()
