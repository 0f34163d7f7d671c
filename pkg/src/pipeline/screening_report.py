# src/pipeline/screening_report.py
"""
Step 5: screening outcomes report.

Scores every bundled outcome file (case_id,prediction,label) plus the pooled
cross-validation predictions of step 4, and writes JSON / CSV / text /
Markdown tables.
"""

import argparse
import logging
from pathlib import Path
from typing import Any, Dict

from src.config import LOG_LEVEL, OUTCOMES_DIR, REPORTS_DIR, ensure_dirs
from src.evaluation.report import screening_table, write_screening_report
from src.evaluation.screening import evaluate_outcomes, read_outcomes
from src.pipeline.train_suite import CV_SUMMARY_JSON
from src.utils import read_json

logger = logging.getLogger(__name__)


def run(outcomes_dir: Path = OUTCOMES_DIR, report_dir: Path = REPORTS_DIR) -> Dict[str, Any]:
    results: Dict[str, Any] = {}
    for path in sorted(outcomes_dir.glob("*.csv")):
        _, predictions, labels = read_outcomes(path)
        results[path.stem] = evaluate_outcomes(predictions, labels)

    cv_path = report_dir / CV_SUMMARY_JSON
    if cv_path.exists():
        for algorithm, res in read_json(cv_path)["results"].items():
            if "confusion" in res:
                results[f"cv_{algorithm}"] = {k: res[k] for k in ("n", "confusion", "metrics")}
    else:
        logger.info(f"No cross-validation summary at {cv_path}; reporting outcome files only")

    write_screening_report(report_dir, results)
    return results


def main():
    logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s [%(levelname)s] %(message)s")
    parser = argparse.ArgumentParser(description="Build the screening outcomes report")
    parser.add_argument("--outcomes", type=Path, default=OUTCOMES_DIR, help="Directory of outcome CSV files")
    args = parser.parse_args()

    ensure_dirs()
    results = run(args.outcomes)
    print(screening_table(results))


if __name__ == "__main__":
    main()
