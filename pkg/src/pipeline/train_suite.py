# src/pipeline/train_suite.py
# Step 4: fit every algorithm on the feature table and cross-validate it

import argparse
import logging
from pathlib import Path
from typing import Any, Dict

from src.config import CV_FOLDS, FEATURES_CSV, LOG_LEVEL, MODELS_DIR, RANDOM_SEED, REPORTS_DIR, SCHEMA_VERSION, ensure_dirs
from src.errors import MammoError
from src.learn.dataset import load_dataset
from src.learn.models import ALGORITHMS, save_model, train
from src.learn.validation import cross_validate
from src.utils import write_json

logger = logging.getLogger(__name__)

CV_SUMMARY_JSON = "cross_validation.json"


def run(
    features: Path = FEATURES_CSV,
    model_dir: Path = MODELS_DIR,
    report_dir: Path = REPORTS_DIR,
    folds: int = CV_FOLDS,
    seed: int = RANDOM_SEED,
) -> Dict[str, Any]:
    dataset = load_dataset(features)
    results: Dict[str, Any] = {}
    for algorithm in ALGORITHMS:
        try:
            save_model(model_dir / f"{algorithm}.json", train(algorithm, dataset))
            results[algorithm] = cross_validate(algorithm, dataset, folds=min(folds, len(dataset)), seed=seed)
        except MammoError as e:
            logger.warning(f"{algorithm}: {type(e).__name__}: {e}")
            results[algorithm] = {"algorithm": algorithm, "status": "failed", "error": f"{type(e).__name__}: {e}"}

    summary = {
        "schema_version": SCHEMA_VERSION,
        "dataset": features.name,
        "n": len(dataset),
        "folds": folds,
        "seed": seed,
        "results": results,
    }
    write_json(report_dir / CV_SUMMARY_JSON, summary)
    logger.info(f"Wrote: {report_dir / CV_SUMMARY_JSON}")
    return summary


def main():
    logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s [%(levelname)s] %(message)s")
    parser = argparse.ArgumentParser(description="Train and cross-validate all algorithms")
    parser.add_argument("--features", type=Path, default=FEATURES_CSV)
    parser.add_argument("--folds", type=int, default=CV_FOLDS)
    parser.add_argument("--seed", type=int, default=RANDOM_SEED)
    args = parser.parse_args()

    ensure_dirs()
    run(args.features, folds=args.folds, seed=args.seed)


if __name__ == "__main__":
    main()
