#!/usr/bin/env python3
"""
Full pipeline runner with checkpointing and graceful shutdown.

Usage:
    python run_experiment.py              # Run from beginning (or resume)
    python run_experiment.py --from 3     # Resume from step 3
    python run_experiment.py --step 2     # Run only step 2
    python run_experiment.py --status     # Show checkpoint status

Steps:
    1. Generate the seeded phantom suite
    2. Compare saliency / region growing / active contour on every phantom
    3. Extract the feature table from the saliency masks
    4. Train and cross-validate all seven algorithms
    5. Screening outcomes report (bundled outcome files + cross-validation)

Ctrl+C is safe: the current step finishes, then the checkpoint is saved.
"""

import sys
import time
import signal
import logging
from pathlib import Path
from datetime import datetime, timezone

# Ensure project root is on path
PROJECT_ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(PROJECT_ROOT))

from src.config import (
    COMPARISON_ROWS_JSONL,
    FEATURES_CSV,
    LOG_LEVEL,
    MODELS_DIR,
    OUTPUTS_DIR,
    PHANTOM_MANIFEST_JSONL,
    PHANTOM_SUITE_PATH,
    REPORTS_DIR,
    ensure_dirs,
)
from src.utils import count_jsonl, read_json, read_jsonl, write_json

logging.basicConfig(
    level=LOG_LEVEL,
    format="%(asctime)s [%(levelname)s] %(message)s",
    handlers=[
        logging.StreamHandler(),
        logging.FileHandler(PROJECT_ROOT / "experiment.log", mode="a"),
    ],
)
logger = logging.getLogger("experiment")

CHECKPOINT_PATH = OUTPUTS_DIR / "checkpoint.json"

# --- Graceful shutdown ---
_shutdown_requested = False

def _signal_handler(sig, frame):
    global _shutdown_requested
    if _shutdown_requested:
        logger.warning("Force quit (second Ctrl+C). Exiting immediately.")
        sys.exit(1)
    _shutdown_requested = True
    logger.warning("Shutdown requested (Ctrl+C). Finishing current step, then saving checkpoint...")

signal.signal(signal.SIGINT, _signal_handler)


def count_failed(path: Path) -> int:
    """Count comparison rows holding at least one failed method."""
    if not path.exists():
        return 0
    return sum(1 for row in read_jsonl(path) if any(r["status"] == "failed" for r in row["rows"]))


def count_csv_rows(path: Path) -> int:
    if not path.exists():
        return 0
    with open(path, encoding="utf-8") as f:
        return max(sum(1 for line in f if line.strip()) - 1, 0)


def save_checkpoint(step: int, status: str, details: dict = None):
    """Save current progress to checkpoint file."""
    ensure_dirs()
    checkpoint = {
        "last_completed_step": step,
        "status": status,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "details": details or {},
    }
    write_json(CHECKPOINT_PATH, checkpoint)
    logger.info(f"Checkpoint saved: step {step}: {status}")


def load_checkpoint() -> dict:
    """Load checkpoint if it exists."""
    if CHECKPOINT_PATH.exists():
        return read_json(CHECKPOINT_PATH)
    return {"last_completed_step": 0, "status": "not_started"}


def get_status() -> dict:
    """Get current pipeline status."""
    return {
        "checkpoint": load_checkpoint(),
        "phantoms": count_jsonl(PHANTOM_MANIFEST_JSONL),
        "comparisons": count_jsonl(COMPARISON_ROWS_JSONL),
        "comparisons_with_failures": count_failed(COMPARISON_ROWS_JSONL),
        "feature_rows": count_csv_rows(FEATURES_CSV),
        "models": len(list(MODELS_DIR.glob("*.json"))) if MODELS_DIR.exists() else 0,
        "reports_exist": REPORTS_DIR.exists() and any(REPORTS_DIR.iterdir()),
    }


def print_status():
    """Pretty-print pipeline status."""
    s = get_status()
    print("\n" + "=" * 60)
    print("PIPELINE STATUS")
    print("=" * 60)
    print(f"  Checkpoint:        Step {s['checkpoint']['last_completed_step']}: {s['checkpoint']['status']}")
    print(f"  Last updated:      {s['checkpoint'].get('timestamp', 'N/A')}")
    print(f"  Phantoms:          {s['phantoms']}")
    print(f"  Comparisons:       {s['comparisons']} ({s['comparisons_with_failures']} with failed methods)")
    print(f"  Feature rows:      {s['feature_rows']}")
    print(f"  Models:            {s['models']}")
    print(f"  Reports:           {'yes' if s['reports_exist'] else 'no'}")
    print("=" * 60 + "\n")


# ===== STEP FUNCTIONS =====

def step_1_phantoms():
    """Step 1: Generate the phantom suite."""
    logger.info("STEP 1: Generating phantom suite")

    sys.argv = ["phantom_suite", "--suite", str(PHANTOM_SUITE_PATH)]
    from src.pipeline.phantom_suite import main as suite_main
    suite_main()

    n = count_jsonl(PHANTOM_MANIFEST_JSONL)
    logger.info(f"Step 1 complete: {n} phantoms")
    save_checkpoint(1, "phantoms_generated", {"phantoms": n})


def step_2_compare():
    """Step 2: Three-method segmentation comparison."""
    logger.info("STEP 2: Comparing segmentation methods")

    sys.argv = ["compare_suite", "--manifest", str(PHANTOM_MANIFEST_JSONL)]
    from src.pipeline.compare_suite import main as compare_main
    compare_main()

    n, failed = count_jsonl(COMPARISON_ROWS_JSONL), count_failed(COMPARISON_ROWS_JSONL)
    logger.info(f"Step 2 complete: {n} cases, {failed} with failed methods")
    save_checkpoint(2, "comparison_complete", {"cases": n, "with_failures": failed})


def step_3_features():
    """Step 3: Feature table from the saliency masks."""
    logger.info("STEP 3: Extracting features")

    sys.argv = ["feature_table", "--manifest", str(PHANTOM_MANIFEST_JSONL)]
    from src.pipeline.feature_table import main as features_main
    features_main()

    n = count_csv_rows(FEATURES_CSV)
    logger.info(f"Step 3 complete: {n} feature rows")
    save_checkpoint(3, "features_extracted", {"rows": n})


def step_4_train():
    """Step 4: Train + cross-validate every algorithm."""
    logger.info("STEP 4: Training and cross-validation")

    sys.argv = ["train_suite", "--features", str(FEATURES_CSV)]
    from src.pipeline.train_suite import main as train_main
    train_main()

    n = len(list(MODELS_DIR.glob("*.json")))
    logger.info(f"Step 4 complete: {n} models")
    save_checkpoint(4, "models_trained", {"models": n})


def step_5_report():
    """Step 5: Screening report."""
    logger.info("STEP 5: Screening report")

    sys.argv = ["screening_report"]
    from src.pipeline.screening_report import main as report_main
    report_main()

    logger.info("Step 5 complete: reports generated")
    save_checkpoint(5, "pipeline_complete")

    md_path = REPORTS_DIR / "comparison.md"
    if md_path.exists():
        print("\n" + "=" * 60)
        print("SEGMENTATION COMPARISON")
        print("=" * 60)
        print(md_path.read_text(encoding="utf-8"))


# ===== MAIN =====

STEPS = {
    1: ("Phantom suite", step_1_phantoms),
    2: ("Method comparison", step_2_compare),
    3: ("Feature table", step_3_features),
    4: ("Train + cross-validate", step_4_train),
    5: ("Screening report", step_5_report),
}
MAX_STEP = 5


def main():
    import argparse
    parser = argparse.ArgumentParser(description="Run the full pipeline")
    parser.add_argument(
        "--from", type=int, dest="from_step", default=None,
        help=f"Resume from this step (1-{MAX_STEP})"
    )
    parser.add_argument(
        "--step", type=int, default=None,
        help=f"Run only this step (1-{MAX_STEP})"
    )
    parser.add_argument(
        "--status", action="store_true",
        help="Print current pipeline status and exit"
    )
    args = parser.parse_args()

    ensure_dirs()

    if args.status:
        print_status()
        return

    for value in (args.step, args.from_step):
        if value is not None and value not in STEPS:
            parser.error(f"step must be between 1 and {MAX_STEP}, got {value}")

    # Determine which steps to run
    if args.step:
        steps_to_run = [args.step]
    elif args.from_step:
        steps_to_run = list(range(args.from_step, MAX_STEP + 1))
    else:
        # Auto-resume from checkpoint
        cp = load_checkpoint()
        start = cp["last_completed_step"] + 1
        if start > MAX_STEP:
            logger.info("Pipeline already complete! Use --from to re-run steps.")
            print_status()
            return
        steps_to_run = list(range(start, MAX_STEP + 1))

    logger.info(f"Steps to run: {steps_to_run}")
    t0 = time.time()

    for step_num in steps_to_run:
        if _shutdown_requested:
            logger.warning(f"Shutdown requested. Stopping before step {step_num}.")
            break

        name, func = STEPS[step_num]
        logger.info("=" * 60)
        logger.info(f"Starting Step {step_num}/{MAX_STEP}: {name}")
        logger.info("=" * 60)

        try:
            func()
        except KeyboardInterrupt:
            logger.warning(f"Interrupted during step {step_num}.")
            save_checkpoint(step_num - 1, f"interrupted_at_step_{step_num}")
            break
        except Exception as e:
            logger.error(f"Error in step {step_num}: {e}", exc_info=True)
            save_checkpoint(step_num - 1, f"error_at_step_{step_num}: {str(e)[:200]}")
            raise

    elapsed = time.time() - t0
    logger.info(f"Total time: {elapsed/60:.1f} minutes")
    print_status()


if __name__ == "__main__":
    main()
