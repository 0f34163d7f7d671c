# src/pipeline/feature_table.py
# Step 3: radiomic feature table from the saliency masks of step 2

import argparse
import logging
from pathlib import Path

from src.config import COMPARISONS_DIR, FEATURES_CSV, LOG_LEVEL, PHANTOM_MANIFEST_JSONL, PHANTOMS_DIR, ensure_dirs
from src.errors import MammoError
from src.features.radiomics import extract_all, write_feature_csv
from src.imgio.pgm import image_to_mask, read_pgm
from src.pipeline.compare_suite import saliency_mask_path
from src.segmentation.geometry import contour_from_mask
from src.utils import read_jsonl

logger = logging.getLogger(__name__)


def run(
    manifest: Path = PHANTOM_MANIFEST_JSONL,
    phantom_dir: Path = PHANTOMS_DIR,
    mask_dir: Path = COMPARISONS_DIR,
    out_path: Path = FEATURES_CSV,
) -> int:
    rows, skipped = [], 0
    for row in read_jsonl(manifest):
        case_id = row["case_id"]
        mask_path = saliency_mask_path(case_id, mask_dir)
        if not mask_path.exists():
            logger.warning(f"{case_id}: no saliency mask (segmentation failed), skipping")
            skipped += 1
            continue
        try:
            image = read_pgm(phantom_dir / f"{case_id}.pgm")
            mask = image_to_mask(read_pgm(mask_path))
            rows.append((case_id, extract_all(image, mask, contour_from_mask(mask)), row["label"]))
        except MammoError as e:
            logger.warning(f"{case_id}: feature extraction failed: {type(e).__name__}: {e}")
            skipped += 1

    write_feature_csv(out_path, rows)
    logger.info(f"Feature table: {len(rows)} rows, {skipped} skipped")
    return len(rows)


def main():
    logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s [%(levelname)s] %(message)s")
    parser = argparse.ArgumentParser(description="Extract the feature table from saliency masks")
    parser.add_argument("--manifest", type=Path, default=PHANTOM_MANIFEST_JSONL)
    parser.add_argument("--out", type=Path, default=FEATURES_CSV)
    args = parser.parse_args()

    ensure_dirs()
    run(args.manifest, args.manifest.parent, out_path=args.out)


if __name__ == "__main__":
    main()
