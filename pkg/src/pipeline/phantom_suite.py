# src/pipeline/phantom_suite.py
"""
Step 1: expand the suite definition into seeded phantom cases.

Round discs stand in for benign masses and elongated ellipses for malignant
ones. Each case is written as <id>.pgm plus <id>_mask.pgm, and one manifest
row per case records its spec, label and seed point.
"""

import argparse
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Tuple

import numpy as np

from src.config import (
    LOG_LEVEL,
    PHANTOM_MANIFEST_JSONL,
    PHANTOM_SUITE_PATH,
    PHANTOMS_DIR,
    RANDOM_SEED,
    SCHEMA_VERSION,
    ensure_dirs,
)
from src.errors import PhantomSpecError
from src.imgio.pgm import mask_to_image, save_pgm
from src.imgio.phantoms import Disc, Ellipse, PhantomSpec, synth_phantom
from src.utils import read_json, write_jsonl

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteCase:
    case_id: str
    label: str
    spec: PhantomSpec

    @property
    def seed(self) -> Tuple[int, int]:
        cx, cy = self.spec.shape.center
        return int(round(cx)), int(round(cy))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "case_id": self.case_id,
            "label": self.label,
            "seed": list(self.seed),
            "spec": self.spec.to_dict(),
        }


def build_suite(definition: Dict[str, Any]) -> List[SuiteCase]:
    """
    Deterministic case list from a definition such as

        {"width": 256, "height": 256, "rng_seed": 42, "noise_levels": [0, 5, 10],
         "fg_level": 200, "bg_level": 60, "center_jitter": 20,
         "discs": {"count": 20, "radius": [20, 80], "label": "B"},
         "ellipses": {"count": 20, "a": [30, 80], "axis_ratio": [0.35, 0.6],
                      "min_b": 12, "label": "M"}}
    """
    try:
        width, height = int(definition["width"]), int(definition["height"])
        noise_levels = [float(v) for v in definition["noise_levels"]]
        discs, ellipses = definition.get("discs", {}), definition.get("ellipses", {})
    except (KeyError, TypeError, ValueError) as e:
        raise PhantomSpecError(f"bad suite definition: {e}") from e
    seed = int(definition.get("rng_seed", RANDOM_SEED))
    rng = np.random.default_rng(seed)
    jitter = int(definition.get("center_jitter", 0))
    levels = dict(fg_level=int(definition.get("fg_level", 200)), bg_level=int(definition.get("bg_level", 60)))

    def center() -> Tuple[float, float]:
        dx, dy = rng.integers(-jitter, jitter, size=2, endpoint=True) if jitter else (0, 0)
        return float(width // 2 + dx), float(height // 2 + dy)

    cases = []
    for i in range(int(discs.get("count", 0))):
        lo, hi = discs.get("radius", (20, 80))
        shape = Disc(center(), float(rng.integers(lo, hi, endpoint=True)))
        spec = PhantomSpec(width, height, shape, noise_sigma=noise_levels[i % len(noise_levels)],
                           rng_seed=seed + i, **levels)
        cases.append(SuiteCase(f"disc_{i:03d}", discs.get("label", "B"), spec))

    for i in range(int(ellipses.get("count", 0))):
        lo, hi = ellipses.get("a", (30, 80))
        r_lo, r_hi = ellipses.get("axis_ratio", (0.35, 0.6))
        a = float(rng.integers(lo, hi, endpoint=True))
        b = max(float(ellipses.get("min_b", 12)), round(a * float(rng.uniform(r_lo, r_hi)), 1))
        shape = Ellipse(center(), a, b, float(rng.integers(0, 180)))
        spec = PhantomSpec(width, height, shape, noise_sigma=noise_levels[i % len(noise_levels)],
                           rng_seed=seed + 1000 + i, **levels)
        cases.append(SuiteCase(f"ellipse_{i:03d}", ellipses.get("label", "M"), spec))

    for case in cases:
        case.spec.validate()
    return cases


def load_suite(path: Path = PHANTOM_SUITE_PATH) -> List[SuiteCase]:
    return build_suite(read_json(path))


def write_suite(cases: List[SuiteCase], out_dir: Path = PHANTOMS_DIR) -> Path:
    for case in cases:
        image, mask = synth_phantom(case.spec)
        save_pgm(out_dir / f"{case.case_id}.pgm", image)
        save_pgm(out_dir / f"{case.case_id}_mask.pgm", mask_to_image(mask))
    manifest = out_dir / PHANTOM_MANIFEST_JSONL.name
    write_jsonl(manifest, (case.to_dict() for case in cases))
    logger.info(f"Wrote {len(cases)} phantoms + manifest: {manifest}")
    return manifest


def main():
    logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s [%(levelname)s] %(message)s")
    parser = argparse.ArgumentParser(description="Generate the phantom suite")
    parser.add_argument("--suite", type=Path, default=PHANTOM_SUITE_PATH, help="Suite definition JSON")
    parser.add_argument("--out", type=Path, default=PHANTOMS_DIR, help="Output directory")
    args = parser.parse_args()

    ensure_dirs()
    cases = load_suite(args.suite)
    logger.info(f"Suite {args.suite}: {len(cases)} cases")
    write_suite(cases, args.out)


if __name__ == "__main__":
    main()
