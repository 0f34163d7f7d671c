# src/evaluation/compare.py
"""
Three-method comparison on identical inputs: the saliency pipeline, seeded
region growing and a shrink-wrapping greedy snake, each scored against a
ground-truth mask. A method that raises is recorded as a failed row and the
remaining methods still run.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config import AC_INIT_RADIUS, AC_INIT_RADIUS_FACTOR, SCHEMA_VERSION
from src.errors import ConfigError
from src.evaluation.overlap import mask_boundary, overlap
from src.imgio.annotations import Annotation
from src.imgio.pgm import Image
from src.segmentation.active_contour import SnakeParams, active_contour
from src.segmentation.geometry import check_seed, circle_points, fill_contour
from src.segmentation.region_growing import RegionGrowingParams, region_growing
from src.segmentation.saliency import SaliencyConfig, saliency_segment

logger = logging.getLogger(__name__)

METHODS = ("saliency", "rg", "ac")


@dataclass(frozen=True)
class CompareConfig:
    methods: Tuple[str, ...] = METHODS
    saliency: SaliencyConfig = SaliencyConfig()
    rg: RegionGrowingParams = RegionGrowingParams()
    ac: SnakeParams = SnakeParams()
    # AC starts from a circle this many annotation radii wide, or ac_init_radius px without one
    ac_init_radius_factor: float = AC_INIT_RADIUS_FACTOR
    ac_init_radius: float = AC_INIT_RADIUS
    record_timings: bool = False

    def __post_init__(self):
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown or not self.methods:
            raise ConfigError(f"methods must be a non-empty subset of {list(METHODS)}, got {list(self.methods)}")
        if self.ac_init_radius_factor <= 0:
            raise ConfigError(f"ac_init_radius_factor must be > 0, got {self.ac_init_radius_factor}")
        if self.ac_init_radius <= 0:
            raise ConfigError(f"ac_init_radius must be > 0, got {self.ac_init_radius}")


@dataclass
class MethodRow:
    method: str
    status: str
    dice: Optional[float] = None
    jaccard: Optional[float] = None
    hausdorff: Optional[float] = None
    error: Optional[str] = None
    seconds: Optional[float] = None
    mask: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self, record_timings: bool = False) -> Dict[str, Any]:
        row = {
            "method": self.method,
            "status": self.status,
            "dice": self.dice,
            "jaccard": self.jaccard,
            "hausdorff": self.hausdorff,
            "error": self.error,
        }
        if record_timings:
            row["seconds"] = self.seconds
        return row


@dataclass
class ComparisonReport:
    case_id: str
    seed: Tuple[int, int]
    ground_truth: str
    rows: List[MethodRow]

    def row(self, method: str) -> MethodRow:
        for r in self.rows:
            if r.method == method:
                return r
        raise KeyError(method)

    def to_dict(self, record_timings: bool = False) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "case_id": self.case_id,
            "seed": list(self.seed),
            "ground_truth": self.ground_truth,
            "rows": [r.to_dict(record_timings) for r in self.rows],
        }


def annotation_disc(annotation: Annotation, shape: Tuple[int, int]) -> np.ndarray:
    """Ground truth for an annotated case: the disc at the (top-left) centre and radius."""
    cx, cy = annotation.seed()
    yy, xx = np.mgrid[0 : shape[0], 0 : shape[1]]
    return (xx - cx) ** 2 + (yy - cy) ** 2 <= annotation.radius**2


def ac_initial_points(
    seed: Tuple[int, int], shape: Tuple[int, int], config: CompareConfig, annotation_radius: Optional[float] = None
) -> np.ndarray:
    """Initial AC circle; never derived from the ground truth being scored."""
    if annotation_radius is not None:
        radius = config.ac_init_radius_factor * annotation_radius
    else:
        radius = config.ac_init_radius
    pts = circle_points(seed, radius, config.ac.n_points)
    pts[:, 0] = np.clip(pts[:, 0], 0, shape[1] - 1)
    pts[:, 1] = np.clip(pts[:, 1], 0, shape[0] - 1)
    return pts


def run_method(
    method: str,
    image: Image,
    seed: Tuple[int, int],
    config: CompareConfig,
    annotation_radius: Optional[float] = None,
):
    if method == "saliency":
        return saliency_segment(image, seed, config.saliency)
    if method == "rg":
        return region_growing(image, seed, config.rg.tau)
    init = ac_initial_points(seed, image.shape, config, annotation_radius)
    return fill_contour(active_contour(image, init, config.ac), image.shape)


def compare_methods(
    image: Image,
    seed: Tuple[int, int],
    ground_truth: np.ndarray,
    config: Optional[CompareConfig] = None,
    case_id: str = "case",
    ground_truth_kind: str = "mask",
    annotation_radius: Optional[float] = None,
) -> ComparisonReport:
    """
    Score every configured method against `ground_truth`. The ground truth is
    only used for scoring; the AC baseline starts from `annotation_radius`.
    """
    config = config or CompareConfig()
    seed = check_seed(seed, image.shape)
    ground_truth = np.asarray(ground_truth, dtype=bool)
    if ground_truth.shape != image.shape:
        raise ConfigError(f"ground truth shape {ground_truth.shape} differs from image {image.shape}")

    rows = []
    for method in config.methods:
        t0 = time.perf_counter()
        try:
            mask = run_method(method, image, seed, config, annotation_radius)
            scores = overlap(mask, ground_truth)
            row = MethodRow(method, "ok", scores.dice, scores.jaccard, scores.hausdorff, mask=mask)
        except Exception as e:
            logger.warning(f"{case_id}: {method} failed: {type(e).__name__}: {e}")
            row = MethodRow(method, "failed", error=f"{type(e).__name__}: {e}")
        row.seconds = time.perf_counter() - t0
        rows.append(row)
    return ComparisonReport(case_id, seed, ground_truth_kind, rows)


def overlay_image(image: Image, mask: np.ndarray) -> Image:
    """Copy of the image with the mask boundary burned in at max_gray."""
    pixels = image.pixels.copy()
    pixels[mask_boundary(mask)] = image.max_gray
    return Image(pixels, image.max_gray)


def mean_scores(reports: Sequence[ComparisonReport]) -> Dict[str, Dict[str, Any]]:
    """Per-method mean Dice / Jaccard / Hausdorff over the successful rows."""
    summary: Dict[str, Dict[str, Any]] = {}
    for method in METHODS:
        rows = [r.row(method) for r in reports if any(x.method == method for x in r.rows)]
        if not rows:
            continue
        ok = [r for r in rows if r.status == "ok"]
        hd = [r.hausdorff for r in ok if r.hausdorff is not None]
        summary[method] = {
            "cases": len(rows),
            "failed": len(rows) - len(ok),
            "dice": float(np.mean([r.dice for r in ok])) if ok else None,
            "jaccard": float(np.mean([r.jaccard for r in ok])) if ok else None,
            "hausdorff": float(np.mean(hd)) if hd else None,
        }
    return summary
