# src/features/fractal.py
# Box-counting dimension of a rendered mass border

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.stats import linregress
from skimage.draw import line

from src.config import BOX_SIZES
from src.errors import FeatureError
from src.features.shape import local_contour
from src.segmentation.geometry import Contour

logger = logging.getLogger(__name__)

MIN_SCALES = 3


@dataclass(frozen=True)
class BoxCountFit:
    dimension: float
    slope: float
    clamped: bool
    sizes: Tuple[int, ...]
    counts: Tuple[int, ...]


def render_boundary(contour: Contour) -> np.ndarray:
    """Boundary bitmap in the contour's local frame, consecutive points joined by lines."""
    local, shape = local_contour(contour)
    bitmap = np.zeros(shape, dtype=bool)
    pts = local.points
    for (x0, y0), (x1, y1) in zip(pts.tolist(), np.roll(pts, -1, axis=0).tolist()):
        rr, cc = line(y0, x0, y1, x1)
        bitmap[rr, cc] = True
    return bitmap


def box_counts(bitmap: np.ndarray, sizes: Sequence[int] = BOX_SIZES) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """
    Occupied-box counts on a grid anchored at the bitmap origin. Sizes larger
    than half the bitmap's extent are skipped (a single box says nothing).
    """
    bitmap = np.asarray(bitmap, dtype=bool)
    extent = max(bitmap.shape)
    used, counts = [], []
    for s in sorted(sizes):
        if s < 1 or s > extent / 2:
            continue
        boxes = np.add.reduceat(
            np.add.reduceat(bitmap.astype(np.int64), np.arange(0, bitmap.shape[0], s), axis=0),
            np.arange(0, bitmap.shape[1], s),
            axis=1,
        )
        used.append(int(s))
        counts.append(int(np.count_nonzero(boxes)))
    return tuple(used), tuple(counts)


def box_counting_dimension(bitmap: np.ndarray, sizes: Sequence[int] = BOX_SIZES) -> BoxCountFit:
    """Least-squares slope of log N(s) against log(1/s), clamped to [1, 2]."""
    if not np.any(bitmap):
        raise FeatureError("box counting on an empty bitmap")
    used, counts = box_counts(bitmap, sizes)
    if len(used) < MIN_SCALES:
        raise FeatureError(
            f"only {len(used)} usable box sizes for a {bitmap.shape[1]}x{bitmap.shape[0]} border; need {MIN_SCALES}"
        )
    fit = linregress(np.log(1.0 / np.array(used, dtype=np.float64)), np.log(np.array(counts, dtype=np.float64)))
    slope = float(fit.slope)
    dimension = min(max(slope, 1.0), 2.0)
    clamped = abs(dimension - slope) > 1e-9
    if clamped:
        logger.warning(f"Box-counting slope {slope:.4f} clamped to {dimension}")
    return BoxCountFit(dimension, slope, clamped, used, counts)


def fractal_dimension(contour: Contour, sizes: Sequence[int] = BOX_SIZES) -> float:
    return box_counting_dimension(render_boundary(contour), sizes).dimension
