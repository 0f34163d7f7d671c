# src/segmentation/saliency.py
# Saliency-driven mass segmentation: conservative contour -> annular partition
# -> border/surround difference histogram -> gray-level saliency -> threshold

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import ndimage
from skimage.filters import threshold_otsu

from src.errors import ConfigError, EmptyRegion, SegmentationFailed
from src.imgio.pgm import Image
from src.segmentation.active_contour import ConservativeParams, conservative_contour
from src.segmentation.geometry import Contour, boundary_mask, check_seed, fill_contour
from src.segmentation.region_growing import CROSS

logger = logging.getLogger(__name__)

THRESHOLD_POLICIES = ("otsu", "fixed")


@dataclass(frozen=True)
class SaliencyConfig:
    conservative: ConservativeParams = ConservativeParams()
    threshold_policy: str = "otsu"
    # only read by the "fixed" policy
    threshold: float = 0.5

    def __post_init__(self):
        if self.threshold_policy not in THRESHOLD_POLICIES:
            raise ConfigError(
                f"threshold_policy must be one of {THRESHOLD_POLICIES}, got {self.threshold_policy!r}"
            )
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold must lie in [0, 1], got {self.threshold}")


@dataclass(frozen=True, eq=False)
class RegionPartition:
    centroid: Tuple[float, float]
    d_max: float
    central: np.ndarray
    border: np.ndarray
    surround: np.ndarray


@dataclass(frozen=True, eq=False)
class DifferenceHistogram:
    f: np.ndarray
    h_border: np.ndarray
    h_surround: np.ndarray
    used_fallback: bool = False


@dataclass(frozen=True, eq=False)
class SaliencyMap:
    values: np.ndarray   # NaN outside the border region
    defined: np.ndarray
    lut: np.ndarray      # saliency of every gray level 0..max_gray


@dataclass(frozen=True, eq=False)
class SaliencyResult:
    mask: np.ndarray
    contour: Contour
    partition: RegionPartition
    histogram: DifferenceHistogram
    saliency: SaliencyMap
    threshold: float


def partition_regions(contour: Contour, image_dims: Tuple[int, int]) -> RegionPartition:
    """Central, border and surrounding annuli around the contour's centroid; image_dims is (height, width)."""
    region = fill_contour(contour, image_dims)
    interior = region & ~boundary_mask(contour, image_dims)
    if not interior.any():
        raise EmptyRegion(f"contour of {len(contour)} points encloses no interior pixel")

    rows, cols = np.nonzero(region)
    cx, cy = float(cols.mean()), float(rows.mean())
    d_max = float(np.hypot(contour.xs - cx, contour.ys - cy).max())

    ys, xs = np.mgrid[0:image_dims[0], 0:image_dims[1]]
    dist = np.hypot(xs - cx, ys - cy)
    central = dist <= d_max
    border = (dist > d_max) & (dist <= 2.0 * d_max)
    surround = (dist > 2.0 * d_max) & (dist <= 4.0 * d_max)
    return RegionPartition((cx, cy), d_max, central, border, surround)


def gray_histogram(image: Image, region: np.ndarray) -> np.ndarray:
    """Normalized histogram of the region's gray levels over all max_gray + 1 shades."""
    values = image.pixels[region]
    counts = np.bincount(values.astype(np.int64), minlength=image.n_levels).astype(np.float64)
    return counts / values.size


def difference_histogram(image: Image, partition: RegionPartition) -> DifferenceHistogram:
    """
    f = positive part of (h_border - h_surround), renormalized. When the border
    is nowhere over-represented, f falls back to h_border.
    """
    if not partition.border.any():
        raise EmptyRegion("border region is empty")
    if not partition.surround.any():
        raise EmptyRegion("surrounding region is empty")

    h_b = gray_histogram(image, partition.border)
    h_s = gray_histogram(image, partition.surround)
    positive = np.maximum(h_b - h_s, 0.0)
    total = positive.sum()
    if total > 0:
        return DifferenceHistogram(positive / total, h_b, h_s)
    logger.warning("Border and surround histograms coincide; saliency uses the border histogram")
    return DifferenceHistogram(h_b.copy(), h_b, h_s, used_fallback=True)


def saliency_lut(levels: np.ndarray, f: np.ndarray, max_gray: int) -> np.ndarray:
    """S(c) = sum_j f_j |c - j| / max_gray, accumulated in ascending j, capped at 1."""
    levels = np.asarray(levels, dtype=np.int64)
    acc = np.zeros(len(levels), dtype=np.float64)
    for j in np.flatnonzero(f):
        acc += f[j] * (np.abs(levels - j) / max_gray)
    return np.minimum(acc, 1.0)


def saliency_map(image: Image, hist: DifferenceHistogram, partition: RegionPartition) -> SaliencyMap:
    f = hist.f if isinstance(hist, DifferenceHistogram) else np.asarray(hist, dtype=np.float64)
    if len(f) != image.n_levels:
        raise ValueError(f"histogram has {len(f)} bins, image has {image.n_levels} gray levels")

    defined = partition.border.copy()
    table = saliency_lut(np.arange(image.n_levels), f, image.max_gray)

    values = np.full(image.shape, np.nan)
    values[defined] = table[image.pixels[defined].astype(np.int64)]
    return SaliencyMap(values, defined, table)


def _threshold(values: np.ndarray, config: SaliencyConfig) -> float:
    if config.threshold_policy == "fixed":
        return config.threshold
    if values.min() == values.max():
        return float(values.max())
    return float(threshold_otsu(values))


def saliency_pipeline(image: Image, seed: Tuple[int, int], config: Optional[SaliencyConfig] = None) -> SaliencyResult:
    config = config or SaliencyConfig()
    x, y = check_seed(seed, image.shape)

    contour = conservative_contour(image, (x, y), config.conservative)
    partition = partition_regions(contour, image.shape)
    hist = difference_histogram(image, partition)
    smap = saliency_map(image, hist, partition)

    t = _threshold(smap.values[smap.defined], config)
    # tumour gray levels are the over-represented ones, so they carry low saliency
    accepted = smap.defined & (np.nan_to_num(smap.values, nan=np.inf) <= t)
    candidate = partition.central | accepted
    if not candidate[y, x]:
        raise SegmentationFailed(f"seed ({x}, {y}) falls outside both central and accepted regions")

    labels, _ = ndimage.label(candidate, structure=CROSS)
    mask = labels == labels[y, x]
    logger.debug(
        f"Saliency segment seed=({x}, {y}) d_max={partition.d_max:.2f} threshold={t:.4f} "
        f"accepted={int(accepted.sum())} mask={int(mask.sum())}"
    )
    return SaliencyResult(mask, contour, partition, hist, smap, t)


def saliency_segment(image: Image, seed: Tuple[int, int], config: Optional[SaliencyConfig] = None) -> np.ndarray:
    return saliency_pipeline(image, seed, config).mask
