# src/features/shape.py
# Contour and mask shape descriptors: radius, perimeter, area, compactness,
# smoothness, symmetry. Inputs are expected in the mass's local frame.

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import ndimage

from src.errors import DegenerateContour, FeatureError
from src.segmentation.geometry import Contour, fill_contour

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
# relative eigenvalue gap below which a mask has no major direction
ISOTROPY_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class RadialProfile:
    centroid: Tuple[float, float]
    radial_lengths: np.ndarray

    @property
    def mean_radius(self) -> float:
        return float(self.radial_lengths.mean())


def local_contour(contour: Contour) -> Tuple[Contour, Tuple[int, int]]:
    """Contour shifted so its bounding box starts at (0, 0), and the shape holding it."""
    x0, y0, x1, y1 = contour.bbox()
    return contour.translate(-x0, -y0), (y1 - y0 + 1, x1 - x0 + 1)


def radial_profile(contour: Contour) -> RadialProfile:
    """Distances from the region centroid to every contour point, in chain order."""
    local, shape = local_contour(contour)
    region = fill_contour(local, shape)
    rows, cols = np.nonzero(region)
    cx, cy = float(cols.mean()), float(rows.mean())
    lengths = np.hypot(local.xs - cx, local.ys - cy)
    if np.any(lengths <= 0):
        raise DegenerateContour("centroid lies on the contour; radial profile undefined")
    x0, y0 = contour.bbox()[:2]
    return RadialProfile((cx + x0, cy + y0), lengths)


def perimeter(contour: Contour) -> float:
    """Freeman chain length: 1 per axial step, sqrt(2) per diagonal step."""
    steps = np.abs(np.roll(contour.points, -1, axis=0) - contour.points)
    diagonal = int(np.count_nonzero((steps[:, 0] == 1) & (steps[:, 1] == 1)))
    axial = len(steps) - diagonal
    return axial + diagonal * SQRT2


def area(mask: np.ndarray, contour: Contour) -> float:
    """Interior pixel count plus half the boundary pixel count."""
    mask = np.asarray(mask, dtype=bool)
    total = int(mask.sum())
    if total == 0:
        raise FeatureError("area of an empty mask")
    boundary = {(int(x), int(y)) for x, y in contour.points.tolist()}
    on_mask = sum(
        1 for x, y in boundary if 0 <= y < mask.shape[0] and 0 <= x < mask.shape[1] and mask[y, x]
    )
    return (total - on_mask) + on_mask / 2.0


def compactness(perimeter_px: float, area_px: float) -> float:
    if area_px <= 0:
        raise FeatureError(f"compactness needs a positive area, got {area_px}")
    return perimeter_px * perimeter_px / area_px


def smoothness(profile: RadialProfile) -> float:
    """Mean absolute deviation of the radial lengths, relative to their mean."""
    r = profile.radial_lengths
    mean = r.mean()
    return float(np.abs(r - mean).mean() / mean)


def principal_axes(mask: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Centroid, major axis and minor axis (unit vectors, x/y order) from second moments."""
    rows, cols = np.nonzero(mask)
    if rows.size == 0:
        raise FeatureError("symmetry of an empty mask")
    coords = np.column_stack([cols, rows]).astype(np.float64)
    centroid = coords.mean(axis=0)
    cov = np.cov((coords - centroid).T, bias=True)
    if np.allclose(cov, 0.0):
        raise FeatureError("mask has zero spatial variance; no major axis")
    evals, evecs = np.linalg.eigh(cov)
    if evals[1] - evals[0] <= ISOTROPY_TOLERANCE * evals[1]:
        # no preferred direction (discs, squares); rounding noise must not pick one
        major = np.array([1.0, 0.0])
    else:
        major = evecs[:, int(np.argmax(evals))]
    # fix the sign so the result does not depend on the eigen solver
    if major[0] < 0 or (major[0] == 0 and major[1] < 0):
        major = -major
    minor = np.array([-major[1], major[0]])
    return centroid, major, minor


def symmetry(mask: np.ndarray) -> float:
    """
    Chord asymmetry about the long axis of the mass.

    The mask is resampled on a unit grid aligned with the principal axes and
    anchored at the centroid. The axis is the grid line along the major
    direction that crosses the most mask samples (the one nearest the centroid
    on ties). For every step along it, L+ and L- count the samples on either
    side; the result is sum|L+ - L-| / sum(L+ + L-), in [0, 1].
    """
    mask = np.asarray(mask, dtype=bool)
    centroid, major, minor = principal_axes(mask)
    rows, cols = np.nonzero(mask)
    rel = np.column_stack([cols, rows]).astype(np.float64) - centroid
    along, across = rel @ major, rel @ minor

    s = np.arange(math.floor(along.min()) - 1, math.ceil(along.max()) + 2, dtype=np.float64)
    t = np.arange(math.floor(across.min()) - 1, math.ceil(across.max()) + 2, dtype=np.float64)
    S, T = np.meshgrid(s, t, indexing="ij")
    px = centroid[0] + S * major[0] + T * minor[0]
    py = centroid[1] + S * major[1] + T * minor[1]
    # samples[i, j]: mask at position s[i] along the axis, offset t[j] across it
    samples = ndimage.map_coordinates(
        mask.astype(np.uint8), [py.ravel(), px.ravel()], order=0, mode="constant", cval=0
    ).reshape(S.shape) > 0

    chords = samples.sum(axis=0)
    longest = np.flatnonzero(chords == chords.max())
    axis = int(longest[np.argmin(np.abs(t[longest]))])

    plus = samples[:, axis + 1:].sum(axis=1)
    minus = samples[:, :axis].sum(axis=1)
    total = float((plus + minus).sum())
    if total == 0:
        return 0.0
    return float(np.abs(plus - minus).sum() / total)
