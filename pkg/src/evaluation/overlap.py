# src/evaluation/overlap.py
# Mask agreement: Dice, Jaccard and the symmetric boundary Hausdorff distance

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy.ndimage import binary_erosion
from scipy.spatial.distance import directed_hausdorff

from src.errors import LengthMismatch, UndefinedOverlap


@dataclass(frozen=True)
class OverlapRow:
    dice: float
    jaccard: float
    hausdorff: Optional[float]  # None when exactly one mask is empty

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def mask_boundary(mask: np.ndarray) -> np.ndarray:
    """Foreground pixels with a 4-neighbour outside the mask (image edge counts as outside)."""
    mask = np.asarray(mask, dtype=bool)
    return mask & ~binary_erosion(mask, border_value=0)


def hausdorff(mask_a: np.ndarray, mask_b: np.ndarray) -> float:
    pa = np.argwhere(mask_boundary(mask_a)).astype(np.float64)
    pb = np.argwhere(mask_boundary(mask_b)).astype(np.float64)
    return float(max(directed_hausdorff(pa, pb)[0], directed_hausdorff(pb, pa)[0]))


def overlap(mask_a: np.ndarray, mask_b: np.ndarray) -> OverlapRow:
    a = np.asarray(mask_a, dtype=bool)
    b = np.asarray(mask_b, dtype=bool)
    if a.shape != b.shape:
        raise LengthMismatch(f"mask shapes differ: {a.shape} vs {b.shape}")
    size_a, size_b = int(a.sum()), int(b.sum())
    if size_a == 0 and size_b == 0:
        raise UndefinedOverlap("both masks are empty")

    inter = int(np.logical_and(a, b).sum())
    union = size_a + size_b - inter
    dice = 2.0 * inter / (size_a + size_b)
    jaccard = inter / union
    hd = hausdorff(a, b) if size_a and size_b else None
    return OverlapRow(dice, jaccard, hd)
