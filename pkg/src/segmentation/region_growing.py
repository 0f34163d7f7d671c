# src/segmentation/region_growing.py

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import ndimage

from src.config import RG_TAU
from src.errors import ConfigError
from src.imgio.pgm import Image
from src.segmentation.geometry import check_seed

logger = logging.getLogger(__name__)

# 4-connectivity
CROSS = ndimage.generate_binary_structure(2, 1)


@dataclass(frozen=True)
class RegionGrowingParams:
    tau: float = RG_TAU

    def __post_init__(self):
        if self.tau < 0:
            raise ConfigError(f"tau must be >= 0, got {self.tau}")


def region_growing(image: Image, seed: Tuple[int, int], tau: float = RG_TAU) -> np.ndarray:
    """
    4-connected region of pixels whose gray level is within `tau` of the
    seed's own gray level (seed-relative, not running mean).
    """
    if tau < 0:
        raise ConfigError(f"tau must be >= 0, got {tau}")
    x, y = check_seed(seed, image.shape)
    gray = image.pixels.astype(np.int64)
    similar = np.abs(gray - gray[y, x]) <= tau
    labels, n = ndimage.label(similar, structure=CROSS)
    mask = labels == labels[y, x]
    logger.debug(f"Region growing from ({x}, {y}) tau={tau}: {int(mask.sum())} px in 1 of {n} components")
    return mask
