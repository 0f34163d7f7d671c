# src/features/radiomics.py
# Full mass descriptor vector and its CSV schema

from __future__ import annotations

import logging
import math
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Iterable, List, Optional, Tuple

import numpy as np

from src.errors import DatasetSchemaError, FeatureError
from src.features.fractal import fractal_dimension
from src.features.shape import area, compactness, perimeter, radial_profile, smoothness, symmetry
from src.imgio.pgm import Image
from src.segmentation.geometry import Contour
from src.utils import atomic_write_text

logger = logging.getLogger(__name__)

FEATURE_NAMES = (
    "radius",
    "perimeter",
    "area",
    "compactness",
    "smoothness",
    "symmetry",
    "fractal_dimension",
    "texture",
)
CSV_HEADER = ("id",) + FEATURE_NAMES + ("label",)


@dataclass(frozen=True)
class FeatureVector:
    radius: float
    perimeter: float
    area: float
    compactness: float
    smoothness: float
    symmetry: float
    fractal_dimension: float
    texture: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise FeatureError(f"{f.name} is not finite: {value}")

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=np.float64)


def texture(image: Image, mask: np.ndarray) -> float:
    """Population variance of the gray levels under the mask."""
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != image.shape:
        raise FeatureError(f"mask shape {mask.shape} does not match image {image.shape}")
    values = image.pixels[mask].astype(np.float64)
    if values.size == 0:
        raise FeatureError("texture of an empty mask")
    return float(np.var(values))


def _local_frame(mask: np.ndarray, contour: Contour) -> Tuple[np.ndarray, Contour]:
    rows, cols = np.nonzero(mask)
    x0 = min(int(cols.min()), int(contour.xs.min()))
    y0 = min(int(rows.min()), int(contour.ys.min()))
    x1 = max(int(cols.max()), int(contour.xs.max()))
    y1 = max(int(rows.max()), int(contour.ys.max()))
    local_mask = np.zeros((y1 - y0 + 1, x1 - x0 + 1), dtype=bool)
    local_mask[rows - y0, cols - x0] = True
    return local_mask, contour.translate(-x0, -y0)


def extract_all(image: Image, mask: np.ndarray, contour: Contour) -> FeatureVector:
    """All eight descriptors, computed in the mass's local frame."""
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != image.shape:
        raise FeatureError(f"mask shape {mask.shape} does not match image {image.shape}")
    if not mask.any():
        raise FeatureError("feature extraction on an empty mask")

    local_mask, local = _local_frame(mask, contour)
    profile = radial_profile(local)
    p = perimeter(local)
    a = area(local_mask, local)
    return FeatureVector(
        radius=profile.mean_radius,
        perimeter=p,
        area=a,
        compactness=compactness(p, a),
        smoothness=smoothness(profile),
        symmetry=symmetry(local_mask),
        fractal_dimension=fractal_dimension(local),
        texture=texture(image, mask),
    )


# -------- CSV schema --------

def format_row(case_id: str, vector: FeatureVector, label: Optional[str] = None) -> str:
    if "," in case_id:
        raise DatasetSchemaError(f"case id {case_id!r} contains a comma")
    values = ",".join(repr(float(v)) for v in astuple(vector))
    return f"{case_id},{values},{label or ''}\n"


def header_line() -> str:
    return ",".join(CSV_HEADER) + "\n"


def write_feature_csv(path: Path, rows: Iterable[Tuple[str, FeatureVector, Optional[str]]]) -> None:
    text = header_line() + "".join(format_row(cid, vec, label) for cid, vec, label in rows)
    atomic_write_text(path, text)
    logger.info(f"Wrote: {path}")


def append_feature_row(path: Path, case_id: str, vector: FeatureVector, label: Optional[str] = None) -> None:
    """Append one row, writing the header first when the file is new or empty."""
    path = Path(path)
    existing = path.read_text(encoding="utf-8") if path.exists() else ""
    if existing and existing.splitlines()[0] != ",".join(CSV_HEADER):
        raise DatasetSchemaError(f"{path}: header does not match the feature schema")
    if existing and not existing.endswith("\n"):
        existing += "\n"
    atomic_write_text(path, (existing or header_line()) + format_row(case_id, vector, label))


def parse_feature_csv(text: str) -> List[Tuple[str, FeatureVector, Optional[str]]]:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise DatasetSchemaError("feature CSV is empty")
    header = tuple(h.strip() for h in lines[0].split(","))
    if header != CSV_HEADER:
        raise DatasetSchemaError(f"feature CSV header {header} does not match {CSV_HEADER}")

    rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(CSV_HEADER):
            raise DatasetSchemaError(f"line {line_no}: expected {len(CSV_HEADER)} columns, got {len(cells)}")
        try:
            values = [float(c) for c in cells[1:-1]]
            vector = FeatureVector(*values)
        except (ValueError, FeatureError) as e:
            raise DatasetSchemaError(f"line {line_no}: {e}") from e
        label = cells[-1].strip() or None
        rows.append((cells[0], vector, label))
    return rows


def read_feature_csv(path: Path) -> List[Tuple[str, FeatureVector, Optional[str]]]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_feature_csv(f.read())
