# src/imgio/annotations.py
# MIAS-style ground-truth records: "id tissue abnormality [severity x y radius]"

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple

from src.errors import AnnotationError

logger = logging.getLogger(__name__)

BOTTOM_LEFT = "bottom-left"
TOP_LEFT = "top-left"


class Tissue(Enum):
    FATTY = "F"
    FATTY_GLANDULAR = "G"
    DENSE = "D"


class Abnormality(Enum):
    CALCIFICATION = "CALC"
    CIRCUMSCRIBED = "CIRC"
    SPICULATED = "SPIC"
    ILL_DEFINED = "MISC"
    ARCHITECTURAL_DISTORTION = "ARCH"
    ASYMMETRY = "ASYM"
    NORMAL = "NORM"


class Severity(Enum):
    BENIGN = "B"
    MALIGNANT = "M"


@dataclass(frozen=True)
class Annotation:
    record_id: str
    tissue: Tissue
    abnormality: Abnormality
    severity: Optional[Severity] = None
    center: Optional[Tuple[float, float]] = None
    radius: Optional[float] = None
    origin: str = BOTTOM_LEFT
    # centre exactly as written in the source file, before any conversion
    raw_center: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        normal = self.abnormality is Abnormality.NORMAL
        if normal and (self.severity or self.center or self.radius is not None):
            raise AnnotationError(f"{self.record_id}: NORM record carries severity or coordinates")
        if not normal and self.severity is None:
            raise AnnotationError(f"{self.record_id}: {self.abnormality.value} record without severity")
        if self.radius is not None and self.radius <= 0:
            raise AnnotationError(f"{self.record_id}: radius must be > 0, got {self.radius}")
        if self.origin not in (BOTTOM_LEFT, TOP_LEFT):
            raise AnnotationError(f"{self.record_id}: unknown origin {self.origin!r}")

    @property
    def label(self) -> Optional[str]:
        """B/M class label used by the feature table."""
        return self.severity.value if self.severity else None

    def seed(self) -> Tuple[int, int]:
        """Integer (x, y) seed in the top-left convention."""
        if self.center is None:
            raise AnnotationError(f"{self.record_id}: record has no centre")
        if self.origin != TOP_LEFT:
            raise AnnotationError(
                f"{self.record_id}: centre still in {self.origin} convention; "
                "parse with image_height to convert"
            )
        return int(round(self.center[0])), int(round(self.center[1]))

    def to_dict(self) -> dict:
        return {
            "record_id": self.record_id,
            "tissue": self.tissue.name,
            "abnormality": self.abnormality.name,
            "severity": self.severity.name if self.severity else None,
            "center": list(self.center) if self.center else None,
            "raw_center": list(self.raw_center) if self.raw_center else None,
            "radius": self.radius,
            "origin": self.origin,
        }


def _code(enum_cls, token: str, line_no: int):
    try:
        return enum_cls(token)
    except ValueError:
        allowed = ",".join(m.value for m in enum_cls)
        raise AnnotationError(
            f"line {line_no}: unknown {enum_cls.__name__.lower()} code {token!r} (expected one of {allowed})"
        ) from None


def _number(token: str, name: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise AnnotationError(f"line {line_no}: non-numeric {name} {token!r}") from None
    if value != value or value in (float("inf"), float("-inf")):
        raise AnnotationError(f"line {line_no}: non-finite {name} {token!r}")
    return value


def parse_line(line: str, line_no: int = 1, image_height: Optional[int] = None) -> Annotation:
    tokens = line.split()
    if len(tokens) < 3:
        raise AnnotationError(f"line {line_no}: expected at least 3 fields, got {len(tokens)}")

    record_id = tokens[0]
    tissue = _code(Tissue, tokens[1], line_no)
    abnormality = _code(Abnormality, tokens[2], line_no)
    rest = tokens[3:]

    if abnormality is Abnormality.NORMAL:
        if rest:
            raise AnnotationError(f"line {line_no}: NORM record followed by {' '.join(rest)!r}")
        return Annotation(record_id, tissue, abnormality)

    if len(rest) not in (1, 4):
        raise AnnotationError(
            f"line {line_no}: expected severity or severity x y radius, got {len(rest)} fields"
        )
    severity = _code(Severity, rest[0], line_no)
    if len(rest) == 1:
        # MIAS lists some calcification clusters without a centre
        return Annotation(record_id, tissue, abnormality, severity)

    x = _number(rest[1], "x", line_no)
    y = _number(rest[2], "y", line_no)
    radius = _number(rest[3], "radius", line_no)
    if radius <= 0:
        raise AnnotationError(f"line {line_no}: radius must be > 0, got {rest[3]}")

    raw = (x, y)
    if image_height is None:
        return Annotation(record_id, tissue, abnormality, severity, raw, radius, BOTTOM_LEFT, raw)
    center = (x, image_height - 1 - y)
    return Annotation(record_id, tissue, abnormality, severity, center, radius, TOP_LEFT, raw)


def parse_annotations(text: str, image_height: Optional[int] = None) -> List[Annotation]:
    """
    One Annotation per non-empty, non-comment line.

    MIAS centres are measured from the bottom-left corner. Without
    `image_height` the raw centre is kept and the record says so; with it the
    centre is converted to top-left row-major coordinates (row = H - 1 - y).
    """
    records = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        records.append(parse_line(stripped, line_no, image_height))
    logger.debug(f"Parsed {len(records)} annotation records")
    return records


def read_annotations(path: Path, image_height: Optional[int] = None) -> List[Annotation]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_annotations(f.read(), image_height)


def find_annotation(records: List[Annotation], record_id: str) -> Annotation:
    """First record with the given id (MIAS repeats ids for multi-mass images)."""
    for record in records:
        if record.record_id == record_id:
            return record
    raise AnnotationError(f"no annotation with id {record_id!r}")
