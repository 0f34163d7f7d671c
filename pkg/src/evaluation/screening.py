# src/evaluation/screening.py
"""
Screening outcome counting and the derived metrics.

A false negative is an exam read as negative for a case whose label is
positive; fnr = FN / (TP + FN) = 1 - sensitivity. Metrics with a zero
denominator are undefined and come back as None.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.config import POSITIVE_LABEL
from src.errors import DatasetSchemaError, LengthMismatch

logger = logging.getLogger(__name__)

OUTCOME_HEADER = ("case_id", "prediction", "label")
_POSITIVE = {"positive", "1", "m", "malignant", "true"}
_NEGATIVE = {"negative", "0", "b", "benign", "false"}


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


def is_positive(value: Any, positive: Optional[str] = None) -> bool:
    """Map an outcome token (positive/negative, 1/0, M/B, bool) to a boolean."""
    if isinstance(value, bool):
        return value
    token = str(value).strip()
    if positive is not None:
        return token == positive
    low = token.lower()
    if low in _POSITIVE:
        return True
    if low in _NEGATIVE:
        return False
    raise DatasetSchemaError(f"unrecognized outcome {value!r}; expected positive/negative, 1/0 or M/B")


def confusion(predictions: Sequence, labels: Sequence, positive: Optional[str] = None) -> ConfusionMatrix:
    if len(predictions) != len(labels):
        raise LengthMismatch(f"{len(predictions)} predictions but {len(labels)} labels")
    tp = fp = tn = fn = 0
    for pred, label in zip(predictions, labels):
        p, l = is_positive(pred, positive), is_positive(label, positive)
        if p and l:
            tp += 1
        elif p:
            fp += 1
        elif l:
            fn += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fp, tn, fn)


def _ratio(num: int, den: int) -> Optional[float]:
    return num / den if den else None


def wilson_ci(successes: int, trials: int, z: float = 1.96) -> Optional[Tuple[float, float]]:
    """
    Wilson score confidence interval for a proportion.
    Default z=1.96 for 95% CI; None when there are no trials.
    """
    if trials == 0:
        return None

    p_hat = successes / trials
    denom = 1 + z**2 / trials
    center = (p_hat + z**2 / (2 * trials)) / denom
    spread = z * math.sqrt(
        (p_hat * (1 - p_hat) + z**2 / (4 * trials)) / trials
    ) / denom

    return max(0.0, center - spread), min(1.0, center + spread)


def screening_metrics(cm: ConfusionMatrix) -> Dict[str, Any]:
    sens_ci = wilson_ci(cm.tp, cm.tp + cm.fn)
    spec_ci = wilson_ci(cm.tn, cm.tn + cm.fp)
    return {
        "sensitivity": _ratio(cm.tp, cm.tp + cm.fn),
        "specificity": _ratio(cm.tn, cm.tn + cm.fp),
        "fnr": _ratio(cm.fn, cm.tp + cm.fn),
        "accuracy": _ratio(cm.tp + cm.tn, cm.total),
        "precision": _ratio(cm.tp, cm.tp + cm.fp),
        "sensitivity_ci95": list(sens_ci) if sens_ci else None,
        "specificity_ci95": list(spec_ci) if spec_ci else None,
    }


# -------- outcome files --------

def parse_outcomes(text: str) -> Tuple[List[str], List[str], List[str]]:
    """case_id,prediction,label rows -> (ids, predictions, labels)."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or tuple(h.strip() for h in lines[0].split(",")) != OUTCOME_HEADER:
        raise DatasetSchemaError(f"outcome file must start with header {','.join(OUTCOME_HEADER)}")
    ids, preds, labels = [], [], []
    for line_no, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != 3:
            raise DatasetSchemaError(f"line {line_no}: expected 3 columns, got {len(cells)}")
        ids.append(cells[0])
        preds.append(cells[1])
        labels.append(cells[2])
    return ids, preds, labels


def read_outcomes(path: Path) -> Tuple[List[str], List[str], List[str]]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_outcomes(f.read())


def evaluate_outcomes(predictions: Sequence, labels: Sequence, positive: Optional[str] = None) -> Dict[str, Any]:
    cm = confusion(predictions, labels, positive)
    logger.debug(f"Confusion over {cm.total} cases: {cm.to_dict()}")
    return {"n": cm.total, "confusion": cm.to_dict(), "metrics": screening_metrics(cm)}


def evaluate_labels(predictions: Sequence[str], labels: Sequence[str]) -> Dict[str, Any]:
    """Scores class-label predictions with the malignant label as the positive class."""
    return evaluate_outcomes(predictions, labels, positive=POSITIVE_LABEL)
