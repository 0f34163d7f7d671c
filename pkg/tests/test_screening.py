from __future__ import annotations

import pytest

from src.config import OUTCOMES_DIR
from src.errors import DatasetSchemaError, LengthMismatch
from src.evaluation.report import screening_table, write_screening_report
from src.evaluation.screening import (
    ConfusionMatrix,
    confusion,
    evaluate_labels,
    evaluate_outcomes,
    is_positive,
    parse_outcomes,
    read_outcomes,
    screening_metrics,
    wilson_ci,
)


@pytest.mark.parametrize(
    "name,counts,sens,spec,fnr",
    [
        ("table3_n598.csv", (39, 27, 511, 21), 0.650, 0.9498, 0.350),
        ("table3_n21.csv", (6, 0, 5, 10), 0.375, 1.0, 0.625),
    ],
)
def test_bundled_outcome_files(name: str, counts: tuple, sens: float, spec: float, fnr: float) -> None:
    _, preds, labels = read_outcomes(OUTCOMES_DIR / name)
    result = evaluate_outcomes(preds, labels)
    cm = result["confusion"]
    assert (cm["tp"], cm["fp"], cm["tn"], cm["fn"]) == counts
    assert result["n"] == sum(counts)
    m = result["metrics"]
    assert m["sensitivity"] == pytest.approx(sens, abs=5e-4)
    assert m["specificity"] == pytest.approx(spec, abs=5e-4)
    assert m["fnr"] == pytest.approx(fnr, abs=5e-4)
    assert m["fnr"] == pytest.approx(1 - m["sensitivity"])


def test_confusion_counts_each_cell() -> None:
    cm = confusion(["M", "M", "B", "B", "M"], ["M", "B", "B", "M", "M"])
    assert cm == ConfusionMatrix(tp=2, fp=1, tn=1, fn=1)
    assert cm.total == 5


def test_confusion_is_order_invariant(rng) -> None:
    preds = rng.choice(["positive", "negative"], size=60).tolist()
    labels = rng.choice(["positive", "negative"], size=60).tolist()
    order = rng.permutation(60)
    shuffled = confusion([preds[i] for i in order], [labels[i] for i in order])
    assert shuffled == confusion(preds, labels)


@pytest.mark.parametrize("token,expected", [("positive", True), ("NEGATIVE", False), ("1", True), ("0", False),
                                             ("M", True), ("b", False), (True, True), (" malignant ", True)])
def test_outcome_tokens(token, expected: bool) -> None:
    assert is_positive(token) is expected


def test_explicit_positive_label() -> None:
    assert is_positive("M", positive="M")
    assert not is_positive("X", positive="M")
    with pytest.raises(DatasetSchemaError):
        is_positive("maybe")


def test_zero_denominators_are_undefined() -> None:
    m = screening_metrics(ConfusionMatrix(tp=0, fp=0, tn=4, fn=0))
    assert m["sensitivity"] is None and m["fnr"] is None and m["precision"] is None
    assert m["sensitivity_ci95"] is None
    assert m["specificity"] == 1.0
    assert m["accuracy"] == 1.0


def test_wilson_interval() -> None:
    lo, hi = wilson_ci(5, 10)
    assert (lo, hi) == pytest.approx((0.2366, 0.7634), abs=1e-4)
    lo, hi = wilson_ci(0, 10)
    assert lo == pytest.approx(0.0, abs=1e-12)
    assert hi == pytest.approx(0.2775, abs=1e-4)
    assert wilson_ci(0, 0) is None


def test_length_mismatch() -> None:
    with pytest.raises(LengthMismatch):
        confusion(["M"], ["M", "B"])


def test_parse_outcomes_errors() -> None:
    assert parse_outcomes("case_id,prediction,label\na,1,0\n") == (["a"], ["1"], ["0"])
    with pytest.raises(DatasetSchemaError):
        parse_outcomes("id,pred,label\na,1,0\n")
    with pytest.raises(DatasetSchemaError):
        parse_outcomes("case_id,prediction,label\na,1\n")


def test_evaluate_labels_uses_malignant_as_positive() -> None:
    result = evaluate_labels(["M", "B", "B"], ["M", "M", "B"])
    assert result["confusion"] == {"tp": 1, "fp": 0, "tn": 1, "fn": 1}


def test_screening_report_files(tmp_path) -> None:
    results = {"demo": evaluate_outcomes(["1", "0", "0"], ["1", "1", "0"])}
    paths = write_screening_report(tmp_path, results)
    assert sorted(p.name for p in paths) == ["screening.csv", "screening.json", "screening.md", "screening.txt"]
    csv_lines = (tmp_path / "screening.csv").read_text(encoding="utf-8").splitlines()
    assert csv_lines[1].startswith("demo,3,1,0,1,1,0.5,1.0,0.5,")
    table = screening_table(results)
    assert "0.5000" in table and table.splitlines()[0].startswith("source")
