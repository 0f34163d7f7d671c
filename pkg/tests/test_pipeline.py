from __future__ import annotations

import json

import numpy as np
import pytest

from src.config import OUTCOMES_DIR, PHANTOM_SUITE_PATH
from src.errors import PhantomSpecError
from src.evaluation.compare import CompareConfig
from src.features.radiomics import read_feature_csv
from src.imgio.pgm import read_pgm
from src.imgio.phantoms import synth_phantom
from src.learn.models import ALGORITHMS
from src.pipeline import compare_suite, feature_table, screening_report, train_suite
from src.pipeline.phantom_suite import build_suite, load_suite, write_suite
from src.segmentation.region_growing import region_growing
from src.segmentation.saliency import saliency_segment
from src.utils import read_jsonl

SMALL_SUITE = {
    "width": 128,
    "height": 128,
    "rng_seed": 3,
    "noise_levels": [0, 5],
    "fg_level": 200,
    "bg_level": 60,
    "center_jitter": 5,
    "discs": {"count": 4, "radius": [15, 25], "label": "B"},
    "ellipses": {"count": 4, "a": [25, 35], "axis_ratio": [0.4, 0.6], "min_b": 12, "label": "M"},
}


def _dice(a: np.ndarray, b: np.ndarray) -> float:
    return 2 * np.logical_and(a, b).sum() / (a.sum() + b.sum())


def test_build_suite_is_seeded_and_labelled() -> None:
    cases = build_suite(SMALL_SUITE)
    assert [c.case_id for c in cases][:2] == ["disc_000", "disc_001"]
    assert [c.label for c in cases] == ["B"] * 4 + ["M"] * 4
    assert [c.spec.noise_sigma for c in cases[:4]] == [0.0, 5.0, 0.0, 5.0]
    again = build_suite(SMALL_SUITE)
    assert [c.to_dict() for c in cases] == [c.to_dict() for c in again]
    for case in cases:
        if case.spec.shape.kind == "disc":
            assert 15 <= case.spec.shape.radius <= 25
        else:
            assert case.spec.shape.b >= 12


def test_bundled_suite_definition_loads() -> None:
    cases = load_suite(PHANTOM_SUITE_PATH)
    assert len(cases) == 40
    assert {c.label for c in cases} == {"B", "M"}


def test_bad_suite_definition() -> None:
    with pytest.raises(PhantomSpecError):
        build_suite({"width": 64})


def test_pipeline_steps_end_to_end(tmp_path) -> None:
    phantoms, comparisons, reports = tmp_path / "phantoms", tmp_path / "comparisons", tmp_path / "reports"
    manifest = write_suite(build_suite(SMALL_SUITE), phantoms)
    rows = list(read_jsonl(manifest))
    assert len(rows) == 8 and rows[0]["schema_version"] == 1
    assert read_pgm(phantoms / "disc_000.pgm").shape == (128, 128)

    config = CompareConfig(methods=("saliency", "rg"))
    compared = compare_suite.run(manifest, phantoms, comparisons, reports, config)
    assert len(compared) == 8
    assert (reports / "comparison.md").exists()
    assert len(list(read_jsonl(comparisons / "comparison_rows.jsonl"))) == 8

    features = tmp_path / "features.csv"
    n = feature_table.run(manifest, phantoms, comparisons, features)
    ok = sum(r.row("saliency").status == "ok" for r in compared)
    assert 6 <= n <= ok
    assert {label for _, _, label in read_feature_csv(features)} <= {"B", "M"}

    summary = train_suite.run(features, tmp_path / "models", reports, folds=2, seed=1)
    assert set(summary["results"]) == set(ALGORITHMS)
    assert json.loads((reports / "cross_validation.json").read_text(encoding="utf-8"))["n"] == n

    results = screening_report.run(OUTCOMES_DIR, reports)
    assert results["table3_n598"]["confusion"] == {"tp": 39, "fp": 27, "tn": 511, "fn": 21}
    assert any(name.startswith("cv_") for name in results)
    assert (reports / "screening.csv").exists()


@pytest.mark.slow
def test_disc_suite_segmentation_quality() -> None:
    definition = json.loads(PHANTOM_SUITE_PATH.read_text(encoding="utf-8"))
    definition["ellipses"] = {"count": 0}
    for case in build_suite(definition):
        image, truth = synth_phantom(case.spec)
        mask = saliency_segment(image, case.seed)
        assert mask[case.seed[1], case.seed[0]]
        floor = 0.90 if case.spec.noise_sigma >= 10 else 0.95
        assert _dice(mask, truth) >= floor, case.case_id
        if case.spec.noise_sigma == 0:
            assert np.array_equal(region_growing(image, case.seed, 30), truth)
