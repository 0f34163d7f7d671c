from __future__ import annotations

import json

import numpy as np
import pytest

from src.errors import ConfigError, SeedOutOfBounds
from src.evaluation import compare
from src.evaluation.compare import (
    CompareConfig,
    ac_initial_points,
    annotation_disc,
    compare_methods,
    mean_scores,
    overlay_image,
)
from src.evaluation.report import ANNOTATION_GT_NOTE, comparison_table, write_comparison_report
from src.imgio.annotations import Abnormality, Annotation, Severity, Tissue, TOP_LEFT
from src.imgio.pgm import Image


def test_all_methods_score_the_disc(disc_phantom) -> None:
    image, truth = disc_phantom
    report = compare_methods(image, (60, 60), truth, case_id="disc", annotation_radius=30.0)
    assert [r.method for r in report.rows] == ["saliency", "rg", "ac"]
    assert all(r.status == "ok" for r in report.rows)
    assert report.row("rg").dice == 1.0
    assert report.row("saliency").dice >= 0.95
    assert report.row("ac").dice >= 0.8


def test_failing_method_is_recorded(disc_phantom) -> None:
    _, truth = disc_phantom
    flat = Image(np.full(truth.shape, 90), 255)
    report = compare_methods(flat, (60, 60), truth, CompareConfig(methods=("saliency", "rg")))
    failed, ok = report.row("saliency"), report.row("rg")
    assert failed.status == "failed" and failed.error.startswith("NoContrast")
    assert failed.dice is None
    assert ok.status == "ok" and ok.mask.all()


def test_rows_serialize_with_optional_timings(disc_phantom) -> None:
    image, truth = disc_phantom
    report = compare_methods(image, (60, 60), truth, CompareConfig(methods=("rg",)))
    plain = report.to_dict()
    assert plain["schema_version"] == 1 and plain["seed"] == [60, 60]
    assert "seconds" not in plain["rows"][0]
    assert report.to_dict(record_timings=True)["rows"][0]["seconds"] >= 0.0
    with pytest.raises(KeyError):
        report.row("ac")


def test_bad_inputs(disc_phantom) -> None:
    image, truth = disc_phantom
    with pytest.raises(SeedOutOfBounds):
        compare_methods(image, (500, 5), truth)
    with pytest.raises(ConfigError):
        compare_methods(image, (60, 60), truth[:10])
    with pytest.raises(ConfigError):
        CompareConfig(methods=("watershed",))
    with pytest.raises(ConfigError):
        CompareConfig(ac_init_radius_factor=0.0)
    with pytest.raises(ConfigError):
        CompareConfig(ac_init_radius=-1.0)


def test_annotation_disc_and_ac_start() -> None:
    ann = Annotation("mdb999", Tissue.FATTY, Abnormality.CIRCUMSCRIBED, Severity.BENIGN, (20.0, 30.0), 5.0, TOP_LEFT)
    disc = annotation_disc(ann, (60, 50))
    assert disc[30, 20] and disc[30, 25] and not disc[30, 26]
    pts = ac_initial_points((20, 30), (60, 50), CompareConfig(), ann.radius)
    radius = np.hypot(pts[:, 0] - 20, pts[:, 1] - 30)
    assert radius.max() == pytest.approx(1.4 * 5.0)


def test_ac_start_without_annotation_uses_configured_radius() -> None:
    pts = ac_initial_points((50, 50), (100, 100), CompareConfig(ac_init_radius=12.0))
    assert np.hypot(pts[:, 0] - 50, pts[:, 1] - 50) == pytest.approx(np.full(len(pts), 12.0))


def test_ac_result_does_not_depend_on_ground_truth(disc_phantom) -> None:
    image, truth = disc_phantom
    config = CompareConfig(methods=("ac",))
    small = np.zeros_like(truth)
    small[55:66, 55:66] = True
    a = compare_methods(image, (60, 60), truth, config, annotation_radius=30.0).row("ac")
    b = compare_methods(image, (60, 60), small, config, annotation_radius=30.0).row("ac")
    assert np.array_equal(a.mask, b.mask)
    assert a.dice != b.dice


def test_initial_points_are_clipped() -> None:
    pts = ac_initial_points((1, 1), (20, 20), CompareConfig(), 10.0)
    assert pts.min() >= 0 and pts.max() <= 19


def test_overlay_burns_boundary() -> None:
    image = Image(np.full((10, 10), 3), 255)
    mask = np.zeros((10, 10), dtype=bool)
    mask[2:6, 2:6] = True
    out = overlay_image(image, mask)
    assert out.pixels[2, 2] == 255 and out.pixels[3, 3] == 3
    assert (out.pixels == 255).sum() == 12


def test_mean_scores_and_report_files(disc_phantom, tmp_path) -> None:
    image, truth = disc_phantom
    good = compare_methods(image, (60, 60), truth, CompareConfig(methods=("rg",)), case_id="a")
    flat = Image(np.full(truth.shape, 90), 255)
    bad = compare_methods(flat, (60, 60), truth, CompareConfig(methods=("saliency", "rg")), case_id="b",
                          ground_truth_kind="annotation")
    means = mean_scores([good, bad])
    assert means["saliency"] == {"cases": 1, "failed": 1, "dice": None, "jaccard": None, "hausdorff": None}
    assert means["rg"]["cases"] == 2 and means["rg"]["failed"] == 0
    assert "ac" not in means

    paths = write_comparison_report(tmp_path, [good, bad], means)
    assert [p.name for p in paths] == ["comparison.json", "comparison.txt", "comparison.md"]
    summary = json.loads((tmp_path / "comparison.json").read_text(encoding="utf-8"))
    assert summary["num_cases"] == 2 and summary["note"] == ANNOTATION_GT_NOTE
    assert ANNOTATION_GT_NOTE in (tmp_path / "comparison.md").read_text(encoding="utf-8")
    assert "failed (NoContrast)" in comparison_table([bad])


def test_unexpected_exception_becomes_failed_row(disc_phantom, monkeypatch) -> None:
    image, truth = disc_phantom

    def broken(method, *args, **kwargs):
        if method == "saliency":
            raise RuntimeError("boom")
        return truth

    monkeypatch.setattr(compare, "run_method", broken)
    report = compare_methods(image, (60, 60), truth, CompareConfig(methods=("saliency", "rg")))
    assert report.row("saliency").status == "failed"
    assert report.row("saliency").error == "RuntimeError: boom"
    assert report.row("rg").status == "ok" and report.row("rg").dice == 1.0
