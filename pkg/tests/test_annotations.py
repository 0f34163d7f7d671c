from __future__ import annotations

import pytest

from src.errors import AnnotationError
from src.imgio.annotations import (
    BOTTOM_LEFT,
    TOP_LEFT,
    Abnormality,
    Severity,
    Tissue,
    find_annotation,
    parse_annotations,
    parse_line,
    read_annotations,
)


def test_parse_full_record_keeps_raw_centre() -> None:
    a = parse_line("mdb001 G CIRC B 535 425 197")
    assert a.tissue is Tissue.FATTY_GLANDULAR
    assert a.abnormality is Abnormality.CIRCUMSCRIBED
    assert a.severity is Severity.BENIGN
    assert a.center == (535.0, 425.0)
    assert a.radius == 197.0
    assert a.origin == BOTTOM_LEFT
    assert a.label == "B"


def test_normal_record_has_no_geometry() -> None:
    a = parse_line("mdb003 D NORM")
    assert a.abnormality is Abnormality.NORMAL
    assert a.severity is None and a.center is None and a.radius is None


def test_severity_only_record() -> None:
    a = parse_line("mdb216 D CALC M")
    assert a.severity is Severity.MALIGNANT
    assert a.center is None


def test_conversion_to_top_left() -> None:
    a = parse_line("mdb001 G CIRC B 535 425 197", image_height=1024)
    assert a.origin == TOP_LEFT
    assert a.center == (535.0, 598.0)
    assert a.raw_center == (535.0, 425.0)
    assert a.seed() == (535, 598)


def test_seed_requires_conversion() -> None:
    with pytest.raises(AnnotationError):
        parse_line("mdb001 G CIRC B 535 425 197").seed()


@pytest.mark.parametrize(
    "line",
    [
        "mdb001 X CIRC B 535 425 197",
        "mdb001 G BLOB B 535 425 197",
        "mdb001 G CIRC Q 535 425 197",
        "mdb001 G CIRC B 535 425",
        "mdb001 G CIRC B 535 abc 197",
        "mdb001 G CIRC B 535 425 0",
        "mdb001 G NORM B",
        "mdb001 G",
        "mdb001 G CIRC",
    ],
)
def test_malformed_lines_raise(line: str) -> None:
    with pytest.raises(AnnotationError):
        parse_line(line)


def test_parse_file_skips_blank_and_comment_lines(tmp_path) -> None:
    path = tmp_path / "info.txt"
    path.write_text("# MIAS subset\nmdb001 G CIRC B 535 425 197\n\nmdb003 D NORM\n", encoding="utf-8")
    records = read_annotations(path)
    assert [r.record_id for r in records] == ["mdb001", "mdb003"]
    assert find_annotation(records, "mdb003").abnormality is Abnormality.NORMAL
    with pytest.raises(AnnotationError):
        find_annotation(records, "mdb999")


def test_error_names_the_line() -> None:
    with pytest.raises(AnnotationError, match="line 2"):
        parse_annotations("mdb001 G CIRC B 535 425 197\nmdb002 G CIRC B 1 2 -3\n")
