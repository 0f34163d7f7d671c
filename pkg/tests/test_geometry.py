from __future__ import annotations

import numpy as np
import pytest

from src.errors import DegenerateContour, EmptyRegion, SeedOutOfBounds
from src.segmentation.geometry import (
    Contour,
    check_seed,
    circle_points,
    contour_from_csv,
    contour_from_mask,
    contour_to_csv,
    contour_to_svg,
    fill_contour,
    resample_closed,
    trace_boundary,
)


def _disc(shape: tuple[int, int], center: tuple[float, float], r: float) -> np.ndarray:
    ys, xs = np.mgrid[0 : shape[0], 0 : shape[1]]
    return (xs - center[0]) ** 2 + (ys - center[1]) ** 2 <= r * r


def test_trace_square_is_clockwise_chain() -> None:
    mask = np.zeros((7, 7), dtype=bool)
    mask[2:5, 2:5] = True
    pts = trace_boundary(mask).tolist()
    assert pts == [[2, 2], [3, 2], [4, 2], [4, 3], [4, 4], [3, 4], [2, 4], [2, 3]]
    contour = contour_from_mask(mask)
    assert contour.signed_area() == 4.0
    assert contour.bbox() == (2, 2, 4, 4)


def test_trace_touching_image_edge() -> None:
    mask = np.zeros((5, 5), dtype=bool)
    mask[0:3, 0:5] = True
    contour = contour_from_mask(mask)
    assert contour.bbox() == (0, 0, 4, 2)
    assert np.array_equal(fill_contour(contour, mask.shape), mask)


def test_disc_boundary_fills_back() -> None:
    mask = _disc((80, 80), (40, 40), 25)
    contour = contour_from_mask(mask)
    filled = fill_contour(contour, mask.shape)
    inter = np.logical_and(filled, mask).sum()
    assert 2 * inter / (filled.sum() + mask.sum()) > 0.995
    assert np.all(mask[contour.ys, contour.xs])


def test_empty_mask_raises() -> None:
    with pytest.raises(EmptyRegion):
        trace_boundary(np.zeros((4, 4), dtype=bool))


@pytest.mark.parametrize(
    "points",
    [
        [[0, 0], [1, 0], [1, 1]],
        [[0, 0], [1, 0], [1, 0], [1, 1], [0, 1]],
        [[0, 0], [3, 0], [3, 3], [0, 3]],
        [[0, 0], [0.5, 0], [1, 1], [0, 1]],
    ],
)
def test_invalid_contours_raise(points: list) -> None:
    with pytest.raises(DegenerateContour):
        Contour(np.array(points))


def test_translate_keeps_shape() -> None:
    contour = contour_from_mask(_disc((40, 40), (20, 20), 8))
    moved = contour.translate(5, -3)
    assert np.array_equal(moved.points - contour.points, np.tile([5, -3], (len(contour), 1)))
    assert moved.signed_area() == contour.signed_area()


def test_seed_bounds() -> None:
    assert check_seed((3, 4), (5, 4)) == (3, 4)
    for seed in [(-1, 0), (0, 5), (4, 0)]:
        with pytest.raises(SeedOutOfBounds):
            check_seed(seed, (5, 4))


def test_resample_square_by_arc_length() -> None:
    square = np.array([[0.0, 0.0], [10.0, 0.0], [10.0, 10.0], [0.0, 10.0]])
    pts = resample_closed(square, 8)
    expected = [[0, 0], [5, 0], [10, 0], [10, 5], [10, 10], [5, 10], [0, 10], [0, 5]]
    assert np.allclose(pts, expected)


def test_circle_points_are_clockwise_on_screen() -> None:
    pts = circle_points((50.0, 50.0), 10.0, 16)
    assert np.allclose(np.hypot(pts[:, 0] - 50, pts[:, 1] - 50), 10.0)
    x, y = pts[:, 0], pts[:, 1]
    assert 0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)) > 0


def test_csv_and_svg_export() -> None:
    contour = contour_from_mask(_disc((30, 30), (15, 15), 6))
    text = contour_to_csv(contour)
    assert text.startswith("x,y\n")
    assert contour_from_csv(text) == contour
    svg = contour_to_svg([contour], 30, 30)
    assert svg.count("<polygon") == 1 and 'width="30"' in svg
