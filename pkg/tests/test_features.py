from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.ndimage import binary_erosion
from skimage.draw import line

from src.errors import DatasetSchemaError, FeatureError
from src.features import (
    RadialProfile,
    area,
    compactness,
    extract_all,
    perimeter,
    radial_profile,
    smoothness,
    symmetry,
)
from src.features.fractal import box_counting_dimension, box_counts
from src.features.radiomics import (
    CSV_HEADER,
    FeatureVector,
    append_feature_row,
    parse_feature_csv,
    read_feature_csv,
    texture,
    write_feature_csv,
)
from src.imgio.pgm import Image
from src.imgio.phantoms import Ellipse, PhantomSpec, synth_phantom
from src.segmentation.geometry import contour_from_mask
from tests.conftest import disc_spec


def _square_mask(side: int = 101, size: int = 120) -> np.ndarray:
    mask = np.zeros((size, size), dtype=bool)
    mask[5:5 + side, 5:5 + side] = True
    return mask


def _koch(side: float, iterations: int) -> np.ndarray:
    pts = [np.array([0.0, 0.0]), np.array([side, 0.0])]
    rot = np.array([[0.5, -math.sqrt(3) / 2], [math.sqrt(3) / 2, 0.5]])
    for _ in range(iterations):
        out = [pts[0]]
        for a, b in zip(pts[:-1], pts[1:]):
            d = (b - a) / 3.0
            p1, p2 = a + d, a + 2 * d
            out += [p1, p1 + rot @ d, p2, b]
        pts = out
    return np.array(pts)


def _render(points: np.ndarray) -> np.ndarray:
    pts = np.rint(points - points.min(axis=0)).astype(int)
    bitmap = np.zeros((pts[:, 1].max() + 1, pts[:, 0].max() + 1), dtype=bool)
    for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
        rr, cc = line(y0, x0, y1, x1)
        bitmap[rr, cc] = True
    return bitmap


def _vector(**overrides) -> FeatureVector:
    values = dict(
        radius=10.0, perimeter=60.0, area=300.0, compactness=12.0,
        smoothness=0.01, symmetry=0.02, fractal_dimension=1.1, texture=4.0,
    )
    values.update(overrides)
    return FeatureVector(**values)


# -------- shape --------

def test_square_perimeter_and_area() -> None:
    mask = _square_mask()
    contour = contour_from_mask(mask)
    assert perimeter(contour) == 400.0
    assert area(mask, contour) == 101 * 101 - 200
    assert compactness(400.0, 10001.0) == pytest.approx(16.0, rel=1e-3)


def test_disc_descriptors() -> None:
    _, mask = synth_phantom(disc_spec(radius=50, size=140))
    contour = contour_from_mask(mask)
    p = perimeter(contour)
    assert p == pytest.approx(2 * math.pi * 50, rel=0.05)
    assert area(mask, contour) == pytest.approx(math.pi * 50 ** 2, rel=0.02)
    c = compactness(p, area(mask, contour))
    assert 4 * math.pi <= c <= 1.13 * 4 * math.pi
    profile = radial_profile(contour)
    assert profile.mean_radius == pytest.approx(50.0, abs=1.0)
    assert smoothness(profile) < 0.02
    assert symmetry(mask) <= 0.03


def test_radial_profile_centroid_in_image_frame() -> None:
    contour = contour_from_mask(_square_mask(side=21))
    cx, cy = radial_profile(contour).centroid
    assert (cx, cy) == pytest.approx((15.0, 15.0))


def test_right_triangle_lies_on_one_side_of_its_long_axis() -> None:
    ys, xs = np.mgrid[0:80, 0:80]
    mask = (xs >= 10) & (ys >= 10) & (xs + ys <= 70)
    assert symmetry(mask) > 0.7


def test_half_disc_cut_along_its_long_axis_is_asymmetric() -> None:
    ys, xs = np.mgrid[0:101, 0:101]
    mask = ((xs - 50) ** 2 + (ys - 50) ** 2 <= 40**2) & (ys <= 50)
    assert symmetry(mask) >= 0.95


def test_mirrored_mask_is_symmetric(rng) -> None:
    ys, xs = np.mgrid[0:61, 0:81]
    for _ in range(5):
        heights = rng.integers(3, 15, size=81)
        half = (ys <= 30) & (30 - ys <= heights[xs])
        union = half | half[::-1]
        assert symmetry(union) <= 0.03


def test_smoothness_of_alternating_radii() -> None:
    profile = RadialProfile((0.0, 0.0), np.array([40.0, 60.0] * 16))
    assert smoothness(profile) == pytest.approx(0.2)


def test_ellipse_radial_profile_extremes() -> None:
    spec = PhantomSpec(160, 160, Ellipse((80.0, 80.0), 60.0, 30.0), fg_level=200, bg_level=50)
    _, mask = synth_phantom(spec)
    lengths = radial_profile(contour_from_mask(mask)).radial_lengths
    assert lengths.min() == pytest.approx(30.0, abs=1.0)
    assert lengths.max() == pytest.approx(60.0, abs=1.0)


def test_compactness_needs_area() -> None:
    with pytest.raises(FeatureError):
        compactness(10.0, 0.0)


def test_hundred_pixel_square_area_rule() -> None:
    mask = _square_mask(side=100)
    assert area(mask, contour_from_mask(mask)) == 9604 + 198


def test_area_matches_boundary_erosion_oracle() -> None:
    _, mask = synth_phantom(PhantomSpec(90, 90, Ellipse((45.0, 45.0), 30.0, 14.0, 30.0)))
    boundary = mask & ~binary_erosion(mask)
    assert area(mask, contour_from_mask(mask)) == mask.sum() - boundary.sum() / 2


def test_compactness_is_scale_stable() -> None:
    values = []
    for r in (25, 50):
        _, mask = synth_phantom(disc_spec(radius=r, size=2 * r + 20))
        contour = contour_from_mask(mask)
        values.append(compactness(perimeter(contour), area(mask, contour)))
    assert values[0] == pytest.approx(values[1], rel=0.05)
    assert min(values) >= 4 * math.pi - 0.5


# -------- fractal --------

def test_straight_line_has_dimension_one() -> None:
    bitmap = np.ones((1, 128), dtype=bool)
    fit = box_counting_dimension(bitmap)
    assert fit.dimension == pytest.approx(1.0)
    assert fit.counts == (64, 32, 16, 8, 4, 2)


def test_filled_square_has_dimension_two() -> None:
    assert box_counting_dimension(np.ones((128, 128), dtype=bool)).dimension == pytest.approx(2.0)


def test_koch_curve_dimension() -> None:
    fit = box_counting_dimension(_render(_koch(243.0, 4)))
    assert fit.dimension == pytest.approx(math.log(4) / math.log(3), abs=0.15)
    assert not fit.clamped


def test_single_pixel_is_clamped() -> None:
    bitmap = np.zeros((128, 128), dtype=bool)
    bitmap[3, 3] = True
    fit = box_counting_dimension(bitmap)
    assert fit.clamped and fit.dimension == 1.0


def test_small_bitmap_has_too_few_scales() -> None:
    with pytest.raises(FeatureError):
        box_counting_dimension(np.ones((4, 4), dtype=bool))
    assert box_counts(np.ones((4, 4), dtype=bool)) == ((2,), (4,))


# -------- radiomics --------

def test_extract_all_on_disc() -> None:
    image, mask = synth_phantom(disc_spec(radius=30, noise=4.0))
    vector = extract_all(image, mask, contour_from_mask(mask))
    assert vector.radius == pytest.approx(30.0, abs=1.0)
    assert vector.texture == pytest.approx(16.0, rel=0.3)
    assert 1.0 <= vector.fractal_dimension <= 1.3
    assert np.isfinite(vector.as_array()).all()


def test_extract_all_is_translation_invariant() -> None:
    base = np.zeros((120, 120), dtype=bool)
    base[20:50, 30:70] = True
    moved = np.roll(np.roll(base, 25, axis=0), 17, axis=1)
    image = Image(np.full((120, 120), 80), 255)
    a = extract_all(image, base, contour_from_mask(base))
    b = extract_all(image, moved, contour_from_mask(moved))
    assert np.allclose(a.as_array(), b.as_array())


def test_texture_of_constant_region_is_zero() -> None:
    image = Image(np.full((10, 10), 42), 255)
    assert texture(image, np.ones((10, 10), dtype=bool)) == 0.0


def test_texture_of_two_level_region() -> None:
    pixels = np.zeros((20, 20), dtype=np.int64)
    pixels[:, 10:] = 255
    assert texture(Image(pixels, 255), np.ones((20, 20), dtype=bool)) == pytest.approx(16256.25)


def test_texture_tracks_noise_variance(rng) -> None:
    pixels = np.rint(rng.normal(128.0, 10.0, size=(100, 100))).astype(np.int64)
    assert texture(Image(pixels, 255), np.ones((100, 100), dtype=bool)) == pytest.approx(100.0, rel=0.15)


@pytest.mark.parametrize("mask", [np.zeros((10, 10), dtype=bool), np.ones((5, 5), dtype=bool)])
def test_extract_all_rejects_bad_masks(mask: np.ndarray) -> None:
    image = Image(np.full((10, 10), 42), 255)
    with pytest.raises(FeatureError):
        extract_all(image, mask, contour_from_mask(np.ones((3, 3), dtype=bool)))


def test_feature_vector_must_be_finite() -> None:
    with pytest.raises(FeatureError):
        _vector(texture=float("nan"))


def test_feature_csv_write_append_read(tmp_path) -> None:
    path = tmp_path / "features.csv"
    write_feature_csv(path, [("a", _vector(), "B")])
    append_feature_row(path, "b", _vector(radius=12.5), None)
    rows = read_feature_csv(path)
    assert path.read_text(encoding="utf-8").splitlines()[0] == ",".join(CSV_HEADER)
    assert [(cid, label) for cid, _, label in rows] == [("a", "B"), ("b", None)]
    assert rows[1][1].radius == 12.5


def test_append_creates_header(tmp_path) -> None:
    path = tmp_path / "new.csv"
    append_feature_row(path, "only", _vector(), "M")
    assert len(read_feature_csv(path)) == 1


def test_feature_csv_schema_errors(tmp_path) -> None:
    with pytest.raises(DatasetSchemaError):
        parse_feature_csv("id,x,label\na,1,B\n")
    with pytest.raises(DatasetSchemaError):
        parse_feature_csv(",".join(CSV_HEADER) + "\na,1,2\n")
    bad = tmp_path / "bad.csv"
    bad.write_text("id,x,label\n", encoding="utf-8")
    with pytest.raises(DatasetSchemaError):
        append_feature_row(bad, "z", _vector())
