from __future__ import annotations

import numpy as np
import pytest

from src.errors import LengthMismatch, UndefinedOverlap
from src.evaluation.overlap import hausdorff, mask_boundary, overlap


def _block(r0: int, c0: int, size: int = 10, shape: tuple[int, int] = (20, 20)) -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    mask[r0:r0 + size, c0:c0 + size] = True
    return mask


def test_half_overlapping_blocks() -> None:
    row = overlap(_block(0, 0), _block(0, 5))
    assert row.dice == pytest.approx(0.5)
    assert row.jaccard == pytest.approx(1 / 3)
    assert row.hausdorff == pytest.approx(5.0)


def test_identical_masks() -> None:
    row = overlap(_block(3, 4), _block(3, 4))
    assert (row.dice, row.jaccard, row.hausdorff) == (1.0, 1.0, 0.0)


def test_one_empty_mask_has_no_hausdorff() -> None:
    row = overlap(_block(0, 0), np.zeros((20, 20), dtype=bool))
    assert row.dice == 0.0 and row.jaccard == 0.0
    assert row.hausdorff is None
    assert row.to_dict() == {"dice": 0.0, "jaccard": 0.0, "hausdorff": None}


def test_both_empty_is_undefined() -> None:
    empty = np.zeros((5, 5), dtype=bool)
    with pytest.raises(UndefinedOverlap):
        overlap(empty, empty)


def test_shape_mismatch() -> None:
    with pytest.raises(LengthMismatch):
        overlap(np.ones((3, 3), dtype=bool), np.ones((3, 4), dtype=bool))


def test_dice_jaccard_identity_and_symmetry(rng) -> None:
    for _ in range(100):
        a = rng.random((12, 12)) < 0.4
        b = rng.random((12, 12)) < 0.4
        a[0, 0] = b[11, 11] = True
        ab, ba = overlap(a, b), overlap(b, a)
        assert ab.dice == pytest.approx(2 * ab.jaccard / (1 + ab.jaccard))
        assert ab.dice == pytest.approx(ba.dice)
        assert ab.hausdorff == pytest.approx(ba.hausdorff)
        assert 0.0 <= ab.jaccard <= ab.dice <= 1.0


def test_boundary_counts_image_edge_as_outside() -> None:
    full = np.ones((4, 4), dtype=bool)
    boundary = mask_boundary(full)
    assert boundary.sum() == 12
    assert not boundary[1:3, 1:3].any()
    assert hausdorff(full, _block(0, 0, size=2, shape=(4, 4))) == pytest.approx(np.sqrt(8.0))
