from __future__ import annotations

from collections import deque

import numpy as np
import pytest

from src.errors import ConfigError, SeedOutOfBounds
from src.imgio.pgm import Image
from src.imgio.phantoms import synth_phantom
from src.segmentation.region_growing import region_growing
from tests.conftest import disc_spec


def _bfs(pixels: np.ndarray, seed: tuple[int, int], tau: float) -> np.ndarray:
    h, w = pixels.shape
    x0, y0 = seed
    ref = int(pixels[y0, x0])
    out = np.zeros((h, w), dtype=bool)
    out[y0, x0] = True
    queue = deque([(y0, x0)])
    while queue:
        y, x = queue.popleft()
        for dy, dx in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            ny, nx = y + dy, x + dx
            if 0 <= ny < h and 0 <= nx < w and not out[ny, nx] and abs(int(pixels[ny, nx]) - ref) <= tau:
                out[ny, nx] = True
                queue.append((ny, nx))
    return out


def test_two_level_disc_is_recovered_exactly(disc_phantom) -> None:
    image, truth = disc_phantom
    assert np.array_equal(region_growing(image, (60, 60), tau=30), truth)


def test_large_tau_floods_everything(disc_phantom) -> None:
    image, _ = disc_phantom
    assert region_growing(image, (60, 60), tau=255).all()


def test_noisy_disc_matches_flood_fill_oracle() -> None:
    image, truth = synth_phantom(disc_spec(noise=5.0))
    mask = region_growing(image, (60, 60), tau=30)
    assert np.array_equal(mask, _bfs(image.pixels, (60, 60), 30))
    inter = np.logical_and(mask, truth).sum()
    assert 2 * inter / (mask.sum() + truth.sum()) >= 0.95


def test_random_images_match_flood_fill_oracle(rng) -> None:
    for _ in range(1000):
        h, w = rng.integers(1, 9, size=2)
        pixels = rng.integers(0, 10, size=(h, w))
        seed = (int(rng.integers(0, w)), int(rng.integers(0, h)))
        tau = int(rng.integers(0, 4))
        mask = region_growing(Image(pixels, 9), seed, tau)
        assert np.array_equal(mask, _bfs(pixels, seed, tau))


def test_monotone_rescaling_with_scaled_tau(rng) -> None:
    pixels = rng.integers(0, 20, size=(12, 12))
    base = region_growing(Image(pixels, 255), (5, 5), tau=3)
    scaled = region_growing(Image(pixels * 3 + 7, 255), (5, 5), tau=9)
    assert np.array_equal(base, scaled)


def test_bad_inputs(disc_phantom) -> None:
    image, _ = disc_phantom
    with pytest.raises(SeedOutOfBounds):
        region_growing(image, (120, 0), tau=10)
    with pytest.raises(ConfigError):
        region_growing(image, (1, 1), tau=-1)
