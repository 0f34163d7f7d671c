from __future__ import annotations

import numpy as np
import pytest

from src.imgio.pgm import Image
from src.imgio.phantoms import Disc, PhantomSpec, synth_phantom


def disc_spec(radius: float = 30.0, size: int = 120, noise: float = 0.0, seed: int = 7) -> PhantomSpec:
    c = float(size // 2)
    return PhantomSpec(size, size, Disc((c, c), radius), fg_level=200, bg_level=50, noise_sigma=noise, rng_seed=seed)


@pytest.fixture
def disc_phantom() -> tuple[Image, np.ndarray]:
    return synth_phantom(disc_spec())


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
