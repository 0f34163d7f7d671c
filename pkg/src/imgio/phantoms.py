# src/imgio/phantoms.py
# Seeded synthetic mass phantoms with exact ground-truth masks

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple, Union

import numpy as np

from src.config import RANDOM_SEED
from src.errors import PhantomSpecError
from src.imgio.pgm import MAX_GRAY_LIMIT, Image

logger = logging.getLogger(__name__)

# g >= 0.5 on a unit Gaussian means d <= sigma * sqrt(2 ln 2)
HALF_MAX_FACTOR = math.sqrt(2.0 * math.log(2.0))


@dataclass(frozen=True)
class Disc:
    center: Tuple[float, float]
    radius: float
    kind: str = field(default="disc", init=False)

    def half_extent(self) -> Tuple[float, float]:
        return self.radius, self.radius


@dataclass(frozen=True)
class GaussianBlob:
    center: Tuple[float, float]
    sigma: float
    kind: str = field(default="blob", init=False)

    def half_extent(self) -> Tuple[float, float]:
        r = self.sigma * HALF_MAX_FACTOR
        return r, r


@dataclass(frozen=True)
class Ellipse:
    center: Tuple[float, float]
    a: float
    b: float
    angle: float = 0.0  # degrees, counter-clockwise from the x axis
    kind: str = field(default="ellipse", init=False)

    def half_extent(self) -> Tuple[float, float]:
        t = math.radians(self.angle)
        ex = math.hypot(self.a * math.cos(t), self.b * math.sin(t))
        ey = math.hypot(self.a * math.sin(t), self.b * math.cos(t))
        return ex, ey


Shape = Union[Disc, GaussianBlob, Ellipse]
SHAPES = {"disc": Disc, "blob": GaussianBlob, "ellipse": Ellipse}


@dataclass(frozen=True)
class PhantomSpec:
    width: int = 200
    height: int = 200
    shape: Shape = Disc((100.0, 100.0), 50.0)
    fg_level: int = 200
    bg_level: int = 50
    noise_sigma: float = 0.0
    rng_seed: int = RANDOM_SEED
    max_gray: int = 255

    def validate(self) -> None:
        if self.width < 1 or self.height < 1:
            raise PhantomSpecError(f"dimensions must be positive, got {self.width}x{self.height}")
        if not 1 <= self.max_gray <= MAX_GRAY_LIMIT:
            raise PhantomSpecError(f"max_gray {self.max_gray} outside 1..{MAX_GRAY_LIMIT}")
        for name, level in (("fg_level", self.fg_level), ("bg_level", self.bg_level)):
            if not 0 <= level <= self.max_gray:
                raise PhantomSpecError(f"{name} {level} outside 0..{self.max_gray}")
        if self.fg_level == self.bg_level:
            raise PhantomSpecError(f"fg_level equals bg_level ({self.fg_level})")
        if self.noise_sigma < 0:
            raise PhantomSpecError(f"noise_sigma must be >= 0, got {self.noise_sigma}")

        size = getattr(self.shape, "radius", None) or getattr(self.shape, "sigma", None)
        if isinstance(self.shape, Ellipse):
            size = min(self.shape.a, self.shape.b)
        if size is None or size <= 0:
            raise PhantomSpecError(f"{self.shape.kind} size must be > 0")

        cx, cy = self.shape.center
        ex, ey = self.shape.half_extent()
        if cx - ex < 0 or cx + ex > self.width - 1 or cy - ey < 0 or cy + ey > self.height - 1:
            raise PhantomSpecError(
                f"{self.shape.kind} at ({cx}, {cy}) with half-extent ({ex:.2f}, {ey:.2f}) "
                f"does not fit a {self.width}x{self.height} image"
            )

    def annotation_radius(self) -> float:
        """Radius of the circle a reader would draw around the lesion."""
        if isinstance(self.shape, Ellipse):
            return max(self.shape.a, self.shape.b)
        return max(self.shape.half_extent())

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PhantomSpec":
        data = dict(data)
        unknown = sorted(set(data) - {
            "width", "height", "shape", "fg_level", "bg_level", "noise_sigma", "rng_seed", "max_gray",
        })
        if unknown:
            raise PhantomSpecError(f"PhantomSpec: unknown keys {unknown}")
        shape = data.pop("shape", None)
        if shape is not None:
            shape = dict(shape)
            kind = shape.pop("kind", None)
            if kind not in SHAPES:
                raise PhantomSpecError(f"unknown shape kind {kind!r}, expected one of {sorted(SHAPES)}")
            try:
                shape["center"] = tuple(float(v) for v in shape["center"])
                data["shape"] = SHAPES[kind](**shape)
            except (KeyError, TypeError, ValueError) as e:
                raise PhantomSpecError(f"bad {kind} parameters: {e}") from e
        try:
            return cls(**data)
        except TypeError as e:
            raise PhantomSpecError(str(e)) from e

    def to_dict(self) -> Dict[str, Any]:
        shape = {k: v for k, v in vars(self.shape).items()}
        shape["center"] = list(shape["center"])
        return {
            "width": self.width,
            "height": self.height,
            "shape": shape,
            "fg_level": self.fg_level,
            "bg_level": self.bg_level,
            "noise_sigma": self.noise_sigma,
            "rng_seed": self.rng_seed,
            "max_gray": self.max_gray,
        }


def shape_weight(shape: Shape, width: int, height: int) -> np.ndarray:
    """Fraction of the way from background to foreground, per pixel."""
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    cx, cy = shape.center
    dx, dy = xs - cx, ys - cy
    if isinstance(shape, Disc):
        return (dx * dx + dy * dy <= shape.radius * shape.radius).astype(np.float64)
    if isinstance(shape, GaussianBlob):
        return np.exp(-(dx * dx + dy * dy) / (2.0 * shape.sigma * shape.sigma))
    t = math.radians(shape.angle)
    u = dx * math.cos(t) + dy * math.sin(t)
    v = -dx * math.sin(t) + dy * math.cos(t)
    return ((u / shape.a) ** 2 + (v / shape.b) ** 2 <= 1.0).astype(np.float64)


def synth_phantom(spec: PhantomSpec) -> Tuple[Image, np.ndarray]:
    """
    Render a phantom and its noiseless support mask.

    Noise is N(0, noise_sigma) from numpy's default_rng(rng_seed), rounded
    and clamped to 0..max_gray.
    """
    spec.validate()
    weight = shape_weight(spec.shape, spec.width, spec.height)
    mask = weight >= 0.5

    values = spec.bg_level + (spec.fg_level - spec.bg_level) * weight
    if spec.noise_sigma > 0:
        rng = np.random.default_rng(spec.rng_seed)
        values = values + rng.normal(0.0, spec.noise_sigma, size=values.shape)
    pixels = np.clip(np.rint(values), 0, spec.max_gray).astype(np.int64)

    logger.debug(
        f"Phantom {spec.shape.kind} {spec.width}x{spec.height} "
        f"noise={spec.noise_sigma} seed={spec.rng_seed}: {int(mask.sum())} mask px"
    )
    return Image(pixels, spec.max_gray), mask
