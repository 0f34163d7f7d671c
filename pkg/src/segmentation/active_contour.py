# src/segmentation/active_contour.py
# Greedy snake (continuity + curvature + edge energy + balloon) and the radial
# balloon contour that bootstraps the saliency pipeline from inside the lesion

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple, Union

import numpy as np
from scipy import ndimage

from src.config import (
    CONSERVATIVE_MAX_ITERS,
    CONSERVATIVE_MIN_RETREAT,
    CONSERVATIVE_N_RAYS,
    CONSERVATIVE_R0,
    CONSERVATIVE_RETREAT_FRACTION,
    CONSERVATIVE_RIDGE_FRACTION,
    CONSERVATIVE_SMOOTHING,
    CONSERVATIVE_STEP,
    CONTRAST_FLOOR,
    SNAKE_ALPHA,
    SNAKE_BALLOON,
    SNAKE_BETA,
    SNAKE_EDGE_FLOOR,
    SNAKE_GAMMA,
    SNAKE_MAX_ITERS,
    SNAKE_MIN_MOVE_FRACTION,
    SNAKE_POINTS,
    SNAKE_RESAMPLE_EVERY,
    SNAKE_SIGMA,
    SNAKE_WINDOW,
)
from src.errors import ConfigError, DegenerateContour, NoContrast, SegmentationFailed
from src.imgio.pgm import Image
from src.segmentation.geometry import (
    Contour,
    check_seed,
    fill_polygon,
    polygon_signed_area,
    polygon_to_contour,
    resample_closed,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SnakeParams:
    alpha: float = SNAKE_ALPHA
    beta: float = SNAKE_BETA
    gamma: float = SNAKE_GAMMA
    max_iters: int = SNAKE_MAX_ITERS
    window: int = SNAKE_WINDOW
    n_points: int = SNAKE_POINTS
    resample_every: int = SNAKE_RESAMPLE_EVERY
    sigma: float = SNAKE_SIGMA
    edge_floor: float = SNAKE_EDGE_FLOOR
    min_move_fraction: float = SNAKE_MIN_MOVE_FRACTION
    # > 0 pushes outward, < 0 inward
    balloon: float = SNAKE_BALLOON

    def __post_init__(self):
        if self.window < 1 or self.window % 2 == 0:
            raise ConfigError(f"window must be a positive odd size, got {self.window}")
        if self.max_iters < 0:
            raise ConfigError(f"max_iters must be >= 0, got {self.max_iters}")
        if self.n_points < 4:
            raise ConfigError(f"n_points must be >= 4, got {self.n_points}")
        if self.resample_every < 1:
            raise ConfigError(f"resample_every must be >= 1, got {self.resample_every}")
        if self.sigma <= 0 or self.edge_floor <= 0:
            raise ConfigError("sigma and edge_floor must be > 0")


@dataclass(frozen=True)
class ConservativeParams:
    r0: float = CONSERVATIVE_R0
    step: float = CONSERVATIVE_STEP
    max_iters: int = CONSERVATIVE_MAX_ITERS
    ridge_fraction: float = CONSERVATIVE_RIDGE_FRACTION
    retreat_fraction: float = CONSERVATIVE_RETREAT_FRACTION
    min_retreat: float = CONSERVATIVE_MIN_RETREAT
    smoothing: int = CONSERVATIVE_SMOOTHING
    n_rays: int = CONSERVATIVE_N_RAYS
    sigma: float = SNAKE_SIGMA
    contrast_floor: float = CONTRAST_FLOOR

    def __post_init__(self):
        if self.r0 <= 0 or self.step <= 0:
            raise ConfigError(f"r0 and step must be > 0, got r0={self.r0}, step={self.step}")
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be >= 1, got {self.max_iters}")
        if not 0.0 < self.ridge_fraction <= 1.0:
            raise ConfigError(f"ridge_fraction must lie in (0, 1], got {self.ridge_fraction}")
        if self.retreat_fraction < 0 or self.min_retreat < 0:
            raise ConfigError("retreat_fraction and min_retreat must be >= 0")
        if self.smoothing < 1 or self.smoothing % 2 == 0:
            raise ConfigError(f"smoothing must be a positive odd window, got {self.smoothing}")
        if self.n_rays < 8:
            raise ConfigError(f"n_rays must be >= 8, got {self.n_rays}")
        if self.sigma <= 0:
            raise ConfigError(f"sigma must be > 0, got {self.sigma}")


def edge_magnitude(image: Image, sigma: float) -> np.ndarray:
    """Gaussian gradient magnitude of the image scaled to [0, 1] gray."""
    return ndimage.gaussian_gradient_magnitude(
        image.pixels.astype(np.float64) / image.max_gray, sigma=sigma
    )


class GreedySnake:
    """
    One greedy pass moves each control point in turn to the window position
    minimizing alpha*continuity + beta*curvature + gamma*edge + balloon,
    each energy normalized over the window.
    """

    def __init__(self, image: Image, params: SnakeParams):
        self.params = params
        self.shape = image.shape
        self.grad = edge_magnitude(image, params.sigma)
        g2 = self.grad ** 2
        scale = float(np.percentile(g2, 99.5))
        self.edge = np.minimum(g2 / scale, 1.0) if scale > 0 else g2
        h = params.window // 2
        offs = [(dx, dy) for dy in range(-h, h + 1) for dx in range(-h, h + 1) if (dx, dy) != (0, 0)]
        # staying put comes first so ties keep the point still
        self.offsets = np.array([(0, 0)] + offs, dtype=np.float64)

    def clip(self, pts: np.ndarray) -> np.ndarray:
        pts = pts.copy()
        pts[:, 0] = np.clip(pts[:, 0], 0, self.shape[1] - 1)
        pts[:, 1] = np.clip(pts[:, 1], 0, self.shape[0] - 1)
        return pts

    def sample(self, field: np.ndarray, pts: np.ndarray) -> np.ndarray:
        cols = np.clip(np.rint(pts[:, 0]).astype(int), 0, self.shape[1] - 1)
        rows = np.clip(np.rint(pts[:, 1]).astype(int), 0, self.shape[0] - 1)
        return field[rows, cols]

    def mean_edge_strength(self, pts: np.ndarray) -> float:
        return float(self.sample(self.grad, pts).mean())

    @staticmethod
    def _normalized(values: np.ndarray) -> np.ndarray:
        top = values.max()
        return values / top if top > 0 else values

    def step(self, pts: np.ndarray) -> Tuple[np.ndarray, int]:
        """One sequential sweep; returns the new points and how many moved."""
        p = self.params
        pts = pts.copy()
        n = len(pts)
        mean_spacing = float(np.hypot(*(np.roll(pts, -1, axis=0) - pts).T).mean())
        orientation = 1.0 if polygon_signed_area(pts) >= 0 else -1.0
        moved = 0

        for i in range(n):
            prev, nxt = pts[i - 1], pts[(i + 1) % n]
            cands = self.clip(pts[i] + self.offsets)
            moves = cands - pts[i]

            cont = (mean_spacing - np.hypot(*(cands - prev).T)) ** 2
            curv = np.sum((prev - 2.0 * cands + nxt) ** 2, axis=1)

            g = self.sample(self.edge, cands)
            g_min, g_max = g.min(), g.max()
            img = (g_min - g) / max(g_max - g_min, p.edge_floor)

            energy = p.alpha * self._normalized(cont) + p.beta * self._normalized(curv) + p.gamma * img

            if p.balloon:
                t = nxt - prev
                norm = np.hypot(t[0], t[1])
                if norm > 0:
                    outward = orientation * np.array([t[1], -t[0]]) / norm
                    energy = energy - p.balloon * (moves @ outward)

            best = int(np.argmin(energy))
            if np.any(cands[best] != pts[i]):
                pts[i] = cands[best]
                moved += 1

        return pts, moved

    def evolve(self, pts: np.ndarray, max_iters: Optional[int] = None) -> Iterator[Tuple[np.ndarray, int]]:
        """Yield (points, moved) after every sweep until convergence or max_iters."""
        p = self.params
        limit = p.max_iters if max_iters is None else max_iters
        pts = self.clip(resample_closed(pts, p.n_points))
        for it in range(1, limit + 1):
            pts, moved = self.step(pts)
            if it % p.resample_every == 0:
                if len(np.unique(np.rint(pts), axis=0)) < 4:
                    logger.debug(f"Snake collapsed at iteration {it}")
                    yield pts, moved
                    return
                pts = self.clip(resample_closed(pts, p.n_points))
            logger.debug(f"Snake iteration {it}: {moved}/{len(pts)} points moved")
            yield pts, moved
            if moved < p.min_move_fraction * len(pts):
                return


def _as_points(init: Union[Contour, np.ndarray]) -> np.ndarray:
    if isinstance(init, Contour):
        return init.points.astype(np.float64)
    pts = np.asarray(init, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 4:
        raise DegenerateContour(f"initial contour needs at least 4 (x, y) points, got shape {pts.shape}")
    return pts


def snake_points(image: Image, init: Union[Contour, np.ndarray], params: SnakeParams = SnakeParams()) -> np.ndarray:
    """Final control points of a greedy snake run (sub-pixel, unrasterized)."""
    pts = _as_points(init)
    snake = GreedySnake(image, params)
    final = pts
    for final, _ in snake.evolve(pts):
        pass
    return final


def active_contour(image: Image, init: Union[Contour, np.ndarray], params: SnakeParams = SnakeParams()) -> Contour:
    """Greedy snake from `init`; with max_iters == 0 the initial contour comes back unchanged."""
    pts = _as_points(init)
    if params.max_iters == 0:
        return init if isinstance(init, Contour) else polygon_to_contour(pts, image.shape)
    return polygon_to_contour(snake_points(image, pts, params), image.shape)


def _ray_limits(seed: Tuple[int, int], directions: np.ndarray, shape: Tuple[int, int]) -> np.ndarray:
    """Distance from the seed to the image bounds along each unit direction."""
    x, y = seed
    height, width = shape
    limits = np.full(len(directions), np.inf)
    for axis, (low, high) in enumerate(((0.0, width - 1.0), (0.0, height - 1.0))):
        pos = (x, y)[axis]
        d = directions[:, axis]
        with np.errstate(divide="ignore"):
            limits = np.where(d > 1e-12, np.minimum(limits, (high - pos) / d), limits)
            limits = np.where(d < -1e-12, np.minimum(limits, (low - pos) / d), limits)
    return limits


def _first_ridge(profile: np.ndarray, strong: float) -> Optional[int]:
    """Index of the first local maximum reaching `strong`, or None."""
    prev = np.concatenate(([-np.inf], profile[:-1]))
    nxt = np.concatenate((profile[1:], [-np.inf]))
    hits = np.flatnonzero((profile >= strong) & (profile >= prev) & (profile >= nxt))
    return int(hits[0]) if len(hits) else None


def conservative_contour(
    image: Image, seed: Tuple[int, int], params: ConservativeParams = ConservativeParams()
) -> Contour:
    """
    Radial balloon from a radius-`r0` circle around the seed: every control
    point advances outward along its ray in `step` px increments and halts on
    the first gradient ridge it meets (a local maximum of edge strength of at
    least `ridge_fraction` times the median ridge height over all rays), or at
    the image bounds. The radii are median-smoothed and then pulled back
    toward the seed by max(min_retreat, retreat_fraction * mean radius), so
    the result stays inside the lesion boundary.
    """
    x, y = check_seed(seed, image.shape)
    grad = edge_magnitude(image, params.sigma)
    if float(grad.max()) < params.contrast_floor:
        raise NoContrast(f"flat image around seed ({x}, {y}): max edge strength below {params.contrast_floor}")

    angles = 2.0 * np.pi * np.arange(params.n_rays) / params.n_rays
    directions = np.column_stack([np.cos(angles), np.sin(angles)])
    limits = _ray_limits((x, y), directions, image.shape)
    radii = params.r0 + params.step * np.arange(params.max_iters + 1)

    # profiles[i, k]: edge strength at radius radii[k] on ray i (NaN past the bounds)
    inside = radii[None, :] <= limits[:, None] + 1e-9
    px = x + directions[:, :1] * radii[None, :]
    py = y + directions[:, 1:] * radii[None, :]
    sampled = ndimage.map_coordinates(grad, [py.ravel(), px.ravel()], order=1, mode="nearest")
    profiles = np.where(inside, sampled.reshape(px.shape), np.nan)

    peaks = np.array([np.nanmax(p) if np.any(np.isfinite(p)) else 0.0 for p in profiles])
    ridge_height = float(np.median(peaks))
    if ridge_height < params.contrast_floor:
        raise NoContrast(f"no edge around seed ({x}, {y}): median ridge strength {ridge_height:.2e}")
    strong = params.ridge_fraction * ridge_height

    stops = np.empty(params.n_rays)
    for i, profile in enumerate(profiles):
        valid = profile[inside[i]]
        k = _first_ridge(valid, strong) if len(valid) else None
        if k is not None:
            stops[i] = radii[k]
        else:
            stops[i] = min(limits[i], radii[-1])
    stops = np.minimum(ndimage.median_filter(stops, size=params.smoothing, mode="wrap"), limits)
    logger.debug(
        f"Conservative contour: ridge strength {ridge_height:.4f}, "
        f"radii {stops.min():.1f}..{stops.max():.1f} px"
    )

    shift = max(params.min_retreat, params.retreat_fraction * float(stops.mean()))
    retreated = np.maximum(stops - shift, 0.0)
    for r in (retreated, stops):
        candidate = np.array([x, y], dtype=np.float64) + directions * r[:, None]
        if not fill_polygon(candidate, image.shape)[y, x]:
            continue
        try:
            contour = polygon_to_contour(candidate, image.shape)
        except DegenerateContour:
            continue
        # the trace keeps one component; it must be the seed's
        if contour.to_mask(image.shape)[y, x]:
            return contour
    raise SegmentationFailed(f"conservative contour does not enclose seed ({x}, {y})")
