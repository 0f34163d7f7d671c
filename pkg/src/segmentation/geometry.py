# src/segmentation/geometry.py
# Contours, boundary tracing and polygon rasterization shared by every segmenter

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
from skimage.draw import polygon, polygon_perimeter

from src.errors import DegenerateContour, EmptyRegion, SeedOutOfBounds

logger = logging.getLogger(__name__)

# Moore neighbourhood as (drow, dcol), clockwise on screen starting West
MOORE = ((0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1))
_MOORE_INDEX = {d: i for i, d in enumerate(MOORE)}


@dataclass(frozen=True, eq=False)
class Contour:
    """
    Closed 8-connected boundary chain of integer (x, y) pixel coordinates.

    Consecutive points (including last -> first) are distinct 8-neighbours.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise DegenerateContour(f"contour points must be (N, 2), got shape {pts.shape}")
        if len(pts) < 4:
            raise DegenerateContour(f"contour needs at least 4 points, got {len(pts)}")
        if not np.all(pts == np.rint(pts)):
            raise DegenerateContour("contour points must be integer pixel coordinates")
        pts = pts.astype(np.int64)
        steps = np.abs(np.roll(pts, -1, axis=0) - pts).max(axis=1)
        if np.any(steps == 0):
            raise DegenerateContour("contour repeats a point consecutively")
        if np.any(steps > 1):
            i = int(np.argmax(steps > 1))
            raise DegenerateContour(
                f"contour is not an 8-connected closed chain: gap after point {i} {tuple(pts[i])}"
            )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Contour):
            return NotImplemented
        return np.array_equal(self.points, other.points)

    @property
    def xs(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def ys(self) -> np.ndarray:
        return self.points[:, 1]

    def bbox(self) -> Tuple[int, int, int, int]:
        """(x_min, y_min, x_max, y_max), inclusive."""
        return (int(self.xs.min()), int(self.ys.min()), int(self.xs.max()), int(self.ys.max()))

    def translate(self, dx: int, dy: int) -> "Contour":
        return Contour(self.points + np.array([dx, dy], dtype=np.int64))

    def signed_area(self) -> float:
        return polygon_signed_area(self.points.astype(np.float64))

    def to_mask(self, shape: Tuple[int, int]) -> np.ndarray:
        return fill_contour(self, shape)


def polygon_signed_area(points: np.ndarray) -> float:
    """Shoelace area; positive for clockwise-on-screen (y down) ordering."""
    x, y = points[:, 0], points[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def check_seed(seed: Tuple[int, int], shape: Tuple[int, int]) -> Tuple[int, int]:
    x, y = int(seed[0]), int(seed[1])
    if not (0 <= x < shape[1] and 0 <= y < shape[0]):
        raise SeedOutOfBounds(f"seed ({x}, {y}) outside {shape[1]}x{shape[0]} image")
    return x, y


def trace_boundary(mask: np.ndarray) -> np.ndarray:
    """
    Moore-neighbour trace of the outer boundary of the component holding the
    first foreground pixel in row-major order. Returns (N, 2) int (x, y).
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise EmptyRegion("cannot trace the boundary of an empty mask")
    padded = np.pad(mask, 1)

    rows, cols = np.nonzero(padded)
    start = (int(rows[0]), int(cols[0]))
    chain = [start]
    p, back = start, 0  # the West neighbour of the first pixel is background
    limit = 4 * padded.size + 8

    while len(chain) < limit:
        nxt = None
        for k in range(1, 9):
            d = (back + k) % 8
            q = (p[0] + MOORE[d][0], p[1] + MOORE[d][1])
            if padded[q]:
                nxt, d_next = q, d
                break
        if nxt is None:
            break  # isolated pixel
        if p == start and len(chain) > 1 and nxt == chain[1]:
            chain.pop()
            break
        prev_checked = (p[0] + MOORE[(d_next - 1) % 8][0], p[1] + MOORE[(d_next - 1) % 8][1])
        back = _MOORE_INDEX[(prev_checked[0] - nxt[0], prev_checked[1] - nxt[1])]
        chain.append(nxt)
        p = nxt

    arr = np.array(chain, dtype=np.int64) - 1
    return arr[:, ::-1].copy()


def contour_from_mask(mask: np.ndarray) -> Contour:
    return Contour(trace_boundary(mask))


def fill_polygon(points: np.ndarray, shape: Tuple[int, int]) -> np.ndarray:
    """Rasterize a (possibly sub-pixel) closed polygon, edges included, clipped to shape."""
    points = np.asarray(points, dtype=np.float64)
    mask = np.zeros(shape, dtype=bool)
    rr, cc = polygon(points[:, 1], points[:, 0], shape=shape)
    mask[rr, cc] = True
    rr, cc = polygon_perimeter(
        np.rint(points[:, 1]).astype(int), np.rint(points[:, 0]).astype(int), shape=shape, clip=True
    )
    mask[rr, cc] = True
    return mask


def fill_contour(contour: Contour, shape: Tuple[int, int]) -> np.ndarray:
    """Pixels inside or on the chain."""
    mask = np.zeros(shape, dtype=bool)
    rr, cc = polygon(contour.ys, contour.xs, shape=shape)
    mask[rr, cc] = True
    inside = (contour.xs >= 0) & (contour.xs < shape[1]) & (contour.ys >= 0) & (contour.ys < shape[0])
    mask[contour.ys[inside], contour.xs[inside]] = True
    return mask


def polygon_to_contour(points: np.ndarray, shape: Tuple[int, int]) -> Contour:
    """Rasterize control points and trace the resulting region into a pixel chain."""
    return contour_from_mask(fill_polygon(points, shape))


def circle_points(center: Tuple[float, float], radius: float, n: int) -> np.ndarray:
    """n points clockwise on screen, starting at angle 0."""
    t = 2.0 * np.pi * np.arange(n) / n
    return np.column_stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)])


def resample_closed(points: np.ndarray, n: int) -> np.ndarray:
    """n points equally spaced by arc length along a closed polyline."""
    points = np.asarray(points, dtype=np.float64)
    closed = np.vstack([points, points[:1]])
    seg = np.hypot(*np.diff(closed, axis=0).T)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = cum[-1]
    if total <= 0:
        raise DegenerateContour("cannot resample a contour of zero length")
    s = np.arange(n) * (total / n)
    return np.column_stack([np.interp(s, cum, closed[:, 0]), np.interp(s, cum, closed[:, 1])])


def boundary_mask(contour: Contour, shape: Tuple[int, int]) -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    mask[contour.ys, contour.xs] = True
    return mask


def contour_to_csv(contour: Contour) -> str:
    lines = ["x,y"] + [f"{x},{y}" for x, y in contour.points.tolist()]
    return "\n".join(lines) + "\n"


def contour_from_csv(text: str) -> Contour:
    rows = [line.strip() for line in text.splitlines() if line.strip()]
    if not rows or rows[0].replace(" ", "") != "x,y":
        raise DegenerateContour("contour CSV must start with an 'x,y' header")
    try:
        pts = [tuple(int(v) for v in row.split(",")) for row in rows[1:]]
    except ValueError as e:
        raise DegenerateContour(f"bad contour CSV row: {e}") from e
    return Contour(np.array(pts, dtype=np.int64).reshape(-1, 2))


def contour_to_svg(contours: Iterable[Contour], width: int, height: int) -> str:
    """One closed polyline per contour, in pixel units."""
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for contour in contours:
        pts = " ".join(f"{x},{y}" for x, y in contour.points.tolist())
        out.append(f'  <polygon points="{pts}" fill="none" stroke="black" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
