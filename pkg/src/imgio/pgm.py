# src/imgio/pgm.py
# Netpbm gray-map (P2 ASCII / P5 binary) reader and writer

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from src.errors import PgmFormatError
from src.utils import atomic_write_bytes

logger = logging.getLogger(__name__)

MAX_GRAY_LIMIT = 65535
_WHITESPACE = b" \t\r\n\v\f"


@dataclass(frozen=True, eq=False)
class Image:
    """
    Single-channel raster. `pixels` is a read-only (height, width) array,
    uint8 when max_gray < 256 and uint16 otherwise.
    """

    pixels: np.ndarray
    max_gray: int = 255

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise PgmFormatError(f"image must be a non-empty 2-D raster, got shape {px.shape}")
        if not 1 <= int(self.max_gray) <= MAX_GRAY_LIMIT:
            raise PgmFormatError(f"max_gray {self.max_gray} outside 1..{MAX_GRAY_LIMIT}")
        if px.min() < 0 or px.max() > self.max_gray:
            raise PgmFormatError(
                f"pixel values span {px.min()}..{px.max()}, outside 0..{self.max_gray}"
            )
        dtype = np.uint8 if self.max_gray < 256 else np.uint16
        px = px.astype(dtype, copy=True)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)
        object.__setattr__(self, "max_gray", int(self.max_gray))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    @property
    def n_levels(self) -> int:
        """Number of possible gray shades."""
        return self.max_gray + 1

    def contains(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def __eq__(self, other) -> bool:
        if not isinstance(other, Image):
            return NotImplemented
        return self.max_gray == other.max_gray and np.array_equal(self.pixels, other.pixels)

    def __hash__(self):
        return hash((self.shape, self.max_gray, self.pixels.tobytes()))


def _skip_space_and_comments(data: bytes, pos: int) -> int:
    while pos < len(data):
        ch = data[pos:pos + 1]
        if ch == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        elif ch in _WHITESPACE:
            pos += 1
        else:
            break
    return pos


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    pos = _skip_space_and_comments(data, pos)
    start = pos
    while pos < len(data) and data[pos:pos + 1] not in _WHITESPACE and data[pos:pos + 1] != b"#":
        pos += 1
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, name: str) -> tuple[int, int]:
    token, pos = _next_token(data, pos)
    if not token:
        raise PgmFormatError(f"truncated header: missing {name}")
    try:
        return int(token), pos
    except ValueError:
        raise PgmFormatError(f"non-numeric {name}: {token[:20]!r}") from None


def parse_pgm(data: bytes) -> Image:
    """Parse an ASCII (P2) or binary (P5) PGM; 16-bit P5 is big-endian."""
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PgmFormatError(f"bad magic {magic!r}, expected P2 or P5")

    pos = 2
    width, pos = _header_int(data, pos, "width")
    height, pos = _header_int(data, pos, "height")
    max_gray, pos = _header_int(data, pos, "max_gray")

    if width <= 0 or height <= 0:
        raise PgmFormatError(f"dimensions must be positive, got {width}x{height}")
    if not 1 <= max_gray <= MAX_GRAY_LIMIT:
        raise PgmFormatError(f"max_gray {max_gray} outside 1..{MAX_GRAY_LIMIT}")

    count = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE:
            raise PgmFormatError("truncated pixel data")
        pos += 1
        dtype = np.dtype(">u2") if max_gray > 255 else np.dtype("u1")
        needed = count * dtype.itemsize
        if len(data) - pos < needed:
            raise PgmFormatError(
                f"truncated pixel data: need {needed} bytes, found {len(data) - pos}"
            )
        values = np.frombuffer(data, dtype=dtype, count=count, offset=pos).astype(np.int64)
    else:
        tokens = []
        while len(tokens) < count:
            token, pos = _next_token(data, pos)
            if not token:
                raise PgmFormatError(
                    f"truncated pixel data: need {count} values, found {len(tokens)}"
                )
            tokens.append(token)
        try:
            values = np.array([int(t) for t in tokens], dtype=np.int64)
        except ValueError:
            raise PgmFormatError("non-numeric pixel value in P2 raster") from None

    if values.size and (values.min() < 0 or values.max() > max_gray):
        raise PgmFormatError(f"pixel value exceeds max_gray {max_gray}")

    return Image(values.reshape(height, width), max_gray)


def write_pgm(image: Image, variant: str = "P5") -> bytes:
    """Serialize an Image; parse_pgm(write_pgm(img)) == img."""
    if variant not in ("P2", "P5"):
        raise PgmFormatError(f"unknown PGM variant {variant!r}")
    header = f"{variant}\n{image.width} {image.height}\n{image.max_gray}\n".encode("ascii")
    if variant == "P5":
        dtype = ">u2" if image.max_gray > 255 else "u1"
        return header + image.pixels.astype(dtype).tobytes()
    rows = (" ".join(str(v) for v in row) for row in image.pixels.tolist())
    return header + ("\n".join(rows) + "\n").encode("ascii")


def read_pgm(path: Path) -> Image:
    with open(path, "rb") as f:
        return parse_pgm(f.read())


def save_pgm(path: Path, image: Image, variant: str = "P5") -> None:
    atomic_write_bytes(path, write_pgm(image, variant))
    logger.debug(f"Wrote {variant} {image.width}x{image.height} -> {path}")


def mask_to_image(mask: np.ndarray) -> Image:
    """Binary mask as a 0/255 gray map."""
    return Image(np.where(np.asarray(mask, dtype=bool), 255, 0), 255)


def image_to_mask(image: Image) -> np.ndarray:
    """Any non-zero pixel is foreground."""
    return np.asarray(image.pixels) > 0
