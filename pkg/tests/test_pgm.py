from __future__ import annotations

import numpy as np
import pytest

from src.errors import PgmFormatError
from src.imgio.pgm import Image, image_to_mask, mask_to_image, parse_pgm, read_pgm, save_pgm, write_pgm


def test_parse_p2_with_comments() -> None:
    data = b"P2\n# a comment\n3 2\n# another\n255\n0 1 2\n3 4 255\n"
    img = parse_pgm(data)
    assert (img.width, img.height, img.max_gray) == (3, 2, 255)
    assert img.pixels.tolist() == [[0, 1, 2], [3, 4, 255]]


def test_parse_p5_8bit() -> None:
    data = b"P5\n2 2\n255\n" + bytes([10, 20, 30, 40])
    img = parse_pgm(data)
    assert img.pixels.dtype == np.uint8
    assert img.pixels.tolist() == [[10, 20], [30, 40]]


def test_parse_p5_16bit_is_big_endian() -> None:
    data = b"P5\n2 1\n65535\n" + bytes([0x01, 0x02, 0xFF, 0xFF])
    img = parse_pgm(data)
    assert img.pixels.dtype == np.uint16
    assert img.pixels.tolist() == [[0x0102, 0xFFFF]]


@pytest.mark.parametrize(
    "data",
    [
        b"P6\n1 1\n255\n\x00",
        b"P5\n2 2\n255\n\x00\x01",
        b"P2\n2 2\n255\n1 2 3",
        b"P2\n0 2\n255\n",
        b"P2\n1 1\n0\n0",
        b"P2\n1 1\n70000\n0",
        b"P2\n1 1\n10\n11",
        b"P2\n1",
    ],
)
def test_malformed_inputs_raise(data: bytes) -> None:
    with pytest.raises(PgmFormatError):
        parse_pgm(data)


@pytest.mark.parametrize("variant", ["P2", "P5"])
@pytest.mark.parametrize("max_gray", [1, 255, 4095, 65535])
def test_write_then_parse_is_identity(variant: str, max_gray: int) -> None:
    rng = np.random.default_rng(max_gray)
    img = Image(rng.integers(0, max_gray, size=(5, 7), endpoint=True), max_gray)
    assert parse_pgm(write_pgm(img, variant)) == img


def test_pixels_are_read_only() -> None:
    img = Image(np.zeros((2, 2), dtype=np.int64))
    with pytest.raises(ValueError):
        img.pixels[0, 0] = 1


def test_image_rejects_out_of_range_pixels() -> None:
    with pytest.raises(PgmFormatError):
        Image(np.array([[0, 300]]), 255)


def test_save_and_read_file(tmp_path) -> None:
    img = Image(np.arange(12).reshape(3, 4), 15)
    path = tmp_path / "sub" / "img.pgm"
    save_pgm(path, img)
    assert read_pgm(path) == img
    assert [p.name for p in path.parent.iterdir()] == ["img.pgm"]


def test_mask_conversion() -> None:
    mask = np.array([[True, False], [False, True]])
    img = mask_to_image(mask)
    assert img.pixels.tolist() == [[255, 0], [0, 255]]
    assert np.array_equal(image_to_mask(img), mask)
