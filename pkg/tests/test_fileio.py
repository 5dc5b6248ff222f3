import numpy as np
import pytest
from PIL import Image

from sfnlm.fileio import ImageFormatError, quantize, read_image, write_image


def test_pgm_roundtrip_is_byte_identical(tmp_path, rng):
    raster = rng.integers(0, 256, (13, 21), dtype=np.uint8)
    src = tmp_path / "in.pgm"
    src.write_bytes(b"P5\n21 13\n255\n" + raster.tobytes())
    img = read_image(src)
    assert img.dtype == np.float64
    np.testing.assert_array_equal(img, raster)
    out = tmp_path / "out.pgm"
    write_image(out, img)
    assert out.read_bytes() == src.read_bytes()


def test_pgm_header_comments_and_whitespace(tmp_path):
    path = tmp_path / "c.pgm"
    path.write_bytes(b"P5 # magic\n# a comment\n3\t2\n# another\n255\n" + bytes(range(6)))
    np.testing.assert_array_equal(read_image(path), np.arange(6).reshape(2, 3))


def test_png_roundtrip(tmp_path, rng):
    raster = rng.integers(0, 256, (9, 7), dtype=np.uint8)
    path = tmp_path / "x.png"
    write_image(path, raster.astype(float))
    np.testing.assert_array_equal(read_image(path), raster)
    with Image.open(path) as im:
        assert im.mode == "L"


def test_write_rounds_half_up_and_clamps():
    vals = np.array([[255.7, -0.4, 0.5, 1.49, 2.5, 300.0]])
    assert quantize(vals).tolist() == [[255, 0, 1, 1, 3, 255]]


@pytest.mark.parametrize("payload, match", [
    (b"P6\n2 2\n255\n" + bytes(12), "color"),
    (b"P5\n2 2\n65535\n" + bytes(8), "maxval"),
    (b"P5\n2 x\n255\n" + bytes(4), "malformed"),
    (b"P5\n2 2\n255\n" + bytes(3), "raster"),
    (b"P5\n2", "truncated"),
    (b"GIF89a....", "unsupported"),
])
def test_bad_files(tmp_path, payload, match):
    path = tmp_path / "bad.pgm"
    path.write_bytes(payload)
    with pytest.raises(ImageFormatError, match=match):
        read_image(path)


def test_color_png_rejected(tmp_path):
    path = tmp_path / "rgb.png"
    Image.new("RGB", (4, 4), (10, 200, 30)).save(path)
    with pytest.raises(ImageFormatError, match="color"):
        read_image(path)


def test_16bit_png_rejected(tmp_path):
    path = tmp_path / "deep.png"
    Image.fromarray(np.full((4, 4), 1000, dtype=np.uint16)).save(path)
    with pytest.raises(ImageFormatError, match="16-bit"):
        read_image(path)


def test_unknown_output_extension(tmp_path):
    with pytest.raises(ImageFormatError):
        write_image(tmp_path / "x.jpg", np.zeros((2, 2)))
