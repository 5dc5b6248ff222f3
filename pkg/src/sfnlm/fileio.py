"""Reading and writing 8-bit grayscale PGM (P5) and PNG files.

PGM layout written by :func:`write_image`::

    b"P5\\n" + b"<width> <height>\\n" + b"255\\n" + raster

where ``raster`` is ``width * height`` unsigned bytes, row-major, top row
first. The reader also accepts ``#`` comments and arbitrary whitespace
between header tokens, and any maxval in 1..255 (samples are not rescaled).

Reading maps bytes to float64 without scaling. Writing rounds half-up and
clamps to [0, 255].
"""

import os
import re

import numpy as np
from PIL import Image as PILImage

from .image import as_image


class ImageFormatError(ValueError):
    """Unsupported, malformed or non-grayscale image file."""


_PGM_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n?)*([^\s#]+)")


def _parse_pgm(data: bytes, path) -> np.ndarray:
    if data[:2] in (b"P6", b"P3"):
        raise ImageFormatError(f"{path}: color PPM input is not supported")
    if data[:2] != b"P5":
        raise ImageFormatError(f"{path}: not a binary PGM (P5) file")
    pos = 2
    fields = []
    for _ in range(3):
        m = _PGM_TOKEN.match(data, pos)
        if m is None:
            raise ImageFormatError(f"{path}: truncated PGM header")
        try:
            fields.append(int(m.group(1)))
        except ValueError:
            raise ImageFormatError(
                f"{path}: malformed PGM header token {m.group(1)!r}") from None
        pos = m.end()
    width, height, maxval = fields
    if width <= 0 or height <= 0:
        raise ImageFormatError(f"{path}: invalid dimensions {width}x{height}")
    if not 0 < maxval < 256:
        raise ImageFormatError(f"{path}: maxval {maxval} unsupported (8-bit only)")
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise ImageFormatError(f"{path}: missing whitespace after PGM header")
    pos += 1
    raster = data[pos:pos + width * height]
    if len(raster) != width * height:
        raise ImageFormatError(
            f"{path}: expected {width * height} raster bytes, found {len(raster)}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width)


def _read_png(path) -> np.ndarray:
    with PILImage.open(path) as im:
        if im.format != "PNG":
            raise ImageFormatError(f"{path}: expected PNG, found {im.format}")
        mode = im.mode
        if mode in ("I", "I;16", "I;16B", "I;16L"):
            raise ImageFormatError(f"{path}: 16-bit images are not supported")
        if mode == "1":
            im = im.convert("L")
        elif mode == "P":
            rgb = np.asarray(im.convert("RGB"))
            if not (np.array_equal(rgb[..., 0], rgb[..., 1])
                    and np.array_equal(rgb[..., 0], rgb[..., 2])):
                raise ImageFormatError(f"{path}: color palette image")
            return rgb[..., 0].copy()
        elif mode != "L":
            raise ImageFormatError(f"{path}: color or alpha image (mode {mode})")
        return np.asarray(im, dtype=np.uint8).copy()


def read_image(path) -> np.ndarray:
    """Load an 8-bit grayscale PGM or PNG as a float64 array."""
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head[:1] == b"P" and head[1:2] in b"123456":
        with open(path, "rb") as fh:
            return _parse_pgm(fh.read(), path).astype(np.float64)
    if head == b"\x89PNG\r\n\x1a\n":
        return _read_png(path).astype(np.float64)
    raise ImageFormatError(f"{path}: unsupported format (expected PGM P5 or PNG)")


def quantize(img) -> np.ndarray:
    """Round half-up and clamp to [0, 255] as ``uint8``."""
    img = as_image(img)
    return np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)


def write_image(path, img) -> None:
    """Save as PGM (``.pgm``) or PNG (``.png``), chosen by extension."""
    raster = quantize(img)
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".pgm":
        h, w = raster.shape
        with open(path, "wb") as fh:
            fh.write(b"P5\n%d %d\n255\n" % (w, h))
            fh.write(raster.tobytes())
    elif ext == ".png":
        PILImage.fromarray(raster).save(path, format="PNG")
    else:
        raise ImageFormatError(f"{path}: unsupported output extension {ext!r}")
