"""Grayscale image helpers: noise synthesis and quality metrics.

Images are plain 2D ``float64`` numpy arrays of shape ``(height, width)``
in row-major order, nominal range [0, 255]. Nothing in the processing
chain clips; quantization happens only in :mod:`sfnlm.fileio`.

Noise generator
---------------
Gaussian samples come from a counter-based SplitMix64 stream fed through
the Box-Muller transform, so a given ``(shape, sigma, seed)`` yields the
same noise field on every platform and regardless of thread count.

For pixel pair ``j`` (row-major pixels ``2j`` and ``2j+1``)::

    z_k  = splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15)   (mod 2**64)
    u1   = ((z_{2j} >> 11) + 1) * 2**-53                     in (0, 1]
    u2   =  (z_{2j+1} >> 11)    * 2**-53                     in [0, 1)
    rho  = sqrt(-2 ln u1)
    b[2j]   = sigma * rho * cos(2 pi u2)
    b[2j+1] = sigma * rho * sin(2 pi u2)

with the SplitMix64 finalizer::

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

An odd pixel count drops the last sine sample.
"""

from dataclasses import dataclass

import numpy as np

PEAK = 255.0

_GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


class IdenticalImagesError(ValueError):
    """Raised by :func:`psnr` when the MSE is exactly zero."""


@dataclass(frozen=True)
class NoiseModel:
    """Additive white Gaussian noise of standard deviation ``sigma``."""

    sigma: float
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if not 0 <= int(self.seed) <= _MASK64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")


def as_image(array) -> np.ndarray:
    """Validate and convert to a 2D float64 array."""
    img = np.asarray(array, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"expected a 2D grayscale image, got shape {img.shape}")
    if img.size == 0:
        raise ValueError("image must contain at least one pixel")
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains NaN or Inf samples")
    return img


def splitmix64(count: int, seed: int) -> np.ndarray:
    """First ``count`` outputs of the SplitMix64 stream started at ``seed``."""
    k = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & _MASK64) + k * _GOLDEN_GAMMA
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def gaussian_field(shape, seed: int) -> np.ndarray:
    """Standard normal samples of the given shape (see module docstring)."""
    n = int(np.prod(shape))
    pairs = (n + 1) // 2
    z = splitmix64(2 * pairs, seed)
    scale = 2.0 ** -53
    u1 = ((z[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * scale
    u2 = (z[1::2] >> np.uint64(11)).astype(np.float64) * scale
    rho = np.sqrt(-2.0 * np.log(u1))
    theta = 2.0 * np.pi * u2
    out = np.empty(2 * pairs)
    out[0::2] = rho * np.cos(theta)
    out[1::2] = rho * np.sin(theta)
    return out[:n].reshape(shape)


def add_gaussian_noise(u, model: NoiseModel) -> np.ndarray:
    """Return ``u + b`` with ``b`` i.i.d. N(0, sigma^2); no clipping."""
    u = as_image(u)
    if model.sigma == 0:
        return u.copy()
    return u + model.sigma * gaussian_field(u.shape, model.seed)


def mse(u, w) -> float:
    u = as_image(u)
    w = as_image(w)
    if u.shape != w.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {w.shape}")
    return float(np.mean((u - w) ** 2))


def psnr(u, w) -> float:
    """Peak signal-to-noise ratio in dB with a fixed peak of 255.

    Raises
    ------
    ValueError
        If the shapes differ.
    IdenticalImagesError
        If the images are identical (the PSNR would be infinite).
    """
    err = mse(u, w)
    if err == 0.0:
        raise IdenticalImagesError("identical images: PSNR is infinite")
    return float(10.0 * np.log10(PEAK * PEAK / err))
