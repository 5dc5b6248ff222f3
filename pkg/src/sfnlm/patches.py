"""Gaussian patch-weight profile shared by the spatial and frequency filters."""

import numpy as np

DEFAULT_PATCH_RADIUS = 3
DEFAULT_A = 2.0


def gaussian_profile(radius: int, a: float) -> np.ndarray:
    """Normalized 1D Gaussian of std ``a`` sampled at ``-radius..radius``."""
    if radius < 0:
        raise ValueError(f"patch radius must be >= 0, got {radius}")
    if not a > 0:
        raise ValueError(f"a must be > 0, got {a}")
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    g = np.exp(-t * t / (2.0 * a * a))
    return g / g.sum()


def patch_weights(radius: int = DEFAULT_PATCH_RADIUS, a: float = DEFAULT_A) -> np.ndarray:
    """``(2r+1, 2r+1)`` radially symmetric Gaussian weights summing to 1.

    The 2D profile ``exp(-(i^2 + j^2) / 2a^2)`` factors into two 1D profiles,
    so normalizing each factor normalizes the product.
    """
    g = gaussian_profile(radius, a)
    return np.outer(g, g)
