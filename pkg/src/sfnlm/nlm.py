"""Spatial non-local means with a Gaussian-weighted patch distance.

Each output pixel is a weighted mean of the pixels ``y`` in the Euclidean
disc ``|x - y| <= d`` (clipped to the image), with weight
``exp(-||V(x) - V(y)||^2_{2,a} / (2 h^2)``. Patches near the border read
from the symmetric (edge-repeating) mirror extension of the image.
"""

from dataclasses import dataclass

import numpy as np

from .image import as_image
from .patches import DEFAULT_A, DEFAULT_PATCH_RADIUS, gaussian_profile


@dataclass(frozen=True)
class SpatialParams:
    h: float
    d: float = 4.0
    a: float = DEFAULT_A
    patch_radius: int = DEFAULT_PATCH_RADIUS

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"h must be > 0, got {self.h}")
        if not self.d >= 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if not self.a > 0:
            raise ValueError(f"a must be > 0, got {self.a}")
        if int(self.patch_radius) != self.patch_radius or self.patch_radius < 0:
            raise ValueError(f"patch_radius must be a non-negative integer, got {self.patch_radius}")


def disc_offsets(d: float) -> np.ndarray:
    """Integer offsets ``(dy, dx)`` with ``dy^2 + dx^2 <= d^2``, row-major order."""
    r = int(np.floor(d))
    dy, dx = np.meshgrid(np.arange(-r, r + 1), np.arange(-r, r + 1), indexing="ij")
    inside = dy * dy + dx * dx <= d * d
    return np.stack([dy[inside], dx[inside]], axis=1)


def mirror_index(i, n: int):
    """Symmetric-extension index: ``-1 -> 0``, ``n -> n - 1``, period ``2n``."""
    i = np.mod(i, 2 * n)
    return np.where(i >= n, 2 * n - 1 - i, i)


def patch_distance(v, x, y, weights) -> float:
    """Gaussian-weighted squared distance between the patches at ``x`` and ``y``.

    ``x`` and ``y`` are ``(row, col)`` pairs; ``weights`` is a square array
    of odd side, typically from :func:`sfnlm.patches.patch_weights`.
    """
    v = as_image(v)
    weights = np.asarray(weights, dtype=np.float64)
    p = weights.shape[0] // 2
    t = np.arange(-p, p + 1)
    h, w = v.shape

    def patch(c):
        rows = mirror_index(c[0] + t, h)
        cols = mirror_index(c[1] + t, w)
        return v[np.ix_(rows, cols)]

    return float(np.sum(weights * (patch(x) - patch(y)) ** 2))


def _smooth(e: np.ndarray, g: np.ndarray, out_shape) -> np.ndarray:
    """Valid-mode separable correlation of ``e`` with ``g`` along both axes."""
    k = len(g)
    rows = np.zeros((out_shape[0], e.shape[1]))
    for i in range(k):
        rows += g[i] * e[i:i + out_shape[0], :]
    out = np.zeros(out_shape)
    for j in range(k):
        out += g[j] * rows[:, j:j + out_shape[1]]
    return out


def nlm_filter(v, params: SpatialParams, return_norm: bool = False):
    """Denoise ``v`` with spatial NL-means.

    Parameters
    ----------
    v : array_like, 2D
        Noisy image.
    params : SpatialParams
    return_norm : bool
        Also return the per-pixel normalization ``Z(x)``.

    Returns
    -------
    ndarray or (ndarray, ndarray)
    """
    v = as_image(v)
    H, W = v.shape
    p = int(params.patch_radius)
    g = gaussian_profile(p, params.a)
    offsets = disc_offsets(params.d)
    reach = int(np.floor(params.d))
    pad = p + reach
    vp = np.pad(v, pad, mode="symmetric")
    inv = 1.0 / (2.0 * params.h * params.h)

    # patch-center grid extended by p on each side, in padded coordinates
    r0, c0 = pad - p, pad - p
    eh, ew = H + 2 * p, W + 2 * p
    ref = vp[r0:r0 + eh, c0:c0 + ew]

    num = np.zeros((H, W))
    den = np.zeros((H, W))
    row_ids = np.arange(H)[:, None]
    col_ids = np.arange(W)[None, :]
    for dy, dx in offsets:
        valid = ((row_ids + dy >= 0) & (row_ids + dy < H)
                 & (col_ids + dx >= 0) & (col_ids + dx < W))
        if not valid.any():
            continue
        shifted = vp[r0 + dy:r0 + dy + eh, c0 + dx:c0 + dx + ew]
        dist = _smooth((ref - shifted) ** 2, g, (H, W))
        wgt = np.exp(-dist * inv) * valid
        diff = shifted[p:p + H, p:p + W] - v
        num += wgt * diff
        den += wgt
    out = v + num / den
    if return_norm:
        return out, den
    return out

