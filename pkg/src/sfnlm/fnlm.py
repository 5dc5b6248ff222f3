"""Non-local means on the half plane of Fourier coefficients.

Each representative frequency ``w`` of the half plane is replaced by a
weighted mean of the coefficients ``xi`` whose modulus is within ``r`` of
``|w|`` (a half annulus). Weights compare the 7x7 neighborhoods of complex
coefficients around ``w`` and ``xi`` on the full, periodically wrapped
spectrum; real and imaginary parts contribute separately to the distance
and are averaged with the same weights. The full plane is rebuilt by
Hermitian symmetry, so the inverse transform stays real.
"""

from dataclasses import dataclass

import numba
import numpy as np

from .patches import DEFAULT_A, DEFAULT_PATCH_RADIUS, gaussian_profile
from .spectral import HalfPlaneIndex, Spectrum, build_half_plane, reconstruct_full


@dataclass(frozen=True)
class FrequencyParams:
    l: float  # noqa: E741
    r: float = 2.0
    a: float = DEFAULT_A
    patch_radius: int = DEFAULT_PATCH_RADIUS

    def __post_init__(self):
        if not self.l > 0:
            raise ValueError(f"l must be > 0, got {self.l}")
        if not self.r >= 0:
            raise ValueError(f"r must be >= 0, got {self.r}")
        if not self.a > 0:
            raise ValueError(f"a must be > 0, got {self.a}")
        if int(self.patch_radius) != self.patch_radius or self.patch_radius < 0:
            raise ValueError(f"patch_radius must be a non-negative integer, got {self.patch_radius}")


class AnnulusIndex:
    """Half-plane entries sorted by modulus, for fast half-annulus lookup.

    Because membership depends only on ``| |w| - |xi| | <= r``, every
    half annulus is a contiguous run of the modulus-sorted order, found
    by two binary searches.
    """

    def __init__(self, idx: HalfPlaneIndex, r: float):
        if not r >= 0:
            raise ValueError(f"r must be >= 0, got {r}")
        self.r = float(r)
        self.modulus = idx.modulus
        self.order = np.argsort(self.modulus, kind="stable")
        self.sorted_modulus = self.modulus[self.order]
        self.rank = np.empty_like(self.order)
        self.rank[self.order] = np.arange(len(self.order))
        self.lo = np.searchsorted(self.sorted_modulus, self.sorted_modulus - self.r, side="left")
        self.hi = np.searchsorted(self.sorted_modulus, self.sorted_modulus + self.r, side="right")

    def __len__(self):
        return len(self.order)

    def members(self, i: int) -> np.ndarray:
        """Half-plane indices of the half annulus around entry ``i``, in bin order."""
        k = self.rank[i]
        return self.order[self.lo[k]:self.hi[k]]

    def sizes(self) -> np.ndarray:
        """Half-annulus cardinality per half-plane entry (half-plane order)."""
        return (self.hi - self.lo)[self.rank]


def build_annulus_index(idx: HalfPlaneIndex, r: float) -> AnnulusIndex:
    return AnnulusIndex(idx, r)


def _offsets(radius: int):
    t = np.arange(-radius, radius + 1)
    ty, tx = np.meshgrid(t, t, indexing="ij")
    return ty.ravel(), tx.ravel()


def spectral_patch_distance(s: Spectrum, omega, xi, weights) -> float:
    """Weighted squared distance between the complex patches at two frequencies.

    ``omega`` and ``xi`` are centered ``(kx, ky)`` pairs; neighborhoods wrap
    around the grid.
    """
    weights = np.asarray(weights, dtype=np.float64)
    p = weights.shape[0] // 2
    ty, tx = _offsets(p)
    h, w = s.shape
    c = s.coeffs

    def patch(k):
        rows = (k[1] + h // 2 + ty) % h
        cols = (k[0] + w // 2 + tx) % w
        return c[rows, cols]

    diff = patch(omega) - patch(xi)
    wt = weights.ravel()
    return float(np.sum(wt * diff.real ** 2) + np.sum(wt * diff.imag ** 2))


def patch_features(s: Spectrum, idx: HalfPlaneIndex, radius: int, a: float) -> np.ndarray:
    """Per-entry feature rows whose squared Euclidean distances are the patch distances.

    Row ``i`` holds ``sqrt(w_t) * Re`` then ``sqrt(w_t) * Im`` of the patch
    around half-plane entry ``i``.
    """
    ty, tx = _offsets(radius)
    g = gaussian_profile(radius, a)
    sw = np.sqrt(np.outer(g, g).ravel())
    h, w = s.shape
    rows = (idx.rows[:, None] + ty[None, :]) % h
    cols = (idx.cols[:, None] + tx[None, :]) % w
    patches = s.coeffs[rows, cols] * sw[None, :]
    return np.ascontiguousarray(np.concatenate([patches.real, patches.imag], axis=1))


@numba.njit(parallel=True, fastmath={"contract", "reassoc"}, cache=True)
def _annulus_average(feat, val_re, val_im, lo, hi, inv2l2, out_re, out_im, norm):
    n, m = feat.shape
    for i in numba.prange(n):
        acc_re = 0.0
        acc_im = 0.0
        z = 0.0
        for j in range(lo[i], hi[i]):
            dist = 0.0
            for t in range(m):
                diff = feat[i, t] - feat[j, t]
                dist += diff * diff
            wgt = np.exp(-dist * inv2l2)
            acc_re += wgt * val_re[j]
            acc_im += wgt * val_im[j]
            z += wgt
        out_re[i] = acc_re / z
        out_im[i] = acc_im / z
        norm[i] = z


def fnlm_half(s: Spectrum, params: FrequencyParams, idx: HalfPlaneIndex = None,
              annulus: AnnulusIndex = None):
    """Filtered half-plane values and normalizations ``Z(w)``, in half-plane order."""
    if idx is None:
        idx = build_half_plane(s.width, s.height)
    if s.shape != idx.shape:
        raise ValueError(f"shape mismatch: spectrum {s.shape} vs index {idx.shape}")
    if annulus is None:
        annulus = AnnulusIndex(idx, params.r)
    order = annulus.order
    feat = patch_features(s, idx, int(params.patch_radius), params.a)[order]
    vals = s.coeffs[idx.rows, idx.cols][order]
    n = len(order)
    out_re = np.empty(n)
    out_im = np.empty(n)
    norm = np.empty(n)
    inv2l2 = 1.0 / (2.0 * params.l * params.l)
    _annulus_average(feat, np.ascontiguousarray(vals.real), np.ascontiguousarray(vals.imag),
                     annulus.lo, annulus.hi, inv2l2, out_re, out_im, norm)
    out = np.empty(n, dtype=np.complex128)
    out[order] = out_re + 1j * out_im
    z = np.empty(n)
    z[order] = norm
    return out, z


def fnlm_filter(s: Spectrum, params: FrequencyParams, idx: HalfPlaneIndex = None,
                return_norm: bool = False):
    """Filter a Hermitian spectrum; the result is rebuilt on the full plane."""
    if idx is None:
        idx = build_half_plane(s.width, s.height)
    values, z = fnlm_half(s, params, idx)
    full = reconstruct_full(values, idx)
    if return_norm:
        return full, z
    return full

