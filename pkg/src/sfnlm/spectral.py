"""Unitary 2D DFT with centered indexing and half-plane bookkeeping.

A :class:`Spectrum` stores coefficients in a ``(height, width)`` complex
array whose entry ``[ky + H//2, kx + W//2]`` holds the coefficient of the
centered frequency ``(kx, ky)``, ``kx in [-W//2, ceil(W/2) - 1]``. The
forward and inverse transforms both carry a ``1/sqrt(W*H)`` factor, so
white noise of standard deviation sigma keeps total per-coefficient
variance sigma**2.

The half plane ``P`` keeps one representative per conjugate pair
``{k, -k}`` (indices modulo the grid): all ``ky < 0``, plus ``kx <= 0`` on
the ``ky = 0`` row, and on the Nyquist row ``ky = -H/2`` of even-height
grids, which is its own mirror, again only ``kx <= 0``.
"""

from dataclasses import dataclass

import numpy as np

from .image import as_image

HERMITIAN_RTOL = 1e-9


class HermitianSymmetryError(ValueError):
    """Spectrum is not the transform of a real image."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Centered complex coefficients of a unitary 2D DFT."""

    coeffs: np.ndarray
    normalization: str = "unitary"

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.ndim != 2 or c.size == 0:
            raise ValueError(f"spectrum must be a non-empty 2D array, got {c.shape}")
        if self.normalization != "unitary":
            raise ValueError("only unitary normalization is supported")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def shape(self):
        return self.coeffs.shape

    @property
    def height(self) -> int:
        return self.coeffs.shape[0]

    @property
    def width(self) -> int:
        return self.coeffs.shape[1]

    def at(self, kx: int, ky: int) -> complex:
        """Coefficient at centered frequency ``(kx, ky)``, indices modulo the grid."""
        h, w = self.shape
        return complex(self.coeffs[(ky + h // 2) % h, (kx + w // 2) % w])


def mirror(arr: np.ndarray) -> np.ndarray:
    """Point reflection ``k -> -k`` of a centered array, modulo the grid."""
    h, w = arr.shape
    rows = (2 * (h // 2) - np.arange(h)) % h
    cols = (2 * (w // 2) - np.arange(w)) % w
    return arr[np.ix_(rows, cols)]


def hermitian_defect(coeffs: np.ndarray):
    """Largest ``|c(k) - conj(c(-k))|`` and the centered ``(kx, ky)`` where it occurs."""
    diff = np.abs(coeffs - np.conj(mirror(coeffs)))
    i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
    h, w = coeffs.shape
    return float(diff[i, j]), (int(j - w // 2), int(i - h // 2))


def forward_dft(v) -> Spectrum:
    v = as_image(v)
    return Spectrum(np.fft.fftshift(np.fft.fft2(v, norm="ortho")))


def inverse_dft(s: Spectrum, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Real image whose unitary DFT is ``s``.

    Raises
    ------
    HermitianSymmetryError
        If ``s`` deviates from Hermitian symmetry by more than ``rtol``
        relative to its largest coefficient magnitude.
    """
    c = s.coeffs
    defect, where = hermitian_defect(c)
    scale = max(float(np.max(np.abs(c))), 1.0)
    if defect > rtol * scale:
        raise HermitianSymmetryError(
            f"spectrum is not Hermitian: |c(k) - conj(c(-k))| = {defect:.3e} "
            f"at (kx, ky) = {where}")
    return np.fft.ifft2(np.fft.ifftshift(c), norm="ortho").real.copy()


@dataclass(frozen=True, eq=False)
class HalfPlaneIndex:
    """Representatives of conjugate frequency pairs.

    Attributes
    ----------
    shape : (height, width)
    kx, ky : int arrays
        Centered coordinates of each representative, in row-major order.
    rows, cols : int arrays
        Positions of the representatives in the centered coefficient array.
    self_conjugate : bool array
        True where ``-k == k`` modulo the grid.
    rep : int array, shape ``(height, width)``
        For every full-plane position, the index of its representative.
    conj : bool array, shape ``(height, width)``
        True where the position holds the conjugate of its representative.
    """

    shape: tuple
    kx: np.ndarray
    ky: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    self_conjugate: np.ndarray
    rep: np.ndarray
    conj: np.ndarray

    def __len__(self):
        return len(self.kx)

    @property
    def modulus(self) -> np.ndarray:
        return np.hypot(self.kx, self.ky)

    def mirror_map(self, kx: int, ky: int):
        """``(representative index, conjugation flag)`` of any centered frequency."""
        h, w = self.shape
        i, j = (ky + h // 2) % h, (kx + w // 2) % w
        return int(self.rep[i, j]), bool(self.conj[i, j])


def build_half_plane(width: int, height: int) -> HalfPlaneIndex:
    if width <= 0 or height <= 0:
        raise ValueError(f"dimensions must be positive, got {width}x{height}")
    cy, cx = height // 2, width // 2
    ky, kx = np.meshgrid(np.arange(height) - cy, np.arange(width) - cx, indexing="ij")
    mky, mkx = mirror(ky), mirror(kx)
    # keep k when (ky, kx) <= (-ky, -kx) in lexicographic order on the wrapped grid
    keep = (ky < mky) | ((ky == mky) & (kx <= mkx))
    self_conj = (ky == mky) & (kx == mkx)

    rows, cols = np.nonzero(keep)
    n = len(rows)
    rep = np.full((height, width), -1, dtype=np.int64)
    rep[rows, cols] = np.arange(n)
    conj = np.zeros((height, width), dtype=bool)
    mirrored = mirror(rep)
    fill = rep < 0
    rep[fill] = mirrored[fill]
    conj[fill] = True

    for a in (rows, cols, rep, conj):
        a.flags.writeable = False
    sc = self_conj[rows, cols]
    sc.flags.writeable = False
    kxs = (cols - cx).astype(np.int64)
    kys = (rows - cy).astype(np.int64)
    kxs.flags.writeable = False
    kys.flags.writeable = False
    return HalfPlaneIndex((height, width), kxs, kys, rows, cols, sc, rep, conj)


def restrict(s: Spectrum, idx: HalfPlaneIndex) -> np.ndarray:
    """Coefficient values on the representatives of ``idx``."""
    if s.shape != idx.shape:
        raise ValueError(f"shape mismatch: spectrum {s.shape} vs index {idx.shape}")
    return s.coeffs[idx.rows, idx.cols].copy()


def reconstruct_full(values, idx: HalfPlaneIndex) -> Spectrum:
    """Hermitian spectrum from one value per representative.

    Self-conjugate entries keep only their real part.
    """
    vals = np.array(values, dtype=np.complex128)
    if vals.shape != (len(idx),):
        raise ValueError(f"expected {len(idx)} half-plane values, got shape {vals.shape}")
    vals[idx.self_conjugate] = vals[idx.self_conjugate].real
    full = vals[idx.rep]
    return Spectrum(np.where(idx.conj, np.conj(full), full))
