import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import half_plane, naive_dft, wrap
from sfnlm.spectral import (
    HermitianSymmetryError,
    Spectrum,
    build_half_plane,
    forward_dft,
    inverse_dft,
    reconstruct_full,
    restrict,
)


def test_constant_image():
    s = forward_dft(np.full((6, 5), 3.0))
    expected = np.zeros((6, 5), dtype=complex)
    expected[3, 2] = 3.0 * np.sqrt(30)
    np.testing.assert_allclose(s.coeffs, expected, atol=1e-9)
    assert s.at(0, 0) == pytest.approx(3.0 * np.sqrt(30))


def test_impulse_has_flat_modulus():
    v = np.zeros((8, 6))
    v[2, 3] = 1.0
    np.testing.assert_allclose(np.abs(forward_dft(v).coeffs), 1 / np.sqrt(48), atol=1e-12)


@pytest.mark.parametrize("shape", [(4, 4), (3, 5), (1, 7), (6, 1), (1, 1)])
def test_matches_naive_dft(rng, shape):
    v = rng.uniform(0, 255, shape)
    np.testing.assert_allclose(forward_dft(v).coeffs, naive_dft(v), atol=1e-10)


def test_roundtrip_and_zero(rng):
    v = rng.uniform(0, 255, (16, 16))
    np.testing.assert_allclose(inverse_dft(forward_dft(v)), v, atol=1e-9)
    assert np.array_equal(inverse_dft(Spectrum(np.zeros((5, 4)))), np.zeros((5, 4)))


def test_linearity(rng):
    u = rng.uniform(0, 255, (12, 10))
    b = rng.normal(0, 20, (12, 10))
    summed = Spectrum(forward_dft(u).coeffs + forward_dft(b).coeffs)
    np.testing.assert_allclose(inverse_dft(summed), u + b, atol=1e-9)


def test_parseval_512(rng):
    v = rng.uniform(0, 255, (512, 512))
    e_img = np.sum(v ** 2)
    e_spec = np.sum(np.abs(forward_dft(v).coeffs) ** 2)
    assert abs(e_img - e_spec) <= 1e-6 * e_img


def test_hermitian_symmetry_of_real_image(rng):
    c = forward_dft(rng.uniform(0, 255, (7, 8))).coeffs
    for ky in range(-3, 4):
        for kx in range(-4, 4):
            a = c[(ky + 3) % 7, (kx + 4) % 8]
            b = c[(-ky + 3) % 7, (-kx + 4) % 8]
            assert abs(a - np.conj(b)) <= 1e-9 * max(1.0, abs(a))


def test_inverse_rejects_non_hermitian():
    c = np.zeros((4, 4), dtype=complex)
    c[2, 3] = 1.0  # (kx, ky) = (1, 0) with no conjugate partner
    with pytest.raises(HermitianSymmetryError, match=r"\(kx, ky\) = \((1|-1), 0\)"):
        inverse_dft(Spectrum(c))


def test_noise_variance_is_preserved():
    from sfnlm.image import gaussian_field
    b = 20.0 * gaussian_field((256, 256), 9)
    idx = build_half_plane(256, 256)
    vals = restrict(forward_dft(b), idx)[~idx.self_conjugate]
    assert abs(np.mean(np.abs(vals) ** 2) - 400.0) <= 0.05 * 400.0


# -- half plane -------------------------------------------------------------

def test_half_plane_4x4():
    idx = build_half_plane(4, 4)
    assert len(idx) == 10
    selfc = {(int(x), int(y)) for x, y, s in zip(idx.kx, idx.ky, idx.self_conjugate) if s}
    assert selfc == {(0, 0), (-2, 0), (0, -2), (-2, -2)}


def test_half_plane_1x1():
    idx = build_half_plane(1, 1)
    assert len(idx) == 1 and idx.self_conjugate[0]
    assert (idx.kx[0], idx.ky[0]) == (0, 0)


@pytest.mark.parametrize("w, h", [(4, 4), (5, 4), (4, 5), (5, 7), (8, 6), (1, 6), (7, 1), (2, 2)])
def test_half_plane_matches_enumeration(w, h):
    idx = build_half_plane(w, h)
    assert list(zip(idx.kx.tolist(), idx.ky.tolist())) == half_plane(h, w)
    # no representative has ky > 0, and on ky == 0 only kx <= 0
    assert np.all(idx.ky <= 0)
    assert np.all(idx.kx[idx.ky == 0] <= 0)


@pytest.mark.parametrize("w, h", [(4, 4), (5, 6), (7, 3), (1, 1), (2, 5)])
def test_mirror_map_pairs(w, h):
    idx = build_half_plane(w, h)
    counts = np.zeros(len(idx), dtype=int)
    for ky in range(-(h // 2), h - h // 2):
        for kx in range(-(w // 2), w - w // 2):
            rep, conj = idx.mirror_map(kx, ky)
            rep2, conj2 = idx.mirror_map(wrap(-kx, w), wrap(-ky, h))
            assert rep == rep2
            if idx.self_conjugate[rep]:
                assert not conj and not conj2
            else:
                assert conj != conj2
            counts[rep] += 1
    # every pair covered exactly once from each side
    assert np.all(counts == np.where(idx.self_conjugate, 1, 2))


def test_reconstruct_restrict_identity(rng):
    s = forward_dft(rng.uniform(0, 255, (9, 8)))
    idx = build_half_plane(8, 9)
    np.testing.assert_allclose(reconstruct_full(restrict(s, idx), idx).coeffs, s.coeffs, atol=1e-12)


def test_self_conjugate_forced_real():
    idx = build_half_plane(4, 4)
    vals = np.zeros(len(idx), dtype=complex)
    k = int(np.flatnonzero(idx.self_conjugate)[0])
    vals[k] = 3 + 4j
    full = reconstruct_full(vals, idx)
    assert full.coeffs[idx.rows[k], idx.cols[k]] == 3 + 0j


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 16), st.integers(1, 16), st.integers(0, 2**32))
def test_reconstruct_random_values_gives_real_image(w, h, seed):
    r = np.random.default_rng(seed)
    idx = build_half_plane(w, h)
    vals = r.normal(size=len(idx)) + 1j * r.normal(size=len(idx))
    full = reconstruct_full(vals, idx)
    img = np.fft.ifft2(np.fft.ifftshift(full.coeffs), norm="ortho")
    assert np.max(np.abs(img.imag)) <= 1e-9
    inverse_dft(full)  # passes the Hermitian check
