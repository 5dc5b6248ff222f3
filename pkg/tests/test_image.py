import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sfnlm.image import (
    IdenticalImagesError,
    NoiseModel,
    add_gaussian_noise,
    gaussian_field,
    psnr,
    splitmix64,
)


def test_splitmix64_reference_values():
    # published SplitMix64 outputs for seed 0 (first three draws)
    out = splitmix64(3, 0)
    assert [int(x) for x in out] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
    ]


def test_zero_sigma_returns_input_exactly(rng):
    u = rng.uniform(0, 255, (17, 9))
    v = add_gaussian_noise(u, NoiseModel(0.0, 7))
    assert np.array_equal(u, v)
    assert v is not u


def test_same_seed_is_bit_identical(rng):
    u = rng.uniform(0, 255, (32, 33))
    a = add_gaussian_noise(u, NoiseModel(10.0, 1))
    b = add_gaussian_noise(u, NoiseModel(10.0, 1))
    assert a.tobytes() == b.tobytes()


def test_distinct_seeds_differ(rng):
    u = rng.uniform(0, 255, (16, 16))
    a = add_gaussian_noise(u, NoiseModel(5.0, 1))
    b = add_gaussian_noise(u, NoiseModel(5.0, 2))
    assert not np.array_equal(a, b)


def test_no_clipping():
    u = np.full((64, 64), 255.0)
    v = add_gaussian_noise(u, NoiseModel(30.0, 3))
    assert v.max() > 255.0


def test_odd_pixel_count_uses_prefix_of_stream():
    odd = gaussian_field((3, 5), 11)
    even = gaussian_field((16,), 11)
    np.testing.assert_array_equal(odd.ravel(), even[:15])


def test_noise_statistics_large_image():
    b = gaussian_field((1024, 1024), 5) * 20.0
    assert abs(b.mean()) < 0.1
    assert abs(b.std() - 20.0) < 0.2


def test_noisy_psnr_sigma10_512():
    u = np.random.default_rng(0).uniform(0, 255, (512, 512))
    v = add_gaussian_noise(u, NoiseModel(10.0, 1))
    assert abs(psnr(u, v) - 20 * math.log10(255 / 10)) <= 0.10


def test_psnr_constant_offset():
    u = np.zeros((8, 8))
    assert psnr(u, u + 10) == pytest.approx(28.130803608679106, abs=1e-6)
    assert psnr(u, u + 255) == pytest.approx(0.0, abs=1e-12)


def test_psnr_errors():
    u = np.zeros((4, 4))
    with pytest.raises(ValueError, match="dimension"):
        psnr(u, np.zeros((4, 5)))
    with pytest.raises(IdenticalImagesError):
        psnr(u, u.copy())


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32))
def test_psnr_symmetric(h, w, seed):
    r = np.random.default_rng(seed)
    u = r.uniform(0, 255, (h, w))
    v = u + r.normal(0, 3, (h, w))
    assert psnr(u, v) == psnr(v, u)


def test_noise_model_validation():
    with pytest.raises(ValueError):
        NoiseModel(-1.0)
    with pytest.raises(ValueError):
        NoiseModel(1.0, -3)
