import numpy as np
import pytest

from photonweyl.errors import NonTransverseError
from photonweyl.hilbert import (
    WaveFunction,
    null_space_check,
    restrict_to_shell,
    s_form,
    scalar_product,
    scalar_product_transverse,
    sigma,
)
from photonweyl.kspace import Grid
from photonweyl.testfn import Mode, Profile, TestFunction, random_test_function


@pytest.fixture(scope="module")
def grid():
    return Grid(1e-3, 3.5, n_r=64, n_theta=16, n_phi=32)


def _random_wave(rng, grid):
    spatial = rng.normal(size=(grid.size, 3)) + 1j * rng.normal(size=(grid.size, 3))
    return WaveFunction(grid, spatial)


def test_time_component_is_derived(grid):
    rng = np.random.default_rng(0)
    w = _random_wave(rng, grid)
    t = w.time_component()
    assert np.allclose(grid.r * t, np.sum(grid.xyz * w.spatial, axis=-1))


def test_wave_function_algebra(grid):
    rng = np.random.default_rng(1)
    u = _random_wave(rng, grid)
    v = _random_wave(rng, grid)
    s = (u + v) - 0.5 * v
    assert np.allclose(s.spatial, u.spatial + 0.5 * v.spatial)


def test_scalar_product_sesquilinear(grid):
    rng = np.random.default_rng(2)
    u, v = _random_wave(rng, grid), _random_wave(rng, grid)
    c = 1.3 - 0.7j
    lhs = scalar_product(u, c * v)
    assert lhs == pytest.approx(c * scalar_product(u, v), rel=1e-12)
    assert scalar_product(c * u, v) == pytest.approx(
        np.conj(c) * scalar_product(u, v), rel=1e-12)
    assert scalar_product(u, v) == pytest.approx(
        np.conj(scalar_product(v, u)), rel=1e-12)


def test_longitudinal_null_space(grid):
    rng = np.random.default_rng(3)
    chi = rng.normal(size=grid.size) + 1j * rng.normal(size=grid.size)
    khat = grid.xyz / grid.r[:, None]
    gauge = WaveFunction(grid, chi[:, None] * khat)
    norm = scalar_product(gauge, gauge)
    scale = grid.integrate(np.abs(chi) ** 2 / grid.r)
    assert abs(norm) <= 1e-13 * scale
    rep = null_space_check(gauge)
    assert rep["transverse_norm"] <= 1e-12 * rep["total_norm"]


def test_transverse_positive_norm(grid):
    rng = np.random.default_rng(4)
    w = _random_wave(rng, grid)
    # subtract the longitudinal part -> strictly positive norm
    khat = grid.xyz / grid.r[:, None]
    long_part = np.sum(khat * w.spatial, axis=-1)[:, None] * khat
    t = WaveFunction(grid, w.spatial - long_part)
    assert np.real(scalar_product(t, t)) > 0.0
    rep = null_space_check(t)
    assert rep["longitudinal_norm"] <= 1e-12 * rep["total_norm"]


def test_dual_forms_agree(grid):
    rng = np.random.default_rng(5)
    u, v = _random_wave(rng, grid), _random_wave(rng, grid)
    a = scalar_product(u, v)
    b = scalar_product_transverse(u, v)
    assert abs(a - b) <= 1e-12 * (abs(a) + 1.0)


def test_sigma_s_decomposition(grid):
    rng = np.random.default_rng(6)
    f = random_test_function(rng, k0_range=(0.8, 1.6), width_range=(0.2, 0.3))
    g = random_test_function(rng, k0_range=(0.8, 1.6), width_range=(0.2, 0.3))
    sp = scalar_product(restrict_to_shell(f, grid), restrict_to_shell(g, grid))
    assert sigma(f, g, grid) == pytest.approx(np.imag(sp), rel=1e-12)
    assert s_form(f, g, grid) == pytest.approx(np.real(sp), rel=1e-12)
    assert sigma(f, f, grid) == pytest.approx(0.0, abs=1e-12)


def test_restrict_records_residuals(grid):
    rng = np.random.default_rng(7)
    f = random_test_function(rng, k0_range=(0.8, 1.6))
    phi = restrict_to_shell(f, grid)
    assert phi.meta["continuity_residual"] < 1e-12
    assert restrict_to_shell(phi, grid) is phi  # passthrough


def test_restrict_rejects_non_transverse(grid):
    # constant polarization crossing the cone violates continuity there
    m = Mode(Profile("separable-bump", [1.2, 0.7, 0.5, 0.6], [0.7, 0.6, 0.6, 0.6]),
             np.array([0.1, 1.0, -0.4, 0.3]))
    with pytest.raises(NonTransverseError):
        restrict_to_shell(TestFunction([m]), grid)


def test_zero_function_restriction(grid):
    rng = np.random.default_rng(8)
    f = 0.0 * random_test_function(rng)
    phi = restrict_to_shell(f, grid)
    assert np.all(phi.spatial == 0.0)
    assert scalar_product(phi, phi) == 0.0
