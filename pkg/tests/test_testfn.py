import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonweyl.errors import ConfigurationError, GaugeSingularError
from photonweyl.minkowski import lor
from photonweyl.testfn import (
    GAUSS_WINDOW,
    Mode,
    Profile,
    TestFunction,
    cone_orthogonal_mode,
    conserved_mode,
    project_continuity,
    random_test_function,
    translate,
    verify_continuity,
)


def _samples(rng, n=500, span=4.0):
    return rng.uniform(-span, span, size=(n, 4))


def test_profile_support_box():
    p = Profile("separable-bump", [1.0, 0.0, 0.0, 0.0], [0.5, 0.5, 0.5, 0.5])
    lo, hi = p.box()
    assert np.allclose(lo, [0.5, -0.5, -0.5, -0.5])
    assert p.evaluate(np.array([2.0, 0.0, 0.0, 0.0])) == 0.0
    assert abs(p.evaluate(np.array([1.0, 0.0, 0.0, 0.0]))) == pytest.approx(1.0)


def test_gaussian_profile_window():
    p = Profile("gaussian-windowed-bump", [2.0, 0, 0, 0], [0.2, 0.2, 0.2, 0.2],
                window=7.0)
    lo, hi = p.box()
    assert hi[0] - lo[0] == pytest.approx(2 * 7.0 * 0.2)
    edge = np.array([2.0 + 7.0 * 0.2, 0, 0, 0])
    assert p.evaluate(edge) == 0.0


def test_profile_rejects_bad_input():
    with pytest.raises(ConfigurationError):
        Profile("nope", [0, 0, 0, 0], [1, 1, 1, 1])
    with pytest.raises(ConfigurationError):
        Profile("separable-bump", [0, 0, 0, 0], [1, -1, 1, 1])


def test_symmetrized_mode_is_hermitian():
    rng = np.random.default_rng(0)
    f = random_test_function(rng, n_modes=2)
    k = _samples(rng, 200)
    assert np.allclose(f.evaluate(-k), np.conj(f.evaluate(k)))


def test_conserved_mode_continuity():
    m = conserved_mode("separable-bump", [1.0, 0.5, -0.3, 0.2], [0.6, 0.5, 0.5, 0.5],
                       [0.3, -0.8, 0.5], amplitude=1.0 + 2.0j)
    f = TestFunction([m])
    rng = np.random.default_rng(1)
    assert verify_continuity(f, _samples(rng)) < 1e-14


def test_cone_orthogonal_mode_continuity():
    m = cone_orthogonal_mode("gaussian-windowed-bump", [3.0, 0.5, 0.5, 0.5],
                             [0.15, 0.1, 0.1, 0.1], amplitude=2.0)
    f = TestFunction([m])
    rng = np.random.default_rng(2)
    assert verify_continuity(f, _samples(rng)) < 1e-14


def test_plain_mode_violates_continuity():
    m = Mode(Profile("separable-bump", [1.0, 0.3, 0.2, -0.1], [0.6, 0.5, 0.5, 0.5]),
             np.array([0.0, 1.0, 0.0, 0.0]))
    f = TestFunction([m])
    rng = np.random.default_rng(3)
    # sample inside the support box, where the violation is visible
    lo, hi = f.bounding_box()
    k = rng.uniform(lo, hi, size=(500, 4))
    assert verify_continuity(f, k) > 1e-3


def test_projection_repairs_continuity_off_cone():
    m = Mode(Profile("separable-bump", [3.0, 0.4, 0.4, 0.4], [0.4, 0.3, 0.3, 0.3]),
             np.array([0.2, 1.0, -0.5, 0.3]))
    proj = project_continuity(TestFunction([m]))
    rng = np.random.default_rng(4)
    # samples restricted to the support box, which sits off the cone
    lo, hi = proj.bounding_box()
    k = rng.uniform(lo, hi, size=(400, 4))
    vals = proj.evaluate(k)
    resid = np.max(np.abs(lor(k, vals)))
    assert resid < 1e-12 * np.max(np.abs(vals))


def test_gauge_singularity_scan():
    # off-cone support: chi stays bounded as the band shrinks
    off = Mode(Profile("separable-bump", [3.0, 0.4, 0.4, 0.4], [0.4, 0.3, 0.3, 0.3]),
               np.array([0.2, 1.0, -0.5, 0.3]))
    proj = project_continuity(TestFunction([off]))
    rng = np.random.default_rng(5)
    lo, hi = proj.bounding_box()
    k = rng.uniform(lo, hi, size=(300, 4))
    maxima = proj.gauge_singularity_scan(k)
    assert maxima[-1] < 1e3

    # support crossing the cone: chi blows up like 1/band
    on = Mode(Profile("separable-bump", [1.0, 0.6, 0.5, 0.4], [0.8, 0.6, 0.6, 0.6]),
              np.array([0.2, 1.0, -0.5, 0.3]))
    proj_on = project_continuity(TestFunction([on]))
    lo, hi = proj_on.bounding_box()
    k = rng.uniform(lo, hi, size=(2000, 4))
    # steer half the samples right next to the cone k0 = |k|, where the
    # gauge scalar diverges as the regularization band shrinks
    k[:1000, 0] = np.linalg.norm(k[:1000, 1:], axis=-1) * (1.0 + 1e-8)
    with pytest.raises(GaugeSingularError):
        proj_on.gauge_singularity_scan(k, ceiling=1e4,
                                       factors=(1.0, 1e-3, 1e-6))


def test_translation_is_a_phase():
    rng = np.random.default_rng(6)
    f = random_test_function(rng)
    a = np.array([2.0, -0.5, 0.3, 1.0])
    k = _samples(rng, 200)
    shifted = translate(f, a).evaluate(k)
    expected = f.evaluate(k) * np.exp(1j * lor(k, a))[:, None]
    assert np.allclose(shifted, expected)


def test_testfunction_algebra():
    rng = np.random.default_rng(7)
    f = random_test_function(rng)
    g = random_test_function(rng)
    k = _samples(rng, 100)
    assert np.allclose((f + g).evaluate(k), f.evaluate(k) + g.evaluate(k))
    assert np.allclose((2.5 * f).evaluate(k), 2.5 * f.evaluate(k))
    assert np.allclose((f - g).evaluate(k), f.evaluate(k) - g.evaluate(k))
    with pytest.raises(ConfigurationError):
        (1.0 + 1.0j) * f


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_random_test_function_positive_frequency(seed):
    rng = np.random.default_rng(seed)
    f = random_test_function(rng, n_modes=2)
    for m in f.modes:
        lo, _ = m.profile.box()
        assert lo[0] >= 0.0


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_random_test_function_continuity(seed):
    rng = np.random.default_rng(seed)
    f = random_test_function(rng)
    assert verify_continuity(f, _samples(rng, 200)) < 1e-13
