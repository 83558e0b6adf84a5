import numpy as np
import pytest

from photonweyl.currents import (
    CoulombCurrent,
    PulseCurrent,
    QuantumCurrent,
    acl_smear,
    x_functional,
    y_functional,
)
from photonweyl.gns import gram_matrix, gram_rank, positivity_report
from photonweyl.kspace import Grid
from photonweyl.states import (
    ClassicalSourceKernel,
    FreeVacuumKernel,
    OscillatorArgument,
    ProductKernel,
    QuantumSourceKernel,
    coherent_radiation_check,
    mean_field,
    second_moment_numeric,
)
from photonweyl.testfn import TestFunction, conserved_mode, random_test_function


@pytest.fixture(scope="module")
def grid():
    return Grid(1e-3, 4.0, n_r=64, n_theta=16, n_phi=32)


@pytest.fixture(scope="module")
def family(grid):
    rng = np.random.default_rng(100)
    return [random_test_function(rng, k0_range=(0.8, 1.8),
                                 width_range=(0.2, 0.35), amplitude=0.6)
            for _ in range(6)]


def _pulse():
    return PulseCurrent.from_profile(
        "gaussian-windowed-bump", [2.8, 2.0, -1.6, 1.0],
        [0.5, 0.25, 0.25, 0.25], [0.6, -0.3, 0.4], amplitude=0.6)


def _classical(grid):
    return ClassicalSourceKernel(CoulombCurrent(strength=1.3), grid)


def _quantum(grid):
    alpha = TestFunction([conserved_mode(
        "gaussian-windowed-bump", [2.8, 2.0, -1.6, 1.0],
        [0.5, 0.25, 0.25, 0.25], [0.5, -0.2, 0.3],
        amplitude=0.4, symmetrize=False)])
    rng = np.random.default_rng(101)
    fx1 = random_test_function(rng, k0_range=(0.9, 1.3),
                               width_range=(0.2, 0.3), amplitude=0.2)
    cur = QuantumCurrent.with_linear_coupling(alpha, fx1, grid)
    return QuantumSourceKernel(cur, n_nodes=12)


def test_normalization_exact(grid, family):
    for kernel in (FreeVacuumKernel(grid), _classical(grid),
                   _quantum(grid)):
        zero = 0.0 * family[0]
        assert kernel.corr(zero, zero) == 1.0


def test_hermiticity(grid, family):
    kernel = FreeVacuumKernel(grid)
    for f in family[:3]:
        for g in family[3:]:
            a = kernel.corr(f, g)
            b = kernel.corr(g, f)
            assert abs(a - np.conj(b)) <= 1e-14


def test_dual_forms_agree_on_kernel(grid, family):
    kc = FreeVacuumKernel(grid, form="cone")
    kt = FreeVacuumKernel(grid, form="transverse")
    for f, g in zip(family[:3], family[3:]):
        assert abs(kc.corr(f, g) - kt.corr(f, g)) <= 1e-12


def test_gram_positive_all_variants(grid, family):
    for kernel in (FreeVacuumKernel(grid), _classical(grid),
                   _quantum(grid)):
        rep = positivity_report(gram_matrix(kernel, family))
        assert rep["positive"]


def test_classical_rank_equals_free_rank(grid, family):
    # the classical kernel is a diagonal-unitary congruence of the free
    # one, so Gram ranks agree for any family; a repeated member drops
    # the rank of both Grams together
    fam = family[:4] + [family[0]]
    free = gram_rank(gram_matrix(FreeVacuumKernel(grid), fam))
    cls = gram_rank(gram_matrix(_classical(grid), fam))
    assert free == cls == 4


def test_classical_mean_and_moments(grid, family):
    kernel = _classical(grid)
    f, g = family[0], family[1]
    m = kernel.mean(f)
    assert m == pytest.approx(mean_field(kernel, f, step=3e-4), rel=1e-5)
    sm = kernel.second_moment(f, g)
    sm_num = second_moment_numeric(kernel, f, g, step=1e-3)
    assert abs(sm - sm_num) <= 1e-6 * max(1.0, abs(sm))


def test_free_vacuum_mean_vanishes(grid, family):
    kernel = FreeVacuumKernel(grid)
    assert abs(mean_field(kernel, family[0], step=3e-4)) <= 1e-10


def test_quantum_interacting_closed_form(grid, family):
    kernel = _quantum(grid)
    free = FreeVacuumKernel(grid)
    cur = kernel.current
    for f in family[:3]:
        x = x_functional(cur, f)
        y = y_functional(cur, f, n_nodes=12)
        zero = 0.0 * f
        expect = free.corr(f, zero) * np.exp(
            0.5 * abs(x) ** 2 - 0.5 * abs(x + y) ** 2)
        assert abs(kernel.corr(f, zero) - expect) <= 1e-12 * abs(expect)


def test_product_kernel_marginals(grid, family):
    kernel = _quantum(grid)
    prod = ProductKernel(kernel.current, n_nodes=12)
    free = FreeVacuumKernel(grid)
    f, g = family[0], family[1]
    zero = 0.0 * f
    # field marginal: second slot zero -> free vacuum
    a1 = OscillatorArgument(field=f, source=zero)
    a2 = OscillatorArgument(field=g, source=zero)
    assert abs(prod.corr(a1, a2) - free.corr(f, g)) <= 1e-12
    # diagonal: equal slots -> interacting kernel
    d1 = OscillatorArgument(field=f, source=f)
    d2 = OscillatorArgument(field=g, source=g)
    assert abs(prod.corr(d1, d2) - kernel.corr(f, g)) <= 1e-12
    # bare test functions coerce to the diagonal
    assert prod.corr(f, g) == prod.corr(d1, d2)


def test_product_kernel_oscillator_marginal(grid, family):
    kernel = _quantum(grid)
    prod = ProductKernel(kernel.current, n_nodes=12)
    f, g = family[2], family[3]
    zero = 0.0 * f
    a1 = OscillatorArgument(field=zero, source=f)
    a2 = OscillatorArgument(field=zero, source=g)
    val = prod.corr(a1, a2)
    # oscillator kernel is quasi-free in y alone
    y1 = y_functional(kernel.current, f, n_nodes=12)
    y2 = y_functional(kernel.current, g, n_nodes=12)
    M11 = abs(y1) ** 2
    M22 = abs(y2) ** 2
    M12 = np.conj(y1) * y2
    expect = np.exp(1j * np.imag(M12)) * np.exp(
        -0.5 * (M11 + M22 - 2.0 * np.real(M12)))
    assert abs(val - expect) <= 1e-12


def test_coherent_radiation_check_sign(grid):
    cur = _pulse()
    shift = np.array([16.0, 0.0, 0.0, 0.0])
    f = TestFunction([conserved_mode(
        "gaussian-windowed-bump", [2.8, 2.0, -1.6, 1.0],
        [0.45, 0.28, 0.28, 0.28], [0.3 + 0.2j, 0.5, -0.1],
        amplitude=0.5)]).translate(shift)
    g = TestFunction([conserved_mode(
        "gaussian-windowed-bump", [2.75, 1.9, -1.5, 1.1],
        [0.4, 0.26, 0.26, 0.26], [-0.2, 0.4j, 0.3],
        amplitude=0.4)]).translate(shift)
    big = Grid(1e-3, 4.5, 192, 36, 72)
    good = coherent_radiation_check(cur, f, g, big,
                                    n_nodes=(64, 20, 20, 20))
    bad = coherent_radiation_check(cur, f, g, big,
                                   n_nodes=(64, 20, 20, 20),
                                   displacer_sign=-1.0)
    assert good["residual"] < bad["residual"]
    assert {"classical", "coherent", "residual"} <= set(good)


def test_classical_mean_is_acl(grid, family):
    kernel = _classical(grid)
    f = family[4]
    assert kernel.mean(f) == pytest.approx(
        acl_smear(CoulombCurrent(strength=1.3), f, grid), rel=1e-14)
