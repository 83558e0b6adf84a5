import numpy as np
import pytest

from photonweyl.gns import (
    covariance_residual,
    gram_matrix,
    gram_rank,
    orthonormal_basis,
    positivity_report,
    weyl_consistency,
)
from photonweyl.kspace import Grid
from photonweyl.states import FreeVacuumKernel
from photonweyl.testfn import random_test_function


@pytest.fixture(scope="module")
def grid():
    return Grid(1e-3, 4.0, n_r=64, n_theta=16, n_phi=32)


@pytest.fixture(scope="module")
def kernel(grid):
    return FreeVacuumKernel(grid)


@pytest.fixture(scope="module")
def family():
    rng = np.random.default_rng(200)
    return [random_test_function(rng, k0_range=(0.8, 1.8),
                                 width_range=(0.2, 0.35), amplitude=0.6)
            for _ in range(5)]


def test_gram_matrix_hermitian(kernel, family):
    G = gram_matrix(kernel, family)
    assert np.max(np.abs(G - G.conj().T)) < 1e-15
    # F(f, f) = 1 for quasi-free kernels
    assert np.max(np.abs(np.diag(G) - 1.0)) < 1e-15


def test_positivity_report_flags_indefinite():
    rep = positivity_report(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert not rep["positive"]
    assert rep["min_eigenvalue"] == pytest.approx(-1.0)
    good = positivity_report(np.eye(3))
    assert good["positive"]
    assert good["rank"] == 3
    assert good["hermiticity_residual"] == 0.0


def test_orthonormal_basis_full_rank(kernel, family):
    G = gram_matrix(kernel, family)
    C, rank, piv = orthonormal_basis(G)
    assert rank == len(family)
    I = C.conj().T @ G @ C
    assert np.max(np.abs(I - np.eye(rank))) < 1e-10


def test_orthonormal_basis_degenerate_rank_drop(kernel, family):
    fam = list(family[:3]) + [family[0]]  # duplicate member
    G = gram_matrix(kernel, fam)
    C, rank, piv = orthonormal_basis(G)
    assert rank == 3
    assert gram_rank(G) == 3
    I = C.conj().T @ G @ C
    assert np.max(np.abs(I - np.eye(rank))) < 1e-10


def test_covariance_residual_tiny(kernel, family):
    rng = np.random.default_rng(201)
    h = random_test_function(rng, k0_range=(0.8, 1.8),
                             width_range=(0.2, 0.35), amplitude=0.4)
    assert covariance_residual(kernel, family[:3], h) < 1e-12


def test_weyl_consistency(kernel, family):
    rng = np.random.default_rng(202)
    h1 = random_test_function(rng, k0_range=(0.8, 1.8), amplitude=0.4)
    h2 = random_test_function(rng, k0_range=(0.8, 1.8), amplitude=0.4)
    rep = weyl_consistency(kernel, family[:4], h1, h2)
    assert rep["product_residual"] < 1e-8
    assert rep["unitarity_residual"] < 1e-8
    assert rep["gram_size"] == 16
    assert rep["rank"] <= 16
