"""Finite GNS data from the vacuum correlation kernel.

A handful of test functions spans a finite-dimensional piece of the GNS
representation.  The Gram matrix of their Weyl vectors must be positive
semidefinite, argument shifts act covariantly, and the represented Weyl
operators compose projectively with the symplectic phase.
"""

import numpy as np

from photonweyl import (
    FreeVacuumKernel,
    Grid,
    covariance_residual,
    gram_matrix,
    orthonormal_basis,
    positivity_report,
    random_test_function,
    weyl_consistency,
)

grid = Grid(1e-3, 4.0, 64, 16, 32)
kernel = FreeVacuumKernel(grid)
rng = np.random.default_rng(42)
family = [random_test_function(rng, amplitude=0.6) for _ in range(6)]

G = gram_matrix(kernel, family)
rep = positivity_report(G)
print("Gram matrix of 6 Weyl vectors")
print("  min / max eigenvalue  %.3e / %.3e" % (rep["min_eigenvalue"],
                                               rep["max_eigenvalue"]))
print("  positive semidefinite %s, rank %d" % (rep["positive"], rep["rank"]))

C, rank, _ = orthonormal_basis(G)
defect = np.max(np.abs(C.conj().T @ G @ C - np.eye(rank)))
print("  orthonormalized basis defect %.2e" % defect)

h = random_test_function(rng, amplitude=0.4)
print()
print("argument-shift covariance residual %.2e"
      % covariance_residual(kernel, family[:3], h))

h1 = random_test_function(rng, amplitude=0.4)
h2 = random_test_function(rng, amplitude=0.4)
weyl = weyl_consistency(kernel, family[:4], h1, h2)
print("Weyl product residual              %.2e" % weyl["product_residual"])
print("Weyl unitarity defect              %.2e" % weyl["unitarity_residual"])
