"""Field correlations after coupling to a quantized oscillator source.

The source is a single oscillator mode driving the field through a
conserved profile alpha, with a back-reaction coupling x(f) bounded by
the one-photon norm.  The resulting field kernel is again quasi-free;
against the zero test function it has a closed form in terms of x and
the driven response y.  The joint field-oscillator state is a product
kernel whose marginals reproduce the free vacuum and the oscillator
state exactly.
"""

import numpy as np

from photonweyl import (
    FreeVacuumKernel,
    Grid,
    OscillatorArgument,
    ProductKernel,
    QuantumCurrent,
    QuantumSourceKernel,
    TestFunction,
    conserved_mode,
    random_test_function,
    x_functional,
    y_functional,
)

grid = Grid(1e-3, 4.0, 64, 16, 32)
alpha = TestFunction([conserved_mode(
    "gaussian-windowed-bump", [2.8, 2.0, -1.6, 1.0],
    [0.5, 0.25, 0.25, 0.25], [0.5, -0.2, 0.3],
    amplitude=0.4, symmetrize=False)])
rng = np.random.default_rng(9)
fx1 = random_test_function(rng, k0_range=(0.9, 1.3), amplitude=0.2)
current = QuantumCurrent.with_linear_coupling(alpha, fx1, grid)
print("coupling norm s(x1,x1) + s(x2,x2) = %.4f (must be <= 1)"
      % current.coupling_norm)

kernel = QuantumSourceKernel(current, n_nodes=12)
free = FreeVacuumKernel(grid)

f = random_test_function(rng, amplitude=0.6)
x = x_functional(current, f)
y = y_functional(current, f, n_nodes=12)
zero = 0.0 * f
closed = free.corr(f, zero) * np.exp(0.5 * abs(x) ** 2
                                     - 0.5 * abs(x + y) ** 2)
print()
print("F(f, 0)     = %s" % kernel.corr(f, zero))
print("closed form = %s" % closed)

prod = ProductKernel(current, n_nodes=12)
g = random_test_function(rng, amplitude=0.6)
marg = prod.corr(OscillatorArgument(field=f, source=zero),
                 OscillatorArgument(field=g, source=zero))
print()
print("product-kernel field marginal vs free vacuum: diff %.2e"
      % abs(marg - free.corr(f, g)))
diag = prod.corr(OscillatorArgument(field=f, source=f),
                 OscillatorArgument(field=g, source=g))
print("diagonal restriction vs interacting kernel:   diff %.2e"
      % abs(diag - kernel.corr(f, g)))
