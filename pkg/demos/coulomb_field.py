"""Static charge: closed-form smearing and displaced-state moments.

A time-independent charge density produces no radiation, only a
longitudinal near field.  Its smeared potential has a momentum-space
closed form proportional to Int d3k j~^0(0, k) / |k|^2, which we check
here against a direct position-space quadrature of Int f^0(q) c/|q| d4q,
and then feed into the displaced (classical-source) state whose first
and second moments are exactly the smeared potential.
"""

import numpy as np

from photonweyl import (
    ClassicalSourceKernel,
    CoulombCurrent,
    Grid,
    TestFunction,
    acl_smear,
    conserved_mode,
    coulomb_position_space_smear,
    mean_field,
    second_moment_numeric,
)

grid = Grid(1e-4, 3.5, 96, 24, 48)
charge = CoulombCurrent(strength=1.3)

# The probe must straddle k0 = 0 with a complex amplitude: a purely real
# conserved mode has an odd, imaginary time component at k0 = 0 and the
# static pairing would vanish identically.
probe = TestFunction([conserved_mode(
    "gaussian-windowed-bump", [0.0, 1.4, 0.3, 0.2],
    [0.3, 0.25, 0.25, 0.25], [0.7, 0.2, -0.5], amplitude=0.7 + 1.1j)])

closed = acl_smear(charge, probe, grid)
direct = coulomb_position_space_smear(charge, probe, n_k=32, n_k0=72,
                                      time_window=320.0)
print("closed-form smearing      %.6f" % closed)
print("position-space quadrature %.6f" % direct)
print("relative difference       %.2e" % (abs(closed - direct) / abs(closed)))

kernel = ClassicalSourceKernel(charge, grid)
print()
print("displaced-state mean      %.6f (finite difference %.6f)"
      % (kernel.mean(probe), np.real(mean_field(kernel, probe, step=3e-4))))
sm = kernel.second_moment(probe, probe)
sm_fd = second_moment_numeric(kernel, probe, probe, step=1e-3)
print("second moment             %.6f (finite difference %.6f)"
      % (np.real(sm), np.real(sm_fd)))
