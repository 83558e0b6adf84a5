"""A localized current pulse and the radiation it leaves behind.

Long after a compactly supported pulse has switched off, the retarded
field it created is pure radiation: smearing it against a far-future
test function must equal twice the pairing with the on-shell amplitude
of the current.  The same amplitude acts as the displacement of a
coherent state, which reproduces the classical-source correlation
kernel; flipping the displacer's sign breaks the agreement.
"""

import numpy as np

from photonweyl import (
    Grid,
    PulseCurrent,
    TestFunction,
    acl_smear,
    ahom_smear,
    coherent_radiation_check,
    conserved_mode,
)

pulse = PulseCurrent.from_profile(
    "gaussian-windowed-bump", [2.8, 2.0, -1.6, 1.0],
    [0.5, 0.25, 0.25, 0.25], [0.6, -0.3, 0.4], amplitude=0.6)

# probes sharing the pulse's momentum support, translated 16 light-units
# into the future of it
shift = np.array([16.0, 0.0, 0.0, 0.0])
f = TestFunction([conserved_mode(
    "gaussian-windowed-bump", [2.8, 2.0, -1.6, 1.0],
    [0.5, 0.25, 0.25, 0.25], [0.3 + 0.2j, 0.5, -0.1],
    amplitude=1.1)]).translate(shift)
g = TestFunction([conserved_mode(
    "gaussian-windowed-bump", [2.75, 1.9, -1.5, 1.1],
    [0.45, 0.26, 0.26, 0.26], [-0.2, 0.4j, 0.3],
    amplitude=-0.9)]).translate(shift)

grid = Grid(1e-3, 4.5, 192, 36, 72)
nodes = (96, 24, 24, 24)

hom = ahom_smear(pulse, f, grid)
ret = acl_smear(pulse, f, n_nodes=nodes)
print("retarded smearing      %.6e" % ret)
print("2 x radiated pairing   %.6e" % (2.0 * hom))
print("relative difference    %.2e" % (abs(2.0 * hom - ret) / abs(ret)))

print()
good = coherent_radiation_check(pulse, f, g, grid, n_nodes=nodes)
bad = coherent_radiation_check(pulse, f, g, grid, n_nodes=nodes,
                               displacer_sign=-1.0)
print("coherent-state residual          %.2e" % good["residual"])
print("sign-flipped displacer residual  %.2e" % bad["residual"])
