"""Infrared behaviour of radiated amplitudes on dyadic shells.

The photon-number-type integral of an on-shell amplitude over shells
[k 2^-(n+1), k 2^-n] either keeps returning the same value (a 1/|k|
amplitude gives exactly ln 2 per shell -- a logarithmic divergence) or
shrinks geometrically (a bounded amplitude).  The diagnostic fits the
shell ratio and reports a verdict.
"""

import numpy as np

from photonweyl import SyntheticAmplitude, ir_diagnostic

e = np.array([0.0, 1.0, 0.0, 0.0])


def singular(k):
    r = np.linalg.norm(k[:, 1:], axis=-1)
    return np.tile(e, (len(k), 1)).astype(complex) / r[:, None]


def smooth(k):
    return np.tile(e, (len(k), 1)).astype(complex)


for name, fn in (("a ~ 1/|k|", singular), ("a bounded", smooth)):
    rep = ir_diagnostic(SyntheticAmplitude(fn), n_r=24)
    print("%s:" % name)
    for s in rep.shells[:4]:
        print("  shell [%.4f, %.4f]  integral %.6f" % (s["lo"], s["hi"],
                                                       s["integral"]))
    print("  shell ratio %.4f -> %s" % (rep.ratio, rep.verdict))
    print()
