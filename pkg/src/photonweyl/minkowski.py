"""Minkowski four-vector helpers.

Conventions used throughout the package:

* metric signature (+, -, -, -);
* four-component arrays store plain (contravariant) components
  ``(u0, ux, uy, uz)`` with the component axis last;
* ``lor(u, v) = u0*v0 - u.v`` implements every one-up-one-down
  contraction that appears in the formulas (continuity ``k^mu f_mu``,
  the light-cone scalar product, translation phases);
* Fourier transform pair: ``f(q) = (2pi)^-2 Int f~(k) exp(-i q.k) d4k``
  with ``q.k = lor(q, k)``.
"""

import numpy as np

METRIC = np.array([1.0, -1.0, -1.0, -1.0])


def lor(u, v):
    """Minkowski contraction u^mu v_mu with the component axis last.

    Broadcasts over leading axes; `u` and `v` may be real or complex.
    """
    u = np.asarray(u)
    v = np.asarray(v)
    return u[..., 0] * v[..., 0] - np.sum(u[..., 1:] * v[..., 1:], axis=-1)


def norm2(k):
    """Squared Minkowski length k^mu k_mu."""
    return lor(k, k)


def euclid2(k):
    """Euclidean squared length k0^2 + |k|^2 (used for regularizers)."""
    k = np.asarray(k)
    return np.sum(k * k, axis=-1)


def reverse_spatial(k):
    """k-bar = (k0, -k): time component kept, spatial part flipped."""
    out = np.array(k, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def fourvec(t, x, y, z):
    return np.array([t, x, y, z], dtype=float)
