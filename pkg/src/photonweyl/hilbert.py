"""The degenerate one-photon scalar product on the positive light cone.

A wave function is the shell restriction ``phi_mu(k) = sqrt(2 pi)
f~_mu(|k|, k)`` of a test function.  Only the three spatial components are
stored; the time component is always derived from the longitudinality
relation ``|k| phi_0 = k . phi`` that every transverse restriction
satisfies.  The scalar product

    <phi|psi> = - Int d3k  (1/(2|k|)) lor(conj(phi), psi)

is positive semidefinite with the longitudinal directions ``phi ~ k`` as
its null space.  ``sigma`` and ``s_form`` are its imaginary and real
parts; they are the symplectic form and covariance that build every
correlation kernel in :mod:`photonweyl.states`.
"""

import numpy as np

from .errors import ConfigurationError, NonTransverseError

SQRT_2PI = np.sqrt(2.0 * np.pi)


class WaveFunction:
    """Shell restriction of a test function on a spherical grid.

    Parameters
    ----------
    grid : kspace.Grid
    spatial : ndarray, shape (N, 3), complex
        The spatial components phi_alpha at the grid nodes.
    meta : dict, optional
        Diagnostics recorded by ``restrict_to_shell`` (consistency of the
        derived time component with the direct one, continuity residual).
    """

    def __init__(self, grid, spatial, meta=None):
        spatial = np.asarray(spatial, dtype=complex)
        if spatial.shape != (grid.size, 3):
            raise ConfigurationError(
                "spatial components must have shape (%d, 3)" % grid.size
            )
        self.grid = grid
        self.spatial = spatial
        self.meta = dict(meta or {})

    def time_component(self):
        """phi_0 derived from |k| phi_0 = k . phi (never stored)."""
        g = self.grid
        return np.sum(g.xyz * self.spatial, axis=-1) / g.r

    def components(self):
        return self.time_component(), self.spatial

    def __add__(self, other):
        _check_same_grid(self.grid, other.grid)
        return WaveFunction(self.grid, self.spatial + other.spatial)

    def __sub__(self, other):
        _check_same_grid(self.grid, other.grid)
        return WaveFunction(self.grid, self.spatial - other.spatial)

    def __mul__(self, c):
        return WaveFunction(self.grid, self.spatial * c)

    __rmul__ = __mul__


def _check_same_grid(a, b):
    if a is b:
        return
    same = (
        a.k_min == b.k_min
        and a.k_max == b.k_max
        and (a.n_r, a.n_theta, a.n_phi) == (b.n_r, b.n_theta, b.n_phi)
    )
    if not same:
        raise ConfigurationError("wave functions live on different grids")


def scalar_product(u, v):
    """The degenerate light-cone pairing <u|v> (antilinear in u).

    Accepts wave functions and on-shell amplitudes: anything exposing a
    ``grid`` and a ``components() -> (time, spatial)`` pair.
    """
    _check_same_grid(u.grid, v.grid)
    g = u.grid
    u0, us = u.components()
    v0, vs = v.components()
    contr = np.conj(u0) * v0 - np.sum(np.conj(us) * vs, axis=-1)
    return g.integrate(-contr / (2.0 * g.r))


def scalar_product_transverse(u, v):
    """Equivalent transverse-projector form of the pairing.

    Uses only spatial components:

        Int d3k sum_ab conj(u_a) (delta_ab |k|^2 - k_a k_b) v_b / (2 |k|^3)

    Agrees with :func:`scalar_product` because the time components are
    tied to the longitudinal parts by the shell constraint.
    """
    _check_same_grid(u.grid, v.grid)
    g = u.grid
    _, us = u.components()
    _, vs = v.components()
    ku = np.sum(g.xyz * us, axis=-1)
    kv = np.sum(g.xyz * vs, axis=-1)
    quad = np.sum(np.conj(us) * vs, axis=-1) * g.r**2 - np.conj(ku) * kv
    return g.integrate(quad / (2.0 * g.r**3))


def restrict_to_shell(f, grid, tol=1e-8):
    """Restrict a test function to the positive light cone.

    Raises :class:`NonTransverseError` when the continuity residual
    ``max |k^mu f~_mu|`` at the shell nodes exceeds ``tol`` relative to
    ``max |k| |f~|``.
    """
    if isinstance(f, WaveFunction):
        _check_same_grid(f.grid, grid)
        return f
    vals = np.asarray(f.evaluate(grid.oncone))
    resid = np.abs(vals[..., 0] * grid.r - np.sum(grid.xyz * vals[..., 1:], axis=-1))
    scale = np.max(grid.r * np.linalg.norm(vals, axis=-1))
    if scale == 0.0:
        return WaveFunction(
            grid,
            np.zeros((grid.size, 3), dtype=complex),
            meta={"continuity_residual": 0.0, "phi0_consistency": 0.0},
        )
    rel = float(np.max(resid) / scale)
    if rel > tol:
        raise NonTransverseError(rel, tol)
    spatial = SQRT_2PI * vals[:, 1:]
    direct0 = SQRT_2PI * vals[:, 0]
    derived0 = np.sum(grid.xyz * spatial, axis=-1) / grid.r
    denom = max(np.max(np.abs(direct0)), np.max(np.abs(derived0)), 1e-300)
    consistency = float(np.max(np.abs(direct0 - derived0)) / denom)
    return WaveFunction(
        grid,
        spatial,
        meta={"continuity_residual": rel, "phi0_consistency": consistency},
    )


def sigma(f, g, grid, tol=1e-8):
    """Symplectic form Im<phi|psi> of two test functions."""
    phi = restrict_to_shell(f, grid, tol)
    psi = restrict_to_shell(g, grid, tol)
    return float(np.imag(scalar_product(phi, psi)))


def s_form(f, g, grid, tol=1e-8):
    """Covariance form Re<phi|psi> of two test functions."""
    phi = restrict_to_shell(f, grid, tol)
    psi = restrict_to_shell(g, grid, tol)
    return float(np.real(scalar_product(phi, psi)))


def null_space_check(phi):
    """Split a wave function into longitudinal and transverse parts.

    Returns a dict with the norms of the two parts; the longitudinal part
    spans the null space of the pairing, so its norm should vanish to
    quadrature accuracy, while a nonzero transverse part has positive
    norm.
    """
    g = phi.grid
    khat = g.xyz / g.r[:, None]
    long_coef = np.sum(khat * phi.spatial, axis=-1)
    longitudinal = WaveFunction(g, long_coef[:, None] * khat)
    transverse = WaveFunction(g, phi.spatial - longitudinal.spatial)
    return {
        "longitudinal_norm": float(np.real(scalar_product(longitudinal, longitudinal))),
        "transverse_norm": float(np.real(scalar_product(transverse, transverse))),
        "total_norm": float(np.real(scalar_product(phi, phi))),
    }
