"""Quadrature grids in momentum space.

Two kinds of grids are provided:

* :class:`Grid` -- a spherical product rule on the radial shell
  ``k_min <= |k| <= k_max``: Gauss-Legendre nodes radially and in
  cos(theta), a uniform (trapezoidal) rule in phi.  This grid carries the
  three-dimensional integrals over the positive light cone.
* :class:`BoxGrid` -- a tensor-product Gauss-Legendre rule over an
  axis-aligned 4D box, used for integrals over the compact Fourier
  support of test functions and currents.
"""

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConfigurationError


def gauss_segment(a, b, n):
    """Gauss-Legendre nodes and weights transplanted to [a, b]."""
    x, w = leggauss(n)
    nodes = 0.5 * (x + 1.0) * (b - a) + a
    weights = 0.5 * (b - a) * w
    return nodes, weights


class Grid:
    """Spherical quadrature grid on a momentum shell.

    Attributes
    ----------
    r : ndarray, shape (N,)
        Radial coordinate |k| of each node.
    xyz : ndarray, shape (N, 3)
        Cartesian spatial momentum of each node.
    weights : ndarray, shape (N,)
        Composite weights w_r * r^2 * w_ct * w_phi; ``integrate`` of the
        constant 1 returns the shell volume.
    oncone : ndarray, shape (N, 4)
        The positive-light-cone lift (|k|, k) of each node.
    """

    def __init__(self, k_min, k_max, n_r=64, n_theta=32, n_phi=64):
        if not (0.0 < k_min < k_max):
            raise ConfigurationError(
                "need 0 < k_min < k_max, got k_min=%r k_max=%r" % (k_min, k_max)
            )
        if min(n_r, n_theta, n_phi) < 1:
            raise ConfigurationError("grid resolutions must be positive")
        self.k_min = float(k_min)
        self.k_max = float(k_max)
        self.n_r = int(n_r)
        self.n_theta = int(n_theta)
        self.n_phi = int(n_phi)

        r, wr = gauss_segment(self.k_min, self.k_max, self.n_r)
        ct, wct = leggauss(self.n_theta)
        phi = 2.0 * np.pi * np.arange(self.n_phi) / self.n_phi
        wphi = np.full(self.n_phi, 2.0 * np.pi / self.n_phi)

        st = np.sqrt(1.0 - ct * ct)
        # Broadcast to the full product grid, radial axis slowest.
        R = r[:, None, None]
        CT = ct[None, :, None]
        ST = st[None, :, None]
        PH = phi[None, None, :]

        kx = (R * ST * np.cos(PH)).ravel()
        ky = (R * ST * np.sin(PH)).ravel()
        kz = (R * CT * np.ones_like(PH)).ravel()
        self.r = (R * np.ones_like(CT) * np.ones_like(PH)).ravel()
        self.xyz = np.stack([kx, ky, kz], axis=-1)
        self.weights = (
            wr[:, None, None] * R * R * wct[None, :, None] * wphi[None, None, :]
        ).ravel()
        self.oncone = np.concatenate([self.r[:, None], self.xyz], axis=-1)

    @property
    def size(self):
        return self.r.size

    def integrate(self, values):
        """Integrate node samples over the shell (d3k).

        Uses numpy's pairwise summation, so the reduction order is stable
        across runs for a fixed grid.
        """
        values = np.asarray(values)
        if values.shape[-1] != self.size:
            raise ConfigurationError(
                "sample count %d does not match grid size %d"
                % (values.shape[-1], self.size)
            )
        return np.sum(self.weights * values, axis=-1)

    def refined(self, factor=2):
        """A grid on the same shell with all resolutions scaled by `factor`."""
        return Grid(
            self.k_min,
            self.k_max,
            max(1, int(round(self.n_r * factor))),
            max(1, int(round(self.n_theta * factor))),
            max(1, int(round(self.n_phi * factor))),
        )


def build_grid(k_min, k_max, n_r=64, n_theta=32, n_phi=64):
    """Build a spherical shell grid (see :class:`Grid`)."""
    return Grid(k_min, k_max, n_r, n_theta, n_phi)


class BoxGrid:
    """Tensor-product Gauss-Legendre rule over an axis-aligned 4D box."""

    def __init__(self, lo, hi, n_nodes=24):
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if lo.shape != (4,) or hi.shape != (4,):
            raise ConfigurationError("box corners must be 4-vectors")
        if np.any(hi <= lo):
            raise ConfigurationError("box must have positive extent on every axis")
        if np.isscalar(n_nodes) or np.asarray(n_nodes).ndim == 0:
            n_nodes = (int(n_nodes),) * 4
        self.lo = lo
        self.hi = hi
        self.n_nodes = tuple(int(n) for n in n_nodes)
        if min(self.n_nodes) < 1:
            raise ConfigurationError("node counts must be positive")
        self.axes = [
            gauss_segment(lo[i], hi[i], self.n_nodes[i]) for i in range(4)
        ]
        grids = np.meshgrid(*[ax[0] for ax in self.axes], indexing="ij")
        self.nodes = np.stack([g.ravel() for g in grids], axis=-1)
        wgrids = np.meshgrid(*[ax[1] for ax in self.axes], indexing="ij")
        self.weights = np.prod(np.stack([w.ravel() for w in wgrids]), axis=0)

    @property
    def size(self):
        return self.weights.size

    def integrate(self, values):
        values = np.asarray(values)
        return np.sum(self.weights * values, axis=-1)

    def refined(self, factor=2):
        return BoxGrid(
            self.lo, self.hi, tuple(int(round(n * factor)) for n in self.n_nodes)
        )


def build_box_grid(lo, hi, n_nodes=24):
    """Build a 4D tensor-product box rule (see :class:`BoxGrid`)."""
    return BoxGrid(lo, hi, n_nodes)
