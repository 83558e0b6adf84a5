"""Correlation kernels of quasi-free states on the Weyl system.

Every kernel is built from a Hermitian pairing M(f, g) on test
functions via the quasi-free recipe

    F(f, g) = exp( i Im M(f, g) ) exp( -1/2 s(f - g, f - g) ),

with ``s(d, d) = Re [M(f, f) + M(g, g) - 2 M(f, g)]`` expanded by
sesquilinearity (no test-function subtraction is ever formed).  The
imaginary part of M doubles as the covariance phase of the represented
Weyl operators: ``W(h1) W(h2) = exp(i Im M(h1, h2)) W(h1 + h2)`` up to
the kernel's own symplectic form, exposed as :meth:`sigma_star`.

Kernels
-------
free vacuum
    M = <phi_f | phi_g>, the degenerate light-cone product (or its
    transverse-projector twin, numerically identical).
classical source
    The free kernel conjugated by the diagonal phase exp(-i acl(f)):
    the state of the field radiated by a classical (c-number) current.
quantum source
    M^I = <phi_f|phi_g> + conj(x f) y g + conj(y f) x g + conj(y f) y g
    where y is the retarded oscillator coupling and x the state overlap
    functional of the source's internal mode.  Marginals: x = y = 0
    gives back the free vacuum.
product (field x oscillator arguments)
    M((f, f'), (g, g')) = <phi_f|phi_g> + conj(y f') y g'
                          + conj(y f') x g + conj(x f) y g'.
    Restricting to pairs (f, f) reproduces the quantum-source kernel;
    (f, 0) gives the free vacuum and (0, f') the pure oscillator
    kernel.
"""

import numpy as np

from .currents import acl_smear, on_shell_amplitude, x_functional, y_functional
from .hilbert import restrict_to_shell, scalar_product, scalar_product_transverse


class _QuasiFreeKernel:
    """Shared quasi-free machinery on top of a Hermitian pairing."""

    def __init__(self, grid):
        self.grid = grid
        self._cache = {}

    def _data(self, f):
        key = id(f)
        hit = self._cache.get(key)
        if hit is not None:
            return hit[1]
        data = self._compute(f)
        self._cache[key] = (f, data)  # keep f alive so ids stay unique
        return data

    def _compute(self, f):
        raise NotImplementedError

    def pair(self, f, g):
        """The Hermitian pairing M(f, g)."""
        raise NotImplementedError

    def _phase(self, f, g):
        """Extra diagonal phase exp(i theta(f) - i theta(g)); default 1."""
        return 1.0

    def corr(self, f, g):
        """Correlation kernel value F(f, g)."""
        m_fg = self.pair(f, g)
        s_dist = (
            np.real(self.pair(f, f))
            + np.real(self.pair(g, g))
            - 2.0 * np.real(m_fg)
        )
        return self._phase(f, g) * np.exp(1j * np.imag(m_fg) - 0.5 * s_dist)

    def sigma_star(self, f, g):
        """Symplectic form entering the represented Weyl relations."""
        return float(np.imag(self.pair(f, g)))

    def mean(self, f):
        """First moment i d/dt F(t f, 0) at t = 0."""
        return 0.0

    def second_moment(self, f, g):
        """Second moment d/dt d/du F(t f, u g) at t = u = 0."""
        return complex(self.pair(f, g))


class FreeVacuumKernel(_QuasiFreeKernel):
    """Vacuum kernel from the degenerate one-photon scalar product.

    `form` selects between the light-cone pairing ("cone") and the
    transverse-projector pairing ("transverse"); the two agree because
    the longitudinal part lies in the null space of either.
    """

    def __init__(self, grid, form="cone"):
        super().__init__(grid)
        if form not in ("cone", "transverse"):
            raise ValueError("form must be 'cone' or 'transverse'")
        self._product = scalar_product if form == "cone" else scalar_product_transverse
        self.form = form

    def _compute(self, f):
        return restrict_to_shell(f, self.grid)

    def pair(self, f, g):
        return complex(self._product(self._data(f), self._data(g)))


class ClassicalSourceKernel(FreeVacuumKernel):
    """Free kernel displaced by the retarded field of a classical current."""

    def __init__(self, current, grid, greens=None, n_nodes=24, form="cone"):
        super().__init__(grid, form=form)
        self.current = current
        self.greens = greens
        self.n_nodes = n_nodes
        self._acl_cache = {}

    def acl(self, f):
        key = id(f)
        hit = self._acl_cache.get(key)
        if hit is not None:
            return hit[1]
        val = acl_smear(self.current, f, grid=self.grid, greens=self.greens,
                        n_nodes=self.n_nodes)
        self._acl_cache[key] = (f, val)
        return val

    def _phase(self, f, g):
        return np.exp(-1j * (self.acl(f) - self.acl(g)))

    def mean(self, f):
        return self.acl(f)

    def second_moment(self, f, g):
        return complex(self.pair(f, g)) + self.acl(f) * self.acl(g)


class QuantumSourceKernel(_QuasiFreeKernel):
    """Field kernel after coupling to a quantized oscillator source."""

    def __init__(self, current, greens=None, n_nodes=24):
        super().__init__(current.grid)
        self.current = current
        self.greens = greens
        self.n_nodes = n_nodes

    def _compute(self, f):
        phi = restrict_to_shell(f, self.grid)
        x = x_functional(self.current, f, self.grid)
        y = y_functional(self.current, f, greens=self.greens, n_nodes=self.n_nodes)
        return (phi, x, y)

    def pair(self, f, g):
        phi_f, x_f, y_f = self._data(f)
        phi_g, x_g, y_g = self._data(g)
        return (
            complex(scalar_product(phi_f, phi_g))
            + np.conj(x_f) * y_g
            + np.conj(y_f) * x_g
            + np.conj(y_f) * y_g
        )


class OscillatorArgument:
    """Pair argument (f, f') for the product kernel.

    `field` smears the radiation field; `source` enters only through
    the oscillator coupling y.  Either may be None (absent).
    """

    def __init__(self, field=None, source=None):
        if field is None and source is None:
            raise ValueError("at least one of field and source is needed")
        self.field = field
        self.source = source


class ProductKernel(_QuasiFreeKernel):
    """Joint kernel on field x oscillator arguments.

    Marginals: (f, 0) -> free vacuum, (0, f') -> oscillator kernel,
    diagonal (f, f) -> the quantum-source field kernel.
    """

    def __init__(self, current, greens=None, n_nodes=24):
        super().__init__(current.grid)
        self.current = current
        self.greens = greens
        self.n_nodes = n_nodes

    def _compute(self, arg):
        if not isinstance(arg, OscillatorArgument):
            arg = OscillatorArgument(field=arg, source=arg)
        phi = x = y = None
        if arg.field is not None:
            phi = restrict_to_shell(arg.field, self.grid)
            x = x_functional(self.current, arg.field, self.grid)
        if arg.source is not None:
            y = y_functional(self.current, arg.source, greens=self.greens,
                             n_nodes=self.n_nodes)
        return (phi, x, y)

    def pair(self, a1, a2):
        phi1, x1, y1 = self._data(a1)
        phi2, x2, y2 = self._data(a2)
        out = 0.0 + 0.0j
        if phi1 is not None and phi2 is not None:
            out += complex(scalar_product(phi1, phi2))
        if y1 is not None and y2 is not None:
            out += np.conj(y1) * y2
        if y1 is not None and x2 is not None:
            out += np.conj(y1) * x2
        if x1 is not None and y2 is not None:
            out += np.conj(x1) * y2
        return out


def mean_field(kernel, f, step=1e-3):
    """Numerical first moment i d/dt F(t f, 0) at t = 0.

    Cross-checks the analytic :meth:`mean` of the kernel; the zero test
    function is represented by a scaled-to-zero copy of f.
    """
    zero = 0.0 * f
    plus = kernel.corr(step * f, zero)
    minus = kernel.corr((-step) * f, zero)
    return 1j * (plus - minus) / (2.0 * step)


def second_moment_numeric(kernel, f, g, step=1e-3):
    """Numerical mixed moment d/dt d/du F(t f, u g) at t = u = 0."""
    pp = kernel.corr(step * f, step * g)
    pm = kernel.corr(step * f, (-step) * g)
    mp = kernel.corr((-step) * f, step * g)
    mm = kernel.corr((-step) * f, (-step) * g)
    return (pp - pm - mp + mm) / (4.0 * step * step)


def coherent_radiation_check(current, f, g, grid, greens=None, n_nodes=24,
                             displacer_sign=1.0):
    """Compare the classical-source kernel with a coherent displacement.

    In the far future of the source, the displaced-state phase is
    carried entirely by the radiated on-shell amplitude:

        F_cl(f, g)  ≈  exp( 2i Im <phi_f - phi_g | xi> ) F_0(f, g),

    with displacer xi = -2 pi a.  `displacer_sign=-1` flips the
    displacer (a deliberately wrong coherent state, the negative
    control: the residual must then be large).  Returns a dict with
    both values and their absolute difference.
    """
    kernel = ClassicalSourceKernel(current, grid, greens=greens, n_nodes=n_nodes)
    free = FreeVacuumKernel(grid)
    a = on_shell_amplitude(current, grid)
    xi = (-2.0 * np.pi * float(displacer_sign)) * a
    phi_f = restrict_to_shell(f, grid)
    phi_g = restrict_to_shell(g, grid)
    phase = np.imag(scalar_product(phi_f, xi)) - np.imag(scalar_product(phi_g, xi))
    coherent = np.exp(2j * phase) * free.corr(f, g)
    classical = kernel.corr(f, g)
    return {
        "classical": classical,
        "coherent": coherent,
        "residual": float(abs(classical - coherent)),
    }
