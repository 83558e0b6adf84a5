"""Classical and quantum current sources and their smeared potentials.

Green's functions are handled in momentum space.  For a conserved pulse
current ``j`` the smeared potential is

    acl(f) = - Int d4k  lor(f~(-k), j~(k)) G(k),

with ``G`` either the Feynman kernel ``1/(k.k + i eps)`` or the retarded
boundary value (poles shifted into the lower half k0 plane).  Both are
evaluated in the distributional ``eps -> 0+`` limit: the principal value
is computed by pole subtraction along the k0 axis and the on-shell poles
contribute exact residue terms,

    retarded:  PV - (i pi / 2r) [ delta(k0 - r) - delta(k0 + r) ],
    Feynman:   PV - (i pi / 2r) [ delta(k0 - r) + delta(k0 + r) ],

with ``r = |k|``.  The finite default Feynman eps (1e-6 * scale^2) only
differs from this limit at O(eps), far below every tolerance asserted in
the tests.

Normalization of the radiated field.  Closing the k0 contour for a test
function translated far into the future multiplies the residue terms by
2 (the principal value contributes the same oscillatory residue again),
and collecting both mirror boxes of the real current gives

    acl(tau_T f)  ->  4 pi Im <phi_T | a>,     a_mu(k) = j~_mu(|k|, k) / sqrt(2 pi).

The homogeneous (radiated) pairing is therefore ``ahom(f) = 2 pi
Im <phi|a>`` so that the far-future identity reads ``acl = 2 ahom``, and
the coherent displacer matching the classical kernel has shell
restriction ``phi_xi = -2 pi a`` (i.e. ``v~ = -j~``).
"""

import numpy as np

from .errors import (
    ConfigurationError,
    NormalizationError,
    PhotonWeylError,
    SingularIntegrandError,
)
from .hilbert import SQRT_2PI, restrict_to_shell, scalar_product
from .kspace import Grid, gauss_segment
from .minkowski import lor
from .testfn import ConeOrthogonalMode, TestFunction, conserved_mode


class Greens:
    """Green's function prescription for momentum-space smearing."""

    def __init__(self, kind, eps=None):
        if kind not in ("retarded", "feynman"):
            raise ConfigurationError("unknown Green's function %r" % (kind,))
        self.kind = kind
        self.eps = eps

    @classmethod
    def retarded(cls):
        return cls("retarded")

    @classmethod
    def feynman(cls, eps=None):
        return cls("feynman", eps)

    def resolved_eps(self, scale):
        if self.kind != "feynman":
            return None
        if self.eps is None:
            return 1e-6 * scale * scale
        return float(self.eps)


class CoulombCurrent:
    """Static point charge: A^cl_mu(q) = delta_mu0 c / |q|."""

    variant = "coulomb"

    def __init__(self, strength=1.0):
        self.strength = float(strength)


class PulseCurrent:
    """Conserved pulse built from an unconstrained vector profile V.

    ``j~ = symmetrize( (i k.V, i k0 V) )`` satisfies ``k^mu j~_mu = 0``
    identically.  Profiles must sit at positive frequency (the Hermitian
    mirror supplies the negative-frequency half).
    """

    variant = "pulse"

    def __init__(self, modes):
        tf = TestFunction(modes)
        for m in tf.modes:
            if not (m.conserved or isinstance(m, ConeOrthogonalMode)):
                raise ConfigurationError("pulse modes must be divergence-free")
            lo, _ = m.profile.box()
            if lo[0] < 0:
                raise ConfigurationError(
                    "pulse profiles must be supported at positive frequency"
                )
        self._tf = tf

    @classmethod
    def from_profile(cls, kind, centers, widths, e_spatial, amplitude=1.0):
        return cls([conserved_mode(kind, centers, widths, e_spatial, amplitude)])

    def fourier(self, k):
        """j~(k), Hermitian-symmetric and conserved."""
        return self._tf.evaluate(k)

    def bounding_box(self):
        return self._tf.bounding_box()

    def as_test_function(self, scale=1.0):
        """The pulse profile reinterpreted as a (conserved) test function.

        With ``scale=-1`` this is the constructive coherent displacer:
        its shell restriction is ``-sqrt(2 pi) a = -2 pi a / sqrt(2 pi)``,
        i.e. ``phi_v = -2 pi a``.
        """
        return TestFunction([m.scaled(scale) for m in self._tf.modes])


class QuantumCurrent:
    """Quantized source: one oscillator mode coupled to the field.

    Parameters
    ----------
    alpha : TestFunction
        Complex conserved profile alpha~ (raw, not symmetrized) entering
        the current operator alpha b* + conj(alpha) b.
    fx1, fx2 : TestFunction
        Real test functions parametrizing the coupling functional
        x(f) = s(fx1, f) + i s(fx2, f).
    grid : Grid
        Shell grid used for the normalization check and for x.

    The bound s(fx1,fx1) + s(fx2,fx2) <= 1 is enforced at construction.
    State positivity additionally needs x to be complex-linear in the
    shell restriction, i.e. phi_fx2 = i phi_fx1; use
    :meth:`with_linear_coupling` to build such pairs.
    """

    variant = "quantum"

    def __init__(self, alpha, fx1, fx2, grid):
        self.alpha = alpha
        self.fx1 = fx1
        self.fx2 = fx2
        self.grid = grid
        self.phi1 = restrict_to_shell(fx1, grid)
        self.phi2 = restrict_to_shell(fx2, grid)
        total = float(np.real(scalar_product(self.phi1, self.phi1))) + float(
            np.real(scalar_product(self.phi2, self.phi2))
        )
        if total > 1.0 + 1e-12:
            raise NormalizationError(
                "s(fx1,fx1) + s(fx2,fx2) = %.6f exceeds 1" % total
            )
        self.coupling_norm = total

    @classmethod
    def with_linear_coupling(cls, alpha, fx1, grid):
        """Build fx2 as the i-rotated twin of fx1 (positivity-safe)."""
        fx2 = TestFunction([m.scaled(1j) for m in fx1.modes])
        return cls(alpha, fx1, fx2, grid)

    def alpha_fourier(self, k):
        return self.alpha.evaluate(k)

    def bounding_box(self):
        return self.alpha.bounding_box()


class SyntheticAmplitude:
    """A hand-written on-shell amplitude a_mu(k), for diagnostics."""

    variant = "synthetic"

    def __init__(self, fn):
        self.fn = fn

    def amplitude_at(self, oncone):
        return np.asarray(self.fn(oncone), dtype=complex)


class OnShellAmplitude:
    """Light-cone amplitude with an explicitly stored time component."""

    def __init__(self, grid, time, spatial):
        self.grid = grid
        self.time = np.asarray(time, dtype=complex)
        self.spatial = np.asarray(spatial, dtype=complex)
        if self.time.shape != (grid.size,) or self.spatial.shape != (grid.size, 3):
            raise ConfigurationError("amplitude shape does not match grid")

    def components(self):
        return self.time, self.spatial

    def transversality_residual(self):
        g = self.grid
        resid = np.abs(g.r * self.time - np.sum(g.xyz * self.spatial, axis=-1))
        scale = np.max(
            g.r * np.sqrt(np.abs(self.time) ** 2 + np.sum(np.abs(self.spatial) ** 2, -1))
        )
        return float(np.max(resid) / scale) if scale > 0 else 0.0

    def __mul__(self, c):
        return OnShellAmplitude(self.grid, c * self.time, c * self.spatial)

    __rmul__ = __mul__


def on_shell_amplitude(current, grid):
    """Radiated amplitude a_mu(k) = j~_mu(|k|, k) / sqrt(2 pi)."""
    if isinstance(current, PulseCurrent):
        vals = current.fourier(grid.oncone) / SQRT_2PI
    elif isinstance(current, QuantumCurrent):
        vals = current.alpha_fourier(grid.oncone) / SQRT_2PI
    elif isinstance(current, SyntheticAmplitude):
        vals = current.amplitude_at(grid.oncone)
    else:
        raise ConfigurationError(
            "no on-shell amplitude for current variant %r"
            % getattr(current, "variant", type(current).__name__)
        )
    return OnShellAmplitude(grid, vals[:, 0], vals[:, 1:])


# ---------------------------------------------------------------------------
# momentum-space propagator quadrature
# ---------------------------------------------------------------------------


def _axis_nodes(lo, hi, n_nodes):
    if np.isscalar(n_nodes) or np.asarray(n_nodes).ndim == 0:
        n_nodes = (int(n_nodes),) * 4
    return [gauss_segment(lo[i], hi[i], int(n_nodes[i])) for i in range(4)]


def _box_intersects_cone(lo, hi):
    """Does the closed box meet the light cone k0 = +-|k|?"""
    closest = np.array(
        [0.0 if lo[i] <= 0.0 <= hi[i] else min(abs(lo[i]), abs(hi[i])) for i in range(1, 4)]
    )
    farthest = np.array([max(abs(lo[i]), abs(hi[i])) for i in range(1, 4)])
    r_lo = float(np.linalg.norm(closest))
    r_hi = float(np.linalg.norm(farthest))
    for sgn in (1.0, -1.0):
        k0_lo, k0_hi = sorted((sgn * r_lo, sgn * r_hi))
        if k0_hi >= lo[0] and k0_lo <= hi[0]:
            return True
    return False


def _propagator_smear(num, lo, hi, greens, mirror, n_nodes):
    """Int over the box of num(k) G(k) [+ conj(num)(k) G(-k) if mirror].

    `num` maps (..., 4) float arrays to complex numerators.  The k0 line
    integral is done per spatial node with principal-value subtraction
    and exact residue terms (see module docstring).
    """
    axes = _axis_nodes(lo, hi, n_nodes)
    (t, wt) = axes[0]
    a, b = float(lo[0]), float(hi[0])
    sp = np.meshgrid(*[ax[0] for ax in axes[1:]], indexing="ij")
    S = np.stack([g.ravel() for g in sp], axis=-1)
    wsp = np.meshgrid(*[ax[1] for ax in axes[1:]], indexing="ij")
    wS = np.prod(np.stack([w.ravel() for w in wsp]), axis=0)
    r = np.linalg.norm(S, axis=-1)
    if np.min(r) < 1e-9 * max(abs(a), abs(b), 1.0):
        raise SingularIntegrandError("support box touches the spatial origin k = 0")

    K = np.empty((t.size, S.shape[0], 4))
    K[..., 0] = t[:, None]
    K[..., 1:] = S[None, :, :]
    N = num(K)  # (n_t, M)
    Kp = np.concatenate([r[:, None], S], axis=-1)
    Km = np.concatenate([-r[:, None], S], axis=-1)
    Np = num(Kp)
    Nm = num(Km)

    if mirror:
        A, Ap, Am = N + np.conj(N), Np + np.conj(Np), Nm + np.conj(Nm)
    else:
        A, Ap, Am = N, Np, Nm

    def pv_line(p, Avals):
        # PV Int_a^b A(t) / (t - p) dt via subtraction of the pole value.
        delta = 1e-9 * (b - a)
        p = np.where(np.abs(p - a) < delta, a + delta, p)
        p = np.where(np.abs(p - b) < delta, b - delta, p)
        quot = (A - Avals[None, :]) / (t[:, None] - p[None, :])
        base = np.sum(wt[:, None] * quot, axis=0)
        return base + Avals * np.log(np.abs((b - p) / (a - p)))

    line = (pv_line(r, Ap) - pv_line(-r, Am)) / (2.0 * r)

    ind_p = (r > a) & (r < b)
    ind_m = (-r > a) & (-r < b)
    coef = -1j * np.pi / (2.0 * r)
    if greens.kind == "retarded":
        line = line + coef * (Np * ind_p - Nm * ind_m)
        if mirror:
            line = line - coef * (np.conj(Np) * ind_p - np.conj(Nm) * ind_m)
    else:
        line = line + coef * (Np * ind_p + Nm * ind_m)
        if mirror:
            line = line + coef * (np.conj(Np) * ind_p + np.conj(Nm) * ind_m)

    return complex(np.sum(wS * line))


def _check_feynman_singular(greens, lo, hi):
    if greens.kind != "feynman":
        return
    scale = float(np.max(np.abs(np.concatenate([lo, hi]))))
    eps = greens.resolved_eps(scale)
    if eps == 0.0 and _box_intersects_cone(lo, hi):
        raise SingularIntegrandError(
            "Feynman prescription with eps = 0 over a box intersecting the light cone"
        )


def acl_smear(current, f, grid=None, greens=None, n_nodes=24):
    """Smeared classical potential A^cl(f).

    * Coulomb: the closed form 2 c Int d3k f~^0(0, k) / |k|^2 over the
      shell grid (the constant 2 is fixed by the position-space oracle,
      see :func:`coulomb_position_space_smear`).
    * Pulse: the momentum-space propagator integral described in the
      module docstring.  `greens` defaults to retarded; the retarded and
      Coulomb results are enforced to be real to 1e-10.
    """
    if isinstance(current, CoulombCurrent):
        if grid is None:
            raise ConfigurationError("Coulomb smearing needs a shell grid")
        nodes = np.concatenate([np.zeros((grid.size, 1)), grid.xyz], axis=-1)
        f0 = np.asarray(f.evaluate(nodes))[:, 0]
        val = 2.0 * current.strength * grid.integrate(f0 / grid.r**2)
        return _enforce_real(val)
    if not isinstance(current, PulseCurrent):
        raise ConfigurationError("acl_smear needs a Coulomb or pulse current")
    if greens is None:
        greens = Greens.retarded()
    lo, hi = current.bounding_box()
    _check_feynman_singular(greens, lo, hi)

    def num(k):
        flat = k.reshape(-1, 4)
        vals = lor(f.evaluate(-flat), current.fourier(flat))
        return vals.reshape(k.shape[:-1])

    val = -_propagator_smear(num, lo, hi, greens, mirror=True, n_nodes=n_nodes)
    if greens.kind == "retarded":
        return _enforce_real(val)
    return val


def _enforce_real(val):
    val = complex(val)
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise PhotonWeylError(
            "expected a real smearing result, got imaginary part %.3e" % val.imag
        )
    return val.real


def ahom_smear(current, f, grid):
    """Radiated (homogeneous) potential pairing 2 pi Im <phi_f | a>."""
    phi = restrict_to_shell(f, grid)
    a = on_shell_amplitude(current, grid)
    return 2.0 * np.pi * float(np.imag(scalar_product(phi, a)))


def y_functional(current, f, greens=None, n_nodes=24):
    """Oscillator coupling y(f) = - Int f~(-k) . alpha~(k) G(k) d4k."""
    if not isinstance(current, QuantumCurrent):
        raise ConfigurationError("y_functional needs a quantum current")
    if greens is None:
        greens = Greens.retarded()
    lo, hi = current.bounding_box()
    _check_feynman_singular(greens, lo, hi)

    def num(k):
        flat = k.reshape(-1, 4)
        vals = lor(f.evaluate(-flat), current.alpha_fourier(flat))
        return vals.reshape(k.shape[:-1])

    return -_propagator_smear(num, lo, hi, greens, mirror=False, n_nodes=n_nodes)


def y_lightcone(current, f, n_nodes=32):
    """Far-future limit of y(f) from the on-shell residues only.

    For test functions translated far into the future the retarded
    propagator integral collapses onto the light cone:

        y(f) -> i pi Int d3k (1/|k|) [ N(|k|, k) - N(-|k|, k) ],

    with N(k) = lor(f~(-k), alpha~(k)).  Used as the independent oracle
    for the radiated part of the quantum coupling.
    """
    lo, hi = current.bounding_box()
    axes = [gauss_segment(lo[i], hi[i], int(n_nodes)) for i in range(1, 4)]
    sp = np.meshgrid(*[ax[0] for ax in axes], indexing="ij")
    S = np.stack([g.ravel() for g in sp], axis=-1)
    wsp = np.meshgrid(*[ax[1] for ax in axes], indexing="ij")
    wS = np.prod(np.stack([w.ravel() for w in wsp]), axis=0)
    r = np.linalg.norm(S, axis=-1)
    Kp = np.concatenate([r[:, None], S], axis=-1)
    Km = np.concatenate([-r[:, None], S], axis=-1)

    def num(k):
        return lor(f.evaluate(-k), current.alpha_fourier(k))

    vals = (num(Kp) - num(Km)) / r
    return 1j * np.pi * complex(np.sum(wS * vals))


def x_functional(current, f, grid=None):
    """Coupling functional x(f) = s(fx1, f) + i s(fx2, f)."""
    if not isinstance(current, QuantumCurrent):
        raise ConfigurationError("x_functional needs a quantum current")
    grid = current.grid if grid is None else grid
    phi = restrict_to_shell(f, grid)
    x1 = float(np.real(scalar_product(current.phi1, phi)))
    x2 = float(np.real(scalar_product(current.phi2, phi)))
    return complex(x1, x2)


# ---------------------------------------------------------------------------
# Coulomb position-space oracle
# ---------------------------------------------------------------------------


def coulomb_position_space_smear(current, f, n_k=24, n_k0=48, time_window=40.0,
                                 spatial_reg=1e-4):
    """Position-space evaluation of the Coulomb smearing against 1/|q|.

    Computes ``c Int d4q f^0(q) / |q|`` directly from the Fourier data
    using exactly integrable regulators:

        Int dq0 e^{-i q0 k0} e^{-q0^2 / 2L^2}      = L sqrt(2 pi) e^{-L^2 k0^2 / 2},
        Int d3q e^{+i q.k}  e^{-mu |q|} / |q|      = 4 pi / (|k|^2 + mu^2),

    with L = `time_window` and mu = `spatial_reg`.  The time regulator
    concentrates the k0 integral on [-6/L, 6/L]; the errors are
    O(1/L^2) + O(mu), well below the tolerance at which the constant of
    the momentum-space closed form is being checked.  Independent of
    the shell-grid route used by :func:`acl_smear`.
    """
    if not isinstance(current, CoulombCurrent):
        raise ConfigurationError("the position-space oracle is for Coulomb currents")
    L = float(time_window)
    mu = float(spatial_reg)
    k0_half = 6.0 / L
    total = 0.0
    for mode in f.modes:
        lo, hi = mode.profile.box()
        if hi[0] < -k0_half or lo[0] > k0_half:
            continue
        t, wt = gauss_segment(max(lo[0], -k0_half), min(hi[0], k0_half), int(n_k0))
        axes = [gauss_segment(lo[i], hi[i], int(n_k)) for i in range(1, 4)]
        sp = np.meshgrid(*[ax[0] for ax in axes], indexing="ij")
        S = np.stack([g.ravel() for g in sp], axis=-1)
        wsp = np.meshgrid(*[ax[1] for ax in axes], indexing="ij")
        wS = np.prod(np.stack([w.ravel() for w in wsp]), axis=0)
        r2 = np.sum(S * S, axis=-1)

        K = np.empty((t.size, S.shape[0], 4))
        K[..., 0] = t[:, None]
        K[..., 1:] = S[None, :, :]
        # Raw (un-symmetrized) mode values over the mode's own box; the
        # Hermitian mirror contributes the complex conjugate because both
        # position-space factors are real and even, so taking the real
        # part accounts for it exactly and without double counting.
        vals0 = mode._raw(K.reshape(-1, 4))[:, 0].reshape(t.size, -1)
        time_factor = L * np.sqrt(2.0 * np.pi) * np.exp(-0.5 * (L * t) ** 2)
        radial_factor = 4.0 * np.pi / (r2 + mu * mu)
        part = np.sum((wt * time_factor) @ (vals0 * (wS * radial_factor)[None, :]))
        if mode.symmetrize:
            total += float(np.real(part))
        else:
            total += complex(part)
    return current.strength * total / (2.0 * np.pi) ** 2


# ---------------------------------------------------------------------------
# infrared diagnostic
# ---------------------------------------------------------------------------


class IRReport:
    """Dyadic-shell infrared diagnostic of a radiated amplitude."""

    def __init__(self, shells, ratio, verdict):
        self.shells = shells
        self.ratio = ratio
        self.verdict = verdict

    def to_dict(self):
        return {
            "shells": [dict(s) for s in self.shells],
            "ratio": self.ratio,
            "verdict": self.verdict,
        }


def ir_diagnostic(current, n_shells=8, k_top=1.0, n_r=16, n_theta=16, n_phi=32):
    """Photon-number-type shell integrals on dyadic shells near k = 0.

    Shell n covers [k_top 2^-(n+1), k_top 2^-n] and carries

        I_n = -(1/2 pi) Int_shell d3k (1/(2|k|)) lor(conj a, a).

    A log-linear fit of |I_n| against n gives the shell ratio rho; the
    verdict is "divergent" when rho >= 1 - 1e-3 (e.g. a ~ 1/|k| gives
    I_n = ln 2 for every n), "finite" when rho <= 1 - 1e-2, otherwise
    "inconclusive".
    """
    if n_shells < 2:
        raise ConfigurationError("need at least two shells")
    shells = []
    values = []
    for n in range(int(n_shells)):
        hi = k_top * 2.0 ** (-n)
        lo = 0.5 * hi
        g = Grid(lo, hi, n_r, n_theta, n_phi)
        a = on_shell_amplitude(current, g)
        contr = np.abs(a.time) ** 2 - np.sum(np.abs(a.spatial) ** 2, axis=-1)
        val = float(-(1.0 / (2.0 * np.pi)) * g.integrate(contr / (2.0 * g.r)))
        shells.append({"lo": lo, "hi": hi, "integral": val})
        values.append(val)
    values = np.asarray(values)
    mags = np.abs(values)
    floor = 1e-30 * max(np.max(mags), 1e-300)
    mask = mags > floor
    if np.count_nonzero(mask) < 2:
        return IRReport(shells, 0.0, "finite")
    ns = np.arange(n_shells)[mask]
    slope = np.polyfit(ns, np.log(mags[mask]), 1)[0]
    ratio = float(np.exp(slope))
    if ratio >= 1.0 - 1e-3:
        verdict = "divergent"
    elif ratio <= 1.0 - 1e-2:
        verdict = "finite"
    else:
        verdict = "inconclusive"
    return IRReport(shells, ratio, verdict)
