"""Test functions with compactly supported Fourier data.

A test function is a finite sum of *modes*.  Each mode pairs a scalar
profile ``b(k)`` (compact support in a 4D box) with a polarization and is
Hermitian-symmetrized,

    f~(k) = (1/2) [ T(k) + conj(T(-k)) ],

so that the position-space field is real.  Two mode kinds exist:

``plain``
    ``T_mu(k) = e_mu b(k)`` -- a constant polarization.  These generally
    violate the continuity constraint ``k^mu f~_mu = 0`` and need
    :func:`project_continuity` (which can only repair it off the light
    cone; on the cone the longitudinal subtraction is invisible to the
    constraint).

``conserved``
    ``T(k) = (i k . s b(k), i k0 s b(k))`` with ``s`` the spatial part of
    the polarization.  This satisfies ``k^mu T_mu = 0`` identically --
    including on the light cone -- and is the generator of valid state
    arguments, mirroring the construction of conserved pulse currents.
"""

import numpy as np

from .errors import ConfigurationError, GaugeSingularError
from .minkowski import euclid2, lor, norm2
from .hilbert import restrict_to_shell  # noqa: F401  (re-exported)

PROFILE_KINDS = ("separable-bump", "gaussian-windowed-bump")

# Half-width of the cos^4 window of the gaussian kind, in units of the
# gaussian width.  At the window edge the gaussian has fallen to
# exp(-12.5) ~ 3.7e-6, so the C^3 edge contributes far below the 1e-3
# class tolerances of the propagator quadratures.
GAUSS_WINDOW = 5.0


class Profile:
    """Scalar profile with compact support in an axis-aligned 4D box."""

    def __init__(self, kind, centers, widths, amplitude=1.0, window=GAUSS_WINDOW):
        if kind not in PROFILE_KINDS:
            raise ConfigurationError("unknown profile kind %r" % (kind,))
        centers = np.asarray(centers, dtype=float)
        widths = np.asarray(widths, dtype=float)
        if centers.shape != (4,) or widths.shape != (4,):
            raise ConfigurationError("centers and widths must be 4-vectors")
        if np.any(widths <= 0):
            raise ConfigurationError("widths must be positive")
        if window <= 0:
            raise ConfigurationError("window must be positive")
        self.kind = kind
        self.centers = centers
        self.widths = widths
        self.amplitude = complex(amplitude)
        self.window = float(window)

    def half_extent(self):
        if self.kind == "separable-bump":
            return self.widths
        return self.window * self.widths

    def box(self):
        """Support box (lo, hi)."""
        h = self.half_extent()
        return self.centers - h, self.centers + h

    def evaluate(self, k):
        k = np.asarray(k, dtype=float)
        u = (k - self.centers) / self.widths
        if self.kind == "separable-bump":
            inside = np.all(np.abs(u) < 1.0, axis=-1)
            vals = np.prod(np.cos(0.5 * np.pi * np.clip(u, -1, 1)) ** 2, axis=-1)
        else:
            win = self.window
            inside = np.all(np.abs(u) < win, axis=-1)
            w = np.cos(0.5 * np.pi * np.clip(u, -win, win) / win)
            vals = np.prod(np.exp(-0.5 * u * u) * w**4, axis=-1)
        return self.amplitude * vals * inside

    def scaled(self, c):
        return Profile(self.kind, self.centers, self.widths, self.amplitude * c,
                       window=self.window)


class Mode:
    """One symmetrized (or raw) polarization x profile term."""

    def __init__(self, profile, polarization, conserved=False, shift=None,
                 symmetrize=True):
        polarization = np.asarray(polarization, dtype=complex)
        if polarization.shape != (4,):
            raise ConfigurationError("polarization must be a 4-vector")
        self.profile = profile
        self.polarization = polarization
        self.conserved = bool(conserved)
        self.shift = np.zeros(4) if shift is None else np.asarray(shift, dtype=float)
        self.symmetrize = bool(symmetrize)

    def _raw(self, k):
        """T(k), including the translation phase, before symmetrization."""
        k = np.asarray(k, dtype=float)
        b = self.profile.evaluate(k)
        if self.conserved:
            s = self.polarization[1:]
            out = np.empty(k.shape, dtype=complex)
            out[..., 0] = 1j * (k[..., 1:] @ s) * b
            out[..., 1:] = 1j * k[..., :1] * s * b[..., None]
        else:
            out = self.polarization * b[..., None]
        if np.any(self.shift):
            out = out * np.exp(1j * lor(k, self.shift))[..., None]
        return out

    def evaluate(self, k):
        if not self.symmetrize:
            return self._raw(k)
        k = np.asarray(k, dtype=float)
        return 0.5 * (self._raw(k) + np.conj(self._raw(-k)))

    def boxes(self):
        """Support boxes of the unsymmetrized term (mirror implied)."""
        return [self.profile.box()]

    def translated(self, a):
        return type(self)(
            self.profile,
            self.polarization,
            conserved=self.conserved,
            shift=self.shift + np.asarray(a, dtype=float),
            symmetrize=self.symmetrize,
        )

    def scaled(self, c):
        return type(self)(
            self.profile.scaled(c),
            self.polarization,
            conserved=self.conserved,
            shift=self.shift,
            symmetrize=self.symmetrize,
        )


class ConeOrthogonalMode(Mode):
    """Mode whose polarization is built from the wave vector itself,

        T(k) = b(k) [ k - (k.k / k.kbar) kbar ],    kbar = (k0, -k),

    which satisfies ``k^mu T_mu = 0`` identically (``lor(k, kbar) =
    k0^2 + |k|^2`` never vanishes away from the origin).  On the light
    cone ``T`` degenerates to the pure-gauge direction ``b k``, so a
    profile supported strictly off the cone has an exactly vanishing
    shell restriction: the smeared classical field is nonzero while
    every correlation kernel sees the zero test function.
    """

    def _raw(self, k):
        k = np.asarray(k, dtype=float)
        b = self.profile.evaluate(k)
        ratio = norm2(k) / euclid2(k)
        kbar = k.copy()
        kbar[..., 1:] = -kbar[..., 1:]
        out = (k - ratio[..., None] * kbar) * b[..., None]
        if np.any(self.shift):
            out = out * np.exp(1j * lor(k, self.shift))[..., None]
        return out.astype(complex)


class TestFunction:
    """Finite sum of modes; supports +, real scaling and translation."""

    def __init__(self, modes):
        modes = list(modes)
        if not modes:
            raise ConfigurationError("a test function needs at least one mode")
        self.modes = modes

    def evaluate(self, k):
        k = np.asarray(k, dtype=float)
        out = np.zeros(k.shape, dtype=complex)
        for m in self.modes:
            out += m.evaluate(k)
        return out

    def boxes(self):
        out = []
        for m in self.modes:
            out.extend(m.boxes())
        return out

    def bounding_box(self):
        boxes = self.boxes()
        lo = np.min([b[0] for b in boxes], axis=0)
        hi = np.max([b[1] for b in boxes], axis=0)
        return lo, hi

    def translate(self, a):
        return TestFunction([m.translated(a) for m in self.modes])

    def __add__(self, other):
        return TestFunction(self.modes + other.modes)

    def __mul__(self, t):
        if isinstance(t, complex) and t.imag != 0:
            raise ConfigurationError(
                "only real scaling preserves the reality symmetry of f~"
            )
        return TestFunction([m.scaled(float(np.real(t))) for m in self.modes])

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + (-1.0) * other


def translate(f, a):
    """The translate tau_a f, i.e. f~ multiplied by exp(i k^mu a_mu)."""
    return f.translate(a)


def verify_continuity(f, samples):
    """Relative continuity residual max|k^mu f~_mu| / max(|k| |f~|)."""
    samples = np.asarray(samples, dtype=float)
    vals = f.evaluate(samples)
    resid = np.abs(lor(samples, vals))
    scale = np.max(np.linalg.norm(samples, axis=-1) * np.linalg.norm(vals, axis=-1))
    if scale == 0.0:
        return 0.0
    return float(np.max(resid) / scale)


class ProjectedTestFunction:
    """Longitudinal-free part of a test function.

    Off a band around the light cone the output satisfies
    ``k^mu g~_mu = 0`` exactly (the gauge scalar ``chi = k.f~ / k.k`` is
    subtracted); inside the band the denominator is regularized by a
    sign-preserving shift ``k.k + sign(k.k) * band * (k0^2 + |k|^2)`` and
    the value is the limiting transverse part.
    """

    def __init__(self, base, cone_band=1e-3):
        if cone_band <= 0:
            raise ConfigurationError("cone_band must be positive")
        self.base = base
        self.cone_band = float(cone_band)

    def evaluate_meta(self, k, cone_band=None):
        band = self.cone_band if cone_band is None else cone_band
        k = np.asarray(k, dtype=float)
        vals = self.base.evaluate(k)
        kk = norm2(k)
        e2 = euclid2(k)
        in_band = np.abs(kk) <= band * e2
        sgn = np.where(kk >= 0, 1.0, -1.0)
        denom = np.where(in_band, kk + sgn * band * e2, kk)
        chi = lor(k, vals) / denom
        out = vals - k * chi[..., None]
        return out, in_band, chi

    def evaluate(self, k):
        return self.evaluate_meta(k)[0]

    def gauge_scalar(self, k, cone_band=None):
        """The recovered gauge scalar chi~ at the given samples."""
        return self.evaluate_meta(k, cone_band)[2]

    def gauge_singularity_scan(self, samples, ceiling=1e6, factors=(1.0, 0.1, 0.01)):
        """Shrink the band and watch |chi|; raise if it blows up.

        Returns the list of max|chi| per band factor.  A gauge-regular
        input keeps |chi| bounded; if the last value exceeds `ceiling`
        a :class:`GaugeSingularError` is raised.
        """
        maxima = []
        for fac in factors:
            chi = self.gauge_scalar(samples, cone_band=self.cone_band * fac)
            maxima.append(float(np.max(np.abs(chi))))
        if maxima[-1] > ceiling:
            raise GaugeSingularError(
                "gauge scalar grows to %.3e as the cone band shrinks" % maxima[-1]
            )
        return maxima

    def boxes(self):
        return self.base.boxes()

    def bounding_box(self):
        return self.base.bounding_box()

    def translate(self, a):
        return ProjectedTestFunction(self.base.translate(a), self.cone_band)


def project_continuity(f, cone_band=1e-3):
    """Subtract the longitudinal (pure gauge) part of a test function."""
    return ProjectedTestFunction(f, cone_band)


def conserved_mode(kind, centers, widths, e_spatial, amplitude=1.0, shift=None,
                   symmetrize=True, window=GAUSS_WINDOW):
    """Convenience constructor for a conserved mode."""
    e = np.zeros(4, dtype=complex)
    e[1:] = np.asarray(e_spatial, dtype=complex)
    return Mode(
        Profile(kind, centers, widths, amplitude, window=window),
        e,
        conserved=True,
        shift=shift,
        symmetrize=symmetrize,
    )


def cone_orthogonal_mode(kind, centers, widths, amplitude=1.0, shift=None,
                         symmetrize=True, window=GAUSS_WINDOW):
    """Convenience constructor for a cone-orthogonal mode."""
    return ConeOrthogonalMode(
        Profile(kind, centers, widths, amplitude, window=window),
        np.zeros(4, dtype=complex),
        conserved=False,
        shift=shift,
        symmetrize=symmetrize,
    )


def random_test_function(rng, n_modes=1, kind="gaussian-windowed-bump",
                         k0_range=(0.5, 1.4), width_range=(0.25, 0.45),
                         amplitude=1.0):
    """Random conserved-mode test function (valid state argument).

    Profiles are kept at positive frequency, with spatial centers on a
    sphere of radius comparable to the frequency center so the shell
    restriction has an O(1) core.
    """
    modes = []
    for _ in range(n_modes):
        c0 = rng.uniform(*k0_range)
        # Put the spatial center on a sphere of radius ~ c0 so the light
        # cone k0 = |k| passes through the core of the bump; otherwise
        # the shell restriction would be exponentially small.
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        radius = c0 * rng.uniform(0.85, 1.15)
        cs = radius * direction
        w = rng.uniform(*width_range, size=4)
        # Keep the box at positive frequency so i-rotations of the
        # amplitude act as i-rotations of the shell restriction.
        half = 1.0 if kind == "separable-bump" else GAUSS_WINDOW
        w[0] = min(w[0], 0.9 * c0 / half)
        e = rng.normal(size=3) + 1j * rng.normal(size=3)
        amp = amplitude * (rng.normal() + 1j * rng.normal())
        modes.append(conserved_mode(kind, [c0, *cs], w, e, amplitude=amp))
    return TestFunction(modes)
