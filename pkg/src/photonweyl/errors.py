"""Exception types shared across the package."""


class PhotonWeylError(Exception):
    """Base class for all library-specific errors."""


class ConfigurationError(PhotonWeylError):
    """Invalid construction parameters (grids, profiles, scenarios)."""


class NonTransverseError(PhotonWeylError):
    """A test function failed the continuity check on the light cone."""

    def __init__(self, residual, tol):
        self.residual = residual
        self.tol = tol
        super().__init__(
            "non-transverse restriction: continuity residual %.3e exceeds %.3e"
            % (residual, tol)
        )


class GaugeSingularError(PhotonWeylError):
    """The gauge scalar chi blows up as the light-cone band shrinks."""


class SingularIntegrandError(PhotonWeylError):
    """A propagator integrand has a non-regularized pole inside the support box."""


class NormalizationError(PhotonWeylError):
    """A coupling violates its normalization bound at construction time."""


class ScenarioError(PhotonWeylError):
    """A scenario file could not be parsed or validated."""
