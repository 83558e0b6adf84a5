"""Correlation kernels and diagnostics for the quantized radiation field.

The package models quasi-free states of the free electromagnetic field
coupled to classical and quantized current sources: momentum-space test
functions with compact support, the degenerate one-photon scalar
product on the light cone, retarded/Feynman smearing of currents,
correlation kernels with their finite GNS (Gram matrix) data, and
infrared diagnostics of radiated amplitudes.
"""

from .errors import (
    ConfigurationError,
    GaugeSingularError,
    NonTransverseError,
    NormalizationError,
    PhotonWeylError,
    ScenarioError,
    SingularIntegrandError,
)
from .minkowski import METRIC, euclid2, fourvec, lor, norm2, reverse_spatial
from .kspace import BoxGrid, Grid, build_box_grid, build_grid, gauss_segment
from .hilbert import (
    WaveFunction,
    null_space_check,
    restrict_to_shell,
    s_form,
    scalar_product,
    scalar_product_transverse,
    sigma,
)
from .testfn import (
    ConeOrthogonalMode,
    Mode,
    Profile,
    ProjectedTestFunction,
    TestFunction,
    cone_orthogonal_mode,
    conserved_mode,
    project_continuity,
    random_test_function,
    translate,
    verify_continuity,
)
from .currents import (
    CoulombCurrent,
    Greens,
    IRReport,
    OnShellAmplitude,
    PulseCurrent,
    QuantumCurrent,
    SyntheticAmplitude,
    acl_smear,
    ahom_smear,
    coulomb_position_space_smear,
    ir_diagnostic,
    on_shell_amplitude,
    x_functional,
    y_functional,
    y_lightcone,
)
from .states import (
    ClassicalSourceKernel,
    FreeVacuumKernel,
    OscillatorArgument,
    ProductKernel,
    QuantumSourceKernel,
    coherent_radiation_check,
    mean_field,
    second_moment_numeric,
)
from .gns import (
    covariance_residual,
    gram_matrix,
    gram_rank,
    orthonormal_basis,
    positivity_report,
    weyl_consistency,
)

__version__ = "0.1.0"
