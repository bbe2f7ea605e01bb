"""Laplace spectra, spectral statistics and zeta-regularized quantities of quantum circulant graphs."""
from .graph import (
    CirculantSpec,
    DirichletPoint,
    MetricGraph,
    dirichlet_points,
    random_spec,
    validate_spec,
    weyl_estimate,
)
from .secular import (
    RepIndex,
    SecularMatrixValue,
    assemble_M,
    det_M,
    eval_fhat,
    eval_p,
    factorized_det,
    poles_p,
)
from .solver import (
    Spectrum,
    SpectrumEntry,
    UnfoldedSpectrum,
    dirichlet_multiplicity,
    roots_p,
    spectrum_generic,
    spectrum_symmetric,
    unfold,
)
from .stats import (
    FitResult,
    Histogram,
    R2Estimate,
    fit_small_c,
    form_factor_theory,
    integrated_nnsd,
    nnsd,
    r2_estimate,
    r2_large_model,
    r2_small_model,
    wigner_goe,
    wigner_goe_cdf,
)
from .zeta import (
    DetResult,
    ZetaValue,
    determinant_closed_form,
    determinant_numeric,
    leading_coefficient_c,
    riemann_zeta,
    vacuum_energy,
    zeta_generic,
    zeta_prime_at_zero,
    zeta_symmetric,
)

__version__ = "0.1.0"
