"""Numerical toolkit for perturbed accretive operators.

Discretizes elliptic and fractional-derivative model operators on an
interval, estimates the tight coercivity and boundedness constants of the
split, factors the operator through its Hermitian part, and verifies the
resulting family of spectral inequalities (sector containment, resolvent
bounds, two-sided eigenvalue estimates, Schatten-class decay, eigenvalue
sum and asymptotic bounds) at finite matrix scale.
"""

from .assembly import (
    CoefficientSpec,
    FractionalTerm,
    Grid,
    OperatorMatrix,
    SobolevGram,
    adjoint,
    assemble_elliptic,
    assemble_fractional_sum,
    assemble_highorder,
    assemble_operator_sum,
    diff_matrix,
    gradient_matrix,
    make_grid,
    sobolev_gram,
)
from .config import AnalysisConfig, load_config, parse_config
from .forms import (
    ConditionMargins,
    FormConstants,
    NumericalRange,
    SectorParams,
    estimate_constants,
    numerical_range,
    sector_parameters,
    verify_split_conditions,
)
from .fracops import (
    coercivity_margin,
    fractional_derivative_matrix,
    fractional_integral_matrix,
    grunwald_weights,
)
from .pipeline import AnalysisReport, ModelBundle, SizeResult, build_model, run_analysis
from .report import emit_report, report_to_jsonable
from .spectral import (
    DecayFit,
    Factorization,
    Spectrum,
    decay_fit,
    default_fit_window,
    extract_factorization,
    general_eig,
    hermitian_eig,
    psd_sqrt,
    resolvent,
    resolvent_real_part,
    schatten_norm,
    singular_values,
)

__version__ = "0.1.0"
