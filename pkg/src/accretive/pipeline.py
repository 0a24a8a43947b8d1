"""Pipeline orchestration: assemble, estimate, factorize, verify.

A run walks the configured grid sizes, builds the operator split for the
selected family, estimates the tight form constants, computes the sector,
the factorization, the numerical ranges, and every enabled check; the
cross-size checks (asymptotic decay, compactness witness) run when at
least three sizes are available.  Everything is deterministic given the
configuration and seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import verify
from .assembly import (
    FractionalTerm,
    OperatorMatrix,
    SobolevGram,
    assemble_elliptic,
    assemble_fractional_sum,
    assemble_highorder,
    assemble_operator_sum,
    make_grid,
    sobolev_gram,
)
from .config import AnalysisConfig
from .exceptions import InsufficientSizes, NonAccretive
from .forms import (
    estimate_constants,
    numerical_range,
    sector_parameters,
    verify_split_conditions,
)
from .spectral import (
    decay_fit,
    extract_factorization,
    general_eig,
    hermitian_eig,
    hermitian_part,
    resolvent,
    resolvent_real_part,
    singular_values,
)

__all__ = ["ModelBundle", "SizeResult", "AnalysisReport", "build_model", "run_analysis"]

SELFTEST_MATRIX = np.array([[2.0, 1j], [1j, 2.0]])


@dataclass(frozen=True)
class ModelBundle:
    """Operator split with its Gram matrices on one grid size."""

    size: int
    main: OperatorMatrix
    perturbation: OperatorMatrix
    operator: OperatorMatrix
    gram_plus: SobolevGram
    gram0: SobolevGram


def build_model(config: AnalysisConfig, size: int) -> ModelBundle:
    """Assemble the operator family of the configuration at one size."""
    if config.family == "selftest2x2":
        main = OperatorMatrix(SELFTEST_MATRIX - np.eye(2), label="selftest-main")
        perturbation = OperatorMatrix(np.eye(2, dtype=complex), label="selftest-perturbation")
        eye = SobolevGram(order=0, matrix=np.eye(2))
        return ModelBundle(
            size=2,
            main=main,
            perturbation=perturbation,
            operator=assemble_operator_sum(main, perturbation),
            gram_plus=SobolevGram(order=1, matrix=np.eye(2)),
            gram0=eye,
        )

    grid = make_grid(config.a, config.b, size)
    if config.family == "elliptic+frac":
        main = assemble_elliptic(grid, config.coefficient * np.ones(size))
        perturbation = assemble_fractional_sum(
            grid,
            [FractionalTerm(config.weight, config.alpha, config.side)],
            scheme=config.scheme,
        )
        strong_order = 1
    else:  # highorder
        main = assemble_highorder(grid, config.diff_coeffs)
        perturbation = assemble_fractional_sum(grid, config.frac_terms, scheme=config.scheme)
        strong_order = config.order_k
    return ModelBundle(
        size=size,
        main=main,
        perturbation=perturbation,
        operator=assemble_operator_sum(main, perturbation),
        gram_plus=sobolev_gram(grid, strong_order),
        gram0=sobolev_gram(grid, 0),
    )


@dataclass(frozen=True)
class SizeResult:
    """Everything computed for one grid size."""

    size: int
    constants: object = None
    sector: object = None
    factorization_norms: dict = field(default_factory=dict)
    aperture: float = 0.0
    resolvent_aperture: float = 0.0
    condition_margins: object = None
    checks: tuple = ()
    skipped: tuple = ()
    spectra: dict = field(default_factory=dict)
    fit: object = None
    error: str = ""


@dataclass(frozen=True)
class AnalysisReport:
    """Full pipeline outcome across sizes."""

    config: AnalysisConfig
    size_results: tuple
    cross_checks: tuple = ()
    cross_skipped: tuple = ()
    fits: dict = field(default_factory=dict)

    @property
    def checks(self) -> tuple:
        per_size = tuple(c for r in self.size_results for c in r.checks)
        return per_size + tuple(self.cross_checks)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)  # vacuously true when none enabled


def _spectra_tables(W: np.ndarray) -> dict:
    """Spectra and s-numbers of the operator and its derived matrices."""
    inv = resolvent(W, 0.0)
    herm = hermitian_part(W)
    tables = {}
    for label, M in (("operator", W), ("resolvent", inv)):
        eigs = general_eig(M).values
        tables[label] = {"eigenvalues": eigs, "s_numbers": singular_values(M)}
    for label, M in (
        ("inverse_hermitian", np.linalg.inv(herm)),
        ("resolvent_real_part", resolvent_real_part(W)),
    ):
        spec, _ = hermitian_eig(M)
        vals = np.sort(spec.values)[::-1].astype(complex)
        tables[label] = {"eigenvalues": vals, "s_numbers": np.abs(np.sort(spec.values)[::-1])}
    return tables


def _analyze_size(config: AnalysisConfig, size: int) -> SizeResult:
    bundle = build_model(config, size)
    W = bundle.operator.entries
    enabled = set(config.checks)
    tol = config.tolerance

    try:
        constants = estimate_constants(
            bundle.main, bundle.perturbation, bundle.gram_plus, bundle.gram0
        )
    except NonAccretive as exc:
        failed = verify.CheckResult(
            id="accretive_hypotheses",
            claim="the split satisfies the strict accretivity hypotheses",
            lhs=0.0,
            rhs=0.0,
            margin=-1.0,
            tolerance=tol,
            passed=False,
            details={"error": str(exc)},
        )
        skipped = tuple(
            {"id": check_id, "reason": "hypotheses violated, constants unavailable"}
            for check_id in sorted(enabled)
        )
        return SizeResult(
            size=bundle.size,
            checks=(failed,),
            skipped=skipped,
            spectra=_spectra_tables(W),
            error=str(exc),
        )

    sector = sector_parameters(constants)
    sample = numerical_range(W, m_angles=config.angles, m_random=config.vectors, seed=config.seed)
    resolvent_sample = numerical_range(
        resolvent(W, 0.0), m_angles=config.angles, m_random=config.vectors, seed=config.seed + 1
    )
    fac = extract_factorization(W)
    margins = verify_split_conditions(
        bundle.main,
        bundle.perturbation,
        bundle.gram_plus,
        bundle.gram0,
        constants,
        trials=100,
        seed=config.seed + 2,
    )

    spectra = _spectra_tables(W)
    lam_rh = spectra["inverse_hermitian"]["eigenvalues"].real
    checks = []
    fit = None
    if "positive_sector" in enabled:
        checks.append(verify.check_positive_sector(sample, sector, tolerance=tol))
    if "resolvent_bounds" in enabled:
        checks.append(
            verify.check_resolvent_bounds(W, constants.main_coercivity, tolerance=tol)
        )
    if "real_part" in enabled:
        checks.append(
            verify.check_real_part(
                W, bundle.gram_plus, constants.main_coercivity, bundle.gram0, tolerance=tol
            )
        )
    if "form_bounds" in enabled:
        checks.append(
            verify.check_form_bounds(
                W,
                bundle.gram_plus,
                constants.main_coercivity,
                constants.form_bound,
                bundle.gram0,
                tolerance=tol,
            )
        )
    if "two_sided_estimate" in enabled:
        checks.append(verify.check_two_sided_estimate(W, tolerance=tol))
    if "schatten" in enabled:
        schatten_result, fit = verify.check_schatten(
            W, constants.main_coercivity, tolerance=tol
        )
        checks.append(schatten_result)
    elif len(lam_rh) >= 5:
        fit = decay_fit(lam_rh)
    if "completeness_hypothesis" in enabled:
        checks.append(
            verify.check_completeness_hypothesis(
                W,
                fit.exponent if fit is not None else None,
                sample.aperture,
                resolvent_range=resolvent_sample,
                trend_tolerance=config.trend_tolerance,
            )
        )
    if "eigenvalue_sums" in enabled:
        checks.extend(
            verify.check_eigenvalue_sums(
                W, config.p_list, sample.aperture, fac.distortion_inv_norm, tolerance=tol
            )
        )

    return SizeResult(
        size=bundle.size,
        constants=constants,
        sector=sector,
        factorization_norms={
            "skew_norm": fac.skew_norm,
            "distortion_norm": fac.distortion_norm,
            "distortion_inv_norm": fac.distortion_inv_norm,
        },
        aperture=sample.aperture,
        resolvent_aperture=resolvent_sample.aperture,
        condition_margins=margins,
        checks=tuple(checks),
        spectra=spectra,
        fit=fit,
    )


def run_analysis(config: AnalysisConfig) -> AnalysisReport:
    """Run the full pipeline over the configured sizes."""
    sizes = (2,) if config.family == "selftest2x2" else tuple(config.sizes)
    results = tuple(_analyze_size(config, size) for size in sizes)

    cross_checks = []
    cross_skipped = []
    enabled = set(config.checks)
    usable = [r for r in results if r.fit is not None]
    if "asymptotic_decay" in enabled:
        try:
            moduli = {
                r.size: np.abs(r.spectra["resolvent"]["eigenvalues"]) for r in usable
            }
            exponents = {r.size: r.fit.exponent for r in usable}
            cross_checks.append(
                verify.check_asymptotic(
                    moduli, exponents, config.eps, trend_tolerance=config.trend_tolerance
                )
            )
        except InsufficientSizes as exc:
            cross_skipped.append({"id": "asymptotic_decay", "reason": str(exc)})
    if "compact_resolvent" in enabled:
        try:
            spectra = {
                r.size: r.spectra["inverse_hermitian"]["eigenvalues"].real for r in usable
            }
            cross_checks.append(
                verify.check_compact_resolvent(spectra, tolerance=config.trend_tolerance)
            )
        except InsufficientSizes as exc:
            cross_skipped.append({"id": "compact_resolvent", "reason": str(exc)})

    fits = {
        str(r.size): {
            "exponent": r.fit.exponent,
            "window": list(r.fit.window),
            "r_squared": r.fit.r_squared,
        }
        for r in usable
    }
    return AnalysisReport(
        config=config,
        size_results=results,
        cross_checks=tuple(cross_checks),
        cross_skipped=tuple(cross_skipped),
        fits=fits,
    )
