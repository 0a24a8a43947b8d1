"""Inequality harness.

Each check recomputes both sides of one spectral claim from scratch
matrices (no reuse of intermediate factorizations, so a self-consistent
bug cannot certify itself), and reports a signed margin: for a claim
``lhs <= rhs`` the margin is ``rhs - lhs`` at the worst instance, and the
check passes iff ``margin >= -tolerance``.  Algebraic identities use an
absolute tolerance (default 1e-9); trend and fit statements use a 5%
relative tolerance on exponents.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exceptions import InsufficientSizes
from .forms import NumericalRange, SectorParams, numerical_range
from .spectral import (
    as_matrix,
    decay_fit,
    default_fit_window,
    extract_factorization,
    general_eig,
    hermitian_part,
    resolvent,
    resolvent_real_part,
    singular_values,
)

__all__ = [
    "CheckResult",
    "DEFAULT_TOLERANCE",
    "TREND_TOLERANCE",
    "check_positive_sector",
    "check_resolvent_bounds",
    "check_real_part",
    "check_form_bounds",
    "check_two_sided_estimate",
    "check_schatten",
    "check_completeness_hypothesis",
    "check_eigenvalue_sums",
    "check_asymptotic",
    "check_compact_resolvent",
]

DEFAULT_TOLERANCE = 1e-9
TREND_TOLERANCE = 0.05


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one inequality check.

    ``lhs`` and ``rhs`` store the two sides at the worst instance so the
    pass flag is recomputable from the stored numbers alone.
    """

    id: str
    claim: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "claim": self.claim,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "details": self.details,
        }


def _result(id, claim, lhs, rhs, margin, tolerance, details=None) -> CheckResult:
    return CheckResult(
        id=id,
        claim=claim,
        lhs=float(np.real(lhs)),
        rhs=float(np.real(rhs)),
        margin=float(margin),
        tolerance=float(tolerance),
        passed=bool(margin >= -tolerance),
        details=details or {},
    )


def check_positive_sector(
    sample: NumericalRange, sector: SectorParams, tolerance: float = DEFAULT_TOLERANCE
) -> CheckResult:
    """Every sampled range point obeys |Im z| <= (Re z - vertex) / cot."""
    slope = 1.0 / sector.cot_half_angle
    bounds = slope * (sample.points.real - sector.vertex)
    devs = np.abs(sample.points.imag)
    worst = int(np.argmin(bounds - devs))
    return _result(
        "positive_sector",
        "sampled numerical range lies inside the sector with the computed "
        "vertex and semi-angle",
        devs[worst],
        bounds[worst],
        float(np.min(bounds - devs)),
        tolerance,
        details={
            "vertex": sector.vertex,
            "half_angle": sector.half_angle,
            "points": len(sample.points),
        },
    )


def _default_shift_grid(count: int = 16) -> np.ndarray:
    res = np.geomspace(0.1, 10.0, count // 2)
    return np.concatenate([res, res + 1j * np.linspace(-5.0, 5.0, count - count // 2)])


def check_resolvent_bounds(
    W,
    coercivity: float,
    shifts: np.ndarray | None = None,
    halfplane_probes: np.ndarray | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
    singularity_floor: float = 1e-8,
) -> CheckResult:
    """Shifted-inverse norm bound and left half-plane solvability.

    For each shift with positive real part, ||(W + shift)^-1|| must not
    exceed 1 / (coercivity + Re shift).  For each probe with real part
    below the coercivity constant, W - probe must stay comfortably
    invertible (smallest singular value above ``singularity_floor``).
    """
    A = as_matrix(W)
    eye = np.eye(len(A))
    if shifts is None:
        shifts = _default_shift_grid()
    if halfplane_probes is None:
        re = np.linspace(-1.0, 0.9 * coercivity, 4)
        halfplane_probes = np.concatenate([re, re + 0.5j])

    margins = []
    lhs = rhs = 0.0
    bound_margin = None
    for zeta in np.atleast_1d(shifts):
        if zeta.real <= 0:
            continue  # the bound needs a positive real part
        norm = np.linalg.norm(np.linalg.inv(A + zeta * eye), 2)
        bound = 1.0 / (coercivity + zeta.real)
        if bound_margin is None or bound - norm < bound_margin:
            bound_margin, lhs, rhs = bound - norm, norm, bound
    if bound_margin is not None:
        margins.append(bound_margin)
    floor_margin = None
    for zeta in np.atleast_1d(halfplane_probes):
        if zeta.real >= coercivity:
            continue
        smallest = singular_values(A - zeta * eye)[-1]
        slack = float(smallest - singularity_floor)
        floor_margin = slack if floor_margin is None else min(floor_margin, slack)
    if floor_margin is not None:
        margins.append(floor_margin)
    return _result(
        "resolvent_bounds",
        "the shifted inverse obeys the coercivity-shifted norm bound on the "
        "right half-plane and exists left of the coercivity constant",
        lhs,
        rhs,
        min(margins, default=0.0),
        tolerance,
        details={
            "norm_bound_margin": bound_margin,
            "halfplane_margin": floor_margin,
            "coercivity": coercivity,
        },
    )


def check_real_part(
    W,
    gram_plus,
    coercivity: float,
    gram0=None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CheckResult:
    """Hermitian part is selfadjoint and coercive in the strong norm."""
    A = as_matrix(W)
    H = hermitian_part(A)
    scale = max(np.linalg.norm(H, 2), 1e-300)
    herm_residual = float(np.linalg.norm(H - H.conj().T, 2) / scale)
    weight = 1.0 if gram0 is None else float(np.asarray(gram0)[0, 0].real)
    Gp = np.asarray(gram_plus, dtype=float)
    lam_min = float(scipy.linalg.eigh(weight * H, Gp, eigvals_only=True)[0])
    margin = lam_min - coercivity
    if herm_residual > tolerance:
        margin = -herm_residual
    return _result(
        "real_part",
        "the Hermitian part is selfadjoint and its form dominates the "
        "coercivity constant times the strong norm squared",
        coercivity,
        lam_min,
        margin,
        tolerance,
        details={"hermitian_residual": herm_residual},
    )


def check_form_bounds(
    W,
    gram_plus,
    coercivity: float,
    form_bound: float,
    gram0=None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CheckResult:
    """The real form is pinched between the coercivity and the form bound."""
    H = hermitian_part(as_matrix(W))
    weight = 1.0 if gram0 is None else float(np.asarray(gram0)[0, 0].real)
    Gp = np.asarray(gram_plus, dtype=float)
    pencil = scipy.linalg.eigh(weight * H, Gp, eigvals_only=True)
    lower = float(pencil[0]) - coercivity
    upper = form_bound - float(pencil[-1])
    return _result(
        "form_bounds",
        "the real form in the strong norm stays between the coercivity "
        "constant and the sum of the boundedness constants",
        float(pencil[-1]),
        form_bound,
        min(lower, upper),
        tolerance,
        details={"pencil_min": float(pencil[0]), "pencil_max": float(pencil[-1])},
    )


def _descending_real_eigs(H) -> np.ndarray:
    return np.sort(np.linalg.eigvalsh(as_matrix(H)).real)[::-1]


def check_two_sided_estimate(W, tolerance: float = DEFAULT_TOLERANCE) -> CheckResult:
    """Eigenvalues of the resolvent real part are pinched by those of the
    inverse Hermitian part, scaled by the distortion norms."""
    A = as_matrix(W)
    V = resolvent_real_part(A)
    inv_herm = np.linalg.inv(hermitian_part(A))
    lam_v = _descending_real_eigs(V)
    lam_rh = _descending_real_eigs(inv_herm)
    fac = extract_factorization(A)
    lower = fac.distortion_norm**-2 * lam_rh
    upper = fac.distortion_inv_norm * lam_rh
    lower_margin = float(np.min(lam_v - lower))
    upper_margin = float(np.min(upper - lam_v))
    if upper_margin <= lower_margin:
        worst = int(np.argmin(upper - lam_v))
        lhs, rhs = lam_v[worst], upper[worst]
    else:
        worst = int(np.argmin(lam_v - lower))
        lhs, rhs = lower[worst], lam_v[worst]
    return _result(
        "two_sided_estimate",
        "indexwise the resolvent real-part eigenvalues sit between the "
        "inverse-Hermitian-part eigenvalues scaled by the distortion norms",
        lhs,
        rhs,
        min(lower_margin, upper_margin),
        tolerance,
        details={
            "lower_margin": lower_margin,
            "upper_margin": upper_margin,
            "distortion_norm": fac.distortion_norm,
            "distortion_inv_norm": fac.distortion_inv_norm,
        },
    )


def check_schatten(
    W,
    coercivity: float,
    fit_window: tuple | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
):
    """Squared-resolvent domination, decay order, and class membership.

    Asserts that the eigenvalues of |W^-1|^2 are dominated indexwise by
    the resolvent real part over the coercivity constant; fits the decay
    exponent of the inverse Hermitian part and reports (not asserts) the
    summability class it implies, plus whether exponent * p exceeds one
    for p in {1, 2} (the converse direction).  Returns (CheckResult,
    DecayFit); the fit is None when the spectrum is too short to fit.
    """
    A = as_matrix(W)
    s_res = singular_values(resolvent(A, 0.0))
    lhs_vals = np.sort(s_res**2)[::-1]
    lam_v = _descending_real_eigs(resolvent_real_part(A))
    rhs_vals = lam_v / coercivity
    worst = int(np.argmin(rhs_vals - lhs_vals))
    margin = float(np.min(rhs_vals - lhs_vals))

    lam_rh = _descending_real_eigs(np.linalg.inv(hermitian_part(A)))
    fit = None
    if len(lam_rh) >= 5:
        fit = decay_fit(lam_rh, fit_window)
        mu = fit.exponent
        classification = (
            {"p": 1.0} if mu > 1 else {"p": "any exponent above", "threshold": 2.0 / mu}
        )
        details = {
            "decay_exponent": mu,
            "r_squared": fit.r_squared,
            "window": list(fit.window),
            "classification": classification,
            "exponent_times_p_above_one": {f"p={p:g}": bool(mu * p > 1) for p in (1.0, 2.0)},
        }
    else:
        details = {"decay_exponent": None, "note": "spectrum too short for a decay fit"}
    result = _result(
        "schatten",
        "squared resolvent s-numbers are dominated by the resolvent real "
        "part over the coercivity constant; the fitted decay exponent "
        "classifies the summability of the resolvent",
        lhs_vals[worst],
        rhs_vals[worst],
        margin,
        tolerance,
        details=details,
    )
    return result, fit


def check_completeness_hypothesis(
    W,
    decay_exponent: float | None,
    half_angle: float,
    resolvent_range: NumericalRange | None = None,
    trend_tolerance: float = TREND_TOLERANCE,
    tolerance: float = 1e-6,
    seed: int = 0,
) -> CheckResult:
    """Hypothesis of the root-vector completeness criterion.

    Computes the aperture of the numerical range of the resolvent (must
    be positive and at most twice the sector semi-angle), the induced
    exponent d = pi / aperture, evaluates half_angle < pi * exponent / 2,
    and reports whether s_i(resolvent real part) * i^(1/d) trends down
    over the fit window.  The completeness conclusion itself is trivially
    true at finite dimension and is not asserted.  A numerically real
    range (Hermitian case) is reported as degenerate with d = infinity
    and the hypothesis holding vacuously; a missing decay exponent (too
    few eigenvalues to fit) leaves only the aperture containment to test.
    """
    A = as_matrix(W)
    if resolvent_range is None:
        resolvent_range = numerical_range(resolvent(A, 0.0), seed=seed)
    vartheta = resolvent_range.aperture
    claim = (
        "sector semi-angle against the decay order certifies the "
        "completeness hypothesis for the root vectors"
    )
    details = {
        "aperture": vartheta,
        "half_angle": half_angle,
        "decay_exponent": decay_exponent,
    }
    margins = []
    rhs = 0.0
    if decay_exponent is not None:
        rhs = np.pi * decay_exponent / 2.0
        margins.append(rhs - half_angle)
    if vartheta < 1e-12:
        details.update({"degenerate": True, "d": None})
        return _result(
            "completeness_hypothesis",
            claim,
            half_angle,
            rhs,
            min(margins, default=0.0),
            tolerance,
            details=details,
        )
    d = np.pi / vartheta
    margins.append(2.0 * half_angle + tolerance - vartheta)
    details.update({"degenerate": False, "d": float(d)})
    s_v = _descending_real_eigs(resolvent_real_part(A))
    if len(s_v) >= 5:
        lo, hi = default_fit_window(len(s_v))
        idx = np.arange(lo, hi + 1, dtype=float)
        scaled = s_v[lo - 1 : hi] * idx ** (1.0 / d)
        slope = float(np.polyfit(np.log(idx), np.log(scaled), 1)[0])
        margins.append(trend_tolerance - slope)
        details["scaled_trend_slope"] = slope
    return _result(
        "completeness_hypothesis",
        claim,
        half_angle,
        rhs,
        min(margins),
        tolerance,
        details=details,
    )


def check_eigenvalue_sums(
    W,
    p_list,
    half_angle: float,
    distortion_inv_norm: float,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list:
    """Partial sums of resolvent eigenvalue moduli against the secant bound.

    For every prefix length and every exponent p, the sum of
    |lambda_i(W^-1)|^p (descending modulus) is bounded by sec^p of the
    sector semi-angle times the distortion inverse norm times the matching
    partial sum over the inverse Hermitian part.  Each eigenvalue also
    individually obeys |lambda| <= sec(half_angle) |Re lambda|.
    """
    A = as_matrix(W)
    spectrum = general_eig(resolvent(A, 0.0))
    lam = spectrum.values
    lam_rh = _descending_real_eigs(np.linalg.inv(hermitian_part(A)))
    sec = 1.0 / np.cos(half_angle)
    indexwise_margin = float(np.min(sec * np.abs(lam.real) - np.abs(lam)))
    results = []
    for p in p_list:
        if p < 1:
            raise ValueError(f"summation exponent must be >= 1, got {p}")
        lhs_sums = np.cumsum(np.abs(lam) ** p)
        rhs_sums = sec**p * distortion_inv_norm * np.cumsum(lam_rh**p)
        worst = int(np.argmin(rhs_sums - lhs_sums))
        margin = float(np.min(rhs_sums - lhs_sums))
        results.append(
            _result(
                f"eigenvalue_sum_p{p:g}",
                "partial sums of resolvent eigenvalue moduli are bounded by "
                "the secant-scaled partial sums over the inverse Hermitian part",
                lhs_sums[worst],
                rhs_sums[worst],
                min(margin, indexwise_margin),
                tolerance,
                details={
                    "p": float(p),
                    "sum_margin": margin,
                    "indexwise_secant_margin": indexwise_margin,
                    "half_angle": half_angle,
                    "lhs_total": float(lhs_sums[-1]),
                    "rhs_total": float(rhs_sums[-1]),
                },
            )
        )
    return results


def check_asymptotic(
    moduli_by_size: dict,
    exponent_by_size: dict,
    eps: float,
    trend_tolerance: float = TREND_TOLERANCE,
) -> CheckResult:
    """Eigenvalue moduli decay faster than the fitted power minus eps.

    On the largest grid the windowed sequence |lambda_i| * i^(exponent -
    eps) must trend down (negative log-log slope); the fitted exponent
    must be stable (within 10%) across the two largest grids.  An eps at
    or above the fitted exponent leaves the hypothesis out of range,
    which is reported as such rather than failed.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    sizes = sorted(moduli_by_size)
    if len(sizes) < 3:
        raise InsufficientSizes(f"need at least 3 sizes, got {len(sizes)}")
    largest, previous = sizes[-1], sizes[-2]
    mu = float(exponent_by_size[largest])
    stability = abs(mu - float(exponent_by_size[previous])) / max(
        abs(float(exponent_by_size[previous])), 1e-300
    )
    claim = "resolvent eigenvalue moduli decay faster than the fitted power minus eps"
    if eps >= mu:
        return _result(
            "asymptotic_decay",
            claim,
            0.0,
            0.0,
            0.0,
            trend_tolerance,
            details={
                "out_of_range": True,
                "note": "eps >= fitted exponent, scaled sequence need not decay",
                "eps": eps,
                "exponent": mu,
                "exponent_stability": stability,
            },
        )
    moduli = np.sort(np.abs(np.asarray(moduli_by_size[largest])))[::-1]
    lo, hi = default_fit_window(len(moduli))
    idx = np.arange(lo, hi + 1, dtype=float)
    scaled = moduli[lo - 1 : hi] * idx ** (mu - eps)
    slope = float(np.polyfit(np.log(idx), np.log(scaled), 1)[0])
    margin = min(-slope, 0.10 - stability)
    return _result(
        "asymptotic_decay",
        claim,
        slope,
        0.0,
        margin,
        trend_tolerance,
        details={
            "out_of_range": False,
            "scaled_log_slope": slope,
            "eps": eps,
            "exponent": mu,
            "exponent_stability": stability,
            "window": [lo, hi],
        },
    )


def check_compact_resolvent(
    inv_herm_spectra_by_size: dict, tolerance: float = TREND_TOLERANCE
) -> CheckResult:
    """Compactness witness across refinement.

    The leading eigenvalues of the inverse Hermitian part must stabilize
    (each shared index within 5% between consecutive sizes over the
    leading quarter of the smaller band) while the smallest crossing
    eigenvalue keeps shrinking, the only finite-scale observable of a
    compact resolvent.
    """
    sizes = sorted(inv_herm_spectra_by_size)
    if len(sizes) < 2:
        raise InsufficientSizes(f"need at least 2 sizes, got {len(sizes)}")
    drift = 0.0
    tail_margin = np.inf
    for small, big in zip(sizes, sizes[1:]):
        a = np.sort(np.asarray(inv_herm_spectra_by_size[small]))[::-1]
        b = np.sort(np.asarray(inv_herm_spectra_by_size[big]))[::-1]
        head = max(1, len(a) // 4)
        drift = max(drift, float(np.max(np.abs(a[:head] - b[:head]) / np.abs(a[:head]))))
        tail_margin = min(tail_margin, float(a[-1] - b[-1]))
    return _result(
        "compact_resolvent",
        "inverse Hermitian-part eigenvalues stabilize at every fixed index "
        "while the spectral tail keeps decaying under refinement",
        drift,
        tolerance,
        min(tolerance - drift, tail_margin),
        tolerance,
        details={"head_drift": drift, "tail_decay_margin": float(tail_margin)},
    )
