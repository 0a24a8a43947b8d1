"""Form constants, sector geometry, and numerical-range sampling.

The discrete bilinear form of an operator X is ``g^H (G0 X) f`` where G0
is the order-0 Gram (a scalar weight times the identity).  The constants
computed here are the tightest ones for which the coercivity and
boundedness inequalities of the split W = main + perturbation hold on the
whole discrete space, so every downstream inequality is maximally
stressed rather than vacuously true.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import NonAccretive, NonpositiveEpsilon
from .spectral import as_matrix, hermitian_part, skew_part

__all__ = [
    "FormConstants",
    "SectorParams",
    "NumericalRange",
    "estimate_constants",
    "sector_parameters",
    "sector_vertex",
    "sector_cotangent",
    "numerical_range",
    "ConditionMargins",
    "verify_split_conditions",
]


@dataclass(frozen=True)
class FormConstants:
    """Tight constants of the accretive split.

    main_coercivity bounds Re(main f, f) below by the strong norm squared;
    main_bound bounds |(main f, g)| on strong x strong; the perturbation
    pair does the same with the base norm on the coercive side and mixed
    strong x base on the bounded side.  form_bound = main_bound +
    perturbation_bound controls the real part of the whole form.
    """

    main_coercivity: float
    main_bound: float
    perturbation_coercivity: float
    perturbation_bound: float

    @property
    def form_bound(self) -> float:
        return self.main_bound + self.perturbation_bound


def _scalar_weight(gram0) -> float:
    G = np.asarray(gram0, dtype=float)
    w = float(G[0, 0])
    if w <= 0 or not np.allclose(G, w * np.eye(len(G)), rtol=0, atol=1e-12 * max(w, 1)):
        raise ValueError("order-0 Gram must be a positive scalar multiple of the identity")
    return w


def _inv_sqrt(gram) -> np.ndarray:
    vals, vecs = np.linalg.eigh(np.asarray(gram, dtype=float))
    if vals[0] <= 0:
        raise ValueError("Gram matrix must be positive definite")
    return (vecs / np.sqrt(vals)) @ vecs.T


def estimate_constants(main, perturbation, gram_plus, gram0) -> FormConstants:
    """Tightest coercivity and boundedness constants of the split.

    Coercivities are smallest pencil eigenvalues of the weighted Hermitian
    parts against the Grams; bounds are the largest singular values of the
    Gram-whitened form matrices.  Raises NonAccretive when either
    coercivity fails to be positive, in which case the hypotheses of the
    whole theory are violated by the model.
    """
    T = as_matrix(main)
    A = as_matrix(perturbation)
    Gp = np.asarray(gram_plus, dtype=float)
    w = _scalar_weight(gram0)
    G0 = w * np.eye(len(T))

    form_T = w * T
    form_A = w * A
    gp_inv_half = _inv_sqrt(Gp)
    g0_inv_half = np.eye(len(T)) / np.sqrt(w)

    c0 = float(scipy.linalg.eigh(hermitian_part(form_T), Gp, eigvals_only=True)[0])
    c1 = float(np.linalg.norm(gp_inv_half @ form_T @ gp_inv_half, 2))
    c2 = float(scipy.linalg.eigh(hermitian_part(form_A), G0, eigvals_only=True)[0])
    c3 = float(np.linalg.norm(g0_inv_half @ form_A @ gp_inv_half, 2))

    if c0 <= 0 or c2 <= 0:
        raise NonAccretive(
            f"split is not strictly accretive (main coercivity {c0:.3e}, "
            f"perturbation coercivity {c2:.3e}); downstream claims are void"
        )
    return FormConstants(
        main_coercivity=c0,
        main_bound=c1,
        perturbation_coercivity=c2,
        perturbation_bound=c3,
    )


def sector_cotangent(constants: FormConstants, epsilon: float) -> float:
    """Cotangent of the sector semi-angle as a function of epsilon."""
    c = constants
    return c.main_coercivity / (c.perturbation_bound * epsilon / 2 + c.main_bound)


def sector_vertex(constants: FormConstants, epsilon: float) -> float:
    """Vertex abscissa of the sector as a function of epsilon."""
    c = constants
    k = sector_cotangent(c, epsilon)
    return c.perturbation_coercivity - k * c.perturbation_bound / (2 * epsilon)


@dataclass(frozen=True)
class SectorParams:
    """Sector containing the numerical range of the split operator.

    ``critical_epsilon`` is the positive root of the vertex equation; at
    epsilon equal to that root the vertex sits exactly at the origin, the
    boundary case of a positive sector.  half_angle = arctan(1 /
    cot_half_angle).
    """

    epsilon: float
    cot_half_angle: float
    vertex: float
    critical_epsilon: float
    half_angle: float


def sector_parameters(constants: FormConstants, epsilon: float | None = None) -> SectorParams:
    """Sector parameters of the split; defaults to the critical epsilon.

    The critical epsilon is sqrt((main_bound / perturbation_bound)^2 +
    main_coercivity / perturbation_coercivity) minus main_bound /
    perturbation_bound, the positive root of vertex(epsilon) = 0.  Larger
    epsilons give a positive vertex, smaller ones a negative vertex.
    """
    c = constants
    ratio = c.main_bound / c.perturbation_bound
    quotient = c.main_coercivity / c.perturbation_coercivity
    # sqrt(ratio^2 + quotient) - ratio, written cancellation-free
    critical = float(quotient / (np.sqrt(ratio**2 + quotient) + ratio))
    if epsilon is None:
        epsilon = critical
    elif epsilon <= 0:
        raise NonpositiveEpsilon(f"epsilon must be positive, got {epsilon}")
    k = sector_cotangent(c, epsilon)
    return SectorParams(
        epsilon=float(epsilon),
        cot_half_angle=float(k),
        vertex=float(sector_vertex(c, epsilon)),
        critical_epsilon=critical,
        half_angle=float(np.arctan(1.0 / k)),
    )


@dataclass(frozen=True)
class NumericalRange:
    """Sampled numerical range.

    ``points`` are Rayleigh quotients of the stored unit ``vectors`` (row
    i of vectors yields points[i]); ``boundary`` is the subset found by
    the rotation method plus the extreme-argument support points.
    aperture = max |arg z| over sampled points away from zero.
    """

    points: np.ndarray
    boundary: np.ndarray
    vectors: np.ndarray
    aperture: float


def _rayleigh(A: np.ndarray, v: np.ndarray) -> complex:
    v = v / np.linalg.norm(v)
    return complex(v.conj() @ A @ v)


def numerical_range(W, m_angles: int = 64, m_random: int = 256, seed: int = 0) -> NumericalRange:
    """Sample the numerical range by the rotation method.

    For each angle phi the top eigenvector of the Hermitian part of
    e^{i phi} W supports the boundary.  When the Hermitian part of W is
    positive definite the two extreme-argument support vectors (extremal
    eigenvectors of the pencil of the skew part against the Hermitian
    part) are appended, so the sampled aperture is exact rather than an
    under-estimate at finite angular resolution.  ``m_random`` seeded
    Rayleigh quotients probe the interior.
    """
    A = as_matrix(W)
    if m_angles < 8:
        raise ValueError(f"need at least 8 angles, got {m_angles}")
    n = len(A)
    vectors = []
    boundary = []
    for phi in np.linspace(0.0, 2.0 * np.pi, m_angles, endpoint=False):
        rotated = hermitian_part(np.exp(1j * phi) * A)
        _, vecs = np.linalg.eigh(rotated)
        v = vecs[:, -1]
        vectors.append(v)
        boundary.append(_rayleigh(A, v))

    H = hermitian_part(A)
    K = skew_part(A)
    if np.linalg.eigvalsh(H)[0] > 0 and np.linalg.norm(K, 2) > 0:
        _, pencil_vecs = scipy.linalg.eigh(K, H)
        for col in (0, -1):
            v = pencil_vecs[:, col]
            v = v / np.linalg.norm(v)
            vectors.append(v)
            boundary.append(_rayleigh(A, v))

    rng = np.random.default_rng(seed)
    for _ in range(m_random):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = v / np.linalg.norm(v)
        vectors.append(v)

    points = np.array([_rayleigh(A, v) for v in vectors])
    boundary = np.array(boundary)
    nonzero = points[np.abs(points) > 1e-13]
    aperture = float(np.max(np.abs(np.angle(nonzero)))) if len(nonzero) else 0.0
    return NumericalRange(
        points=points, boundary=boundary, vectors=np.array(vectors), aperture=aperture
    )


@dataclass(frozen=True)
class ConditionMargins:
    """Worst slacks of the four split inequalities over random trials."""

    main_coercive: float
    main_bounded: float
    perturbation_coercive: float
    perturbation_bounded: float

    @property
    def worst(self) -> float:
        return min(
            self.main_coercive,
            self.main_bounded,
            self.perturbation_coercive,
            self.perturbation_bounded,
        )

    def passed(self, tolerance: float = 1e-9) -> bool:
        return self.worst >= -tolerance


def verify_split_conditions(
    main,
    perturbation,
    gram_plus,
    gram0,
    constants: FormConstants,
    trials: int = 100,
    seed: int = 0,
) -> ConditionMargins:
    """Probe the four split inequalities with random unit vectors.

    Each inequality is evaluated in its division-free form (difference of
    the two sides), so the zero vector cannot poison a trial; vectors are
    normalized only for numerical comfort.
    """
    T = as_matrix(main)
    A = as_matrix(perturbation)
    Gp = np.asarray(gram_plus, dtype=float)
    w = _scalar_weight(gram0)
    n = len(T)
    rng = np.random.default_rng(seed)

    def unit(size):
        v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        return v / np.linalg.norm(v)

    slack = np.full(4, np.inf)
    for _ in range(trials):
        f = unit(n)
        g = unit(n)
        plus_f = float(np.real(f.conj() @ Gp @ f))
        plus_g = float(np.real(g.conj() @ Gp @ g))
        base_f = w * float(np.real(f.conj() @ f))
        base_g = w * float(np.real(g.conj() @ g))
        form_T_fg = w * (g.conj() @ T @ f)
        form_T_ff = w * (f.conj() @ T @ f)
        form_A_fg = w * (g.conj() @ A @ f)
        form_A_ff = w * (f.conj() @ A @ f)
        slack[0] = min(slack[0], form_T_ff.real - constants.main_coercivity * plus_f)
        slack[1] = min(
            slack[1], constants.main_bound * np.sqrt(plus_f * plus_g) - abs(form_T_fg)
        )
        slack[2] = min(slack[2], form_A_ff.real - constants.perturbation_coercivity * base_f)
        slack[3] = min(
            slack[3],
            constants.perturbation_bound * np.sqrt(plus_f * base_g) - abs(form_A_fg),
        )
    return ConditionMargins(
        main_coercive=float(slack[0]),
        main_bounded=float(slack[1]),
        perturbation_coercive=float(slack[2]),
        perturbation_bounded=float(slack[3]),
    )
