"""Dense linear-algebra core.

Eigendecompositions, positive-definite square roots, resolvents, the
multiplicative factorization of an accretive matrix, singular values,
Schatten norms, and power-law decay fits.  All norms are spectral 2-norms
unless a Schatten exponent is named.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    ConvergenceFailure,
    NonAccretive,
    NonpositiveValue,
    NotHermitian,
    NotPositiveDefinite,
    SpectrumHit,
    WindowTooSmall,
)

__all__ = [
    "Spectrum",
    "Factorization",
    "DecayFit",
    "as_matrix",
    "hermitian_eig",
    "general_eig",
    "psd_sqrt",
    "extract_factorization",
    "resolvent",
    "resolvent_real_part",
    "singular_values",
    "schatten_norm",
    "default_fit_window",
    "decay_fit",
]

HERMITIAN_RTOL = 1e-10


def as_matrix(M) -> np.ndarray:
    """Coerce an operator carrier or array-like to a dense complex matrix."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


def hermitian_part(M) -> np.ndarray:
    A = as_matrix(M)
    return (A + A.conj().T) / 2


def skew_part(M) -> np.ndarray:
    """The Hermitian matrix (M - M^H) / 2i, so M = herm + i * skew."""
    A = as_matrix(M)
    return (A - A.conj().T) / 2j


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with the worst eigenpair residual.

    Hermitian spectra are real ascending; general spectra are sorted by
    descending modulus so partial sums take the largest terms first.
    """

    values: np.ndarray
    residual: float

    def __len__(self) -> int:
        return len(self.values)


def hermitian_eig(M):
    """Eigendecomposition of a Hermitian matrix.

    Returns (Spectrum, eigenvectors) with real ascending eigenvalues and
    orthonormal columns.
    """
    A = as_matrix(M)
    scale = np.linalg.norm(A, 2)
    if scale > 0 and np.linalg.norm(A - A.conj().T, 2) > HERMITIAN_RTOL * scale:
        raise NotHermitian("matrix is not Hermitian within 1e-10 relative tolerance")
    vals, vecs = np.linalg.eigh(A)
    residual = float(np.linalg.norm(A @ vecs - vecs * vals, 2))
    return Spectrum(values=vals, residual=residual), vecs


def general_eig(M) -> Spectrum:
    """Full complex spectrum of a dense matrix, descending modulus."""
    A = as_matrix(M)
    try:
        vals, vecs = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"dense eigensolver failed: {exc}") from exc
    order = np.argsort(-np.abs(vals), kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    residual = float(np.max(np.linalg.norm(A @ vecs - vecs * vals, axis=0)))
    return Spectrum(values=vals, residual=residual)


def psd_sqrt(H):
    """Square root and inverse square root of a Hermitian positive matrix."""
    spec, vecs = hermitian_eig(H)
    if spec.values[0] <= 0:
        raise NotPositiveDefinite(f"smallest eigenvalue {spec.values[0]:.3e} is not positive")
    root = np.sqrt(spec.values)
    half = (vecs * root) @ vecs.conj().T
    inv_half = (vecs / root) @ vecs.conj().T
    return half, inv_half


@dataclass(frozen=True)
class Factorization:
    """Multiplicative splitting W = root (I + i * balanced_skew) root.

    ``hermitian`` is the (positive definite) Hermitian part, ``root`` its
    square root, ``balanced_skew`` the Hermitian matrix obtained by
    balancing the skew part with the inverse root, and ``distortion`` the
    matrix I + balanced_skew^2 whose norms control how far the resolvent
    real part can drift from the inverse of the Hermitian part.
    """

    hermitian: np.ndarray
    root: np.ndarray
    inv_root: np.ndarray
    balanced_skew: np.ndarray
    distortion: np.ndarray
    skew_norm: float
    distortion_norm: float
    distortion_inv_norm: float


def extract_factorization(W) -> Factorization:
    """Factor an accretive matrix through its Hermitian part.

    Raises NonAccretive when the Hermitian part is not positive definite.
    The same balanced skew matrix serves the adjoint with a sign flip.
    """
    A = as_matrix(W)
    H = hermitian_part(A)
    try:
        root, inv_root = psd_sqrt(H)
    except NotPositiveDefinite as exc:
        raise NonAccretive(f"Hermitian part is not positive definite: {exc}") from exc
    B = hermitian_part(inv_root @ skew_part(A) @ inv_root)  # symmetrize roundoff
    S = np.eye(len(B)) + B @ B
    return Factorization(
        hermitian=H,
        root=root,
        inv_root=inv_root,
        balanced_skew=B,
        distortion=S,
        skew_norm=float(np.linalg.norm(B, 2)),
        distortion_norm=float(np.linalg.norm(S, 2)),
        distortion_inv_norm=float(np.linalg.norm(np.linalg.inv(S), 2)),
    )


def resolvent(W, zeta: complex = 0.0) -> np.ndarray:
    """(W + zeta I)^-1 by dense solve.

    Raises SpectrumHit when the shifted matrix has a singular value below
    1e-12 times the norm of W (the shift sits on the spectrum of -W).
    """
    A = as_matrix(W)
    shifted = A + zeta * np.eye(len(A))
    smallest = singular_values(shifted)[-1]
    if smallest <= 1e-12 * max(np.linalg.norm(A, 2), 1e-300):
        raise SpectrumHit(f"shift {zeta} is numerically on the spectrum of -W")
    return np.linalg.inv(shifted)


def resolvent_real_part(W) -> np.ndarray:
    """Hermitian part of W^-1 (positive definite for accretive W)."""
    return hermitian_part(resolvent(W, 0.0))


def singular_values(M) -> np.ndarray:
    """s-numbers in descending order."""
    return np.linalg.svd(as_matrix(M), compute_uv=False)


def schatten_norm(M, p: float) -> float:
    """(sum_i s_i^p)^(1/p) for p >= 1."""
    if p < 1:
        raise ValueError(f"Schatten exponent must be >= 1, got {p}")
    s = singular_values(M)
    return float(np.sum(s**p) ** (1.0 / p))


@dataclass(frozen=True)
class DecayFit:
    """Least-squares power-law fit values[i] ~ C * i^(-exponent)."""

    exponent: float
    window: tuple
    r_squared: float


def default_fit_window(count: int) -> tuple:
    """Window that skips the few smallest indices (asymptotics not yet set
    in) and the top half of the discrete band (spectrum distorted there)."""
    lo = max(4, round(0.02 * count))
    hi = max(count // 2, lo + 4)
    hi = min(hi, count)
    if hi - lo + 1 < 5:
        return (1, count)
    return (lo, hi)


def decay_fit(values, window: tuple | None = None) -> DecayFit:
    """Fit the decay exponent of a positive descending sequence.

    ``window = (lo, hi)`` selects 1-based indices lo..hi inclusive; the
    default comes from :func:`default_fit_window`.
    """
    vals = np.asarray(values, dtype=float)
    if window is None:
        window = default_fit_window(len(vals))
    lo, hi = int(window[0]), int(window[1])
    if lo < 1 or hi > len(vals) or hi - lo + 1 < 5:
        raise WindowTooSmall(f"window {window} invalid for {len(vals)} values (need >= 5)")
    segment = vals[lo - 1 : hi]
    if np.any(segment <= 0):
        raise NonpositiveValue("decay fit needs strictly positive values inside the window")
    x = np.log(np.arange(lo, hi + 1, dtype=float))
    y = np.log(segment)
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return DecayFit(exponent=float(-slope), window=(lo, hi), r_squared=r_squared)
