"""Riemann-Liouville fractional integrals and derivatives on the grid.

Left-sided matrices are lower triangular, right-sided ones upper
triangular; the right-sided matrix of each kind is the index reversal of
the left-sided one.  Functions are extended by zero outside the interval,
matching the Dirichlet boundary data of the rest of the package.

Two schemes are available:

``trapezoid``
    Product integration of the Abel kernel against the piecewise-linear
    interpolant (exact for piecewise-linear integrands, endpoint
    singularity absorbed into the weights).  Derivatives of non-integer
    order compose this integral with one-sided difference quotients,
    keeping the matrices triangular.

``grunwald``
    Grunwald-Letnikov binomial convolution, h^(-alpha) scaled.
"""

from __future__ import annotations

from math import gamma

import numpy as np
import scipy.linalg

from .assembly import Grid, OperatorMatrix, SobolevGram, diff_matrix
from .exceptions import NonpositiveOrder, SingularGram

__all__ = [
    "grunwald_weights",
    "fractional_integral_matrix",
    "fractional_derivative_matrix",
    "coercivity_margin",
]

_SCHEMES = ("trapezoid", "grunwald")


def grunwald_weights(alpha: float, m: int) -> np.ndarray:
    """First m+1 coefficients of (1 - z)^alpha: w_k = (-1)^k binom(alpha, k).

    Computed by the stable recurrence w_k = w_{k-1} (1 - (alpha + 1) / k).
    """
    if m < 0:
        raise ValueError(f"need m >= 0, got {m}")
    w = np.empty(m + 1)
    w[0] = 1.0
    for k in range(1, m + 1):
        w[k] = w[k - 1] * (1.0 - (alpha + 1.0) / k)
    return w


def _reversal(n: int) -> np.ndarray:
    return np.eye(n)[::-1]


def _check_scheme(scheme: str) -> None:
    if scheme not in _SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}, expected one of {_SCHEMES}")


def _trapezoid_integral(n: int, h: float, alpha: float) -> np.ndarray:
    # Interior nodes only, so the boundary column of the product-trapezoid
    # rule drops and the matrix is lower-triangular Toeplitz.
    m = np.arange(1, n, dtype=float)
    col = np.empty(n)
    col[0] = 1.0
    col[1:] = (m + 1) ** (alpha + 1) - 2 * m ** (alpha + 1) + (m - 1) ** (alpha + 1)
    col *= h**alpha / gamma(alpha + 2.0)
    return np.tril(scipy.linalg.toeplitz(col, np.zeros(n)))


def _grunwald_toeplitz(n: int, h: float, alpha: float, sign: float) -> np.ndarray:
    # sign=+1 gives the derivative weights, sign=-1 the integral weights.
    col = grunwald_weights(sign * alpha, n - 1) * h ** (-sign * alpha)
    return np.tril(scipy.linalg.toeplitz(col, np.zeros(n)))


def fractional_integral_matrix(
    grid: Grid, alpha: float, side: str = "left", scheme: str = "trapezoid"
) -> OperatorMatrix:
    """Matrix of the fractional integral of order alpha > 0.

    Left side integrates from a, right side toward b; the right matrix is
    the index reversal of the left one.
    """
    if alpha <= 0:
        raise NonpositiveOrder(f"fractional integral needs alpha > 0, got {alpha}")
    _check_scheme(scheme)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    n, h = grid.n, grid.h
    if scheme == "trapezoid":
        M = _trapezoid_integral(n, h, alpha)
    else:
        M = _grunwald_toeplitz(n, h, alpha, sign=-1.0)
    if side == "right":
        P = _reversal(n)
        M = P @ M @ P
    return OperatorMatrix(
        M, grid=grid, label=f"I^{alpha}[{side}]", scheme=f"{scheme}-integral"
    )


def _causal_difference(n: int, h: float, side: str) -> np.ndarray:
    """One-sided difference quotient: backward for the left side (lower
    bidiagonal), forward for the right side (upper bidiagonal)."""
    D = (np.eye(n) - np.diag(np.ones(n - 1), -1)) / h
    if side == "right":
        return -(_reversal(n) @ D @ _reversal(n))
    return D


def fractional_derivative_matrix(
    grid: Grid, alpha: float, side: str = "left", scheme: str = "trapezoid"
) -> OperatorMatrix:
    """Matrix of the fractional derivative of order alpha >= 0.

    Non-integer orders alpha = l + s with 0 < s < 1 use the composition
    with the order-(1 - s) integral: on the left I^(1-s) (d/dx)^(l+1), on
    the right (-1)^(l+1) I^(1-s) (d/dx)^(l+1), each with one-sided
    difference quotients so the product stays triangular.  Integer orders
    reduce to the central stencils of :func:`diff_matrix` (times (-1)^m on
    the right).  Order zero is the identity.
    """
    if alpha < 0:
        raise ValueError(f"fractional derivative needs alpha >= 0, got {alpha}")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    _check_scheme(scheme)
    n, h = grid.n, grid.h
    label = f"D^{alpha}[{side}]"

    if alpha == int(alpha):
        m = int(alpha)
        if m == 0:
            return OperatorMatrix(np.eye(n), grid=grid, label=label, scheme="identity")
        M = diff_matrix(grid, m).entries
        if side == "right":
            M = (-1) ** m * M
        return OperatorMatrix(M, grid=grid, label=label, scheme="central")

    if scheme == "grunwald":
        M = _grunwald_toeplitz(n, h, alpha, sign=1.0)
        if side == "right":
            P = _reversal(n)
            M = P @ M @ P
        return OperatorMatrix(M, grid=grid, label=label, scheme="grunwald-derivative")

    l = int(np.floor(alpha))
    frac = alpha - l
    inner = np.linalg.matrix_power(_causal_difference(n, h, side), l + 1)
    integral = fractional_integral_matrix(grid, 1.0 - frac, side, scheme="trapezoid").entries
    sign = (-1) ** (l + 1) if side == "right" else 1.0
    return OperatorMatrix(
        sign * integral @ inner, grid=grid, label=label, scheme="composed-trapezoid"
    )


def coercivity_margin(M, gram0: SobolevGram) -> float:
    """Smallest eigenvalue of the pencil (Hermitian part of M, gram0).

    A positive value certifies that the discrete quadratic form of M has a
    positive real part relative to the base norm.
    """
    A = np.asarray(M, dtype=complex)
    G = np.asarray(gram0, dtype=float)
    if A.shape != G.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {G.shape}")
    if np.linalg.eigvalsh(G)[0] <= 0:
        raise SingularGram("gram matrix must be positive definite")
    herm = (A + A.conj().T) / 2
    return float(scipy.linalg.eigh(herm, G, eigvals_only=True)[0])
