"""Grids, difference stencils, Sobolev Gram matrices, and operator assembly.

Everything lives on a uniform lattice of interior points of an interval
(a, b) with homogeneous Dirichlet data: values at and beyond the endpoints
are identically zero, which is how membership in H^k_0 is modelled at
finite dimension.

Assembled operators are plain dense matrices acting on vectors of interior
samples.  The discrete L2 inner product is ``h * <u, v>``, so the bilinear
form of an operator M is ``h * g^H (M f)``; the order-0 Gram matrix is
``h * I`` and carries that weight for the rest of the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import (
    DimensionMismatch,
    NonellipticCoefficient,
    NonpositiveLength,
    OrderTooHigh,
    SignViolation,
    TooFewPoints,
)

__all__ = [
    "Grid",
    "OperatorMatrix",
    "SobolevGram",
    "FractionalTerm",
    "CoefficientSpec",
    "make_grid",
    "diff_matrix",
    "gradient_matrix",
    "sobolev_gram",
    "assemble_elliptic",
    "assemble_highorder",
    "assemble_fractional_sum",
    "assemble_operator_sum",
    "adjoint",
    "required_left_sign",
]


@dataclass(frozen=True)
class Grid:
    """Uniform lattice of n interior points on (a, b)."""

    a: float
    b: float
    n: int

    def __post_init__(self):
        if self.b <= self.a:
            raise NonpositiveLength(f"need b > a, got ({self.a}, {self.b})")
        if self.n < 2:
            raise TooFewPoints(f"need at least 2 interior points, got {self.n}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        """Interior nodes a + h, ..., b - h."""
        return self.a + self.h * np.arange(1, self.n + 1)


def make_grid(a: float, b: float, n: int) -> Grid:
    """Build a uniform Dirichlet grid with spacing h = (b - a) / (n + 1)."""
    return Grid(float(a), float(b), int(n))


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense square matrix standing in for an operator on the grid."""

    entries: np.ndarray
    grid: Grid | None = None
    label: str = ""
    scheme: str = ""

    def __post_init__(self):
        entries = np.asarray(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionMismatch(f"operator matrix must be square, got {entries.shape}")
        if self.grid is not None and entries.shape[0] != self.grid.n:
            raise DimensionMismatch(
                f"matrix size {entries.shape[0]} does not match grid with n={self.grid.n}"
            )
        if not np.all(np.isfinite(entries)):
            raise ValueError("operator matrix contains non-finite entries")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)


@dataclass(frozen=True)
class SobolevGram:
    """Gram matrix of the discrete H^k_0 inner product, trapezoid weight h."""

    order: int
    matrix: np.ndarray
    grid: Grid | None = None

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.matrix
        return self.matrix.astype(dtype)


@dataclass(frozen=True)
class FractionalTerm:
    """One summand ``weight * D^order`` of the fractional perturbation."""

    weight: float
    order: float
    side: str = "left"

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        if self.order < 0:
            raise ValueError(f"fractional order must be >= 0, got {self.order}")


def required_left_sign(order: float) -> int:
    """Sign forced on a left-sided coefficient by the parity of floor(order).

    floor(order) = 2m or 2m - 1 both demand sign (-1)^m.
    """
    return -1 if ((int(np.floor(order)) + 1) // 2) % 2 else 1


@dataclass(frozen=True)
class CoefficientSpec:
    """Validated coefficient bundle for the model operators.

    ``diff_coeffs[j]`` multiplies the order-j derivative pair of the
    high-order operator and must satisfy sign(Re c_j) = (-1)^j for j >= 1
    wherever it is nonzero.  Left-sided fractional weights follow the
    parity rule of :func:`required_left_sign`; right-sided weights must be
    nonnegative.  ``elliptic`` holds strictly positive diffusion samples.
    """

    diff_coeffs: tuple = ()
    frac_terms: tuple = ()
    elliptic: np.ndarray | None = None

    def __post_init__(self):
        for j, c in enumerate(self.diff_coeffs):
            _check_alternating_sign(j, np.atleast_1d(np.asarray(c, dtype=complex)))
        for term in self.frac_terms:
            _check_fractional_sign(term)
        if self.elliptic is not None and np.any(np.asarray(self.elliptic).real <= 0):
            raise NonellipticCoefficient("diffusion samples must be strictly positive")


def _check_alternating_sign(j: int, samples: np.ndarray) -> None:
    if j == 0:
        return
    want = -1 if j % 2 else 1
    if np.any(want * samples.real < 0):
        raise SignViolation(
            f"coefficient c{j} violates the alternating rule sign(Re c_j) = (-1)^j"
        )


def _check_fractional_sign(term: FractionalTerm) -> None:
    if term.weight == 0:
        return
    if term.side == "right":
        if term.weight < 0:
            raise SignViolation("right-sided fractional weights must be nonnegative")
        return
    want = required_left_sign(term.order)
    if np.sign(term.weight) != want:
        raise SignViolation(
            f"left-sided weight for order {term.order} must have sign {want:+d} "
            "(parity rule on the integer part of the order)"
        )


def _max_order(grid: Grid) -> int:
    return (grid.n + 1) // 2


def _second_difference(grid: Grid) -> np.ndarray:
    """Dirichlet 3-point stencil for d^2/dx^2: tridiag(1, -2, 1) / h^2."""
    n, h = grid.n, grid.h
    return (
        np.diag(-2.0 * np.ones(n)) + np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)
    ) / h**2


def _centered_difference(grid: Grid) -> np.ndarray:
    n, h = grid.n, grid.h
    return (np.diag(np.ones(n - 1), 1) - np.diag(np.ones(n - 1), -1)) / (2.0 * h)


def diff_matrix(grid: Grid, order: int) -> OperatorMatrix:
    """Central-difference approximation of d^order/dx^order.

    Order 1 is the centered stencil, order 2 the 3-point stencil; higher
    orders are built by composition (one centered factor for odd orders).
    Values outside the interior are taken as zero.
    """
    order = int(order)
    if order < 1:
        raise ValueError(f"derivative order must be >= 1, got {order}")
    if order > _max_order(grid):
        raise OrderTooHigh(f"order {order} stencil does not fit on a grid with n={grid.n}")
    half, rem = divmod(order, 2)
    out = np.linalg.matrix_power(_second_difference(grid), half)
    if rem:
        out = _centered_difference(grid) @ out
    return OperatorMatrix(out, grid=grid, label=f"d^{order}", scheme="central")


def gradient_matrix(grid: Grid) -> np.ndarray:
    """Edge-difference matrix G of shape (n+1, n) with zero boundary values.

    Row k holds (f_{k+1} - f_k)/h on the edge between consecutive nodes, so
    G^T G is exactly the Dirichlet second-difference stencil.  This is the
    first-derivative factor used by the Galerkin assemblies.
    """
    n, h = grid.n, grid.h
    G = np.zeros((n + 1, n))
    idx = np.arange(n)
    G[idx, idx] = 1.0
    G[idx + 1, idx] = -1.0
    return G / h


def _edge_samples(samples: np.ndarray, n: int) -> np.ndarray:
    """Extend n node samples to the n+1 edges (nearest node to the right,
    clipped); first-order coefficient error, accepted by design."""
    return samples[np.minimum(np.arange(n + 1), n - 1)]


def sobolev_gram(grid: Grid, k: int) -> SobolevGram:
    """Gram matrix of the full H^k_0 inner product with weight h.

    The derivative energy of order j is the j-th power of the Dirichlet
    second-difference stencil (the Galerkin energies G^T G compose to
    exactly those powers), so the Gram shares the sine eigenbasis of the
    constant-coefficient assemblies.  k = 0 gives h * I, hence the Gram of
    order k dominates the order-0 Gram entrywise as quadratic forms.
    """
    k = int(k)
    if k < 0:
        raise ValueError(f"Sobolev order must be >= 0, got {k}")
    if k > _max_order(grid):
        raise OrderTooHigh(f"Sobolev order {k} does not fit on a grid with n={grid.n}")
    n = grid.n
    lap = -_second_difference(grid)
    acc = np.eye(n)
    power = np.eye(n)
    for _ in range(k):
        power = power @ lap
        acc = acc + power
    matrix = grid.h * 0.5 * (acc + acc.T)  # symmetrize away roundoff
    return SobolevGram(order=k, matrix=matrix, grid=grid)


def assemble_elliptic(grid: Grid, a_samples) -> OperatorMatrix:
    """Galerkin matrix of -(a(x) f')' with Dirichlet data: G^T diag(a) G.

    For a == 1 this is exactly the (2, -1) Dirichlet stencil over h^2.
    """
    a = np.broadcast_to(np.asarray(a_samples, dtype=float), (grid.n,)).copy()
    if np.any(a <= 0):
        raise NonellipticCoefficient("diffusion samples must be strictly positive")
    G = gradient_matrix(grid)
    M = G.T @ np.diag(_edge_samples(a, grid.n)) @ G
    return OperatorMatrix(M.astype(complex), grid=grid, label="elliptic", scheme="galerkin")


def _derivative_factor(grid: Grid, j: int) -> np.ndarray:
    """Galerkin factor for the order-j derivative: gradient on top of
    second-difference powers, so the j = 1 factor squares to the Laplacian."""
    half, rem = divmod(j, 2)
    D = np.linalg.matrix_power(_second_difference(grid), half)
    if rem:
        D = gradient_matrix(grid) @ D
    return D


def assemble_highorder(grid: Grid, diff_coeffs: Sequence) -> OperatorMatrix:
    """Galerkin assembly of sum_j (c_j f^(j))^(j).

    ``diff_coeffs[j]`` is a scalar or an array of node samples for c_j.
    The matrix is sum_j (-1)^j D_j^T diag(c_j) D_j, which makes the real
    part of the discrete form equal sum_j |Re c_j| ||D_j f||^2 under the
    alternating sign rule, i.e. the assembly preserves coercivity.
    """
    n = grid.n
    k = len(diff_coeffs) - 1
    if k < 0:
        raise ValueError("need at least the order-0 coefficient")
    if k > _max_order(grid):
        raise OrderTooHigh(f"operator order {k} does not fit on a grid with n={grid.n}")
    M = np.zeros((n, n), dtype=complex)
    for j, c in enumerate(diff_coeffs):
        samples = np.broadcast_to(np.asarray(c, dtype=complex), (n,)).copy()
        _check_alternating_sign(j, samples)
        if not np.any(samples):
            continue
        if j == 0:
            M += np.diag(samples)
            continue
        D = _derivative_factor(grid, j)
        placed = samples if D.shape[0] == n else _edge_samples(samples, n)
        M += (-1) ** j * D.T @ np.diag(placed) @ D
    return OperatorMatrix(M, grid=grid, label=f"highorder[k={k}]", scheme="galerkin")


def assemble_fractional_sum(
    grid: Grid, terms: Sequence[FractionalTerm], scheme: str = "trapezoid"
) -> OperatorMatrix:
    """Weighted sum of one-sided fractional derivative matrices.

    Left-sided weights must respect the parity sign rule, right-sided
    weights must be nonnegative; zero weights are skipped.
    """
    from .fracops import fractional_derivative_matrix

    n = grid.n
    M = np.zeros((n, n), dtype=complex)
    tags = []
    for term in terms:
        _check_fractional_sign(term)
        if term.weight == 0:
            continue
        D = fractional_derivative_matrix(grid, term.order, term.side, scheme=scheme)
        M += term.weight * D.entries
        tags.append(f"{term.weight:+g}*D^{term.order}[{term.side}]")
    return OperatorMatrix(
        M, grid=grid, label="fractional[" + ", ".join(tags) + "]", scheme=scheme
    )


def assemble_operator_sum(main: OperatorMatrix, perturbation: OperatorMatrix) -> OperatorMatrix:
    """Sum of the main part and the perturbation on a shared grid."""
    if main.n != perturbation.n or (
        main.grid is not None
        and perturbation.grid is not None
        and main.grid != perturbation.grid
    ):
        raise DimensionMismatch("operands must share the grid and the dimension")
    return OperatorMatrix(
        main.entries + perturbation.entries,
        grid=main.grid or perturbation.grid,
        label=f"({main.label})+({perturbation.label})",
        scheme=main.scheme,
    )


def adjoint(op: OperatorMatrix) -> OperatorMatrix:
    """Conjugate transpose.

    The discrete inner product carries a scalar weight h only, so the
    matrix adjoint is exact; domains coincide at finite dimension, hence
    this also plays the role of the formal adjoint.
    """
    return OperatorMatrix(
        op.entries.conj().T, grid=op.grid, label=f"adj({op.label})", scheme=op.scheme
    )
