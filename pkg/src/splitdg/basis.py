"""Legendre-Gauss-Lobatto nodal basis with the summation-by-parts property.

Nodes, quadrature weights and the collocation derivative matrix on the
reference interval [-1, 1]. The pair (M, D) with diagonal mass matrix
M = diag(weights) satisfies Q + Q^T = B for Q = M D and boundary operator
B = diag(-1, 0, ..., 0, 1), which is what every conservation and entropy
argument downstream leans on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DEGREE = 20


@dataclass(frozen=True)
class PolyBasis:
    """Degree-N Gauss-Lobatto collocation operators on [-1, 1]."""

    degree: int
    nodes: np.ndarray      # (N+1,), strictly increasing, includes -1 and 1
    weights: np.ndarray    # (N+1,), positive, sums to 2
    deriv: np.ndarray      # (N+1, N+1) nodal derivative matrix D
    qmat: np.ndarray       # Q = diag(weights) @ D
    bmat: np.ndarray       # diag(-1, 0, ..., 0, 1)

    @property
    def nnodes(self) -> int:
        return self.degree + 1


def _legendre(n: int, x: np.ndarray):
    """P_n(x) and P_n'(x) via the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev, np.zeros_like(x)
    p = x.copy()
    for k in range(1, n):
        p, p_prev = ((2 * k + 1) * x * p - k * p_prev) / (k + 1), p
    # (1 - x^2) P_n' = n (P_{n-1} - x P_n); endpoints handled by caller
    den = 1.0 - x * x
    interior = np.abs(den) > 1e-30
    dp = np.zeros_like(p)
    np.divide(n * (p_prev - x * p), den, out=dp, where=interior)
    return p, dp


def _lgl_nodes(n: int) -> np.ndarray:
    """Interior LGL nodes are the roots of P_n'; Newton from Chebyshev guesses."""
    nodes = np.empty(n + 1)
    nodes[0], nodes[n] = -1.0, 1.0
    if n == 1:
        return nodes
    x = -np.cos(np.pi * np.arange(1, n) / n)
    for _ in range(100):
        p, dp = _legendre(n, x)
        # d2p from the Legendre ODE: (1-x^2) P'' = 2 x P' - n(n+1) P
        d2p = (2.0 * x * dp - n * (n + 1) * p) / (1.0 - x * x)
        dx = dp / d2p
        x -= dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    nodes[1:n] = x
    # enforce exact symmetry about the origin
    nodes = 0.5 * (nodes - nodes[::-1])
    return nodes


def _barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / diff.prod(axis=1)


def _derivative_matrix(nodes: np.ndarray) -> np.ndarray:
    w = _barycentric_weights(nodes)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    d = (w[None, :] / w[:, None]) / diff
    np.fill_diagonal(d, 0.0)
    # negative-sum trick keeps the row sums exactly consistent
    np.fill_diagonal(d, -d.sum(axis=1))
    return d


def build_basis(degree: int) -> PolyBasis:
    """Construct the degree-N LGL basis, quadrature and SBP operators.

    Raises ValueError for degrees outside 1..MAX_DEGREE.
    """
    if not isinstance(degree, (int, np.integer)) or isinstance(degree, bool):
        raise ValueError(f"polynomial degree must be an integer, got {degree!r}")
    if not 1 <= degree <= MAX_DEGREE:
        raise ValueError(
            f"polynomial degree must be in 1..{MAX_DEGREE}, got {degree}"
        )
    n = int(degree)
    nodes = _lgl_nodes(n)
    p_at_nodes, _ = _legendre(n, nodes)
    weights = 2.0 / (n * (n + 1) * p_at_nodes**2)
    weights = 0.5 * (weights + weights[::-1])
    deriv = _derivative_matrix(nodes)
    qmat = weights[:, None] * deriv
    bmat = np.zeros((n + 1, n + 1))
    bmat[0, 0], bmat[n, n] = -1.0, 1.0
    for arr in (nodes, weights, deriv, qmat, bmat):
        arr.setflags(write=False)
    return PolyBasis(n, nodes, weights, deriv, qmat, bmat)


def differentiate(basis: PolyBasis, values: np.ndarray) -> np.ndarray:
    """Nodal derivative D @ values of the interpolant of `values`."""
    values = np.asarray(values, dtype=float)
    if values.shape != (basis.nnodes,):
        raise ValueError(
            f"expected {basis.nnodes} nodal values, got shape {values.shape}"
        )
    return basis.deriv @ values


def quadrature_integrate(basis: PolyBasis, values: np.ndarray) -> float:
    """Gauss-Lobatto quadrature of nodal values (exact through degree 2N-1)."""
    values = np.asarray(values, dtype=float)
    if values.shape != (basis.nnodes,):
        raise ValueError(
            f"expected {basis.nnodes} nodal values, got shape {values.shape}"
        )
    return float(basis.weights @ values)
