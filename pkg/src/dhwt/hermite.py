"""Hermite polynomials and the dyadic Hermite wavelet basis on [0, 1).

Polynomial coefficients are kept as exact Python integers; everything that
is evaluated numerically uses float64.  The wavelet atoms are

    h_{n,m}(t) = 2**(k/2) * H*_m(2**(k+1) t - 2n + 1)   on [(n-1)/2**k, n/2**k)

with ``H*_m = H_m / (2**m m! sqrt(pi))``.  Note that this normalisation does
not make the atoms unit-norm; it is kept as is.
"""

from dataclasses import dataclass
from math import factorial, sqrt, pi

import numpy as np
from numpy.polynomial import hermite as _npherm
from numpy.polynomial import legendre as _nplegendre

__all__ = [
    "MAX_DEGREE",
    "WEIGHTS",
    "WaveletBasisSpec",
    "CoeffMatrix",
    "hermite_coeffs",
    "hermite_eval",
    "orthogonality_integral",
    "normalized_hermite",
    "wavelet_basis_eval",
    "basis_vector",
    "quadrature_nodes",
    "expansion_coefficients",
    "project",
    "truncated_reconstruct",
]

MAX_DEGREE = 64
WEIGHTS = ("unit", "gaussian")

# Gauss-Legendre points per quadrature panel (exact to degree 7).
_GL_POINTS = 4

_SQRT_PI = sqrt(pi)


def _check_degree(n):
    if int(n) != n or n < 0:
        raise ValueError(f"degree must be a non-negative integer, got {n!r}")
    if n > MAX_DEGREE:
        raise ValueError(f"degree {n} exceeds the supported maximum {MAX_DEGREE}")
    return int(n)


def hermite_coeffs(n):
    """Exact coefficients of the physicists' Hermite polynomial ``H_n``.

    Coefficients are returned in ascending powers of ``x`` and are built with
    the three-term recurrence ``H_{n+1} = 2x H_n - 2n H_{n-1}``.

    >>> hermite_coeffs(3)
    (0, -12, 0, 8)
    """
    n = _check_degree(n)
    prev, cur = [1], [0, 2]
    if n == 0:
        return tuple(prev)
    for j in range(1, n):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= 2 * j * c
        prev, cur = cur, nxt
    return tuple(cur)


def hermite_eval(n, x):
    """Evaluate ``H_n(x)`` with the floating-point recurrence.

    Works elementwise on arrays; a Python float comes back for scalar input.
    """
    n = _check_degree(n)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 2.0 * x
    for j in range(1, n):
        prev, cur = cur, 2.0 * x * cur - 2.0 * j * prev
    return cur if cur.ndim else float(cur)


def orthogonality_integral(m, n, quad_order):
    """Gauss-Hermite estimate of the weighted inner product of ``H_m`` and ``H_n``.

    ``quad_order`` must be at least ``m + n + 1``.
    """
    m, n = _check_degree(m), _check_degree(n)
    if quad_order < m + n + 1:
        raise ValueError(
            f"quad_order={quad_order} is below the exactness requirement m+n+1={m + n + 1}"
        )
    nodes, weights = _npherm.hermgauss(int(quad_order))
    return float(np.sum(weights * hermite_eval(m, nodes) * hermite_eval(n, nodes)))


def normalized_hermite(m, x):
    m = _check_degree(m)
    scale = 1.0 / (2.0**m * factorial(m) * _SQRT_PI)
    return scale * hermite_eval(m, x)


@dataclass(frozen=True)
class WaveletBasisSpec:
    """Indices of one atom: level ``k``, translation ``n`` in ``[1, 2**k]``,
    degree ``m`` in ``[0, M-1]``."""

    k: int
    n: int
    m: int
    M: int = 64

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"level k must be >= 0, got {self.k}")
        if not 1 <= self.n <= 2**self.k:
            raise ValueError(f"translation n={self.n} outside [1, {2**self.k}]")
        if not 0 <= self.m < self.M:
            raise ValueError(f"degree m={self.m} outside [0, {self.M - 1}]")

    @property
    def support(self):
        return (self.n - 1) / 2**self.k, self.n / 2**self.k


def _atom_on_cell(k, n, m, t):
    # polynomial part, valid on the closed cell
    return 2.0 ** (k / 2) * normalized_hermite(m, 2.0 ** (k + 1) * t - 2 * n + 1)


def wavelet_basis_eval(spec, t):
    lo, hi = spec.support
    t = np.asarray(t, dtype=float)
    inside = (t >= lo) & (t < hi)
    out = np.where(inside, _atom_on_cell(spec.k, spec.n, spec.m, t), 0.0)
    return out if out.ndim else float(out)


def basis_vector(t, k, M):
    """Stack every atom at ``t`` in the order h_{1,0}, ..., h_{1,M-1}, h_{2,0}, ...

    Returns shape ``(2**k * M,) + t.shape``.
    """
    rows = [
        wavelet_basis_eval(WaveletBasisSpec(k, n, m, M), t)
        for n in range(1, 2**k + 1)
        for m in range(M)
    ]
    return np.array(rows, dtype=float)


@dataclass(frozen=True)
class CoeffMatrix:
    """Expansion coefficients, ``entries[n-1, m]`` holding C_{n,m}."""

    entries: np.ndarray
    k: int
    M: int
    weight: str = "unit"

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        if entries.shape != (2**self.k, self.M):
            raise ValueError(
                f"coefficient matrix must be {2**self.k}x{self.M}, got {entries.shape}"
            )
        if not np.all(np.isfinite(entries)):
            raise ValueError("coefficient matrix has non-finite entries")
        if self.weight not in WEIGHTS:
            raise ValueError(f"unknown weight {self.weight!r}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def as_vector(self):
        return self.entries.reshape(-1)


def _default_panels(k):
    return 2 ** (k + 4)


def _check_panels(k, quad_panels):
    if quad_panels is None:
        return _default_panels(k)
    p = int(quad_panels)
    if p != quad_panels or p < _default_panels(k) or p & (p - 1):
        raise ValueError(
            f"quad_panels must be a power of two >= {_default_panels(k)}, got {quad_panels!r}"
        )
    return p


def quadrature_nodes(k, quad_panels=None):
    """Nodes and weights for every support cell, shape ``(2**k, P)``.

    Each cell is split into ``quad_panels`` equal panels carrying a few
    Gauss-Legendre points; no node sits on a cell edge, so jumps of a
    piecewise function at the edges are never sampled.
    """
    panels = _check_panels(k, quad_panels)
    x, w = _nplegendre.leggauss(_GL_POINTS)
    cell = 1.0 / 2**k
    width = cell / panels
    starts = np.arange(2**k)[:, None] * cell + np.arange(panels)[None, :] * width
    nodes = starts[..., None] + (x + 1.0) * (width / 2.0)
    weights = np.broadcast_to(w * (width / 2.0), nodes.shape)
    return nodes.reshape(2**k, -1), weights.reshape(2**k, -1).copy()


def _weight_values(weight, k, n, t):
    if weight == "unit":
        return np.ones_like(t)
    if weight == "gaussian":
        return np.exp(-((2.0 ** (k + 1) * t - 2 * n + 1) ** 2))
    raise ValueError(f"unknown weight {weight!r}, expected one of {WEIGHTS}")


def _cell_terms(f, k, M, weight, quad_panels):
    """Per-cell sampled atoms, weighted quadrature weights and f samples."""
    if M < 1:
        raise ValueError(f"truncation order M must be >= 1, got {M}")
    nodes, qw = quadrature_nodes(k, quad_panels)
    samples = np.asarray(f(nodes), dtype=float)
    if samples.shape != nodes.shape:
        samples = np.broadcast_to(samples, nodes.shape)
    if not np.all(np.isfinite(samples)):
        raise ValueError("function samples contain non-finite values")
    atoms = np.empty((2**k, M, nodes.shape[1]))
    ww = np.empty_like(nodes)
    for i in range(2**k):
        n = i + 1
        ww[i] = qw[i] * _weight_values(weight, k, n, nodes[i])
        for m in range(M):
            atoms[i, m] = _atom_on_cell(k, n, m, nodes[i])
    return atoms, ww, samples


def expansion_coefficients(f, k, M, weight="unit", quad_panels=None):
    """Inner products ``C_{n,m} = int w_n h_{n,m} f dt`` over [0, 1).

    ``f`` is a vectorised callable on [0, 1).  Each integral is taken over
    the support cell of its atom only.
    """
    atoms, ww, samples = _cell_terms(f, k, M, weight, quad_panels)
    entries = np.einsum("imp,ip,ip->im", atoms, ww, samples)
    return CoeffMatrix(entries, k, M, weight)


def project(f, k, M, weight="unit", quad_panels=None):
    """Coefficients of the best approximation of ``f`` in span{h_{n,m}}.

    The atoms are not orthonormal, so the raw inner products are corrected
    by the (block diagonal) Gram matrix of each cell.  Piecewise polynomials
    of degree below ``M`` are reproduced exactly.
    """
    atoms, ww, samples = _cell_terms(f, k, M, weight, quad_panels)
    rhs = np.einsum("imp,ip,ip->im", atoms, ww, samples)
    gram = np.einsum("imp,ilp,ip->iml", atoms, atoms, ww)
    entries = np.linalg.solve(gram, rhs[..., None])[..., 0]
    return CoeffMatrix(entries, k, M, weight)


def truncated_reconstruct(C, t):
    """Evaluate the truncated series ``C^T h(t)``."""
    t = np.asarray(t, dtype=float)
    h = basis_vector(t, C.k, C.M)
    out = np.tensordot(C.as_vector(), h, axes=1)
    return out if out.ndim else float(out)
