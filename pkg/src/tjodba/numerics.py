"""Dense linear algebra, quadrature and polynomial fitting used throughout the package.

Matrices are plain complex :class:`numpy.ndarray` objects.  Every identity check
goes through :func:`max_abs_diff` with an explicit tolerance; nothing is ever
compared exactly.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
import scipy.integrate
import scipy.linalg

from .errors import ConvergenceFailure, NotHermitian, RankDeficient, ToleranceNotMet

__all__ = [
    "as_matrix",
    "max_abs_diff",
    "kron",
    "partial_trace_first",
    "partial_transpose",
    "eig_hermitian",
    "eig_general",
    "EigResult",
    "QuadratureSpec",
    "integrate_line",
    "fit_polynomial",
    "PolyFit",
    "polyval",
    "embed_one",
    "embed_two",
]


def as_matrix(a, *, square: bool = True) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def max_abs_diff(a, b) -> float:
    """Max-entry norm of ``a - b``."""
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))


def kron(*ops) -> np.ndarray:
    """Kronecker product of one or more matrices, leftmost factor first."""
    if not ops:
        return np.ones((1, 1), dtype=complex)
    return functools.reduce(np.kron, [np.asarray(o, dtype=complex) for o in ops])


def partial_trace_first(m, dim_first: int) -> np.ndarray:
    """Trace out the leftmost tensor factor of dimension ``dim_first``."""
    m = as_matrix(m)
    rest = m.shape[0] // dim_first
    if rest * dim_first != m.shape[0]:
        raise ValueError("dimension does not factor")
    return np.einsum("aiaj->ij", m.reshape(dim_first, rest, dim_first, rest))


def partial_transpose(m, dims: Sequence[int], slot: int) -> np.ndarray:
    """Transpose the tensor factor ``slot`` of an operator on ``prod(dims)``."""
    m = as_matrix(m)
    n = len(dims)
    t = m.reshape(tuple(dims) + tuple(dims))
    axes = list(range(2 * n))
    axes[slot], axes[n + slot] = axes[n + slot], axes[slot]
    return t.transpose(axes).reshape(m.shape)


def eig_hermitian(h, *, herm_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Raises
    ------
    NotHermitian
        If ``max |H - H^dagger|`` exceeds `herm_tol`.
    """
    h = as_matrix(h)
    if h.size == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=complex)
    dev = max_abs_diff(h, h.conj().T)
    if dev > herm_tol:
        raise NotHermitian(f"max |H - H^dagger| = {dev:.3e} exceeds {herm_tol:.1e}")
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return w, v


class EigResult(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray
    possibly_defective: bool


def eig_general(a, *, defect_cond: float = 1e8) -> EigResult:
    """Eigenvalues and right eigenvectors of a general square matrix.

    The result is flagged ``possibly_defective`` when the eigenvector matrix
    is numerically singular (condition number above `defect_cond`).
    """
    a = as_matrix(a)
    if not np.all(np.isfinite(a)):
        raise ConvergenceFailure("matrix has non-finite entries")
    try:
        w, v = scipy.linalg.eig(a)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise ConvergenceFailure(str(exc)) from exc
    cond = np.linalg.cond(v) if v.size else 1.0
    return EigResult(w, v, bool(not np.isfinite(cond) or cond > defect_cond))


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-11
    rel_tol: float = 1e-11
    half_width: float = 80.0
    max_subdivisions: int = 400

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")


def integrate_line(
    f: Callable[[float], float],
    spec: QuadratureSpec = QuadratureSpec(),
    *,
    symmetric: bool = False,
) -> float:
    """Integral of ``f`` over the real line, truncated to ``[-W, W]``.

    The integrands of interest are built from ``exp(-n|w|/2)`` and have a kink
    at the origin, so the two half-lines are integrated separately.  With
    ``symmetric=True`` the integrand is assumed even and ``2 * int_0^W`` is
    returned.
    """
    W = spec.half_width
    pieces = [(0.0, W)] if symmetric else [(-W, 0.0), (0.0, W)]
    total = 0.0
    err = 0.0
    for lo, hi in pieces:
        val, est = scipy.integrate.quad(
            f, lo, hi, epsabs=spec.abs_tol / 4, epsrel=spec.rel_tol / 4, limit=spec.max_subdivisions
        )
        total += val
        err += est
    if symmetric:
        total *= 2.0
        err *= 2.0
    if err > max(spec.abs_tol, spec.rel_tol * abs(total)):
        raise ToleranceNotMet(f"quadrature error estimate {err:.2e} above tolerance")
    return float(total)


class PolyFit(NamedTuple):
    coefficients: np.ndarray  # ascending powers
    residual: float  # max |p(u_k) - value_k| over the nodes


def fit_polynomial(points: Sequence[tuple[complex, complex]], degree: int, *, node_tol: float = 1e-12) -> PolyFit:
    """Least-squares polynomial through ``(u, value)`` pairs, coefficients ascending.

    With exactly ``degree + 1`` nodes this is interpolation.  Nodes closer than
    `node_tol` count as coincident.
    """
    u = np.array([p[0] for p in points], dtype=complex)
    y = np.array([p[1] for p in points], dtype=complex)
    distinct = []
    for x in u:
        if all(abs(x - d) > node_tol for d in distinct):
            distinct.append(x)
    if len(distinct) < degree + 1:
        raise RankDeficient(f"{len(distinct)} distinct nodes cannot fix a degree-{degree} polynomial")
    # column scaling keeps the Vandermonde system well conditioned for |u| ~ 1
    scale = max(1.0, float(np.max(np.abs(u))))
    V = np.vander(u / scale, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(V, y, rcond=None)
    coef = coef / scale ** np.arange(degree + 1)
    resid = float(np.max(np.abs(polyval(coef, u) - y), initial=0.0))
    return PolyFit(coef, resid)


def polyval(coef, u):
    """Evaluate ascending-order coefficients at ``u`` (Horner)."""
    u = np.asarray(u, dtype=complex)
    out = np.zeros_like(u)
    for c in np.asarray(coef)[::-1]:
        out = out * u + c
    return out


@functools.lru_cache(maxsize=256)
def _two_slot_perm(a: int, b: int, n: int) -> np.ndarray:
    # basis index in the (a, b, rest...) ordering for each natural-order index
    rest = [k for k in range(n) if k not in (a, b)]
    order = [a, b] + rest
    idx = np.arange(2**n).reshape((2,) * n)
    return idx.transpose(order).reshape(-1)


def embed_one(op, slot: int, n: int) -> np.ndarray:
    """Single-slot 2x2 operator acting on ``slot`` of ``n`` spin-1/2 slots (slot 0 leftmost)."""
    left = np.eye(2**slot)
    right = np.eye(2 ** (n - slot - 1))
    return np.kron(np.kron(left, np.asarray(op, dtype=complex)), right)


def embed_two(op, a: int, b: int, n: int) -> np.ndarray:
    """4x4 operator on slots ``(a, b)`` of ``n`` slots; its first tensor index acts on ``a``."""
    if a == b:
        raise ValueError("slots must differ")
    perm = _two_slot_perm(a, b, n)
    big = np.kron(np.asarray(op, dtype=complex), np.eye(2 ** (n - 2)))
    out = np.empty_like(big)
    out[np.ix_(perm, perm)] = big
    return out
