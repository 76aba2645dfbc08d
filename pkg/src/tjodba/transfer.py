"""Inhomogeneous open XXX chain: R-matrix, boundary K-matrices, double-row transfer matrix.

The crossing parameter is fixed to ``eta = i``.  The auxiliary space is the
leftmost tensor factor of every monodromy operator; quantum slots follow in
the order of the inhomogeneities.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateEigenbasis, SingularPrefactor, ToleranceNotMet
from .model import ID2, SIGMA_Y, BoundaryFields, h_dot_sigma
from .numerics import (
    eig_general,
    embed_one,
    embed_two,
    fit_polynomial,
    max_abs_diff,
    partial_trace_first,
    partial_transpose,
    polyval,
)
from .scattering import ID4, PERMUTATION

ETA = 1j
CROSSING_V = -1j * SIGMA_Y


def r_matrix(u: complex, eta: complex = ETA) -> np.ndarray:
    """``R(u) = u + eta P``."""
    return u * ID4 + eta * PERMUTATION


def k_minus(u: complex, b: BoundaryFields) -> np.ndarray:
    """``K^-(u) = p + u hN.sigma``."""
    return b.p * ID2 + u * h_dot_sigma(b.hN)


def k_plus(u: complex, b: BoundaryFields, eta: complex = ETA) -> np.ndarray:
    """``K^+(u) = q - (u + eta) h1.sigma``."""
    return b.q * ID2 - (u + eta) * h_dot_sigma(b.h1)


def identity_residuals(u: complex, v: complex, b: BoundaryFields, eta: complex = ETA) -> dict:
    """Residuals of the Yang-Baxter, reflection, dual reflection and crossing relations.

    ``eta`` only enters the shift of the middle R-matrix of the dual
    reflection equation; passing ``-i`` there is the intended negative control.
    """
    R = r_matrix
    # three slots 0, 0', 1
    R00 = embed_two(R(u - v), 0, 1, 3)
    R01 = embed_two(R(u), 0, 2, 3)
    R11 = embed_two(R(v), 1, 2, 3)
    ybe = max_abs_diff(R00 @ R01 @ R11, R11 @ R01 @ R00)

    K1 = lambda K: np.kron(K, ID2)  # noqa: E731
    K2 = lambda K: np.kron(ID2, K)  # noqa: E731
    Kmu, Kmv = K1(k_minus(u, b)), K2(k_minus(v, b))
    re = max_abs_diff(R(u - v) @ Kmu @ R(u + v) @ Kmv, Kmv @ R(u + v) @ Kmu @ R(u - v))

    Kpu, Kpv = K1(k_plus(u, b)), K2(k_plus(v, b))
    mid = R(-u - v - 2 * eta)
    dre = max_abs_diff(R(v - u) @ Kpu @ mid @ Kpv, Kpv @ mid @ Kpu @ R(v - u))

    V1 = np.kron(CROSSING_V, ID2)
    crossing = max_abs_diff(R(u), V1 @ partial_transpose(R(-u - ETA), (2, 2), 1) @ V1)
    return {"ybe": ybe, "re": re, "dre": dre, "crossing": crossing}


@dataclass(frozen=True)
class TransferMatrix:
    u: complex
    inhomogeneities: tuple
    boundary: BoundaryFields
    matrix: np.ndarray


def double_row_monodromy(u: complex, inhomogeneities, b: BoundaryFields) -> np.ndarray:
    """``R_01(u-l_1)...R_0M(u-l_M) K^-_0(u) R_M0(u+l_M)...R_10(u+l_1)`` on aux (x) quantum space."""
    lam = np.asarray(inhomogeneities, dtype=complex)
    M = len(lam)
    n = M + 1
    T = np.eye(2**n, dtype=complex)
    for l in range(M):
        T = T @ embed_two(r_matrix(u - lam[l]), 0, l + 1, n)
    T = T @ embed_one(k_minus(u, b), 0, n)
    for l in range(M - 1, -1, -1):
        T = T @ embed_two(r_matrix(u + lam[l]), l + 1, 0, n)
    return T


def transfer_matrix(u: complex, inhomogeneities, b: BoundaryFields) -> TransferMatrix:
    """``tau(u) = tr_0 { K^+_0(u) T_0(u) }``."""
    lam = tuple(complex(x) for x in inhomogeneities)
    n = len(lam) + 1
    T = double_row_monodromy(u, lam, b)
    mat = partial_trace_first(embed_one(k_plus(u, b), 0, n) @ T, 2)
    return TransferMatrix(complex(u), lam, b, mat)


def tau_special_point(j: int, inhomogeneities, b: BoundaryFields) -> np.ndarray:
    """``tau(-lam_j)`` assembled from its factorized product form (``j`` 0-based)."""
    lam = np.asarray(inhomogeneities, dtype=complex)
    M = len(lam)
    lj = lam[j]
    # tr_0{K^+_0(-lj) R_0j(-2lj) R_0j(0)} is a single-slot operator
    local = partial_trace_first(np.kron(k_plus(-lj, b), ID2) @ r_matrix(-2 * lj) @ r_matrix(0.0), 2)
    out = np.eye(2**M, dtype=complex)
    for l in range(j - 1, -1, -1):
        out = out @ embed_two(r_matrix(lam[l] - lj), l, j, M)
    out = out @ embed_one(local, j, M)
    for l in range(M):
        if l != j:
            out = out @ embed_two(r_matrix(-lj - lam[l]), j, l, M)
    out = out @ embed_one(k_minus(-lj, b), j, M)
    for l in range(M - 1, j, -1):
        out = out @ embed_two(r_matrix(lam[l] - lj), l, j, M)
    return out


def identification_prefactor(j: int, roots, b: BoundaryFields, eta: complex = ETA, guard: float = 1e-12) -> complex:
    """Scalar ``f_j`` with ``bar_tau(lam_j) = f_j tau(-lam_j)``."""
    lam = np.asarray(roots, dtype=complex)
    lj = lam[j]
    den = 2 * eta * (lj - eta) * (b.p + lj * (b.t + b.xiN)) * (-b.q + lj * (b.t + b.xi1))
    for l, ll in enumerate(lam):
        if l != j:
            den *= (lj - ll - eta) * (lj + ll - eta)
    if abs(den) < guard:
        raise SingularPrefactor(f"identification prefactor singular for particle {j}")
    return 1.0 / den


def identification_residual(j: int, roots, b: BoundaryFields) -> float:
    """``|| bar_tau(lam_j) - f_j tau(-lam_j) ||`` with both sides built independently."""
    from .scattering import bar_tau

    lam = np.asarray(roots, dtype=complex)
    lhs = bar_tau(lam[j], lam, j, b)
    rhs = identification_prefactor(j, lam, b) * transfer_matrix(-lam[j], lam, b).matrix
    return max_abs_diff(lhs, rhs)


def sample_nodes(M: int, count: int | None = None, radius: float = 1.5, eta: complex = ETA) -> np.ndarray:
    """Nodes on a circle centred at ``-eta/2``; the default count is ``2M + 4``."""
    count = 2 * M + 4 if count is None else count
    phase = 0.1234  # keep nodes off the real axis symmetry line
    ang = phase + 2 * np.pi * np.arange(count) / count
    return -eta / 2 + radius * np.exp(1j * ang)


class LambdaSpectrum(NamedTuple):
    polynomials: list  # ascending coefficient arrays, one per eigenstate
    vectors: np.ndarray  # common right eigenvectors (columns)
    fit_residual: float
    leakage: float
    reference: complex


def extract_lambda(
    inhomogeneities,
    b: BoundaryFields,
    nodes=None,
    *,
    reference: complex = 0.3141 + 0.2718j,
    degeneracy_tol: float = 1e-6,
    retries: int = 5,
    leak_tol: float = 1e-8,
    fit_tol: float = 1e-8,
) -> LambdaSpectrum:
    """Eigenvalue polynomials ``Lambda(u)`` of the commuting family ``tau(u)``.

    ``tau`` is diagonalized once at a reference point; its eigenbasis is
    reused at every node (the family commutes), and each diagonal sequence is
    fitted to a polynomial of degree ``2M + 2``.
    """
    lam = tuple(complex(x) for x in inhomogeneities)
    M = len(lam)
    nodes = sample_nodes(M) if nodes is None else np.asarray(nodes, dtype=complex)
    dim = 2**M
    ref = reference
    for attempt in range(retries + 1):
        res = eig_general(transfer_matrix(ref, lam, b).matrix)
        w = res.values
        gaps = np.abs(w[:, None] - w[None, :])
        np.fill_diagonal(gaps, np.inf)
        scale = max(1.0, float(np.max(np.abs(w))))
        if dim == 1 or np.min(gaps) > degeneracy_tol * scale:
            break
        ref = ref * 1.37 + 0.29 - 0.11j * (attempt + 1)
    else:
        raise DegenerateEigenbasis(f"reference spectrum degenerate after {retries} shifts")
    V = res.vectors
    Vinv = np.linalg.inv(V)
    diag = np.empty((len(nodes), dim), dtype=complex)
    leak = 0.0
    for k, u in enumerate(nodes):
        D = Vinv @ transfer_matrix(u, lam, b).matrix @ V
        diag[k] = np.diag(D)
        off = D - np.diag(diag[k])
        leak = max(leak, float(np.max(np.abs(off), initial=0.0)) / max(1.0, float(np.max(np.abs(diag[k])))))
    if leak > leak_tol:
        raise ToleranceNotMet(f"off-diagonal leakage {leak:.2e} in the common eigenbasis")
    polys = []
    worst = 0.0
    for s in range(dim):
        fit = fit_polynomial(list(zip(nodes, diag[:, s])), 2 * M + 2)
        rel = fit.residual / max(1.0, float(np.max(np.abs(diag[:, s]))))
        worst = max(worst, rel)
        polys.append(fit.coefficients)
    if worst > fit_tol:
        raise ToleranceNotMet(f"eigenvalue polynomial fit residual {worst:.2e}")
    return LambdaSpectrum(polys, V, worst, leak, ref)


def functional_relation_rhs(j: int, inhomogeneities, b: BoundaryFields, eta: complex = ETA) -> complex:
    """Right side of ``Lambda(l_j) Lambda(l_j - eta) = ...`` for inhomogeneity ``j``."""
    lam = np.asarray(inhomogeneities, dtype=complex)
    lj = lam[j]
    val = 4 * (lj**2 - eta**2) / (4 * lj**2 - eta**2)
    val *= (b.q**2 - lj**2 * b.norm1**2) * (b.p**2 - lj**2 * b.normN**2)
    for ll in lam:
        val *= ((lj + ll) ** 2 - eta**2) * ((lj - ll) ** 2 - eta**2)
    return val


def lambda_at_zero(inhomogeneities, b: BoundaryFields, eta: complex = ETA) -> complex:
    """``Lambda(0) = 2 p q prod_l [-(l_l - eta)(l_l + eta)]``."""
    val = 2 * b.p * b.q
    for ll in np.asarray(inhomogeneities, dtype=complex):
        val *= -(ll - eta) * (ll + eta)
    return val


def lambda_property_residuals(coef, inhomogeneities, b: BoundaryFields, *, rng=None, n_points: int = 5) -> dict:
    """Absolute residuals of crossing, value at zero, leading coefficient and functional relations."""
    coef = np.asarray(coef, dtype=complex)
    lam = np.asarray(inhomogeneities, dtype=complex)
    M = len(lam)
    rng = np.random.default_rng(7) if rng is None else rng
    u = rng.uniform(-2, 2, n_points) + 1j * rng.uniform(-1, 1, n_points)
    crossing = float(np.max(np.abs(polyval(coef, u) - polyval(coef, -u - ETA))))
    at_zero = abs(complex(polyval(coef, 0.0)) - lambda_at_zero(lam, b))
    padded = np.zeros(2 * M + 3, dtype=complex)
    padded[: min(len(coef), 2 * M + 3)] = coef[: 2 * M + 3]
    leading = abs(padded[2 * M + 2] + 2 * b.dot)
    functional = [
        abs(complex(polyval(coef, lam[j]) * polyval(coef, lam[j] - ETA)) - functional_relation_rhs(j, lam, b))
        for j in range(M)
    ]
    return {
        "crossing": crossing,
        "at_zero": at_zero,
        "leading": leading,
        "functional": max(functional, default=0.0),
        "functional_each": functional,
    }
