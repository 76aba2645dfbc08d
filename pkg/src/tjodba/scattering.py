"""Two-body scattering and boundary reflection matrices of the coordinate Bethe ansatz.

Rapidities and quasi-momenta are related by ``e^{ik} = (lam - i/2)/(lam + i/2)``.
Spin slots are numbered from 0 with slot 0 the leftmost tensor factor; the
particle index ``j`` of :func:`bar_tau` is 0-based as well.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import PoleEncountered, SingularDenominator
from .model import ID2, BoundaryFields, h_dot_sigma
from .numerics import embed_one, embed_two, max_abs_diff

POLE_GUARD = 1e-8

PERMUTATION = np.zeros((4, 4), dtype=complex)
for _a in range(2):
    for _b in range(2):
        PERMUTATION[2 * _a + _b, 2 * _b + _a] = 1.0
ID4 = np.eye(4, dtype=complex)


@dataclass(frozen=True)
class Momentum:
    k: complex
    lam: complex

    @classmethod
    def from_lambda(cls, lam: complex) -> "Momentum":
        return cls(-1j * cmath.log(exp_ik(lam)), complex(lam))

    @classmethod
    def from_k(cls, k: complex) -> "Momentum":
        # lam = (i/2) (1 + e^{ik}) / (1 - e^{ik}) = cot(k/2) / 2
        z = cmath.exp(1j * k)
        if abs(1 - z) < POLE_GUARD:
            raise PoleEncountered("k = 0 maps to lam = infinity")
        return cls(complex(k), 0.5j * (1 + z) / (1 - z))


def exp_ik(lam: complex) -> complex:
    """``e^{ik} = (lam - i/2) / (lam + i/2)``."""
    den = lam + 0.5j
    if abs(den) < POLE_GUARD:
        raise PoleEncountered("lam = -i/2")
    return (lam - 0.5j) / den


def s_matrix(delta: complex) -> np.ndarray:
    """``S(delta) = (delta + i P) / (delta + i)`` on two spin slots."""
    if abs(delta + 1j) < POLE_GUARD:
        raise PoleEncountered(f"S-matrix pole at delta = -i (delta = {delta})")
    return (delta * ID4 + 1j * PERMUTATION) / (delta + 1j)


def _check_den(den: complex, scale: float, what: str):
    if abs(den) < POLE_GUARD * max(1.0, scale):
        raise SingularDenominator(f"{what}: denominator {abs(den):.2e} at a pole")


def _kbar_numerator(t, xi, h, z):
    cos_k = 0.5 * (z + 1 / z)
    sin_k = (z - 1 / z) / 2j
    h2 = float(np.dot(h, h))
    return (t * t + xi * xi - h2 + 2 * xi * t * cos_k) * ID2 - 2j * t * sin_k * h_dot_sigma(h)


def kbar_plus_z(z: complex, b: BoundaryFields) -> np.ndarray:
    """Left-boundary reflection matrix as a function of ``z = e^{ik}`` (any boundary parameters)."""
    t, xi, h = b.t, b.xi1, b.h1
    den = (t + xi * z) ** 2 - b.norm1**2 * z * z
    _check_den(den, t * t + xi * xi + b.norm1**2, "Kbar+")
    return -_kbar_numerator(t, xi, h, z) / den


def kbar_minus_z(z: complex, b: BoundaryFields) -> np.ndarray:
    """Right-boundary reflection matrix as a function of ``z = e^{ik}``."""
    t, xi, h = b.t, b.xiN, b.hN
    den = (t / z + xi) ** 2 - b.normN**2
    _check_den(den, t * t + xi * xi + b.normN**2, "Kbar-")
    return -_kbar_numerator(t, xi, h, z) / den


def kbar_plus_raw(k: complex, b: BoundaryFields) -> np.ndarray:
    return kbar_plus_z(cmath.exp(1j * k), b)


def kbar_minus_raw(k: complex, b: BoundaryFields) -> np.ndarray:
    return kbar_minus_z(cmath.exp(1j * k), b)


def kbar_plus(lam: complex, b: BoundaryFields) -> np.ndarray:
    """Left reflection matrix in the rapidity variable, valid off the integrable manifold too."""
    return kbar_plus_z(exp_ik(lam), b)


def kbar_minus(lam: complex, b: BoundaryFields) -> np.ndarray:
    return kbar_minus_z(exp_ik(lam), b)


def kbar_plus_reduced(lam: complex, b: BoundaryFields) -> np.ndarray:
    """Closed form on the integrable manifold ``(t + xi1)^2 = |h1|^2``."""
    den = (2 * lam - 1j) * (b.xi1 + 2j * lam * (b.t + b.xi1))
    _check_den(den, abs(b.xi1) + abs(b.t), "reduced Kbar+")
    return (2 * lam + 1j) * (b.xi1 * ID2 - 2j * lam * h_dot_sigma(b.h1)) / den


def kbar_minus_reduced(lam: complex, b: BoundaryFields) -> np.ndarray:
    den = (2 * lam + 1j) * (b.xiN + 2j * lam * (b.t + b.xiN))
    _check_den(den, abs(b.xiN) + abs(b.t), "reduced Kbar-")
    return (2 * lam - 1j) * (b.xiN * ID2 - 2j * lam * h_dot_sigma(b.hN)) / den


def reflection_residual(b: BoundaryFields, u1: complex, u2: complex, side: str = "+") -> float:
    """Max-entry residual of the reflection equation for the requested boundary.

    ``S12(u1-u2) K1(u1) S12(u1+u2) K2(u2) = K2(u2) S12(u1+u2) K1(u1) S12(u1-u2)``
    with the rapidity-form reflection matrix; it vanishes iff the boundary
    constraint of that side holds.
    """
    K = {"+": kbar_plus, "-": kbar_minus}[side]
    K1 = np.kron(K(u1, b), ID2)
    K2 = np.kron(ID2, K(u2, b))
    Sm, Sp = s_matrix(u1 - u2), s_matrix(u1 + u2)
    return max_abs_diff(Sm @ K1 @ Sp @ K2, K2 @ Sp @ K1 @ Sm)


def bar_tau(u: complex, roots, j: int, b: BoundaryFields) -> np.ndarray:
    """Ordered product of S- and reflection matrices acting on particle ``j`` (0-based).

    ``S_{j-1,j}(l_{j-1}-u) ... S_{0,j}(l_0-u) K+_j(u) prod_{l != j} S_{j,l}(-u-l_l)
    K-_j(u) S_{M-1,j}(l_{M-1}-u) ... S_{j+1,j}(l_{j+1}-u)``
    """
    lam = np.asarray(roots, dtype=complex)
    M = len(lam)
    if not 0 <= j < M:
        raise IndexError(f"particle index {j} out of range for M={M}")
    out = np.eye(2**M, dtype=complex)
    for l in range(j - 1, -1, -1):
        out = out @ embed_two(s_matrix(lam[l] - u), l, j, M)
    out = out @ embed_one(kbar_plus(u, b), j, M)
    for l in range(M):
        if l != j:
            out = out @ embed_two(s_matrix(-u - lam[l]), j, l, M)
    out = out @ embed_one(kbar_minus(u, b), j, M)
    for l in range(M - 1, j, -1):
        out = out @ embed_two(s_matrix(lam[l] - u), l, j, M)
    return out


def quantization_target(lam: complex, N: int) -> complex:
    """Eigenvalue of ``bar_tau(lam_j)`` required on a Bethe state: ``e^{-2ikN}``."""
    return exp_ik(lam) ** (-2 * N)
