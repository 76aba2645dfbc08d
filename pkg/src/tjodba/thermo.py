"""Thermodynamic limit for parallel boundary fields.

Densities are handled in Fourier space, where the kernels are
``a~_n(w) = exp(-n|w|/2)``.  Every closed form (energy density, boundary
corrections, boundary-string energies) is paired with an independent
quadrature of the corresponding Fourier integral; the closed forms use the
series for ``B_p`` while the quadrature side never does.

Delta functions in the energy functional are applied analytically:
``int f(w) delta(w) dw = f(0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .errors import (DomainError, InvalidOrder, RegimeMismatch, SingularAtHalf, ToleranceNotMet,
                     UndefinedExponents)
from .model import BoundaryFields
from .numerics import QuadratureSpec, integrate_line

LN3_HALF = 0.5 * math.log(3.0)
DEFAULT_QUAD = QuadratureSpec()
DUAL_TOL = 1e-8
HALF_GUARD = 1e-12


# ------------------------------------------------------------------ kernels


def a_kernel(n: float, z: float) -> float:
    """``a_n(z) = n / (2 pi (z^2 + n^2/4))`` for ``n > 0``."""
    if not n > 0:
        raise InvalidOrder(f"a_n needs n > 0, got {n}")
    return n / (2 * math.pi * (z * z + n * n / 4))


def a_tilde(n: float, omega):
    """Fourier transform of ``a_n``: ``sgn(n) exp(-|n||w|/2)``.

    ``a_n(z)`` is odd in ``n``, so a negative order (a boundary exponent of
    the other sign) carries a minus sign.  ``n = 0`` gives zero.
    """
    return np.sign(n) * np.exp(-0.5 * abs(n) * np.abs(omega))


def _sgn(x: float) -> float:
    return float(np.sign(x))


# --------------------------------------------------------------- exponents


@dataclass(frozen=True)
class BoundaryExponents:
    """``c = -xiN/(2|hN|) - 1/2``, ``d = -xi1/(2|h1|) - 1/2`` and ``g = xiN/(2|hN|)``.

    Any of them may be ``None`` when the corresponding field vanishes; reading
    a missing exponent through :meth:`require` raises ``UndefinedExponents``.
    """

    c_bnd: float | None = None
    d_bnd: float | None = None
    g_bnd: float | None = None

    @classmethod
    def from_fields(cls, b: BoundaryFields) -> "BoundaryExponents":
        c = g = d = None
        if b.normN > 0:
            c = -b.xiN / (2 * b.normN) - 0.5
            g = b.xiN / (2 * b.normN)
        if b.norm1 > 0:
            d = -b.xi1 / (2 * b.norm1) - 0.5
        return cls(c, d, g)

    def require(self, *names: str) -> tuple:
        vals = []
        for name in names:
            v = getattr(self, f"{name}_bnd")
            if v is None or not np.isfinite(v):
                raise UndefinedExponents(f"boundary exponent {name} is undefined (zero field)")
            vals.append(float(v))
        return tuple(vals)


# ----------------------------------------------------------------- densities


@dataclass(frozen=True)
class DensitySolution:
    """Fourier-space densities of the ground state with open boundaries.

    ``exps=None`` gives the periodic system (``C = 0``).
    """

    exps: BoundaryExponents | None = None
    N: int = 1

    def C(self, omega):
        if self.exps is None:
            return np.zeros_like(np.asarray(omega, dtype=float))
        c, d = self.exps.require("c", "d")
        a1, a2 = a_tilde(1, omega), a_tilde(2, omega)
        return (a2 + 1 + a1 * (a1 + a_tilde(2 * c, omega) + a_tilde(2 * d, omega) - 1)) / (2 * self.N)

    def rho_tilde(self, omega):
        a1, a2 = a_tilde(1, omega), a_tilde(2, omega)
        return ((a2 + 1) * a1 - self.C(omega)) / (2 * a2 + 1)


def rho_tilde(omega, exps: BoundaryExponents | None, N: int = 1):
    """``rho~(w) = [(a~2 + 1) a~1 - C(w)] / (2 a~2 + 1)``."""
    return DensitySolution(exps, N).rho_tilde(omega)


def _energy_functional(f0: float, f, spec: QuadratureSpec) -> float:
    """``int f(w) [delta(w) - a~1(w)/2] dw`` for an even ``f`` with ``f(0) = f0``."""
    tail = integrate_line(lambda w: f(w) * a_tilde(1, w), spec, symmetric=True)
    return f0 - 0.5 * tail


def _check_dual(a: float, b: float, tol: float, what: str):
    if not abs(a - b) <= tol * max(1.0, abs(a)):
        raise ToleranceNotMet(f"{what}: closed form {a!r} vs quadrature {b!r}")


# ----------------------------------------------------------- periodic system


class PeriodicEnergy(NamedTuple):
    filling: float
    energy_per_site: float
    quadrature: float
    difference: float
    positive_for_positive_t: bool


def periodic_ground_energy(t: float, spec: QuadratureSpec = DEFAULT_QUAD, tol: float = 1e-10) -> PeriodicEnergy:
    """Filling ``rho~(0) = 2/3`` and energy per site ``(-1/3 + ln3/2) t``.

    The closed form is positive for ``t > 0``; it is reproduced as stated and
    the sign is reported through ``positive_for_positive_t``.
    """
    dens = DensitySolution(None)
    filling = float(dens.rho_tilde(0.0))
    closed = (-1.0 / 3.0 + LN3_HALF) * t
    quad = -2 * t * _energy_functional(float(dens.rho_tilde(0.0)), dens.rho_tilde, spec)
    diff = abs(closed - quad)
    if diff > tol * max(1.0, abs(closed)):
        raise ToleranceNotMet(f"periodic energy: closed {closed} vs quadrature {quad}")
    return PeriodicEnergy(filling, closed, quad, diff, closed > 0 if t > 0 else False)


# ------------------------------------------------------------------ B series


class BValue(NamedTuple):
    series: float
    quadrature: float


def _alternating(a, terms: int = 40) -> float:
    """``sum_{k>=0} (-1)^k a(k)`` for a moment sequence (Cohen, Rodriguez Villegas, Zagier)."""
    d = (3 + math.sqrt(8)) ** terms
    d = (d + 1 / d) / 2
    b, c, s = -1.0, -d, 0.0
    for k in range(terms):
        c = b - c
        s += c * a(k)
        b = (k + terms) * (k - terms) * b / ((k + 0.5) * (k + 1))
    return s / d


def b_series(p: float) -> float:
    """``B_p`` from its two-series expansion about ``x = 1/2``.

    ``B_p = sum_n (-1)^n / (2^{p+1}(p+n+1))
          + sum_{n != p} (-1)^n (2^{-n-1} - 2^{-p-1}) / (p-n)
          + [p integer] (-1)^p 2^{-p-1} ln 2``.

    The second series is split into its geometric part (summed directly) and
    ``2^{-p-1} sum_{n != p} (-1)^n/(n-p)``, whose tail is alternating with
    moment coefficients; both alternating tails are accelerated.  The
    ``[p integer]`` term is the limit of the ``n = p`` summand, so the summand
    nearest ``p`` is evaluated directly and stays accurate for near-integer ``p``.
    """
    if not p > -1:
        raise DomainError(f"B_p needs p > -1, got {p}")
    w = 2.0 ** (-p - 1)
    first = w * _alternating(lambda n: 1.0 / (n + p + 1))
    # the term nearest p is kept in its regular combined form; at integer p it
    # becomes (-1)^p 2^{-p-1} ln 2
    ns = int(round(p)) if round(p) >= 0 else None
    if ns is None:
        near, n0 = 0.0, 0
    else:
        y = (p - ns) * math.log(2.0)
        ratio = math.log(2.0) * (1 - y / 2 if abs(y) < 1e-8 else -math.expm1(-y) / y)
        near, n0 = (-1) ** ns * 2.0 ** (-ns - 1) * ratio, ns + 1
    geometric = sum((-1) ** n * 2.0 ** (-n - 1) / (p - n) for n in range(80) if n != ns)
    head = sum((-1) ** n / (n - p) for n in range(n0) if n != ns)
    tail = (-1) ** n0 * _alternating(lambda k: 1.0 / (k + n0 - p))
    return first + near + geometric + w * (head + tail)


def b_quadrature(p: float) -> float:
    """Adaptive quadrature of ``int_0^1 x^p / (2x + 1) dx`` (algebraic endpoint weight)."""
    if not p > -1:
        raise DomainError(f"B_p needs p > -1, got {p}")
    val, err = integrate.quad(lambda x: 1.0 / (2 * x + 1), 0.0, 1.0, weight="alg", wvar=(p, 0.0),
                              epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def b_value(p: float) -> BValue:
    """``B_p = int_0^1 x^p/(2x+1) dx`` by series and by quadrature."""
    return BValue(b_series(p), b_quadrature(p))


def B(p: float) -> float:
    return b_series(p)


# ----------------------------------------------------------- open boundaries


class DualValue(NamedTuple):
    closed_form: float
    quadrature: float
    difference: float
    branch: str


def _boundary_correction_quadrature(exps: BoundaryExponents, t: float, spec: QuadratureSpec,
                                    extra=None) -> float:
    """``2Nt int C(w)/(2a~2+1) [delta - a~1/2] dw`` with an optional extra source in ``2N C``."""
    dens = DensitySolution(exps, N=1)

    def f(w):
        val = 2 * dens.C(w)
        if extra is not None:
            val = val + extra(w)
        return val / (2 * a_tilde(2, w) + 1)

    return t * _energy_functional(float(f(0.0)), f, spec)


def open_ground_energy(exps: BoundaryExponents, t: float, sign_case: str | None = None,
                       spec: QuadratureSpec = DEFAULT_QUAD, tol: float = DUAL_TOL) -> DualValue:
    """Boundary correction ``E_g - E_g^0`` for parallel fields, by closed form and quadrature.

    ``sign_case`` is ``"positive"`` (``c, d > 0``, the ``t > 0`` regime) or
    ``"negative"`` (``c, d < 0``, the ``t < 0`` regime); by default it is read
    off the exponents.
    """
    c, d = exps.require("c", "d")
    if sign_case is None:
        if c > 0 and d > 0:
            sign_case = "positive"
        elif c < 0 and d < 0:
            sign_case = "negative"
        else:
            raise RegimeMismatch("c and d of opposite sign; use surface_energy_parallel")
    if sign_case == "positive":
        if not (c > 0 and d > 0):
            raise RegimeMismatch("positive branch needs c > 0 and d > 0")
        closed = (LN3_HALF - 2.0 / 3.0 - B(c) - B(d)) * t
    elif sign_case == "negative":
        if not (c < 0 and d < 0):
            raise RegimeMismatch("negative branch needs c < 0 and d < 0")
        closed = (LN3_HALF - 2.0 + B(-c) + B(-d)) * t
    else:
        raise ValueError(f"unknown sign case {sign_case!r}")
    quad = _boundary_correction_quadrature(exps, t, spec)
    _check_dual(closed, quad, tol, "open ground energy")
    return DualValue(closed, quad, abs(closed - quad), sign_case)


def _surface_parallel_closed(c: float, d: float, t: float) -> float:
    return (LN3_HALF + (_sgn(c) + _sgn(d) - 4) / 3.0 - _sgn(c) * B(abs(c)) - _sgn(d) * B(abs(d))) * t


def surface_energy_parallel(exps: BoundaryExponents, t: float, spec: QuadratureSpec = DEFAULT_QUAD,
                            tol: float = DUAL_TOL) -> DualValue:
    """``E_surf = (ln3/2) t + [sgn c + sgn d - 4] t/3 - sgn(c) B_|c| t - sgn(d) B_|d| t``."""
    c, d = exps.require("c", "d")
    if c == 0 or d == 0:
        raise UndefinedExponents("c = 0 or d = 0 has no kernel")
    closed = _surface_parallel_closed(c, d, t)
    quad = _boundary_correction_quadrature(exps, t, spec)
    _check_dual(closed, quad, tol, "parallel surface energy")
    return DualValue(closed, quad, abs(closed - quad), "parallel")


class MixedSurface(NamedTuple):
    closed_form: float
    quadrature: float
    difference: float
    literal: float


def surface_energy_mixed(exps: BoundaryExponents, t: float, *, literal: bool = False,
                         spec: QuadratureSpec = DEFAULT_QUAD, tol: float = DUAL_TOL) -> MixedSurface:
    """Surface energy for ``t + xiN = |hN|``, ``t + xi1 = -|h1|``.

    The string-free state carries an extra source ``a~_{2g}(a~2 + 1)`` in
    ``2N C``, which adds ``sgn(g) t [2/3 - B_{|g|-1/2} - B_{|g|+1/2}]`` to the
    parallel expression.  The printed form differs from this by the sign of
    the ``B_|d|`` term; it is returned as ``literal`` (and as the main value
    when ``literal=True``, in which case the dual-route check is skipped).
    """
    c, d, g = exps.require("c", "d", "g")
    if abs(abs(g) - 0.5) < HALF_GUARD:
        raise SingularAtHalf("|g| = 1/2 is excluded")
    if c == 0 or d == 0:
        raise UndefinedExponents("c = 0 or d = 0 has no kernel")
    sg = _sgn(g)
    gterm = sg * (2.0 / 3.0 - B(abs(g) - 0.5) - B(abs(g) + 0.5)) * t
    closed = _surface_parallel_closed(c, d, t) + gterm
    printed = (LN3_HALF + (2 * sg + _sgn(c) + _sgn(d) - 4) / 3.0
               - (_sgn(c) * B(abs(c)) - _sgn(d) * B(abs(d)) + sg * B(abs(g) - 0.5) + sg * B(abs(g) + 0.5))) * t
    extra = lambda w: a_tilde(2 * g, w) * (a_tilde(2, w) + 1)
    quad = _boundary_correction_quadrature(exps, t, spec, extra=extra)
    if literal:
        return MixedSurface(printed, quad, abs(printed - quad), printed)
    _check_dual(closed, quad, tol, "mixed surface energy")
    return MixedSurface(closed, quad, abs(closed - quad), printed)


# ----------------------------------------------------------- boundary string


class StringEnergy(NamedTuple):
    closed_form: float
    quadrature: float
    difference: float
    regime: str


@dataclass(frozen=True)
class BoundaryStringState:
    """A boundary string at ``lambda_0 = g eta`` and its density correction ``A(w)``."""

    g: float

    def __post_init__(self):
        if abs(self.g - 0.5) < HALF_GUARD:
            raise SingularAtHalf("g = 1/2 is excluded")
        if not self.g > 0:
            raise RegimeMismatch("a boundary string needs g > 0")

    @property
    def regime(self) -> str:
        return "g>1/2" if self.g > 0.5 else "0<g<1/2"

    @property
    def lambda0(self) -> complex:
        return 1j * self.g

    def A(self, omega):
        g = self.g
        if g > 0.5:
            return a_tilde(2 * g + 1, omega) - a_tilde(2 * g - 1, omega)
        return a_tilde(1 - 2 * g, omega) + a_tilde(2 * g + 1, omega)


def boundary_string_energy(g: float, t: float, spec: QuadratureSpec = DEFAULT_QUAD,
                           tol: float = DUAL_TOL) -> StringEnergy:
    """Excitation energy of the boundary string relative to the string-free state.

    ``g > 1/2`` requires ``t < 0`` and ``0 < g < 1/2`` requires ``t > 0``.
    """
    state = BoundaryStringState(g)
    if state.regime == "g>1/2":
        if not t < 0:
            raise RegimeMismatch("g > 1/2 belongs to t < 0")
        closed = -2 * t - t / (g * g - 0.25) + t * B(g - 0.5) - t * B(g + 0.5)
    else:
        if not t > 0:
            raise RegimeMismatch("0 < g < 1/2 belongs to t > 0")
        closed = -4.0 / 3.0 * t + t / (0.25 - g * g) - t * B(0.5 - g) - t * B(0.5 + g)
    # -2Nt int d(rho~) [delta - a~1/2] with 2N d(rho~) = -a~1 A / (2 a~2 + 1)
    f = lambda w: a_tilde(1, w) * state.A(w) / (2 * a_tilde(2, w) + 1)
    density_part = t * _energy_functional(float(f(0.0)), f, spec)
    lam0 = state.lambda0
    bare = (-2 * t * (lam0**2 - 0.25) / (lam0**2 + 0.25)).real
    quad = density_part + bare
    _check_dual(closed, quad, tol, "boundary string energy")
    return StringEnergy(closed, quad, abs(closed - quad), state.regime)


def string_scan(gs, t_of_g=None) -> list[tuple[float, float, float]]:
    """``(g, t, Delta E)`` rows; ``t_of_g`` defaults to ``-1`` above ``g = 1/2`` and ``+1`` below."""
    t_of_g = t_of_g or (lambda g: -1.0 if g > 0.5 else 1.0)
    rows = []
    for g in gs:
        if abs(g - 0.5) < HALF_GUARD:
            continue
        t = t_of_g(g)
        rows.append((float(g), float(t), boundary_string_energy(g, t).closed_form))
    return rows
