"""T-Q relations, Bethe-ansatz equations and their numerical solution.

Three cases are handled:

* ``"even"``: unparallel fields, even ``M``; ``M`` auxiliary roots ``mu``.
* ``"odd"``: unparallel fields, odd ``M``; ``M + 1`` auxiliary roots ``mu``.
* ``"parallel"``: collinear fields; ``m <= M`` roots ``gamma`` and no
  inhomogeneous term.

The solver works in three stages.  Stage A finds the rapidities ``lam`` alone
by following one eigenvalue branch of the transfer matrix (whose
inhomogeneities are the rapidities themselves) and imposing the quantization
condition.  Stage B recovers the auxiliary roots with ``lam`` frozen.  Stage C
polishes the joint system with the compiled (or pure-Python) kernel.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ComplexEnergy, ConvergenceFailure, NoConvergence, PoleEncountered
from .model import BoundaryFields, build_hamiltonian, ed_spectrum
from .numerics import eig_general, fit_polynomial, polyval
from .scattering import exp_ik
from .transfer import (ETA, extract_lambda, identification_prefactor, lambda_property_residuals,
                       transfer_matrix)

EVEN, ODD, PARALLEL = "even", "odd", "parallel"
CASES = (EVEN, ODD, PARALLEL)
_KERNEL_CASE = {EVEN: kernels.EVEN, ODD: kernels.ODD, PARALLEL: kernels.PARALLEL}

POLE_RADIUS = 1e-10
ROOT_SEPARATION = 1e-6
REFERENCE_POINT = 0.4137 + 0.2291j


def case_for(M: int, b: BoundaryFields) -> str:
    """Natural case for a sector: parallel for collinear fields, else by parity of ``M``."""
    if b.collinear:
        return PARALLEL
    return EVEN if M % 2 == 0 else ODD


def kernel_params(b: BoundaryFields) -> tuple:
    """Constants consumed by the kernel: ``(p, q, sgn|hN|, |h1|, t+xiN, t+xi1, c)``."""
    return (
        complex(b.p),
        complex(b.q),
        complex(b.sgn_dot * b.normN),
        complex(b.norm1),
        complex(b.t + b.xiN),
        complex(b.t + b.xi1),
        complex(b.c_inhom),
    )


@dataclass(frozen=True)
class BetheRoots:
    """A root set: rapidities ``lam`` and auxiliary roots ``aux`` (``mu`` or ``gamma``)."""

    case: str
    lam: np.ndarray
    aux: np.ndarray
    residual: float = float("nan")

    def __post_init__(self):
        if self.case not in CASES:
            raise ValueError(f"unknown case {self.case!r}")
        object.__setattr__(self, "lam", np.atleast_1d(np.asarray(self.lam, dtype=complex)))
        object.__setattr__(self, "aux", np.atleast_1d(np.asarray(self.aux, dtype=complex)))

    @property
    def M(self) -> int:
        return len(self.lam)

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.lam, self.aux])

    def with_residual(self, residual: float) -> "BetheRoots":
        return BetheRoots(self.case, self.lam, self.aux, float(residual))


# --------------------------------------------------------------------------- T-Q


@dataclass(frozen=True)
class TQProfile:
    """The functions entering the T-Q relation for a given root set."""

    case: str
    lam: np.ndarray
    aux: np.ndarray
    b: BoundaryFields
    eta: complex = ETA
    c: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "lam", np.asarray(self.lam, dtype=complex))
        object.__setattr__(self, "aux", np.asarray(self.aux, dtype=complex))
        object.__setattr__(self, "c", 0.0 if self.case == PARALLEL else self.b.c_inhom)

    @classmethod
    def from_roots(cls, roots: BetheRoots, b: BoundaryFields) -> "TQProfile":
        return cls(roots.case, roots.lam, roots.aux, b)

    def A(self, u: complex) -> complex:
        eta = self.eta
        return complex(np.prod((u - self.lam + eta) * (u + self.lam + eta)))

    def a(self, u: complex) -> complex:
        b, eta = self.b, self.eta
        pref = (2 * u + 2 * eta) / (2 * u + eta)
        return pref * (b.p + u * b.sgn_dot * b.normN) * (b.q - u * b.norm1) * self.A(u)

    def d(self, u: complex) -> complex:
        return self.a(-u - self.eta)

    def Q1(self, u: complex) -> complex:
        if self.case == PARALLEL:
            return complex(np.prod((u - self.aux) * (u + self.aux + self.eta)))
        return complex(np.prod(u - self.aux))

    def Q2(self, u: complex) -> complex:
        return self.Q1(-u - self.eta)

    def poles(self) -> np.ndarray:
        """Zeros of the Q denominators and of the ``2u + eta`` factor of ``a``."""
        zs = [self.aux, -self.aux - self.eta, np.array([-self.eta / 2])]
        return np.concatenate(zs)


def tq_lambda(u: complex, roots: BetheRoots | TQProfile, b: BoundaryFields | None = None) -> complex:
    """Transfer-matrix eigenvalue ``Lambda(u)`` from the T-Q ansatz."""
    prof = roots if isinstance(roots, TQProfile) else TQProfile.from_roots(roots, b)
    u = complex(u)
    if np.min(np.abs(prof.poles() - u)) < POLE_RADIUS:
        raise PoleEncountered(f"u = {u} sits on a T-Q denominator zero")
    eta = prof.eta
    q1, q2 = prof.Q1(u), prof.Q2(u)
    if prof.case == PARALLEL:
        return prof.a(u) * prof.Q1(u - eta) / q1 + prof.d(u) * prof.Q1(u + eta) / q1
    val = prof.a(u) * prof.Q1(u - eta) / q2 + prof.d(u) * prof.Q2(u + eta) / q1
    inhom = prof.c * prof.A(u) * prof.A(-u - eta) / (q1 * q2)
    if prof.case == EVEN:
        inhom *= u * (u + eta)
    else:
        inhom *= (u * (u + eta)) ** 2
    return val + inhom


# --------------------------------------------------------------------------- BAE


def bae_system(roots: BetheRoots, b: BoundaryFields, N: int):
    """Cleared residuals ``g``, their scales ``|T1| + |T2|`` and the Jacobian."""
    return kernels.bae_system(_KERNEL_CASE[roots.case], roots.vector, roots.M, kernel_params(b), N)


def _pole_check(roots: BetheRoots, b: BoundaryFields):
    lam = roots.lam
    eta = ETA
    bad = np.concatenate([np.abs(2 * lam - eta), np.abs(2 * lam + eta),
                          np.abs(b.p + lam * (b.t + b.xiN)), np.abs(b.q - lam * (b.t + b.xi1))])
    if bad.size and np.min(bad) < POLE_RADIUS:
        raise PoleEncountered("a rapidity sits on a pole of its momentum equation")


def bae_residual(roots: BetheRoots, b: BoundaryFields, N: int) -> np.ndarray:
    """Relative residual per equation, ``|T1 - T2| / (|T1| + |T2|)``.

    Rows ``0..M-1`` are the momentum equations, the remaining rows are the
    auxiliary equations.
    """
    _pole_check(roots, b)
    g, scale, _ = bae_system(roots, b, N)
    return np.abs(g) / np.where(scale > 0, scale, 1.0)


def energy_from_roots(roots: BetheRoots | np.ndarray, t: float, tol: float = 1e-8) -> float:
    """``E = -2t sum_j (lam_j^2 - 1/4) / (lam_j^2 + 1/4)``."""
    lam = roots.lam if isinstance(roots, BetheRoots) else np.asarray(roots, dtype=complex)
    if lam.size and np.min(np.abs(lam**2 + 0.25)) < POLE_RADIUS:
        raise PoleEncountered("rapidity at +-i/2")
    e = complex(np.sum(-2 * t * (lam**2 - 0.25) / (lam**2 + 0.25)))
    if abs(e.imag) > tol * max(1.0, abs(e.real)):
        raise ComplexEnergy(f"energy has imaginary part {e.imag:.3e}")
    return e.real


# ---------------------------------------------------------------------- solver


@dataclass(frozen=True)
class SolverOptions:
    newton_tol: float = 1e-12
    accept_tol: float = 1e-10
    max_iter: int = 200
    max_halvings: int = 30
    lam_iter: int = 60
    aux_starts: int = 8
    jitter: float = 0.01
    max_lambda_seeds: int | None = None
    fd_step: float = 1e-7
    max_rapidity: float = 1e4
    default_seeds: bool = True


@dataclass
class SolveResult:
    """Converged, filtered and deduplicated root sets plus per-seed failures."""

    case: str
    N: int
    M: int
    solutions: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    seeds_tried: int = 0

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self):
        return len(self.solutions)

    def __getitem__(self, i):
        return self.solutions[i]

    def energies(self, t: float) -> np.ndarray:
        return np.array(sorted(energy_from_roots(r, t) for r in self.solutions))


def _damped_newton(fun, z0, *, tol, max_iter, max_halvings):
    """Damped Newton on ``fun(z) -> (g, scale, jac)``; returns ``(z, relative residual)``."""
    z = np.array(z0, dtype=complex)

    def measure(zz):
        g, s, J = fun(zz)
        s = np.where(s > 0, s, 1.0)
        return g / s, J / s[:, None]

    try:
        r, J = measure(z)
    except (ZeroDivisionError, FloatingPointError, PoleEncountered):
        return z, np.inf
    res = float(np.linalg.norm(r))
    for _ in range(max_iter):
        if not np.isfinite(res) or res < tol:
            break
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(J, -r, rcond=None)[0]
        alpha = 1.0
        for _ in range(max_halvings):
            zn = z + alpha * step
            rn, Jn = measure(zn)
            resn = float(np.linalg.norm(rn))
            if np.isfinite(resn) and resn < res:
                break
            alpha *= 0.5
        else:
            break
        if res - resn < 1e-3 * res and resn > 1e3 * tol and alpha < 1e-6:
            break
        z, r, J, res = zn, rn, Jn, resn
    return z, res


class _Branch:
    """Quantization residual of one eigenvalue branch of the transfer matrix."""

    def __init__(self, b: BoundaryFields, N: int, M: int, reference: complex = REFERENCE_POINT):
        self.b, self.N, self.M, self.ref = b, N, M, reference

    def eigvec(self, lam, previous=None, index: int = 0):
        res = eig_general(transfer_matrix(self.ref, lam, self.b).matrix)
        V = res.vectors
        if previous is None:
            k = index % V.shape[1]
        else:
            overlap = np.abs(V.conj().T @ previous) / np.linalg.norm(V, axis=0)
            k = int(np.argmax(overlap))
        Vinv = np.linalg.inv(V)
        return V[:, k], Vinv[k]

    def eigenvalue(self, u, lam, right, left) -> complex:
        return complex(left @ transfer_matrix(u, lam, self.b).matrix @ right)

    def residual(self, lam, previous=None, index: int = 0):
        right, left = self.eigvec(lam, previous, index)
        out = np.empty(self.M, dtype=complex)
        for j in range(self.M):
            pref = identification_prefactor(j, lam, self.b)
            out[j] = pref * self.eigenvalue(-lam[j], lam, right, left) * exp_ik(lam[j]) ** (2 * self.N) - 1
        return out, right, left


def lambda_candidates(N: int, b: BoundaryFields) -> np.ndarray:
    """Free-chain rapidities on two momentum grids, boundary pole points and ``i``, upper half-plane."""
    ks = [n * np.pi / (N + 1) for n in range(1, N + 1)]
    ks += [(n - 0.5) * np.pi / (N + 1) for n in range(1, N + 2)]
    cands = [0.5 / np.tan(k / 2) for k in ks]
    for num, den in ((b.xi1, 2 * (b.t + b.xi1)), (b.xiN, 2 * (b.t + b.xiN)),
                     (b.xi1, 2 * b.norm1), (b.xiN, 2 * b.normN)):
        if abs(den) > 1e-9:
            cands.append(1j * num / den)
    # a generic point on the imaginary axis for boundary bound states
    cands.append(1j)
    cands = np.array(cands, dtype=complex)
    cands = np.where(cands.imag < 0, -cands, cands)
    # pole points that land on eta/2 itself are moved off the pole
    cands = np.where(np.abs(cands - ETA / 2) < 1e-6, 1.2 * cands, cands)
    keep = []
    for c in cands:
        if all(abs(c - k) > 1e-6 for k in keep) and abs(c) > 1e-6 and abs(c - ETA / 2) > 1e-6:
            keep.append(c)
    return np.array(keep)


def canonical_lambda(lam) -> np.ndarray:
    """Each rapidity up to sign (right half-plane, or upper imaginary axis), sorted."""
    lam = np.asarray(lam, dtype=complex).copy()
    flip = (lam.real < -1e-9) | ((np.abs(lam.real) <= 1e-9) & (lam.imag < 0))
    lam[flip] = -lam[flip]
    order = np.lexsort((np.round(lam.imag, 8), np.round(lam.real, 8)))
    return lam[order]


def _lambda_ok(lam, b: BoundaryFields, sep: float = ROOT_SEPARATION) -> bool:
    if np.any(np.abs(lam) < sep) or np.any(np.abs(2 * lam - ETA) < sep) or np.any(np.abs(2 * lam + ETA) < sep):
        return False
    if np.any(np.abs(b.p + lam * (b.t + b.xiN)) < sep) or np.any(np.abs(b.q - lam * (b.t + b.xi1)) < sep):
        return False
    for i, j in itertools.combinations(range(len(lam)), 2):
        if abs(lam[i] - lam[j]) < sep or abs(lam[i] + lam[j]) < sep:
            return False
    return True


def _aux_ok(case: str, aux, sep: float = ROOT_SEPARATION) -> bool:
    for i, j in itertools.combinations(range(len(aux)), 2):
        if abs(aux[i] - aux[j]) < sep:
            return False
        if case == PARALLEL and abs(aux[i] + aux[j] + ETA) < sep:
            return False
    if case == PARALLEL and np.any(np.abs(2 * aux + ETA) < sep):
        return False
    return True


def canonical_gamma(gamma) -> np.ndarray:
    """Representative of each pair ``{gamma, -gamma - eta}`` with ``Re >= 0``."""
    g = np.asarray(gamma, dtype=complex).copy()
    alt = -g - ETA
    flip = (g.real < -1e-9) | ((np.abs(g.real) <= 1e-9) & (g.imag < alt.imag))
    g[flip] = alt[flip]
    return g[np.lexsort((np.round(g.imag, 8), np.round(g.real, 8)))]


def _stage_a(branch: _Branch, lam0, index: int, opts: SolverOptions):
    """Newton on the quantization residual of a fixed eigenbranch."""
    M = branch.M
    lam = np.array(lam0, dtype=complex)
    g, right, _ = branch.residual(lam, None, index)
    res = float(np.linalg.norm(g))
    h = opts.fd_step
    for _ in range(opts.lam_iter):
        if not np.isfinite(res) or res < opts.newton_tol or np.max(np.abs(lam)) > opts.max_rapidity:
            break
        J = np.empty((M, M), dtype=complex)
        for i in range(M):
            dz = np.zeros(M, dtype=complex)
            dz[i] = h
            J[:, i] = (branch.residual(lam + dz, right)[0] - g) / h
        step = np.linalg.solve(J, -g)
        alpha = 1.0
        for _ in range(opts.max_halvings):
            gn, rn, _ = branch.residual(lam + alpha * step, right)
            resn = float(np.linalg.norm(gn))
            if np.isfinite(resn) and resn < res:
                break
            alpha *= 0.5
        else:
            break
        lam, g, right, res = lam + alpha * step, gn, rn, resn
    return lam, right, res


def _fix_lambda(fun, M):
    """Restrict a joint kernel to the auxiliary unknowns with ``lam`` frozen."""
    def restricted(lam):
        def f(aux):
            g, s, J = fun(np.concatenate([lam, aux]))
            return g[M:], s[M:], J[M:, M:]
        return f
    return restricted


def _gamma_from_branch(branch: _Branch, lam, right, left, b: BoundaryFields, tol: float = 1e-8):
    """Solve the linear parallel T-Q relation for ``Q`` given the branch eigenvalue."""
    M = len(lam)
    eta = ETA
    prof = TQProfile(PARALLEL, lam, np.zeros(0), b)
    nodes = 0.9 * np.exp(2j * np.pi * (np.arange(4 * M + 8) + 0.37) / (4 * M + 8)) - eta / 2
    lam_vals = np.array([branch.eigenvalue(u, lam, right, left) for u in nodes])
    F = lambda u: (b.p + u * b.sgn_dot * b.normN) * (b.q - u * b.norm1) * prof.A(u)
    best = None
    for m in range(M + 1):
        rows = []
        for u, L in zip(nodes, lam_vals):
            w0, wm, wp = u * (u + eta), (u - eta) * u, (u + eta) * (u + 2 * eta)
            coef0 = (2 * u + eta) * L
            coefm = -(2 * u + 2 * eta) * F(u)
            coefp = -2 * u * F(-u - eta)
            rows.append([coef0 * w0**k + coefm * wm**k + coefp * wp**k for k in range(m + 1)])
        A = np.array(rows)
        x = np.linalg.lstsq(A[:, :m], -A[:, m], rcond=None)[0] if m else np.zeros(0)
        resid = np.linalg.norm(A[:, :m] @ x + A[:, m]) / max(1.0, np.linalg.norm(A[:, m]))
        if resid < tol:
            w_roots = np.roots(np.concatenate([[1.0], x[::-1]])) if m else np.zeros(0)
            gamma = (-eta + np.sqrt(eta**2 + 4 * w_roots)) / 2
            best = canonical_gamma(gamma)
            break
    return best


def _mu_from_lambda(case: str, lam, b: BoundaryFields, N: int, branch: _Branch, right, left,
                    tol: float = 1e-7):
    """Auxiliary roots from the momentum equations, which are linear in the coefficients of ``Q1``.

    With ``lam`` fixed each momentum equation reads
    ``(-1)^n T1(lam) Q1(-lam - eta) = T2(lam) Q1(lam - eta)``.  For even ``M`` the
    null space is one-dimensional and fixes the monic ``Q1``.  For odd ``M`` a
    pencil ``V1 + s V2`` remains; ``s`` follows from the inhomogeneous T-Q
    relation (quadratic in ``s``) at generic points, using the tracked
    transfer-matrix eigenvalue.  Returns candidate ``mu`` arrays.
    """
    eta = ETA
    M = len(lam)
    n = M if case == EVEN else M + 1
    sN, n1 = b.sgn_dot * b.normN, b.norm1
    aN, a1 = b.t + b.xiN, b.t + b.xi1
    rows = []
    for lj in lam:
        t1 = (b.p - lj * sN) * (b.q + lj * n1) * (2 * lj - eta) ** (2 * N)
        t2 = (b.p + lj * aN) * (b.q - lj * a1) * (2 * lj + eta) ** (2 * N)
        row = np.array([(-1) ** n * t1 * (-lj - eta) ** k - t2 * (lj - eta) ** k for k in range(n + 1)])
        rows.append(row / max(np.max(np.abs(row)), 1e-300))
    _, sv, Vh = np.linalg.svd(np.array(rows), full_matrices=True)
    null = Vh.conj()[M:]
    cands = []
    if case == EVEN:
        cands.append(null[0])
    else:
        prof = TQProfile(case, lam, np.zeros(0), b)
        v1, v2 = null[0], null[1]
        nodes = [0.61 + 0.23j, -0.37 + 0.71j, 0.19 - 0.44j]

        def quad(u):
            L = branch.eigenvalue(u, lam, right, left)
            au, du = prof.a(u), prof.d(u)
            ev = lambda v, x: polyval(v, x)

            def B(P, Q):
                return (L * ev(P, u) * ev(Q, -u - eta) - au * ev(P, u - eta) * ev(Q, u)
                        - du * ev(P, -u - 2 * eta) * ev(Q, -u - eta))
            inh = b.c_inhom * (u * (u + eta)) ** 2 * prof.A(u) * prof.A(-u - eta)
            # B(v1 + s v2) - (v1[n] + s v2[n])^2 inh = 0
            c2 = B(v2, v2) - v2[n] ** 2 * inh
            c1 = B(v1, v2) + B(v2, v1) - 2 * v1[n] * v2[n] * inh
            c0 = B(v1, v1) - v1[n] ** 2 * inh
            return c2, c1, c0

        coeffs = [quad(u) for u in nodes]
        c2, c1, c0 = coeffs[0]
        roots = np.roots([c2, c1, c0]) if abs(c2) > 1e-300 else np.array([-c0 / c1])
        for s_ in roots:
            bad = max(abs(a2 * s_**2 + a1_ * s_ + a0) / max(abs(a2 * s_**2), abs(a1_ * s_), abs(a0), 1e-300)
                      for a2, a1_, a0 in coeffs[1:])
            if bad < tol:
                cands.append(v1 + s_ * v2)
    out = []
    for P in cands:
        if abs(P[n]) < 1e-10 * np.max(np.abs(P)):
            continue
        out.append(np.roots((P / P[n])[::-1]))
    return out


def solve_bae(case: str, N: int, M: int, b: BoundaryFields, seeds=None, *, rng=None,
              options: SolverOptions | None = None) -> SolveResult:
    """All root sets reachable from the deterministic seed list.

    Parameters
    ----------
    case : {"even", "odd", "parallel"}
    N, M : int
        Chain length and electron number.
    b : BoundaryFields
        Integrable boundary parameters.
    seeds : sequence of arrays, optional
        Extra starting points.  Length ``M`` seeds start stage A; full-length
        vectors (``lam`` followed by auxiliary roots) go straight to the joint
        polish.
    rng : numpy Generator or int, optional
        Source of jitter and auxiliary starts.
    """
    opts = options or SolverOptions()
    rng = np.random.default_rng(rng if rng is not None else 0)
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")
    if case == PARALLEL and not b.collinear:
        raise ValueError("parallel equations need collinear fields")
    if case in (EVEN, ODD) and b.c_inhom == 0:
        raise ValueError("inhomogeneous equations need c_inhom != 0")
    out = SolveResult(case, N, M)
    if M == 0:
        out.solutions.append(BetheRoots(case, np.zeros(0), np.zeros(0), 0.0))
        return out

    kcase = _KERNEL_CASE[case]
    params = kernel_params(b)
    joint = lambda z: kernels.bae_system(kcase, z, M, params, N)
    aux_only = _fix_lambda(joint, M)
    n_aux = {EVEN: M, ODD: M + 1}.get(case)
    branch = _Branch(b, N, M)
    found: dict = {}

    def accept(z):
        lam, aux = z[:M], z[M:]
        if not (_lambda_ok(lam, b) and _aux_ok(case, aux)):
            return False
        lam_c = canonical_lambda(lam)
        aux_c = canonical_gamma(aux) if case == PARALLEL else aux[np.lexsort((aux.imag, aux.real))]
        cand = BetheRoots(case, lam_c, aux_c)
        res = float(np.linalg.norm(bae_residual(cand, b, N)))
        if res > opts.accept_tol:
            return False
        try:
            energy_from_roots(cand, b.t)
        except ComplexEnergy:
            return False
        key = tuple(np.round(np.concatenate([lam_c, np.sort_complex(np.round(aux_c, 6))]), 6))
        if key not in found:
            found[key] = cand.with_residual(res)
        return True

    def polish(z):
        z, res = _damped_newton(joint, z, tol=opts.newton_tol, max_iter=opts.max_iter,
                                max_halvings=opts.max_halvings)
        return z if res < opts.accept_tol else None

    def from_lambda(lam, right, left):
        ok = False
        if case == PARALLEL:
            gamma = _gamma_from_branch(branch, lam, right, left, b)
            if gamma is None:
                return False
            z = polish(np.concatenate([lam, gamma]))
            return z is not None and accept(z)
        for mu in _mu_from_lambda(case, lam, b, N, branch, right, left):
            if not _aux_ok(case, mu):
                continue
            z = polish(np.concatenate([lam, mu]))
            if z is not None and accept(z):
                return True
        f = aux_only(lam)
        spread = 1.0 + np.max(np.abs(lam))
        for _ in range(opts.aux_starts):
            mu0 = spread * (rng.normal(size=n_aux) + 1j * rng.normal(size=n_aux))
            mu, res = _damped_newton(f, mu0, tol=opts.newton_tol, max_iter=opts.max_iter,
                                     max_halvings=opts.max_halvings)
            if res > 1e-9 or not _aux_ok(case, mu):
                continue
            z = polish(np.concatenate([lam, mu]))
            if z is not None and accept(z):
                ok = True
                break
        return ok

    full_seeds = []
    lam_seeds = []
    for s in seeds or []:
        s = np.asarray(s, dtype=complex)
        if len(s) == M:
            lam_seeds.extend((s, index) for index in range(2**M))
        else:
            full_seeds.append((s, None))
    if opts.default_seeds:
        cands = lambda_candidates(N, b)
        for combo in itertools.combinations(range(len(cands)), M):
            for index in range(2**M):
                lam_seeds.append((cands[list(combo)], index))
    if opts.max_lambda_seeds is not None:
        lam_seeds = lam_seeds[: opts.max_lambda_seeds]

    for z0, _ in full_seeds:
        out.seeds_tried += 1
        z = polish(z0)
        if z is None or not accept(z):
            out.failures.append(NoConvergence("full seed did not converge"))

    lam_done: list = []
    for lam0, index in lam_seeds:
        out.seeds_tried += 1
        converged = False
        for attempt in range(2):
            # unjittered first; a jittered retry breaks exact symmetries of the seed
            jit = attempt * opts.jitter * (rng.normal(size=M) + 1j * rng.normal(size=M))
            try:
                lam, right, res = _stage_a(branch, lam0 + jit, 0 if index is None else index, opts)
            except (np.linalg.LinAlgError, PoleEncountered, ConvergenceFailure, ZeroDivisionError) as exc:
                err = f"stage A: {exc}"
                continue
            if np.isfinite(res) and res <= 1e-10 and np.max(np.abs(lam)) < opts.max_rapidity:
                converged = True
                break
            err = f"stage A residual {res:.2e}"
        if not converged:
            out.failures.append(NoConvergence(err))
            continue
        if not _lambda_ok(lam, b):
            continue  # converged onto an excluded configuration
        lam_c = canonical_lambda(lam)
        if any(np.max(np.abs(lam_c - d)) < 1e-7 for d in lam_done):
            continue
        lam_done.append(lam_c)
        right, left = branch.eigvec(lam, right)
        if not from_lambda(lam, right, left):
            out.failures.append(NoConvergence("auxiliary roots not recovered"))
    out.solutions = list(found.values())
    return out


# ---------------------------------------------------------------- verification


def verify_solution(roots: BetheRoots, b: BoundaryFields, N: int, *, ed_cap: int = 6, tol: float = 1e-8,
                    rng=None) -> dict:
    """Independent checks on a converged root set.

    Returns a report with, per check, the measured value, the tolerance and a
    verdict: polynomiality of the T-Q eigenvalue, the four eigenvalue
    properties, membership of the eigenvalue in the transfer-matrix spectrum,
    quantization via the identification prefactor, and ED containment.
    """
    M = roots.M
    rng = np.random.default_rng(11) if rng is None else rng
    report: dict = {}

    def put(name, value, tolerance=tol, reference=0.0):
        report[name] = {"value": float(value), "reference": reference, "tolerance": tolerance,
                        "pass": bool(np.isfinite(value) and value < tolerance)}

    energy = None
    try:
        energy = energy_from_roots(roots, b.t)
    except (ComplexEnergy, PoleEncountered):
        pass
    if M == 0:
        put("ed_containment", abs(0.0 - (energy or 0.0)))
        report["energy"] = 0.0
        return report

    prof = TQProfile.from_roots(roots, b)
    nodes = 1.3 * np.exp(2j * np.pi * (np.arange(2 * M + 6) + rng.uniform()) / (2 * M + 6)) - ETA / 2
    vals = np.array([tq_lambda(u, prof) for u in nodes])
    fit = fit_polynomial(list(zip(nodes, vals)), 2 * M + 2)
    put("tq_polynomial", fit.residual / max(1.0, float(np.max(np.abs(vals)))))
    coef = fit.coefficients
    props = lambda_property_residuals(coef, roots.lam, b, rng=rng)
    for k in ("crossing", "at_zero", "leading", "functional"):
        scale = max(1.0, float(np.max(np.abs(coef))))
        put(f"lambda_{k}", props[k] / scale)

    try:
        spec = extract_lambda(roots.lam, b)
        gaps = [np.max(np.abs(np.asarray(pc) - coef)) for pc in spec.polynomials]
        put("transfer_eigenvalue", min(gaps) / max(1.0, float(np.max(np.abs(coef)))))
    except Exception:  # degenerate or ill-conditioned reference basis
        put("transfer_eigenvalue", np.inf)

    worst = 0.0
    for j in range(M):
        lj = roots.lam[j]
        try:
            bar = identification_prefactor(j, roots.lam, b) * polyval(coef, -lj)
            target = exp_ik(lj) ** (-2 * N)
            worst = max(worst, abs(bar - target) / abs(target))
        except PoleEncountered:
            worst = np.inf
    put("quantization", worst)

    if energy is None:
        put("real_energy", np.inf)
    else:
        report["energy"] = energy
        if N <= ed_cap:
            levels = ed_spectrum(build_hamiltonian(N, M, b))
            put("ed_containment", float(np.min(np.abs(levels - energy))))
    report["all_pass"] = all(v["pass"] for v in report.values() if isinstance(v, dict))
    return report


# ------------------------------------------------------------ case consistency


def rotate_field_N(b: BoundaryFields, theta: float, axis=None) -> BoundaryFields:
    """Rotate ``hN`` by ``theta`` about an axis normal to ``h1``, keeping norms and constraint signs."""
    h1 = np.asarray(b.h1)
    hN = np.asarray(b.hN)
    if axis is None:
        trial = np.eye(3)[int(np.argmin(np.abs(h1)))] if b.norm1 > 0 else np.array([0.0, 1.0, 0.0])
        axis = np.cross(h1 if b.norm1 > 0 else hN, trial)
    axis = np.asarray(axis, dtype=float) / np.linalg.norm(axis)
    c, s = np.cos(theta), np.sin(theta)
    hN_rot = hN * c + np.cross(axis, hN) * s + axis * np.dot(axis, hN) * (1 - c)
    return BoundaryFields.integrable(h1, hN_rot, t=b.t, sign1=b.sign1, signN=b.signN)


def continue_solution(roots: BetheRoots, N: int, path, thetas, *, tol: float = 1e-10,
                      max_refine: int = 6) -> list:
    """Follow a root set along ``path(theta) -> BoundaryFields`` with adaptive steps.

    Returns ``(theta, BetheRoots)`` pairs for every accepted point; stops at the
    first target ``theta`` that cannot be reached after ``max_refine`` halvings of
    the logarithmic step.
    """
    M = roots.M
    kcase = _KERNEL_CASE[roots.case]
    z = roots.vector
    theta_prev = None
    out = []
    for target in thetas:
        pending = [target]
        refine = 0
        while pending:
            th = pending[-1]
            bt = path(th)
            params = kernel_params(bt)
            f = lambda zz: kernels.bae_system(kcase, zz, M, params, N)
            z_new, res = _damped_newton(f, z, tol=1e-13, max_iter=100, max_halvings=30)
            if res < tol and _lambda_ok(z_new[:M], bt):
                z = z_new
                theta_prev = th
                out.append((th, BetheRoots(roots.case, z[:M], z[M:], res)))
                pending.pop()
                continue
            if theta_prev is None or refine >= max_refine:
                return out
            refine += 1
            pending.append(np.sqrt(theta_prev * th))
    return out


def case_consistency(N: int, M: int, b: BoundaryFields, *, theta0: float = 0.3, theta_min: float = 1e-3,
                     steps: int = 24, tol: float = 1e-7, rng=None, options: SolverOptions | None = None) -> dict:
    """Compare parallel-case energies with the inhomogeneous equations as ``c_inhom -> 0``.

    ``hN`` is rotated away from the collinear configuration by ``theta0``; the
    even/odd system is solved there and each solution is continued towards
    ``theta_min``.  The energy along each path is extrapolated to ``theta = 0``
    with a cubic fit in ``theta``.  The parallel-case system is then solved
    with the default seeds plus the extrapolated rapidities, and every
    extrapolated energy must match a parallel-case energy within ``tol``.
    """
    if not b.collinear:
        raise ValueError("case consistency needs collinear fields")
    path = lambda th: rotate_field_N(b, th)
    start = path(theta0)
    inhom_case = EVEN if M % 2 == 0 else ODD
    inhom = solve_bae(inhom_case, N, M, start, rng=rng, options=options)
    thetas = np.geomspace(theta0, theta_min, steps)
    tracks = []
    for sol in inhom:
        pts = continue_solution(sol, N, path, thetas)
        small = [(th, r) for th, r in pts if th <= 0.05]
        if len(small) < 6:
            continue
        th = np.array([p[0] for p in small[-8:]])
        en = np.array([energy_from_roots(p[1], b.t) for p in small[-8:]])
        coef = np.polyfit(th, en, 3)
        tracks.append({"theta_min": float(th[-1]), "energy_last": float(en[-1]),
                       "energy_extrapolated": float(coef[-1]), "lam": small[-1][1].lam})
    seeds = [canonical_lambda(tr["lam"]) for tr in tracks]
    par = solve_bae(PARALLEL, N, M, b, seeds=seeds, rng=rng, options=options)
    e_par = par.energies(b.t)
    devs = []
    for tr in tracks:
        d = float(np.min(np.abs(e_par - tr["energy_extrapolated"]))) if len(e_par) else np.inf
        tr["deviation"] = d
        devs.append(d)
    return {
        "tracks": tracks,
        "parallel_energies": e_par.tolist(),
        "max_deviation": max(devs) if devs else float("nan"),
        "tolerance": tol,
        "pass": bool(devs) and max(devs) < tol,
    }
