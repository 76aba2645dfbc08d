"""Projected t-J chain with boundary chemical potentials and boundary magnetic fields.

Basis states are ``C^dag_{x1,a1} ... C^dag_{xM,aM} |0>`` with ``x1 < ... < xM``;
each site carries at most one electron.  Spin index 0 is up, 1 is down.
Sites are numbered from 0 in code, so the physical sites 1 and N are
``0`` and ``N - 1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import InvalidSector
from .numerics import eig_hermitian

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
ID2 = np.eye(2, dtype=complex)


def h_dot_sigma(h) -> np.ndarray:
    """``h . sigma`` for a real (or complex) 3-vector."""
    hx, hy, hz = h
    return hx * SIGMA_X + hy * SIGMA_Y + hz * SIGMA_Z


def _sgn(x: float) -> float:
    return 1.0 if x >= 0 else -1.0


def _clean(c: float, scale: float) -> float:
    return 0.0 if abs(c) <= 1e-13 * max(1.0, scale) else c


@dataclass(frozen=True)
class BoundaryFields:
    """Hopping, boundary potentials and boundary fields, plus derived constants.

    Derived attributes (set once in ``__post_init__``): ``p = xiN/(2i)``,
    ``q = -xi1/(2i)``, ``norm1 = |h1|``, ``normN = |hN|``, ``dot = h1.hN``,
    ``sgn_dot`` (with ``sgn(0) = +1``), ``c_inhom`` and ``is_integrable``.
    """

    t: float = 1.0
    xi1: float = -1.0
    xiN: float = -1.0
    h1: tuple = (0.0, 0.0, 0.0)
    hN: tuple = (0.0, 0.0, 0.0)
    integrable_tol: float = field(default=1e-12, repr=False, compare=False)

    def __post_init__(self):
        h1 = tuple(float(x) for x in self.h1)
        hN = tuple(float(x) for x in self.hN)
        if len(h1) != 3 or len(hN) != 3:
            raise ValueError("boundary fields must be 3-vectors")
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "hN", hN)
        n1 = float(np.linalg.norm(h1))
        nN = float(np.linalg.norm(hN))
        dot = float(np.dot(h1, hN))
        sgn = _sgn(dot)
        derived = {
            "p": self.xiN / 2j,
            "q": -self.xi1 / 2j,
            "norm1": n1,
            "normN": nN,
            "dot": dot,
            "sgn_dot": sgn,
            # zero the rounding noise of collinear inputs; the sign follows sgn(h1.hN)
            "c_inhom": _clean(2.0 * (sgn * n1 * nN - dot), n1 * nN),
            "is_integrable": bool(
                abs((self.t + self.xi1) ** 2 - n1**2) <= self.integrable_tol
                and abs((self.t + self.xiN) ** 2 - nN**2) <= self.integrable_tol
            ),
        }
        for k, v in derived.items():
            object.__setattr__(self, k, v)

    @classmethod
    def integrable(cls, h1, hN, t: float = 1.0, sign1: int = -1, signN: int = -1) -> "BoundaryFields":
        """Fields with ``xi = sign*|h| - t`` so that ``(t + xi)^2 = |h|^2`` holds exactly."""
        n1 = float(np.linalg.norm(h1))
        nN = float(np.linalg.norm(hN))
        return cls(t=t, xi1=sign1 * n1 - t, xiN=signN * nN - t, h1=tuple(h1), hN=tuple(hN))

    @classmethod
    def random_integrable(cls, rng: np.random.Generator, t: float = 1.0, *, collinear: str | None = None,
                          scale: float = 0.6) -> "BoundaryFields":
        """Random integrable draw.

        ``collinear`` is ``None`` (generic directions), ``"parallel"`` or
        ``"antiparallel"``.  Field strengths lie in ``[0.2, 1] * scale``.
        """
        h1 = rng.normal(size=3)
        h1 *= rng.uniform(0.2, 1.0) * scale / np.linalg.norm(h1)
        if collinear is None:
            hN = rng.normal(size=3)
        else:
            hN = h1 * (1.0 if collinear == "parallel" else -1.0)
        hN = hN * rng.uniform(0.2, 1.0) * scale / np.linalg.norm(hN)
        s1, sN = rng.choice([-1, 1], size=2)
        return cls.integrable(h1, hN, t=t, sign1=int(s1), signN=int(sN))

    def replace(self, **kw) -> "BoundaryFields":
        args = dict(t=self.t, xi1=self.xi1, xiN=self.xiN, h1=self.h1, hN=self.hN)
        args.update(kw)
        return BoundaryFields(**args)

    @property
    def collinear(self) -> bool:
        return self.c_inhom == 0.0

    @property
    def sign1(self) -> int:
        """Branch of the constraint at site 1: ``t + xi1 = sign1 * |h1|``."""
        return 1 if self.t + self.xi1 >= 0 else -1

    @property
    def signN(self) -> int:
        return 1 if self.t + self.xiN >= 0 else -1


@dataclass(frozen=True)
class SectorBasis:
    N: int
    M: int
    states: tuple  # of (positions, spins) pairs
    index: dict = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.states)


def build_basis(N: int, M: int) -> SectorBasis:
    """All ``M``-electron configurations on ``N`` sites, ordered by (positions, spin word)."""
    if N < 1 or M < 0 or M > N:
        raise InvalidSector(f"no sector with N={N}, M={M}")
    states = tuple(
        (pos, spins)
        for pos in itertools.combinations(range(N), M)
        for spins in itertools.product((0, 1), repeat=M)
    )
    assert len(states) == comb(N, M) * 2**M
    return SectorBasis(N, M, states, {s: i for i, s in enumerate(states)})


def _modes(pos, spins):
    return [2 * x + s for x, s in zip(pos, spins)]


def fermion_sign(modes, removed: int, added: int) -> int:
    """Sign of ``c^dag_added c_removed`` acting on the ordered product over ``modes``."""
    occ = [m for m in modes if m != removed]
    # c_removed passes the occupied modes before it, c^dag_added the ones before its slot
    n_before_removed = sum(1 for m in modes if m < removed)
    n_before_added = sum(1 for m in occ if m < added)
    return -1 if (n_before_removed + n_before_added) % 2 else 1


@dataclass(frozen=True)
class SectorHamiltonian:
    basis: SectorBasis
    matrix: np.ndarray
    fields: BoundaryFields


def build_hamiltonian(N: int, M: int, b: BoundaryFields) -> SectorHamiltonian:
    """Dense matrix of the projected Hamiltonian in the fixed-``M`` sector.

    Terms: projected hopping ``-t``; bulk exchange ``2t [S_j.S_{j+1} - n_j n_{j+1}/4]``;
    boundary terms ``xi1 n_1 + 2 h1.S_1 + xiN n_N + 2 hN.S_N``.
    """
    basis = build_basis(N, M)
    t = b.t
    H = np.zeros((basis.dim, basis.dim), dtype=complex)
    boundary = [(0, b.xi1 * ID2 + h_dot_sigma(b.h1))]
    if N > 1:
        boundary.append((N - 1, b.xiN * ID2 + h_dot_sigma(b.hN)))
    else:
        boundary = [(0, (b.xi1 + b.xiN) * ID2 + h_dot_sigma(np.add(b.h1, b.hN)))]
    for i, (pos, spins) in enumerate(basis.states):
        occupied = set(pos)
        modes = _modes(pos, spins)
        for a, x in enumerate(pos):
            for site, Hb in boundary:
                if x != site:
                    continue
                for s2 in (0, 1):
                    amp = Hb[s2, spins[a]]
                    if amp == 0:
                        continue
                    new_spins = spins[:a] + (s2,) + spins[a + 1:]
                    sign = fermion_sign(modes, 2 * x + spins[a], 2 * x + s2)
                    H[basis.index[(pos, new_spins)], i] += sign * amp
            for y in (x - 1, x + 1):
                if 0 <= y < N and y not in occupied:
                    new_pos = list(pos)
                    new_pos[a] = y
                    # keep ascending order; a nearest-neighbour hop never crosses another electron
                    order = np.argsort(new_pos)
                    new_state = (tuple(new_pos[k] for k in order), tuple(spins[k] for k in order))
                    sign = fermion_sign(modes, 2 * x + spins[a], 2 * y + spins[a])
                    H[basis.index[new_state], i] += -t * sign
        # 2t[S.S - 1/4] on an occupied bond equals t (P_spin - 1)
        for a in range(M - 1):
            if pos[a + 1] != pos[a] + 1:
                continue
            # parallel spins: P_spin = 1 and the bond term vanishes
            if spins[a] != spins[a + 1]:
                H[i, i] -= t
                x, y = pos[a], pos[a + 1]
                new_spins = spins[:a] + (spins[a + 1], spins[a]) + spins[a + 2:]
                # S^+_x S^-_y (or its conjugate) as a product of two on-site flips
                s1 = fermion_sign(modes, 2 * x + spins[a], 2 * x + spins[a + 1])
                mid = _modes(pos, spins[:a] + (spins[a + 1],) + spins[a + 1:])
                s2 = fermion_sign(mid, 2 * y + spins[a + 1], 2 * y + spins[a])
                H[basis.index[(pos, new_spins)], i] += t * s1 * s2
    return SectorHamiltonian(basis, H, b)


def ed_spectrum(H: SectorHamiltonian | np.ndarray) -> np.ndarray:
    """Full ascending spectrum of a sector Hamiltonian."""
    mat = H.matrix if isinstance(H, SectorHamiltonian) else H
    if mat.shape == (0, 0):
        return np.zeros(0)
    return eig_hermitian(mat)[0]


def total_spin_operators(basis: SectorBasis) -> dict[str, np.ndarray]:
    """Total ``Sz``, ``S+`` and ``S-`` in the sector basis (used by symmetry checks)."""
    dim = basis.dim
    Sz = np.zeros((dim, dim), dtype=complex)
    Sp = np.zeros((dim, dim), dtype=complex)
    for i, (pos, spins) in enumerate(basis.states):
        Sz[i, i] = sum(0.5 if s == 0 else -0.5 for s in spins)
        modes = _modes(pos, spins)
        for a, s in enumerate(spins):
            if s == 1:
                new = spins[:a] + (0,) + spins[a + 1:]
                sign = fermion_sign(modes, 2 * pos[a] + 1, 2 * pos[a])
                Sp[basis.index[(pos, new)], i] += sign
    return {"Sz": Sz, "S+": Sp, "S-": Sp.conj().T}
