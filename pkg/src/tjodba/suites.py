"""Verification suites shared by the command line and the acceptance tests.

Every suite returns a :class:`SuiteResult`: an ordered list of
:class:`Check` records (value, reference, tolerance, verdict) plus optional
tables.  Random draws come from a caller-supplied seed; each draw gets its
own generator ``default_rng([seed, suite_tag, index])`` so that results do not
depend on the order in which draws are evaluated (or on a worker pool).
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import TJError
from .model import BoundaryFields, build_hamiltonian, ed_spectrum
from .numerics import embed_two, max_abs_diff
from .odba import case_consistency, case_for, energy_from_roots, solve_bae
from .scattering import bar_tau, reflection_residual, s_matrix
from .thermo import (LN3_HALF, B, BoundaryExponents, b_value, boundary_string_energy, open_ground_energy,
                     periodic_ground_energy, surface_energy_mixed, surface_energy_parallel)
from .transfer import ETA, extract_lambda, identification_residual, identity_residuals, lambda_property_residuals, r_matrix, transfer_matrix

ALGEBRA_TOL = 1e-10
RE_FAIL_THRESHOLD = 1e-4
LAMBDA_TOL = 1e-8
ED_TOL = 1e-8
DUAL_TOL = 1e-8
COVERAGE_TARGET = 0.5
LEVEL_CLUSTER = 1e-7
ACCEPTANCE_SECTORS = ((2, 1), (3, 1), (3, 2), (4, 2))

# Fixed draws of the ED-containment sweep.  The parallel draw uses opposite
# constraint branches so that no level needs a rapidity at infinity.
UNPARALLEL_DRAW = BoundaryFields.integrable((0.3, 0.0, 0.4), (0.0, 0.2, 0.1), t=1.0, sign1=-1, signN=-1)
PARALLEL_DRAW = BoundaryFields.integrable((0.0, 0.0, 0.5), (0.0, 0.0, 0.3), t=1.0, sign1=1, signN=-1)

_PERM = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
_TAGS = {"algebra": 1, "control": 2, "identification": 3, "lambda": 4, "ed": 5, "consistency": 6}


@dataclass
class Check:
    """One numeric comparison.

    ``mode="within"`` passes when ``|value - reference| <= tolerance``;
    ``mode="exceeds"`` (negative controls) passes when ``value > tolerance``.
    """

    name: str
    value: float
    reference: float = 0.0
    tolerance: float = ALGEBRA_TOL
    mode: str = "within"
    passed: bool = field(init=False)

    def __post_init__(self):
        v = float(self.value)
        self.value = v
        if not math.isfinite(v):
            self.passed = False
        elif self.mode == "within":
            self.passed = abs(v - self.reference) <= self.tolerance
        elif self.mode == "exceeds":
            self.passed = v > self.tolerance
        else:
            raise ValueError(f"unknown check mode {self.mode!r}")

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "reference": self.reference,
                "tolerance": self.tolerance, "mode": self.mode, "pass": self.passed}


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, *args, **kw) -> Check:
        c = Check(*args, **kw)
        self.checks.append(c)
        return c

    def failed(self) -> list:
        return [c for c in self.checks if not c.passed]

    def verdicts(self) -> dict:
        return {f"{self.name}/{c.name}": c.passed for c in self.checks}

    def to_dict(self) -> dict:
        return {"suite": self.name, "all_pass": self.all_pass, "elapsed_s": self.elapsed,
                "checks": [c.to_dict() for c in self.checks], "tables": self.tables}


def draw_rng(seed: int, suite: str, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), _TAGS[suite], int(index)])


def spectral_point(rng: np.random.Generator) -> complex:
    """Uniform point of the box ``[-2, 2] x [-1, 1] i``."""
    return complex(rng.uniform(-2, 2), rng.uniform(-1, 1))


def draw_fields(rng: np.random.Generator, index: int) -> BoundaryFields:
    """Integrable draw; every fourth is parallel and every fourth (offset 3) has perpendicular fields."""
    kind = index % 4
    if kind == 2:
        return BoundaryFields.random_integrable(rng, collinear="parallel")
    b = BoundaryFields.random_integrable(rng)
    if kind == 3:
        # project hN onto the plane normal to h1 so that h1 . hN = 0
        h1, hN = np.asarray(b.h1), np.asarray(b.hN)
        hN = hN - h1 * np.dot(h1, hN) / np.dot(h1, h1)
        b = BoundaryFields.integrable(h1, hN, t=b.t, sign1=b.sign1, signN=b.signN)
    return b


def perturb_fields(b: BoundaryFields, delta: float) -> BoundaryFields:
    """Shift both boundary potentials by ``delta`` (off the integrable manifold for ``delta != 0``)."""
    return b.replace(xi1=b.xi1 + delta, xiN=b.xiN + delta)


def _commutator(a, b) -> float:
    scale = max(1.0, float(np.max(np.abs(a))) * float(np.max(np.abs(b))))
    return max_abs_diff(a @ b, b @ a) / scale


def _timed(fn):
    def run(*args, **kw):
        t0 = time.perf_counter()
        res = fn(*args, **kw)
        res.elapsed = time.perf_counter() - t0
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# ------------------------------------------------------------------ algebra


@_timed
def algebra_suite(seed: int, draws: int = 20, *, perturb: float = 0.0, tol: float = ALGEBRA_TOL,
                  max_m: int = 3) -> SuiteResult:
    """Scattering and transfer-matrix identities over random draws and spectral points.

    With ``perturb != 0`` every draw is pushed off the integrable manifold; the
    scattering reflection-equation checks are then expected to fail.
    """
    out = SuiteResult("algebra")
    id4 = np.eye(4)
    for i in range(draws):
        rng = draw_rng(seed, "algebra", i)
        b = perturb_fields(draw_fields(rng, i), perturb)
        u, v = spectral_point(rng), spectral_point(rng)
        tag = f"draw{i}"
        out.add(f"{tag}/s_unitarity", max_abs_diff(s_matrix(u) @ s_matrix(-u), id4), tolerance=tol)
        S = lambda x, a, c: embed_two(s_matrix(x), a, c, 3)  # noqa: E731
        out.add(f"{tag}/s_ybe", max_abs_diff(S(u - v, 0, 1) @ S(u, 0, 2) @ S(v, 1, 2),
                                             S(v, 1, 2) @ S(u, 0, 2) @ S(u - v, 0, 1)), tolerance=tol)
        out.add(f"{tag}/r_initial", max_abs_diff(r_matrix(0.0), ETA * _PERM), tolerance=tol)
        out.add(f"{tag}/r_unitarity", max_abs_diff(r_matrix(u) @ r_matrix(-u), (ETA**2 - u * u) * id4),
                tolerance=tol)
        ident = identity_residuals(u, v, b)
        for key in ("ybe", "re", "dre", "crossing"):
            out.add(f"{tag}/r_{key}", ident[key], tolerance=tol)
        for side in "+-":
            out.add(f"{tag}/reflection{side}", reflection_residual(b, u, v, side), tolerance=tol)
        for M in range(1, max_m + 1):
            lam = [spectral_point(rng) for _ in range(M)]
            tu = transfer_matrix(u, lam, b).matrix
            tv = transfer_matrix(v, lam, b).matrix
            out.add(f"{tag}/tau_commute_M{M}", _commutator(tu, tv), tolerance=tol)
        lam = [spectral_point(rng) for _ in range(2)]
        bt = [bar_tau(lam[j], lam, j, b) for j in range(2)]
        out.add(f"{tag}/bar_tau_commute", _commutator(bt[0], bt[1]), tolerance=tol)
    return out


@_timed
def reflection_control_suite(seed: int, draws: int = 20, *, delta: float = 0.1,
                             threshold: float = RE_FAIL_THRESHOLD) -> SuiteResult:
    """Negative control: draws with ``xi1`` and ``xiN`` shifted by ``delta`` must violate the reflection equation."""
    out = SuiteResult("reflection_control")
    for i in range(draws):
        rng = draw_rng(seed, "control", i)
        b = perturb_fields(BoundaryFields.random_integrable(rng), delta)
        worst = 0.0
        for _ in range(2):
            u, v = spectral_point(rng), spectral_point(rng)
            worst = max(worst, reflection_residual(b, u, v, "+"), reflection_residual(b, u, v, "-"))
        out.add(f"draw{i}/reflection_violation", worst, tolerance=threshold, mode="exceeds")
    return out


@_timed
def identification_suite(seed: int, draws: int = 10, *, tol: float = ALGEBRA_TOL, ms=(1, 2)) -> SuiteResult:
    """``bar_tau(lam_j)`` against the scaled ``tau(-lam_j)`` for random rapidities."""
    out = SuiteResult("identification")
    for i in range(draws):
        rng = draw_rng(seed, "identification", i)
        b = draw_fields(rng, i)
        for M in ms:
            lam = [spectral_point(rng) for _ in range(M)]
            worst = 0.0
            for j in range(M):
                try:
                    worst = max(worst, identification_residual(j, lam, b))
                except TJError:
                    worst = math.inf
            out.add(f"draw{i}/M{M}", worst, tolerance=tol)
    return out


@_timed
def lambda_property_suite(seed: int, draws: int = 5, *, tol: float = LAMBDA_TOL, ms=(1, 2)) -> SuiteResult:
    """Crossing, value at zero, leading coefficient and functional relations of extracted eigenvalues."""
    out = SuiteResult("lambda_properties")
    for i in range(draws):
        rng = draw_rng(seed, "lambda", i)
        b = draw_fields(rng, i)
        for M in ms:
            lam = [spectral_point(rng) for _ in range(M)]
            worst = dict.fromkeys(("crossing", "at_zero", "leading", "functional"), 0.0)
            try:
                spec = extract_lambda(lam, b)
                for coef in spec.polynomials:
                    props = lambda_property_residuals(coef, lam, b, rng=rng)
                    for k in worst:
                        worst[k] = max(worst[k], props[k])
            except TJError:
                worst = dict.fromkeys(worst, math.inf)
            for k, val in worst.items():
                out.add(f"draw{i}/M{M}/{k}", val, tolerance=tol)
    return out


# -------------------------------------------------------------- ED sweeps


def distinct_levels(levels, cluster: float = LEVEL_CLUSTER) -> np.ndarray:
    """Sorted eigenvalues with near-degenerate values (gap below ``cluster``) merged."""
    lv = np.sort(np.asarray(levels, dtype=float))
    if len(lv) == 0:
        return lv
    keep = np.concatenate([[True], np.diff(lv) > cluster])
    return lv[keep]


def containment_run(N: int, M: int, b: BoundaryFields, seed: int, index: int = 0, *,
                    ed_tol: float = ED_TOL) -> dict:
    """Solve one sector with the multi-start solver and compare with the ED spectrum."""
    t0 = time.perf_counter()
    rng = draw_rng(seed, "ed", index)
    res = solve_bae(case_for(M, b), N, M, b, rng=rng)
    energies = [energy_from_roots(r, b.t) for r in res]
    levels = ed_spectrum(build_hamiltonian(N, M, b))
    distinct = distinct_levels(levels)
    devs = [float(np.min(np.abs(levels - e))) for e in energies]
    reached = [bool(np.any(np.abs(np.asarray(energies) - lv) <= ed_tol)) for lv in distinct] if energies else []
    return {
        "N": N, "M": M, "case": res.case, "fields": describe_fields(b),
        "solutions": len(energies), "energies": sorted(energies),
        "max_deviation": max(devs) if devs else math.inf,
        "distinct_levels": len(distinct), "levels_reached": int(sum(reached)),
        "coverage": float(np.mean(reached)) if reached else 0.0,
        "failures": len(res.failures), "seconds": time.perf_counter() - t0,
    }


def describe_fields(b: BoundaryFields) -> dict:
    return {"t": b.t, "xi1": b.xi1, "xiN": b.xiN, "h1": list(b.h1), "hN": list(b.hN)}


def _run_task(task):
    N, M, b, seed, index = task
    return containment_run(N, M, b, seed, index)


@_timed
def ed_containment_suite(seed: int, sectors=ACCEPTANCE_SECTORS, draws=None, *, ed_tol: float = ED_TOL,
                         coverage: float = COVERAGE_TARGET, workers: int = 1) -> SuiteResult:
    """Every converged solution inside the ED spectrum and coverage of distinct levels per draw.

    ``draws`` defaults to one unparallel and one parallel fixed draw.  With
    ``workers > 1`` the runs go to a process pool; the report keeps the task order.
    """
    out = SuiteResult("ed_containment")
    draws = [("unparallel", UNPARALLEL_DRAW), ("parallel", PARALLEL_DRAW)] if draws is None else list(draws)
    tasks, labels = [], []
    for N, M in sectors:
        for label, b in draws:
            tasks.append((N, M, b, seed, len(tasks)))
            labels.append(f"N{N}M{M}/{label}")
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(_run_task, tasks))
    else:
        runs = [_run_task(t) for t in tasks]
    for label, run in zip(labels, runs):
        run["label"] = label
        out.add(f"{label}/containment", run["max_deviation"], tolerance=ed_tol)
        out.add(f"{label}/coverage", run["coverage"], reference=1.0, tolerance=1.0 - coverage)
    out.tables["runs"] = runs
    return out


@_timed
def case_consistency_suite(seed: int, sectors=((2, 1), (3, 2)), *, tol: float = 1e-7) -> SuiteResult:
    """Parallel-case energies as the limit ``c_inhom -> 0`` of the inhomogeneous equations."""
    out = SuiteResult("case_consistency")
    for k, (N, M) in enumerate(sectors):
        rep = case_consistency(N, M, PARALLEL_DRAW, tol=tol, rng=draw_rng(seed, "consistency", k))
        out.add(f"N{N}M{M}/max_deviation", rep["max_deviation"], tolerance=tol)
        out.tables[f"N{N}M{M}"] = [{k2: v for k2, v in tr.items() if k2 != "lam"} for tr in rep["tracks"]]
    return out


# ------------------------------------------------------------------ thermo

B_EXPONENTS = (0.25, 0.5, 1.0, 1.7, 3.0)
STRING_GRID_POS = tuple(np.round(np.arange(0.05, 0.5, 0.05), 10))
STRING_GRID_NEG = tuple(np.round(np.arange(0.55, 3.0 + 1e-9, 0.05), 10))


@_timed
def thermo_suite(*, tol: float = DUAL_TOL) -> SuiteResult:
    """Filling, periodic energy, ``B_p`` and surface energies by dual routes; string positivity."""
    out = SuiteResult("thermo")
    per = periodic_ground_energy(1.0)
    out.add("filling", per.filling, reference=2.0 / 3.0, tolerance=1e-15)
    out.add("periodic_energy/dual", per.difference, tolerance=1e-10)
    out.add("periodic_energy/value", per.energy_per_site, reference=LN3_HALF - 1.0 / 3.0, tolerance=1e-12)
    for p in B_EXPONENTS:
        bv = b_value(p)
        out.add(f"B/{p}", abs(bv.series - bv.quadrature), tolerance=1e-10)

    def dual(name, fn, reference=None):
        try:
            val = fn()
            out.add(f"{name}/dual", val.difference, tolerance=tol)
            if reference is not None:
                out.add(f"{name}/value", val.closed_form, reference=reference, tolerance=1e-10)
        except TJError:
            out.add(f"{name}/dual", math.inf, tolerance=tol)

    one = BoundaryExponents(1.0, 1.0, None)
    dual("open_positive", lambda: open_ground_energy(BoundaryExponents(1.3, 0.4), 1.0, "positive"))
    dual("open_negative", lambda: open_ground_energy(BoundaryExponents(-0.7, -1.6), -1.0, "negative"))
    dual("surface_parallel", lambda: surface_energy_parallel(one, 1.0), reference=math.log(3.0) - 5.0 / 3.0)
    dual("surface_parallel_mixed_signs", lambda: surface_energy_parallel(BoundaryExponents(1.2, -0.3), 1.0))
    mixed = BoundaryExponents.from_fields(BoundaryFields.integrable((0, 0, 0.5), (0, 0, 0.4), t=1.0,
                                                                   sign1=-1, signN=1))
    dual("surface_mixed", lambda: surface_energy_mixed(mixed, 1.0))

    rows = []
    for grid, t, regime in ((STRING_GRID_POS, 1.0, "0<g<1/2"), (STRING_GRID_NEG, -1.0, "g>1/2")):
        worst_dual, min_de = 0.0, math.inf
        for g in grid:
            try:
                s = boundary_string_energy(float(g), t)
                worst_dual, min_de = max(worst_dual, s.difference), min(min_de, s.closed_form)
                rows.append({"g": float(g), "t": t, "delta_e": s.closed_form, "quadrature": s.quadrature})
            except TJError:
                worst_dual, min_de = math.inf, -math.inf
        out.add(f"string[{regime}]/dual", worst_dual, tolerance=tol)
        out.add(f"string[{regime}]/min_delta_e", min_de, tolerance=0.0, mode="exceeds")
    out.tables["string_scan"] = rows
    out.tables["B"] = [{"p": p, "B": B(p)} for p in B_EXPONENTS]
    return out
