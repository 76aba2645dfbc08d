import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from oracles import random_box_point
from tjodba.errors import ComplexEnergy, PoleEncountered
from tjodba.model import BoundaryFields, build_hamiltonian, ed_spectrum
from tjodba.numerics import fit_polynomial
from tjodba.odba import (EVEN, ODD, PARALLEL, BetheRoots, TQProfile, bae_residual, canonical_lambda,
                         case_consistency, case_for, continue_solution, energy_from_roots, lambda_candidates,
                         rotate_field_N, solve_bae, tq_lambda, verify_solution)
from tjodba.transfer import ETA, lambda_at_zero

B_GEN = BoundaryFields.integrable((0.3, 0.0, 0.4), (0.0, 0.2, 0.1))
B_PAR = BoundaryFields.integrable((0, 0, 0.5), (0, 0, 0.3), sign1=1, signN=-1)
B_PERP = BoundaryFields.integrable((0.5, 0, 0), (0, 0.4, 0), sign1=-1, signN=1)


def ed(N, M, b):
    return ed_spectrum(build_hamiltonian(N, M, b))


def contained(energies, levels, tol=1e-8):
    return all(np.min(np.abs(levels - e)) < tol for e in energies)


@pytest.fixture(scope="module")
def gen_32():
    return solve_bae(EVEN, 3, 2, B_GEN, rng=1)


@pytest.fixture(scope="module")
def par_21():
    return solve_bae(PARALLEL, 2, 1, B_PAR, rng=1)


class TestProfiles:
    def test_case_for(self):
        assert case_for(2, B_GEN) == EVEN and case_for(3, B_GEN) == ODD
        assert case_for(1, B_PAR) == PARALLEL

    @pytest.mark.parametrize("case,n_aux", [(EVEN, 2), (ODD, 3), (PARALLEL, 1)])
    def test_symmetries(self, case, n_aux, rng):
        b = B_PAR if case == PARALLEL else B_GEN
        prof = TQProfile(case, [0.3 + 0.2j, -0.7], [random_box_point(rng) for _ in range(n_aux)], b)
        for _ in range(100):
            u = random_box_point(rng)
            assert abs(prof.d(u) - prof.a(-u - ETA)) <= 1e-12 * max(1.0, abs(prof.d(u)))
            assert abs(prof.Q2(u) - prof.Q1(-u - ETA)) <= 1e-12 * max(1.0, abs(prof.Q2(u)))

    def test_parallel_without_roots(self, rng):
        prof = TQProfile(PARALLEL, [0.4 - 0.1j], [], B_PAR)
        u = random_box_point(rng)
        assert abs(tq_lambda(u, prof) - (prof.a(u) + prof.d(u))) < 1e-12

    def test_pole_guard(self):
        prof = TQProfile(EVEN, [0.4, 0.9], [0.1 + 0.2j, -0.3], B_GEN)
        with pytest.raises(PoleEncountered):
            tq_lambda(0.1 + 0.2j, prof)


class TestEnergy:
    def test_limits(self):
        assert energy_from_roots([1e8], 1.3) == pytest.approx(-2 * 1.3)
        assert energy_from_roots([1e-9], 1.3) == pytest.approx(2 * 1.3)
        assert energy_from_roots([0.5], 1.3) == pytest.approx(0.0, abs=1e-15)

    def test_unpaired_complex_root(self):
        with pytest.raises(ComplexEnergy):
            energy_from_roots([0.3 + 0.2j], 1.0)

    def test_string_pair_is_real(self):
        assert np.isfinite(energy_from_roots([0.3 + 0.5j, 0.3 - 0.5j], 1.0))


class TestSingleUnknown:
    """Parallel fields, M = 1, no gamma: the cleared momentum equation is a polynomial in lam."""

    def momentum_polynomial(self, b, N):
        sN, n1 = b.sgn_dot * b.normN, b.norm1
        lhs = P.polymul(P.polymul([b.p, -sN], [b.q, n1]), P.polypow([-ETA, 2], 2 * N))
        rhs = P.polymul(P.polymul([b.p, b.t + b.xiN], [b.q, -(b.t + b.xi1)]), P.polypow([ETA, 2], 2 * N))
        return lhs, rhs

    def test_roots_against_ed_and_solver(self, par_21):
        lhs, rhs = self.momentum_polynomial(B_PAR, 2)
        roots = P.polyroots(P.polysub(lhs, rhs))
        # discard lam = 0 and common zeros of both sides (cleared-denominator artefacts)
        good = [r for r in roots if abs(r) > 1e-6 and abs(P.polyval(r, lhs)) > 1e-8]
        levels = ed(2, 1, B_PAR)
        energies = [energy_from_roots([r], B_PAR.t) for r in good]
        assert energies and contained(energies, levels)
        solver_m0 = [s.lam[0] for s in par_21 if len(s.aux) == 0]
        assert solver_m0
        for lam in solver_m0:
            assert np.min(np.abs(np.abs(np.array(good)) - abs(lam))) < 1e-8


class TestSolver:
    def test_trivial_sector(self):
        res = solve_bae(EVEN, 3, 0, B_GEN)
        assert len(res) == 1 and res.energies(B_GEN.t).tolist() == [0.0]

    def test_parallel_two_sites(self, par_21):
        levels = ed(2, 1, B_PAR)
        e = par_21.energies(B_PAR.t)
        assert len(e) >= 2 and contained(e, levels)

    def test_listed_parallel_draw(self):
        b = BoundaryFields.integrable((0, 0, 0.5), (0, 0, 0.5))
        e = solve_bae(PARALLEL, 2, 1, b, rng=0).energies(b.t)
        assert len(e) and contained(e, ed(2, 1, b))

    def test_unparallel_three_sites(self, gen_32):
        levels = ed(3, 2, B_GEN)
        e = gen_32.energies(B_GEN.t)
        assert contained(e, levels)
        assert len(e) >= 0.5 * len(np.unique(levels.round(7)))
        for s in gen_32:
            assert np.linalg.norm(bae_residual(s, B_GEN, 3)) < 1e-10

    def test_odd_perpendicular_fields(self):
        assert B_PERP.dot == 0.0 and B_PERP.sgn_dot == 1.0
        res = solve_bae(ODD, 3, 1, B_PERP, rng=0)
        e = res.energies(B_PERP.t)
        assert len(e) >= 3 and contained(e, ed(3, 1, B_PERP))

    def test_lambda_sign_symmetry(self, gen_32):
        s = gen_32[0]
        flipped = BetheRoots(s.case, -s.lam, s.aux)
        assert abs(np.linalg.norm(bae_residual(flipped, B_GEN, 3)) - np.linalg.norm(bae_residual(s, B_GEN, 3))) < 1e-12
        swapped = BetheRoots(s.case, s.lam[::-1], s.aux[::-1])
        assert np.linalg.norm(bae_residual(swapped, B_GEN, 3)) < 1e-10

    def test_user_seed_full_vector(self, gen_32):
        s = gen_32[0]
        res = solve_bae(EVEN, 3, 2, B_GEN, seeds=[s.vector + 1e-4], options=None, rng=0)
        assert any(abs(energy_from_roots(r, 1.0) - energy_from_roots(s, 1.0)) < 1e-10 for r in res)

    def test_wrong_case_rejected(self):
        with pytest.raises(ValueError):
            solve_bae(PARALLEL, 2, 1, B_GEN)
        with pytest.raises(ValueError):
            solve_bae(EVEN, 2, 2, B_PAR)
        with pytest.raises(ValueError):
            solve_bae("bogus", 2, 1, B_GEN)

    def test_candidates_upper_half_plane(self):
        cands = lambda_candidates(3, B_GEN)
        assert np.all(cands.imag >= 0) and np.all(np.abs(cands) > 1e-6)
        assert np.all(np.abs(cands - ETA / 2) > 1e-6)

    def test_canonical_lambda(self):
        lam = canonical_lambda([-0.5 + 0.1j, 0.2j * -1, 0.3])
        assert np.all((lam.real > 0) | ((np.abs(lam.real) < 1e-12) & (lam.imag > 0)))


class TestVerification:
    def test_all_checks_pass(self, gen_32):
        for s in gen_32:
            rep = verify_solution(s, B_GEN, 3)
            assert rep["all_pass"], {k: v for k, v in rep.items() if isinstance(v, dict) and not v["pass"]}

    def test_lambda_at_zero_via_tq(self, gen_32):
        s = gen_32[0]
        prof = TQProfile.from_roots(s, B_GEN)
        # u = 0 is a removable point of the even ansatz; approach it
        val = tq_lambda(1e-7, prof)
        assert abs(val - lambda_at_zero(s.lam, B_GEN)) < 1e-5 * max(1.0, abs(val))

    def test_tq_polynomial_and_crossing(self, gen_32):
        s = gen_32[-1]
        prof = TQProfile.from_roots(s, B_GEN)
        nodes = 1.3 * np.exp(2j * np.pi * (np.arange(10) + 0.3) / 10) - ETA / 2
        fit = fit_polynomial([(u, tq_lambda(u, prof)) for u in nodes], 6)
        assert fit.residual < 1e-8 * max(1.0, np.max(np.abs(fit.coefficients)))
        u = 0.37 - 0.81j
        assert abs(tq_lambda(u, prof) - tq_lambda(-u - ETA, prof)) < 1e-8 * max(1.0, abs(tq_lambda(u, prof)))

    def test_perturbed_root_fails_quantization(self, gen_32):
        s = gen_32[0]
        bad = BetheRoots(s.case, s.lam + np.array([1e-3, 0]), s.aux)
        rep = verify_solution(bad, B_GEN, 3)
        assert rep["quantization"]["value"] > 1e-4 and not rep["quantization"]["pass"]

    def test_parallel_case_checks(self, par_21):
        for s in par_21:
            assert verify_solution(s, B_PAR, 2)["all_pass"]


class TestCaseConsistency:
    def test_rotation_keeps_norms_and_branches(self):
        bt = rotate_field_N(B_PAR, 0.2)
        assert bt.normN == pytest.approx(B_PAR.normN) and bt.is_integrable
        assert (bt.sign1, bt.signN) == (B_PAR.sign1, B_PAR.signN)
        assert bt.c_inhom > 0

    def test_continuation_tracks_energy(self):
        path = lambda th: rotate_field_N(B_PAR, th)  # noqa: E731
        start = solve_bae(ODD, 2, 1, path(0.3), rng=0)
        pts = continue_solution(start[0], 2, path, np.geomspace(0.3, 0.05, 6))
        # intermediate adaptive steps may be inserted; the last target must be reached
        assert len(pts) >= 6 and pts[-1][0] == pytest.approx(0.05)
        e = np.array([energy_from_roots(r, B_PAR.t) for _, r in pts])
        assert np.max(np.abs(np.diff(e))) < 0.5
        assert contained([e[-1]], ed(2, 1, path(0.05)))

    def test_two_sites(self):
        rep = case_consistency(2, 1, B_PAR, rng=0)
        assert rep["tracks"] and rep["pass"], rep["max_deviation"]

    def test_requires_collinear(self):
        with pytest.raises(ValueError):
            case_consistency(2, 1, B_GEN)


def test_lambda_at_zero_check(gen_32):
    # the fitted T-Q eigenvalue reproduces Lambda at u = 0
    s = gen_32[0]
    rep = verify_solution(s, B_GEN, 3)
    assert rep["lambda_at_zero"]["pass"]
