import cmath

import numpy as np
import pytest

from oracles import random_box_point
from tjodba.errors import PoleEncountered, SingularDenominator
from tjodba.model import BoundaryFields, h_dot_sigma
from tjodba.numerics import embed_two, max_abs_diff
from tjodba.scattering import (ID2, PERMUTATION, Momentum, bar_tau, exp_ik, kbar_minus, kbar_minus_raw,
                               kbar_minus_reduced, kbar_plus, kbar_plus_raw, kbar_plus_reduced, quantization_target,
                               reflection_residual, s_matrix)

ID4 = np.eye(4)
B_GEN = BoundaryFields.integrable((0.3, 0.0, 0.4), (0.0, 0.2, 0.1))


class TestMomentum:
    def test_round_trip(self, rng):
        for _ in range(10):
            lam = random_box_point(rng)
            m = Momentum.from_lambda(lam)
            assert abs(cmath.exp(1j * m.k) - exp_ik(lam)) < 1e-12
            back = Momentum.from_k(m.k)
            assert abs(back.lam - lam) < 1e-10

    def test_free_chain_map(self):
        k = 0.7
        # e^{ik} = (lam - i/2)/(lam + i/2) gives lam = -cot(k/2)/2 for real k
        assert abs(Momentum.from_k(k).lam + 0.5 / np.tan(k / 2)) < 1e-12

    def test_poles(self):
        with pytest.raises(PoleEncountered):
            exp_ik(-0.5j)
        with pytest.raises(PoleEncountered):
            Momentum.from_k(0.0)


class TestSMatrix:
    def test_zero_is_permutation(self):
        assert max_abs_diff(s_matrix(0.0), PERMUTATION) < 1e-15

    def test_unitarity_point(self):
        assert max_abs_diff(s_matrix(0.37) @ s_matrix(-0.37), ID4) < 1e-14

    def test_entry_at_one(self):
        S = s_matrix(1.0)
        # |up down> is basis index 1
        assert abs(S[1, 1] - 1 / (1 + 1j)) < 1e-15
        assert abs(S[1, 2] - 1j / (1 + 1j)) < 1e-15

    def test_unitarity_grid(self, rng):
        for _ in range(50):
            lam = random_box_point(rng)
            assert max_abs_diff(s_matrix(lam) @ s_matrix(-lam), ID4) < 1e-13

    def test_yang_baxter(self, rng):
        for _ in range(10):
            lam, mu = random_box_point(rng), random_box_point(rng)
            S = lambda x, a, b: embed_two(s_matrix(x), a, b, 3)  # noqa: E731
            lhs = S(lam - mu, 0, 1) @ S(lam, 0, 2) @ S(mu, 1, 2)
            rhs = S(mu, 1, 2) @ S(lam, 0, 2) @ S(lam - mu, 0, 1)
            assert max_abs_diff(lhs, rhs) < 1e-12

    def test_pole(self):
        with pytest.raises(PoleEncountered):
            s_matrix(-1j)


class TestReflectionMatrices:
    @pytest.mark.parametrize("k", [0.3, 1.1 + 0.2j, 2.5])
    def test_free_boundary_plus(self, k):
        t = 1.4
        b = BoundaryFields(t=t, xi1=-t, xiN=-t)
        # numerator 2t^2(1 - cos k), denominator t^2 (1 - e^{ik})^2 = -4 t^2 e^{ik} sin^2(k/2)
        assert max_abs_diff(kbar_plus_raw(k, b), cmath.exp(-1j * k) * ID2) < 1e-12

    def test_free_boundary_minus_scalar(self):
        b = BoundaryFields(t=1.0, xi1=-1.0, xiN=-1.0)
        K = kbar_minus_raw(0.8, b)
        assert abs(K[0, 1]) < 1e-15 and abs(K[0, 0] - K[1, 1]) < 1e-15

    def test_k_to_zero_limit(self):
        # both numerator and denominator vanish at k = 0 on the integrable manifold
        with pytest.raises(SingularDenominator):
            kbar_plus_raw(0.0, B_GEN)
        limit = -B_GEN.sign1 * h_dot_sigma(B_GEN.h1) / B_GEN.norm1
        assert max_abs_diff(kbar_plus_raw(1e-6, B_GEN), limit) < 1e-5

    def test_reduced_forms(self, rng):
        for _ in range(10):
            b = BoundaryFields.random_integrable(rng)
            lam = random_box_point(rng)
            assert max_abs_diff(kbar_plus(lam, b), kbar_plus_reduced(lam, b)) < 1e-12
            assert max_abs_diff(kbar_minus(lam, b), kbar_minus_reduced(lam, b)) < 1e-12

    def test_antidiagonal_structure(self):
        diag = BoundaryFields.integrable((0, 0, 0.3), (0, 0, 0.6))
        assert abs(kbar_minus_raw(0.9, diag)[0, 1]) < 1e-15
        assert abs(kbar_minus_raw(0.9, B_GEN)[0, 1]) > 1e-3

    def test_singular_denominator(self):
        # (t + xi e^{ik})^2 = h^2 e^{2ik} at e^{ik} = t / (|h| - xi)
        b = BoundaryFields(t=1.0, xi1=0.5, h1=(0, 0, 0.2))
        z = b.t / (b.norm1 - b.xi1)
        with pytest.raises(SingularDenominator):
            kbar_plus_raw(-1j * cmath.log(z), b)


class TestReflectionEquation:
    def test_integrable_draws(self, rng):
        for _ in range(20):
            b = BoundaryFields.random_integrable(rng)
            u1, u2 = random_box_point(rng), random_box_point(rng)
            assert reflection_residual(b, u1, u2, "+") < 1e-12
            assert reflection_residual(b, u1, u2, "-") < 1e-12

    def test_perturbed_draws_fail(self, rng):
        for _ in range(20):
            b = BoundaryFields.random_integrable(rng)
            u1, u2 = random_box_point(rng), random_box_point(rng)
            assert reflection_residual(b.replace(xi1=b.xi1 + 0.1), u1, u2, "+") > 1e-4

    def test_scalar_boundary(self, rng):
        b = BoundaryFields(t=1.0, xi1=-1.0, xiN=0.3, h1=(0, 0, 0), hN=(0.1, 0.2, 0))
        assert reflection_residual(b, 0.3 + 0.1j, -0.7 + 0.4j, "+") < 1e-14


class TestBarTau:
    def test_single_particle(self):
        lam = [0.4 + 0.3j]
        assert max_abs_diff(bar_tau(0.9, lam, 0, B_GEN), kbar_plus(0.9, B_GEN) @ kbar_minus(0.9, B_GEN)) < 1e-14

    def test_two_particles_manual_expansion(self):
        lam = [0.4 + 0.3j, -0.8 + 0.1j]
        u = 0.25 - 0.5j
        # particle 0: K+_0(u) S_01(-u - l1) K-_0(u) S_10(l1 - u)
        K = lambda m: np.kron(m, ID2)  # noqa: E731
        expected = (K(kbar_plus(u, B_GEN)) @ s_matrix(-u - lam[1]) @ K(kbar_minus(u, B_GEN))
                    @ s_matrix(lam[1] - u))
        assert max_abs_diff(bar_tau(u, lam, 0, B_GEN), expected) < 1e-14
        # particle 1: S_01(l0 - u) K+_1(u) S_10(-u - l0) K-_1(u)
        K1 = lambda m: np.kron(ID2, m)  # noqa: E731
        expected = (s_matrix(lam[0] - u) @ K1(kbar_plus(u, B_GEN)) @ s_matrix(-u - lam[0])
                    @ K1(kbar_minus(u, B_GEN)))
        assert max_abs_diff(bar_tau(u, lam, 1, B_GEN), expected) < 1e-14

    def test_commuting_at_rapidities(self, rng):
        for M in (2, 3):
            lam = [random_box_point(rng) for _ in range(M)]
            ops = [bar_tau(lam[j], lam, j, B_GEN) for j in range(M)]
            for j in range(M):
                for k in range(j):
                    assert max_abs_diff(ops[j] @ ops[k], ops[k] @ ops[j]) < 1e-10

    def test_index_range(self):
        with pytest.raises(IndexError):
            bar_tau(0.1, [0.2], 1, B_GEN)

    def test_quantization_target(self):
        assert abs(quantization_target(0.7, 3) - exp_ik(0.7) ** -6) < 1e-14
