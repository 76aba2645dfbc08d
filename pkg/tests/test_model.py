from math import comb

import numpy as np
import pytest

from oracles import fock_tj_spectrum, free_chain_levels
from tjodba.errors import InvalidSector
from tjodba.model import BoundaryFields, build_basis, build_hamiltonian, ed_spectrum, total_spin_operators

T = 1.3


def spectrum(N, M, b):
    return ed_spectrum(build_hamiltonian(N, M, b))


class TestBoundaryFields:
    def test_derived_constants(self):
        b = BoundaryFields(t=1.0, xi1=-0.4, xiN=-0.7, h1=(0.6, 0, 0), hN=(0, 0.3, 0))
        assert b.p == -0.7 / 2j and b.q == 0.4 / 2j
        assert b.norm1 == pytest.approx(0.6) and b.dot == 0.0
        assert b.sgn_dot == 1.0  # sgn(0) = +1
        assert b.c_inhom == pytest.approx(2 * 0.6 * 0.3)
        assert b.is_integrable

    def test_collinear_zero_c(self):
        par = BoundaryFields.integrable((0, 0, 0.5), (0, 0, 0.2))
        anti = BoundaryFields.integrable((0.3, 0.1, 0), (-0.6, -0.2, 0))
        assert par.c_inhom == 0.0 and par.collinear
        assert anti.c_inhom == 0.0 and anti.collinear

    def test_c_signed_for_obtuse_fields(self):
        # h1.hN < 0 and not collinear: c = 2[-|h1||hN| - h1.hN] < 0
        b = BoundaryFields.integrable((1.0, 0, 0), (-0.5, 0.5, 0))
        assert b.c_inhom < 0 and not b.collinear

    def test_integrable_constructor_branches(self):
        b = BoundaryFields.integrable((0, 0.3, 0.4), (0.2, 0, 0), t=2.0, sign1=1, signN=-1)
        assert b.xi1 == pytest.approx(0.5 - 2.0) and b.xiN == pytest.approx(-0.2 - 2.0)
        assert (b.sign1, b.signN) == (1, -1)
        assert not b.replace(xi1=b.xi1 + 0.1).is_integrable

    def test_bad_vector(self):
        with pytest.raises(ValueError):
            BoundaryFields(h1=(1.0, 2.0))


class TestBasis:
    @pytest.mark.parametrize("N,M,dim", [(2, 0, 1), (2, 1, 4), (4, 2, 24), (5, 3, 80)])
    def test_dimension(self, N, M, dim):
        basis = build_basis(N, M)
        assert basis.dim == dim == comb(N, M) * 2**M

    def test_no_double_occupancy_and_order(self):
        basis = build_basis(4, 3)
        for pos, _ in basis.states:
            assert all(a < b for a, b in zip(pos, pos[1:]))
        assert list(basis.states) == sorted(basis.states)

    def test_invalid_sector(self):
        with pytest.raises(InvalidSector):
            build_basis(2, 3)


class TestHamiltonian:
    def test_two_sites_one_electron(self):
        b = BoundaryFields(t=T, xi1=-T, xiN=-T)
        H = build_hamiltonian(2, 1, b).matrix
        # per spin the block is [[-t, -t], [-t, -t]]
        for s in (0, 1):
            idx = [build_basis(2, 1).index[((x,), (s,))] for x in (0, 1)]
            assert np.allclose(H[np.ix_(idx, idx)], [[-T, -T], [-T, -T]])
        assert np.allclose(spectrum(2, 1, b), [-2 * T, -2 * T, 0, 0])

    def test_two_sites_two_electrons(self):
        b = BoundaryFields(t=T, xi1=-T, xiN=-T)
        assert np.allclose(spectrum(2, 2, b), [-4 * T, -2 * T, -2 * T, -2 * T])

    def test_three_sites_free(self):
        b = BoundaryFields(t=T, xi1=0.0, xiN=0.0)
        r = np.sqrt(2) * T
        assert np.allclose(spectrum(3, 1, b), [-r, -r, 0, 0, r, r], atol=1e-12)

    def test_free_chain_four_sites(self):
        b = BoundaryFields(t=T, xi1=0.0, xiN=0.0)
        expected = np.repeat(free_chain_levels(4, T), 2)
        assert np.allclose(spectrum(4, 1, b), expected, atol=1e-12)

    def test_vacuum(self):
        assert np.allclose(spectrum(3, 0, BoundaryFields()), [0.0])

    @pytest.mark.parametrize("N,M", [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3)])
    def test_against_fock_space_oracle(self, N, M, rng):
        h1, hN = rng.normal(size=3) * 0.5, rng.normal(size=3) * 0.5
        t, xi1, xiN = 0.8, rng.normal(), rng.normal()
        b = BoundaryFields(t=t, xi1=xi1, xiN=xiN, h1=h1, hN=hN)
        ref = fock_tj_spectrum(N, M, t, xi1, xiN, h1, hN)
        assert np.max(np.abs(spectrum(N, M, b) - ref)) < 1e-10

    def test_hermitian(self, rng):
        for _ in range(5):
            b = BoundaryFields(t=rng.normal(), xi1=rng.normal(), xiN=rng.normal(), h1=rng.normal(size=3),
                               hN=rng.normal(size=3))
            H = build_hamiltonian(4, 2, b).matrix
            assert np.max(np.abs(H - H.conj().T)) < 1e-12

    @pytest.mark.parametrize("N", [1, 2, 3, 4])
    def test_sector_additivity(self, N, rng):
        b = BoundaryFields(t=1.0, xi1=0.3, xiN=-0.2, h1=rng.normal(size=3), hN=rng.normal(size=3))
        assert sum(len(spectrum(N, M, b)) for M in range(N + 1)) == 3**N

    def test_zero_field_su2(self):
        b = BoundaryFields(t=1.0, xi1=-0.3, xiN=0.4)
        H = build_hamiltonian(4, 2, b)
        ops = total_spin_operators(H.basis)
        for name in ("Sz", "S+", "S-"):
            O = ops[name]
            assert np.max(np.abs(H.matrix @ O - O @ H.matrix)) < 1e-10
        # S^2 = S-S+ + Sz^2 + Sz
        S2 = ops["S-"] @ ops["S+"] + ops["Sz"] @ ops["Sz"] + ops["Sz"]
        assert np.max(np.abs(H.matrix @ S2 - S2 @ H.matrix)) < 1e-10
        # Sz = +1 and Sz = -1 blocks are degenerate
        sz = np.real(np.diag(ops["Sz"]))
        up = np.linalg.eigvalsh(H.matrix[np.ix_(sz == 1, sz == 1)])
        down = np.linalg.eigvalsh(H.matrix[np.ix_(sz == -1, sz == -1)])
        assert np.allclose(up, down)

    def test_single_particle_t_symmetry(self):
        b = BoundaryFields(t=1.0, xi1=0.0, xiN=0.0, h1=(0.2, 0, 0.1), hN=(0, 0.3, 0))
        e_pos = spectrum(4, 1, b)
        e_neg = spectrum(4, 1, b.replace(t=-1.0))
        assert np.allclose(e_pos, e_neg, atol=1e-12)
