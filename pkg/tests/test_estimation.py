from __future__ import annotations

import math
from fractions import Fraction

import pytest

from oracles import packing_count
from uvinfo.channel import c0_lower_profile, complete_confusion, known_capacity, noiseless, pentagon
from uvinfo.errors import InputError
from uvinfo.estimation import (
    ACHIEVABLE,
    BOUNDARY,
    NECESSARY_VIOLATED,
    UNKNOWN,
    change_coordinates,
    closed_form_bound_bits,
    eigenvalues_of,
    feasibility_check,
    growth2,
    inverse,
    load_plant,
    make_plant,
    matmul,
    matpow,
    necessity_witness,
    unstable_exponent,
    witness_intervals,
)


class TestLinearAlgebra:
    def test_inverse_exact(self):
        A = ((Fraction(2), Fraction(1)), (Fraction(1), Fraction(1)))
        assert matmul(A, inverse(A)) == ((1, 0), (0, 1))

    def test_singular(self):
        with pytest.raises(InputError):
            inverse(((1, 2), (2, 4)))

    def test_matpow(self):
        assert matpow(((1, 1), (0, 1)), 5) == ((1, 5), (0, 1))

    def test_triangular_eigenvalues_exact(self):
        assert eigenvalues_of(((Fraction(3, 2), 7), (0, -2))) == (Fraction(3, 2), -2)

    def test_rotation_eigenvalues_numeric(self):
        eigs = eigenvalues_of(((0, -2), (2, 0)))
        assert sorted(abs(complex(e)) for e in eigs) == pytest.approx([2, 2])


class TestPlant:
    def test_file(self, data_dir):
        P = load_plant(data_dir / "plant_lambda2_disturbed.json")
        assert P.eigenvalues == (2,) and P.c == Fraction(1, 100)

    def test_unobservable(self):
        with pytest.raises(InputError):
            make_plant([[2, 0], [0, 3]], [[1, 0]])

    def test_inconsistent_eigenvalues(self):
        with pytest.raises(InputError):
            make_plant([[2]], eigenvalues=[3])

    def test_bad_shapes_and_bounds(self):
        with pytest.raises(InputError):
            make_plant([[1, 2]])
        with pytest.raises(InputError):
            make_plant([[2]], l=0)
        with pytest.raises(InputError):
            make_plant([[2]], c=-1)

    def test_change_coordinates_keeps_spectrum(self):
        P = make_plant([[2, 1], [0, 3]], [[1, 0]])
        Q = change_coordinates(P, [[1, 1], [0, 1]])
        assert sorted(eigenvalues_of(Q.A)) == [2, 3]


class TestGrowth:
    def test_h_rho(self):
        assert unstable_exponent([2], 1) == 1.0
        assert unstable_exponent([2, 3, Fraction(1, 2)], 1) == pytest.approx(math.log2(6))
        assert growth2([2], Fraction(19, 20)) == Fraction(1600, 361)

    def test_complex_modulus(self):
        assert unstable_exponent([complex(1, 1)], 1) == pytest.approx(0.5)

    def test_rho_must_be_positive(self):
        with pytest.raises(InputError):
            growth2([2], 0)


class TestVerdict:
    def test_pentagon_achieves(self):
        v = feasibility_check([2], 1, c0_lower_profile(pentagon(), 2))
        assert (v.verdict, v.tau, v.codebook_size) == (ACHIEVABLE, 2, 5)

    def test_zero_capacity_violates(self):
        C = complete_confusion(2)
        v = feasibility_check([2], 1, c0_lower_profile(C, 2), known_capacity(C))
        assert v.verdict == NECESSARY_VIOLATED and v.tau is None

    def test_noiseless_binary_is_boundary(self):
        C = noiseless(2)
        assert feasibility_check([2], 1, c0_lower_profile(C, 2), known_capacity(C)).verdict == BOUNDARY

    def test_unknown_without_capacity(self):
        assert feasibility_check([4], 1, c0_lower_profile(pentagon(), 2)).verdict == UNKNOWN

    def test_float_lower_bound(self):
        assert feasibility_check([2], 1, 1.5).verdict == ACHIEVABLE

    def test_rho_above_spectrum(self):
        with pytest.raises(InputError):
            feasibility_check([2], 2, 1.0)


class TestWitness:
    @pytest.mark.parametrize(
        "eigs,eps,tau,count",
        [([2], "1/4", 4, 5), ([2], "1/20", 1, 1), ([2, 3], "1/10", 2, 21), ([3], "1/3", 3, 8)],
    )
    def test_counts_match_floor_formula(self, eigs, eps, tau, count):
        W = necessity_witness(eigs, 1, eps, tau)
        ks, total = packing_count(eigs, 1, Fraction(eps), tau)
        assert list(W.k) == ks and W.count == total == count
        assert W.bound_bits == math.log2(count)

    def test_eps_range(self):
        with pytest.raises(InputError):
            necessity_witness([2], 1, "1/2", 1)
        with pytest.raises(InputError):
            necessity_witness([2], 1, 0, 1)

    def test_closed_form_is_below_count(self):
        for tau in range(1, 8):
            W = necessity_witness([2, 3], 1, "1/10", tau)
            assert closed_form_bound_bits([2, 3], 1, "1/10", tau) <= W.bound_bits + 1e-12

    def test_intervals_are_separated(self):
        W = necessity_witness([2], 1, "1/4", 4)
        (axis,) = witness_intervals(W)
        assert len(axis) == 5
        gaps = [b[0] - a[1] for a, b in zip(axis, axis[1:])]
        assert all(g == Fraction(2, 5) / 2 for g in gaps)
