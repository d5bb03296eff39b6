import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sailkit.cone import cone_from_matrix, rational_cone
from sailkit.errors import ConeNotInvariant, CoordinateZero, NonIntegralFixedData, P1Violated
from sailkit.exact import intmat
from sailkit.operators import (NOT_UNIT_MODULUS, check_properties, classify_unimodular_3d,
                               edge_count_in_subspaces, is_hyperbolic, jordan_growth_probe, linearize_affine,
                               preserves_cone, spectral_filtration)
from sailkit.stars import AffineMap

from conftest import CUBIC, FIB, FIB_RAYS
from test_cone_sail import random_unimodular

I2 = [[1, 0], [0, 1]]
I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
BLOCK = [[2, 1, 0, 0], [1, 1, 0, 0], [0, 0, 2, 1], [0, 0, 1, 1]]
SWAP = [[0, 1], [1, 0]]


def conj(U, A):
    return intmat.matmul(intmat.matmul(U, A), intmat.inverse_unimodular(U))


def direct_sum(a, B):
    """The block matrix diag(a, B) for a scalar a and a 2x2 block B."""
    return [[a, 0, 0], [0, B[0][0], B[0][1]], [0, B[1][0], B[1][1]]]


# --- P1, P2, classes ----------------------------------------------------------------

def test_identity_fails_p1():
    assert not check_properties(I3)["P1"]


def test_fibonacci_flags():
    f = check_properties(FIB)
    assert f["P1"] and f["P2"] and f["distinct"]
    assert f["in_A0"] and f["in_A1"]


def test_block_matrix_flags():
    f = check_properties(BLOCK)
    assert f["P1"] and f["P2"] and not f["distinct"]
    assert f["in_A0"] and not f["in_A1"]


def test_complex_pair_with_shared_modulus_fails_p2():
    # two rotation blocks: four eigenvalues on the unit circle with distinct arguments
    A = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 1]]
    assert not check_properties(A)["P2"]
    assert check_properties([[0, -1], [1, 0]])["P2"]


def test_hyperbolic_examples():
    assert is_hyperbolic(FIB)
    assert is_hyperbolic(CUBIC)
    assert not is_hyperbolic(BLOCK)
    assert not is_hyperbolic([[0, -1], [1, 0]])
    assert not is_hyperbolic(I2)


def sl_matrices(n):
    return st.integers(0, 10**6).map(lambda s: random_unimodular(random.Random(s), n, steps=5))


@settings(max_examples=40, deadline=None)
@given(sl_matrices(3), sl_matrices(3))
def test_flags_are_conjugation_invariant(A, U):
    assert check_properties(A) == check_properties(conj(U, A))
    assert is_hyperbolic(A) == is_hyperbolic(conj(U, A))


@settings(max_examples=40, deadline=None)
@given(sl_matrices(3))
def test_hyperbolic_implies_flags(A):
    if is_hyperbolic(A):
        f = check_properties(A)
        assert f["P1"] and f["P2"] and f["distinct"]


# --- cone invariance ----------------------------------------------------------------

def test_preserves_cone_examples(fib_cone):
    quad = rational_cone(I2)
    assert preserves_cone(FIB, fib_cone)
    assert preserves_cone(SWAP, quad)
    assert not preserves_cone(FIB, quad)


def test_preserves_cone_closed_under_products(fib_cone, cubic_cone):
    assert preserves_cone(intmat.matmul(FIB, FIB), fib_cone)
    A2 = intmat.matmul(CUBIC, CUBIC)
    assert preserves_cone(A2, cubic_cone)
    assert preserves_cone(intmat.matmul(A2, intmat.inverse_unimodular(CUBIC)), cubic_cone)
    quad = rational_cone(I2)
    assert preserves_cone(intmat.matmul(SWAP, SWAP), quad)


# --- affine to linear ------------------------------------------------------------------

def test_linearize_zero_translation():
    b, A = linearize_affine(AffineMap(FIB))
    assert b == (0, 0)


def test_linearize_fibonacci():
    m = AffineMap(FIB, (1, 0))
    b, A = linearize_affine(m)
    # (E - A) b = a by substitution
    EA = [[1 - 2, -1], [-1, 1 - 1]]
    assert tuple(intmat.matvec(EA, b)) == (1, 0)


def test_linearize_rejects_eigenvalue_one():
    with pytest.raises(P1Violated):
        linearize_affine(AffineMap([[1, 1], [0, 1]], (1, 0)))


def test_linearize_non_integral():
    # det(E - A) = 2 - tr A = -2 here, and the second row of E - A is (-2, 0)
    A = [[3, 1], [2, 1]]
    with pytest.raises(NonIntegralFixedData):
        linearize_affine(AffineMap(A, (0, 1)))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=2), st.lists(st.integers(-30, 30), min_size=2, max_size=2))
def test_linearize_conjugation_identity(a, x):
    m = AffineMap(FIB, a)
    b, A = linearize_affine(m)
    bx = tuple(p + q for p, q in zip(b, x))
    assert m(bx) == tuple(p + q for p, q in zip(b, intmat.matvec(A, x)))


# --- spectral filtration --------------------------------------------------------------

def test_filtration_examples():
    f = spectral_filtration(FIB)
    assert f.k == 2 and f.dims == [1, 1]
    f = spectral_filtration(BLOCK)
    assert f.k == 2 and f.dims == [2, 2]
    f = spectral_filtration(I3)
    assert f.k == 1 and f.dims == [3]
    assert f.L(1)[0] == 3 and f.Lprime(1)[0] == 3


def test_filtration_partial_sums():
    f = spectral_filtration(CUBIC)
    assert f.dims == [1, 1, 1]
    assert [f.L(i)[0] for i in (1, 2, 3)] == [1, 2, 3]
    assert [f.Lprime(i)[0] for i in (1, 2, 3)] == [3, 2, 1]


def test_edge_counts(fib_cone, cubic_cone):
    assert edge_count_in_subspaces(spectral_filtration(FIB), fib_cone)["counts"] == [1, 1]
    r = edge_count_in_subspaces(spectral_filtration(CUBIC), cubic_cone)
    assert r["counts"] == [1, 1, 1] and r["matches"]
    r = edge_count_in_subspaces(spectral_filtration(SWAP), rational_cone(I2))
    assert r["counts"] == [2] and r["matches"]
    with pytest.raises(ConeNotInvariant):
        edge_count_in_subspaces(spectral_filtration(FIB), rational_cone(I2))


# --- Jordan cell growth --------------------------------------------------------------

def test_growth_trivial_cell():
    r = jordan_growth_probe([[2]], [1], 1, range(1, 20))
    assert all(x == 1 for x in r["ratios"])


def test_growth_two_cell():
    r = jordan_growth_probe([[2, 1], [0, 2]], [3, 5], 1, range(1, 80), burn_in=10)
    assert r["ok"]
    assert r["limit"] == Fraction(5, 2)


def test_growth_three_cell():
    A = [[3, 1, 0], [0, 3, 1], [0, 0, 3]]
    r = jordan_growth_probe(A, [1, 1, 1], 1, range(10, 61))
    assert r["ok"]
    # exact values from the binomial expansion of the cell powers
    for m, v in zip(r["ms"], r["values"]):
        M = intmat.matpow(A, m)
        assert v == sum(M[0])


def test_growth_zero_coordinate():
    with pytest.raises(CoordinateZero):
        jordan_growth_probe([[2, 1], [0, 2]], [0, 1], 1, range(1, 5))


# --- the seven forms ---------------------------------------------------------------

ROT4 = [[0, -1], [1, 0]]
ROT6 = [[0, -1], [1, 1]]
ROT3 = [[-1, -1], [1, 0]]

FORMS = [
    (I3, 1),
    ([[1, 0, 0], [0, 1, 1], [0, 0, 1]], 2),
    ([[1, 1, 0], [0, 1, 1], [0, 0, 1]], 3),
    ([[1, 0, 0], [0, -1, 1], [0, 0, -1]], 4),
    (direct_sum(1, FIB), 5),
    (direct_sum(1, [[-1, 0], [0, -1]]), 5),
    (direct_sum(1, ROT4), 6),
    (direct_sum(1, ROT6), 6),
    (direct_sum(1, ROT3), 6),
    (direct_sum(-1, ROT4), 7),
    (direct_sum(-1, I2), 7),
]


@pytest.mark.parametrize("A,form", FORMS)
def test_seven_forms(A, form):
    assert classify_unimodular_3d(A).form == form


def test_form_parameters():
    r = classify_unimodular_3d(direct_sum(1, ROT4))
    assert r.params["two_cos_phi"] == 0 and r.params["phi_over_pi"] == Fraction(1, 2)
    r = classify_unimodular_3d(direct_sum(1, ROT6))
    assert r.params["phi_over_pi"] == Fraction(1, 3)
    r = classify_unimodular_3d(direct_sum(1, FIB))
    assert r.params["lambda_plus_inverse"] == 3


def test_hyperbolic_is_not_a_unit_form():
    assert classify_unimodular_3d(CUBIC).form == NOT_UNIT_MODULUS


@pytest.mark.parametrize("A,form", FORMS)
def test_forms_stable_under_conjugation(A, form):
    rng = random.Random(form)
    for _ in range(5):
        U = random_unimodular(rng, 3)
        assert classify_unimodular_3d(conj(U, A)).form == form
