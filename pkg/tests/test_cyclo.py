import pickle
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix

from cyquot.algebra.cyclo import (
    T,
    UNITS,
    CycMatrix,
    CycNum,
    conj,
    det_int,
    integral_matrix,
    mul,
    norm,
    snf,
    solve_integral,
    zeta,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=9)
eisenstein = st.builds(lambda a, b: CycNum(3, (a, b)), small, small)
septimal = st.builds(lambda cs: CycNum(7, cs), st.lists(st.integers(-3, 3), min_size=6, max_size=6))
int_matrices = st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3)
# строга діагональна перевага: |d_ii| ≥ 21 > 5·4
nonsingular_6x6 = st.builds(
    lambda M, signs: [[x + (25 * signs[i] if i == j else 0) for j, x in enumerate(row)] for i, row in enumerate(M)],
    st.lists(st.lists(st.integers(-4, 4), min_size=6, max_size=6), min_size=6, max_size=6),
    st.lists(st.sampled_from((1, -1)), min_size=6, max_size=6),
)


# === Поле ℚ(ζ₃) ===

def test_zeta_relation():
    z = zeta(3)
    assert z * z == -1 - z
    assert z ** 3 == CycNum.one()


def test_t_fixed_by_zeta_modulo_integers():
    assert (zeta(3) * T - T).is_integral()
    assert (T.conj() + T).is_integral()
    assert not T.is_integral()


def test_zeta_minus_one_times_t_is_integral():
    assert ((zeta(3) - 1) * T).is_integral()


def test_mul_examples():
    assert mul(zeta(3), zeta(3)) == CycNum(3, (-1, -1))
    assert mul(CycNum(3, (2, 0)), CycNum(3, (0, 3))) == CycNum(3, (0, 6))


def test_conj_and_norm_examples():
    assert conj(zeta(3)) == zeta(3, 2)
    assert norm(zeta(3) - 1) == 3
    assert norm(CycNum(3, (2, 1))) == 3
    assert norm(zeta(7) - 1) == 7


def test_units_have_norm_one():
    assert len(UNITS) == 6
    assert len(set(UNITS)) == 6
    assert all(norm(u) == 1 for u in UNITS)


def test_norm_one_elements_are_units():
    # ℤ[ζ₃] у ящику |a|, |b| ≤ 4: норма 1 рівно на шести одиницях
    box = [CycNum(3, (a, b)) for a in range(-4, 5) for b in range(-4, 5)]
    assert {x for x in box if norm(x) == 1} == set(UNITS)


def test_mixed_orders_rejected():
    with pytest.raises(TypeError):
        zeta(3) + zeta(7)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        CycNum.zero().inverse()


@given(eisenstein, eisenstein, eisenstein)
def test_ring_axioms(x, y, z):
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x


@given(eisenstein, eisenstein)
def test_norm_multiplicative(x, y):
    assert norm(x * y) == norm(x) * norm(y)


@given(eisenstein, eisenstein)
def test_conj_is_ring_automorphism(x, y):
    assert conj(x * y) == conj(x) * conj(y)
    assert conj(conj(x)) == x


@given(eisenstein)
def test_inverse(x):
    if x.is_zero():
        return
    assert x * x.inverse() == CycNum.one()


@given(septimal, septimal)
def test_norm_multiplicative_z7(x, y):
    assert norm(x * y) == norm(x) * norm(y)


@given(eisenstein)
def test_pickle_preserves_value(x):
    restored = pickle.loads(pickle.dumps(x))
    assert restored == x
    assert hash(restored) == hash(x)


@given(eisenstein)
def test_frac_differs_by_integer(x):
    r = x.frac()
    assert (x - r).is_integral()
    assert all(Fraction(0) <= c < 1 for c in r.coeffs)


# === Матриці ===

def test_matrix_inverse():
    z = zeta(3)
    m = CycMatrix([[1, z, 0], [0, 1, z], [z, 0, 1]])
    assert m @ m.inverse() == CycMatrix.identity()


def test_monomial_detection():
    assert CycMatrix([[0, 1, 0], [0, 0, zeta(3)], [-1, 0, 0]]).is_monomial()
    assert not CycMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]]).is_monomial()


def test_real_matrix_of_conjugation_is_involution():
    real = CycMatrix.identity().real_matrix(antilinear=True)
    n = len(real)
    square = [[sum(real[i][k] * real[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert square == [[1 if i == j else 0 for j in range(n)] for i in range(n)]


# === Цілочисельна лінійна алгебра ===

def test_snf_of_zeta_minus_one():
    basis = [(CycNum.one(),), (zeta(3),)]
    X = integral_matrix(CycMatrix([[zeta(3) - 1]]), basis)
    assert X == ((-1, -1), (1, -2))
    assert snf(X) == [1, 3]


def test_snf_examples():
    assert snf([[2, 0], [0, 3]]) == [1, 6]
    assert snf([[3, 0, 0], [0, 3, 0], [0, 0, 3]]) == [3, 3, 3]


@given(int_matrices)
def test_snf_divisibility_and_determinant(M):
    d = snf(M)
    for a, b in zip(d, d[1:]):
        if a:
            assert b % a == 0
        else:
            assert b == 0
    product = 1
    for x in d:
        product *= x
    det = (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )
    assert product == abs(det)


@given(nonsingular_6x6)
def test_snf_nonsingular_6x6(M):
    d = snf(M)
    assert len(d) == 6
    assert all(d)
    for a, b in zip(d, d[1:]):
        assert b % a == 0
    product = 1
    for x in d:
        product *= x
    assert product == abs(Matrix(M).det())


def test_det_int_examples():
    standard_basis = []
    for i in range(3):
        for b in (CycNum.one(), zeta(3)):
            standard_basis.append(tuple(b if j == i else CycNum.zero() for j in range(3)))
    assert det_int(CycMatrix.scalar(zeta(3)) - CycMatrix.identity(), standard_basis) == 27
    assert det_int(CycMatrix.identity(), standard_basis) == 1


def test_solve_integral():
    assert solve_integral([[2, 0], [0, 3]], [4, 9]) == [2, 3]
    assert solve_integral([[2, 0], [0, 3]], [1, 0]) is None
    assert solve_integral([[1, 1]], [0]) is not None


@given(int_matrices, st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_solve_integral_solution_is_exact(M, x):
    v = [sum(M[i][j] * x[j] for j in range(3)) for i in range(3)]
    y = solve_integral(M, v)
    assert y is not None
    assert [sum(M[i][j] * y[j] for j in range(3)) for i in range(3)] == v
