import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cyquot.algebra.cyclo import CycMatrix, CycNum, T, zeta
from cyquot.algebra.groups import analytic_rep, elements
from cyquot.algebra.torus import (
    E3_POINTS,
    K1,
    K3,
    K4,
    SCALE,
    AffineFixedLocus,
    Kernel,
    TorusPoint,
    all_subgroups,
    cm_lattice_z7,
    fixed_point_count,
    kernel_enumerate,
    kernel_on_torus,
    lattice_from_kernel,
    lift,
    member,
    reduce,
    standard_lattice,
    torsion_generators,
)

ZERO = CycNum.zero()
ONE = CycNum.one()
TTT = (T, T, T)

coefficient = st.integers(-18, 18).map(lambda n: Fraction(n, SCALE))
ninths = st.builds(lambda a, b: CycNum(3, (a, b)), coefficient, coefficient)
vectors = st.tuples(ninths, ninths, ninths)


# === Ядра ===

def test_kernel_enumerate_counts():
    assert len(all_subgroups()) == 28
    assert len(kernel_enumerate()) == 15


def test_kernel_enumerate_membership():
    kernels = kernel_enumerate()
    assert K3 in kernels
    assert Kernel.span([(1, 0, 0)]) not in kernels
    assert Kernel.span([(1, 0, 0)]) in all_subgroups()


def test_kernel_enumerate_deterministic():
    assert kernel_enumerate() == kernel_enumerate()


def test_kernels_are_subgroups():
    for kernel in all_subgroups():
        assert kernel.is_closed()
        assert len(kernel) == 3 ** kernel.dim


def test_kernel_projection():
    assert K1.projection(0) == frozenset({0})
    assert K3.projection(2) == frozenset({0, 1, 2})


def test_lift_coordinates_fixed_by_zeta():
    for kernel in kernel_enumerate():
        for v in kernel.elements:
            for x in lift(v):
                assert (zeta(3) * x - x).is_integral()


# === Решітки ===

def test_lattice_indices(standard):
    assert lattice_from_kernel(K1) == standard
    assert lattice_from_kernel(K3).index_over(standard) == 3
    assert lattice_from_kernel(K4).index_over(standard) == 9
    assert lattice_from_kernel(K3).quotient_invariants(standard) == [1, 1, 1, 1, 1, 3]


@pytest.mark.parametrize("kernel", kernel_enumerate(), ids=lambda k: k.label())
def test_index_equals_kernel_order(kernel, standard):
    assert lattice_from_kernel(kernel).index_over(standard) == len(kernel)


def test_sublattice_check(standard):
    with pytest.raises(ValueError):
        standard.quotient_invariants(lattice_from_kernel(K3))


def test_lattice_json_shape():
    basis = lattice_from_kernel(K4).to_json()
    assert len(basis) == 6
    assert all(len(row) == 6 and all("/" in x for x in row) for row in basis)


# === Належність та зведення ===

def test_member_examples(lattices):
    assert member(TTT, lattices["L1"])
    assert not member((T, ZERO, ZERO), lattices["L1"])
    assert member((ZERO, ZERO, ZERO), lattices["L2"])
    assert member((T, -T, ZERO), lattices["L2"])


def test_reduce_examples(lattices, standard):
    assert reduce((ONE, ZERO, ZERO), standard).is_zero()
    assert reduce(TTT, lattices["L1"]).is_zero()
    point = reduce(TTT, standard)
    assert not point.is_zero()
    assert (point * 3).is_zero()


def test_reduce_rejects_large_denominators(standard):
    with pytest.raises(ValueError):
        reduce((CycNum(3, ("1/27", 0)), ZERO, ZERO), standard)


@given(vectors, vectors)
def test_reduce_compatible_with_addition(x, y):
    lattice = lattice_from_kernel(K4)
    rx, ry = reduce(x, lattice), reduce(y, lattice)
    total = reduce(tuple(a + b for a, b in zip(x, y)), lattice)
    assert rx + ry == total
    assert reduce(rx.to_vector(), lattice) == rx


@given(vectors, vectors)
def test_reduce_equal_iff_difference_in_lattice(x, y):
    lattice = lattice_from_kernel(K3)
    same = reduce(x, lattice) == reduce(y, lattice)
    assert same == member(tuple(a - b for a, b in zip(x, y)), lattice)


# === Нерухомі точки ===

def test_fixed_point_count_examples(lattices, standard):
    zeta_i = CycMatrix.scalar(zeta(3))
    assert fixed_point_count(zeta_i, standard) == 27
    assert fixed_point_count(zeta_i, lattices["L1"]) == 27
    z7 = CycMatrix.diag([zeta(7, 1), zeta(7, 2), zeta(7, 4)])
    assert fixed_point_count(z7, cm_lattice_z7()) == 7


def test_fixed_point_count_rejects_singular(standard):
    with pytest.raises(ValueError):
        fixed_point_count(CycMatrix.identity(), standard)


def test_kernel_on_torus_standard(standard):
    points = kernel_on_torus(CycMatrix.scalar(zeta(3)), standard)
    expected = {reduce(tuple(T * c for c in v), standard) for v in itertools.product((0, 1, -1), repeat=3)}
    assert set(points) == expected
    assert len(points) == 27


def test_kernel_on_torus_is_group(lattices):
    points = set(kernel_on_torus(CycMatrix.scalar(zeta(3)), lattices["L2"]))
    assert len(points) == 27
    for p, q in itertools.product(points, repeat=2):
        assert p + q in points
    assert all(-p in points for p in points)


def test_kernel_on_torus_unimodular(standard):
    # M − I = I
    points = kernel_on_torus(CycMatrix.scalar(CycNum.from_scalar(3, 2)), standard)
    assert points == [TorusPoint.zero(standard)]


@pytest.mark.parametrize("name", ["K1", "K2", "K3", "K4"])
@pytest.mark.parametrize("group", ["z3x2", "heis3"])
def test_determinant_matches_enumeration(group, name, lattices):
    if group == "heis3" and name in ("K1", "K2"):
        pytest.skip("Λ₁, Λ₂ - лише K3, K4")
    lattice = lattices[name]
    rep = analytic_rep(group)
    for u in elements(group):
        matrix = rep(u)
        shifted = matrix - CycMatrix.identity()
        if shifted.det().is_zero():
            continue
        assert fixed_point_count(matrix, lattice) == len(kernel_on_torus(matrix, lattice))


def test_affine_locus_translation():
    lattice = standard_lattice()
    locus = AffineFixedLocus(CycMatrix.identity(), lattice)
    assert not locus.is_finite
    assert locus.has_fixed_point(TorusPoint.zero(lattice))
    assert not locus.has_fixed_point(reduce((T, ZERO, ZERO), lattice))


def test_torsion_generators(lattices):
    gens = torsion_generators(lattices["K1"], 9)
    assert [p.coords for p in gens] == [tuple(1 if j == i else 0 for j in range(6)) for i in range(6)]
    assert all(p.is_zero() for p in torsion_generators(lattices["K1"], 1))
    assert torsion_generators(lattices["K1"], 3)[5].coords == (0, 0, 0, 0, 0, 3)
    with pytest.raises(ValueError):
        torsion_generators(lattices["K1"], 2)


def test_e3_points():
    assert len(set(E3_POINTS)) == 9
    assert all((3 * x).is_integral() for x in E3_POINTS)
