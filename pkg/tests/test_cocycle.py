import itertools
import random

import pytest

from cyquot.algebra.cyclo import CycNum, T
from cyquot.algebra.groups import elements, identity
from cyquot.algebra.torus import (
    E3_POINTS,
    K1,
    NAMED_KERNELS,
    SCALE,
    TorusPoint,
    lattice_from_kernel,
    lift,
    reduce,
    standard_lattice,
)
from cyquot.services.classify_service import analyse_cocycles
from cyquot.services.cocycle_service import (
    Cocycle,
    StdTuple,
    admissible_coboundary_points,
    coboundaries,
    coboundary,
    coboundary_image,
    cocycle_from_tuple,
    cohomology_classes,
    distinct_cocycles,
    enumerate_good,
    expand,
    fixed_locus_consistent,
    general_coboundary,
    is_good,
    is_well_defined,
    verify_action,
)

ZERO = CycNum.zero()
THIRD = CycNum(3, ("1/3", 0))

Z32_COUNTS = {
    # ядро: (набори, різні коцикли, класи, кограниці)
    "K1": (8, 8, 8, 1),
    "K2": (36, 12, 4, 3),
    "K3": (54, 18, 6, 3),
    "K4": (54, 6, 2, 3),
}

HEIS_COUNTS = {
    "K3": (486, 54, 6, 9),
    "K4": (1458, 18, 6, 3),
}


@pytest.fixture(scope="module")
def z32():
    return {name: analyse_cocycles("z3x2", NAMED_KERNELS[name]) for name in Z32_COUNTS}


@pytest.fixture(scope="module")
def heis():
    return {name: analyse_cocycles("heis3", NAMED_KERNELS[name], jobs=2) for name in HEIS_COUNTS}


# === Набори параметрів ===

def test_std_tuple_validation():
    with pytest.raises(ValueError):
        StdTuple("z3", (T, T, T))
    with pytest.raises(ValueError):
        StdTuple("heis3", (T, T, T))
    with pytest.raises(ValueError):
        StdTuple("z3x2", (T, T, T), (T, T, T))


def test_well_defined_and_good_examples():
    lattice = standard_lattice()
    good = StdTuple("z3x2", (T, T, -T))
    assert is_well_defined(good, lattice)
    assert is_good(good, K1)
    assert not is_good(StdTuple("z3x2", (ZERO, T, T)), K1)
    assert not is_well_defined(StdTuple("z3x2", (THIRD, T, T)), lattice)


def test_heis_requires_nonzero_b_sum():
    tuple_ = StdTuple("heis3", (T, T, T), (ZERO, ZERO, ZERO))
    assert not is_good(tuple_, K1)


def test_enumerate_rejects_unsupported_group():
    with pytest.raises(ValueError):
        enumerate_good("z3", K1)


def test_heis_standard_lattice_has_no_good_tuples():
    assert enumerate_good("heis3", K1) == []


@pytest.mark.parametrize("name", sorted(Z32_COUNTS))
def test_z32_counts(name, z32):
    tuples, distinct, classes, boundaries = Z32_COUNTS[name]
    analysis = z32[name]
    assert analysis.tuple_count == tuples
    assert len(analysis.cocycles) == distinct
    assert len(analysis.classes) == classes
    assert analysis.coboundary_count == boundaries


@pytest.mark.parametrize("name", sorted(HEIS_COUNTS))
def test_heis_counts(name, heis):
    tuples, distinct, classes, boundaries = HEIS_COUNTS[name]
    analysis = heis[name]
    assert analysis.tuple_count == tuples
    assert len(analysis.cocycles) == distinct
    assert len(analysis.classes) == classes
    assert analysis.coboundary_count == boundaries


def test_parallel_enumeration_matches_serial():
    kernel = NAMED_KERNELS["K4"]
    assert enumerate_good("heis3", kernel, jobs=1) == enumerate_good("heis3", kernel, jobs=3)


def test_enumeration_is_deterministic():
    kernel = NAMED_KERNELS["K2"]
    assert enumerate_good("z3x2", kernel) == enumerate_good("z3x2", kernel)


# === Коцикли ===

def test_distinct_cocycles_collapse_kernel_shifts():
    lattice = lattice_from_kernel(NAMED_KERNELS["K3"])
    a = StdTuple("z3x2", (T, T, -T))
    b = StdTuple("z3x2", (-T, -T, T * 2 + T))
    # a − b = (2t, 2t, −4t) ≡ −(t, t, t) за модулем ℤ[ζ₃]³
    assert cocycle_from_tuple(a, lattice) == cocycle_from_tuple(b, lattice)
    assert len(distinct_cocycles([a, b], lattice)) == 1


@pytest.mark.parametrize("name", sorted(Z32_COUNTS))
def test_z32_cocycles_define_free_actions(name, z32):
    for tau in z32[name].cocycles:
        assert tau.is_standard()
        assert verify_action(tau)
        assert fixed_locus_consistent(tau)


@pytest.mark.parametrize("name", sorted(HEIS_COUNTS))
def test_heis_cocycles_define_free_actions(name, heis):
    for tau in heis[name].cocycles:
        assert verify_action(tau, "heis3", tau.lattice)
    for tau in heis[name].cocycles[::6]:
        assert fixed_locus_consistent(tau)


def test_verify_action_rejects_wrong_group(z32):
    tau = z32["K1"].cocycles[0]
    with pytest.raises(ValueError):
        verify_action(tau, "heis3")


@pytest.mark.parametrize("name", sorted(Z32_COUNTS))
def test_z32_cocycle_values_are_three_torsion(name, z32):
    for tau in z32[name].cocycles:
        assert all((point * 3).is_zero() for point in expand(tau).values())


def test_heis_cocycle_values_are_three_torsion(heis):
    for tau in heis["K3"].cocycles:
        assert all((point * 3).is_zero() for point in expand(tau).values())


@pytest.mark.parametrize("name", ["K3", "K4"])
def test_goodness_invariant_under_kernel_shifts(name):
    kernel = NAMED_KERNELS[name]
    shifts = [lift(v) for v in kernel.elements]
    for a in itertools.product(E3_POINTS, repeat=3):
        verdict = is_good(StdTuple("z3x2", a), kernel)
        for s in shifts:
            moved = tuple(x + y for x, y in zip(a, s))
            assert is_good(StdTuple("z3x2", moved), kernel) == verdict


def test_heis_goodness_invariant_under_kernel_shifts():
    kernel = NAMED_KERNELS["K3"]
    shifts = [lift(v) for v in kernel.elements]
    for t in enumerate_good("heis3", kernel):
        for s, r in itertools.product(shifts, repeat=2):
            moved = StdTuple("heis3", tuple(x + y for x, y in zip(t.a, s)), tuple(x + y for x, y in zip(t.b, r)))
            assert is_good(moved, kernel)


def test_verify_action_matches_well_definedness(lattices):
    lattice = lattices["K2"]
    rejected = 0
    for a in itertools.product(E3_POINTS, repeat=3):
        t = StdTuple("z3x2", a)
        defined = is_well_defined(t, lattice)
        assert verify_action(cocycle_from_tuple(t, lattice)) == defined
        rejected += not defined
    assert rejected > 0


def test_verify_action_rejects_ill_defined_tuple(standard):
    bad = StdTuple("z3x2", (THIRD, T, T))
    assert not is_well_defined(bad, standard)
    assert not verify_action(cocycle_from_tuple(bad, standard))


def test_expand_cocycle_rule(heis):
    tau = heis["K3"].cocycles[0]
    table = expand(tau)
    assert table[identity("heis3")].is_zero()
    assert len(table) == len(elements("heis3"))


def test_cocycle_arithmetic(z32):
    tau = z32["K2"].cocycles[0]
    zero = Cocycle.zero(tau.lattice, tau.group)
    assert tau - tau == zero
    assert tau + zero == tau


# === Кограниці та класи ===

def test_coboundary_points_count(lattices):
    for name in ("K1", "K2", "K3", "K4"):
        assert len(admissible_coboundary_points(lattices[name])) == 27


def test_coboundary_requires_kernel_point(standard):
    d = reduce((THIRD, ZERO, ZERO), standard)
    with pytest.raises(ValueError):
        coboundary(d, "z3x2")


def test_coboundaries_are_cocycles(lattices):
    for beta in coboundaries(lattices["L1"], "heis3"):
        assert beta.is_standard()
        assert verify_action(beta)


def test_general_coboundary_leaves_standard_form(standard):
    d = reduce((THIRD, ZERO, ZERO), standard)
    beta = general_coboundary(d, "z3x2")
    assert not beta.is_standard()
    assert verify_action(beta)


def test_general_coboundary_agrees_on_kernel_points(lattices):
    for d in admissible_coboundary_points(lattices["K3"]):
        assert general_coboundary(d, "z3x2") == coboundary(d, "z3x2")


def test_coboundary_image_matches_point_enumeration(lattices):
    # усі 3^6 точки (1/3)ℤ[ζ₃]³ за модулем Λ_K2
    lattice = lattices["K2"]
    points = {lattice.reduce_scaled(c) for c in itertools.product(range(0, SCALE, 3), repeat=6)}
    assert len(points) == 3 ** 6 // 3
    keys = {general_coboundary(TorusPoint(lattice, p), "z3x2").key for p in points}
    assert keys == coboundary_image(lattice, "z3x2", 3)


@pytest.mark.parametrize("name", sorted(Z32_COUNTS))
def test_nine_torsion_shifts_between_standard_forms(name, lattices):
    # d поза ker(ζ₃·I − I) не дає кограниці стандартної форми
    lattice = lattices[name]
    image = coboundary_image(lattice, "z3x2", SCALE)
    standard = {key for key in image if Cocycle(lattice, "z3x2", key).is_standard()}
    assert standard == {beta.key for beta in coboundaries(lattice, "z3x2")}
    assert len(image) > 27 * len(standard)


@pytest.mark.parametrize("name", sorted(Z32_COUNTS))
def test_classes_partition_cocycles(name, z32):
    analysis = z32[name]
    members = [m for cls in analysis.classes for m in cls.members]
    assert sorted(m.key for m in members) == sorted(c.key for c in analysis.cocycles)
    assert all(cls.size == analysis.coboundary_count for cls in analysis.classes)
    assert all(cls.representative == min(cls.members, key=lambda c: c.key) for cls in analysis.classes)


def test_classes_independent_of_input_order(heis):
    analysis = heis["K4"]
    shuffled = list(analysis.cocycles)
    random.Random(7).shuffle(shuffled)
    assert cohomology_classes(shuffled) == analysis.classes


def test_empty_class_list():
    assert cohomology_classes([]) == []
