"""
Сервіс для трансляційних частин у стандартній формі

τ(k) = 0, τ(h) = a, τ(g) = b (для Heis(3)). Перебір наборів параметрів з E[3], коректність,
критерії свободи, різні коцикли на A, кограниці та розбиття на класи когомологій.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, partial
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from cyquot.algebra.cyclo import CycMatrix, CycNum, T, Vector, zeta
from cyquot.algebra.groups import (
    GENERATOR_NAMES,
    GroupElem,
    analytic_rep,
    elements,
    generators,
    identity,
    inverse,
    mul,
)
from cyquot.algebra.torus import (
    E3_POINTS,
    SCALE,
    AffineFixedLocus,
    Kernel,
    Lattice,
    RealAction,
    TorusPoint,
    fixed_point_count,
    kernel_on_torus,
    lattice_from_kernel,
    scale_vector,
    torsion_generators,
)
from cyquot.config import settings

logger = logging.getLogger(__name__)

SUPPORTED_GROUPS = ("z3x2", "heis3")

Z = zeta(3)
Z2 = zeta(3, 2)


# === Набори параметрів ===

@dataclass(frozen=True)
class StdTuple:
    """Параметри стандартної форми: a = τ(h), b = τ(g) (b лише для Heis(3))"""

    group: str
    a: Vector
    b: Optional[Vector] = None

    def __post_init__(self):
        if self.group not in SUPPORTED_GROUPS:
            raise ValueError(f"Стандартна форма визначена лише для {SUPPORTED_GROUPS}, отримано {self.group}")
        if (self.group == "heis3") != (self.b is not None):
            raise ValueError("b задається тоді й лише тоді, коли група Heis(3)")


def tuple_values(t: StdTuple) -> Dict[str, Vector]:
    """Значення τ на твірних як вектори над ℚ(ζ₃)"""
    zero = tuple(CycNum.zero() for _ in range(3))
    if t.group == "heis3":
        return {"g": t.b, "h": t.a, "k": zero}
    return {"h": t.a, "k": zero}


def _in_lattice(vector: Sequence[CycNum], lattice: Lattice) -> bool:
    return lattice.contains_scaled(scale_vector(vector))


def _v1(a: Vector) -> Vector:
    return tuple((Z - 1) * x for x in a)


def _v2(b: Vector) -> Vector:
    s = b[0] + b[1] + b[2]
    return (s, s, s)


def _v3(b: Vector) -> Vector:
    return tuple((Z - 1) * x for x in b)


def _v4(a: Vector, b: Vector) -> Vector:
    return (
        Z * a[0] - a[2] + (Z - 1) * b[0],
        Z * a[1] - a[0],
        Z * a[2] - a[1] + (Z2 - 1) * b[2],
    )


def is_well_defined(t: StdTuple, lattice: Lattice) -> bool:
    """
    Чи задають параметри дію групи на A = ℂ³/Λ.

    Args:
        t: Набір параметрів
        lattice: Решітка Λ

    Returns:
        True, якщо всі співвідношення групи виконуються за модулем Λ
    """
    if not _in_lattice(_v1(t.a), lattice):
        return False
    if t.group == "z3x2":
        return True
    return (
        _in_lattice(_v2(t.b), lattice)
        and _in_lattice(_v3(t.b), lattice)
        and _in_lattice(_v4(t.a, t.b), lattice)
    )


def _outside_projection(x: CycNum, kernel: Kernel, i: int) -> bool:
    """x ∉ p_i(K) як точки E (p_i(K) ⊆ {0, t, −t})"""
    return not any((x - T * c).is_integral() for c in kernel.projection(i))


def _good_a(group: str, a: Vector, kernel: Kernel) -> bool:
    if group == "z3x2":
        return all(_outside_projection(a[i], kernel, i) for i in range(3))
    return _outside_projection(a[0], kernel, 0)


def _good_b(b: Vector) -> bool:
    return not (b[0] + b[1] + b[2]).is_integral()


def _good_ab(a: Vector, b: Vector) -> bool:
    first = Z2 * (b[0] + b[1]) + b[2] + Z2 * (a[0] + a[2]) + a[1]
    second = Z * (b[0] + b[1]) + b[2] - Z * (a[0] + a[1]) - a[2]
    return not first.is_integral() and not second.is_integral()


def is_good(t: StdTuple, kernel: Kernel) -> bool:
    """
    Критерій свободи: нетривіальні елементи, крім k та k², діють без нерухомих точок.

    ℤ₃²: a_i ∉ p_i(K). Heis(3): b₁+b₂+b₃ ≠ 0, a₁ ∉ p₁(K) та дві ζ₃-комбінації ненульові в E.
    """
    if not _good_a(t.group, t.a, kernel):
        return False
    if t.group == "z3x2":
        return True
    return _good_b(t.b) and _good_ab(t.a, t.b)


def _a_candidates(group: str, kernel: Kernel, lattice: Lattice) -> List[Vector]:
    return [
        a for a in itertools.product(E3_POINTS, repeat=3)
        if _in_lattice(_v1(a), lattice) and _good_a(group, a, kernel)
    ]


def _b_candidates(lattice: Lattice) -> List[Vector]:
    return [
        b for b in itertools.product(E3_POINTS, repeat=3)
        if _good_b(b) and _in_lattice(_v2(b), lattice) and _in_lattice(_v3(b), lattice)
    ]


def _heis_chunk(chunk: Sequence[Vector], b_candidates: Sequence[Vector], lattice: Lattice) -> List[StdTuple]:
    found = []
    for a in chunk:
        for b in b_candidates:
            if _good_ab(a, b) and _in_lattice(_v4(a, b), lattice):
                found.append(StdTuple("heis3", a, b))
    return found


def _chunks(items: Sequence, count: int) -> List[Sequence]:
    size = max(1, -(-len(items) // count))
    return [items[i:i + size] for i in range(0, len(items), size)]


def enumerate_good(group: str, kernel: Kernel, jobs: Optional[int] = None) -> List[StdTuple]:
    """
    Усі добрі коректні набори параметрів з E[3]^3 (ℤ₃²) або E[3]^6 (Heis(3)).

    Умови на a та на b перевіряються окремо, спільні - лише на добутку відфільтрованих множин.

    Args:
        group: "z3x2" або "heis3"
        kernel: Ядро K (решітка Λ_K)
        jobs: Кількість процесів (за замовчуванням settings.JOBS)

    Returns:
        Набори у детермінованому лексикографічному порядку
    """
    if group not in SUPPORTED_GROUPS:
        raise ValueError(f"Перебір підтримується лише для {SUPPORTED_GROUPS}, отримано {group}")
    lattice = lattice_from_kernel(kernel)
    a_candidates = _a_candidates(group, kernel, lattice)
    if group == "z3x2":
        result = [StdTuple(group, a) for a in a_candidates]
    else:
        b_candidates = _b_candidates(lattice)
        workers = jobs or settings.JOBS
        if workers > 1 and a_candidates:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                task = partial(_heis_chunk, b_candidates=b_candidates, lattice=lattice)
                parts = pool.map(task, _chunks(a_candidates, workers))
                result = [t for part in parts for t in part]
        else:
            result = _heis_chunk(a_candidates, b_candidates, lattice)
    logger.info(f"✓ {group}, {kernel.label()}: {len(result)} добрих наборів")
    return result


# === Коцикли ===

@dataclass(frozen=True)
class Cocycle:
    """Коцикл: значення на твірних (у порядку GENERATOR_NAMES) як зведені точки тора"""

    lattice: Lattice = field(repr=False)
    group: str
    values: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_points(cls, lattice: Lattice, group: str, points: Mapping[str, TorusPoint]) -> "Cocycle":
        return cls(lattice, group, tuple(points[name].coords for name in GENERATOR_NAMES[group]))

    @classmethod
    def zero(cls, lattice: Lattice, group: str) -> "Cocycle":
        return cls(lattice, group, tuple((0,) * 6 for _ in GENERATOR_NAMES[group]))

    @property
    def key(self) -> Tuple[Tuple[int, ...], ...]:
        return self.values

    def value(self, name: str) -> TorusPoint:
        return TorusPoint(self.lattice, self.values[GENERATOR_NAMES[self.group].index(name)])

    def points(self) -> Dict[str, TorusPoint]:
        return {name: TorusPoint(self.lattice, v) for name, v in zip(GENERATOR_NAMES[self.group], self.values)}

    def is_standard(self) -> bool:
        return not any(self.value("k").coords)

    def _combine(self, other: "Cocycle", sign: int) -> "Cocycle":
        if other.group != self.group:
            raise ValueError(f"Коцикли різних груп: {self.group} і {other.group}")
        values = tuple(
            self.lattice.reduce_scaled([x + sign * y for x, y in zip(p, q)])
            for p, q in zip(self.values, other.values)
        )
        return Cocycle(self.lattice, self.group, values)

    def __add__(self, other: "Cocycle") -> "Cocycle":
        return self._combine(other, 1)

    def __sub__(self, other: "Cocycle") -> "Cocycle":
        return self._combine(other, -1)

    def sort_key(self) -> Tuple[Tuple[int, ...], ...]:
        return self.values

    def to_json(self) -> Dict[str, List[str]]:
        return {name: point.to_json() for name, point in self.points().items()}


def cocycle_from_tuple(t: StdTuple, lattice: Lattice) -> Cocycle:
    values = tuple_values(t)
    return Cocycle(lattice, t.group, tuple(lattice.reduce_scaled(scale_vector(values[n])) for n in GENERATOR_NAMES[t.group]))


def distinct_cocycles(tuples: Iterable[StdTuple], lattice: Lattice) -> List[Cocycle]:
    """Зводить значення кожного набору в A та відкидає повтори (набори, що різняться на K×K)"""
    seen = {}
    for t in tuples:
        c = cocycle_from_tuple(t, lattice)
        seen.setdefault(c.key, c)
    return [seen[k] for k in sorted(seen)]


def _act(matrix: CycMatrix, coords: Sequence[int], antilinear: bool = False) -> Tuple[int, ...]:
    return RealAction.of(matrix, antilinear).apply_scaled(coords)


@lru_cache(maxsize=4096)
def _expand_table(tau: Cocycle) -> Dict[GroupElem, Tuple[int, ...]]:
    rep = analytic_rep(tau.group)
    gens = generators(tau.group)
    lattice = tau.lattice
    table = {}
    for x in elements(tau.group):
        position = [0] * 6
        prefix = identity(tau.group)
        for name, e, value in zip(GENERATOR_NAMES[tau.group], x.exps, tau.values):
            for _ in range(e):
                step = _act(rep(prefix), value)
                position = [p + s for p, s in zip(position, step)]
                prefix = mul(prefix, gens[name])
        table[x] = lattice.reduce_scaled(position)
    return table


def expand(tau: Cocycle) -> Dict[GroupElem, TorusPoint]:
    """
    Значення τ на всіх елементах групи за правилом τ(uv) = ρ(u)τ(v) + τ(u), уздовж нормальної форми.

    Args:
        tau: Коцикл на твірних

    Returns:
        Словник елемент → точка тора
    """
    return {x: TorusPoint(tau.lattice, v) for x, v in _expand_table(tau).items()}


# Співвідношення групи як слова (твірна, ±1)
RELATORS: Dict[str, List[List[Tuple[str, int]]]] = {
    "z3": [[("k", 1)] * 3],
    "z3x2": [
        [("h", 1)] * 3,
        [("k", 1)] * 3,
        [("h", 1), ("k", 1), ("h", -1), ("k", -1)],
    ],
    "heis3": [
        [("g", 1)] * 3,
        [("h", 1)] * 3,
        [("k", 1)] * 3,
        [("g", 1), ("k", 1), ("g", -1), ("k", -1)],
        [("h", 1), ("k", 1), ("h", -1), ("k", -1)],
        [("g", 1), ("h", 1), ("g", -1), ("h", -1), ("k", -1)],
    ],
}


def _word_value(tau: Cocycle, word: Sequence[Tuple[str, int]]) -> Tuple[GroupElem, Tuple[int, ...]]:
    """(елемент групи, τ(слово)) при обході слова зліва направо"""
    rep = analytic_rep(tau.group)
    gens = generators(tau.group)
    prefix = identity(tau.group)
    position = [0] * 6
    for name, sign in word:
        s = gens[name]
        value = tau.values[GENERATOR_NAMES[tau.group].index(name)]
        if sign < 0:
            s = inverse(s)
            # τ(s⁻¹) = −ρ(s⁻¹)τ(s)
            value = tuple(-c for c in _act(rep(s), value))
        step = _act(rep(prefix), value)
        position = [p + c for p, c in zip(position, step)]
        prefix = mul(prefix, s)
    return prefix, tau.lattice.reduce_scaled(position)


def verify_action(c: Cocycle, group: Optional[str] = None, lattice: Optional[Lattice] = None) -> bool:
    """
    Чи задає Φ(u)(z) = ρ(u)z + τ(u) гомоморфізм у групу афінних перетворень A.

    Перевіряються всі визначальні співвідношення, а потім тотожність коциклу на всіх парах елементів.
    """
    if group is not None and group != c.group:
        raise ValueError(f"Коцикл групи {c.group}, а не {group}")
    if lattice is not None and lattice != c.lattice:
        raise ValueError("Коцикл задано на іншій решітці")
    for word in RELATORS[c.group]:
        element, value = _word_value(c, word)
        if element != identity(c.group):
            raise ArithmeticError(f"Слово {word} не є співвідношенням групи {c.group}")
        if any(value):
            return False
    rep = analytic_rep(c.group)
    table = _expand_table(c)
    for u in elements(c.group):
        rho_u = rep(u)
        for v in elements(c.group):
            moved = _act(rho_u, table[v])
            combined = c.lattice.reduce_scaled([x + y for x, y in zip(moved, table[u])])
            if combined != table[mul(u, v)]:
                return False
    return True


# === Кограниці ===

@lru_cache(maxsize=64)
def admissible_coboundary_points(lattice: Lattice) -> Tuple[TorusPoint, ...]:
    """27 точок d з (ζ₃ − 1)d ∈ Λ - ker(ζ₃·I − I) на торі"""
    return tuple(kernel_on_torus(CycMatrix.scalar(Z), lattice))


def general_coboundary(d: TorusPoint, group: str) -> Cocycle:
    """Кограниця u ↦ (ρ(u) − I)d для довільної точки d (результат може бути не в стандартній формі)"""
    lattice = d.lattice
    rep = analytic_rep(group)
    values = []
    for s in generators(group).values():
        moved = _act(rep(s), d.coords)
        values.append(lattice.reduce_scaled([x - y for x, y in zip(moved, d.coords)]))
    return Cocycle(lattice, group, tuple(values))


def coboundary(d: TorusPoint, group: str) -> Cocycle:
    """
    Кограниця u ↦ (ρ(u) − I)d у стандартній формі.

    Raises:
        ValueError: (ζ₃ − 1)d ∉ Λ, тобто результат не в стандартній формі
    """
    if not d.lattice.contains_scaled(_act(CycMatrix.scalar(Z - 1), d.coords)):
        raise ValueError("d не лежить у ker(ζ₃·I − I): кограниця не в стандартній формі")
    return general_coboundary(d, group)


def _span(gens: Sequence[Cocycle], zero: Cocycle) -> Dict[Tuple[Tuple[int, ...], ...], Cocycle]:
    """Усі елементи підгрупи, породженої gens (поступове додавання циклічних підгруп)"""
    found = {zero.key: zero}
    for g in gens:
        # m - найменше m > 0 з m·g у вже знайденій підгрупі
        shifts = [g]
        while shifts[-1].key not in found:
            shifts.append(shifts[-1] + g)
        layer = list(found.values())
        for shift in shifts[:-1]:
            for c in layer:
                moved = c + shift
                found.setdefault(moved.key, moved)
    return found


@lru_cache(maxsize=64)
def coboundary_image(lattice: Lattice, group: str, torsion: int = SCALE) -> FrozenSet[Tuple[Tuple[int, ...], ...]]:
    """
    Ключі всіх кограниць u ↦ (ρ(u) − I)d для d з (1/torsion)·ℤ[ζ₃]³/Λ.

    d ↦ (ρ(u) − I)d - гомоморфізм, тому образ усього простору зсувів породжується образами
    шести твірних.

    Args:
        lattice: Решітка Λ
        group: Група
        torsion: Порядок скруту (дільник SCALE)

    Returns:
        Множина ключів коциклів (і стандартних, і нестандартних)
    """
    gens = [general_coboundary(d, group) for d in torsion_generators(lattice, torsion)]
    image = _span(gens, Cocycle.zero(lattice, group))
    logger.debug(f"{group}: образ кограниць з {torsion}-скруту містить {len(image)} коциклів")
    return frozenset(image)


@lru_cache(maxsize=64)
def coboundaries(lattice: Lattice, group: str) -> Tuple[Cocycle, ...]:
    """Різні кограниці стандартної форми (підгрупа, за якою факторизуються класи)"""
    found = {}
    for d in admissible_coboundary_points(lattice):
        c = coboundary(d, group)
        found.setdefault(c.key, c)
    return tuple(found[k] for k in sorted(found))


@dataclass(frozen=True)
class CohClass:
    """Клас когомологій: відсортовані члени, представник - найменший"""

    members: Tuple[Cocycle, ...]

    @property
    def representative(self) -> Cocycle:
        return self.members[0]

    @property
    def size(self) -> int:
        return len(self.members)

    def __contains__(self, c: Cocycle) -> bool:
        return c in self.members


def cohomology_classes(cocycles: Sequence[Cocycle], lattice: Optional[Lattice] = None, group: Optional[str] = None) -> List[CohClass]:
    """
    Розбиття коциклів: τ ~ τ′ ⟺ τ − τ′ є кограницею з d ∈ ker(ζ₃·I − I).

    Args:
        cocycles: Добрі коцикли стандартної форми на одній решітці
        lattice: Решітка (за замовчуванням решітка першого коциклу)
        group: Група (за замовчуванням група першого коциклу)

    Returns:
        Класи, впорядковані за представником
    """
    if not cocycles:
        return []
    lattice = lattice or cocycles[0].lattice
    group = group or cocycles[0].group
    boundaries = coboundaries(lattice, group)
    by_key = {c.key: c for c in cocycles}
    seen = set()
    classes = []
    for key in sorted(by_key):
        if key in seen:
            continue
        tau = by_key[key]
        member_keys = {(tau + beta).key for beta in boundaries} & by_key.keys()
        seen |= member_keys
        classes.append(CohClass(tuple(by_key[k] for k in sorted(member_keys))))
    logger.debug(f"{group}: {len(by_key)} коциклів → {len(classes)} класів")
    return classes


# === Перевірка нерухомих точок ===

@lru_cache(maxsize=256)
def _affine_locus(group: str, exps: Tuple[int, ...], lattice: Lattice) -> AffineFixedLocus:
    return AffineFixedLocus(analytic_rep(group)(GroupElem(group, exps)), lattice)


def fixed_locus_consistent(tau: Cocycle) -> bool:
    """
    Узгодженість критерію свободи з прямим обчисленням.

    Для u ≠ 1 з виродженою ρ(u) − I афінне відображення не має нерухомих точок; для невиродженої
    кількість нерухомих точок через детермінант збігається з явним переліком.
    """
    rep = analytic_rep(tau.group)
    table = _expand_table(tau)
    one = identity(tau.group)
    for u in elements(tau.group):
        if u == one:
            continue
        matrix = rep(u)
        shifted = matrix - CycMatrix.identity(matrix.order, matrix.size)
        if shifted.det().is_zero():
            locus = _affine_locus(tau.group, u.exps, tau.lattice)
            if locus.has_fixed_point(TorusPoint(tau.lattice, table[u])):
                logger.warning(f"⚠️ {u} має нерухому точку при виродженій ρ(u) − I")
                return False
        elif fixed_point_count(matrix, tau.lattice) != len(kernel_on_torus(matrix, tau.lattice)):
            return False
    return True
