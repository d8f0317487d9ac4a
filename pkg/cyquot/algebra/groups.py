"""
Групи ℤ₃, ℤ₇, ℤ₃² = ⟨h,k⟩ та Heis(3) = ⟨g,h,k⟩: нормальні форми, автоморфізми,
аналітичні представлення та характери
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

from cyquot.algebra.cyclo import CycMatrix, CycNum, zeta

logger = logging.getLogger(__name__)

GROUP_IDS = ("z3", "z7", "z3x2", "heis3")

GENERATOR_NAMES: Dict[str, Tuple[str, ...]] = {
    "z3": ("k",),
    "z7": ("x",),
    "z3x2": ("h", "k"),
    "heis3": ("g", "h", "k"),
}

MODULI = {"z3": 3, "z7": 7, "z3x2": 3, "heis3": 3}

GROUP_LABELS = {"z3": "Z3", "z7": "Z7", "z3x2": "Z3^2", "heis3": "Heis(3)"}


def _check_group(group: str):
    if group not in GROUP_IDS:
        raise ValueError(f"Невідома група: {group}")


@dataclass(frozen=True, order=True)
class GroupElem:
    """Елемент у нормальній формі g^a h^b k^c (показники за модулем порядку твірних)"""

    group: str
    exps: Tuple[int, ...]

    def __str__(self) -> str:
        return " ".join(f"{name}^{e}" for name, e in zip(GENERATOR_NAMES[self.group], self.exps))

    def __mul__(self, other: "GroupElem") -> "GroupElem":
        return mul(self, other)


def parse_element(group: str, text: str) -> GroupElem:
    """Розбір рядка виду "g^1 h^0 k^2" """
    _check_group(group)
    names = GENERATOR_NAMES[group]
    exps = {name: 0 for name in names}
    for token in text.split():
        name, _, power = token.partition("^")
        if name not in exps:
            raise ValueError(f"Невідома твірна {name!r} для групи {group}")
        exps[name] = int(power or 1) % MODULI[group]
    return GroupElem(group, tuple(exps[n] for n in names))


def group_order(group: str) -> int:
    _check_group(group)
    return MODULI[group] ** len(GENERATOR_NAMES[group])


@lru_cache(maxsize=None)
def elements(group: str) -> Tuple[GroupElem, ...]:
    _check_group(group)
    n = MODULI[group]
    return tuple(GroupElem(group, e) for e in itertools.product(range(n), repeat=len(GENERATOR_NAMES[group])))


def identity(group: str) -> GroupElem:
    return GroupElem(group, (0,) * len(GENERATOR_NAMES[group]))


def generator(group: str, name: str) -> GroupElem:
    names = GENERATOR_NAMES[group]
    return GroupElem(group, tuple(1 if n == name else 0 for n in names))


def generators(group: str) -> Dict[str, GroupElem]:
    return {name: generator(group, name) for name in GENERATOR_NAMES[group]}


def central_generator(group: str) -> GroupElem:
    """Твірна підгрупи елементів з нерухомими точками: k (або x для ℤ₇)"""
    return generator(group, GENERATOR_NAMES[group][-1])


def mul(x: GroupElem, y: GroupElem) -> GroupElem:
    """
    Добуток у нормальній формі.

    Для Heis(3): h^b·g^{a'} = g^{a'}·h^b·k^{-a'b} (з [g,h] = k), k центральний.
    """
    if x.group != y.group:
        raise ValueError(f"Добуток елементів різних груп: {x.group} і {y.group}")
    n = MODULI[x.group]
    if x.group == "heis3":
        a, b, c = x.exps
        a2, b2, c2 = y.exps
        return GroupElem("heis3", ((a + a2) % 3, (b + b2) % 3, (c + c2 - a2 * b) % 3))
    return GroupElem(x.group, tuple((p + q) % n for p, q in zip(x.exps, y.exps)))


def inverse(x: GroupElem) -> GroupElem:
    n = MODULI[x.group]
    if x.group == "heis3":
        a, b, c = x.exps
        return GroupElem("heis3", ((-a) % 3, (-b) % 3, (-c - a * b) % 3))
    return GroupElem(x.group, tuple((-p) % n for p in x.exps))


def power(x: GroupElem, n: int) -> GroupElem:
    if n < 0:
        return power(inverse(x), -n)
    result = identity(x.group)
    for _ in range(n):
        result = mul(result, x)
    return result


def element_order(x: GroupElem) -> int:
    e = identity(x.group)
    y = x
    n = 1
    while y != e:
        y = mul(y, x)
        n += 1
    return n


def commutator(x: GroupElem, y: GroupElem) -> GroupElem:
    """[x, y] = x·y·x⁻¹·y⁻¹"""
    return mul(mul(mul(x, y), inverse(x)), inverse(y))


def center(group: str) -> List[GroupElem]:
    elems = elements(group)
    return [z for z in elems if all(mul(z, x) == mul(x, z) for x in elems)]


@lru_cache(maxsize=None)
def conjugacy_classes(group: str) -> Tuple[Tuple[GroupElem, ...], ...]:
    elems = elements(group)
    seen = set()
    classes = []
    for x in elems:
        if x in seen:
            continue
        cls = sorted({mul(mul(y, x), inverse(y)) for y in elems})
        seen.update(cls)
        classes.append(tuple(cls))
    return tuple(classes)


# === Автоморфізми ===

@dataclass(frozen=True)
class Automorphism:
    """Автоморфізм, заданий образами твірних (у порядку GENERATOR_NAMES)"""

    group: str
    images: Tuple[GroupElem, ...]

    def apply(self, x: GroupElem) -> GroupElem:
        result = identity(self.group)
        for image, e in zip(self.images, x.exps):
            result = mul(result, power(image, e))
        return result

    __call__ = apply

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self ∘ other"""
        return Automorphism(self.group, tuple(self.apply(x) for x in other.images))

    def inverse(self) -> "Automorphism":
        table = {self.apply(x): x for x in elements(self.group)}
        return Automorphism(self.group, tuple(table[g] for g in generators(self.group).values()))

    def is_identity(self) -> bool:
        return self.images == tuple(generators(self.group).values())

    def to_json(self) -> Dict[str, str]:
        return {name: str(image) for name, image in zip(GENERATOR_NAMES[self.group], self.images)}


def identity_automorphism(group: str) -> Automorphism:
    return Automorphism(group, tuple(generators(group).values()))


def _is_bijective(candidate: Automorphism) -> bool:
    return len({candidate.apply(x) for x in elements(candidate.group)}) == group_order(candidate.group)


@lru_cache(maxsize=None)
def automorphisms(group: str) -> Tuple[Automorphism, ...]:
    """
    Повний список автоморфізмів перебором образів твірних.

    Args:
        group: "z3x2" або "heis3"

    Returns:
        Автоморфізми з перевіреними співвідношеннями та бієктивністю
    """
    elems = elements(group)
    one = identity(group)
    result = []
    if group == "heis3":
        for x, y in itertools.product(elems, repeat=2):
            z = commutator(x, y)
            if power(x, 3) != one or power(y, 3) != one or power(z, 3) != one:
                continue
            if commutator(x, z) != one or commutator(y, z) != one:
                continue
            candidate = Automorphism(group, (x, y, z))
            if _is_bijective(candidate):
                result.append(candidate)
    elif group == "z3x2":
        for x, y in itertools.product(elems, repeat=2):
            if power(x, 3) != one or power(y, 3) != one or commutator(x, y) != one:
                continue
            candidate = Automorphism(group, (x, y))
            if _is_bijective(candidate):
                result.append(candidate)
    else:
        raise ValueError(f"Автоморфізми підтримуються лише для z3x2 та heis3, отримано {group}")
    logger.debug(f"|Aut({GROUP_LABELS[group]})| = {len(result)}")
    return tuple(result)


# === Аналітичне представлення ===

def _generator_matrices(group: str) -> Dict[str, CycMatrix]:
    z = zeta(3)
    rho_k = CycMatrix.scalar(z)
    rho_h = CycMatrix.diag([CycNum.one(3), zeta(3, 2), z])
    if group == "z3":
        return {"k": rho_k}
    if group == "z7":
        return {"x": CycMatrix.diag([zeta(7, 1), zeta(7, 2), zeta(7, 4)])}
    if group == "z3x2":
        return {"h": rho_h, "k": rho_k}
    # ρ(g)(z1, z2, z3) = (z3, z1, z2)
    rho_g = CycMatrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]], 3)
    return {"g": rho_g, "h": rho_h, "k": rho_k}


@dataclass(frozen=True)
class Rep:
    """Аналітичне представлення: твірна → матриця"""

    group: str
    matrices: Tuple[Tuple[str, CycMatrix], ...]

    def __call__(self, x: GroupElem) -> CycMatrix:
        return _element_matrix(self.group, x.exps)

    def generator_matrix(self, name: str) -> CycMatrix:
        return dict(self.matrices)[name]


@lru_cache(maxsize=None)
def _element_matrix(group: str, exps: Tuple[int, ...]) -> CycMatrix:
    matrices = _generator_matrices(group)
    order = 7 if group == "z7" else 3
    result = CycMatrix.identity(order)
    for name, e in zip(GENERATOR_NAMES[group], exps):
        for _ in range(e):
            result = result @ matrices[name]
    return result


@lru_cache(maxsize=None)
def analytic_rep(group: str) -> Rep:
    _check_group(group)
    matrices = _generator_matrices(group)
    return Rep(group, tuple((name, matrices[name]) for name in GENERATOR_NAMES[group]))


@lru_cache(maxsize=None)
def matrix_index(group: str) -> Dict[CycMatrix, GroupElem]:
    """Обернена таблиця ρ: матриця → елемент (представлення точне)"""
    rep = analytic_rep(group)
    table = {rep(x): x for x in elements(group)}
    if len(table) != group_order(group):
        raise ArithmeticError(f"Представлення групи {group} не є точним")
    return table


# === Характери ===

def trace(matrix: CycMatrix) -> CycNum:
    total = CycNum.zero(matrix.order)
    for i in range(matrix.size):
        total = total + matrix.rows[i][i]
    return total


@lru_cache(maxsize=None)
def character(group: str) -> Tuple[Tuple[GroupElem, CycNum], ...]:
    """Характер χ = tr ρ як таблиця значень на класах спряженості (представник, значення)"""
    rep = analytic_rep(group)
    return tuple((cls[0], trace(rep(cls[0]))) for cls in conjugacy_classes(group))


def compose_character(group: str, phi: Automorphism) -> Tuple[CycNum, ...]:
    """Значення χ∘φ на представниках класів"""
    rep = analytic_rep(group)
    return tuple(trace(rep(phi.apply(x))) for x, _ in character(group))


def char_stabilizer(group: str, which: str = "complex") -> List[Automorphism]:
    """
    Стабілізатор характеру.

    Args:
        group: лише "heis3"
        which: "full" - стабілізатор дійсного характеру χ_ℝ (уся Aut), "complex" - {φ : χ∘φ = χ}
    """
    if group != "heis3":
        raise ValueError(f"Стабілізатор характеру підтримується лише для heis3, отримано {group}")
    if which not in ("full", "complex"):
        raise ValueError(f"Невідомий тип стабілізатора: {which}")
    auts = automorphisms(group)
    if which == "full":
        return list(auts)
    values = tuple(v for _, v in character(group))
    return [phi for phi in auts if compose_character(group, phi) == values]

