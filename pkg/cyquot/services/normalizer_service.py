"""
Сервіс для нормалізаторів 𝒩_ℂ(Λ) та 𝒩_ℝ(Λ)

Дійсно-лінійні елементи моделюються як ℂ-напівлінійні відображення (матриця + прапорець
спряження). Замикання будується пошуком у ширину з дедуплікацією за канонічним ключем.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from sympy import integer_nthroot

from cyquot.algebra.cyclo import UNITS, CycMatrix, CycNum, T, zeta
from cyquot.algebra.groups import (
    Automorphism,
    analytic_rep,
    generators,
    identity_automorphism,
    matrix_index,
)
from cyquot.algebra.torus import (
    NAMED_KERNELS,
    Kernel,
    Lattice,
    RealAction,
    fix_coordinate,
    kernel_enumerate,
    lattice_from_kernel,
    lift,
    standard_lattice,
)
from cyquot.config import settings
from cyquot.services.cocycle_service import Cocycle, _expand_table
from cyquot.utils.pinning import VerificationError

logger = logging.getLogger(__name__)

FLAVORS = ("complex", "real")


# === Напівлінійні відображення ===

@dataclass(frozen=True)
class SemilinearMap:
    """z ↦ M·z (antilinear=False) або z ↦ M·conj(z) (antilinear=True)"""

    matrix: CycMatrix
    antilinear: bool = False

    @classmethod
    def identity(cls) -> "SemilinearMap":
        return cls(CycMatrix.identity(3))

    def compose(self, other: "SemilinearMap") -> "SemilinearMap":
        """(M₁,ε₁)∘(M₂,ε₂) = (M₁·conj^{ε₁}(M₂), ε₁ xor ε₂)"""
        right = other.matrix.conj() if self.antilinear else other.matrix
        return SemilinearMap(self.matrix @ right, self.antilinear != other.antilinear)

    def __matmul__(self, other: "SemilinearMap") -> "SemilinearMap":
        return self.compose(other)

    def inverse(self) -> "SemilinearMap":
        inv = self.matrix.inverse()
        return SemilinearMap(inv.conj() if self.antilinear else inv, self.antilinear)

    def conjugate(self, linear: CycMatrix) -> CycMatrix:
        """C·L·C⁻¹ для ℂ-лінійного L"""
        inner = linear.conj() if self.antilinear else linear
        return self.matrix @ inner @ self.matrix.inverse()

    def apply(self, vector):
        argument = tuple(x.conj() for x in vector) if self.antilinear else tuple(vector)
        return self.matrix.apply(argument)

    def real_action(self) -> RealAction:
        return RealAction.of(self.matrix, self.antilinear)

    @property
    def key(self):
        return (self.matrix.key(), self.antilinear)

    def to_json(self) -> Dict:
        return {"matrix": self.matrix.to_json(), "antilinear": self.antilinear}


CONJUGATION = SemilinearMap(CycMatrix.identity(3), True)


def maps_lattice(c: SemilinearMap, source: Lattice, target: Optional[Lattice] = None) -> bool:
    """
    Чи відображає C решітку source бієктивно на target.

    Args:
        c: Напівлінійне відображення
        source: Λ
        target: Λ′ (за замовчуванням Λ)

    Returns:
        True, якщо C(Λ) ⊆ Λ′ та C⁻¹(Λ′) ⊆ Λ
    """
    target = target or source
    try:
        forward = c.real_action()
        if not all(target.contains_scaled(forward.apply_scaled(col)) for col in source.columns):
            return False
        backward = c.inverse().real_action()
        return all(source.contains_scaled(backward.apply_scaled(col)) for col in target.columns)
    except ValueError:
        # образ виходить за знаменник 9
        return False


# === Індукований автоморфізм ===

def induced_aut(c: SemilinearMap, group: str) -> Automorphism:
    """
    Єдиний φ з C·ρ(u)·C⁻¹ = ρ(φ(u)) (ρ(u) спрягається поелементно, якщо C антилінійне).

    Raises:
        ValueError: C не нормалізує образ ρ
    """
    rep = analytic_rep(group)
    index = matrix_index(group)
    images = []
    for name, u in generators(group).items():
        conjugated = c.conjugate(rep(u))
        if conjugated not in index:
            raise ValueError(f"C не нормалізує ρ({group}): образ ρ({name}) поза групою")
        images.append(index[conjugated])
    return Automorphism(group, tuple(images))


@dataclass(frozen=True)
class NormalizerElement:
    """Пара (C, φ_C)"""

    map: SemilinearMap
    phi: Automorphism
    lattice: Optional[Lattice] = field(default=None, compare=False, repr=False)

    @property
    def matrix(self) -> CycMatrix:
        return self.map.matrix

    @property
    def antilinear(self) -> bool:
        return self.map.antilinear

    def compose(self, other: "NormalizerElement") -> "NormalizerElement":
        return NormalizerElement(self.map.compose(other.map), self.phi.compose(other.phi), self.lattice)

    def inverse(self) -> "NormalizerElement":
        return NormalizerElement(self.map.inverse(), self.phi.inverse(), self.lattice)

    def verify(self) -> bool:
        """C·conj^ε(ρ(u)) = ρ(φ(u))·C для всіх твірних u"""
        rep = analytic_rep(self.phi.group)
        for u in generators(self.phi.group).values():
            inner = rep(u).conj() if self.antilinear else rep(u)
            if self.matrix @ inner != rep(self.phi.apply(u)) @ self.matrix:
                return False
        return True

    def to_json(self) -> Dict:
        return {**self.map.to_json(), "phi": self.phi.to_json()}


def make_element(c: SemilinearMap, group: str, lattice: Optional[Lattice] = None) -> NormalizerElement:
    return NormalizerElement(c, induced_aut(c, group), lattice)


def compose(x: NormalizerElement, y: NormalizerElement) -> NormalizerElement:
    return x.compose(y)


def inverse(x: NormalizerElement) -> NormalizerElement:
    return x.inverse()


def closure(gens: Sequence[NormalizerElement], cap: Optional[int] = None) -> List[NormalizerElement]:
    """
    Замикання твірних відносно композиції (пошук у ширину від одиниці).

    φ поширюється композицією; кожен новий елемент перевіряється точною рівністю матриць.

    Raises:
        VerificationError: розмір перевищив запобіжник або φ не узгоджується з C
    """
    cap = cap or settings.CLOSURE_CAP
    group = gens[0].phi.group
    start = NormalizerElement(SemilinearMap.identity(), identity_automorphism(group), gens[0].lattice)
    seen = {start.map.key: start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x.compose(g)
            if y.map.key in seen:
                continue
            if not y.verify():
                raise VerificationError(f"Індукований автоморфізм не узгоджується з матрицею {y.matrix}")
            seen[y.map.key] = y
            if len(seen) > cap:
                raise VerificationError(f"Замикання перевищило запобіжник {cap}: помилка у твірних")
            queue.append(y)
    return sorted(seen.values(), key=lambda e: (e.antilinear, e.map.key))


def _check_lattice(elements: Iterable[NormalizerElement], lattice: Lattice):
    for e in elements:
        if not maps_lattice(e.map, lattice):
            raise VerificationError(f"Елемент {e.matrix} не зберігає решітку {lattice.label}")


# === Heis(3) ===

def _heis_generators() -> List[SemilinearMap]:
    z = zeta(3)
    z2 = zeta(3, 2)
    one = CycNum.one()
    c1 = CycMatrix.diag([z, z2, one])
    c2 = CycMatrix([[1, z2, z2], [z2, 1, z2], [z2, z2, 1]]) * (-T)
    c3 = CycMatrix([[1, 1, 1], [1, z2, z], [1, z, z2]]) * T
    units = [CycMatrix.scalar(-one), CycMatrix.scalar(z)]
    return [SemilinearMap(m) for m in (c1, c2, c3, *units)]


def _check_flavor(flavor: str):
    if flavor not in FLAVORS:
        raise ValueError(f"Невідомий тип нормалізатора: {flavor}")


@lru_cache(maxsize=8)
def _normalizer_heis(lattice: Lattice, flavor: str) -> Tuple[NormalizerElement, ...]:
    maps = _heis_generators()
    if flavor == "real":
        maps.append(CONJUGATION)
    gens = [make_element(m, "heis3", lattice) for m in maps]
    result = closure(gens)
    _check_lattice(result, lattice)
    logger.info(f"✓ 𝒩 ({flavor}) для {lattice.label}: {len(result)} елементів")
    return tuple(result)


def normalizer_heis(lattice: Lattice, flavor: str = "complex") -> List[NormalizerElement]:
    """
    𝒩_ℂ(Λ) або 𝒩_ℝ(Λ) для Λ ∈ {Λ₁, Λ₂}.

    Args:
        lattice: Λ₁ або Λ₂
        flavor: "complex" або "real" (додається спряження)

    Returns:
        Усі елементи, кожен перевірений на збереження решітки
    """
    _check_flavor(flavor)
    if lattice.kernel is None or lattice.kernel.dim not in (1, 2) or not heis_invariant(lattice.kernel):
        raise ValueError(f"Нормалізатор Heis(3) визначено лише для Λ₁, Λ₂, отримано {lattice.label}")
    return list(_normalizer_heis(lattice, flavor))


def heisenberg_generators(flavor: str = "complex") -> List[SemilinearMap]:
    maps = _heis_generators()
    return maps + [CONJUGATION] if flavor == "real" else maps


# === ℤ₃² ===

def _z32_generators(flavor: str) -> List[SemilinearMap]:
    z = zeta(3)
    one = CycNum.one()
    maps = [
        SemilinearMap(CycMatrix.diag([-z, one, one])),
        SemilinearMap(CycMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])),
        SemilinearMap(CycMatrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]])),
    ]
    if flavor == "real":
        maps.append(CONJUGATION)
    return maps


def z32_generators(flavor: str = "complex") -> List[SemilinearMap]:
    return _z32_generators(flavor)


@lru_cache(maxsize=2)
def _ambient_z32(flavor: str) -> Tuple[NormalizerElement, ...]:
    gens = [make_element(m, "z3x2") for m in _z32_generators(flavor)]
    result = closure(gens)
    for e in result:
        if not e.matrix.is_monomial():
            raise VerificationError(f"Елемент {e.matrix} не мономіальний")
    logger.info(f"✓ N_Aut(E³)(ρ(ℤ₃²)) ({flavor}): {len(result)} елементів")
    return tuple(result)


def ambient_normalizer_z32(flavor: str = "complex") -> List[NormalizerElement]:
    """N_{Aut(E³)}(ρ(ℤ₃²)) до фільтра за ядром: мономіальні матриці з одиницями ℤ[ζ₃]"""
    _check_flavor(flavor)
    return list(_ambient_z32(flavor))


def kernel_image(c: SemilinearMap, kernel: Kernel) -> Kernel:
    """Образ K ⊆ 𝔽₃³ під дією C на Fix_{ζ₃}(E)³"""
    image = []
    for v in kernel.elements:
        moved = c.apply(lift(v))
        image.append(tuple(fix_coordinate(x) for x in moved))
    return Kernel(tuple(sorted(image)))


@lru_cache(maxsize=16)
def _normalizer_z32(kernel: Kernel, flavor: str) -> Tuple[NormalizerElement, ...]:
    lattice = lattice_from_kernel(kernel)
    result = tuple(
        NormalizerElement(e.map, e.phi, lattice)
        for e in _ambient_z32(flavor)
        if kernel_image(e.map, kernel) == kernel
    )
    _check_lattice(result, lattice)
    return result


def normalizer_z32(kernel: Kernel, flavor: str = "complex") -> List[NormalizerElement]:
    """
    𝒩(Λ_K) для ℤ₃²: елементи ambient_normalizer_z32 з C·K = K.

    Args:
        kernel: Одне з допустимих ядер
        flavor: "complex" або "real"
    """
    _check_flavor(flavor)
    if not kernel.is_admissible():
        raise ValueError(f"Ядро {kernel.label()} не допустиме")
    return list(_normalizer_z32(kernel, flavor))


def kernel_stabilizer_orders(flavor: str = "complex", kernels: Optional[Dict[str, Kernel]] = None) -> Dict[str, int]:
    kernels = kernels or {name: NAMED_KERNELS[name] for name in ("K1", "K2", "K3", "K4")}
    return {name: len(normalizer_z32(k, flavor)) for name, k in kernels.items()}


def normalizer(group: str, kernel: Kernel, flavor: str = "complex") -> List[NormalizerElement]:
    if group == "heis3":
        return normalizer_heis(lattice_from_kernel(kernel), flavor)
    if group == "z3x2":
        return normalizer_z32(kernel, flavor)
    raise ValueError(f"Нормалізатор не підтримується для групи {group}")


def phi_image(elements: Iterable[NormalizerElement]) -> Set[Automorphism]:
    return {e.phi for e in elements}


def scalar_kernel(elements: Iterable[NormalizerElement]) -> List[NormalizerElement]:
    """Елементи з φ_C = id"""
    return [e for e in elements if e.phi.is_identity()]


# === ∗-дія ===

def star(c: NormalizerElement, tau: Cocycle, target: Optional[Lattice] = None) -> Cocycle:
    """
    C ∗ τ: u ↦ C·τ(φ_C⁻¹(u)), зведене на цільовому торі.

    Raises:
        ValueError: C задано для іншої решітки або групи
    """
    if c.phi.group != tau.group:
        raise ValueError(f"Елемент нормалізатора групи {c.phi.group}, коцикл групи {tau.group}")
    if c.lattice is not None and c.lattice != tau.lattice:
        raise ValueError(f"Елемент нормалізатора для {c.lattice.label}, коцикл на {tau.lattice.label}")
    target = target or tau.lattice
    table = _expand_table(tau)
    phi_inv = _phi_inverse(c.phi)
    action = c.map.real_action()
    values = []
    for u in generators(tau.group).values():
        values.append(target.reduce_scaled(action.apply_scaled(table[phi_inv.apply(u)])))
    return Cocycle(target, tau.group, tuple(values))


@lru_cache(maxsize=4096)
def _phi_inverse(phi: Automorphism) -> Automorphism:
    return phi.inverse()


# === Орбіти ядер ===

def heis_invariant(kernel: Kernel) -> bool:
    """Інваріантність щодо циклічного зсуву (v1, v2, v3) ↦ (v3, v1, v2)"""
    return all((v[2], v[0], v[1]) in kernel for v in kernel.elements)


def kernel_orbits(group: str = "z3x2") -> List[List[Kernel]]:
    """
    ℤ₃²: орбіти 15 ядер під 𝔽₃³-образом N_{Aut(E³)}(ρ(ℤ₃²)) (знакові перестановки).
    Heis(3): одноелементні «орбіти» ядер, інваріантних щодо циклічного зсуву.
    """
    kernels = kernel_enumerate()
    if group == "heis3":
        return [[k] for k in kernels if heis_invariant(k)]
    if group != "z3x2":
        raise ValueError(f"Орбіти ядер визначено лише для z3x2 та heis3, отримано {group}")
    signed = _signed_permutations()
    remaining = list(kernels)
    orbits = []
    while remaining:
        k = remaining[0]
        orbit = {kernel_image(c, k) for c in signed}
        members = sorted(orbit, key=lambda x: (len(x), x.elements))
        orbits.append(members)
        remaining = [x for x in remaining if x not in orbit]
    orbits.sort(key=lambda o: (len(o[0]), o[0].elements))
    logger.info(f"✓ Орбіт ядер: {len(orbits)} ({[len(o) for o in orbits]})")
    return orbits


@lru_cache(maxsize=1)
def _signed_permutations() -> Tuple[SemilinearMap, ...]:
    """Різні 𝔽₃³-образи ambient-нормалізатора, по одному представнику"""
    seen = {}
    basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for e in _ambient_z32("complex"):
        signature = tuple(tuple(fix_coordinate(x) for x in e.map.apply(lift(v))) for v in basis)
        seen.setdefault(signature, e.map)
    return tuple(seen[s] for s in sorted(seen))


# === Сертифікати порожнечі ===

@dataclass
class Emptiness:
    pair: Tuple[str, str]
    group: str
    method: str
    candidate_count: int
    witnesses_checked: int
    verdict: str
    covolume_ratio: Optional[Fraction] = None


def monomial_candidates() -> List[SemilinearMap]:
    """Усі (перестановка)·(діагональ з одиниць) з необов'язковим спряженням: 6·216·2"""
    candidates = []
    for perm in itertools.permutations(range(3)):
        for diag in itertools.product(UNITS, repeat=3):
            rows = [[diag[i] if j == perm[i] else 0 for j in range(3)] for i in range(3)]
            matrix = CycMatrix(rows)
            for antilinear in (False, True):
                candidates.append(SemilinearMap(matrix, antilinear))
    return candidates


def rational_cube_root(x: Fraction) -> Optional[Fraction]:
    p, exact_p = integer_nthroot(abs(x.numerator), 3)
    q, exact_q = integer_nthroot(x.denominator, 3)
    if not (exact_p and exact_q):
        return None
    return Fraction(p if x >= 0 else -p, q)


def cross_lattice_empty(source: Lattice, target: Lattice, group: str) -> Emptiness:
    """
    Сертифікат для 𝒩_ℝ(Λ, Λ′).

    ℤ₃²: повний перебір 2592 мономіальних кандидатів. Heis(3): будь-який елемент мав би вигляд μ·C₀
    з C₀ ∈ 𝒩_ℝ(Λ₁); тоді norm(μ)³ дорівнює відношенню кообʼємів, яке не є кубом раціонального числа.

    Raises:
        VerificationError: знайдено відображення між різними решітками
    """
    pair = (source.label, target.label)
    if group == "z3x2":
        candidates = monomial_candidates()
        witnesses = [c for c in candidates if maps_lattice(c, source, target)]
        if source == target:
            if not any(c.matrix == CycMatrix.identity(3) and not c.antilinear for c in witnesses):
                raise VerificationError(f"Одиниця не відображає {source.label} на себе")
            return Emptiness(pair, group, "monomial-scan", len(candidates), len(candidates), "nonempty")
        if witnesses:
            logger.error(f"✗ Знайдено {len(witnesses)} відображень {source.label} → {target.label}")
            raise VerificationError(f"𝒩_ℝ({source.label}, {target.label}) не порожній")
        return Emptiness(pair, group, "monomial-scan", len(candidates), len(candidates), "empty")
    if group == "heis3":
        ratio = Fraction(source.index_over(standard_lattice()), target.index_over(standard_lattice()))
        if source == target:
            return Emptiness(pair, group, "covolume-norm", 1, 1, "nonempty", ratio)
        root = rational_cube_root(ratio)
        if root is not None:
            raise VerificationError(f"Відношення кообʼємів {ratio} є кубом {root}: сертифікат не побудовано")
        return Emptiness(pair, group, "covolume-norm", 1, 1, "empty", ratio)
    raise ValueError(f"Сертифікат порожнечі не підтримується для групи {group}")
