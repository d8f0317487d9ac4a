"""
Ядра K ⊆ 𝔽₃³, решітки Λ_K = ℤ[ζ₃]³ + підйоми K, точки тора A = ℂ³/Λ

Точки зберігаються як цілі 6-вектори 9·x (дійсні координати степеневого базису), зведені
за базисом Ерміта решітки 9·Λ. Ототожнення Fix_{ζ₃}(E) = {0, t, −t} з 𝔽₃: 1 ↦ t.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from cyquot.algebra.cyclo import (
    CycMatrix,
    CycNum,
    T,
    Vector,
    det_int,
    flatten,
    hnf_columns,
    integral_matrix,
    rational_matrix,
    snf,
    snf_decomposition,
    solve_integral,
    unflatten,
    zeta,
)

logger = logging.getLogger(__name__)

SCALE = 9
F3 = (0, 1, 2)

Triple = Tuple[int, int, int]


# === Ядра ===

def _span(generators: Iterable[Triple]) -> FrozenSet[Triple]:
    elements = {(0, 0, 0)}
    for g in generators:
        elements = {
            tuple((x[i] + c * g[i]) % 3 for i in range(3))
            for x in elements
            for c in F3
        }
    return frozenset(elements)


@dataclass(frozen=True)
class Kernel:
    """Підгрупа 𝔽₃³ як відсортований список елементів"""

    elements: Tuple[Triple, ...]
    gens: Tuple[Triple, ...] = field(default=(), compare=False, repr=False)

    @classmethod
    def span(cls, generators: Sequence[Triple]) -> "Kernel":
        gens = tuple(tuple(int(c) % 3 for c in g) for g in generators)
        return cls(tuple(sorted(_span(gens))), gens)

    def __post_init__(self):
        if not self.gens and len(self.elements) > 1:
            object.__setattr__(self, "gens", _greedy_generators(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, v: Triple) -> bool:
        return tuple(c % 3 for c in v) in self.elements

    @property
    def dim(self) -> int:
        return {1: 0, 3: 1, 9: 2, 27: 3}[len(self.elements)]

    def generators(self) -> Tuple[Triple, ...]:
        return self.gens

    def projection(self, i: int) -> FrozenSet[int]:
        """p_i(K): множина i-тих координат"""
        return frozenset(v[i] for v in self.elements)

    def is_admissible(self) -> bool:
        """Немає ненульових кратних одиничних векторів"""
        for v in self.elements:
            if sum(1 for c in v if c) == 1:
                return False
        return True

    def is_closed(self) -> bool:
        elements = set(self.elements)
        return (0, 0, 0) in elements and all(
            tuple((a + b) % 3 for a, b in zip(x, y)) in elements for x in elements for y in elements
        )

    def label(self) -> str:
        if not self.gens:
            return "{0}"
        return "⟨" + ",".join(_triple_label(g) for g in self.gens) + "⟩"

    def to_json(self) -> List[List[int]]:
        return [list(v) for v in self.elements]


def _greedy_generators(elements: Sequence[Triple]) -> Tuple[Triple, ...]:
    chosen: List[Triple] = []
    current = _span(chosen)
    for v in elements:
        if v not in current:
            chosen.append(v)
            current = _span(chosen)
    return tuple(chosen)


def _triple_label(v: Triple) -> str:
    return "(" + ",".join(str(c if c < 2 else -1) for c in v) + ")"


K1 = Kernel.span([])
K2 = Kernel.span([(1, 1, 0)])
K3 = Kernel.span([(1, 1, 1)])
K4 = Kernel.span([(1, 1, 1), (1, 2, 0)])

# L1, L2 - решітки Λ₁, Λ₂ групи Гейзенберга (ті самі ядра, що K3, K4)
NAMED_KERNELS: Dict[str, Kernel] = {"K1": K1, "K2": K2, "K3": K3, "K4": K4, "L1": K3, "L2": K4}


def kernel_name(kernel: Kernel) -> Optional[str]:
    for name, named in NAMED_KERNELS.items():
        if named == kernel:
            return name
    return None


def all_subgroups() -> List[Kernel]:
    """Усі 28 підгруп 𝔽₃³ (підгрупи розмірності ≤ 2 породжуються двома векторами)"""
    space = list(itertools.product(F3, repeat=3))
    spans = {_span((u, v)) for u in space for v in space}
    spans.add(_span(((1, 0, 0), (0, 1, 0), (0, 0, 1))))
    kernels = [Kernel(tuple(sorted(s))) for s in spans]
    return sorted(kernels, key=lambda k: (len(k), k.elements))


def kernel_enumerate() -> List[Kernel]:
    """
    Підгрупи 𝔽₃³ без ненульових кратних одиничних векторів.

    Returns:
        15 ядер, упорядкованих за (порядок, елементи)
    """
    kernels = [k for k in all_subgroups() if k.is_admissible()]
    logger.debug(f"Ядра: {len(kernels)} з {len(all_subgroups())} підгруп")
    return kernels


def fix_coordinate(x: CycNum) -> int:
    """Елемент Fix_{ζ₃}(E) = {0, t, −t} як елемент 𝔽₃"""
    r = x.frac()
    for c in F3:
        if (T * c).frac() == r:
            return c
    raise ValueError(f"{x} не є нерухомою точкою ζ₃ на E")


def lift(v: Triple) -> Vector:
    """t·v ∈ ℚ(ζ₃)³"""
    return tuple(T * c for c in v)


# === Решітки ===

@dataclass(frozen=True)
class Lattice:
    """
    Решітка рангу 6. Для m=3 columns - стовпці базису Ерміта решітки SCALE·Λ у дійсних
    координатах; для m=7 - цілі координати заданого базису (scale=1).
    """

    order: int
    columns: Tuple[Tuple[int, ...], ...]
    scale: int = SCALE
    kernel: Optional[Kernel] = field(default=None, compare=False)
    label: str = field(default="", compare=False)

    def basis_vectors(self) -> List[Vector]:
        return [unflatten(self.order, [Fraction(c, self.scale) for c in col]) for col in self.columns]

    def reduce_scaled(self, coords: Sequence[int]) -> Tuple[int, ...]:
        """Канонічний представник класу SCALE·x за модулем SCALE·Λ"""
        if self.order != 3:
            raise ValueError("Зведення точок підтримується лише для решіток над ℤ[ζ₃]")
        x = list(coords)
        for j in range(len(self.columns) - 1, -1, -1):
            col = self.columns[j]
            q = x[j] // col[j]
            if q:
                for i in range(j + 1):
                    x[i] -= q * col[i]
        return tuple(x)

    def contains_scaled(self, coords: Sequence[int]) -> bool:
        return not any(self.reduce_scaled(coords))

    def basis_matrix(self) -> List[List[Fraction]]:
        """Рядково: елемент (i, j) - i-та координата j-го базисного вектора"""
        n = len(self.columns[0])
        return [[Fraction(col[i], self.scale) for col in self.columns] for i in range(n)]

    def quotient_invariants(self, sub: "Lattice") -> List[int]:
        """
        Структура скінченної групи self/sub через нормальну форму Сміта.

        Args:
            sub: Підрешітка

        Returns:
            Інваріантні множники (добуток дорівнює індексу)
        """
        W = rational_matrix(self.basis_matrix())
        W_sub = rational_matrix(sub.basis_matrix())
        X = W.inv() * W_sub
        if any(not x.is_integer for x in X):
            raise ValueError(f"{sub.label or 'решітка'} не є підрешіткою {self.label or 'решітки'}")
        return snf([[int(X[i, j]) for j in range(X.cols)] for i in range(X.rows)])

    def index_over(self, sub: "Lattice") -> int:
        result = 1
        for d in self.quotient_invariants(sub):
            result *= d
        return result

    def to_json(self) -> List[List[str]]:
        return [[f"{x.numerator}/{x.denominator}" for x in row] for row in self.basis_matrix()]


def _lattice_label(kernel: Kernel) -> str:
    base = "ℤ[ζ₃]³"
    if not kernel.gens:
        return base
    terms = []
    for g in kernel.gens:
        coords = ",".join({0: "0", 1: "t", 2: "−t"}[c] for c in g)
        terms.append(f"ℤ({coords})")
    return " + ".join([base] + terms)


@lru_cache(maxsize=64)
def lattice_from_kernel(kernel: Kernel) -> Lattice:
    """
    Λ_K = ℤ[ζ₃]³ + Σ ℤ·(t·v) по твірних v ядра K, канонізована через HNF.

    Args:
        kernel: Допустиме ядро

    Returns:
        Решітка з міткою та посиланням на ядро
    """
    generators = [tuple(SCALE if i == j else 0 for i in range(6)) for j in range(6)]
    for g in kernel.gens:
        generators.append(tuple(int(c * SCALE) for c in flatten(lift(g))))
    columns = hnf_columns(generators)
    name = kernel_name(kernel)
    if name is not None:
        kernel = NAMED_KERNELS[name]
    return Lattice(order=3, columns=columns, scale=SCALE, kernel=kernel, label=_lattice_label(kernel))


def standard_lattice() -> Lattice:
    return lattice_from_kernel(K1)


@lru_cache(maxsize=1)
def cm_lattice_z7() -> Lattice:
    """Решітка Λ(ζ₇,ζ₇²,ζ₇⁴) з базисом (ζ₇^k, ζ₇^{2k}, ζ₇^{4k}), k = 0..5"""
    columns = []
    for k in range(6):
        vector = (zeta(7, k), zeta(7, 2 * k), zeta(7, 4 * k))
        columns.append(tuple(int(c) for c in flatten(vector)))
    return Lattice(order=7, columns=tuple(columns), scale=1, label="Λ(ζ₇,ζ₇²,ζ₇⁴)")


# === Точки тора ===

def scale_vector(vector: Sequence[CycNum]) -> Tuple[int, ...]:
    coords = []
    for c in flatten(vector):
        value = c * SCALE
        if value.denominator != 1:
            raise ValueError(f"Переповнення знаменника: {c} (допустимі знаменники ділять {SCALE})")
        coords.append(value.numerator)
    return tuple(coords)


@dataclass(frozen=True)
class TorusPoint:
    """Канонічний представник точки A = ℂ³/Λ (координати помножені на SCALE)"""

    lattice: Lattice
    coords: Tuple[int, ...]

    @classmethod
    def from_scaled(cls, lattice: Lattice, coords: Sequence[int]) -> "TorusPoint":
        return cls(lattice, lattice.reduce_scaled(coords))

    @classmethod
    def zero(cls, lattice: Lattice) -> "TorusPoint":
        return cls(lattice, (0,) * 6)

    def _check(self, other: "TorusPoint"):
        if other.lattice is not self.lattice and other.lattice != self.lattice:
            raise ValueError("Точки різних торів")

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        self._check(other)
        return TorusPoint.from_scaled(self.lattice, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        self._check(other)
        return TorusPoint.from_scaled(self.lattice, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "TorusPoint":
        return TorusPoint.from_scaled(self.lattice, [-a for a in self.coords])

    def __mul__(self, n: int) -> "TorusPoint":
        return TorusPoint.from_scaled(self.lattice, [n * a for a in self.coords])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def transform(self, action: "RealAction", target: Optional[Lattice] = None) -> "TorusPoint":
        return TorusPoint.from_scaled(target or self.lattice, action.apply_scaled(self.coords))

    def to_vector(self) -> Vector:
        return unflatten(3, [Fraction(c, SCALE) for c in self.coords])

    def to_json(self) -> List[str]:
        return [c.to_str() for c in self.to_vector()]

    def sort_key(self) -> Tuple[int, ...]:
        return self.coords


def reduce(x: Sequence[CycNum], lattice: Lattice) -> TorusPoint:
    """
    Канонічний представник x за модулем Λ.

    Raises:
        ValueError: знаменник x не ділить 9
    """
    return TorusPoint.from_scaled(lattice, scale_vector(x))


def member(x: Sequence[CycNum], lattice: Lattice) -> bool:
    """x ∈ Λ через точний цілочисельний розв'язок B·y = x"""
    scaled = scale_vector(x)
    return solve_integral(_column_matrix(lattice), scaled) is not None


@lru_cache(maxsize=64)
def _column_matrix(lattice: Lattice) -> Tuple[Tuple[int, ...], ...]:
    n = len(lattice.columns[0])
    return tuple(tuple(col[i] for col in lattice.columns) for i in range(n))


@dataclass(frozen=True)
class RealAction:
    """Дійсно-лінійна дія x ↦ N·x / den на масштабованих координатах"""

    numerators: Tuple[Tuple[int, ...], ...]
    denominator: int

    @classmethod
    def of(cls, matrix: CycMatrix, antilinear: bool = False) -> "RealAction":
        return _real_action(matrix, antilinear)

    def apply_scaled(self, coords: Sequence[int]) -> Tuple[int, ...]:
        result = []
        for row in self.numerators:
            value = sum(a * x for a, x in zip(row, coords) if a)
            q, r = divmod(value, self.denominator)
            if r:
                raise ValueError("Образ точки виходить за межу знаменника 9")
            result.append(q)
        return tuple(result)


@lru_cache(maxsize=8192)
def _real_action(matrix: CycMatrix, antilinear: bool) -> RealAction:
    real = matrix.real_matrix(antilinear)
    den = lcm(*(x.denominator for row in real for x in row))
    numerators = tuple(tuple(int(x * den) for x in row) for row in real)
    return RealAction(numerators, den)


# === Нерухомі точки ===

def _minus_identity(matrix: CycMatrix) -> CycMatrix:
    return matrix - CycMatrix.identity(matrix.order, matrix.size)


def fixed_point_count(matrix: CycMatrix, lattice: Lattice) -> int:
    """
    Кількість нерухомих точок автоморфізму тора, індукованого M.

    Args:
        matrix: M, що зберігає Λ
        lattice: Решітка Λ

    Returns:
        |det_int(M − I)|

    Raises:
        ValueError: M − I вироджена (нерухомий локус не скінченний)
    """
    shifted = _minus_identity(matrix)
    if shifted.det().is_zero():
        raise ValueError("M − I вироджена: нерухомий локус не скінченний")
    return det_int(shifted, lattice.basis_vectors())


def kernel_on_torus(matrix: CycMatrix, lattice: Lattice) -> List[TorusPoint]:
    """
    Повний перелік ker(M − I) на торі, тобто ((M − I)^{-1}Λ)/Λ.

    Точки будуються з розкладу Сміта ℤ-матриці X відображення M − I: X·y ∈ ℤ⁶ тоді й лише тоді,
    коли y = T·w з w_i ∈ (1/d_i)ℤ.
    """
    shifted = _minus_identity(matrix)
    if shifted.det().is_zero():
        raise ValueError("M − I вироджена: нерухомий локус не скінченний")
    X = integral_matrix(shifted, lattice.basis_vectors())
    diagonal, _, t = snf_decomposition(X)
    moduli = [abs(d) for d in diagonal]
    points = set()
    for w in itertools.product(*(range(d) for d in moduli)):
        y = [sum(Fraction(t[i][k] * w[k], moduli[k]) for k in range(len(w))) for i in range(len(t))]
        scaled = []
        for i in range(6):
            value = sum(y[j] * lattice.columns[j][i] for j in range(6))
            if value.denominator != 1:
                raise ValueError("Переповнення знаменника при переліку нерухомих точок")
            scaled.append(value.numerator)
        points.add(lattice.reduce_scaled(scaled))
    expected = 1
    for d in moduli:
        expected *= d
    if len(points) != expected:
        raise ArithmeticError(f"Перелік дав {len(points)} точок замість {expected}")
    return [TorusPoint(lattice, p) for p in sorted(points)]


class AffineFixedLocus:
    """
    Чи має z ↦ M·z + s нерухому точку на A при виродженій M − I.

    (M − I)z + s ∈ Λ для деякого z ⟺ F·(B·y − s) = 0 для деякого y ∈ ℤ⁶, де рядки F
    утворюють базис лівого ядра M − I у дійсних координатах.
    """

    def __init__(self, matrix: CycMatrix, lattice: Lattice):
        self.lattice = lattice
        real = matrix.real_matrix()
        shifted = rational_matrix([[x - (1 if i == j else 0) for j, x in enumerate(row)] for i, row in enumerate(real)])
        rows = []
        for vector in shifted.T.nullspace():
            den = lcm(*(int(x.q) for x in vector))
            rows.append(tuple(int(x * den) for x in vector))
        self.annihilator = tuple(rows)
        self.system = tuple(
            tuple(sum(f[i] * col[i] for i in range(6)) for col in lattice.columns) for f in rows
        )

    @property
    def is_finite(self) -> bool:
        return not self.annihilator

    def has_fixed_point(self, shift: TorusPoint) -> bool:
        if not self.annihilator:
            return True
        rhs = [sum(f[i] * shift.coords[i] for i in range(6)) for f in self.annihilator]
        return solve_integral(self.system, rhs) is not None


# === Точки скруту ===

# Дев'ять точок E[3]: i/3 + (j/3)·ζ₃
E3_POINTS: Tuple[CycNum, ...] = tuple(
    CycNum(3, (Fraction(i, 3), Fraction(j, 3))) for i in F3 for j in F3
)


def torsion_generators(lattice: Lattice, torsion: int = SCALE) -> List[TorusPoint]:
    """
    Твірні підгрупи (1/torsion)·ℤ[ζ₃]³/Λ: точки (1/torsion)·e_i та (ζ₃/torsion)·e_i.

    Raises:
        ValueError: torsion не ділить SCALE
    """
    if torsion < 1 or SCALE % torsion:
        raise ValueError(f"Скрут {torsion} не сумісний з масштабом {SCALE}")
    step = SCALE // torsion
    return [
        TorusPoint.from_scaled(lattice, [step if j == i else 0 for j in range(6)])
        for i in range(6)
    ]
