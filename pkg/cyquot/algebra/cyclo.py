"""
Точна арифметика в кругових полях ℚ(ζ₃), ℚ(ζ₇) та цілочисельна лінійна алгебра решіток

Числа зберігаються в степеневому базисі {1, ζ, …, ζ^{φ(m)-1}} з раціональними коефіцієнтами.
Нормальні форми Ерміта/Сміта беруться з sympy.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Matrix, Rational, ZZ
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp

logger = logging.getLogger(__name__)

SUPPORTED_ORDERS = (3, 7)
SUBSCRIPTS = {3: "₃", 7: "₇"}

Scalar = Union[int, Fraction]
IntMatrix = Sequence[Sequence[int]]


def _reduce(order: int, coeffs: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Зведення многочлена від ζ за модулем Φ_m (m просте)"""
    folded = [Fraction(0)] * order
    for i, c in enumerate(coeffs):
        folded[i % order] += c
    top = folded[order - 1]
    return tuple(folded[i] - top for i in range(order - 1))


class CycNum:
    """Елемент ℚ(ζ_m), m ∈ {3, 7}. Незмінний."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[Union[Scalar, str]]):
        if order not in SUPPORTED_ORDERS:
            raise ValueError(f"Непідтримуваний порядок кругового поля: {order}")
        values = [Fraction(c) for c in coeffs]
        if len(values) != order - 1:
            values = list(_reduce(order, values)) if len(values) >= order else values + [Fraction(0)] * (order - 1 - len(values))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(values))

    def __setattr__(self, name, value):
        raise AttributeError("CycNum є незмінним")

    def __reduce__(self):
        return CycNum._raw, (self.order, self.coeffs)

    @classmethod
    def _raw(cls, order: int, coeffs: Tuple[Fraction, ...]) -> "CycNum":
        obj = object.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    # === Конструктори ===

    @classmethod
    def from_scalar(cls, order: int, value: Scalar) -> "CycNum":
        return cls(order, [value])

    @classmethod
    def zero(cls, order: int = 3) -> "CycNum":
        return cls(order, [])

    @classmethod
    def one(cls, order: int = 3) -> "CycNum":
        return cls(order, [1])

    # === Арифметика ===

    def _coerce(self, other) -> "CycNum":
        if isinstance(other, CycNum):
            if other.order != self.order:
                raise TypeError(f"Різні кругові порядки: {self.order} і {other.order}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.from_scalar(self.order, other)
        return NotImplemented

    def __add__(self, other) -> "CycNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycNum._raw(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CycNum":
        return CycNum._raw(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> "CycNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycNum._raw(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other) -> "CycNum":
        return (-self) + other

    def __mul__(self, other) -> "CycNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.order == 3:
            a, b = self.coeffs
            c, d = other.coeffs
            bd = b * d
            return CycNum._raw(3, (a * c - bd, a * d + b * c - bd))
        product = [Fraction(0)] * (2 * self.order - 3)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    product[i + j] += a * b
        return CycNum(self.order, _reduce(self.order, product))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "CycNum":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("Ділення на нуль у круговому полі")
            return CycNum(self.order, [a / other for a in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, exponent: int) -> "CycNum":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycNum.one(self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def galois(self, j: int) -> "CycNum":
        """Автоморфізм Галуа ζ ↦ ζ^j"""
        if j % self.order == 0:
            raise ValueError(f"ζ ↦ ζ^{j} не є автоморфізмом")
        image = [Fraction(0)] * self.order
        for i, c in enumerate(self.coeffs):
            image[(i * j) % self.order] += c
        return CycNum(self.order, _reduce(self.order, image))

    def conj(self) -> "CycNum":
        return self.galois(self.order - 1)

    def norm(self) -> Fraction:
        """Добуток по всіх вкладеннях (для m=3: x·conj(x))"""
        result = self
        for j in range(2, self.order):
            result = result * self.galois(j)
        if not result.is_rational():
            raise ArithmeticError(f"Норма {self} не раціональна: {result}")
        return result.coeffs[0]

    def inverse(self) -> "CycNum":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("Обернення нуля у круговому полі")
        cofactor = CycNum.one(self.order)
        for j in range(2, self.order):
            cofactor = cofactor * self.galois(j)
        return cofactor / n

    # === Предикати ===

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_integral(self) -> bool:
        """Належність ℤ[ζ_m] (степеневий базис є ℤ-базисом)"""
        return all(c.denominator == 1 for c in self.coeffs)

    def frac(self) -> "CycNum":
        """Представник класу за модулем ℤ[ζ_m] з коефіцієнтами в [0, 1)"""
        return CycNum(self.order, [c - (c.numerator // c.denominator) for c in self.coeffs])

    # === Порівняння та серіалізація ===

    def __eq__(self, other) -> bool:
        if isinstance(other, CycNum):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def sort_key(self) -> Tuple[Fraction, ...]:
        return self.coeffs

    def to_str(self) -> str:
        """JSON-форма: "num/den + num/den·ζ₃" """
        sub = SUBSCRIPTS[self.order]
        parts = [f"{self.coeffs[0].numerator}/{self.coeffs[0].denominator}"]
        for i, c in enumerate(self.coeffs[1:], start=1):
            power = "" if i == 1 else f"^{i}"
            parts.append(f"{c.numerator}/{c.denominator}·ζ{sub}{power}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"CycNum({self.order}, {[str(c) for c in self.coeffs]})"

    __str__ = to_str


def zeta(order: int = 3, power: int = 1) -> CycNum:
    """Первісний корінь ζ_m у степені power"""
    coeffs = [0] * order
    coeffs[power % order] = 1
    return CycNum(order, _reduce(order, [Fraction(c) for c in coeffs]))


# t = (1+2ζ₃)/3, твірна Fix_{ζ₃}(E) = {0, t, −t}
T = CycNum(3, (Fraction(1, 3), Fraction(2, 3)))

# Шість одиниць ℤ[ζ₃]: ±1, ±ζ₃, ±ζ₃²
UNITS = tuple(sign * zeta(3, p) for p in range(3) for sign in (1, -1))


def mul(x: CycNum, y: CycNum) -> CycNum:
    if x.order != y.order:
        raise TypeError(f"Різні кругові порядки: {x.order} і {y.order}")
    return x * y


def conj(x: CycNum) -> CycNum:
    return x.conj()


def norm(x: CycNum) -> Fraction:
    return x.norm()


# === Вектори над ℚ(ζ_m) ===

Vector = Tuple[CycNum, ...]


def vec_add(x: Sequence[CycNum], y: Sequence[CycNum]) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: Sequence[CycNum], y: Sequence[CycNum]) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c: Union[CycNum, Scalar], x: Sequence[CycNum]) -> Vector:
    return tuple(c * a for a in x)


def flatten(x: Sequence[CycNum]) -> Tuple[Fraction, ...]:
    """Дійсні координати вектора: конкатенація коефіцієнтів степеневого базису"""
    return tuple(c for a in x for c in a.coeffs)


def unflatten(order: int, values: Sequence[Scalar]) -> Vector:
    width = order - 1
    return tuple(CycNum(order, values[i:i + width]) for i in range(0, len(values), width))


# === Матриці над ℚ(ζ_m) ===

class CycMatrix:
    """Квадратна матриця над ℚ(ζ_m); усі елементи мають спільний порядок m"""

    __slots__ = ("order", "rows")

    def __init__(self, rows: Sequence[Sequence[Union[CycNum, Scalar]]], order: int = 3):
        built = []
        for row in rows:
            built_row = []
            for entry in row:
                if isinstance(entry, CycNum):
                    if entry.order != order:
                        raise TypeError(f"Елемент порядку {entry.order} у матриці порядку {order}")
                    built_row.append(entry)
                else:
                    built_row.append(CycNum.from_scalar(order, entry))
            built.append(tuple(built_row))
        if any(len(row) != len(built) for row in built):
            raise ValueError("Матриця має бути квадратною")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "rows", tuple(built))

    def __setattr__(self, name, value):
        raise AttributeError("CycMatrix є незмінною")

    @classmethod
    def identity(cls, order: int = 3, size: int = 3) -> "CycMatrix":
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)], order)

    @classmethod
    def diag(cls, entries: Sequence[CycNum]) -> "CycMatrix":
        order = entries[0].order
        size = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(size)] for i in range(size)], order)

    @classmethod
    def scalar(cls, value: CycNum, size: int = 3) -> "CycMatrix":
        return cls.diag([value] * size)

    @property
    def size(self) -> int:
        return len(self.rows)

    def __matmul__(self, other: "CycMatrix") -> "CycMatrix":
        if not isinstance(other, CycMatrix):
            return NotImplemented
        if other.order != self.order:
            raise TypeError(f"Різні кругові порядки: {self.order} і {other.order}")
        zero = CycNum.zero(self.order)
        n = self.size
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    a = self.rows[i][k]
                    if not a.is_zero():
                        b = other.rows[k][j]
                        if not b.is_zero():
                            acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return CycMatrix(rows, self.order)

    def __mul__(self, c: Union[CycNum, Scalar]) -> "CycMatrix":
        return CycMatrix([[c * a for a in row] for row in self.rows], self.order)

    __rmul__ = __mul__

    def __add__(self, other: "CycMatrix") -> "CycMatrix":
        return CycMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.order)

    def __sub__(self, other: "CycMatrix") -> "CycMatrix":
        return CycMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.order)

    def apply(self, vector: Sequence[CycNum]) -> Vector:
        zero = CycNum.zero(self.order)
        result = []
        for row in self.rows:
            acc = zero
            for a, x in zip(row, vector):
                acc = acc + a * x
            result.append(acc)
        return tuple(result)

    def conj(self) -> "CycMatrix":
        return CycMatrix([[a.conj() for a in row] for row in self.rows], self.order)

    def det(self) -> CycNum:
        if self.size == 1:
            return self.rows[0][0]
        total = CycNum.zero(self.order)
        for j in range(self.size):
            minor = CycMatrix([row[:j] + row[j + 1:] for row in self.rows[1:]], self.order)
            term = self.rows[0][j] * minor.det()
            total = total + term if j % 2 == 0 else total - term
        return total

    def inverse(self) -> "CycMatrix":
        d = self.det()
        if d.is_zero():
            raise ZeroDivisionError("Вироджена матриця")
        inv_d = d.inverse()
        n = self.size
        cofactors = []
        for i in range(n):
            row = []
            for j in range(n):
                # adj[i][j] = (-1)^{i+j} · M_{ji}
                minor = CycMatrix(
                    [r[:i] + r[i + 1:] for k, r in enumerate(self.rows) if k != j],
                    self.order,
                ) if n > 1 else None
                value = minor.det() if minor is not None else CycNum.one(self.order)
                row.append(value * inv_d if (i + j) % 2 == 0 else -value * inv_d)
            cofactors.append(row)
        return CycMatrix(cofactors, self.order)

    def is_monomial(self) -> bool:
        return all(sum(1 for a in row if not a.is_zero()) == 1 for row in self.rows) and all(
            sum(1 for row in self.rows if not row[j].is_zero()) == 1 for j in range(self.size)
        )

    def real_matrix(self, antilinear: bool = False) -> Tuple[Tuple[Fraction, ...], ...]:
        """
        Матриця дійсно-лінійного відображення z ↦ M·z (або z ↦ M·conj(z)) у дійсних координатах
        степеневого базису.
        """
        width = self.order - 1
        basis = [zeta(self.order, l) for l in range(width)]
        if antilinear:
            basis = [b.conj() for b in basis]
        n = self.size
        real = [[Fraction(0)] * (n * width) for _ in range(n * width)]
        for i, row in enumerate(self.rows):
            for j, entry in enumerate(row):
                if entry.is_zero():
                    continue
                for l, b in enumerate(basis):
                    column = (entry * b).coeffs
                    for r in range(width):
                        real[i * width + r][j * width + l] = column[r]
        return tuple(tuple(row) for row in real)

    def key(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return tuple(flatten(row) for row in self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycMatrix):
            return NotImplemented
        return self.order == other.order and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.order, self.key()))

    def to_json(self) -> List[List[str]]:
        return [[a.to_str() for a in row] for row in self.rows]

    def __repr__(self) -> str:
        return f"CycMatrix({self.to_json()})"


# === Цілочисельна лінійна алгебра (sympy) ===

def rational_matrix(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    return Matrix([[Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in rows])


def _int_rows(matrix: Matrix) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(int(matrix[i, j]) for j in range(matrix.cols)) for i in range(matrix.rows))


def snf(M: IntMatrix) -> List[int]:
    """
    Інваріантні множники нормальної форми Сміта.

    Args:
        M: Цілочисельна матриця

    Returns:
        Діагональ d₁ | d₂ | … (невід'ємні, включно з нулями)
    """
    rows = tuple(tuple(int(x) for x in row) for row in M)
    if not rows or not rows[0]:
        return []
    diagonal, _, _ = _smith_decomposition(rows)
    return [abs(d) for d in diagonal]


@lru_cache(maxsize=512)
def _smith_decomposition(rows: Tuple[Tuple[int, ...], ...]):
    """D = S·M·T; повертає (діагональ D зі знаками, S, T) у вигляді кортежів"""
    matrix = Matrix(rows)
    smf, s, t = smith_normal_decomp(matrix, domain=ZZ)
    if smf != s * matrix * t:
        raise ArithmeticError("Розклад Сміта не пройшов перевірку D = S·M·T")
    diagonal = tuple(int(smf[i, i]) for i in range(min(smf.rows, smf.cols)))
    return diagonal, _int_rows(s), _int_rows(t)


def snf_decomposition(M: IntMatrix):
    """Розклад Сміта (діагональ, S, T) з D = S·M·T"""
    return _smith_decomposition(tuple(tuple(int(x) for x in row) for row in M))


def solve_integral(M: IntMatrix, v: Sequence[int]) -> Optional[List[int]]:
    """
    Цілий розв'язок x системи M·x = v.

    Розв'язок детермінований: вільні координати в базисі Сміта дорівнюють нулю.

    Args:
        M: Цілочисельна матриця (n_rows × n_cols)
        v: Цілий вектор довжини n_rows

    Returns:
        Список цілих або None, якщо цілого розв'язку немає
    """
    rows = tuple(tuple(int(x) for x in row) for row in M)
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    if len(v) != n_rows:
        raise ValueError(f"Довжина вектора {len(v)} не збігається з кількістю рядків {n_rows}")
    if n_cols == 0:
        return [] if not any(v) else None
    diagonal, s, t = _smith_decomposition(rows)
    w = [sum(s[i][k] * int(v[k]) for k in range(n_rows)) for i in range(n_rows)]
    y = [0] * n_cols
    for i in range(n_rows):
        d = diagonal[i] if i < len(diagonal) else 0
        if d == 0:
            if w[i] != 0:
                return None
            continue
        if w[i] % d:
            return None
        y[i] = w[i] // d
    return [sum(t[i][k] * y[k] for k in range(n_cols)) for i in range(n_cols)]


def hnf_columns(columns: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    """
    Базис Ерміта для модуля, породженого стовпцями.

    Повертає стовпці верхньотрикутної матриці з додатною діагоналлю; елементи праворуч від
    опорного в кожному рядку зведені до [0, опорний).
    """
    dim = len(columns[0])
    matrix = Matrix([[int(col[i]) for col in columns] for i in range(dim)])
    hnf = hermite_normal_form(matrix)
    if hnf.rows != hnf.cols:
        raise ValueError(f"Модуль не має повного рангу: {hnf.shape}")
    for i in range(hnf.rows):
        if hnf[i, i] <= 0 or any(hnf[i, j] != 0 for j in range(i)):
            raise ArithmeticError("Неочікувана форма HNF (потрібна верхньотрикутна)")
    return tuple(tuple(int(hnf[i, j]) for i in range(hnf.rows)) for j in range(hnf.cols))


def integral_matrix(matrix: CycMatrix, basis: Sequence[Sequence[CycNum]], antilinear: bool = False) -> Tuple[Tuple[int, ...], ...]:
    """
    ℤ-матриця відображення L у заданому базисі решітки: L(b_j) = Σ X_ij · b_i.

    Raises:
        ValueError: L не зберігає решітку
    """
    flat_basis = [flatten(b) for b in basis]
    images = [flatten(matrix.apply(_maybe_conj(b, antilinear))) for b in basis]
    B = rational_matrix([[col[i] for col in flat_basis] for i in range(len(flat_basis[0]))])
    LB = rational_matrix([[col[i] for col in images] for i in range(len(images[0]))])
    gram = B.T * B
    X = gram.inv() * B.T * LB
    if B * X != LB:
        raise ValueError("Образ базису не лежить у ℚ-оболонці решітки")
    if any(not x.is_integer for x in X):
        raise ValueError("Відображення не зберігає решітку")
    return _int_rows(X)


def _maybe_conj(vector: Sequence[CycNum], antilinear: bool) -> Vector:
    return tuple(a.conj() for a in vector) if antilinear else tuple(vector)


def det_int(matrix: CycMatrix, basis: Sequence[Sequence[CycNum]]) -> int:
    """
    |det| ℤ-матриці лінійного відображення в базисі решітки.

    Args:
        matrix: Лінійне відображення (CycMatrix)
        basis: ℤ-базис решітки, вектори над ℚ(ζ_m)

    Returns:
        Абсолютне значення детермінанта
    """
    X = integral_matrix(matrix, basis)
    return abs(int(Matrix(X).det()))
