"""
Pydantic схеми для JSON-звітів та зафіксованих чисел
"""

from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

CountValue = Union[int, List[int], List[str]]


# === Схеми для ядер ===

class KernelOut(BaseModel):
    """Ядро K ⊆ 𝔽₃³"""
    name: Optional[str] = Field(None, description="Ім'я представника (K1..K4), якщо є")
    label: str = Field(..., description="Твірні ядра, наприклад ⟨(1,1,0)⟩")
    order: int = Field(..., description="|K|")
    elements: List[List[int]] = Field(..., description="Відсортовані елементи K")
    heis_invariant: bool = Field(..., description="Інваріантність щодо циклічного зсуву координат")


class KernelOrbitOut(BaseModel):
    """Орбіта ядер під дією знакових перестановок"""
    representative: str = Field(..., description="Ім'я представника (K1..K4)")
    size: int = Field(..., description="Кількість ядер в орбіті")
    members: List[str] = Field(..., description="Мітки ядер орбіти")


class KernelsReport(BaseModel):
    """Звіт команди kernels"""
    total_subgroups: int = Field(..., description="Кількість усіх підгруп 𝔽₃³")
    kernels: List[KernelOut] = Field(..., description="Допустимі ядра")
    orbits: List[KernelOrbitOut] = Field(default_factory=list, description="Орбіти ℤ₃²-нормалізатора")
    counts: Dict[str, CountValue] = Field(default_factory=dict, description="Обчислені числа для перевірки")


# === Схеми для решіток і коциклів ===

class LatticeOut(BaseModel):
    """Решітка Λ_K"""
    name: Optional[str] = Field(None, description="Ім'я ядра (K1..K4)")
    label: str = Field(..., description="Λ як сума ℤ[ζ₃]³ та підйомів K")
    basis: List[List[str]] = Field(..., description="Базис Ерміта (рядки - дійсні координати)")
    index_over_standard: int = Field(..., description="[Λ : ℤ[ζ₃]³]")
    quotient_invariants: List[int] = Field(..., description="Інваріантні множники Λ/ℤ[ζ₃]³")


class CocycleOut(BaseModel):
    """Коцикл у стандартній формі"""
    group: str = Field(..., description="Ідентифікатор групи")
    values: Dict[str, List[str]] = Field(..., description="Твірна → трійка координат \"num/den + num/den·ζ₃\"")


class CohClassOut(BaseModel):
    """Клас когомологій"""
    representative: CocycleOut = Field(..., description="Лексикографічно найменший член")
    size: int = Field(..., description="Кількість коциклів у класі")
    members: Optional[List[CocycleOut]] = Field(None, description="Усі члени (лише для cohomology)")


class CocyclesReport(BaseModel):
    """Звіт команд cocycles та cohomology"""
    group: str = Field(..., description="Ідентифікатор групи")
    kernel: str = Field(..., description="Ім'я ядра")
    lattice: LatticeOut
    tuple_count: int = Field(..., description="Кількість добрих наборів параметрів")
    distinct_count: int = Field(..., description="Кількість різних коциклів на A")
    class_count: int = Field(..., description="Кількість добрих класів когомологій")
    coboundary_count: int = Field(..., description="Кількість різних кограниць стандартної форми")
    class_sizes: List[int] = Field(..., description="Розміри класів")
    classes: List[CohClassOut] = Field(..., description="Класи з представниками")
    counts: Dict[str, CountValue] = Field(default_factory=dict, description="Обчислені числа для перевірки")


# === Схеми для нормалізаторів ===

class NormalizerElementOut(BaseModel):
    """Елемент нормалізатора"""
    matrix: List[List[str]] = Field(..., description="Матриця над ℚ(ζ₃)")
    antilinear: bool = Field(..., description="z ↦ M·conj(z)")
    phi: Dict[str, str] = Field(..., description="Індукований автоморфізм: твірна → образ")


class NormalizerReport(BaseModel):
    """Звіт команди normalizer"""
    group: str = Field(..., description="Ідентифікатор групи")
    kernel: Optional[str] = Field(None, description="Ім'я ядра")
    flavor: Literal["complex", "real"] = Field(..., description="𝒩_ℂ або 𝒩_ℝ")
    order: int = Field(..., description="Порядок нормалізатора")
    phi_image_order: int = Field(..., description="|{φ_C}|")
    scalar_kernel_order: int = Field(..., description="Кількість C з φ_C = id")
    ambient_order: Optional[int] = Field(None, description="Порядок N_{Aut(E³)}(ρ(ℤ₃²)) до фільтра за ядром")
    stabilizer_orders: Dict[str, int] = Field(default_factory=dict, description="Ядро → порядок стабілізатора")
    generators: List[NormalizerElementOut] = Field(..., description="Твірні замикання")
    counts: Dict[str, CountValue] = Field(default_factory=dict, description="Обчислені числа для перевірки")


# === Схеми для класифікації ===

class EmptinessCertificate(BaseModel):
    """Сертифікат порожнечі 𝒩_ℝ(Λ, Λ′)"""
    pair: List[str] = Field(..., description="Впорядкована пара решіток")
    group: str = Field(..., description="Ідентифікатор групи")
    method: Literal["monomial-scan", "covolume-norm"] = Field(..., description="Спосіб перевірки")
    candidate_count: int = Field(..., description="Кількість кандидатів")
    witnesses_checked: int = Field(..., description="Кількість перевірених кандидатів")
    covolume_ratio: Optional[str] = Field(None, description="covol(Λ′)/covol(Λ)")
    verdict: Literal["empty", "nonempty"] = Field(..., description="Результат")


class DistinctionCertificate(BaseModel):
    """Чому рядки i та j топологічно різні"""
    pair: List[int] = Field(..., description="Впорядкована пара номерів рядків")
    reason: Literal["invariants", "lattice"] = Field(..., description="Різні π₁/особливості або порожній 𝒩_ℝ")
    detail: str = Field(..., description="Пояснення")


class QuotientDescriptorOut(BaseModel):
    """Рядок фінальної таблиці"""
    index: int = Field(..., description="Номер рядка")
    group: str = Field(..., description="Ідентифікатор групи")
    group_label: str = Field(..., description="Позначення групи")
    lattice: str = Field(..., description="Решітка")
    kernel: Optional[str] = Field(None, description="Ім'я ядра")
    action: str = Field(..., description="Трансляційні частини представника")
    cocycle: Optional[CocycleOut] = Field(None, description="Канонічний представник")
    singularity_count: int = Field(..., description="Кількість особливостей")
    singularity_type: List[int] = Field(..., description="(n; w₁, w₂, w₃)")
    singularities: str = Field(..., description="Наприклад, 9 × 1/3(1,1,1)")
    singular_points_by_orbits: Optional[int] = Field(None, description="Кількість G-орбіт нерухомих точок центральної твірної")
    fundamental_group: str = Field(..., description="π₁")
    uniformized_by_z2: bool = Field(..., description="Уніформізується E³/⟨ζ₃·id⟩")


class OrbitOut(BaseModel):
    """Орбіти добрих класів під ∗-дією"""
    group: str = Field(..., description="Ідентифікатор групи")
    kernel: str = Field(..., description="Ім'я ядра")
    class_count: int = Field(..., description="Кількість класів")
    orbit_count: int = Field(..., description="Кількість орбіт")
    orbit_sizes: List[int] = Field(..., description="Розміри орбіт")
    representative: CocycleOut = Field(..., description="Представник першої орбіти")


class ClassificationReport(BaseModel):
    """Повний звіт класифікації"""
    version: str = Field(..., description="Версія cyquot")
    rows: List[QuotientDescriptorOut] = Field(..., description="Рядки таблиці")
    orbits: List[OrbitOut] = Field(..., description="Дані орбіт біголоморфізму")
    emptiness: List[EmptinessCertificate] = Field(..., description="Сертифікати для різних решіток")
    distinctions: List[DistinctionCertificate] = Field(..., description="Сертифікати попарної відмінності")
    dual_search_agreement: bool = Field(..., description="Збіг вердиктів для двох просторів зсувів d")
    counts: Dict[str, CountValue] = Field(default_factory=dict, description="Обчислені числа для перевірки")


# === Схеми для зафіксованих чисел ===

# Джерела посилань: "<джерело>: <рядок/стовпець>"
ANCHOR_SOURCES = (
    "kernel enumeration",
    "automorphism groups",
    "lattice structure",
    "heisenberg count table",
    "z3^2 count table",
    "normalizer orders",
    "classification table",
    "certificates",
)


class ExpectedCount(BaseModel):
    """Очікуване значення з файлу зафіксованих чисел"""
    expected: CountValue = Field(..., description="Очікуване значення")
    anchor: str = Field(..., description="Посилання на результат: \"<джерело>: <рядок/стовпець>\"")

    @field_validator("anchor")
    @classmethod
    def check_anchor(cls, value: str) -> str:
        source, sep, locator = value.partition(": ")
        if not sep or source not in ANCHOR_SOURCES or not locator.strip():
            raise ValueError(f"Посилання має вигляд \"<джерело>: <рядок/стовпець>\" з джерелом з {ANCHOR_SOURCES}: {value!r}")
        return value


class ExpectedCounts(BaseModel):
    """Файл зафіксованих чисел"""
    version: int = Field(..., description="Версія файлу")
    claims: Dict[str, ExpectedCount] = Field(..., description="claim-id → очікуване значення")


class CountMismatch(BaseModel):
    """Розбіжність між очікуваним та обчисленим"""
    claim: str = Field(..., description="claim-id")
    expected: CountValue = Field(..., description="Очікуване значення")
    computed: CountValue = Field(..., description="Обчислене значення")
    anchor: str = Field(..., description="Звідки взялося число")
