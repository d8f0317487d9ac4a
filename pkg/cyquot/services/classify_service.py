"""
Сервіс класифікації

Орбіти добрих класів під ∗-дією нормалізатора, дескриптори факторів (особливості, π₁),
сертифікати попарної відмінності та збирання фінальної таблиці з восьми рядків.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from cyquot import __version__
from cyquot.algebra.cyclo import CycMatrix, zeta
from cyquot.algebra.groups import (
    GROUP_LABELS,
    analytic_rep,
    automorphisms,
    central_generator,
    char_stabilizer,
    generators,
    group_order,
)
from cyquot.algebra.torus import (
    K1,
    K3,
    K4,
    NAMED_KERNELS,
    SCALE,
    Kernel,
    Lattice,
    RealAction,
    all_subgroups,
    cm_lattice_z7,
    fixed_point_count,
    kernel_enumerate,
    kernel_name,
    kernel_on_torus,
    lattice_from_kernel,
    standard_lattice,
)
from cyquot.config import settings
from cyquot.schemas import (
    ClassificationReport,
    CocycleOut,
    DistinctionCertificate,
    EmptinessCertificate,
    LatticeOut,
    OrbitOut,
    QuotientDescriptorOut,
)
from cyquot.services.cocycle_service import (
    CohClass,
    Cocycle,
    coboundaries,
    coboundary_image,
    cohomology_classes,
    distinct_cocycles,
    enumerate_good,
)
from cyquot.services.normalizer_service import (
    Emptiness,
    NormalizerElement,
    ambient_normalizer_z32,
    cross_lattice_empty,
    heis_invariant,
    kernel_orbits,
    normalizer,
    phi_image,
    scalar_kernel,
    star,
)
from cyquot.utils import pinning
from cyquot.utils.pinning import VerificationError
from cyquot.utils.render import describe_action
from cyquot.utils.union_find import UnionFind, find_orbits

logger = logging.getLogger(__name__)

# Рядки таблиці: група та ядро (None - решітка визначена групою)
TABLE_LAYOUT: Tuple[Tuple[str, Optional[str]], ...] = (
    ("z7", None),
    ("z3", "K1"),
    ("z3x2", "K1"),
    ("z3x2", "K2"),
    ("z3x2", "K3"),
    ("z3x2", "K4"),
    ("heis3", "K3"),
    ("heis3", "K4"),
)

PI1_LABELS = {1: "{1}", 3: "Z3", 9: "Z3^2"}


# === Еквівалентність та орбіти ===

def _boundary_keys(lattice: Lattice, group: str, torsion: Optional[int]) -> frozenset:
    if torsion is None:
        return frozenset(c.key for c in coboundaries(lattice, group))
    return coboundary_image(lattice, group, torsion)


def equivalent(
    tau: Cocycle,
    other: Cocycle,
    elements: Sequence[NormalizerElement],
    torsion: Optional[int] = None,
) -> bool:
    """
    Чи існують C ∈ N та d з (ρ(u) − I)d = (C∗τ)(u) − τ′(u) в A′ для всіх твірних u.

    Args:
        tau: τ
        other: τ′
        elements: Список нормалізатора N
        torsion: None - d з 27 точок ker(ζ₃·I − I); інакше d пробігає всю (1/torsion)·ℤ[ζ₃]³/Λ′
    """
    boundaries = _boundary_keys(other.lattice, other.group, torsion)
    for c in elements:
        if (star(c, tau, other.lattice) - other).key in boundaries:
            return True
    return False


def orbit_partition(classes: Sequence[CohClass], elements: Sequence[NormalizerElement]) -> List[List[CohClass]]:
    """
    Розбиття класів на орбіти ∗-дії.

    Returns:
        Орбіти (класи всередині та самі орбіти впорядковані за представником)

    Raises:
        VerificationError: образ доброго класу не є добрим класом
    """
    lookup = {m.key: i for i, cls in enumerate(classes) for m in cls.members}
    uf = UnionFind(range(len(classes)))
    for i, cls in enumerate(classes):
        for c in elements:
            j = lookup.get(star(c, cls.representative).key)
            if j is None:
                raise VerificationError("∗-образ доброго класу не є добрим класом")
            uf.union(i, j)
    orbits = [sorted((classes[i] for i in members), key=lambda cls: cls.representative.sort_key())
              for members in uf.groups().values()]
    return sorted(orbits, key=lambda orbit: orbit[0].representative.sort_key())


def dual_search_agreement(
    representative: Cocycle,
    classes: Sequence[CohClass],
    elements: Sequence[NormalizerElement],
) -> bool:
    """
    Порівнює вердикти equivalent для 27-точкового простору d та для всієї підгрупи
    (1/9)·ℤ[ζ₃]³/Λ без вимоги стандартної форми кограниці.
    """
    for cls in classes:
        narrow = equivalent(representative, cls.representative, elements)
        wide = equivalent(representative, cls.representative, elements, torsion=SCALE)
        if narrow != wide:
            logger.error(f"✗ Вердикти розходяться для {cls.representative.to_json()}")
            return False
    return True


# === Аналіз однієї решітки ===

@dataclass
class LatticeAnalysis:
    group: str
    kernel: Kernel
    lattice: Lattice
    tuple_count: int
    cocycles: List[Cocycle]
    classes: List[CohClass]
    coboundary_count: int
    elements: List[NormalizerElement] = field(default_factory=list)
    orbits: List[List[CohClass]] = field(default_factory=list)

    @property
    def name(self) -> str:
        return kernel_name(self.kernel) or self.kernel.label()

    def counts(self) -> Dict[str, int]:
        prefix = f"cocycles.{self.group}.{self.name}"
        result = {
            f"{prefix}.tuples": self.tuple_count,
            f"{prefix}.distinct": len(self.cocycles),
            f"{prefix}.classes": len(self.classes),
        }
        if self.classes:
            result[f"{prefix}.coboundaries"] = self.coboundary_count
        if self.orbits:
            result[f"classify.{self.group}.{self.name}.orbits"] = len(self.orbits)
        return result


def analyse_cocycles(group: str, kernel: Kernel, jobs: Optional[int] = None) -> LatticeAnalysis:
    """Добрі набори → різні коцикли → класи когомологій"""
    lattice = lattice_from_kernel(kernel)
    tuples = enumerate_good(group, kernel, jobs)
    cocycles = distinct_cocycles(tuples, lattice)
    classes = cohomology_classes(cocycles, lattice, group)
    count = len(coboundaries(lattice, group)) if cocycles else 0
    return LatticeAnalysis(group, kernel, lattice, len(tuples), cocycles, classes, count)


def analyse_lattice(group: str, kernel: Kernel, jobs: Optional[int] = None) -> LatticeAnalysis:
    """analyse_cocycles + 𝒩_ℂ та орбіти ∗-дії"""
    analysis = analyse_cocycles(group, kernel, jobs)
    if analysis.classes:
        analysis.elements = normalizer(group, kernel, "complex")
        analysis.orbits = orbit_partition(analysis.classes, analysis.elements)
        logger.info(f"✓ {group}, {analysis.name}: {len(analysis.classes)} класів → {len(analysis.orbits)} орбіт")
    return analysis


# === Дескриптори ===

@dataclass(frozen=True)
class QuotientDescriptor:
    group: str
    kernel: Optional[str]
    lattice: Lattice
    cocycle: Optional[Cocycle]
    singularity_count: int
    singularity_type: Tuple[int, int, int, int]
    fundamental_group: str
    uniformized_by_z2: bool
    singular_points_by_orbits: Optional[int]

    @property
    def singularities(self) -> str:
        n, *w = self.singularity_type
        return f"{self.singularity_count} × 1/{n}({','.join(str(x) for x in w)})"


def _eigen_weights(matrix: CycMatrix, n: int) -> Tuple[int, int, int]:
    weights = []
    for i, row in enumerate(matrix.rows):
        if any(not x.is_zero() for j, x in enumerate(row) if j != i):
            raise ValueError("Матриця центральної твірної не діагональна")
        matches = [w for w in range(1, n) if zeta(n, w) == row[i]]
        if len(matches) != 1:
            raise ValueError(f"Власне значення {row[i]} не є первісним коренем степеня {n}")
        weights.append(matches[0])
    return tuple(weights)


def singular_orbit_count(tau: Cocycle) -> int:
    """Кількість G-орбіт нерухомих точок Φ(k) на A під афінною дією Φ(u)(z) = ρ(u)z + τ(u)"""
    rep = analytic_rep(tau.group)
    central = central_generator(tau.group)
    points = [p.coords for p in kernel_on_torus(rep(central), tau.lattice)]
    shifts = dict(zip(generators(tau.group).values(), tau.values))

    def act(u, coords):
        moved = RealAction.of(rep(u)).apply_scaled(coords)
        return tau.lattice.reduce_scaled([x + s for x, s in zip(moved, shifts[u])])

    return len(find_orbits(generators(tau.group).values(), points, act))


def descriptor(group: str, kernel: Optional[Kernel], tau: Optional[Cocycle]) -> QuotientDescriptor:
    """
    Дескриптор фактора A/G.

    Кількість особливостей = fixed_point_count(ρ(k), Λ)·n/|G| (n - порядок k), тип - показники
    власних значень ρ(k); π₁ = G/⟨k⟩. Для груп над ℤ[ζ₃] кількість додатково перевіряється
    явним підрахунком орбіт нерухомих точок.

    Raises:
        VerificationError: два способи підрахунку розходяться
    """
    if group == "z7":
        lattice, n = cm_lattice_z7(), 7
    else:
        lattice, n = (tau.lattice if tau is not None else lattice_from_kernel(kernel or K1)), 3
    matrix = analytic_rep(group)(central_generator(group))
    fixed = fixed_point_count(matrix, lattice)
    order = group_order(group)
    count, remainder = divmod(fixed * n, order)
    if remainder:
        raise VerificationError(f"{fixed}·{n}/{order} не ціле")
    by_orbits = None
    if group != "z7":
        by_orbits = singular_orbit_count(tau or Cocycle.zero(lattice, group))
        if by_orbits != count:
            logger.error(f"✗ {group}: {count} особливостей за детермінантом, {by_orbits} за орбітами")
            raise VerificationError(f"Кількість особливостей розходиться: {count} ≠ {by_orbits}")
    return QuotientDescriptor(
        group=group,
        kernel=kernel_name(kernel) if kernel is not None and group != "z7" else None,
        lattice=lattice,
        cocycle=tau,
        singularity_count=count,
        singularity_type=(n, *_eigen_weights(matrix, n)),
        fundamental_group=PI1_LABELS[order // n],
        uniformized_by_z2=group in ("z3x2", "heis3"),
        singular_points_by_orbits=by_orbits,
    )


# === Серіалізація ===

def cocycle_out(tau: Cocycle) -> CocycleOut:
    return CocycleOut(group=tau.group, values=tau.to_json())


def lattice_out(kernel: Kernel) -> LatticeOut:
    lattice = lattice_from_kernel(kernel)
    standard = standard_lattice()
    return LatticeOut(
        name=kernel_name(kernel),
        label=lattice.label,
        basis=lattice.to_json(),
        index_over_standard=lattice.index_over(standard),
        quotient_invariants=lattice.quotient_invariants(standard),
    )


def descriptor_out(index: int, d: QuotientDescriptor) -> QuotientDescriptorOut:
    return QuotientDescriptorOut(
        index=index,
        group=d.group,
        group_label=GROUP_LABELS[d.group],
        lattice=d.lattice.label,
        kernel=d.kernel,
        action=describe_action(d.group, d.cocycle),
        cocycle=cocycle_out(d.cocycle) if d.cocycle is not None and d.group in ("z3x2", "heis3") else None,
        singularity_count=d.singularity_count,
        singularity_type=list(d.singularity_type),
        singularities=d.singularities,
        singular_points_by_orbits=d.singular_points_by_orbits,
        fundamental_group=d.fundamental_group,
        uniformized_by_z2=d.uniformized_by_z2,
    )


def certificate_out(e: Emptiness) -> EmptinessCertificate:
    ratio = None if e.covolume_ratio is None else str(e.covolume_ratio)
    return EmptinessCertificate(
        pair=list(e.pair),
        group=e.group,
        method=e.method,
        candidate_count=e.candidate_count,
        witnesses_checked=e.witnesses_checked,
        covolume_ratio=ratio,
        verdict=e.verdict,
    )


# === Сертифікати відмінності ===

def distinction_certificates(
    rows: Sequence[QuotientDescriptorOut],
    emptiness: Sequence[EmptinessCertificate],
) -> List[DistinctionCertificate]:
    """
    Для кожної впорядкованої пари рядків: різні π₁/особливості або сертифікат порожнечі 𝒩_ℝ.

    Raises:
        VerificationError: пару не вдалося розрізнити
    """
    empty = {(c.group, tuple(c.pair)) for c in emptiness if c.verdict == "empty"}
    result = []
    for a in rows:
        for b in rows:
            if a.index == b.index:
                continue
            invariants_a = (a.fundamental_group, a.singularities)
            invariants_b = (b.fundamental_group, b.singularities)
            if invariants_a != invariants_b:
                detail = f"π₁ {a.fundamental_group} / {b.fundamental_group}; {a.singularities} / {b.singularities}"
                result.append(DistinctionCertificate(pair=[a.index, b.index], reason="invariants", detail=detail))
            elif a.group == b.group and (a.group, (a.lattice, b.lattice)) in empty:
                detail = f"𝒩_ℝ({a.lattice}, {b.lattice}) = ∅"
                result.append(DistinctionCertificate(pair=[a.index, b.index], reason="lattice", detail=detail))
            else:
                raise VerificationError(f"Рядки {a.index} та {b.index} не розрізнено")
    return result


# === Проміжні числа ===

def kernel_counts() -> Dict[str, object]:
    orbits = kernel_orbits("z3x2")
    return {
        "kernels.subgroups": len(all_subgroups()),
        "kernels.admissible": len(kernel_enumerate()),
        "kernels.z3x2.orbits": len(orbits),
        "kernels.z3x2.orbit_sizes": [len(o) for o in orbits],
        "kernels.heis3.invariant": sum(1 for k in kernel_enumerate() if heis_invariant(k)),
    }


def group_counts() -> Dict[str, object]:
    return {
        "groups.heis3.automorphisms": len(automorphisms("heis3")),
        "groups.z3x2.automorphisms": len(automorphisms("z3x2")),
        "groups.heis3.char_stabilizer.full": len(char_stabilizer("heis3", "full")),
        "groups.heis3.char_stabilizer.complex": len(char_stabilizer("heis3", "complex")),
    }


def lattice_counts() -> Dict[str, object]:
    standard = standard_lattice()
    return {
        "lattice.K3.index": lattice_from_kernel(K3).index_over(standard),
        "lattice.K4.index": lattice_from_kernel(K4).index_over(standard),
        "lattice.K3.quotient_invariants": lattice_from_kernel(K3).quotient_invariants(standard),
    }


def normalizer_counts(group: str, name: str, flavor: str) -> Dict[str, object]:
    """Порядок нормалізатора; для Heis(3) ще образ φ та (для 𝒩_ℂ) скалярне ядро"""
    members = normalizer(group, NAMED_KERNELS[name], flavor)
    prefix = f"normalizer.{group}.{name}.{flavor}"
    result: Dict[str, object] = {prefix: len(members)}
    if group == "heis3":
        result[f"{prefix}.phi_image"] = len(phi_image(members))
        if flavor == "complex":
            result[f"{prefix}.scalar_kernel"] = len(scalar_kernel(members))
    return result


def ambient_counts() -> Dict[str, object]:
    return {f"normalizer.z3x2.ambient.{flavor}": len(ambient_normalizer_z32(flavor)) for flavor in ("complex", "real")}


# === Повний звіт ===

def _emptiness_certificates(group: str, names: Sequence[str]) -> List[EmptinessCertificate]:
    lattices = [lattice_from_kernel(NAMED_KERNELS[n]) for n in names]
    certificates = []
    for source in lattices:
        for target in lattices:
            if source != target:
                certificates.append(certificate_out(cross_lattice_empty(source, target, group)))
    return certificates


def full_report(jobs: Optional[int] = None, pin: Optional[bool] = None) -> ClassificationReport:
    """
    Увесь конвеєр: два однозв'язні рядки (ℤ₇, ℤ₃) та шість обчислених (4 × ℤ₃², 2 × Heis(3)).

    Args:
        jobs: Кількість процесів для перебору
        pin: Перевіряти зафіксовані числа (за замовчуванням settings.PIN_COUNTS)

    Raises:
        VerificationError: обчислене число розходиться з зафіксованим або сертифікат не побудовано
    """
    pin = settings.PIN_COUNTS if pin is None else pin
    logger.info("=" * 60)
    logger.info(f"{settings.APP_NAME}: класифікація факторів")
    logger.info("=" * 60)
    counts: Dict[str, object] = {}
    descriptors: List[QuotientDescriptor] = []
    orbits_out: List[OrbitOut] = []
    agreement = True

    counts.update(kernel_counts())
    counts.update(group_counts())
    counts.update(lattice_counts())
    counts.update(ambient_counts())

    # Heis(3) на ℤ[ζ₃]³ не має добрих класів
    counts.update(analyse_cocycles("heis3", K1, jobs).counts())

    for group, name in TABLE_LAYOUT:
        if group == "z7":
            descriptors.append(descriptor("z7", None, None))
            counts["fixed_points.z7"] = fixed_point_count(analytic_rep("z7")(central_generator("z7")), cm_lattice_z7())
            continue
        kernel = NAMED_KERNELS[name]
        if group == "z3":
            tau = Cocycle.zero(standard_lattice(), "z3")
            descriptors.append(descriptor("z3", kernel, tau))
            counts["fixed_points.z3"] = fixed_point_count(CycMatrix.scalar(zeta(3)), standard_lattice())
            continue
        analysis = analyse_lattice(group, kernel, jobs)
        counts.update(analysis.counts())
        for flavor in ("complex", "real"):
            counts.update(normalizer_counts(group, name, flavor))
        if not analysis.orbits:
            raise VerificationError(f"{group}, {name}: немає добрих класів")
        first = analysis.orbits[0]
        representative = first[0].representative
        orbits_out.append(
            OrbitOut(
                group=group,
                kernel=name,
                class_count=len(analysis.classes),
                orbit_count=len(analysis.orbits),
                orbit_sizes=[len(o) for o in analysis.orbits],
                representative=cocycle_out(representative),
            )
        )
        if group == "z3x2":
            agreement = agreement and dual_search_agreement(representative, analysis.classes, analysis.elements)
        descriptors.append(descriptor(group, kernel, representative))

    rows = [descriptor_out(i, d) for i, d in enumerate(descriptors, start=1)]
    emptiness = _emptiness_certificates("z3x2", ["K1", "K2", "K3", "K4"]) + _emptiness_certificates("heis3", ["K3", "K4"])
    distinctions = distinction_certificates(rows, emptiness)

    counts["classify.rows"] = len(rows)
    counts["classify.singularities"] = [r.singularity_count for r in rows]
    counts["classify.fundamental_groups"] = [r.fundamental_group for r in rows]
    counts["classify.emptiness"] = sum(1 for c in emptiness if c.verdict == "empty")
    counts["classify.distinctions"] = len(distinctions)

    if not agreement:
        raise VerificationError("Два простори зсувів d дали різні вердикти")
    report = ClassificationReport(
        version=__version__,
        rows=rows,
        orbits=orbits_out,
        emptiness=emptiness,
        distinctions=distinctions,
        dual_search_agreement=agreement,
        counts=dict(sorted(counts.items())),
    )
    if pin:
        pinning.check(report.counts)
    logger.info(f"✅ Класифікацію завершено: {len(rows)} рядків")
    return report
