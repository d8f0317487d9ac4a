import random

import pytest

from cyquot.algebra.torus import K1, NAMED_KERNELS, SCALE, TorusPoint
from cyquot.schemas import ClassificationReport, EmptinessCertificate, QuotientDescriptorOut
from cyquot.services.classify_service import (
    TABLE_LAYOUT,
    descriptor,
    distinction_certificates,
    dual_search_agreement,
    equivalent,
    orbit_partition,
    singular_orbit_count,
)
from cyquot.services.cocycle_service import Cocycle, CohClass, general_coboundary
from cyquot.services.normalizer_service import SemilinearMap, scalar_kernel
from cyquot.utils import pinning
from cyquot.utils.pinning import VerificationError
from cyquot.utils.render import render

SINGULARITIES = [7, 27, 9, 9, 9, 9, 3, 3]
FUNDAMENTAL_GROUPS = ["{1}", "{1}", "Z3", "Z3", "Z3", "Z3", "Z3^2", "Z3^2"]


# === Орбіти ===

@pytest.mark.parametrize("name", ["K1", "K2", "K3", "K4"])
def test_z32_single_orbit(name, z32_analysis):
    analysis = z32_analysis[name]
    assert len(analysis.orbits) == 1
    assert sum(len(o) for o in analysis.orbits) == len(analysis.classes)


@pytest.mark.parametrize("name", ["K3", "K4"])
def test_heis_single_orbit(name, heis_analysis):
    analysis = heis_analysis[name]
    assert len(analysis.classes) == 6
    assert len(analysis.orbits) == 1


def test_equivalent_is_reflexive(heis_analysis):
    analysis = heis_analysis["K4"]
    for cls in analysis.classes:
        tau = cls.representative
        assert equivalent(tau, tau, analysis.elements)


def test_equivalent_matches_orbits(z32_analysis):
    analysis = z32_analysis["K3"]
    first = analysis.classes[0].representative
    assert all(equivalent(first, cls.representative, analysis.elements) for cls in analysis.classes)


def test_equivalent_needs_normalizer(z32_analysis):
    # лише одиниця: різні класи не зливаються
    analysis = z32_analysis["K2"]
    identity = [e for e in analysis.elements if e.map.key == SemilinearMap.identity().key]
    a, b = analysis.classes[0].representative, analysis.classes[1].representative
    assert not equivalent(a, b, identity)


def test_orbit_partition_rejects_bad_classes(z32_analysis):
    analysis = z32_analysis["K4"]
    with pytest.raises(VerificationError):
        orbit_partition(analysis.classes[:1], analysis.elements)


def _orbit_member_keys(orbits):
    return sorted(sorted(sorted(m.key for m in cls.members) for cls in orbit) for orbit in orbits)


@pytest.mark.parametrize("subgroup", ["full", "scalar"])
def test_orbit_partition_independent_of_order_and_representative(subgroup, heis_analysis):
    analysis = heis_analysis["K4"]
    elements = analysis.elements if subgroup == "full" else scalar_kernel(analysis.elements)
    expected = _orbit_member_keys(orbit_partition(analysis.classes, elements))
    rng = random.Random(11)
    for _ in range(3):
        classes = [CohClass(cls.members[1:] + cls.members[:1]) for cls in analysis.classes]
        rng.shuffle(classes)
        shuffled = list(elements)
        rng.shuffle(shuffled)
        assert _orbit_member_keys(orbit_partition(classes, shuffled)) == expected


@pytest.mark.parametrize("name", ["K1", "K2", "K3", "K4"])
def test_dual_search_agreement(name, z32_analysis):
    analysis = z32_analysis[name]
    representative = analysis.classes[0].representative
    assert dual_search_agreement(representative, analysis.classes, analysis.elements)


def test_full_torsion_search_matches_shifted_cocycle(z32_analysis):
    analysis = z32_analysis["K2"]
    tau = analysis.classes[0].representative
    d = TorusPoint.from_scaled(tau.lattice, (1, 0, 0, 0, 0, 0))
    shifted = tau + general_coboundary(d, "z3x2")
    assert not shifted.is_standard()
    assert equivalent(tau, shifted, analysis.elements, torsion=SCALE)
    assert not equivalent(tau, shifted, analysis.elements)


# === Дескриптори ===

def test_descriptor_z7():
    d = descriptor("z7", None, None)
    assert d.singularity_count == 7
    assert d.singularity_type == (7, 1, 2, 4)
    assert d.fundamental_group == "{1}"
    assert not d.uniformized_by_z2
    assert d.singularities == "7 × 1/7(1,2,4)"


def test_descriptor_z3(standard):
    d = descriptor("z3", K1, Cocycle.zero(standard, "z3"))
    assert d.singularity_count == 27
    assert d.singular_points_by_orbits == 27
    assert d.singularity_type == (3, 1, 1, 1)
    assert d.fundamental_group == "{1}"


@pytest.mark.parametrize("name", ["K1", "K2", "K3", "K4"])
def test_descriptor_z32(name, z32_analysis):
    tau = z32_analysis[name].orbits[0][0].representative
    d = descriptor("z3x2", NAMED_KERNELS[name], tau)
    assert d.singularity_count == 9
    assert d.fundamental_group == "Z3"
    assert d.uniformized_by_z2
    assert d.kernel == name


@pytest.mark.parametrize("name", ["K3", "K4"])
def test_descriptor_heis(name, heis_analysis):
    tau = heis_analysis[name].classes[0].representative
    d = descriptor("heis3", NAMED_KERNELS[name], tau)
    assert d.singularity_count == 3
    assert d.singularities == "3 × 1/3(1,1,1)"
    assert d.fundamental_group == "Z3^2"


def test_singular_orbits_for_every_heis_class(heis_analysis):
    for cls in heis_analysis["K3"].classes:
        assert singular_orbit_count(cls.representative) == 3


# === Сертифікати відмінності ===

def _row(index, group, lattice, singularities="9 × 1/3(1,1,1)", pi1="Z3"):
    return QuotientDescriptorOut(
        index=index,
        group=group,
        group_label=group,
        lattice=lattice,
        action="",
        singularity_count=int(singularities.split()[0]),
        singularity_type=[3, 1, 1, 1],
        singularities=singularities,
        fundamental_group=pi1,
        uniformized_by_z2=True,
    )


def test_distinction_by_invariants():
    rows = [_row(1, "z3x2", "A"), _row(2, "heis3", "B", "3 × 1/3(1,1,1)", "Z3^2")]
    result = distinction_certificates(rows, [])
    assert [c.reason for c in result] == ["invariants", "invariants"]


def test_distinction_requires_certificate():
    rows = [_row(1, "z3x2", "A"), _row(2, "z3x2", "B")]
    with pytest.raises(VerificationError):
        distinction_certificates(rows, [])
    empty = [
        EmptinessCertificate(
            pair=list(pair), group="z3x2", method="monomial-scan",
            candidate_count=2592, witnesses_checked=2592, verdict="empty",
        )
        for pair in (("A", "B"), ("B", "A"))
    ]
    assert [c.reason for c in distinction_certificates(rows, empty)] == ["lattice", "lattice"]


# === Повний звіт ===

def test_report_rows(report):
    assert len(report.rows) == len(TABLE_LAYOUT) == 8
    assert [r.singularity_count for r in report.rows] == SINGULARITIES
    assert [r.fundamental_group for r in report.rows] == FUNDAMENTAL_GROUPS
    assert [r.group for r in report.rows] == [g for g, _ in TABLE_LAYOUT]
    assert report.rows[0].cocycle is None
    assert report.rows[6].cocycle is not None


def test_report_certificates(report):
    assert len([c for c in report.emptiness if c.verdict == "empty"]) == 14
    assert len(report.distinctions) == 56
    assert report.dual_search_agreement
    heis = [c for c in report.emptiness if c.group == "heis3"]
    assert sorted(c.covolume_ratio for c in heis) == ["1/3", "3"]


def test_report_orbits(report):
    assert [(o.group, o.kernel) for o in report.orbits] == [(g, k) for g, k in TABLE_LAYOUT if g in ("z3x2", "heis3")]
    assert all(o.orbit_count == 1 for o in report.orbits)


def test_report_counts_match_pinned(report):
    assert pinning.diff(report.counts) == []
    assert report.counts["classify.rows"] == 8
    assert report.counts["cocycles.heis3.K1.tuples"] == 0


def test_report_json_round_trip(report):
    restored = ClassificationReport.model_validate_json(render(report, "json"))
    assert restored == report


def test_report_markdown(report):
    lines = render(report, "md").strip().splitlines()
    assert len(lines) == 2 + 8
    assert lines[0].startswith("| i | G |")


def test_report_csv(report):
    lines = render(report, "csv").strip().splitlines()
    assert lines[0] == "i,G,Λ,action,singularities,π₁"
    assert len(lines) == 9


def test_render_rejects_unknown_format(report):
    with pytest.raises(ValueError):
        render(report, "xml")
