"""
Форматування звітів: JSON, CSV та Markdown-таблиці
"""

import csv
import io
import json
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel

from cyquot.algebra.cyclo import CycNum, T
from cyquot.algebra.torus import TorusPoint
from cyquot.schemas import ClassificationReport, CocyclesReport, KernelsReport, NormalizerReport

FORMATS = ("json", "csv", "md")

Table = Tuple[List[str], List[List[str]]]


# === Координати ===

def pretty_coordinate(x: CycNum) -> str:
    """Координата точки E за модулем ℤ[ζ₃]: 0, t, −t, раціональне число або a + b·ζ₃"""
    r = x.frac()
    if r.is_zero():
        return "0"
    if r == T.frac():
        return "t"
    if r == (-T).frac():
        return "−t"
    a, b = r.coeffs
    if r.is_rational():
        return str(a)
    if not a:
        return f"{b}ζ₃"
    return f"{a} + {b}ζ₃"


def pretty_point(point: TorusPoint) -> str:
    return "(" + ", ".join(pretty_coordinate(x) for x in point.to_vector()) + ")"


def describe_action(group: str, tau=None) -> str:
    """Коротке текстове представлення дії для колонки action"""
    if group == "z7":
        return "x: z ↦ diag(ζ₇, ζ₇², ζ₇⁴)·z"
    if group == "z3" or tau is None:
        return "k: z ↦ ζ₃·z"
    parts = []
    for name, point in tau.points().items():
        if name == "k":
            continue
        parts.append(f"τ({name}) = {pretty_point(point)}")
    return "; ".join(parts)


# === Таблиці ===

def markdown_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
    for row in rows:
        lines.append("| " + " | ".join(str(c) for c in row) + " |")
    return "\n".join(lines) + "\n"


def csv_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buffer.getvalue()


def classification_table(report: ClassificationReport) -> Table:
    headers = ["i", "G", "Λ", "action", "singularities", "π₁"]
    rows = [
        [str(r.index), r.group_label, r.lattice, r.action, r.singularities, r.fundamental_group]
        for r in report.rows
    ]
    return headers, rows


def kernels_table(report: KernelsReport) -> Table:
    if report.orbits:
        headers = ["representative", "size", "members"]
        return headers, [[o.representative, str(o.size), " ".join(o.members)] for o in report.orbits]
    headers = ["name", "kernel", "order", "heis_invariant"]
    rows = [[k.name or "", k.label, str(k.order), "yes" if k.heis_invariant else "no"] for k in report.kernels]
    return headers, rows


def cocycles_table(report: CocyclesReport) -> Table:
    headers = ["class", "size", "representative"]
    rows = []
    for i, cls in enumerate(report.classes, start=1):
        values = "; ".join(f"{name}: ({', '.join(v)})" for name, v in cls.representative.values.items())
        rows.append([str(i), str(cls.size), values])
    return headers, rows


def normalizer_table(report: NormalizerReport) -> Table:
    headers = ["quantity", "value"]
    rows = [
        ["order", str(report.order)],
        ["phi_image_order", str(report.phi_image_order)],
        ["scalar_kernel_order", str(report.scalar_kernel_order)],
    ]
    if report.ambient_order is not None:
        rows.append(["ambient_order", str(report.ambient_order)])
    for name, order in report.stabilizer_orders.items():
        rows.append([f"stabilizer {name}", str(order)])
    return headers, rows


def _table(report: BaseModel) -> Table:
    if isinstance(report, ClassificationReport):
        return classification_table(report)
    if isinstance(report, KernelsReport):
        return kernels_table(report)
    if isinstance(report, CocyclesReport):
        return cocycles_table(report)
    if isinstance(report, NormalizerReport):
        return normalizer_table(report)
    raise TypeError(f"Немає табличного подання для {type(report).__name__}")


def to_json(report: BaseModel) -> str:
    return json.dumps(report.model_dump(mode="json"), ensure_ascii=False, indent=2) + "\n"


def render(report: BaseModel, fmt: Optional[str] = None) -> str:
    """
    Рендерить звіт у вибраному форматі

    Args:
        report: Pydantic-модель звіту
        fmt: "json", "csv" або "md"

    Returns:
        Текст звіту (детермінований для однакових даних)

    Raises:
        ValueError: Невідомий формат
    """
    if fmt not in FORMATS:
        raise ValueError(f"Невідомий формат: {fmt} (доступні: {', '.join(FORMATS)})")
    if fmt == "json":
        return to_json(report)
    headers, rows = _table(report)
    if fmt == "csv":
        return csv_table(headers, rows)
    return markdown_table(headers, rows)
