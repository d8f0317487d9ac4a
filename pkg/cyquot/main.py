"""
Командний рядок cyquot

Підкоманди: kernels, cocycles, cohomology, normalizer, classify, report.
Коди виходу: 0 - успіх, 1 - помилка використання чи конфігурації, 2 - розбіжність із зафіксованими числами.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import ValidationError

from cyquot import __version__
from cyquot.algebra.groups import GROUP_IDS
from cyquot.algebra.torus import NAMED_KERNELS, all_subgroups, kernel_enumerate, kernel_name
from cyquot.config import Settings
from cyquot.schemas import (
    ClassificationReport,
    CocyclesReport,
    CohClassOut,
    KernelOrbitOut,
    KernelOut,
    KernelsReport,
    NormalizerElementOut,
    NormalizerReport,
)
from cyquot.services.classify_service import (
    analyse_cocycles,
    cocycle_out,
    full_report,
    kernel_counts,
    lattice_out,
    normalizer_counts,
)
from cyquot.services.normalizer_service import (
    ambient_normalizer_z32,
    heis_invariant,
    heisenberg_generators,
    kernel_orbits,
    kernel_stabilizer_orders,
    make_element,
    normalizer,
    phi_image,
    scalar_kernel,
    z32_generators,
)
from cyquot.utils import pinning
from cyquot.utils.pinning import VerificationError
from cyquot.utils.render import FORMATS, render

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2


class CliParser(argparse.ArgumentParser):
    """ArgumentParser, що кидає ValueError замість завершення процесу"""

    def error(self, message):
        raise ValueError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(prog="cyquot", description="Класифікація факторів абелевих 3-вимірних многовидів")
    parser.add_argument("--version", action="version", version=f"cyquot {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--format", choices=FORMATS, help="Формат виводу (за замовчуванням CYQUOT_OUTPUT_FORMAT)")
        p.add_argument("--out", help="Файл для звіту (за замовчуванням stdout)")
        p.add_argument("--jobs", type=int, help="Кількість процесів (за замовчуванням CYQUOT_JOBS)")
        p.add_argument("--no-pin", action="store_true", help="Не перевіряти зафіксовані числа")

    p = sub.add_parser("kernels", help="Допустимі ядра K ⊆ 𝔽₃³")
    p.add_argument("--group", choices=("z3x2", "heis3"), help="Лише ядра, придатні для групи")
    p.add_argument("--orbits", action="store_true", help="Орбіти ядер під ℤ₃²-нормалізатором")
    common(p)

    for name, help_text in (("cocycles", "Добрі набори, коцикли та класи"), ("cohomology", "Класи когомологій з усіма членами")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--group", choices=("z3x2", "heis3"), required=True)
        p.add_argument("--kernel", choices=sorted(NAMED_KERNELS), required=True)
        common(p)

    p = sub.add_parser("normalizer", help="Нормалізатор 𝒩_ℂ або 𝒩_ℝ")
    p.add_argument("--group", choices=("z3x2", "heis3"), required=True)
    p.add_argument("--kernel", choices=sorted(NAMED_KERNELS), required=True)
    p.add_argument("--flavor", choices=("complex", "real"), default="complex")
    common(p)

    p = sub.add_parser("classify", help="Повна класифікація (вісім рядків)")
    p.add_argument("--group", choices=GROUP_IDS, help="Показати лише рядки групи")
    common(p)

    p = sub.add_parser("report", help="Рендер збереженого JSON-звіту або його JSON-схема")
    p.add_argument("--in", dest="input", help="Шлях до JSON ClassificationReport")
    p.add_argument("--schema", action="store_true", help="Надрукувати JSON-схему ClassificationReport")
    common(p)
    return parser


# === Команди ===

def cmd_kernels(args, config: Settings) -> KernelsReport:
    """15 допустимих ядер, 4 орбіти ℤ₃², 3 ядра, інваріантні для Heis(3)"""
    kernels = kernel_enumerate()
    if args.group == "heis3":
        kernels = [k for k in kernels if heis_invariant(k)]
    entries = [
        KernelOut(
            name=kernel_name(k),
            label=k.label(),
            order=len(k),
            elements=k.to_json(),
            heis_invariant=heis_invariant(k),
        )
        for k in kernels
    ]
    orbits = []
    if args.orbits:
        for orbit in kernel_orbits(args.group or "z3x2"):
            named = [kernel_name(k) for k in orbit if kernel_name(k)]
            orbits.append(
                KernelOrbitOut(
                    representative=named[0] if named else orbit[0].label(),
                    size=len(orbit),
                    members=[k.label() for k in orbit],
                )
            )
    return KernelsReport(total_subgroups=len(all_subgroups()), kernels=entries, orbits=orbits, counts=kernel_counts())


def _check_pair(group: str, kernel_arg: str):
    kernel = NAMED_KERNELS[kernel_arg]
    if group == "heis3" and not heis_invariant(kernel):
        raise ValueError(f"Ядро {kernel_arg} не інваріантне щодо циклічного зсуву: не підходить для heis3")
    return kernel


def cmd_cocycles(args, config: Settings, with_members: bool = False) -> CocyclesReport:
    """Кількість добрих наборів, різних коциклів та класів з представниками"""
    kernel = _check_pair(args.group, args.kernel)
    analysis = analyse_cocycles(args.group, kernel, config.JOBS)
    classes = [
        CohClassOut(
            representative=cocycle_out(cls.representative),
            size=cls.size,
            members=[cocycle_out(m) for m in cls.members] if with_members else None,
        )
        for cls in analysis.classes
    ]
    return CocyclesReport(
        group=args.group,
        kernel=analysis.name,
        lattice=lattice_out(kernel),
        tuple_count=analysis.tuple_count,
        distinct_count=len(analysis.cocycles),
        class_count=len(analysis.classes),
        coboundary_count=analysis.coboundary_count,
        class_sizes=[cls.size for cls in analysis.classes],
        classes=classes,
        counts=analysis.counts(),
    )


def cmd_normalizer(args, config: Settings) -> NormalizerReport:
    kernel = _check_pair(args.group, args.kernel)
    name = kernel_name(kernel)
    members = normalizer(args.group, kernel, args.flavor)
    if args.group == "heis3":
        maps = heisenberg_generators(args.flavor)
    else:
        maps = z32_generators(args.flavor)
    generators = [NormalizerElementOut(**make_element(m, args.group).to_json()) for m in maps]
    counts: Dict[str, object] = normalizer_counts(args.group, name, args.flavor)
    ambient_order = None
    stabilizers: Dict[str, int] = {}
    if args.group == "z3x2":
        ambient_order = len(ambient_normalizer_z32(args.flavor))
        stabilizers = kernel_stabilizer_orders(args.flavor)
        counts[f"normalizer.z3x2.ambient.{args.flavor}"] = ambient_order
        counts.update({f"normalizer.z3x2.{k}.{args.flavor}": v for k, v in stabilizers.items()})
    return NormalizerReport(
        group=args.group,
        kernel=name,
        flavor=args.flavor,
        order=len(members),
        phi_image_order=len(phi_image(members)),
        scalar_kernel_order=len(scalar_kernel(members)),
        ambient_order=ambient_order,
        stabilizer_orders=stabilizers,
        generators=generators,
        counts=counts,
    )


def cmd_classify(args, config: Settings) -> ClassificationReport:
    """Повний конвеєр; перевірка зафіксованих чисел виконується після рендеру"""
    report = full_report(jobs=config.JOBS, pin=False)
    if args.group:
        report = report.model_copy(update={"rows": [r for r in report.rows if r.group == args.group]})
    return report


def cmd_report(args, config: Settings) -> Optional[ClassificationReport]:
    if args.schema:
        return None
    if not args.input:
        raise ValueError("Для report потрібно вказати --in PATH або --schema")
    text = Path(args.input).read_text(encoding="utf-8")
    return ClassificationReport.model_validate_json(text)


# === Точка входу ===

def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"✓ Звіт записано в {out}")
    else:
        sys.stdout.write(text)


def _resolve_config(args) -> Settings:
    config = Settings()
    updates = {}
    if args.jobs is not None:
        if args.jobs < 1:
            raise ValueError(f"--jobs має бути ≥ 1, отримано {args.jobs}")
        updates["JOBS"] = args.jobs
    if args.format:
        updates["OUTPUT_FORMAT"] = args.format
    if args.no_pin:
        updates["PIN_COUNTS"] = False
    return config.model_copy(update=updates)


def run(args) -> int:
    config = _resolve_config(args)
    fmt = config.OUTPUT_FORMAT
    if args.command == "report" and args.schema:
        _emit(json.dumps(ClassificationReport.model_json_schema(), ensure_ascii=False, indent=2) + "\n", args.out)
        return EXIT_OK

    commands = {
        "kernels": cmd_kernels,
        "cocycles": cmd_cocycles,
        "cohomology": lambda a, c: cmd_cocycles(a, c, with_members=True),
        "normalizer": cmd_normalizer,
        "classify": cmd_classify,
        "report": cmd_report,
    }
    report = commands[args.command](args, config)
    _emit(render(report, fmt), args.out)

    if config.PIN_COUNTS and args.command != "report":
        mismatches = pinning.diff(report.counts, config.EXPECTED_COUNTS_PATH)
        if mismatches:
            sys.stderr.write("✗ Розбіжності із зафіксованими числами:\n")
            sys.stderr.write(pinning.format_mismatches(mismatches) + "\n")
            return EXIT_MISMATCH
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """
    Точка входу CLI

    Args:
        argv: Аргументи (за замовчуванням sys.argv[1:])

    Returns:
        Код виходу
    """
    try:
        level = Settings().LOG_LEVEL
    except ValidationError as e:
        sys.stderr.write(f"❌ Некоректна конфігурація: {e}\n")
        return EXIT_USAGE
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    try:
        args = build_parser().parse_args(argv)
        return run(args)
    except ValidationError as e:
        sys.stderr.write(f"❌ Некоректні дані: {e}\n")
        return EXIT_USAGE
    except VerificationError as e:
        logger.error(f"✗ {e}")
        sys.stderr.write(f"✗ {e}\n")
        if e.mismatches:
            sys.stderr.write(pinning.format_mismatches(e.mismatches) + "\n")
        return EXIT_MISMATCH
    except (ValueError, OSError) as e:
        sys.stderr.write(f"❌ {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
