"""
Зафіксовані очікувані числа та їх перевірка

Єдине джерело істини для CLI і тестів: cyquot/data/expected_counts.json
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Mapping, Optional

from cyquot.config import settings
from cyquot.schemas import CountMismatch, CountValue, ExpectedCount, ExpectedCounts

logger = logging.getLogger(__name__)

DEFAULT_PATH = Path(__file__).resolve().parent.parent / "data" / "expected_counts.json"

# Кеш завантаженого файлу (шлях → claims)
_expected_cache: Dict[str, Dict[str, ExpectedCount]] = {}


class VerificationError(Exception):
    """Обчислене значення розходиться з очікуваним або сертифікат не побудовано"""

    def __init__(self, message: str, mismatches: Optional[List[CountMismatch]] = None):
        super().__init__(message)
        self.mismatches = mismatches or []


def load_expected(path: Optional[str] = None) -> Dict[str, ExpectedCount]:
    """
    Завантажує зафіксовані числа

    Args:
        path: Шлях до JSON (за замовчуванням settings.EXPECTED_COUNTS_PATH або вбудований файл)

    Returns:
        Словник claim-id → ExpectedCount
    """
    resolved = str(path or settings.EXPECTED_COUNTS_PATH or DEFAULT_PATH)
    if resolved not in _expected_cache:
        with open(resolved, "r", encoding="utf-8") as f:
            data = ExpectedCounts.model_validate(json.load(f))
        _expected_cache[resolved] = data.claims
        logger.debug(f"✓ Завантажено {len(data.claims)} зафіксованих чисел з {resolved}")
    return _expected_cache[resolved]


def expected(claim: str) -> CountValue:
    return load_expected()[claim].expected


def diff(computed: Mapping[str, CountValue], path: Optional[str] = None) -> List[CountMismatch]:
    """Розбіжності для тих claim-id, що є і в обчисленому, і в зафіксованому"""
    claims = load_expected(path)
    mismatches = []
    for claim in sorted(computed):
        if claim not in claims:
            continue
        pinned = claims[claim]
        if pinned.expected != computed[claim]:
            mismatches.append(
                CountMismatch(claim=claim, expected=pinned.expected, computed=computed[claim], anchor=pinned.anchor)
            )
    return mismatches


def check(computed: Mapping[str, CountValue], path: Optional[str] = None) -> None:
    """
    Перевіряє обчислені числа

    Raises:
        VerificationError: є хоча б одна розбіжність
    """
    mismatches = diff(computed, path)
    if mismatches:
        for m in mismatches:
            logger.error(f"✗ {m.claim}: очікувалось {m.expected}, обчислено {m.computed}")
        raise VerificationError(f"Розбіжностей із зафіксованими числами: {len(mismatches)}", mismatches)
    logger.info(f"✓ Усі зафіксовані числа збігаються ({len(computed)} перевірено)")


def format_mismatches(mismatches: List[CountMismatch]) -> str:
    lines = ["claim\texpected\tcomputed\tanchor"]
    for m in mismatches:
        lines.append(f"{m.claim}\t{m.expected}\t{m.computed}\t{m.anchor}")
    return "\n".join(lines)
