"""
Утилиты для разбора и форматирования точных чисел
"""
import re
from fractions import Fraction
from typing import Any, Dict, List, Sequence

_RATIONAL_RE = re.compile(r'^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$')


def is_rational_string(text: str) -> bool:
    if not text or not isinstance(text, str):
        return False
    return bool(_RATIONAL_RE.match(text))


def parse_rational(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("Booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not is_rational_string(value):
            raise ValueError(f"Not an exact rational: {value!r}")
        return Fraction(value.replace(' ', ''))
    if isinstance(value, float):
        raise TypeError(f"Floating-point value {value!r} is not exact; quote it as a rational string")
    raise TypeError(f"Cannot interpret {value!r} as a rational")


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_matrix(text: str) -> List[List[Fraction]]:
    """'a,b;c,d' -> [[a, b], [c, d]]"""
    rows = [row for row in text.split(';') if row.strip()]
    if not rows:
        raise ValueError("Empty matrix")
    matrix = [[parse_rational(entry) for entry in row.split(',')] for row in rows]
    width = len(matrix[0])
    if any(len(row) != width for row in matrix):
        raise ValueError(f"Ragged matrix: {text!r}")
    return matrix


def format_vector(values: Sequence[Any]) -> List[Any]:
    out = []
    for v in values:
        if hasattr(v, 'to_strings'):
            strings = v.to_strings()
            out.append(strings[0] if len(strings) == 1 else strings)
        elif isinstance(v, Fraction):
            out.append(format_rational(v))
        else:
            out.append(str(v))
    return out


def stage_summary(stages: Sequence[Dict[str, Any]]) -> Dict[str, int]:
    summary = {'total_stages': len(stages)}
    for stage in stages:
        summary[stage['status']] = summary.get(stage['status'], 0) + 1
    return summary
