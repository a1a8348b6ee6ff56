"""Closed-form error probabilities of the repeated-measurement decision rule."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import ValidationError


@dataclass(frozen=True)
class ErrorCurvePoint:
    k: int
    n: int
    p: float
    p_err_classical: float
    p_err_quantum: float


def g_exact(k: int, n: int) -> Fraction:
    """Probability that k distinct queries of a balanced n-bit function agree.

    prod_{i=1}^{k-1} (2^(n-1) - i) / (2^n - i); zero once k exceeds 2^(n-1).
    """
    if k < 2:
        raise ValidationError(f"k must be >= 2, got {k}")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    half = 1 << (n - 1)
    if k > half:
        return Fraction(0)
    num = 1
    den = 1
    for i in range(1, k):
        num *= half - i
        den *= 2 * half - i
    return Fraction(num, den)


def g(k: int, n: int) -> float:
    return float(g_exact(k, n))


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"prior p must lie in [0, 1], got {p}")


def p_err_classical(k: int, n: int, p: float = 0.5) -> float:
    _check_p(p)
    return float(g_exact(k, n) * Fraction(p))


def p_err_quantum(k: int, p: float = 0.5) -> float:
    if k < 2:
        raise ValidationError(f"k must be >= 2, got {k}")
    _check_p(p)
    return float(Fraction(p) / (1 << (k - 1)))


def perr_curve(k_max: int, n_list: Iterable[int], p: float = 0.5) -> list[ErrorCurvePoint]:
    """Rows for k = 2..k_max and every n, ordered by n then k."""
    if k_max < 2:
        raise ValidationError(f"k_max must be >= 2, got {k_max}")
    _check_p(p)
    rows = []
    for n in n_list:
        for k in range(2, k_max + 1):
            rows.append(ErrorCurvePoint(k, n, p, p_err_classical(k, n, p), p_err_quantum(k, p)))
    return rows
