"""Boolean oracles f: {0,1}^n -> {0,1} and their phase unitaries."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .qsim import ControlledDiagonal, Diagonal


class FunctionClass(enum.Enum):
    CONSTANT0 = "constant0"
    CONSTANT1 = "constant1"
    BALANCED = "balanced"
    OTHER = "other"

    @property
    def is_constant(self) -> bool:
        return self in (FunctionClass.CONSTANT0, FunctionClass.CONSTANT1)


@dataclass(frozen=True)
class OracleFunction:
    n: int
    truth_table: tuple
    kind: FunctionClass

    def __str__(self):
        return "".join(str(b) for b in self.truth_table)

    def require_promise(self) -> None:
        """Protocols only accept constant or balanced functions."""
        if self.kind is FunctionClass.OTHER:
            raise ValidationError(f"function {self} is neither constant nor balanced")


def classify(truth_table: Sequence[int]) -> OracleFunction:
    bits = tuple(int(b) for b in truth_table)
    size = len(bits)
    n = size.bit_length() - 1
    if size == 0 or (1 << n) != size:
        raise ValidationError(f"truth table length {size} is not a power of two")
    if any(b not in (0, 1) for b in bits):
        raise ValidationError("truth table entries must be 0 or 1")
    ones = sum(bits)
    if ones == 0:
        kind = FunctionClass.CONSTANT0
    elif ones == size:
        kind = FunctionClass.CONSTANT1
    elif 2 * ones == size:
        kind = FunctionClass.BALANCED
    else:
        kind = FunctionClass.OTHER
    return OracleFunction(n, bits, kind)


def random_balanced(n: int, seed: int | None = None) -> OracleFunction:
    """Uniformly random balanced function, reproducible from `seed`."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    rng = np.random.default_rng(seed)
    size = 1 << n
    table = np.zeros(size, dtype=int)
    table[rng.choice(size, size // 2, replace=False)] = 1
    return classify(table)


def all_functions(n: int, promise_only: bool = True) -> list[OracleFunction]:
    """Every truth table on n bits, optionally restricted to constant/balanced."""
    size = 1 << n
    out = []
    for code in range(1 << size):
        table = [(code >> (size - 1 - j)) & 1 for j in range(size)]
        f = classify(table)
        if not promise_only or f.kind is not FunctionClass.OTHER:
            out.append(f)
    return out


def oracle_phases(f: OracleFunction) -> np.ndarray:
    return np.pi * np.asarray(f.truth_table, dtype=float)


def oracle_unitary(f: OracleFunction) -> Diagonal:
    """sum_j (-1)^f(j) |j><j| as a diagonal gate with phases pi*f(j)."""
    return Diagonal(tuple(oracle_phases(f)))


def controlled_oracle_unitary(f: OracleFunction, control: int = 0) -> ControlledDiagonal:
    return ControlledDiagonal(control, tuple(oracle_phases(f)))


def normalized_trace(f: OracleFunction) -> float:
    """2^-n Tr U = 2^-n sum_j (-1)^f(j)."""
    ones = sum(f.truth_table)
    size = len(f.truth_table)
    return (size - 2 * ones) / size


def parse_truth_table(text: str) -> OracleFunction:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 1:
        raise ValidationError("oracle file must contain exactly one nonempty line")
    line = lines[0]
    if any(c not in "01" for c in line):
        raise ValidationError("oracle line may only contain '0' and '1'")
    return classify([int(c) for c in line])


def read_oracle_file(path: str | Path) -> OracleFunction:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read oracle file {path}: {exc}") from exc
    return parse_truth_table(text)


def format_truth_table(f: OracleFunction) -> str:
    return str(f) + "\n"
