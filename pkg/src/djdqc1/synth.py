"""Diagonal-unitary synthesis into RotZ and CNOT gates.

A diagonal unitary diag(exp(i*phi_j)) is expanded over parity characters

    phi_j = global_phase - sum_S angle(S)/2 * chi_S(j),

with chi_S(j) = (-1)^(parity of the bits of j on S).  Each term is a z
rotation by angle(S) on the highest-index qubit of S, conjugated by a CNOT
parity chain from the other members of S.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ValidationError
from .oracle import OracleFunction, controlled_oracle_unitary
from .qsim import CNOT, Circuit, ControlledDiagonal, Diagonal, RotZ

ZERO_ANGLE = 1e-13


@dataclass(frozen=True)
class DiagonalSpec:
    m: int
    phases: tuple

    def __post_init__(self):
        ph = np.asarray(self.phases, dtype=float).reshape(-1)
        if self.m < 1 or ph.size != 1 << self.m:
            raise ValidationError(f"expected {1 << max(self.m, 0)} phases for {self.m} qubits, got {ph.size}")
        if not np.all(np.isfinite(ph)):
            raise ValidationError("phases must be finite")
        object.__setattr__(self, "phases", tuple(float(p) for p in ph))

    @classmethod
    def from_gate(cls, gate: Diagonal | ControlledDiagonal) -> "DiagonalSpec":
        if isinstance(gate, ControlledDiagonal):
            return cls(gate.m, tuple(gate.full_phases(gate.m)))
        return cls(gate.m, gate.phases)

    def unitary(self) -> np.ndarray:
        return np.diag(np.exp(1j * np.asarray(self.phases)))


@dataclass(frozen=True)
class SynthesisResult:
    circuit: Circuit
    global_phase: float
    angle_table: dict

    def cnot_count(self) -> int:
        return self.circuit.count(CNOT)

    def rotz_count(self) -> int:
        return self.circuit.count(RotZ)


def subset_mask(subset: Iterable[int], m: int) -> int:
    mask = 0
    for q in subset:
        mask |= 1 << (m - 1 - q)
    return mask


def mask_subset(mask: int, m: int) -> frozenset:
    return frozenset(q for q in range(m) if (mask >> (m - 1 - q)) & 1)


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform: out[S] = sum_j values[j] chi_S(j)."""
    a = np.array(values, dtype=float)
    h = 1
    while h < a.size:
        a = a.reshape(-1, 2, h)
        a = np.stack([a[:, 0] + a[:, 1], a[:, 0] - a[:, 1]], axis=1)
        h *= 2
    return a.reshape(-1)


def walsh_coefficients(spec: DiagonalSpec) -> tuple[float, dict]:
    """Global phase and rotation angle for every nonempty qubit subset."""
    d = 1 << spec.m
    w = fwht(np.asarray(spec.phases))
    table = {mask_subset(mask, spec.m): float(-2.0 * w[mask] / d) for mask in range(1, d)}
    return float(w[0] / d), table


def phases_from_walsh(m: int, global_phase: float, angle_table: dict) -> np.ndarray:
    d = 1 << m
    coeffs = np.zeros(d)
    coeffs[0] = global_phase
    for subset, angle in angle_table.items():
        coeffs[subset_mask(subset, m)] = -0.5 * angle
    # the transform is its own inverse up to a factor d
    return fwht(coeffs)


def _chain_transition(current: frozenset, nxt: frozenset, target: int) -> list:
    return [CNOT(c, target) for c in sorted(current ^ nxt)]


def _gray_sequence(t: int) -> list[frozenset]:
    """Reflected Gray code over qubits 0..t-1; bit b of the code is qubit b."""
    seq = []
    for i in range(1 << t):
        g = i ^ (i >> 1)
        seq.append(frozenset(b for b in range(t) if (g >> b) & 1))
    return seq


def _layout(m: int, angle_table: dict, order: dict, elide: bool) -> list:
    """Emit rotations target by target; `order[t]` lists control sets T for S = T + {t}."""
    gates = []
    for t in sorted(order):
        chain = frozenset()
        for controls in order[t]:
            angle = angle_table.get(controls | {t}, 0.0)
            if elide and abs(angle) <= ZERO_ANGLE:
                continue
            gates.extend(_chain_transition(chain, controls, t))
            gates.append(RotZ(t, angle))
            chain = controls
        gates.extend(_chain_transition(chain, frozenset(), t))
    return gates


def synthesize_diagonal(spec: DiagonalSpec, elide: bool = True) -> SynthesisResult:
    global_phase, table = walsh_coefficients(spec)
    order = {t: _gray_sequence(t) for t in range(spec.m)}
    gates = _layout(spec.m, table, order, elide)
    return SynthesisResult(Circuit(spec.m, tuple(gates), global_phase), global_phase, table)


def verify_equivalence(circuit: Circuit, global_phase: float, spec: DiagonalSpec) -> float:
    """Max entrywise |exp(i*global_phase) * U_circuit - diag(exp(i*phases))|."""
    if circuit.m != spec.m:
        raise ValidationError(f"circuit has {circuit.m} qubits, spec has {spec.m}")
    u = circuit.unitary(include_phase=False) * np.exp(1j * global_phase)
    return float(np.max(np.abs(u - spec.unitary())))


def synthesize_controlled_oracle(f: OracleFunction, elide: bool = True) -> SynthesisResult:
    return synthesize_diagonal(DiagonalSpec.from_gate(controlled_oracle_unitary(f)), elide=elide)


# -- three-register-qubit closed forms ---------------------------------------

# sign pattern over f_0..f_7 and overall sign of each closed-form angle
_ANGLE_PATTERNS = [
    (-1, "+-+-+-+-"),
    (+1, "+-+-+-+-"),
    (+1, "+-+--+-+"),
    (-1, "+-+--+-+"),
    (-1, "+--+-++-"),
    (-1, "+--++--+"),
    (+1, "+--++--+"),
    (+1, "+--+-++-"),
    (-1, "++--++--"),
    (+1, "++--++--"),
    (+1, "++----++"),
    (-1, "++----++"),
    (-1, "++++----"),
    (+1, "++++----"),
    (+1, "++++++++"),
]

# qubit subset rotated by each closed-form angle (control = 0, register = 1, 2, 3)
COLLINS_SUBSETS = [
    frozenset({3}),
    frozenset({0, 3}),
    frozenset({0, 1, 3}),
    frozenset({1, 3}),
    frozenset({1, 2, 3}),
    frozenset({2, 3}),
    frozenset({0, 2, 3}),
    frozenset({0, 1, 2, 3}),
    frozenset({2}),
    frozenset({0, 2}),
    frozenset({0, 1, 2}),
    frozenset({1, 2}),
    frozenset({1}),
    frozenset({0, 1}),
    frozenset({0}),
]


def collins_dqc1_angles(f: OracleFunction) -> tuple:
    """The fifteen closed-form rotation angles for a 3-bit oracle."""
    if f.n != 3:
        raise ValidationError(f"closed-form angles need n = 3, got n = {f.n}")
    out = []
    for sign, pattern in _ANGLE_PATTERNS:
        s = sum((1 if c == "+" else -1) * fj for c, fj in zip(pattern, f.truth_table))
        out.append(sign * np.pi * s / 8)
    return tuple(out)


def collins_circuit(f: OracleFunction, elide: bool = False) -> tuple[Circuit, float]:
    """Controlled-oracle circuit laid out in closed-form angle order; returns (circuit, global_phase)."""
    angles = collins_dqc1_angles(f)
    table = dict(zip(COLLINS_SUBSETS, angles))
    order: dict[int, list] = {}
    for subset in COLLINS_SUBSETS:
        t = max(subset)
        order.setdefault(t, []).append(subset - {t})
    # the angle list starts with target 3; keep that order
    gates = []
    for t in (3, 2, 1, 0):
        gates.extend(_layout(4, table, {t: order[t]}, elide))
    phase = angles[14] / 2
    return Circuit(4, tuple(gates), phase), phase


# -- netlist text format ------------------------------------------------------


def emit_netlist(circuit: Circuit, global_phase: float) -> str:
    lines = [f"qubits {circuit.m}", f"gphase {global_phase:.17g}"]
    for g in circuit.gates:
        if isinstance(g, RotZ):
            lines.append(f"RZ {g.q} {g.theta:.17g}")
        elif isinstance(g, CNOT):
            lines.append(f"CNOT {g.control} {g.target}")
        else:
            raise ValidationError(f"netlist supports RZ and CNOT only, got {g!r}")
    return "\n".join(lines) + "\n"


def parse_netlist(text: str) -> tuple[Circuit, float]:
    m = None
    phase = 0.0
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        try:
            head = parts[0]
            if head == "qubits" and len(parts) == 2:
                m = int(parts[1])
            elif head == "gphase" and len(parts) == 2:
                phase = float(parts[1])
            elif head == "RZ" and len(parts) == 3:
                gates.append(RotZ(int(parts[1]), float(parts[2])))
            elif head == "CNOT" and len(parts) == 3:
                gates.append(CNOT(int(parts[1]), int(parts[2])))
            else:
                raise ValueError(raw)
        except ValueError as exc:
            raise ValidationError(f"netlist line {lineno}: cannot parse {raw!r}") from exc
    if m is None:
        raise ValidationError("netlist lacks a 'qubits' header")
    return Circuit(m, tuple(gates), phase), phase
