"""End-to-end experiments: DQC1 and DQCp runs, per-gate correlation traces,
the NMR effective-Hamiltonian sequence, and sampled decision procedures."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import correlations as corr
from .errors import ValidationError
from .oracle import (
    FunctionClass,
    OracleFunction,
    classify,
    controlled_oracle_unitary,
    normalized_trace,
    random_balanced,
)
from .qsim import (
    CNOT,
    PAULI_X,
    Bipartition,
    Circuit,
    DensityMatrix,
    Hadamard,
    PureState,
    State,
    apply_gate,
    as_density,
    dqc1_initial_state,
    expectation,
    partial_trace,
    product_state,
)
from .synth import synthesize_controlled_oracle

INCONCLUSIVE_TOL = 1e-9
UNIT_SNAP = 1e-12


class Verdict(enum.Enum):
    CONSTANT = "constant"
    BALANCED = "balanced"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DQC1Outcome:
    final_state: DensityMatrix
    control_state: DensityMatrix
    exp_x: float
    var_x: float
    inferred_class: Verdict


def _control_statistics(state: State) -> tuple[float, float]:
    exp_x = expectation(state, PAULI_X, [0])
    # sqrt(1 - x^2) turns 1e-16 rounding at |x| = 1 into 1e-8, so snap there
    if 1.0 - abs(exp_x) < UNIT_SNAP:
        exp_x = float(np.sign(exp_x))
    return exp_x, float(np.sqrt(max(0.0, 1.0 - exp_x * exp_x)))


def run_dqc1(f: OracleFunction, alpha: float = 1.0) -> DQC1Outcome:
    """Hadamard on the control, then the controlled oracle, from rho_I.

    The verdict is Constant for |<X>| = alpha > 0 and Balanced for <X> = 0;
    alpha = 0 leaves nothing to read and yields Inconclusive.
    """
    f.require_promise()
    rho = dqc1_initial_state(f.n, alpha)
    rho = apply_gate(rho, Hadamard(0))
    rho = apply_gate(rho, controlled_oracle_unitary(f))
    exp_x, var_x = _control_statistics(rho)
    if alpha < INCONCLUSIVE_TOL:
        verdict = Verdict.INCONCLUSIVE
    elif abs(exp_x) < INCONCLUSIVE_TOL:
        verdict = Verdict.BALANCED
    elif abs(abs(exp_x) - alpha) < INCONCLUSIVE_TOL:
        verdict = Verdict.CONSTANT
    else:
        verdict = Verdict.INCONCLUSIVE
    return DQC1Outcome(rho, partial_trace(rho, [0]), exp_x, var_x, verdict)


def dqc1_final_state_direct(f: OracleFunction, alpha: float) -> np.ndarray:
    """2^-(n+1) (I x I + alpha X x U), built without simulating gates."""
    d = 1 << f.n
    u = np.diag((-1.0) ** np.asarray(f.truth_table))
    return (np.eye(2 * d) + alpha * np.kron(PAULI_X, u)) / (2 * d)


def dqc1_classical_form(f: OracleFunction) -> np.ndarray:
    """sum_j 2^-n |f(j)><f(j)| x |j><j| with |f(j)> = (|0> + (-1)^f(j)|1>)/sqrt(2)."""
    d = 1 << f.n
    out = np.zeros((2 * d, 2 * d), dtype=complex)
    for j, bit in enumerate(f.truth_table):
        v = np.array([1.0, (-1.0) ** bit]) / np.sqrt(2)
        e = np.zeros(d)
        e[j] = 1.0
        out += np.kron(np.outer(v, v), np.outer(e, e)) / d
    return out


def dqcp_initial_state(n: int) -> PureState:
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    return product_state([1.0, 0.0], *([plus] * n))


def run_dqcp(f: OracleFunction) -> tuple[PureState, float, float]:
    """Control |0>, register |+>^n; returns (final state, <X>, Delta X)."""
    f.require_promise()
    psi = dqcp_initial_state(f.n)
    psi = apply_gate(psi, Hadamard(0))
    psi = apply_gate(psi, controlled_oracle_unitary(f))
    exp_x, var_x = _control_statistics(psi)
    return psi, exp_x, var_x


# ---------------------------------------------------------------------------
# per-gate correlation traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitReport:
    split: str
    negativity: float
    discord: float | None = None


@dataclass(frozen=True)
class StepReport:
    step_index: int
    gate: str
    splits: tuple
    classical: bool
    residual: float

    def quantum(self, discord_zero: float = corr.DISCORD_ZERO) -> bool:
        """Correlations present: no product eigenbasis found, or some discord above zero."""
        if not self.classical:
            return True
        return any(s.discord is not None and s.discord > discord_zero for s in self.splits)

    def max_negativity(self) -> float:
        return max((s.negativity for s in self.splits), default=0.0)


@dataclass(frozen=True)
class TraceSettings:
    discord: corr.DiscordSettings = field(default_factory=corr.DiscordSettings)
    classical: corr.ClassicalitySettings = field(default_factory=corr.ClassicalitySettings)


def _step_report(index: int, label: str, state: State, splits: Sequence[Bipartition], settings: TraceSettings) -> StepReport:
    rho = as_density(state)
    out = []
    for part in splits:
        if isinstance(state, PureState):
            neg = corr.negativity_pure(state, part)
        else:
            neg = corr.negativity(rho, part)
        disc = None
        if len(part.side_a) == 1 or len(part.side_b) == 1:
            single = part.side_a if len(part.side_a) == 1 else part.side_b
            disc = corr.discord(rho, next(iter(single)), settings.discord)
        out.append(SplitReport(part.label(), neg, disc))
    classical, residual = corr.is_classical(rho, settings.classical)
    return StepReport(index, label, tuple(out), classical, residual)


def correlation_trace(
    circuit: Circuit,
    initial: State,
    splits: Sequence[Bipartition],
    settings: TraceSettings = TraceSettings(),
) -> list[StepReport]:
    """One report after every gate of `circuit`."""
    if circuit.m != initial.m:
        raise ValidationError(f"circuit spans {circuit.m} qubits, state has {initial.m}")
    state = initial
    reports = []
    for i, gate in enumerate(circuit.gates):
        state = apply_gate(state, gate)
        reports.append(_step_report(i, str(gate), state, splits, settings))
    return reports


def dqc1_circuit(f: OracleFunction, elide: bool = True) -> Circuit:
    """Hadamard on the control followed by the synthesized controlled oracle."""
    syn = synthesize_controlled_oracle(f, elide=elide)
    return Circuit(f.n + 1, (Hadamard(0),) + syn.circuit.gates, syn.global_phase)


def default_splits(m: int) -> list[Bipartition]:
    """Control versus the rest, and the top half versus the bottom half."""
    return [Bipartition.of([0], m), Bipartition.of(range(m // 2), m)]


def correlation_window(circuit: Circuit) -> range:
    """Step indices after the second CNOT and before the last-but-one CNOT.

    The state after gate i is inside when idx(CNOT #2) <= i < idx(CNOT #N-1).
    Circuits with fewer than three CNOTs have an empty window.
    """
    cx = [i for i, g in enumerate(circuit.gates) if isinstance(g, CNOT)]
    if len(cx) < 3:
        return range(0)
    return range(cx[1], cx[-2])


def quantum_steps(reports: Sequence[StepReport], discord_zero: float = corr.DISCORD_ZERO) -> list[int]:
    return [r.step_index for r in reports if r.quantum(discord_zero)]


# ---------------------------------------------------------------------------
# NMR effective Hamiltonian
# ---------------------------------------------------------------------------

# (coefficient, qubits in the experiment's 1-based labels)
HEFF_TERMS = (
    (2, (1, 3)),
    (-4, (1, 2, 3)),
    (2, (2, 3)),
    (2, (1, 2)),
    (4, (1, 4)),
    (-3, (1,)),
    (-1, (2,)),
    (-1, (3,)),
    (-2, (4,)),
)

# Experiment label -> register index.  Label 1 is the control: expanding the
# term list gives the phase pi * x1 * (x2 x3 xor x4), so labels 2, 3, 4 are the
# top, middle and bottom register qubits of f_b = x1 x2 xor x3.
NMR_LABELS = {1: 0, 2: 1, 3: 2, 4: 3}
NMR_FUNCTION = (0, 1, 0, 1, 0, 1, 1, 0)


def heff_term_label(coeff: int, labels: Sequence[int]) -> str:
    return f"{coeff}*" + "".join(f"Z{q}" for q in labels)


def heff_term_operator(labels: Sequence[int], m: int = 4) -> np.ndarray:
    """Product of sigma_z/2 on the given experiment labels (diagonal, as a vector)."""
    diag = np.ones(1 << m)
    for lab in labels:
        q = NMR_LABELS[lab]
        z = np.array([0.5 if (j >> (m - 1 - q)) & 1 == 0 else -0.5 for j in range(1 << m)])
        diag = diag * z
    return diag


@dataclass(frozen=True)
class NMRTermReport:
    term_index: int
    label: str
    state: DensityMatrix
    discord: dict


@dataclass(frozen=True)
class NMRRun:
    terms: tuple
    commutator_max: float
    unitary_deviation: float
    global_phase: float


def heff_unitaries() -> list[np.ndarray]:
    """exp(-i (pi/4) c_k P_k) for each term; all diagonal in the computational basis."""
    return [
        np.diag(np.exp(-1j * (np.pi / 4) * c * heff_term_operator(labels)))
        for c, labels in HEFF_TERMS
    ]


def heff_commutator_max() -> float:
    ops = [np.diag(heff_term_operator(labels)).astype(complex) for _, labels in HEFF_TERMS]
    worst = 0.0
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            worst = max(worst, float(np.max(np.abs(ops[i] @ ops[j] - ops[j] @ ops[i]))))
    return worst


def phase_aligned_deviation(u: np.ndarray, target: np.ndarray) -> tuple[float, float]:
    """min over phi of max|e^{i phi} u - target|, with phi fitted from <target, u>."""
    overlap = np.vdot(u, target)
    phi = float(np.angle(overlap)) if abs(overlap) > 0 else 0.0
    return float(np.max(np.abs(np.exp(1j * phi) * u - target))), phi


def nmr_heff_sequence(settings: corr.DiscordSettings = corr.DiscordSettings()) -> NMRRun:
    m = 4
    rho = apply_gate(dqc1_initial_state(3, 1.0), Hadamard(0))
    reports = []
    total = np.eye(1 << m, dtype=complex)
    for k, ((coeff, labels), u) in enumerate(zip(HEFF_TERMS, heff_unitaries()), start=1):
        total = u @ total
        mat = u @ rho.matrix @ u.conj().T
        rho = DensityMatrix(0.5 * (mat + mat.conj().T), check=False)
        disc = {q: corr.discord(rho, q, settings) for q in range(m)}
        reports.append(NMRTermReport(k, heff_term_label(coeff, labels), rho, disc))
    target = controlled_oracle_unitary(classify(NMR_FUNCTION)).matrix(m)
    deviation, phase = phase_aligned_deviation(total, target)
    return NMRRun(tuple(reports), heff_commutator_max(), deviation, phase)


# ---------------------------------------------------------------------------
# sampled decision procedures
# ---------------------------------------------------------------------------


class Model(enum.Enum):
    QUANTUM = "quantum"
    CLASSICAL = "classical"


@dataclass(frozen=True)
class Decision:
    guess: Verdict
    measurements_used: int


def _as_class(kind) -> FunctionClass | Verdict:
    if isinstance(kind, (FunctionClass, Verdict)):
        return kind
    return Verdict(str(kind).lower())


def decision_sample(
    kind,
    k: int,
    model: Model | str,
    seed: int | None = None,
    f: OracleFunction | None = None,
) -> Decision:
    """Measure up to k times; Balanced at the first disagreement, else Constant.

    Quantum: each run returns +1 with probability (1 + <X>)/2 of the DQC1
    control at alpha = 1, i.e. a fixed sign for constant f and a fair coin for
    balanced f.  Classical: k distinct inputs drawn without replacement.
    """
    model = Model(model) if not isinstance(model, Model) else model
    if k < 2:
        raise ValidationError(f"k must be >= 2, got {k}")
    rng = np.random.default_rng(seed)
    if model is Model.CLASSICAL:
        if f is None:
            raise ValidationError("the classical model needs an explicit truth table")
        if k > len(f.truth_table):
            raise ValidationError(f"k = {k} exceeds the {len(f.truth_table)} available inputs")
        outcomes = np.asarray(f.truth_table)[rng.choice(len(f.truth_table), size=k, replace=False)]
    else:
        if f is not None:
            f.require_promise()
            exp_x = normalized_trace(f)
        else:
            cls = _as_class(kind)
            if cls in (Verdict.BALANCED, FunctionClass.BALANCED):
                exp_x = 0.0
            elif cls is FunctionClass.CONSTANT1:
                exp_x = -1.0
            elif cls in (Verdict.CONSTANT, FunctionClass.CONSTANT0):
                exp_x = 1.0
            else:
                raise ValidationError(f"cannot sample class {kind!r}")
        outcomes = np.where(rng.random(k) < (1.0 + exp_x) / 2.0, 1, -1)
    for i in range(1, k):
        if outcomes[i] != outcomes[0]:
            return Decision(Verdict.BALANCED, i + 1)
    return Decision(Verdict.CONSTANT, k)


def decision_error_rate(
    k: int, n: int, model: Model | str, trials: int, seed: int = 0, f: OracleFunction | None = None
) -> float:
    """Fraction of `trials` balanced-function runs wrongly guessed Constant.

    Trial i uses the RNG stream seeded with seed + i.  When `f` is omitted a
    fixed balanced function (first half zeros) is used.
    """
    if f is None:
        f = classify([0] * (1 << (n - 1)) + [1] * (1 << (n - 1)))
    wrong = 0
    for i in range(trials):
        if decision_sample(Verdict.BALANCED, k, model, seed + i, f).guess is Verdict.CONSTANT:
            wrong += 1
    return wrong / trials


# ---------------------------------------------------------------------------
# DQCp negativity sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    n: int
    s: int
    max_negativity: float


def dqcp_split(n: int) -> Bipartition:
    """Top (n+1)/2 vs bottom (n+1)/2 for odd n; top n/2 vs bottom n/2+1 for even n."""
    top = (n + 1) // 2 if n % 2 else n // 2
    return Bipartition.of(range(top), n + 1)


def dqcp_negativity_sweep(n_range: Sequence[int], samples_per_n: int, seed: int = 0) -> list[SweepRow]:
    """Max negativity over random balanced functions per n.

    Run r (counted across the whole sweep, in order) draws its function with
    seed + r.
    """
    if samples_per_n < 1:
        raise ValidationError("samples_per_n must be >= 1")
    rows = []
    run = 0
    for n in n_range:
        part = dqcp_split(n)
        best = 0.0
        for _ in range(samples_per_n):
            f = random_balanced(n, seed + run)
            run += 1
            psi, _, _ = run_dqcp(f)
            best = max(best, corr.negativity_pure(psi, part))
        rows.append(SweepRow(n, part.smaller, best))
    return rows


__all__ = [
    "Verdict",
    "DQC1Outcome",
    "run_dqc1",
    "run_dqcp",
    "dqc1_final_state_direct",
    "dqc1_classical_form",
    "dqcp_initial_state",
    "StepReport",
    "SplitReport",
    "TraceSettings",
    "correlation_trace",
    "dqc1_circuit",
    "default_splits",
    "correlation_window",
    "quantum_steps",
    "HEFF_TERMS",
    "NMR_LABELS",
    "NMRRun",
    "NMRTermReport",
    "nmr_heff_sequence",
    "heff_commutator_max",
    "Model",
    "Decision",
    "decision_sample",
    "decision_error_rate",
    "SweepRow",
    "dqcp_split",
    "dqcp_negativity_sweep",
]
