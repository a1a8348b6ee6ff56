"""Dense simulation of few-qubit pure and mixed states.

Qubit 0 is the top wire (the control qubit in every protocol) and is the
most significant bit of a basis index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ValidationError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
NORM_TOL = 1e-12
PSD_TOL = -1e-10
UNITARY_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass
class Limits:
    max_qubits_pure: int = 12
    max_qubits_mixed: int = 8


LIMITS = Limits()


def set_limits(max_qubits_pure: int | None = None, max_qubits_mixed: int | None = None) -> None:
    if max_qubits_pure is not None:
        if max_qubits_pure < 1:
            raise ValidationError("max_qubits_pure must be >= 1")
        LIMITS.max_qubits_pure = int(max_qubits_pure)
    if max_qubits_mixed is not None:
        if max_qubits_mixed < 1:
            raise ValidationError("max_qubits_mixed must be >= 1")
        LIMITS.max_qubits_mixed = int(max_qubits_mixed)


def _qubit_count(dim: int) -> int:
    m = dim.bit_length() - 1
    if dim < 2 or (1 << m) != dim:
        raise ValidationError(f"dimension {dim} is not a power of two >= 2")
    return m


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        m = _qubit_count(amps.size)
        if m > LIMITS.max_qubits_pure:
            raise ValidationError(f"{m} qubits exceeds pure-state limit {LIMITS.max_qubits_pure}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state norm {norm!r} differs from 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def m(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    def density(self) -> "DensityMatrix":
        psi = self.amplitudes
        return DensityMatrix(np.outer(psi, psi.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        rho = np.array(self.matrix, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValidationError("density matrix must be square")
        m = _qubit_count(rho.shape[0])
        if m > LIMITS.max_qubits_mixed:
            raise ValidationError(f"{m} qubits exceeds mixed-state limit {LIMITS.max_qubits_mixed}")
        if self.check:
            herm = np.max(np.abs(rho - rho.conj().T))
            if herm > HERMITIAN_TOL:
                raise ValidationError(f"matrix is not Hermitian (deviation {herm:.3g})")
            tr = np.trace(rho).real
            if abs(tr - 1.0) > TRACE_TOL:
                raise ValidationError(f"trace {tr!r} differs from 1")
            lo = np.linalg.eigvalsh(rho)[0]
            if lo < PSD_TOL:
                raise ValidationError(f"matrix is not positive semidefinite (min eigenvalue {lo:.3g})")
        rho.setflags(write=False)
        object.__setattr__(self, "matrix", rho)

    @property
    def m(self) -> int:
        return self.matrix.shape[0].bit_length() - 1


State = Union[PureState, DensityMatrix]


def basis_state(m: int, index: int = 0) -> PureState:
    amps = np.zeros(1 << m, dtype=complex)
    amps[index] = 1.0
    return PureState(amps)


def product_state(*kets: Sequence[complex]) -> PureState:
    return PureState(reduce(np.kron, [np.asarray(k, dtype=complex) for k in kets]))


def maximally_mixed(m: int) -> DensityMatrix:
    d = 1 << m
    return DensityMatrix(np.eye(d, dtype=complex) / d)


def dqc1_initial_state(n: int, alpha: float) -> DensityMatrix:
    """rho_I = 2^-(n+1) (I + alpha Z) on the control, tensored with I^n."""
    if n < 1:
        raise ValidationError("register size n must be >= 1")
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must lie in [0, 1], got {alpha}")
    control = np.array([1.0 + alpha, 1.0 - alpha]) / 2.0
    register = np.full(1 << n, 1.0 / (1 << n))
    return DensityMatrix(np.diag(np.kron(control, register)).astype(complex))


# ---------------------------------------------------------------------------
# Bipartitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bipartition:
    side_a: frozenset
    m: int

    def __post_init__(self):
        side = frozenset(int(q) for q in self.side_a)
        if not side:
            raise ValidationError("bipartition side must be nonempty")
        if any(q < 0 or q >= self.m for q in side):
            raise ValidationError(f"qubit index out of range for {self.m} qubits")
        if len(side) == self.m:
            raise ValidationError("bipartition side must be a proper subset")
        object.__setattr__(self, "side_a", side)

    @classmethod
    def of(cls, side_a: Iterable[int], m: int) -> "Bipartition":
        return cls(frozenset(side_a), m)

    @property
    def side_b(self) -> frozenset:
        return frozenset(range(self.m)) - self.side_a

    @property
    def smaller(self) -> int:
        return min(len(self.side_a), self.m - len(self.side_a))

    def label(self) -> str:
        a = "".join(str(q) for q in sorted(self.side_a))
        b = "".join(str(q) for q in sorted(self.side_b))
        return f"{a}|{b}"


# ---------------------------------------------------------------------------
# Gates
# ---------------------------------------------------------------------------


def embed_operator(op: np.ndarray, qubits: Sequence[int], m: int) -> np.ndarray:
    """Full 2^m matrix of `op` acting on `qubits` (in the given order)."""
    k = len(qubits)
    rest = [q for q in range(m) if q not in qubits]
    full = np.kron(op, np.eye(1 << (m - k), dtype=complex))
    # axes of `full` are ordered (qubits..., rest...); permute back to 0..m-1
    order = list(qubits) + rest
    perm = np.argsort(order)
    t = full.reshape([2] * (2 * m))
    t = t.transpose(list(perm) + [m + p for p in perm])
    return t.reshape(1 << m, 1 << m)


def rotz_matrix(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


class Gate:
    """Base class; subclasses are frozen dataclasses."""

    def qubits(self) -> tuple[int, ...]:
        raise NotImplementedError

    def matrix(self, m: int) -> np.ndarray:
        raise NotImplementedError

    def inverse(self) -> "Gate":
        raise NotImplementedError

    def is_diagonal(self) -> bool:
        return False

    def validate(self, m: int) -> None:
        for q in self.qubits():
            if not 0 <= q < m:
                raise ValidationError(f"{self} acts on qubit {q}, register has {m}")


@dataclass(frozen=True)
class Hadamard(Gate):
    q: int

    def qubits(self):
        return (self.q,)

    def local(self) -> np.ndarray:
        return HADAMARD

    def matrix(self, m):
        self.validate(m)
        return embed_operator(HADAMARD, [self.q], m)

    def inverse(self):
        return self

    def __str__(self):
        return f"H {self.q}"


@dataclass(frozen=True)
class RotZ(Gate):
    q: int
    theta: float

    def qubits(self):
        return (self.q,)

    def local(self) -> np.ndarray:
        return rotz_matrix(self.theta)

    def matrix(self, m):
        self.validate(m)
        return embed_operator(rotz_matrix(self.theta), [self.q], m)

    def inverse(self):
        return RotZ(self.q, -self.theta)

    def is_diagonal(self):
        return True

    def __str__(self):
        return f"RZ {self.q} {self.theta:.17g}"


_CNOT_LOCAL = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


@dataclass(frozen=True)
class CNOT(Gate):
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValidationError("CNOT control and target must differ")

    def qubits(self):
        return (self.control, self.target)

    def local(self) -> np.ndarray:
        return _CNOT_LOCAL

    def matrix(self, m):
        self.validate(m)
        return embed_operator(_CNOT_LOCAL, [self.control, self.target], m)

    def inverse(self):
        return self

    def __str__(self):
        return f"CNOT {self.control} {self.target}"


@dataclass(frozen=True)
class Diagonal(Gate):
    """exp(i*phases[j]) on basis state j of the full register."""

    phases: tuple

    def __post_init__(self):
        ph = tuple(float(p) for p in np.asarray(self.phases, dtype=float).reshape(-1))
        _qubit_count(len(ph))
        if not all(np.isfinite(ph)):
            raise ValidationError("phases must be finite")
        object.__setattr__(self, "phases", ph)

    @property
    def m(self) -> int:
        return len(self.phases).bit_length() - 1

    def qubits(self):
        return tuple(range(self.m))

    def diagonal(self, m: int) -> np.ndarray:
        if m != self.m:
            raise ValidationError(f"diagonal gate spans {self.m} qubits, register has {m}")
        return np.exp(1j * np.asarray(self.phases))

    def matrix(self, m):
        return np.diag(self.diagonal(m))

    def inverse(self):
        return Diagonal(tuple(-p for p in self.phases))

    def is_diagonal(self):
        return True


@dataclass(frozen=True)
class ControlledDiagonal(Gate):
    """Identity when `control` is 0, diag(exp(i*phases)) on the other qubits when 1."""

    control: int
    phases: tuple

    def __post_init__(self):
        ph = tuple(float(p) for p in np.asarray(self.phases, dtype=float).reshape(-1))
        _qubit_count(len(ph))
        if not all(np.isfinite(ph)):
            raise ValidationError("phases must be finite")
        object.__setattr__(self, "phases", ph)

    @property
    def m(self) -> int:
        return len(self.phases).bit_length()

    def qubits(self):
        return tuple(range(self.m))

    def full_phases(self, m: int) -> np.ndarray:
        if m != self.m:
            raise ValidationError(f"controlled diagonal spans {self.m} qubits, register has {m}")
        self.validate(m)
        rest = [q for q in range(m) if q != self.control]
        out = np.zeros(1 << m)
        ph = np.asarray(self.phases)
        for j in range(1 << m):
            if (j >> (m - 1 - self.control)) & 1:
                r = 0
                for q in rest:
                    r = (r << 1) | ((j >> (m - 1 - q)) & 1)
                out[j] = ph[r]
        return out

    def diagonal(self, m: int) -> np.ndarray:
        return np.exp(1j * self.full_phases(m))

    def matrix(self, m):
        return np.diag(self.diagonal(m))

    def inverse(self):
        return ControlledDiagonal(self.control, tuple(-p for p in self.phases))

    def is_diagonal(self):
        return True


@dataclass(frozen=True, eq=False)
class CustomUnitary(Gate):
    unitary: np.ndarray
    targets: tuple

    def __post_init__(self):
        u = np.array(self.unitary, dtype=complex)
        targets = tuple(int(q) for q in self.targets)
        if u.shape != (1 << len(targets), 1 << len(targets)):
            raise ValidationError("unitary shape does not match the acted-qubit list")
        if len(set(targets)) != len(targets):
            raise ValidationError("acted qubits must be distinct")
        dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
        if dev > UNITARY_TOL:
            raise ValidationError(f"matrix is not unitary (deviation {dev:.3g})")
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)
        object.__setattr__(self, "targets", targets)

    def qubits(self):
        return self.targets

    def local(self) -> np.ndarray:
        return self.unitary

    def matrix(self, m):
        self.validate(m)
        return embed_operator(self.unitary, list(self.targets), m)

    def inverse(self):
        return CustomUnitary(self.unitary.conj().T, self.targets)


# ---------------------------------------------------------------------------
# Circuits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Circuit:
    m: int
    gates: tuple = ()
    global_phase: float = 0.0

    def __post_init__(self):
        gates = tuple(self.gates)
        for g in gates:
            g.validate(self.m)
        object.__setattr__(self, "gates", gates)

    def __len__(self):
        return len(self.gates)

    def unitary(self, include_phase: bool = True) -> np.ndarray:
        u = np.eye(1 << self.m, dtype=complex)
        for g in self.gates:
            u = g.matrix(self.m) @ u
        if include_phase:
            u = u * np.exp(1j * self.global_phase)
        return u

    def inverse(self) -> "Circuit":
        return Circuit(self.m, tuple(g.inverse() for g in reversed(self.gates)), -self.global_phase)

    def count(self, kind: type) -> int:
        return sum(isinstance(g, kind) for g in self.gates)


# ---------------------------------------------------------------------------
# Gate application
# ---------------------------------------------------------------------------


def _apply_local(tensor: np.ndarray, op: np.ndarray, qubits: Sequence[int], m: int, offset: int = 0) -> np.ndarray:
    """Contract a k-qubit operator into axes offset+q of a rank-(>=m) tensor."""
    k = len(qubits)
    axes = [offset + q for q in qubits]
    op_t = op.reshape([2] * (2 * k))
    out = np.tensordot(op_t, tensor, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def _diag_of(gate: Gate, m: int) -> np.ndarray:
    if isinstance(gate, (Diagonal, ControlledDiagonal)):
        return gate.diagonal(m)
    return np.diag(gate.matrix(m))


def apply_gate(state: State, gate: Gate) -> State:
    """psi -> U psi for pure states, rho -> U rho U^dagger for density matrices."""
    m = state.m
    gate.validate(m)
    if isinstance(state, PureState):
        if gate.is_diagonal():
            return PureState(_diag_of(gate, m) * state.amplitudes)
        t = state.amplitudes.reshape([2] * m)
        t = _apply_local(t, gate.local(), gate.qubits(), m)
        return PureState(t.reshape(-1))
    rho = state.matrix
    if gate.is_diagonal():
        d = _diag_of(gate, m)
        out = d[:, None] * rho * d.conj()[None, :]
    else:
        u = gate.local()
        t = rho.reshape([2] * (2 * m))
        t = _apply_local(t, u, gate.qubits(), m, offset=0)
        t = _apply_local(t, u.conj(), gate.qubits(), m, offset=m)
        out = t.reshape(rho.shape)
    out = 0.5 * (out + out.conj().T)
    return DensityMatrix(out, check=False)


def apply_circuit(state: State, circuit: Circuit) -> State:
    if circuit.m != state.m:
        raise ValidationError(f"circuit spans {circuit.m} qubits, state has {state.m}")
    for g in circuit.gates:
        state = apply_gate(state, g)
    return state


# ---------------------------------------------------------------------------
# Partial operations and observables
# ---------------------------------------------------------------------------


def as_density(state: State) -> DensityMatrix:
    return state.density() if isinstance(state, PureState) else state


def partial_trace(rho: State, keep: Bipartition | Iterable[int]) -> DensityMatrix:
    """Reduced state on the qubits in `keep` (a Bipartition keeps side_a)."""
    rho = as_density(rho)
    m = rho.m
    kept = sorted(keep.side_a if isinstance(keep, Bipartition) else {int(q) for q in keep})
    if not kept:
        raise ValidationError("keep set must be nonempty")
    if any(q < 0 or q >= m for q in kept):
        raise ValidationError("qubit index out of range")
    traced = [q for q in range(m) if q not in kept]
    t = rho.matrix.reshape([2] * (2 * m))
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    row = [letters[q] for q in range(m)]
    col = [letters[m + q] for q in range(m)]
    for q in traced:
        col[q] = row[q]
    out_idx = "".join(row[q] for q in kept) + "".join(col[q] for q in kept)
    red = np.einsum("".join(row) + "".join(col) + "->" + out_idx, t)
    d = 1 << len(kept)
    return DensityMatrix(red.reshape(d, d), check=False)


def partial_transpose(rho: State, part: Bipartition) -> np.ndarray:
    """Transpose the indices of side_a of `part`."""
    rho = as_density(rho)
    m = rho.m
    if part.m != m:
        raise ValidationError("bipartition qubit count does not match the state")
    t = rho.matrix.reshape([2] * (2 * m))
    perm = list(range(2 * m))
    for q in part.side_a:
        perm[q], perm[m + q] = m + q, q
    return t.transpose(perm).reshape(rho.matrix.shape)


def expectation(rho: State, observable: np.ndarray, qubits: Sequence[int] | None = None) -> float:
    """Tr(rho O) with O embedded on `qubits` (all qubits when omitted)."""
    obs = np.asarray(observable, dtype=complex)
    if np.max(np.abs(obs - obs.conj().T)) > HERMITIAN_TOL:
        raise ValidationError("observable is not Hermitian")
    m = rho.m
    if qubits is None:
        qubits = list(range(m))
    qubits = list(qubits)
    k = len(qubits)
    if obs.shape != (1 << k,) * 2:
        raise ValidationError("observable shape does not match its qubit list")
    if isinstance(rho, PureState):
        # <psi| O |psi> without forming the density matrix
        psi = rho.amplitudes.reshape([2] * m)
        out = np.tensordot(obs.reshape([2] * (2 * k)), psi, axes=(list(range(k, 2 * k)), qubits))
        out = np.moveaxis(out, list(range(k)), qubits)
        val = np.vdot(psi, out)
    else:
        val = np.trace(rho.matrix @ embed_operator(obs, qubits, m))
    if abs(val.imag) > 1e-10:
        raise ValidationError(f"expectation has imaginary part {val.imag:.3g}")
    return float(val.real)


def eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending real eigenvalues and orthonormal eigenvectors of a Hermitian matrix."""
    return np.linalg.eigh(matrix)
