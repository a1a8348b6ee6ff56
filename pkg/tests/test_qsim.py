import numpy as np
import pytest

from djdqc1 import ValidationError
from djdqc1.qsim import (
    CNOT,
    HADAMARD,
    LIMITS,
    PAULI_X,
    PAULI_Z,
    Bipartition,
    Circuit,
    ControlledDiagonal,
    CustomUnitary,
    DensityMatrix,
    Diagonal,
    Hadamard,
    PureState,
    RotZ,
    apply_circuit,
    apply_gate,
    basis_state,
    dqc1_initial_state,
    embed_operator,
    expectation,
    maximally_mixed,
    partial_trace,
    partial_transpose,
    product_state,
    set_limits,
)

from conftest import random_density, random_ket, random_unitary


def test_pure_state_norm_checked():
    with pytest.raises(ValidationError):
        PureState(np.array([1.0, 1.0]))
    with pytest.raises(ValidationError):
        PureState(np.ones(3) / np.sqrt(3))


def test_density_invariants_checked():
    with pytest.raises(ValidationError):
        DensityMatrix(np.array([[0.5, 0.1], [0.2, 0.5]]))
    with pytest.raises(ValidationError):
        DensityMatrix(np.diag([0.6, 0.6]))
    with pytest.raises(ValidationError):
        DensityMatrix(np.diag([1.2, -0.2]))
    DensityMatrix(np.diag([1.0, 0.0]))


def test_limits_enforced():
    old = (LIMITS.max_qubits_pure, LIMITS.max_qubits_mixed)
    try:
        set_limits(max_qubits_mixed=2)
        with pytest.raises(ValidationError):
            maximally_mixed(3)
        with pytest.raises(ValidationError):
            set_limits(max_qubits_pure=0)
    finally:
        set_limits(*old)


def test_big_endian_convention():
    psi = apply_gate(basis_state(2, 0), CNOT(0, 1))
    assert np.allclose(psi.amplitudes, [1, 0, 0, 0])
    psi = apply_gate(basis_state(2, 2), CNOT(0, 1))  # |10> -> |11>
    assert np.allclose(psi.amplitudes, [0, 0, 0, 1])
    assert np.allclose(embed_operator(PAULI_Z, [0], 2), np.kron(PAULI_Z, np.eye(2)))


def test_rotz_convention():
    u = RotZ(0, 0.6).matrix(1)
    assert np.allclose(u, np.diag([np.exp(-0.3j), np.exp(0.3j)]))


@pytest.mark.parametrize("seed", range(5))
def test_gate_application_matches_dense_matrix(seed):
    m = 3
    rng = np.random.default_rng(seed)
    gates = [
        Hadamard(1),
        RotZ(2, rng.uniform(-3, 3)),
        CNOT(2, 0),
        Diagonal(tuple(rng.uniform(-3, 3, 8))),
        ControlledDiagonal(1, tuple(rng.uniform(-3, 3, 4))),
        CustomUnitary(random_unitary(4, seed), (2, 0)),
    ]
    psi = PureState(random_ket(m, seed))
    rho = DensityMatrix(random_density(m, seed))
    for g in gates:
        u = g.matrix(m)
        assert np.allclose(apply_gate(psi, g).amplitudes, u @ psi.amplitudes, atol=1e-12)
        assert np.allclose(apply_gate(rho, g).matrix, u @ rho.matrix @ u.conj().T, atol=1e-12)
        assert np.allclose(g.inverse().matrix(m) @ u, np.eye(8), atol=1e-12)


def test_controlled_diagonal_full_phases():
    g = ControlledDiagonal(0, (0.1, 0.2))
    assert np.allclose(g.full_phases(2), [0, 0, 0.1, 0.2])
    assert np.allclose(g.matrix(2), np.diag(np.exp(1j * np.array([0, 0, 0.1, 0.2]))))


def test_circuit_unitary_and_inverse():
    c = Circuit(2, (Hadamard(0), CNOT(0, 1), RotZ(1, 0.3)), 0.25)
    u = c.unitary()
    expected = np.exp(0.25j) * RotZ(1, 0.3).matrix(2) @ CNOT(0, 1).matrix(2) @ Hadamard(0).matrix(2)
    assert np.allclose(u, expected)
    assert np.allclose(c.inverse().unitary() @ u, np.eye(4))
    assert c.count(CNOT) == 1


def test_invalid_gates():
    with pytest.raises(ValidationError):
        CNOT(1, 1)
    with pytest.raises(ValidationError):
        apply_gate(basis_state(2), Hadamard(2))
    with pytest.raises(ValidationError):
        CustomUnitary(np.ones((2, 2)), (0,))


def test_partial_trace_oracle():
    a = random_density(1, 1)
    b = random_density(2, 2)
    rho = DensityMatrix(np.kron(a, b))
    assert np.allclose(partial_trace(rho, [0]).matrix, a)
    assert np.allclose(partial_trace(rho, [1, 2]).matrix, b)
    assert np.allclose(partial_trace(rho, Bipartition.of([0], 3)).matrix, a)


def test_partial_transpose_oracle():
    rho = random_density(2, 3)
    t = rho.reshape(2, 2, 2, 2)
    expected = t.transpose(2, 1, 0, 3).reshape(4, 4)
    assert np.allclose(partial_transpose(DensityMatrix(rho), Bipartition.of([0], 2)), expected)


def test_expectation_pure_and_mixed_agree():
    psi = PureState(random_ket(3, 4))
    for q in range(3):
        assert expectation(psi, PAULI_X, [q]) == pytest.approx(expectation(psi.density(), PAULI_X, [q]), abs=1e-12)
    with pytest.raises(ValidationError):
        expectation(psi, np.array([[0, 1], [0, 0]]), [0])


def test_dqc1_initial_state():
    rho = dqc1_initial_state(2, 0.5)
    expected = np.kron(np.eye(2) + 0.5 * PAULI_Z, np.eye(4)) / 8
    assert np.allclose(rho.matrix, expected)
    with pytest.raises(ValidationError):
        dqc1_initial_state(2, 1.5)


def test_product_state_and_bipartition():
    plus = HADAMARD @ [1, 0]
    psi = product_state([1, 0], plus)
    assert np.allclose(psi.amplitudes, [plus[0], plus[1], 0, 0])
    part = Bipartition.of([0, 1], 5)
    assert part.side_b == frozenset({2, 3, 4}) and part.smaller == 2
    with pytest.raises(ValidationError):
        Bipartition.of([], 2)


def test_apply_circuit_sequential():
    c = Circuit(2, (Hadamard(0), CNOT(0, 1)))
    psi = apply_circuit(basis_state(2), c)
    assert np.allclose(psi.amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))
