"""Entropies, negativity, one-sided discord and a product-basis classicality test.

All entropies are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares, minimize

from . import kernels
from .errors import ValidationError
from .qsim import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Bipartition,
    DensityMatrix,
    PureState,
    State,
    as_density,
    partial_trace,
    partial_transpose,
)

DISCORD_ZERO = 1e-8
CLASSICAL_TOL = 1e-8


@dataclass(frozen=True)
class DiscordSettings:
    """Measurement-basis search: coarse grid, then Nelder-Mead refinement."""

    n_theta: int = 32
    n_phi: int = 64
    refine_tol: float = 1e-12
    refine_starts: int = 4
    zero_clamp: float = DISCORD_ZERO


@dataclass(frozen=True)
class ClassicalitySettings:
    starts: int = 20
    tol: float = CLASSICAL_TOL
    seed: int = 0


@dataclass(frozen=True)
class MeasurementBasis:
    """Projective one-qubit measurement along the Bloch direction (theta, phi)."""

    theta: float
    phi: float

    def vectors(self) -> tuple[np.ndarray, np.ndarray]:
        c, s = np.cos(self.theta / 2), np.sin(self.theta / 2)
        e = np.exp(1j * self.phi)
        return np.array([c, e * s]), np.array([s, -e * c])

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        v, w = self.vectors()
        return np.outer(v, v.conj()), np.outer(w, w.conj())

    @classmethod
    def from_bloch(cls, n: np.ndarray) -> "MeasurementBasis":
        n = np.asarray(n, dtype=float)
        n = n / np.linalg.norm(n)
        return cls(float(np.arccos(np.clip(n[2], -1.0, 1.0))), float(np.arctan2(n[1], n[0])))


@dataclass(frozen=True)
class CorrelationValues:
    negativity: float
    discord: float
    mutual_information: float
    classical: bool


def _entropy_of_eigs(lam: np.ndarray) -> float:
    lam = lam[lam > 1e-300]
    return float(-np.sum(lam * np.log2(lam)))


def von_neumann_entropy(rho: State) -> float:
    rho = as_density(rho)
    return max(0.0, _entropy_of_eigs(np.linalg.eigvalsh(rho.matrix)))


def mutual_information(rho: State, part: Bipartition) -> float:
    rho = as_density(rho)
    s_a = von_neumann_entropy(partial_trace(rho, part.side_a))
    s_b = von_neumann_entropy(partial_trace(rho, part.side_b))
    return max(0.0, s_a + s_b - von_neumann_entropy(rho))


def negativity(rho: State, part: Bipartition) -> float:
    """Sum of |negative eigenvalues| of the partial transpose."""
    lam = np.linalg.eigvalsh(partial_transpose(rho, part))
    return float(-np.sum(lam[lam < 0.0]))


def schmidt_coefficients(psi: PureState, part: Bipartition) -> np.ndarray:
    m = psi.m
    if part.m != m:
        raise ValidationError("bipartition qubit count does not match the state")
    a = sorted(part.side_a)
    b = sorted(part.side_b)
    t = psi.amplitudes.reshape([2] * m).transpose(a + b)
    return np.linalg.svd(t.reshape(1 << len(a), 1 << len(b)), compute_uv=False)


def negativity_pure(psi: PureState, part: Bipartition) -> float:
    s = schmidt_coefficients(psi, part)
    return float((np.sum(s) ** 2 - 1.0) / 2.0)


def entanglement_entropy(psi: PureState, part: Bipartition) -> float:
    return _entropy_of_eigs(schmidt_coefficients(psi, part) ** 2)


# ---------------------------------------------------------------------------
# one-qubit marginal structure
# ---------------------------------------------------------------------------


def _qubit_blocks(rho: np.ndarray, q: int, m: int) -> np.ndarray:
    """Tensor r[a, i, b, j] = <a, i| rho |b, j> with qubit q pulled to the front."""
    t = rho.reshape([2] * (2 * m))
    t = np.moveaxis(t, [q, m + q], [0, m])
    d = 1 << (m - 1)
    return t.reshape(2, d, 2, d)


def _local_direction(rho: np.ndarray, q: int, m: int) -> np.ndarray:
    """Bloch direction that best diagonalizes every 2x2 component of rho on qubit q.

    The components M_ij = (r[a, i, b, j])_ab all commute and share an eigenbasis
    exactly when rho is diagonal in some basis of qubit q; their Bloch vectors
    (real and imaginary parts) then lie on one axis, which is returned.
    """
    r = _qubit_blocks(rho, q, m)
    comps = np.transpose(r, (1, 3, 0, 2)).reshape(-1, 2, 2)
    bloch = np.stack(
        [np.einsum("kab,ba->k", comps, p) for p in (PAULI_X, PAULI_Y, PAULI_Z)], axis=0
    )
    stacked = np.concatenate([bloch.real, bloch.imag], axis=1)
    u, s, _ = np.linalg.svd(stacked)
    if s[0] < 1e-14:
        return np.array([0.0, 0.0, 1.0])
    return u[:, 0]


# ---------------------------------------------------------------------------
# discord
# ---------------------------------------------------------------------------


def _basis_angles(theta: float, phi: float) -> tuple[float, float]:
    return float(theta), float(np.mod(phi, 2 * np.pi))


def optimal_measurement(rho: State, measured_qubit: int, settings: DiscordSettings = DiscordSettings()):
    """Minimize sum_i p_i S(rest | outcome i) over projective bases on one qubit.

    Returns (minimum, MeasurementBasis).
    """
    rho = as_density(rho)
    m = rho.m
    if not 0 <= measured_qubit < m:
        raise ValidationError(f"measured qubit {measured_qubit} out of range")
    r = _qubit_blocks(rho.matrix, measured_qubit, m)
    r00 = np.ascontiguousarray(r[0, :, 0, :])
    r01 = np.ascontiguousarray(r[0, :, 1, :])
    r11 = np.ascontiguousarray(r[1, :, 1, :])

    def objective(x):
        return kernels.measured_entropy(r00, r01, r11, float(x[0]), float(x[1]))

    thetas = np.linspace(0.0, np.pi, settings.n_theta)
    phis = np.linspace(0.0, 2 * np.pi, settings.n_phi, endpoint=False)
    grid = kernels.measured_entropy_grid(r00, r01, r11, thetas, phis)

    seeds = []
    direction = MeasurementBasis.from_bloch(_local_direction(rho.matrix, measured_qubit, m))
    seeds.append((direction.theta, direction.phi))
    for flat in np.argsort(grid, axis=None)[: settings.refine_starts]:
        i, j = np.unravel_index(flat, grid.shape)
        seeds.append((thetas[i], phis[j]))

    best_val = float(np.min(grid))
    i, j = np.unravel_index(np.argmin(grid), grid.shape)
    best_x = (thetas[i], phis[j])
    step = np.pi / max(settings.n_theta - 1, 1)
    for x0 in seeds:
        val0 = objective(x0)
        if val0 < best_val:
            best_val, best_x = val0, x0
        simplex = np.array([x0, (x0[0] + step, x0[1]), (x0[0], x0[1] + step)])
        res = minimize(
            objective,
            np.array(x0),
            method="Nelder-Mead",
            options={
                "xatol": 1e-10,
                "fatol": settings.refine_tol,
                "initial_simplex": simplex,
                "maxiter": 2000,
            },
        )
        if res.fun < best_val:
            best_val, best_x = float(res.fun), tuple(res.x)
    return best_val, MeasurementBasis(*_basis_angles(*best_x))


def discord(rho: State, measured_qubit: int, settings: DiscordSettings = DiscordSettings()) -> float:
    """One-sided discord with a projective measurement on a single qubit (bits)."""
    if isinstance(measured_qubit, (set, frozenset, list, tuple)):
        if len(measured_qubit) != 1:
            raise ValidationError("discord needs a single measured qubit")
        (measured_qubit,) = tuple(measured_qubit)
    rho = as_density(rho)
    s_a = von_neumann_entropy(partial_trace(rho, [measured_qubit]))
    s_ab = von_neumann_entropy(rho)
    best, _ = optimal_measurement(rho, measured_qubit, settings)
    value = s_a - s_ab + best
    if value < settings.zero_clamp:
        return 0.0
    return float(value)


# ---------------------------------------------------------------------------
# classicality
# ---------------------------------------------------------------------------


def offdiag_residual(rho: np.ndarray, angles: np.ndarray) -> float:
    """Frobenius norm of the off-diagonal part of rho in the product basis `angles`."""
    rot = kernels.product_rotate(rho, angles)
    return float(np.sqrt(max(0.0, np.sum(np.abs(rot) ** 2) - np.sum(np.abs(np.diag(rot)) ** 2))))


def is_classical(rho: State, settings: ClassicalitySettings = ClassicalitySettings()) -> tuple[bool, float]:
    """Search for a product basis in which rho is diagonal.

    Multi-start least squares over two Bloch angles per qubit.  The first
    start uses the per-qubit directions of ``_local_direction``, then the
    all-Z and all-X bases, then uniformly random directions.  Stops as soon
    as the residual drops below ``settings.tol``.  A ``False`` answer means no
    start reached the tolerance; it is not a proof.
    """
    rho = as_density(rho)
    mat = rho.matrix
    m = rho.m
    iu = np.triu_indices(1 << m, k=1)

    def residuals(x):
        rot = kernels.product_rotate(mat, x)
        up = rot[iu]
        return np.sqrt(2.0) * np.concatenate([up.real, up.imag])

    starts = []
    guided = []
    for q in range(m):
        b = MeasurementBasis.from_bloch(_local_direction(mat, q, m))
        guided += [b.theta, b.phi]
    starts.append(np.array(guided))
    starts.append(np.zeros(2 * m))
    starts.append(np.tile([np.pi / 2, 0.0], m))
    rng = np.random.default_rng(settings.seed)
    while len(starts) < settings.starts:
        z = rng.uniform(-1.0, 1.0, m)
        phi = rng.uniform(0.0, 2 * np.pi, m)
        starts.append(np.column_stack([np.arccos(z), phi]).reshape(-1))

    best = np.inf
    for x0 in starts[: settings.starts]:
        resid = offdiag_residual(mat, x0)
        if resid < settings.tol:
            return True, resid
        fit = least_squares(
            residuals, x0, method="lm", xtol=1e-12, ftol=1e-12, gtol=1e-12, max_nfev=50 * (2 * m + 1)
        )
        resid = offdiag_residual(mat, fit.x)
        best = min(best, resid)
        if best < settings.tol:
            return True, best
    return False, float(best)


def correlation_values(
    rho: State,
    part: Bipartition,
    measured_qubit: int | None = None,
    discord_settings: DiscordSettings = DiscordSettings(),
    classical_settings: ClassicalitySettings = ClassicalitySettings(),
) -> CorrelationValues:
    """Negativity, discord, mutual information and classicality across one split.

    The measured qubit defaults to the single qubit of a 1-vs-rest split.
    """
    rho_d = as_density(rho)
    if measured_qubit is None:
        if len(part.side_a) == 1:
            (measured_qubit,) = tuple(part.side_a)
        elif len(part.side_b) == 1:
            (measured_qubit,) = tuple(part.side_b)
        else:
            raise ValidationError("discord needs a split with a single-qubit side")
    if isinstance(rho, PureState):
        neg = negativity_pure(rho, part)
    else:
        neg = negativity(rho_d, part)
    other = frozenset(range(rho_d.m)) - {measured_qubit}
    if part.side_a not in ({measured_qubit}, other):
        raise ValidationError("measured qubit must form one side of the split")
    classical, _ = is_classical(rho_d, classical_settings)
    return CorrelationValues(
        negativity=neg,
        discord=discord(rho_d, measured_qubit, discord_settings),
        mutual_information=mutual_information(rho_d, part),
        classical=classical,
    )


__all__ = [
    "DISCORD_ZERO",
    "CLASSICAL_TOL",
    "DiscordSettings",
    "ClassicalitySettings",
    "MeasurementBasis",
    "CorrelationValues",
    "DensityMatrix",
    "von_neumann_entropy",
    "mutual_information",
    "negativity",
    "negativity_pure",
    "schmidt_coefficients",
    "entanglement_entropy",
    "optimal_measurement",
    "discord",
    "offdiag_residual",
    "is_classical",
    "correlation_values",
]
