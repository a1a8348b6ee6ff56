"""Pure NumPy versions of the hot kernels (fallback for ``_kernels``).

Both modules expose the same four functions with identical semantics:

eigvalsh(h)
    ascending eigenvalues of a small Hermitian matrix.
measured_entropy(r00, r01, r11, theta, phi)
    sum over the two outcomes of a projective measurement on one qubit of
    p_i * S(conditional state_i), in bits.  ``r_ab`` are the blocks
    <a|rho|b> of the state with the measured qubit moved first.
measured_entropy_grid(r00, r01, r11, thetas, phis)
    the same objective on the outer grid thetas x phis.
product_rotate(rho, angles)
    U^dagger rho U for U = tensor product of one-qubit bases, angles laid out
    as (theta_0, phi_0, theta_1, phi_1, ...).
"""

import numpy as np

_EIG_FLOOR = 1e-300


def eigvalsh(h):
    return np.linalg.eigvalsh(np.asarray(h, dtype=complex))


def _entropy_terms(lam):
    lam = np.where(lam > _EIG_FLOOR, lam, 1.0)
    return -np.sum(lam * np.log2(lam), axis=-1)


def _outcome_sum(sv, sp):
    ev = np.linalg.eigvalsh(sv)
    ep = np.linalg.eigvalsh(sp)
    total = 0.0
    for eig in (ev, ep):
        p = eig.sum(axis=-1)
        h = _entropy_terms(eig)
        plogp = np.where(p > _EIG_FLOOR, p * np.log2(np.where(p > _EIG_FLOOR, p, 1.0)), 0.0)
        total = total + h + plogp
    return total


def _conditional(r00, r01, r11, theta, phi):
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    cross = np.exp(1j * phi) * r01
    cross = cross + cross.conj().T
    sv = c * c * r00 + s * s * r11 + c * s * cross
    sp = s * s * r00 + c * c * r11 - c * s * cross
    return sv, sp


def measured_entropy(r00, r01, r11, theta, phi):
    sv, sp = _conditional(r00, r01, r11, theta, phi)
    return float(_outcome_sum(sv, sp))


def measured_entropy_grid(r00, r01, r11, thetas, phis):
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    c = np.cos(thetas / 2)[:, None, None, None]
    s = np.sin(thetas / 2)[:, None, None, None]
    e = np.exp(1j * phis)[None, :, None, None]
    cross = e * r01[None, None] + (e * r01[None, None]).conj().swapaxes(-1, -2)
    sv = c * c * r00 + s * s * r11 + c * s * cross
    sp = s * s * r00 + c * c * r11 - c * s * cross
    return _outcome_sum(sv, sp)


def basis_unitary(theta, phi):
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    e = np.exp(1j * phi)
    return np.array([[c, s], [e * s, -e * c]], dtype=complex)


def product_rotate(rho, angles):
    rho = np.asarray(rho, dtype=complex)
    angles = np.asarray(angles, dtype=float)
    m = angles.size // 2
    t = rho.reshape([2] * (2 * m))
    for q in range(m):
        u = basis_unitary(angles[2 * q], angles[2 * q + 1])
        t = np.moveaxis(np.tensordot(u.conj().T, t, axes=([1], [q])), 0, q)
        t = np.moveaxis(np.tensordot(u.T, t, axes=([1], [m + q])), 0, m + q)
    return t.reshape(rho.shape)
