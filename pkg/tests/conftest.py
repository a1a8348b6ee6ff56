import numpy as np
import pytest

from djdqc1 import _kernels_py
from djdqc1 import correlations as corr

try:
    from djdqc1 import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = ["python"] + (["cython"] if _compiled is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per available kernel implementation."""
    mod = _kernels_py if request.param == "python" else _compiled
    monkeypatch.setattr(corr, "kernels", mod)
    return request.param


def random_density(m, seed, rank=None):
    rng = np.random.default_rng(seed)
    d = 1 << m
    r = d if rank is None else rank
    a = rng.normal(size=(d, r)) + 1j * rng.normal(size=(d, r))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_ket(m, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=1 << m) + 1j * rng.normal(size=1 << m)
    return v / np.linalg.norm(v)


def random_unitary(d, seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def exact_classical(rho, tol=1e-9):
    """Independent check that rho is diagonal in some product basis.

    Every qubit's 2x2 blocks M_rs (indexed by the other qubits) must share a
    common eigenbasis.  Stacking the traceless parts of all blocks as real
    3-vectors, that holds iff the stack has rank <= 1.
    """
    m = int(np.log2(rho.shape[0]))
    t = rho.reshape([2] * (2 * m))
    for q in range(m):
        blk = np.moveaxis(t, [q, m + q], [0, 1]).reshape(2, 2, -1)
        vecs = []
        for k in range(blk.shape[2]):
            b = blk[:, :, k]
            herm = 0.5 * (b + b.conj().T)
            anti = 0.5j * (b.conj().T - b)
            for h in (herm, anti):
                vecs.append([2 * h[0, 1].real, -2 * h[0, 1].imag, (h[0, 0] - h[1, 1]).real])
        s = np.linalg.svd(np.array(vecs), compute_uv=False)
        if len(s) > 1 and s[1] > tol:
            return False
    return True


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE = {}


def record_acceptance(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
