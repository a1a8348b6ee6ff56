"""Compare the compiled kernels with the NumPy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Inputs are the conditional blocks of a random 4-qubit mixed state, the size
used by every discord evaluation in the n = 3 correlation traces.
"""

import argparse
import timeit

import numpy as np

from djdqc1 import _kernels_py

try:
    from djdqc1 import _kernels
except ImportError:
    _kernels = None


def random_state(m: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(1 << m, 1 << m)) + 1j * rng.normal(size=(1 << m, 1 << m))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def cases(rho: np.ndarray):
    d = rho.shape[0] // 2
    r00, r01, r11 = rho[:d, :d], rho[:d, d:], rho[d:, d:]
    thetas = np.linspace(0, np.pi, 32)
    phis = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    angles = np.random.default_rng(1).uniform(0, np.pi, 8)
    return {
        "eigvalsh 16x16": lambda k: k.eigvalsh(rho),
        "measured_entropy": lambda k: k.measured_entropy(r00, r01, r11, 0.7, 1.3),
        "measured_entropy_grid 32x64": lambda k: k.measured_entropy_grid(r00, r01, r11, thetas, phis),
        "product_rotate 4 qubits": lambda k: k.product_rotate(rho, angles),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the fallback is available")
    rho = random_state(4, 0)
    print(f"{'kernel':30s} {'python':>12s} {'cython':>12s} {'speedup':>8s} {'max diff':>10s}")
    for name, fn in cases(rho).items():
        number = 3 if "grid" in name else 200
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=number, repeat=args.repeat)) / number
        if _kernels is None:
            print(f"{name:30s} {t_py * 1e6:10.1f}us")
            continue
        t_c = min(timeit.repeat(lambda: fn(_kernels), number=number, repeat=args.repeat)) / number
        diff = np.max(np.abs(np.asarray(fn(_kernels)) - np.asarray(fn(_kernels_py))))
        print(f"{name:30s} {t_py * 1e6:10.1f}us {t_c * 1e6:10.1f}us {t_py / t_c:7.1f}x {diff:10.1e}")


if __name__ == "__main__":
    main()
