"""Acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (shown in the pytest terminal summary and
printed directly with ``pytest -s``) before asserting.
"""

import itertools
import time

import numpy as np
import pytest

from djdqc1 import correlations as corr
from djdqc1 import protocols as P
from djdqc1.analytics import g, g_exact, p_err_classical, p_err_quantum, perr_curve
from djdqc1.oracle import FunctionClass, all_functions, classify, controlled_oracle_unitary, normalized_trace
from djdqc1.qsim import Bipartition, Circuit, CustomUnitary, DensityMatrix, PureState, apply_circuit, apply_gate, dqc1_initial_state
from djdqc1.synth import DiagonalSpec, collins_dqc1_angles, synthesize_controlled_oracle, synthesize_diagonal, verify_equivalence

from conftest import random_density, random_ket, random_unitary, record_acceptance

RAW = corr.DiscordSettings(zero_clamp=0.0)  # report raw discord values


def test_01_trace_readout():
    t0 = time.perf_counter()
    expected = {FunctionClass.CONSTANT0: 1.0, FunctionClass.CONSTANT1: -1.0, FunctionClass.BALANCED: 0.0}
    bad = []
    checked = 0
    for n in (1, 2, 3):
        for f in all_functions(n):
            checked += 1
            if normalized_trace(f) != expected[f.kind]:
                bad.append(str(f))
    rng = np.random.default_rng(2024)
    for i in range(100):
        n = int(rng.integers(1, 9))
        kind = rng.choice(["c0", "c1", "b", "b"])
        if kind == "c0":
            table = [0] * (1 << n)
        elif kind == "c1":
            table = [1] * (1 << n)
        else:
            table = np.zeros(1 << n, dtype=int)
            table[rng.choice(1 << n, 1 << (n - 1), replace=False)] = 1
        f = classify(table)
        checked += 1
        if normalized_trace(f) != expected[f.kind]:
            bad.append(str(f))
    ok = not bad and time.perf_counter() - t0 < 1.0
    record_acceptance(1, ok, f"normalized trace exact on {checked} functions, {len(bad)} mismatches")
    assert ok


def test_02_dqc1_statistics():
    t0 = time.perf_counter()
    worst_stat = worst_state = 0.0
    for alpha in (0.25, 0.5, 1.0):
        for n in (1, 2, 3):
            for f in all_functions(n):
                out = P.run_dqc1(f, alpha)
                want_x = alpha * normalized_trace(f)
                want_v = np.sqrt(1 - alpha**2) if f.kind.is_constant else 1.0
                worst_stat = max(worst_stat, abs(out.exp_x - want_x), abs(out.var_x - want_v))
                dev = np.max(np.abs(out.final_state.matrix - P.dqc1_final_state_direct(f, alpha)))
                worst_state = max(worst_state, dev)
    elapsed = time.perf_counter() - t0
    ok = worst_stat < 1e-10 and worst_state < 1e-12 and elapsed < 1.0
    record_acceptance(2, ok, f"max |stat err| {worst_stat:.2e}, max state dev {worst_state:.2e}, {elapsed:.2f}s")
    assert ok


def test_03_error_analytics():
    pq = p_err_quantum(6, 0.5)
    table = [0] * 4 + [1] * 4
    pairs = list(itertools.combinations(range(8), 2))
    same = sum(table[a] == table[b] for a, b in pairs)
    brute = same / len(pairs)
    g23_ok = g_exact(2, 3) * len(pairs) == same and g(2, 3) == brute
    lim = abs(g(6, 30) - 2**-5)
    order_ok = all(pt.p_err_classical <= pt.p_err_quantum for pt in perr_curve(10, [3, 5, 7], 0.5))
    ok = pq == 0.015625 and g23_ok and lim < 1e-6 and order_ok
    record_acceptance(
        3, ok, f"p_err_q(6)={pq} (reported as 1.5625%), g(2,3)={g_exact(2, 3)} vs {same}/{len(pairs)}, "
        f"|g(6,30)-2^-5|={lim:.1e}, classical<=quantum: {order_ok}"
    )
    assert ok


def test_04_monte_carlo():
    t0 = time.perf_counter()
    trials = 100_000
    details = []
    ok = True
    run = 0
    for k, n in [(2, 3), (4, 3), (6, 7)]:
        for model, expect in (("classical", g(k, n)), ("quantum", 2.0 ** -(k - 1))):
            freq = P.decision_error_rate(k, n, model, trials, seed=run * trials)
            run += 1
            sigma = np.sqrt(expect * (1 - expect) / trials)
            z = abs(freq - expect) / sigma
            ok &= bool(z < 3)
            details.append(f"({k},{n},{model[0]}) z={z:.2f}")
            # prior applied afterwards
            assert abs(0.5 * expect - (p_err_classical(k, n) if model == "classical" else p_err_quantum(k))) < 1e-15
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 30
    record_acceptance(4, ok, f"{', '.join(details)}; {elapsed:.1f}s")
    assert ok


def test_05_synthesis():
    t0 = time.perf_counter()
    q = np.pi / 4
    hand = {
        "00000000": [0.0] * 15,
        "11111111": [0.0] * 14 + [np.pi],
        "01010110": [q, -q, -q, q, -q, q, -q, q, 0, 0, 0, 0, 0, 0, 2 * q],
    }
    angles_ok = all(
        np.array_equal(np.array(collins_dqc1_angles(classify([int(c) for c in bits]))), np.array(v))
        for bits, v in hand.items()
    )
    rng = np.random.default_rng(5)
    worst = 0.0
    cases = 0
    for m in (1, 2, 3, 4):
        for _ in range(100):
            spec = DiagonalSpec(m, tuple(rng.uniform(-np.pi, np.pi, 1 << m)))
            res = synthesize_diagonal(spec)
            worst = max(worst, verify_equivalence(res.circuit, res.global_phase, spec))
            cases += 1
    fs = all_functions(3)
    for f in fs:
        res = synthesize_controlled_oracle(f)
        worst = max(worst, verify_equivalence(res.circuit, res.global_phase, DiagonalSpec.from_gate(controlled_oracle_unitary(f))))
    elapsed = time.perf_counter() - t0
    ok = angles_ok and worst < 1e-10 and len(fs) == 72 and elapsed < 10
    record_acceptance(5, ok, f"closed-form angles exact: {angles_ok}; max deviation {worst:.2e} over {cases} + {len(fs)} cases; {elapsed:.1f}s")
    assert ok


def test_06_no_correlations_n2():
    t0 = time.perf_counter()
    fs = all_functions(2)
    splits = [Bipartition.of([q], 3) for q in range(3)]
    settings = P.TraceSettings(discord=RAW)
    worst_res = worst_disc = 0.0
    steps = 0
    all_classical = True
    for f in fs:
        for r in P.correlation_trace(P.dqc1_circuit(f), dqc1_initial_state(2, 1.0), splits, settings):
            steps += 1
            all_classical &= r.classical
            worst_res = max(worst_res, r.residual)
            worst_disc = max(worst_disc, max(s.discord for s in r.splits))
    elapsed = time.perf_counter() - t0
    ok = len(fs) == 8 and all_classical and worst_res < 1e-8 and worst_disc < 1e-8 and elapsed < 120
    record_acceptance(6, ok, f"{steps} steps over 8 functions; max residual {worst_res:.1e}, max discord {worst_disc:.1e}; {elapsed:.1f}s")
    assert ok


@pytest.mark.slow
def test_07_correlation_window_n3():
    t0 = time.perf_counter()
    fs = all_functions(3)
    splits = P.default_splits(4)  # control vs rest, top two vs bottom two
    assert [s.side_a for s in splits] == [frozenset({0}), frozenset({0, 1})]
    worst_neg = 0.0
    with_corr = inside = outside = 0
    for f in fs:
        circuit = P.dqc1_circuit(f)
        window = P.correlation_window(circuit)
        reports = P.correlation_trace(circuit, dqc1_initial_state(3, 1.0), splits)
        worst_neg = max(worst_neg, max(r.max_negativity() for r in reports))
        steps = P.quantum_steps(reports)
        if steps:
            with_corr += 1
            assert f.kind is FunctionClass.BALANCED
        inside += sum(s in window for s in steps)
        outside += sum(s not in window for s in steps)
    elapsed = time.perf_counter() - t0
    ok = worst_neg < 1e-10 and with_corr >= 1 and outside == 0 and elapsed < 1200
    record_acceptance(
        7, ok, f"max negativity {worst_neg:.1e}; {with_corr}/72 functions correlated, "
        f"{inside} correlated steps inside the window, {outside} outside; {elapsed:.0f}s"
    )
    assert ok


def test_08_nmr_sequence():
    t0 = time.perf_counter()
    run = P.nmr_heff_sequence(RAW)
    ctrl = [t.discord[0] for t in run.terms]
    others = max(t.discord[q] for t in run.terms for q in (1, 2, 3))
    ok = (
        run.commutator_max < 1e-10
        and run.unitary_deviation < 1e-10
        and all(d > 1e-3 for d in ctrl[:3])
        and all(d < 1e-8 for d in ctrl[3:])
        and others < 1e-8
        and time.perf_counter() - t0 < 60
    )
    raw = ", ".join(f"{d:.3g}" for d in ctrl)
    record_acceptance(
        8, ok, f"commutator {run.commutator_max:.1e}, unitary dev {run.unitary_deviation:.1e}; "
        f"control discord per term [{raw}]; other splits max {others:.1e}"
    )
    assert ok


def test_09_dqcp_staircase():
    t0 = time.perf_counter()
    rows = P.dqcp_negativity_sweep(range(1, 11), 50, seed=0)
    bound_ok = all(r.max_negativity <= (2**r.s - 1) / 2 + 1e-12 for r in rows)
    by_s = {}
    for r in rows:
        by_s.setdefault(r.s, []).append(r.max_negativity)
    levels = [max(by_s[s]) for s in sorted(by_s)]
    nondecreasing = all(b >= a for a, b in zip(levels, levels[1:]))
    # plateau: the two n sharing s differ by less than the step up to the next s
    plateau = all(
        abs(by_s[s][1] - by_s[s][0]) < min(by_s[s + 1]) - max(by_s[s])
        for s in sorted(by_s) if s + 1 in by_s
    )
    elapsed = time.perf_counter() - t0
    ok = bound_ok and nondecreasing and plateau and elapsed < 60
    seq = ", ".join(f"{r.max_negativity:.3f}" for r in rows)
    record_acceptance(9, ok, f"bound {bound_ok}, nondecreasing in s {nondecreasing}, plateaus {plateau}; [{seq}]; {elapsed:.1f}s")
    assert ok


def test_10_property_suites():
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    failures = []
    # state invariants under random circuits
    for trial in range(30):
        m = 3
        gates = []
        for _ in range(10):
            q = int(rng.integers(m))
            gates.append(CustomUnitary(random_unitary(2, int(rng.integers(1 << 30))), (q,)))
            a, b = rng.choice(m, 2, replace=False)
            gates.append(CustomUnitary(random_unitary(4, int(rng.integers(1 << 30))), (int(a), int(b))))
        rho = apply_circuit(DensityMatrix(random_density(m, trial)), Circuit(m, tuple(gates))).matrix
        if not (np.max(np.abs(rho - rho.conj().T)) < 1e-12 and abs(np.trace(rho) - 1) < 1e-12
                and np.min(np.linalg.eigvalsh(rho)) > -1e-12):
            failures.append("invariants")
    # local-unitary invariance of negativity
    worst_lu = 0.0
    for trial in range(30):
        rho = DensityMatrix(random_density(3, 100 + trial, rank=2))
        part = Bipartition.of([trial % 3], 3)
        rot = rho
        for q in range(3):
            rot = apply_gate(rot, CustomUnitary(random_unitary(2, 1000 * trial + q), (q,)))
        worst_lu = max(worst_lu, abs(corr.negativity(rot, part) - corr.negativity(rho, part)))
    # discord >= 0 and zero on the DQC1 start/end states
    min_disc = min(corr.discord(DensityMatrix(random_density(3, 200 + t)), t % 3, RAW) for t in range(10))
    worst_end = 0.0
    for alpha in (0.5, 1.0):
        for f in all_functions(2) + all_functions(3)[::6]:
            d = 1 << f.n
            x = np.array([[0, 1], [1, 0]])
            start = DensityMatrix((np.eye(2 * d) + alpha * np.kron(x, np.eye(d))) / (2 * d))
            final = DensityMatrix(P.dqc1_final_state_direct(f, alpha))
            for rho in (start, final):
                worst_end = max(worst_end, max(corr.discord(rho, q, RAW) for q in range(f.n + 1)))
    # pure-state discord equals entanglement entropy
    worst_pure = 0.0
    for trial in range(10):
        psi = PureState(random_ket(3, 300 + trial))
        q = trial % 3
        worst_pure = max(worst_pure, abs(corr.discord(psi, q, RAW) - corr.entanglement_entropy(psi, Bipartition.of([q], 3))))
    elapsed = time.perf_counter() - t0
    ok = not failures and worst_lu < 1e-9 and min_disc >= 0 and worst_end < 1e-8 and worst_pure < 2e-3 and elapsed < 120
    record_acceptance(
        10, ok, f"invariant failures {len(failures)}, LU drift {worst_lu:.1e}, min discord {min_disc:.2e}, "
        f"endpoint discord {worst_end:.1e}, pure discord-entropy gap {worst_pure:.1e}; {elapsed:.1f}s"
    )
    assert ok
