"""Command-line front end.

Every subcommand writes a single CSV table or JSON document to stdout or to
--output.  Floats in CSV are printed with 17 significant digits and JSON uses
Python's round-trip float repr, so equal inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__, analytics, protocols
from . import correlations as corr
from .config import CONFIG_ENV, RunConfig, load_config
from .errors import ValidationError
from .oracle import controlled_oracle_unitary, normalized_trace, read_oracle_file
from .qsim import dqc1_initial_state, set_limits
from .synth import DiagonalSpec, emit_netlist, parse_netlist, synthesize_controlled_oracle, verify_equivalence

SEED_RULE = """\
random streams:
  Every random run draws from numpy.random.default_rng(seed + r), where seed
  is --seed (or the config value) and r is the run index.
  dqcp sweep: r counts sampled functions across the whole sweep in output
    order, so n = n_min uses r = 0 .. samples-1, the next n continues, etc.
  perr --monte-carlo T: cells are visited in output order (n, then k); cell c
    runs the classical model with r = 2cT + i and the quantum model with
    r = (2c + 1)T + i for trial i = 0 .. T-1.
"""


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    if x is None:
        return ""
    return str(x)


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _table(fmt: str, header: Sequence[str], rows: Sequence[Sequence]) -> str:
    if fmt == "json":
        return _json([dict(zip(header, row)) for row in rows])
    return _csv(header, rows)


def _settings(cfg: RunConfig) -> protocols.TraceSettings:
    return protocols.TraceSettings(
        discord=corr.DiscordSettings(zero_clamp=cfg.discord_zero),
        classical=corr.ClassicalitySettings(tol=cfg.classical_residual, seed=cfg.seed),
    )


# -- subcommands --------------------------------------------------------------


def cmd_dqc1_run(args, cfg: RunConfig) -> str:
    f = read_oracle_file(args.oracle_file)
    if not 0.0 <= args.alpha <= 1.0:
        raise ValidationError(f"alpha must lie in [0, 1], got {args.alpha}")
    out = protocols.run_dqc1(f, args.alpha)
    record = {
        "n": f.n,
        "function_class": f.kind.value,
        "alpha": args.alpha,
        "normalized_trace": normalized_trace(f),
        "exp_x": out.exp_x,
        "var_x": out.var_x,
        "inferred_class": out.inferred_class.value,
    }
    if (args.format or cfg.format or "json") == "csv":
        return _csv(list(record), [list(record.values())])
    return _json(record)


def cmd_dqcp_sweep(args, cfg: RunConfig) -> str:
    if args.n_min < 1 or args.n_max < args.n_min:
        raise ValidationError("need 1 <= n-min <= n-max")
    seed = cfg.seed if args.seed is None else args.seed
    rows = protocols.dqcp_negativity_sweep(range(args.n_min, args.n_max + 1), args.samples, seed)
    return _table(args.format or cfg.format or "csv", ["n", "s", "max_negativity"],
                  [[r.n, r.s, r.max_negativity] for r in rows])


def cmd_synth_emit(args, cfg: RunConfig) -> str:
    f = read_oracle_file(args.oracle_file)
    syn = synthesize_controlled_oracle(f)
    text = emit_netlist(syn.circuit, syn.global_phase)
    if args.netlist_out:
        Path(args.netlist_out).write_text(text)
        return ""
    return text


def cmd_synth_verify(args, cfg: RunConfig) -> str:
    f = read_oracle_file(args.oracle_file)
    try:
        text = Path(args.netlist).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read netlist {args.netlist}: {exc}") from exc
    circuit, phase = parse_netlist(text)
    spec = DiagonalSpec.from_gate(controlled_oracle_unitary(f))
    dev = verify_equivalence(circuit, phase, spec)
    record = {"deviation": dev, "tolerance": cfg.matrix_eq, "equivalent": dev < cfg.matrix_eq}
    if not record["equivalent"]:
        sys.stderr.write(f"netlist deviates from the oracle by {dev:.3g}\n")
    if (args.format or cfg.format or "json") == "csv":
        return _csv(list(record), [list(record.values())])
    return _json(record)


def cmd_trace(args, cfg: RunConfig) -> str:
    f = read_oracle_file(args.oracle_file)
    f.require_promise()
    circuit = protocols.dqc1_circuit(f)
    if args.model == "dqc1":
        initial = dqc1_initial_state(f.n, args.alpha)
    else:
        initial = protocols.dqcp_initial_state(f.n)
    splits = protocols.default_splits(f.n + 1)
    reports = protocols.correlation_trace(circuit, initial, splits, _settings(cfg))
    window = protocols.correlation_window(circuit)
    header = ["step", "gate", "split", "negativity", "discord", "classical", "residual", "quantum", "in_window"]
    rows = []
    for r in reports:
        q = r.quantum(cfg.discord_zero)
        for s in r.splits:
            rows.append([r.step_index, r.gate, s.split, s.negativity, s.discord, r.classical, r.residual, q,
                         r.step_index in window])
    return _table(args.format or cfg.format or "csv", header, rows)


def cmd_nmr(args, cfg: RunConfig) -> str:
    run = protocols.nmr_heff_sequence(corr.DiscordSettings(zero_clamp=cfg.discord_zero))
    fmt = args.format or cfg.format or "json"
    header = ["term", "label", "discord_q0", "discord_q1", "discord_q2", "discord_q3"]
    rows = [[t.term_index, t.label] + [t.discord[q] for q in range(4)] for t in run.terms]
    if fmt == "csv":
        return _csv(header, rows)
    return _json({
        "commutator_max": run.commutator_max,
        "unitary_deviation": run.unitary_deviation,
        "global_phase": run.global_phase,
        "terms": [dict(zip(header, row)) for row in rows],
    })


def cmd_perr(args, cfg: RunConfig) -> str:
    try:
        n_list = [int(x) for x in args.n.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"--n expects comma-separated integers, got {args.n!r}") from exc
    if not n_list or min(n_list) < 1:
        raise ValidationError("--n needs at least one positive integer")
    points = analytics.perr_curve(args.k_max, n_list, args.p)
    header = ["k", "n", "p", "p_err_classical", "p_err_quantum"]
    rows = [[pt.k, pt.n, pt.p, pt.p_err_classical, pt.p_err_quantum] for pt in points]
    trials = args.monte_carlo
    if trials:
        if trials < 1:
            raise ValidationError("--monte-carlo needs a positive trial count")
        seed = cfg.seed if args.seed is None else args.seed
        header += ["mc_classical", "mc_quantum"]
        for c, (row, pt) in enumerate(zip(rows, points)):
            # past 2^n queries every input has been seen, so cap k there
            k_cls = min(pt.k, 1 << pt.n)
            cls = protocols.decision_error_rate(k_cls, pt.n, "classical", trials, seed + 2 * c * trials)
            qnt = protocols.decision_error_rate(pt.k, pt.n, "quantum", trials, seed + (2 * c + 1) * trials)
            row += [pt.p * cls, pt.p * qnt]
    return _table(args.format or cfg.format or "csv", header, rows)


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"key=value config file (default: ${CONFIG_ENV})")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), help="output format")

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, help="master seed (default from config, else 0)")

    oracle = argparse.ArgumentParser(add_help=False)
    oracle.add_argument("--oracle-file", required=True, help="one line of 0/1 characters, length 2^n")

    p = argparse.ArgumentParser(
        prog="djdqc1",
        description="Deutsch-Jozsa in the one-clean-qubit model: simulation, synthesis and correlation analysis.",
        epilog=SEED_RULE,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def leaf(parent_sub, name, func, parents, help_text):
        sp = parent_sub.add_parser(name, parents=parents, help=help_text, description=help_text,
                                   epilog=SEED_RULE, formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=func)
        return sp

    dqc1 = sub.add_parser("dqc1", help="DQC1 runs").add_subparsers(dest="action", required=True)
    sp = leaf(dqc1, "run", cmd_dqc1_run, [common, oracle], "run the DQC1 circuit and report the control statistics")
    sp.add_argument("--alpha", type=float, default=1.0, help="control polarization in [0, 1]")

    dqcp = sub.add_parser("dqcp", help="pure-state variant").add_subparsers(dest="action", required=True)
    sp = leaf(dqcp, "sweep", cmd_dqcp_sweep, [common, seeded], "max negativity over random balanced functions per n")
    sp.add_argument("--n-min", type=int, default=1)
    sp.add_argument("--n-max", type=int, default=10)
    sp.add_argument("--samples", type=int, default=50)

    synth = sub.add_parser("synth", help="circuit synthesis").add_subparsers(dest="action", required=True)
    sp = leaf(synth, "emit", cmd_synth_emit, [common, oracle], "emit the RZ/CNOT netlist of the controlled oracle")
    sp.add_argument("--netlist-out", help="write the netlist here instead of stdout")
    sp = leaf(synth, "verify", cmd_synth_verify, [common, oracle], "check a netlist against the controlled oracle")
    sp.add_argument("--netlist", required=True)

    sp = leaf(sub, "trace", cmd_trace, [common, oracle], "per-gate correlation report over the synthesized circuit")
    sp.add_argument("--model", choices=("dqc1", "dqcp"), default="dqc1")
    sp.add_argument("--alpha", type=float, default=1.0, help="control polarization for --model dqc1")

    nmr = sub.add_parser("nmr", help="NMR effective-Hamiltonian sequence").add_subparsers(dest="action", required=True)
    leaf(nmr, "discord-trace", cmd_nmr, [common], "discord for every 1-vs-3 split after each Hamiltonian term")

    sp = leaf(sub, "perr", cmd_perr, [common, seeded], "error probability curves of the decision rule")
    sp.add_argument("--k-max", type=int, default=10)
    sp.add_argument("--n", default="3,5,7", help="comma-separated bit counts")
    sp.add_argument("--p", type=float, default=0.5, help="prior probability that f is balanced")
    sp.add_argument("--monte-carlo", type=int, metavar="TRIALS", help="add sampled error rates")
    return p


def execute(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        cfg = cfg.replace(format=args.format, output=args.output)
        set_limits(cfg.max_qubits_pure, cfg.max_qubits_mixed)
        text = args.func(args, cfg)
        if cfg.output:
            Path(cfg.output).write_text(text)
        else:
            stdout.write(text)
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(execute(argv))
