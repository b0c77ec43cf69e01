"""Command line entry point (``secure-layered`` / ``python -m secure_layered``)."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .channel import watt_to_dbm
from .harness import (
    ExperimentConfig,
    SchemeResult,
    config_from_mapping,
    csv_text,
    dump_jsonl,
    emit_csv,
    load_config,
    run_sweep,
    run_trial,
)
from .metrics import secrecy_floor
from .schemes import SCHEMES

FIG2_VALUES = (1, 2, 3, 4)
FIG3_VALUES = (4, 5, 6, 7, 8)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="secure-layered", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, trials_default):
        p.add_argument("--seed", type=int, default=None, help="base seed (default 0)")
        p.add_argument("--trials", type=int, default=None,
                       help=f"trials per sweep point (default {trials_default})")
        p.add_argument("--config", help="YAML file of flat config keys")
        p.add_argument("--out", help="output path (CSV for sweeps, report for the rest)")
        p.add_argument("--schemes", help=f"comma separated subset of {','.join(SCHEMES)}")

    p = sub.add_parser("solve-one", help="solve one seeded instance and print a report")
    common(p, 1)
    p.add_argument("--eves", type=int, default=None, help="number of eavesdroppers")
    p.add_argument("--antennas", type=int, default=None, help="number of transmit antennas")

    for name, what, default in (("sweep-eves", "eavesdropper count", FIG2_VALUES),
                                ("sweep-antennas", "antenna count", FIG3_VALUES)):
        p = sub.add_parser(name, help=f"Monte Carlo sweep over {what}")
        common(p, 500)
        p.add_argument("--values", help=f"comma separated sweep values (default {default})")
        p.add_argument("--workers", type=int, default=1, help="worker processes")
        p.add_argument("--jsonl", help="also dump per-trial records to this file")

    p = sub.add_parser("validate", help="run the certificate audit over seeded instances")
    common(p, 50)
    p.add_argument("--eves", type=int, default=None)
    p.add_argument("--antennas", type=int, default=None)
    return ap


def _config(args, axis, values, trials_default) -> ExperimentConfig:
    cfg = ExperimentConfig(sweep_axis=axis, sweep_values=values, n_trials=trials_default)
    if args.config:
        cfg = load_config(args.config, cfg)
    over = {}
    if args.seed is not None:
        over["seed"] = args.seed
    if args.trials is not None:
        over["n_trials"] = args.trials
    if args.schemes:
        over["schemes"] = tuple(s.strip() for s in args.schemes.split(",") if s.strip())
    if getattr(args, "values", None):
        over["sweep_values"] = tuple(int(v) for v in args.values.split(","))
    if getattr(args, "eves", None) is not None:
        over["n_eves"] = args.eves
    if getattr(args, "antennas", None) is not None:
        over["n_tx"] = args.antennas
    return config_from_mapping(over, cfg)


def _point_config(args, trials_default) -> tuple[ExperimentConfig, int]:
    cfg = _config(args, "EveCount", (0,), trials_default)
    n_eves = cfg.spec.n_eves
    return replace(cfg, sweep_values=(n_eves,)), n_eves


def _write(text: str, out) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _line(name: str, r: SchemeResult) -> str:
    if not r.solved:
        return f"{name:15s} {r.status:10s} {r.message}"
    ranks = ",".join(str(k) for k in r.rank_flags)
    return (f"{name:15s} {r.status:10s} P={r.total_power_w:.6g} W ({r.total_power_dbm:.4f} dBm) "
            f"ranks=[{ranks}] global_optimal={r.global_optimal} Csec1={r.secrecy_1:.4f} "
            f"violation={r.max_violation:.2e}")


def cmd_solve_one(args) -> int:
    cfg, n_eves = _point_config(args, 1)
    spec = cfg.spec
    rec = run_trial(cfg.seed, cfg, n_eves, 0)
    lines = [f"seed={cfg.seed} n_tx={spec.n_tx} layers={spec.n_layers} eavesdroppers={n_eves} "
             f"p_max={watt_to_dbm(spec.p_max[0]):.2f} dBm/antenna "
             f"secrecy floor={secrecy_floor(spec):.4f} bit/s/Hz"]
    lines += [_line(k, v) for k, v in rec.results.items()]
    relaxed = rec.results.get("Relaxed")
    if relaxed is not None and relaxed.audit is not None:
        a = relaxed.audit
        lines.append(f"KKT: max residual={relaxed.kkt_max_residual:.3e} min lambda={a.lambda_min:.4e} "
                     f"max beta={a.beta_max:.4e} C1 activity={a.c1_activity:.2e} "
                     f"complementarity/Tr={a.complementarity_ratio:.2e} gap={a.gap:.2e}")
        lines.append(f"rank certificate: rank(W1)={a.rank_w1} all_beta_zero={a.all_beta_zero} "
                     f"consistent={a.prop1_consistent}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_sweep(args, axis, values) -> int:
    cfg = _config(args, axis, values, 500)
    total = cfg.n_trials * len(cfg.sweep_values)

    def progress(n):
        if n % 50 == 0 or n == total:
            print(f"\r{n}/{total} trials", end="", file=sys.stderr, flush=True)

    table = run_sweep(cfg, workers=args.workers, progress=progress)
    print(file=sys.stderr)
    out = args.out or cfg.output_path
    if out:
        emit_csv(table, out)
    else:
        sys.stdout.write(csv_text(table))
    if args.jsonl:
        dump_jsonl(table.records, args.jsonl)
    flagged = [(r.sweep_value, r.scheme) for r in table.rows if r.flagged]
    if flagged:
        print(f"warning: no solved trial at {flagged}", file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    """Audit every solved relaxation and the per-trial ordering chain."""
    cfg, n_eves = _point_config(args, 50)
    cfg = replace(cfg, schemes=SCHEMES)
    spec = cfg.spec
    floor = secrecy_floor(spec)
    counts = dict(trials=0, solved=0, prop1=0, kkt=0, order=0, secrecy=0, feasible=0)
    problems = []
    for t in range(cfg.n_trials):
        rec = run_trial(cfg.seed, cfg, n_eves, t)
        counts["trials"] += 1
        rel = rec.results["Relaxed"]
        if not rel.solved:
            continue
        counts["solved"] += 1
        a = rel.audit
        ok_p1 = a is not None and a.prop1_consistent
        ok_kkt = (a is not None and a.c1_activity <= 1e-6 and a.lambda_min > 0
                  and a.complementarity_ratio <= 1e-6 and a.gap <= 1e-7)
        solved = {k: v for k, v in rec.results.items() if v.solved}
        ok_feas = all(v.max_violation <= 1e-6 for v in solved.values())
        ok_sec = all(v.secrecy_1 >= floor - 1e-3 for v in solved.values())
        ok_order = True
        if len(solved) == len(SCHEMES):
            # powers are solved in watts against unit noise; 1e-6 W slack
            P = {k: v.total_power_w for k, v in solved.items()}
            tol = 1e-6
            ok_order = (P["Relaxed"] <= P["Scheme2"] + tol and P["Scheme2"] <= P["Scheme1"] + tol
                        and P["Scheme1"] <= P["BaselineMrt"] + tol
                        and P["Relaxed"] <= P["BaselineSingle"] + tol)
        for key, ok in (("prop1", ok_p1), ("kkt", ok_kkt), ("order", ok_order),
                        ("secrecy", ok_sec), ("feasible", ok_feas)):
            counts[key] += ok
            if not ok:
                problems.append(f"trial {t}: {key} check failed")
    lines = [f"validated {counts['solved']}/{counts['trials']} solved relaxations "
             f"(n_tx={spec.n_tx}, eavesdroppers={n_eves}, seed={cfg.seed})"]
    for key in ("prop1", "kkt", "order", "secrecy", "feasible"):
        lines.append(f"  {key:9s} {counts[key]}/{counts['solved']}")
    lines += problems
    _write("\n".join(lines) + "\n", args.out)
    return 0 if not problems else 1


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "solve-one":
            return cmd_solve_one(args)
        if args.command == "sweep-eves":
            return cmd_sweep(args, "EveCount", FIG2_VALUES)
        if args.command == "sweep-antennas":
            return cmd_sweep(args, "AntennaCount", FIG3_VALUES)
        return cmd_validate(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
