"""Monte Carlo engine: seeded trials, sweeps over eavesdropper or antenna
count, and the CSV summary.

Trial ``t`` draws its channels from ``sample_scenario(seed ^ t, spec)``. The
stream does not depend on the sweep value: channel draws nest across antenna
and eavesdropper counts, so neighbouring sweep points compare the same fading
realizations (common random numbers).
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np
import yaml

from .channel import SystemSpec, db_to_linear, dbm_to_watt, sample_scenario, watt_to_dbm
from .metrics import link_metrics
from .schemes import (
    FAILED,
    SCHEMES,
    SOLVED,
    AllocationOutcome,
    check_kkt,
    check_proposition1,
    solve_baseline_mrt,
    solve_baseline_single,
    solve_relaxation,
    solve_scheme1,
    solve_scheme2,
    verify_feasibility,
)

__all__ = [
    "SWEEP_AXES",
    "CSV_HEADER",
    "ExperimentConfig",
    "RelaxedAudit",
    "SchemeResult",
    "TrialRecord",
    "SweepRow",
    "SweepTable",
    "run_trial",
    "run_sweep",
    "aggregate",
    "emit_csv",
    "csv_text",
    "dump_jsonl",
    "load_config",
    "config_from_mapping",
]

SWEEP_AXES = ("EveCount", "AntennaCount")
CSV_HEADER = (
    "sweep_value",
    "scheme",
    "mean_power_dbm",
    "trials_solved",
    "trials_total",
    "rank_one_rate",
    "mean_secrecy_l1",
    "global_optimal_rate",
)


@dataclass(frozen=True)
class ExperimentConfig:
    spec: SystemSpec = field(default_factory=SystemSpec.default)
    n_trials: int = 500
    seed: int = 0
    sweep_axis: str = "EveCount"
    sweep_values: tuple[int, ...] = (1, 2, 3, 4)
    schemes: tuple[str, ...] = SCHEMES
    output_path: str | None = None
    parallel_hybrid: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sweep_values", tuple(int(v) for v in self.sweep_values))
        object.__setattr__(self, "schemes", tuple(self.schemes))
        self.validate()

    def validate(self):
        if self.n_trials < 1:
            raise ValueError("n_trials must be at least 1")
        if self.sweep_axis not in SWEEP_AXES:
            raise ValueError(f"sweep_axis must be one of {SWEEP_AXES}, got {self.sweep_axis!r}")
        v = self.sweep_values
        if not v:
            raise ValueError("sweep_values is empty")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("sweep_values must be strictly increasing")
        lo = 0 if self.sweep_axis == "EveCount" else 1
        if v[0] < lo:
            raise ValueError(f"sweep value {v[0]} below {lo}")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad or not self.schemes:
            raise ValueError(f"unknown or empty schemes {bad}; choose from {SCHEMES}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def spec_at(self, value: int) -> SystemSpec:
        if self.sweep_axis == "EveCount":
            return self.spec.with_eves(value)
        return self.spec.with_antennas(value)


@dataclass
class RelaxedAudit:
    """KKT and rank figures of one relaxed solve."""

    rank_w1: int
    all_beta_zero: bool
    prop1_consistent: bool
    lambda_min: float
    beta_max: float
    c1_activity: float
    complementarity_ratio: float  # max_i |Tr(Y_i W_i)| / Tr(W_i), plus |Tr(ZV)| / P
    dual_min_eig: float
    gap: float


@dataclass
class SchemeResult:
    status: str
    total_power_w: float = float("nan")
    total_power_dbm: float = float("nan")
    rank_flags: tuple[int, ...] = ()
    global_optimal: bool = False
    secrecy_1: float = float("nan")
    kkt_max_residual: float = float("nan")
    max_violation: float = float("nan")
    message: str = ""
    audit: RelaxedAudit | None = None

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


@dataclass
class TrialRecord:
    trial_index: int
    sweep_value: int
    results: dict[str, SchemeResult]

    def to_json(self) -> str:
        def clean(x):
            if isinstance(x, float) and not math.isfinite(x):
                return None
            if isinstance(x, dict):
                return {k: clean(v) for k, v in x.items()}
            if isinstance(x, (list, tuple)):
                return [clean(v) for v in x]
            return x

        return json.dumps(clean(asdict(self)), sort_keys=True)


def _audit(out: AllocationOutcome, s, spec) -> tuple[RelaxedAudit, float]:
    rep = check_kkt(out.problem, out.solution, s, spec)
    p1 = check_proposition1(out, rep)
    ratios = [rep.complementarity[f"W{i + 1}"] / max(float(np.trace(W).real), 1e-300)
              for i, W in enumerate(out.W)]
    ratios.append(rep.complementarity["V"] / out.total_power)
    audit = RelaxedAudit(
        rank_w1=p1.rank_w1,
        all_beta_zero=p1.all_beta_zero,
        prop1_consistent=p1.consistent,
        lambda_min=float(np.min(rep.lam)),
        beta_max=float(np.max(rep.beta, initial=0.0)),
        c1_activity=float(np.max(rep.c1_activity)),
        complementarity_ratio=float(max(ratios)),
        dual_min_eig=float(min(rep.dual_min_eig.values())),
        gap=float(rep.gap),
    )
    return audit, rep.max_residual


def _record(out: AllocationOutcome, s, spec) -> SchemeResult:
    if not out.solved:
        return SchemeResult(out.status, message=out.message)
    res = SchemeResult(
        SOLVED,
        total_power_w=float(out.total_power),
        total_power_dbm=float(watt_to_dbm(out.total_power)),
        rank_flags=tuple(int(r) for r in out.rank_flags),
        global_optimal=bool(out.global_optimal),
        secrecy_1=float(link_metrics(s, out.W, out.V).secrecy[0]),
        max_violation=verify_feasibility(s, spec, out).max_violation,
    )
    return res


def run_trial(seed: int, cfg: ExperimentConfig, sweep_value: int, trial: int) -> TrialRecord:
    """Run every enabled scheme on one seeded scenario.

    A scheme that raises is recorded as ``Failed``; the trial goes on.
    """
    spec = cfg.spec_at(sweep_value)
    s = sample_scenario(seed ^ trial, spec)
    outcomes: dict[str, AllocationOutcome] = {}
    results: dict[str, SchemeResult] = {}

    def run(name, fn):
        try:
            outcomes[name] = fn()
            results[name] = _record(outcomes[name], s, spec)
        except Exception as exc:  # recorded, never aborts the trial
            results[name] = SchemeResult(FAILED, message=f"{type(exc).__name__}: {exc}")

    wanted = set(cfg.schemes)
    if "Relaxed" in wanted:
        run("Relaxed", lambda: solve_relaxation(s, spec))
        if results["Relaxed"].solved:
            try:
                audit, resid = _audit(outcomes["Relaxed"], s, spec)
                results["Relaxed"].audit = audit
                results["Relaxed"].kkt_max_residual = float(resid)
            except Exception as exc:
                results["Relaxed"].message = f"audit failed: {exc}"
    if "Scheme1" in wanted:
        run("Scheme1", lambda: solve_scheme1(s, spec))
    if "Scheme2" in wanted:
        run("Scheme2", lambda: solve_scheme2(
            s, spec, relaxed=outcomes.get("Relaxed"), scheme1=outcomes.get("Scheme1"),
            parallel=cfg.parallel_hybrid))
    if "BaselineSingle" in wanted:
        run("BaselineSingle", lambda: solve_baseline_single(s, spec))
    if "BaselineMrt" in wanted:
        run("BaselineMrt", lambda: solve_baseline_mrt(s, spec))
    return TrialRecord(trial, sweep_value, {k: results[k] for k in cfg.schemes})


# --------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepRow:
    sweep_value: int
    scheme: str
    mean_power_w: float
    trials_solved: int
    trials_total: int
    rank_one_rate: float
    mean_secrecy_l1: float
    global_optimal_rate: float

    @property
    def mean_power_dbm(self) -> float:
        return float(watt_to_dbm(self.mean_power_w)) if self.trials_solved else float("nan")

    @property
    def feasibility_rate(self) -> float:
        return self.trials_solved / self.trials_total

    @property
    def flagged(self) -> bool:
        """No solved trial: the point carries no power estimate."""
        return self.trials_solved == 0


@dataclass
class SweepTable:
    config: ExperimentConfig
    rows: list[SweepRow]
    records: list[TrialRecord]

    def row(self, value: int, scheme: str) -> SweepRow:
        for r in self.rows:
            if r.sweep_value == value and r.scheme == scheme:
                return r
        raise KeyError((value, scheme))

    def series(self, scheme: str) -> list[SweepRow]:
        return [r for r in self.rows if r.scheme == scheme]


def _chunk(args):
    seed, cfg, items = args
    return [run_trial(seed, cfg, v, t) for v, t in items]


def run_sweep(cfg: ExperimentConfig, workers: int = 1, progress=None) -> SweepTable:
    """Run ``n_trials`` trials at every sweep value and aggregate them.

    ``workers > 1`` spreads trials over processes; records are re-sorted
    before reduction so the table does not depend on completion order.
    ``progress`` is called with the number of finished trials.
    """
    items = [(v, t) for v in cfg.sweep_values for t in range(cfg.n_trials)]
    records: list[TrialRecord] = []
    if workers <= 1:
        for i, (v, t) in enumerate(items):
            records.append(run_trial(cfg.seed, cfg, v, t))
            if progress:
                progress(i + 1)
    else:
        size = max(1, len(items) // (workers * 8))
        chunks = [items[i:i + size] for i in range(0, len(items), size)]
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_chunk, (cfg.seed, cfg, c)) for c in chunks]
            for f in concurrent.futures.as_completed(futures):
                records.extend(f.result())
                if progress:
                    progress(len(records))
    records.sort(key=lambda r: (r.sweep_value, r.trial_index))
    return SweepTable(cfg, aggregate(records, cfg), records)


def aggregate(records: list[TrialRecord], cfg: ExperimentConfig) -> list[SweepRow]:
    """Per (sweep value, scheme) means over solved trials; powers are
    averaged in watts."""
    rows = []
    for v in cfg.sweep_values:
        recs = sorted((r for r in records if r.sweep_value == v), key=lambda r: r.trial_index)
        for scheme in sorted(cfg.schemes):
            solved = [r.results[scheme] for r in recs if r.results[scheme].solved]
            n = len(solved)

            def mean(xs):
                return math.fsum(xs) / n if n else float("nan")

            rows.append(SweepRow(
                sweep_value=v,
                scheme=scheme,
                mean_power_w=mean(x.total_power_w for x in solved),
                trials_solved=n,
                trials_total=len(recs),
                rank_one_rate=mean(float(all(k == 1 for k in x.rank_flags)) for x in solved),
                mean_secrecy_l1=mean(x.secrecy_1 for x in solved),
                global_optimal_rate=mean(float(x.global_optimal) for x in solved),
            ))
    return rows


def _fmt(x: float) -> str:
    return "nan" if not math.isfinite(x) else format(x, ".12g")


def csv_text(table: SweepTable) -> str:
    if not table.rows:
        raise ValueError("empty table")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in sorted(table.rows, key=lambda r: (r.sweep_value, r.scheme)):
        w.writerow([r.sweep_value, r.scheme, _fmt(r.mean_power_dbm), r.trials_solved,
                    r.trials_total, _fmt(r.rank_one_rate), _fmt(r.mean_secrecy_l1),
                    _fmt(r.global_optimal_rate)])
    return buf.getvalue()


def emit_csv(table: SweepTable, path) -> Path:
    path = Path(path)
    text = csv_text(table)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
    return path


def dump_jsonl(records: list[TrialRecord], path) -> Path:
    path = Path(path)
    try:
        with path.open("w") as fh:
            for r in records:
                fh.write(r.to_json() + "\n")
    except OSError as exc:
        raise OSError(f"cannot write trial dump to {path}: {exc}") from exc
    return path


# --------------------------------------------------------------------------
# config files

# flat keys: link parameters in dB/dBm, experiment fields as named
_SPEC_KEYS = {"n_tx", "n_eves", "gamma_req_db", "gamma_tol_db", "p_max_dbm", "noise_dbm",
              "user_distance_m", "eve_distance_m"}
_CFG_KEYS = {f.name for f in fields(ExperimentConfig)} - {"spec"}


def config_from_mapping(d: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Build a config from flat keys, on top of ``base`` (default link parameters).

    Spec keys: ``n_tx``, ``n_eves``, ``gamma_req_db`` (list), ``gamma_tol_db``
    (scalar or list), ``p_max_dbm``, ``noise_dbm``, ``user_distance_m``,
    ``eve_distance_m``. Remaining keys mirror :class:`ExperimentConfig`.
    """
    base = base or ExperimentConfig()
    unknown = set(d) - _SPEC_KEYS - _CFG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    spec = base.spec
    upd = {}
    if "n_tx" in d:
        spec = spec.with_antennas(int(d["n_tx"]))
    if "gamma_req_db" in d:
        upd["gamma_req"] = tuple(np.atleast_1d(db_to_linear(np.asarray(d["gamma_req_db"], dtype=float))))
    if "gamma_tol_db" in d:
        tol = np.atleast_1d(db_to_linear(np.asarray(d["gamma_tol_db"], dtype=float)))
        n = int(d.get("n_eves", tol.size if tol.size > 1 else spec.n_eves))
        upd["gamma_tol"] = tuple(tol) if tol.size > 1 else (float(tol[0]),) * n
    elif "n_eves" in d:
        spec = spec.with_eves(int(d["n_eves"]))
    if "p_max_dbm" in d:
        upd["p_max"] = float(dbm_to_watt(float(d["p_max_dbm"])))
    if "noise_dbm" in d:
        upd["noise_power"] = float(dbm_to_watt(float(d["noise_dbm"])))
    for k in ("user_distance_m", "eve_distance_m"):
        if k in d:
            upd[k] = d[k]
    if upd:
        spec = replace(spec, **upd)
    kw = {k: d[k] for k in _CFG_KEYS if k in d}
    return replace(base, spec=spec, **kw)


def load_config(path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text()) or {}
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a key-value mapping")
    return config_from_mapping(data, base)
