import csv
import io
import json
import math
from dataclasses import replace

import numpy as np
import pytest

from secure_layered.channel import SystemSpec, dbm_to_watt, sample_scenario, watt_to_dbm
from secure_layered.harness import (
    CSV_HEADER,
    ExperimentConfig,
    aggregate,
    config_from_mapping,
    csv_text,
    dump_jsonl,
    emit_csv,
    load_config,
    run_sweep,
    run_trial,
)
from secure_layered.schemes import solve_relaxation


def small(**kw):
    base = dict(n_trials=3, seed=11, sweep_values=(1, 2), schemes=("Relaxed", "Scheme1", "Scheme2"))
    base.update(kw)
    return ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(n_trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(sweep_values=())
    with pytest.raises(ValueError):
        ExperimentConfig(sweep_values=(2, 2))
    with pytest.raises(ValueError):
        ExperimentConfig(sweep_axis="Distance")
    with pytest.raises(ValueError):
        ExperimentConfig(schemes=("Relaxed", "Magic"))


def test_run_trial_deterministic():
    cfg = small()
    assert run_trial(5, cfg, 2, 1) == run_trial(5, cfg, 2, 1)


def test_trial_uses_shared_scenario():
    cfg = small()
    rec = run_trial(5, cfg, 2, 3)
    spec = cfg.spec_at(2)
    direct = solve_relaxation(sample_scenario(5 ^ 3, spec), spec)
    assert rec.results["Relaxed"].total_power_w == direct.total_power
    # Scheme2 reuses the very same relaxed solve
    if rec.results["Scheme2"].global_optimal:
        assert rec.results["Scheme2"].total_power_w == rec.results["Relaxed"].total_power_w


def test_trial_records_audit_and_feasibility():
    rec = run_trial(0, ExperimentConfig(n_trials=1), 3, 0)
    assert set(rec.results) == {"Relaxed", "Scheme1", "Scheme2", "BaselineSingle", "BaselineMrt"}
    rel = rec.results["Relaxed"]
    assert rel.audit is not None and rel.audit.prop1_consistent
    assert math.isfinite(rel.kkt_max_residual)
    for r in rec.results.values():
        assert r.solved and math.isfinite(r.total_power_dbm) and r.max_violation <= 1e-6
    json.loads(rec.to_json())


def test_infeasible_trials_carry_no_power():
    spec = replace(SystemSpec.default(), p_max=(1e-9,) * 4)
    cfg = small(spec=spec, n_trials=2, sweep_values=(1,))
    table = run_sweep(cfg)
    for rec in table.records:
        for r in rec.results.values():
            assert not r.solved and math.isnan(r.total_power_w)
    for row in table.rows:
        assert row.flagged and row.feasibility_rate == 0 and math.isnan(row.mean_power_dbm)
    assert "nan" in csv_text(table)


def test_csv_shape_and_order(tmp_path):
    table = run_sweep(small())
    path = emit_csv(table, tmp_path / "out" / "sweep.csv")
    rows = list(csv.reader(io.StringIO(path.read_text())))
    assert tuple(rows[0]) == CSV_HEADER
    assert len(rows) == 7
    keys = [(int(r[0]), r[1]) for r in rows[1:]]
    assert keys == sorted(keys)
    for r in rows[1:]:
        assert 0 <= int(r[3]) <= int(r[4]) == 3
        assert len(r[2].replace("-", "").replace(".", "").lstrip("0")) >= 9


def test_rerun_and_parallel_byte_identical(tmp_path):
    cfg = small()
    a = csv_text(run_sweep(cfg))
    assert csv_text(run_sweep(cfg)) == a
    assert csv_text(run_sweep(cfg, workers=2)) == a


def test_aggregation_order_independent():
    cfg = small()
    table = run_sweep(cfg)
    shuffled = list(reversed(table.records))
    assert aggregate(shuffled, cfg) == table.rows


def test_mean_in_watts_then_dbm():
    table = run_sweep(small(schemes=("Relaxed",), sweep_values=(1,)))
    watts = [r.results["Relaxed"].total_power_w for r in table.records]
    assert table.rows[0].mean_power_dbm == pytest.approx(watt_to_dbm(np.mean(watts)), abs=1e-12)
    assert watt_to_dbm(19.95) == pytest.approx(43.0, abs=0.01)


def test_emit_csv_error_names_path(tmp_path):
    table = run_sweep(small(n_trials=1, sweep_values=(1,), schemes=("Relaxed",)))
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="file"):
        emit_csv(table, blocker / "sub" / "a.csv")


def test_jsonl_dump(tmp_path):
    table = run_sweep(small(n_trials=1))
    lines = dump_jsonl(table.records, tmp_path / "t.jsonl").read_text().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[0])["sweep_value"] == 1


def test_config_file(tmp_path):
    path = tmp_path / "cfg.yaml"
    path.write_text(
        "n_trials: 7\nseed: 3\nsweep_axis: AntennaCount\nsweep_values: [4, 6]\n"
        "n_eves: 2\np_max_dbm: 40\ngamma_req_db: [3, 6]\ngamma_tol_db: -12\n"
    )
    cfg = load_config(path)
    assert cfg.n_trials == 7 and cfg.sweep_axis == "AntennaCount" and cfg.sweep_values == (4, 6)
    assert cfg.spec.n_eves == 2 and cfg.spec.n_layers == 2
    assert cfg.spec.p_max[0] == pytest.approx(dbm_to_watt(40))
    assert cfg.spec.gamma_tol[0] == pytest.approx(10 ** -1.2)
    assert cfg.spec_at(6).n_tx == 6
    with pytest.raises(ValueError, match="unknown"):
        config_from_mapping({"trials": 3})
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ValueError):
        load_config(path)
    with pytest.raises(OSError, match="missing"):
        load_config(tmp_path / "missing.yaml")


def test_antenna_sweep_spec():
    cfg = ExperimentConfig(sweep_axis="AntennaCount", sweep_values=(4, 8))
    assert cfg.spec_at(8).n_tx == 8 and len(cfg.spec_at(8).p_max) == 8
    assert cfg.spec_at(8).n_eves == 3
