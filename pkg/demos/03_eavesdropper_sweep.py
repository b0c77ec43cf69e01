"""Average transmit power against the number of idle receivers.

Runs the eavesdropper-count sweep (N_T = 4) for all schemes and writes the
CSV next to this script. Powers are averaged in watts, shown in dBm.

    python demos/03_eavesdropper_sweep.py [trials] [workers]
"""

import sys
import time
from pathlib import Path

from secure_layered.harness import ExperimentConfig, emit_csv, run_sweep

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 100
workers = int(sys.argv[2]) if len(sys.argv) > 2 else 1
cfg = ExperimentConfig(n_trials=trials, seed=2024, sweep_axis="EveCount", sweep_values=(1, 2, 3, 4))

t0 = time.perf_counter()
table = run_sweep(cfg, workers=workers)
print(f"{trials} trials x {len(cfg.sweep_values)} points in {time.perf_counter() - t0:.1f} s\n")

schemes = sorted(cfg.schemes)
print("K-1  " + "".join(f"{s:>16s}" for s in schemes))
for v in cfg.sweep_values:
    print(f"{v:3d}  " + "".join(f"{table.row(v, s).mean_power_dbm:16.3f}" for s in schemes))

print("\nfeasibility and relaxation rank-one rate")
for v in cfg.sweep_values:
    rel = table.row(v, "Relaxed")
    feas = {s: f"{table.row(v, s).feasibility_rate:.3f}" for s in schemes}
    print(f"K-1={v}: rank-one {rel.rank_one_rate:.3f}, feasible {feas}")

out = emit_csv(table, Path(__file__).with_name("eavesdropper_sweep.csv"))
print(f"\nCSV written to {out}")
