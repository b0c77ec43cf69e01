"""One channel draw on the default link, end to end.

Solves the relaxation, both suboptimal schemes and the two baselines on the
same scenario, then opens up the relaxed solution: beam vectors, SINRs at the
user and at each eavesdropper, and the reconstructed dual matrices.

    python demos/01_single_instance.py [seed]
"""

import sys

import numpy as np

from secure_layered.channel import SystemSpec, sample_scenario, watt_to_dbm
from secure_layered.metrics import link_metrics, secrecy_floor
from secure_layered.schemes import (
    check_kkt,
    check_proposition1,
    solve_baseline_mrt,
    solve_baseline_single,
    solve_relaxation,
    solve_scheme1,
    solve_scheme2,
    verify_feasibility,
)

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
spec = SystemSpec.default()
s = sample_scenario(seed, spec)
print(f"default link: {spec.n_tx} antennas, {spec.n_layers} layers, {spec.n_eves} eavesdroppers")
print(f"noise {s.noise_power:.3e} W, |h|^2 = {np.linalg.norm(s.h) ** 2:.3e}\n")

# every scheme sees the same channel
relaxed = solve_relaxation(s, spec)
outcomes = {
    "Relaxed": relaxed,
    "Scheme1": solve_scheme1(s, spec),
    "Scheme2": solve_scheme2(s, spec, relaxed=relaxed),
    "BaselineSingle": solve_baseline_single(s, spec),
    "BaselineMrt": solve_baseline_mrt(s, spec),
}
print(f"{'scheme':15s} {'power [W]':>10s} {'[dBm]':>8s}  ranks    worst violation")
for name, out in outcomes.items():
    if not out.solved:
        print(f"{name:15s} {out.status}")
        continue
    viol = verify_feasibility(s, spec, out).max_violation
    print(f"{name:15s} {out.total_power:10.4f} {watt_to_dbm(out.total_power):8.3f}  "
          f"{str(out.rank_flags):8s} {viol:.1e}")

# the relaxation is the lower bound; when every W_i is rank one the beams are exact
print("\nrelaxed beam norms^2:", [f"{np.linalg.norm(w) ** 2:.4f}" for w in relaxed.w or []])
print(f"AN power: {np.trace(relaxed.V).real:.3e} W")

m = link_metrics(s, relaxed.W, relaxed.V)
print("\nSINR at the user  [dB]:", np.round(10 * np.log10(m.sinr_desired), 3))
print("targets           [dB]:", np.round(10 * np.log10(spec.gamma_req), 3))
print("eavesdroppers, layer 1:", np.round(10 * np.log10(m.sinr_eve[:, 0]), 3), "(cap -10 dB)")
print(f"layer-1 secrecy {m.secrecy[0]:.4f} bit/s/Hz, guaranteed floor {secrecy_floor(spec):.4f}")

# optimality certificate: duals rebuilt from the scalar multipliers alone
rep = check_kkt(relaxed.problem, relaxed.solution, s, spec)
p1 = check_proposition1(relaxed, rep)
print("\nlambda:", np.array2string(rep.lam, precision=4))
print("beta:  ", np.array2string(rep.beta, precision=3))
print(f"stationarity residual {rep.max_stationarity_residual:.1e}, "
      f"complementarity {rep.complementarity_residual:.1e}, gap {rep.gap:.1e}")
print("min eig of rebuilt duals:", {k: f"{v:.2e}" for k, v in rep.dual_min_eig.items()})
print(f"rank(W1) = {p1.rank_w1}; all beta zero: {p1.all_beta_zero}; consistent: {p1.consistent}")
