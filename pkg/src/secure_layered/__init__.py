"""Secure layered-video transmit beamforming with artificial noise.

Builds the multiuser MISO power-minimization problems, solves their SDP
relaxations with an embedded interior-point solver, audits optimality
certificates and runs Monte Carlo sweeps.
"""

from .channel import Scenario, SystemSpec, normalize_scenario, sample_scenario
from .harness import ExperimentConfig, SweepTable, TrialRecord, emit_csv, run_sweep, run_trial
from .metrics import link_metrics, secrecy_capacity, secrecy_floor
from .schemes import (
    AllocationOutcome,
    check_kkt,
    check_proposition1,
    extract_beamformers,
    solve_baseline_mrt,
    solve_baseline_single,
    solve_relaxation,
    solve_scheme1,
    solve_scheme2,
    verify_feasibility,
)
from .sdp import SdpProblem, SdpSolution, SolverOptions, Status, solve

__version__ = "0.1.0"
