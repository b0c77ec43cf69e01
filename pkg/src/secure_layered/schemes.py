"""Power-allocation schemes and their optimality audits.

``solve_relaxation`` gives the SDP bound, ``solve_scheme1`` the rank-one
friendly restriction, ``solve_scheme2`` the hybrid that keeps the relaxation
whenever it is already rank one. The two baselines are exposed the same way so
every scheme returns an :class:`AllocationOutcome`.

``check_kkt`` rebuilds the dual matrices of the relaxed problem from the
scalar multipliers alone (the closed-form stationarity conditions) and
audits them against the solver output; ``check_proposition1`` turns that
audit into the two rank statements.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import Scenario, SystemSpec, gram, normalize_scenario
from .linalg import DEFAULT_RANK_TOL, dominant_component, min_eig, numerical_rank
from .metrics import power_accounting, sinr_eve, sinr_layer, sinr_layer_vec
from .problems import (
    build_baseline_mrt,
    build_baseline_single,
    build_relaxed,
    build_suboptimal1,
    gamma_single,
    layer_names,
    mrt_direction,
)
from .sdp import SdpProblem, SdpSolution, SolverOptions, Status, solve

__all__ = [
    "SOLVED",
    "INFEASIBLE",
    "FAILED",
    "SCHEMES",
    "AllocationOutcome",
    "FeasibilityReport",
    "KktReport",
    "Proposition1Report",
    "solve_relaxation",
    "solve_scheme1",
    "solve_scheme2",
    "solve_baseline_single",
    "solve_baseline_mrt",
    "extract_beamformers",
    "verify_feasibility",
    "check_kkt",
    "check_proposition1",
]

SOLVED, INFEASIBLE, FAILED = "Solved", "Infeasible", "Failed"
SCHEMES = ("Relaxed", "Scheme1", "Scheme2", "BaselineSingle", "BaselineMrt")


@dataclass
class AllocationOutcome:
    """Result of one scheme on one scenario (powers in watts).

    ``w`` holds the beam vectors only when every ``W_i`` is numerically rank
    one. ``problem``/``solution`` keep the solver exchange for auditing.
    """

    kind: str
    status: str
    W: list[np.ndarray]
    V: np.ndarray
    w: list[np.ndarray] | None
    total_power: float
    per_antenna_power: np.ndarray
    rank_flags: list[int]
    global_optimal: bool
    message: str = ""
    problem: SdpProblem | None = field(default=None, repr=False)
    solution: SdpSolution | None = field(default=None, repr=False)

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


def _status(sol: SdpSolution) -> str:
    if sol.status is Status.OPTIMAL:
        return SOLVED
    if sol.status is Status.INFEASIBLE:
        return INFEASIBLE
    return FAILED


def _outcome(kind, p, sol, W, V, *, global_optimal=False, rank_tol=DEFAULT_RANK_TOL):
    status = _status(sol)
    if status != SOLVED:
        n = V.shape[0]
        nan = np.full((n, n), np.nan, dtype=complex)
        return AllocationOutcome(kind, status, [nan] * len(W), nan, None, float("nan"),
                                 np.full(n, np.nan), [], False, sol.status.value, p, sol)
    total, per_antenna = power_accounting(W, V)
    ranks = [numerical_rank(Wi, rank_tol) for Wi in W]
    w = extract_beamformers(W, rank_tol) if all(r == 1 for r in ranks) else None
    return AllocationOutcome(kind, status, W, V, w, total, per_antenna, ranks,
                             global_optimal, "", p, sol)


def _solve_blocks(kind, builder, s, spec, options, global_optimal=False):
    s = normalize_scenario(s)
    p = builder(s, spec)
    sol = solve(p, options)
    names = [b for b, _ in p.blocks if b != "V"]
    return _outcome(kind, p, sol, [sol.blocks[b] for b in names], sol.blocks["V"],
                    global_optimal=global_optimal)


def solve_relaxation(s: Scenario, spec: SystemSpec, options: SolverOptions | None = None) -> AllocationOutcome:
    """Relaxed SDP: its power lower-bounds every feasible beamforming design."""
    return _solve_blocks("Relaxed", build_relaxed, s, spec, options, global_optimal=True)


def solve_scheme1(s: Scenario, spec: SystemSpec, options: SolverOptions | None = None) -> AllocationOutcome:
    """Suboptimal scheme 1. A rank above one is reported as ``Failed``."""
    out = _solve_blocks("Scheme1", build_suboptimal1, s, spec, options)
    if out.solved and any(r != 1 for r in out.rank_flags):
        out.status = FAILED
        out.message = f"non rank-one solution, ranks {out.rank_flags}"
    return out


def solve_scheme2(
    s: Scenario,
    spec: SystemSpec,
    options: SolverOptions | None = None,
    *,
    relaxed: AllocationOutcome | None = None,
    scheme1: AllocationOutcome | None = None,
    parallel: bool = False,
) -> AllocationOutcome:
    """Hybrid scheme: the relaxation when it is rank one, scheme 1 otherwise.

    Already computed ``relaxed``/``scheme1`` outcomes are reused. Scheme 1 is
    only solved when needed unless ``parallel`` asks for both at once.
    """
    if parallel and relaxed is None and scheme1 is None:
        with concurrent.futures.ThreadPoolExecutor(max_workers=2) as pool:
            f_relax = pool.submit(solve_relaxation, s, spec, options)
            f_s1 = pool.submit(solve_scheme1, s, spec, options)
            relaxed, scheme1 = f_relax.result(), f_s1.result()
    if relaxed is None:
        relaxed = solve_relaxation(s, spec, options)
    if relaxed.solved and all(r == 1 for r in relaxed.rank_flags):
        return replace(relaxed, kind="Scheme2", global_optimal=True)
    if scheme1 is None:
        scheme1 = solve_scheme1(s, spec, options)
    out = replace(scheme1, kind="Scheme2", global_optimal=False)
    if relaxed.status == FAILED and not scheme1.solved:
        out.status = FAILED
        out.message = "relaxation and scheme 1 both failed"
    return out


def solve_baseline_single(s: Scenario, spec: SystemSpec, options: SolverOptions | None = None) -> AllocationOutcome:
    """Baseline 1: one layer carrying the whole rate."""
    return _solve_blocks("BaselineSingle", build_baseline_single, s, spec, options)


def solve_baseline_mrt(s: Scenario, spec: SystemSpec, options: SolverOptions | None = None) -> AllocationOutcome:
    """Baseline 2: every layer beamformed along the MRT direction."""
    s = normalize_scenario(s)
    p = build_baseline_mrt(s, spec)
    sol = solve(p, options)
    d = mrt_direction(s.h)
    D = gram(d)
    W = [sol.scalars[f"u{i + 1}"] * D for i in range(spec.n_layers)]
    return _outcome("BaselineMrt", p, sol, W, sol.blocks["V"])


def extract_beamformers(W, rank_tol: float = DEFAULT_RANK_TOL) -> list[np.ndarray]:
    """Beam vectors ``sqrt(lambda_1) u_1`` of rank-one covariance matrices."""
    out = []
    for i, Wi in enumerate(W):
        r = numerical_rank(Wi, rank_tol)
        if r != 1:
            raise ValueError(f"layer {i + 1} has numerical rank {r}, expected 1")
        lam, u = dominant_component(Wi)
        out.append(np.sqrt(lam) * u)
    return out


# --------------------------------------------------------------------------
# audits


@dataclass
class FeasibilityReport:
    """Relative constraint violations of an outcome (zero when satisfied)."""

    c1: np.ndarray
    c2: np.ndarray
    c3: np.ndarray
    c4: float
    c5: np.ndarray
    sinr_desired: np.ndarray
    sinr_eve_layer1: np.ndarray

    @property
    def max_violation(self) -> float:
        parts = [self.c1, self.c2, self.c3, [self.c4], self.c5]
        return float(max((np.max(p) for p in parts if len(p)), default=0.0))


def verify_feasibility(s: Scenario, spec: SystemSpec, out: AllocationOutcome) -> FeasibilityReport:
    """Recompute every constraint of the beamforming problem for ``out``.

    SINRs come from the beam vectors when available, otherwise from the
    covariance matrices.
    """
    if not out.solved:
        raise ValueError(f"outcome status is {out.status}")
    sigma2 = s.noise_power
    W, V = out.W, out.V
    L = len(W)
    targets = (gamma_single(spec),) if out.kind == "BaselineSingle" else spec.gamma_req
    if out.w is not None:
        desired = np.array([sinr_layer_vec(s.h, out.w, V, sigma2, i) for i in range(1, L + 1)])
    else:
        desired = np.array([sinr_layer(s.h, W, V, sigma2, i) for i in range(1, L + 1)])
    eve = np.array([sinr_eve(g, W, V, sigma2, 1) for g in s.g])
    c1 = np.maximum(0.0, (np.asarray(targets) - desired) / np.asarray(targets))
    tol = np.asarray(spec.gamma_tol)
    c2 = np.maximum(0.0, (eve - tol) / tol) if len(eve) else np.zeros(0)
    total, per_antenna = power_accounting(W, V)
    p_max = np.asarray(spec.p_max)
    c3 = np.maximum(0.0, (per_antenna - p_max) / p_max)
    scale = max(total, 1e-12)
    c4 = max(0.0, -min_eig(V)) / scale
    c5 = np.array([max(0.0, -min_eig(Wi)) / scale for Wi in W])
    return FeasibilityReport(c1, c2, c3, c4, c5, desired, eve)


@dataclass
class KktReport:
    """Multipliers and residuals of the relaxed problem's optimality system.

    Multipliers use the scaling of the Lagrangian in which each SINR row is
    divided by its target: ``lambda_i`` and ``beta_k`` equal the solver duals
    of the cleared rows times ``Gamma_req_i`` and ``Gamma_tol_k``.
    """

    lam: np.ndarray
    beta: np.ndarray
    delta: np.ndarray
    Y: list[np.ndarray]
    Z: np.ndarray
    stationarity_residual: dict[str, float]
    complementarity: dict[str, float]
    dual_min_eig: dict[str, float]
    c1_activity: np.ndarray
    gap: float

    @property
    def complementarity_residual(self) -> float:
        return max(self.complementarity.values(), default=0.0)

    @property
    def max_stationarity_residual(self) -> float:
        return max(self.stationarity_residual.values(), default=0.0)

    @property
    def max_residual(self) -> float:
        return max(self.max_stationarity_residual, self.complementarity_residual,
                   float(np.max(self.c1_activity, initial=0.0)))


def _multipliers(sol: SdpSolution, spec: SystemSpec):
    try:
        mu = np.array([sol.duals[f"C1_{i + 1}"] for i in range(spec.n_layers)])
        nu = np.array([sol.duals[f"C2_{k + 1}"] for k in range(spec.n_eves)])
        delta = np.array([sol.duals[f"C3_{n + 1}"] for n in range(spec.n_tx)])
    except KeyError as exc:
        raise ValueError(f"solution lacks dual for row {exc.args[0]}") from None
    if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(nu)) and np.all(np.isfinite(delta))):
        raise ValueError("solution duals are not finite")
    return mu * np.asarray(spec.gamma_req), nu * np.asarray(spec.gamma_tol), delta


def check_kkt(p: SdpProblem, sol: SdpSolution, s: Scenario, spec: SystemSpec) -> KktReport:
    """Audit an optimal relaxed solution against its KKT conditions.

    The dual matrices are rebuilt from the multipliers::

        Y_1 = U + sum_k beta_k G_k / Gtol_k - lambda_1 / Greq_1 H
        Y_i = U - sum_k beta_k G_k + (sum_{j<i} lambda_j - lambda_i / Greq_i) H
        Z   = U + (sum_i lambda_i) H - sum_k beta_k G_k

    with ``U = I + diag(delta)``; they are compared with the solver's dual
    slacks (stationarity), checked for PSD-ness and for ``Tr(Y_i W_i) = 0``.
    """
    if sol.status is not Status.OPTIMAL:
        raise ValueError(f"solution status is {sol.status.value}")
    s = normalize_scenario(s)
    lam, beta, delta = _multipliers(sol, spec)
    L = spec.n_layers
    H = gram(s.h)
    Gs = [gram(g) for g in s.g]
    U = np.eye(spec.n_tx) + np.diag(delta)
    G_tol = sum((b * G / t for b, G, t in zip(beta, Gs, spec.gamma_tol)), np.zeros_like(H))
    G_sum = sum((b * G for b, G in zip(beta, Gs)), np.zeros_like(H))
    Y = [U + G_tol - lam[0] / spec.gamma_req[0] * H]
    for i in range(1, L):
        Y.append(U - G_sum + (lam[:i].sum() - lam[i] / spec.gamma_req[i]) * H)
    Z = U + lam.sum() * H - G_sum

    names = layer_names(L) + ["V"]
    duals = Y + [Z]
    stationarity, comp, mins = {}, {}, {}
    for name, D in zip(names, duals):
        X = sol.blocks[name]
        stationarity[name] = float(np.linalg.norm(D - sol.dual_blocks[name]))
        comp[name] = abs(float(np.real(np.sum(D * X.T))))
        mins[name] = min_eig(D)
    W = [sol.blocks[b] for b in layer_names(L)]
    V = sol.blocks["V"]
    sinr = np.array([sinr_layer(s.h, W, V, s.noise_power, i) for i in range(1, L + 1)])
    activity = np.abs(sinr - np.asarray(spec.gamma_req)) / np.asarray(spec.gamma_req)
    return KktReport(lam, beta, delta, Y, Z, stationarity, comp, mins, activity, sol.gap)


@dataclass
class Proposition1Report:
    rank_w1: int
    all_beta_zero: bool
    higher_ranks: list[int]
    consistent: bool


def check_proposition1(out: AllocationOutcome, report: KktReport, beta_tol: float = 1e-6) -> Proposition1Report:
    """Check the rank statements: ``W_1`` is rank one, and so are the other
    layers whenever every eavesdropper multiplier vanishes."""
    if not out.solved:
        raise ValueError(f"outcome status is {out.status}")
    rank_w1 = out.rank_flags[0]
    all_beta_zero = bool(np.max(report.beta, initial=0.0) <= beta_tol)
    higher = list(out.rank_flags[1:])
    consistent = rank_w1 == 1 and (not all_beta_zero or all(r == 1 for r in higher))
    return Proposition1Report(rank_w1, all_beta_zero, higher, consistent)
