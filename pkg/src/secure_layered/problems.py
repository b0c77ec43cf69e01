"""Builders that turn a scenario into an :class:`~secure_layered.sdp.SdpProblem`.

SINR ratios are cleared of their (positive) denominators, so every row is a
linear trace form with the noise term moved to the right-hand side:

* ``C1_i``: ``Tr(H W_i) - G_i (sum_{j>i} Tr(H W_j) + Tr(H V)) >= G_i sigma2``
* ``C2_k``: ``Tr(G_k W_1) - T_k (sum_{j>=2} Tr(G_k W_j) + Tr(G_k V)) <= T_k sigma2``
* ``C3_n``: ``[V + sum_i W_i]_{nn} <= P_n``

Blocks are named ``W1..WL`` and ``V``; MRT power scalars are ``u1..uL``.
"""

from __future__ import annotations

import enum

import numpy as np

from .channel import Scenario, SystemSpec, gram
from .linalg import dominant_component
from .sdp import Constraint, SdpProblem

__all__ = [
    "ProblemKind",
    "build_relaxed",
    "build_suboptimal1",
    "build_baseline_single",
    "build_baseline_mrt",
    "gamma_single",
    "mrt_direction",
    "layer_names",
]


class ProblemKind(str, enum.Enum):
    RELAXED = "Relaxed"
    SUBOPTIMAL1 = "Suboptimal1"
    BASELINE_SINGLE = "BaselineSingleLayer"
    BASELINE_MRT = "BaselineMrt"


def layer_names(n_layers: int) -> list[str]:
    return [f"W{i + 1}" for i in range(n_layers)]


def gamma_single(spec: SystemSpec) -> float:
    """SINR a single layer needs to carry the sum rate of all layers."""
    if not spec.gamma_req:
        raise ValueError("no layers")
    return float(np.prod(1.0 + np.asarray(spec.gamma_req)) - 1.0)


def _check(s: Scenario, spec: SystemSpec) -> None:
    if s.n_tx != spec.n_tx:
        raise ValueError(f"scenario has {s.n_tx} antennas, spec expects {spec.n_tx}")
    if s.n_eves != spec.n_eves:
        raise ValueError(f"scenario has {s.n_eves} eavesdroppers, spec has {spec.n_eves} caps")


def _layered(s, spec, gammas, *, self_protect, info=None):
    """Rows shared by every builder.

    ``info`` maps a layer index to ``(variable, matrix)`` producing the trace
    term ``Tr(A W_i)``: a PSD block, or an MRT scalar whose coefficient is
    ``Tr(A w w^H)``.
    """
    n, L = spec.n_tx, len(gammas)
    H = gram(s.h)
    Gs = [gram(g) for g in s.g]
    sigma2 = s.noise_power

    def term(i, A):
        var, fixed = info(i)
        if fixed is None:
            return var, A
        return var, float(np.real(np.vdot(fixed, A @ fixed)))

    def row(name, sense, rhs, pieces):
        con = Constraint(name, sense, rhs)
        for var, coef in pieces:
            target = con.blocks if np.ndim(coef) else con.scalars
            target[var] = target.get(var, 0) + coef
        return con

    rows = []
    for i in range(L):
        g_i = gammas[i]
        pieces = [term(i, H)]
        pieces += [(var, -g_i * c) for var, c in (term(j, H) for j in range(i + 1, L))]
        pieces.append(("V", -g_i * H))
        rows.append(row(f"C1_{i + 1}", ">=", g_i * sigma2, pieces))
    for k, (G, t) in enumerate(zip(Gs, spec.gamma_tol)):
        pieces = [term(0, G)]
        if self_protect:
            pieces += [(var, -t * c) for var, c in (term(j, G) for j in range(1, L))]
        pieces.append(("V", -t * G))
        rows.append(row(f"C2_{k + 1}", "<=", t * sigma2, pieces))
    for a in range(n):
        psi = np.zeros((n, n), dtype=complex)
        psi[a, a] = 1.0
        pieces = [term(i, psi) for i in range(L)] + [("V", psi)]
        rows.append(row(f"C3_{a + 1}", "<=", spec.p_max[a], pieces))
    return rows


def _block_problem(s, spec, gammas, self_protect, kind):
    _check(s, spec)
    names = layer_names(len(gammas))
    rows = _layered(s, spec, gammas, self_protect=self_protect, info=lambda i: (names[i], None))
    blocks = [(b, spec.n_tx) for b in names] + [("V", spec.n_tx)]
    objective = {b: 1.0 for b, _ in blocks}
    return SdpProblem(blocks, [], objective, rows, tag=kind.value)


def build_relaxed(s: Scenario, spec: SystemSpec) -> SdpProblem:
    """Power minimization over ``W_1..W_L, V`` with the rank-one constraint dropped."""
    return _block_problem(s, spec, spec.gamma_req, True, ProblemKind.RELAXED)


def build_suboptimal1(s: Scenario, spec: SystemSpec) -> SdpProblem:
    """As :func:`build_relaxed` but the eavesdropper rows ignore the
    interference of layers 2..L (a stricter, rank-one friendly constraint)."""
    return _block_problem(s, spec, spec.gamma_req, False, ProblemKind.SUBOPTIMAL1)


def build_baseline_single(s: Scenario, spec: SystemSpec) -> SdpProblem:
    """Single-layer transmission at :func:`gamma_single` with the same caps."""
    return _block_problem(s, spec, (gamma_single(spec),), False, ProblemKind.BASELINE_SINGLE)


def mrt_direction(h) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if not np.any(h):
        raise ValueError("MRT direction of a zero channel is undefined")
    return dominant_component(gram(h))[1]


def build_baseline_mrt(s: Scenario, spec: SystemSpec) -> SdpProblem:
    """Layered transmission with every beam fixed to the MRT direction.

    Variables are the layer powers ``u_i >= 0`` and the full AN covariance.
    """
    _check(s, spec)
    w = mrt_direction(s.h)
    L = spec.n_layers
    us = [f"u{i + 1}" for i in range(L)]
    rows = _layered(s, spec, spec.gamma_req, self_protect=True,
                    info=lambda i: (us[i], w))
    objective = {u: 1.0 for u in us}
    objective["V"] = 1.0
    return SdpProblem([("V", spec.n_tx)], us, objective, rows, tag=ProblemKind.BASELINE_MRT.value)
