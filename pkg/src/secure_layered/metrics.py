"""SINR, capacity and secrecy figures for a layered transmission.

All functions take beamforming *matrices* ``W`` so that relaxed solutions of
rank above one stay measurable; ``*_vec`` variants take beam vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import Scenario, SystemSpec

__all__ = [
    "LinkMetrics",
    "sinr_layer",
    "sinr_eve",
    "sinr_layer_vec",
    "capacity",
    "secrecy_capacity",
    "secrecy_floor",
    "power_accounting",
    "link_metrics",
]


def _quad(v, A) -> float:
    """``v^H A v`` which equals ``Tr(v v^H A)``."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    return float(np.real(v.conj() @ np.asarray(A) @ v))


def _sinr(v, W: Sequence[np.ndarray], V, sigma2: float, i: int) -> float:
    if not 1 <= i <= len(W):
        raise ValueError(f"layer index {i} outside 1..{len(W)}")
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    signal = _quad(v, W[i - 1])
    interference = sum(_quad(v, Wj) for Wj in W[i:])
    return signal / (interference + _quad(v, V) + sigma2)


def sinr_layer(h, W, V, sigma2: float, i: int) -> float:
    """SINR of layer ``i`` (1-based) at the desired receiver.

    Layers ``j > i`` are still undecoded and count as interference, together
    with the artificial noise and the receiver noise.
    """
    return _sinr(h, W, V, sigma2, i)


def sinr_eve(g, W, V, sigma2: float, i: int) -> float:
    """SINR of layer ``i`` at an eavesdropper with channel ``g``."""
    return _sinr(g, W, V, sigma2, i)


def sinr_layer_vec(h, w: Sequence[np.ndarray], V, sigma2: float, i: int) -> float:
    """Vector form ``|h^H w_i|^2 / (sum_{j>i} |h^H w_j|^2 + h^H V h + sigma2)``."""
    h = np.asarray(h, dtype=complex)
    gains = [abs(np.vdot(h, wi)) ** 2 for wi in w]
    return gains[i - 1] / (sum(gains[i:]) + _quad(h, V) + sigma2)


def capacity(sinr) -> np.ndarray:
    return np.log2(1.0 + np.asarray(sinr, dtype=float))


def secrecy_capacity(sinr_desired: float, sinr_eves: Sequence[float]) -> float:
    """``[log2(1 + sinr_desired) - max_k log2(1 + sinr_eves[k])]^+``.

    With no eavesdroppers this is the plain capacity.
    """
    c = float(np.log2(1.0 + sinr_desired))
    if len(sinr_eves) == 0:
        return c
    return max(0.0, c - float(np.log2(1.0 + max(sinr_eves))))


def secrecy_floor(spec: SystemSpec) -> float:
    """Layer-1 secrecy capacity guaranteed by meeting the SINR target and caps."""
    if not spec.gamma_tol:
        raise ValueError("secrecy floor needs at least one eavesdropper cap")
    return float(np.log2(1.0 + spec.gamma_req[0]) - np.log2(1.0 + max(spec.gamma_tol)))


def power_accounting(W: Sequence[np.ndarray], V) -> tuple[float, np.ndarray]:
    """Total radiated power and the per-antenna powers (diagonal of the sum)."""
    V = np.asarray(V)
    total_cov = V + sum((np.asarray(Wi) for Wi in W), np.zeros_like(V))
    per_antenna = np.real(np.diag(total_cov)).copy()
    total = float(sum(np.real(np.trace(Wi)) for Wi in W) + np.real(np.trace(V)))
    return total, per_antenna


@dataclass
class LinkMetrics:
    sinr_desired: np.ndarray  # (L,)
    sinr_eve: np.ndarray  # (K-1, L)
    capacity: np.ndarray
    secrecy: np.ndarray


def link_metrics(s: Scenario, W: Sequence[np.ndarray], V) -> LinkMetrics:
    sigma2 = s.noise_power
    L = len(W)
    desired = np.array([sinr_layer(s.h, W, V, sigma2, i) for i in range(1, L + 1)])
    eve = np.array(
        [[sinr_eve(g, W, V, sigma2, i) for i in range(1, L + 1)] for g in s.g]
    ).reshape(len(s.g), L)
    secrecy = np.array([secrecy_capacity(desired[i], eve[:, i]) for i in range(L)])
    return LinkMetrics(desired, eve, capacity(desired), secrecy)
