"""Fading scenarios: system parameters, path loss and Rayleigh channel draws.

Powers are carried in watts throughout; dB/dBm only appear in the helpers
below and at the command-line boundary.

Random stream layout
--------------------
``sample_scenario(seed, ...)`` derives one child stream per channel vector
from ``numpy.random.SeedSequence(seed)``: spawn key ``(0,)`` feeds the desired
channel ``h`` and ``(k + 1,)`` feeds eavesdropper ``k``.  Entries are drawn as
interleaved (real, imag) standard normals, so a scenario with more antennas or
more eavesdroppers extends, rather than replaces, a smaller one drawn from the
same seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

__all__ = [
    "SystemSpec",
    "Scenario",
    "db_to_linear",
    "linear_to_db",
    "dbm_to_watt",
    "watt_to_dbm",
    "path_loss_db",
    "path_gain",
    "sample_scenario",
    "normalize_scenario",
    "gram",
]


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


def dbm_to_watt(dbm):
    return 10.0 ** ((np.asarray(dbm, dtype=float) - 30.0) / 10.0)


def watt_to_dbm(w):
    return 10.0 * np.log10(w) + 30.0


def path_loss_db(d: float) -> float:
    """Path loss ``34.53 + 38 log10(d)`` dB for a receiver ``d`` meters away."""
    if not d >= 1.0:
        raise ValueError(f"path loss model needs d >= 1 m, got {d}")
    return 34.53 + 38.0 * np.log10(d)


def path_gain(d: float) -> float:
    return float(10.0 ** (-path_loss_db(d) / 10.0))


@dataclass(frozen=True)
class SystemSpec:
    """Static link parameters; SINRs linear, powers in watts, distances in meters.

    ``gamma_tol`` has one cap per eavesdropper. ``eve_distance_m`` is either a
    single distance shared by all eavesdroppers or one distance per eavesdropper.
    """

    n_tx: int
    gamma_req: tuple[float, ...]
    gamma_tol: tuple[float, ...]
    p_max: tuple[float, ...]
    noise_power: float
    user_distance_m: float = 50.0
    eve_distance_m: float | tuple[float, ...] = 30.0

    def __post_init__(self):
        object.__setattr__(self, "gamma_req", tuple(float(v) for v in np.atleast_1d(self.gamma_req)))
        object.__setattr__(self, "gamma_tol", tuple(float(v) for v in np.atleast_1d(self.gamma_tol)))
        p_max = np.atleast_1d(np.asarray(self.p_max, dtype=float))
        if p_max.size == 1:
            p_max = np.full(self.n_tx, p_max[0])
        object.__setattr__(self, "p_max", tuple(float(v) for v in p_max))
        if not np.isscalar(self.eve_distance_m):
            object.__setattr__(self, "eve_distance_m", tuple(float(v) for v in self.eve_distance_m))
        if self.n_tx < 1:
            raise ValueError("n_tx must be positive")
        if not self.gamma_req or min(self.gamma_req) <= 0:
            raise ValueError("every layer needs a positive SINR target")
        if self.gamma_tol and min(self.gamma_tol) <= 0:
            raise ValueError("eavesdropper SINR caps must be positive")
        if len(self.p_max) != self.n_tx or min(self.p_max) <= 0:
            raise ValueError("p_max needs n_tx positive entries")
        if self.noise_power <= 0:
            raise ValueError("noise_power must be positive")

    @property
    def n_layers(self) -> int:
        return len(self.gamma_req)

    @property
    def n_eves(self) -> int:
        return len(self.gamma_tol)

    @classmethod
    def default(cls, n_tx: int = 4, n_eves: int = 3) -> "SystemSpec":
        """Default simulation parameters: 3 layers at [6, 9, 12] dB, caps of
        -10 dB, 43 dBm per antenna, -95 dBm noise, user at 50 m, eavesdroppers
        at 30 m."""
        return cls(
            n_tx=n_tx,
            gamma_req=tuple(db_to_linear([6.0, 9.0, 12.0])),
            gamma_tol=(float(db_to_linear(-10.0)),) * n_eves,
            p_max=(float(dbm_to_watt(43.0)),) * n_tx,
            noise_power=float(dbm_to_watt(-95.0)),
        )

    def with_eves(self, n_eves: int) -> "SystemSpec":
        """Same spec with ``n_eves`` eavesdroppers sharing the first cap."""
        if not self.gamma_tol:
            raise ValueError("no eavesdropper cap to replicate")
        return replace(self, gamma_tol=(self.gamma_tol[0],) * n_eves)

    def with_antennas(self, n_tx: int) -> "SystemSpec":
        return replace(self, n_tx=n_tx, p_max=(self.p_max[0],) * n_tx)

    def eve_distances(self, n_eves: int) -> np.ndarray:
        d = np.atleast_1d(np.asarray(self.eve_distance_m, dtype=float))
        if d.size == 1:
            return np.full(n_eves, d[0])
        if d.size < n_eves:
            raise ValueError(f"{d.size} eavesdropper distances for {n_eves} eavesdroppers")
        return d[:n_eves]


@dataclass(frozen=True)
class Scenario:
    """One fading realization: desired channel, eavesdropper channels, noise power."""

    h: np.ndarray
    g: tuple[np.ndarray, ...] = field(default_factory=tuple)
    noise_power: float = 1.0

    def __post_init__(self):
        h = np.asarray(self.h, dtype=complex).reshape(-1)
        g = tuple(np.asarray(v, dtype=complex).reshape(-1) for v in self.g)
        if any(v.shape != h.shape for v in g):
            raise ValueError("eavesdropper channels must match the desired channel length")
        if self.noise_power <= 0:
            raise ValueError("noise_power must be positive")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)

    @property
    def n_tx(self) -> int:
        return self.h.shape[0]

    @property
    def n_eves(self) -> int:
        return len(self.g)


def _rayleigh(seq: np.random.SeedSequence, n: int, gain: float) -> np.ndarray:
    z = np.random.default_rng(seq).standard_normal(2 * n)
    return np.sqrt(gain / 2.0) * (z[0::2] + 1j * z[1::2])


def sample_scenario(seed, spec: SystemSpec, n_eves: int | None = None) -> Scenario:
    """Draw a Rayleigh-faded scenario; see the module doc for the stream layout.

    ``seed`` may be an int or a ``SeedSequence``; ``n_eves`` defaults to the
    number of caps in ``spec``.
    """
    if n_eves is None:
        n_eves = spec.n_eves
    if n_eves < 0:
        raise ValueError("n_eves must be nonnegative")
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)

    def child(i):
        return np.random.SeedSequence(root.entropy, spawn_key=tuple(root.spawn_key) + (i,))

    h = _rayleigh(child(0), spec.n_tx, path_gain(spec.user_distance_m))
    dists = spec.eve_distances(n_eves)
    g = tuple(_rayleigh(child(k + 1), spec.n_tx, path_gain(d)) for k, d in enumerate(dists))
    return Scenario(h, g, spec.noise_power)


def normalize_scenario(s: Scenario) -> Scenario:
    """Rescale channels by ``1/sqrt(noise)`` so the noise power becomes one.

    Every SINR is unchanged for fixed beamformers and AN covariance.
    """
    if s.noise_power == 1.0:
        return s
    k = 1.0 / np.sqrt(s.noise_power)
    return Scenario(s.h * k, tuple(v * k for v in s.g), 1.0)


def gram(v) -> np.ndarray:
    """Outer product ``v v^H``."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size == 0:
        raise ValueError("empty vector")
    return np.outer(v, v.conj())
