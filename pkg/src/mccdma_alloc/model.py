"""Physical-layer math for downlink MC-CDMA group allocation.

Fading gains are real positive amplitudes indexed ``[user, group, subcarrier]``.
Power matrices are indexed ``[group, user]``. All power arithmetic is float64.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np


class ModelError(ValueError):
    """Raised for out-of-domain physical inputs."""


class CombiningScheme(str, enum.Enum):
    MRC = "mrc"
    EGC = "egc"
    ZFC = "zfc"

    @classmethod
    def parse(cls, value: "str | CombiningScheme") -> "CombiningScheme":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ModelError(f"unknown combining scheme {value!r}") from None


@dataclass(frozen=True)
class SimConfig:
    """Simulation environment. Defaults are the 8-user, 8-group, 128-channel setup."""

    n_channels: int = 128
    n_groups: int = 8
    n_users: int = 8
    ber: float = 1e-2
    noise_psd: float = 0.16  # W/Hz
    fading_db_min: float = 0.0
    fading_db_max: float = 12.0
    fading_distribution: str = "uniform_db"  # "uniform_db" | "rayleigh"
    db_convention: str = "amplitude"  # "amplitude" (x/20) | "power" (x/10)
    beta: float = field(init=False)

    def __post_init__(self):
        for name in ("n_channels", "n_groups", "n_users"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ModelError(f"{name} must be a positive integer, got {v!r}")
        if self.n_channels % self.n_groups:
            raise ModelError(
                f"n_channels={self.n_channels} is not divisible by n_groups={self.n_groups}"
            )
        if not (self.noise_psd > 0 and math.isfinite(self.noise_psd)):
            raise ModelError(f"noise_psd must be positive and finite, got {self.noise_psd!r}")
        if not (math.isfinite(self.fading_db_min) and math.isfinite(self.fading_db_max)):
            raise ModelError("fading bounds must be finite")
        if self.fading_db_min > self.fading_db_max:
            raise ModelError(
                f"fading_db_min={self.fading_db_min} exceeds fading_db_max={self.fading_db_max}"
            )
        if self.fading_distribution not in ("uniform_db", "rayleigh"):
            raise ModelError(f"unknown fading_distribution {self.fading_distribution!r}")
        if self.db_convention not in ("amplitude", "power"):
            raise ModelError(f"unknown db_convention {self.db_convention!r}")
        object.__setattr__(self, "beta", target_sinr(self.ber))

    @property
    def subcarriers_per_group(self) -> int:
        return self.n_channels // self.n_groups


@dataclass(frozen=True)
class ChannelGains:
    gains: np.ndarray  # (U, G, S)

    def __post_init__(self):
        g = np.asarray(self.gains, dtype=np.float64)
        if g.ndim != 3 or 0 in g.shape:
            raise ModelError(f"gains must be a non-empty U x G x S array, got shape {g.shape}")
        if not np.all(np.isfinite(g)) or np.any(g <= 0):
            raise ModelError("gains must be strictly positive and finite")
        object.__setattr__(self, "gains", g)

    @property
    def n_users(self) -> int:
        return self.gains.shape[0]

    @property
    def n_groups(self) -> int:
        return self.gains.shape[1]

    @property
    def n_subcarriers(self) -> int:
        return self.gains.shape[2]

    def scaled(self, alpha: float) -> "ChannelGains":
        return ChannelGains(self.gains * alpha)


@dataclass(frozen=True)
class PowerMatrix:
    p: np.ndarray  # (G, U), watts per code channel
    scheme: CombiningScheme | None = None
    beta: float | None = None
    noise_psd: float | None = None

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        if p.ndim != 2 or 0 in p.shape:
            raise ModelError(f"power matrix must be a non-empty G x U array, got shape {p.shape}")
        if not np.all(np.isfinite(p)) or np.any(p <= 0):
            raise ModelError("power matrix entries must be strictly positive and finite")
        object.__setattr__(self, "p", p)

    @property
    def n_groups(self) -> int:
        return self.p.shape[0]

    @property
    def n_users(self) -> int:
        return self.p.shape[1]


def target_sinr(ber: float) -> float:
    """SINR target ``-2 ln(5 ber)`` for a BER target in (0, 0.2)."""
    if not (0.0 < ber < 0.2):
        raise ModelError(f"ber must lie in (0, 0.2) for a positive SINR target, got {ber!r}")
    beta = -2.0 * math.log(5.0 * ber)
    if not beta > 0:
        raise ModelError(f"ber={ber!r} gives a non-positive SINR target")
    return beta


def _check_gains(f) -> np.ndarray:
    f = np.asarray(f, dtype=np.float64)
    if f.ndim != 1 or f.size == 0:
        raise ModelError("gain vector must be 1-D and non-empty")
    if not np.all(np.isfinite(f)) or np.any(f <= 0):
        raise ModelError("gains must be strictly positive and finite")
    return f


def combining_weights(f, scheme) -> np.ndarray:
    """Frequency-domain combining weights for one group's subcarriers."""
    f = _check_gains(f)
    scheme = CombiningScheme.parse(scheme)
    if scheme is CombiningScheme.MRC:
        return f.copy()
    if scheme is CombiningScheme.EGC:
        return np.ones_like(f)
    return 1.0 / f


def _seqsum(x: np.ndarray) -> np.ndarray:
    # strict left-to-right accumulation over the last axis (np.sum is pairwise)
    return np.cumsum(x, axis=-1)[..., -1]


def _closed_form(f: np.ndarray, scheme: CombiningScheme) -> np.ndarray:
    s = f.shape[-1]
    if scheme is CombiningScheme.MRC:
        return _seqsum(f**2) * _seqsum(f**-4.0) / (s * s)
    # EGC and ZFC share one expression so their outputs are bit-identical.
    return _seqsum(f**-2.0) / s


def required_power(f, scheme, beta: float, noise_psd: float) -> float:
    """Transmit power one code channel needs to reach ``beta`` after combining."""
    f = _check_gains(f)
    scheme = CombiningScheme.parse(scheme)
    if not (beta > 0 and math.isfinite(beta)):
        raise ModelError(f"beta must be positive and finite, got {beta!r}")
    if not (noise_psd > 0 and math.isfinite(noise_psd)):
        raise ModelError(f"noise_psd must be positive and finite, got {noise_psd!r}")
    with np.errstate(over="ignore"):
        p = float(beta * noise_psd * _closed_form(f, scheme))
    if not math.isfinite(p):
        raise OverflowError("required power overflowed to a non-finite value")
    return p


def required_power_general(f, weights, beta: float, noise_psd: float) -> float:
    """Evaluate ``beta N0 S^-2 sum(w^2) sum((w f)^-2)`` for arbitrary weights."""
    f = _check_gains(f)
    w = np.asarray(weights, dtype=np.float64)
    s = f.size
    return float(beta * noise_psd * _seqsum(w**2) * _seqsum((w * f) ** -2.0) / (s * s))


def build_power_matrix(gains: ChannelGains, scheme, beta: float, noise_psd: float) -> PowerMatrix:
    scheme = CombiningScheme.parse(scheme)
    if not (beta > 0 and math.isfinite(beta)):
        raise ModelError(f"beta must be positive and finite, got {beta!r}")
    if not (noise_psd > 0 and math.isfinite(noise_psd)):
        raise ModelError(f"noise_psd must be positive and finite, got {noise_psd!r}")
    with np.errstate(over="ignore"):
        p = beta * noise_psd * _closed_form(gains.gains, scheme)  # (U, G)
    bad = np.argwhere(~np.isfinite(p))
    if bad.size:
        u, g = bad[0]
        raise OverflowError(f"required power at group {g}, user {u} is not finite")
    return PowerMatrix(np.ascontiguousarray(p.T), scheme, beta, noise_psd)
