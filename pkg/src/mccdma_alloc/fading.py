"""Seeded channel-state realizations.

Realizations come from numpy's PCG64 bit generator seeded through
``SeedSequence``, so a (seed, key) pair fixes the gains on any platform.
"""

from __future__ import annotations

import math

import numpy as np

from .model import ChannelGains, SimConfig


def db_to_amplitude(x, convention: str = "amplitude"):
    """``10**(x/20)``; with ``convention="power"`` the dB value is read as ``10**(x/10)``."""
    div = 20.0 if convention == "amplitude" else 10.0
    out = np.power(10.0, np.asarray(x, dtype=np.float64) / div)
    return float(out) if out.ndim == 0 else out


def make_generator(seed: int, *key: int) -> np.random.Generator:
    """Independent stream for ``seed`` mixed with the integer ``key`` (trial, point, ...)."""
    if seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, key)])))


def sample_channel_gains(cfg: SimConfig, gen: np.random.Generator) -> ChannelGains:
    shape = (cfg.n_users, cfg.n_groups, cfg.subcarriers_per_group)
    if cfg.fading_distribution == "uniform_db":
        x = gen.uniform(cfg.fading_db_min, cfg.fading_db_max, size=shape)
        if cfg.fading_db_min == cfg.fading_db_max:
            # uniform(a, a) can still return a + tiny rounding; pin the degenerate range
            x = np.full(shape, float(cfg.fading_db_min))
        return ChannelGains(db_to_amplitude(x, cfg.db_convention))

    # Rayleigh amplitudes whose median sits at the midpoint of the dB range
    median = db_to_amplitude(0.5 * (cfg.fading_db_min + cfg.fading_db_max), cfg.db_convention)
    sigma = median / math.sqrt(2.0 * math.log(2.0))
    f = gen.rayleigh(sigma, size=shape)
    # rayleigh() can return exactly 0; keep f**-4 finite
    return ChannelGains(np.maximum(f, 1e-30))
