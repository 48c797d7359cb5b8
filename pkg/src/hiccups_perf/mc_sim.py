"""Slotted Monte Carlo simulator of saturated stations.

Each station literally executes the backoff state machine: counters
decrement on idle epochs, freeze while the channel is busy (an emergent
behavior, not a coin flip with the model's p_coll) and transmit at zero.
That makes the simulator an independent check of the analytical model.

Epochs are whole channel states (idle slot, success, collision, data
error), so throughput estimation matches the model's renewal structure
without microsecond ticks.

The epoch loop runs on a compiled Cython kernel when available and falls
back to a bit-identical pure-Python kernel otherwise; see
:func:`backend`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _sim_fallback
from ._sim_fallback import MASK64, splitmix64
from .saturation_model import (ChannelStateProbs, NetworkParams,
                               baseline_state_durations, state_durations)

try:
    from . import _sim_core

    _KERNEL = _sim_core.run_epochs
    _BACKEND = "cython"
except ImportError:  # extension not built
    _KERNEL = _sim_fallback.run_epochs
    _BACKEND = "python"

MODES = ("hiccups", "baseline")
MIN_WARMUP = 10_000


def backend() -> str:
    """Name of the active simulation kernel: ``cython`` or ``python``."""
    return _BACKEND


def default_warmup(slots: int) -> int:
    """Default warmup: 1% of the run, at least ``MIN_WARMUP`` epochs."""
    return max(MIN_WARMUP, slots // 100)


@dataclass(frozen=True)
class SimConfig:
    """One simulation setup.

    ``slots`` counts channel-state epochs; the first ``warmup_slots`` of
    them are discarded before measuring. ``seed`` is a 64-bit unsigned
    value; the same seed always reproduces the same result.
    ``error_feedback`` only affects baseline mode and mirrors the
    same-named option of the analytical baseline solver.
    """

    net: NetworkParams
    mode: str
    slots: int
    seed: int
    warmup_slots: int | None = None
    error_feedback: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.slots <= 0:
            raise ValueError(f"slots must be > 0, got {self.slots}")
        warmup = self.warmup()
        if not 0 <= warmup < self.slots:
            raise ValueError(
                f"need slots > warmup_slots >= 0, got slots={self.slots} "
                f"warmup={warmup} (pass warmup_slots explicitly for short runs)")

    def warmup(self) -> int:
        return (default_warmup(self.slots) if self.warmup_slots is None
                else self.warmup_slots)


@dataclass(frozen=True)
class SimResult:
    """Monte Carlo estimates with between-replication standard errors.

    ``tau_hat`` is transmission attempts per station per epoch,
    ``p_coll_hat`` the fraction of attempts that collided,
    ``state_freqs`` the empirical channel-state distribution and
    ``s_hat_mbps`` payload bits per microsecond of channel time. Standard
    errors are NaN for a single replication.
    """

    tau_hat: float
    p_coll_hat: float
    state_freqs: ChannelStateProbs
    s_hat_mbps: float
    tau_hat_stderr: float
    p_coll_hat_stderr: float
    s_hat_stderr: float
    state_freq_stderrs: tuple[float, float, float, float]
    replications: int

    def __post_init__(self):
        for name in ("tau_hat", "s_hat_mbps"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} is not finite")


def stream_seed(seed: int, replication: int) -> int:
    """Seed of one replication's RNG stream.

    Replication ``r`` uses the r-th output of a splitmix64 sequence
    started at the user seed, so streams are statistically independent
    and replication 0 is the plain :func:`simulate` stream.
    """
    return splitmix64((seed + (replication + 1) * _sim_fallback.GAMMA) & MASK64)


def _durations(config: SimConfig):
    net = config.net
    if config.mode == "hiccups":
        return state_durations(net.profile, net.frame_bytes)
    return baseline_state_durations(net.profile, net.frame_bytes)


def _windows(net: NetworkParams) -> list[int]:
    p = net.profile
    return [(1 << min(i, p.m_prime)) * p.w0 for i in range(p.m + 1)]


def _run_single(config: SimConfig, replication: int, kernel) -> SimResult:
    net = config.net
    warmup = config.warmup()
    attempts, coll_attempts, n_idle, n_succ, n_coll, n_err = kernel(
        net.n,
        _windows(net),
        net.profile.m,
        config.mode == "baseline",
        config.error_feedback,
        net.fer,
        config.slots,
        warmup,
        stream_seed(config.seed & MASK64, replication),
    )
    measured = config.slots - warmup
    dur = _durations(config)
    time_us = (n_idle * dur.t_idle + n_succ * dur.t_success
               + n_coll * dur.t_collision + n_err * dur.t_err_data)
    freqs = ChannelStateProbs(
        p_idle=n_idle / measured,
        p_success=n_succ / measured,
        p_collision=n_coll / measured,
        p_err_data=n_err / measured,
    )
    return SimResult(
        tau_hat=attempts / (measured * net.n),
        p_coll_hat=coll_attempts / attempts if attempts else float("nan"),
        state_freqs=freqs,
        s_hat_mbps=n_succ * 8.0 * net.frame_bytes / time_us,
        tau_hat_stderr=float("nan"),
        p_coll_hat_stderr=float("nan"),
        s_hat_stderr=float("nan"),
        state_freq_stderrs=(float("nan"),) * 4,
        replications=1,
    )


def simulate(config: SimConfig) -> SimResult:
    """Run one replication. Deterministic for a fixed seed."""
    return _run_single(config, 0, _KERNEL)


def _mean_and_stderr(values: list[float]) -> tuple[float, float]:
    r = len(values)
    mean = sum(values) / r
    if r < 2:
        return mean, float("nan")
    var = sum((v - mean) ** 2 for v in values) / (r - 1)
    return mean, math.sqrt(var / r)


def replicate(config: SimConfig, replications: int, kernel=None) -> SimResult:
    """Pool independent replications (streams split off ``config.seed``).

    Estimates are means over replications; standard errors are
    between-replication sample errors of those means.
    """
    if replications < 1:
        raise ValueError(f"replications must be >= 1, got {replications}")
    kernel = kernel or _KERNEL
    runs = [_run_single(config, r, kernel) for r in range(replications)]
    if replications == 1:
        return runs[0]

    tau, tau_se = _mean_and_stderr([r.tau_hat for r in runs])
    pc, pc_se = _mean_and_stderr([r.p_coll_hat for r in runs])
    s, s_se = _mean_and_stderr([r.s_hat_mbps for r in runs])
    freq_stats = [
        _mean_and_stderr([r.state_freqs.as_tuple()[j] for r in runs])
        for j in range(4)
    ]
    return SimResult(
        tau_hat=tau,
        p_coll_hat=pc,
        state_freqs=ChannelStateProbs(*(fs[0] for fs in freq_stats)),
        s_hat_mbps=s,
        tau_hat_stderr=tau_se,
        p_coll_hat_stderr=pc_se,
        s_hat_stderr=s_se,
        state_freq_stderrs=tuple(fs[1] for fs in freq_stats),
        replications=replications,
    )
