"""Network-level saturation throughput models.

Couples the backoff chain to a population of ``n`` saturated stations
through the fixed point of (tau, p_coll) and evaluates saturation
throughput:

* :func:`solve_hiccups` -- the corrupted-frame covert channel. Every
  attempt fails from the WLAN's point of view, so the chain's closed
  form applies and all busy channel states last equally long (the
  receiver defers EIFS after any undecodable frame).
* :func:`solve_baseline` -- an ordinary 802.11 DCF network without the
  covert channel, used as the reference when pricing the covert
  channel's cost. The chain is solved by the brute-force oracle. By
  default only collisions escalate the backoff stage and frame errors
  just burn airtime (this reproduces the reference throughput tables and
  makes throughput almost exactly linear in FER); pass
  ``error_feedback=True`` to let errored frames escalate backoff like
  collisions do in a real MAC.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .backoff_chain import ChainParams, closed_form_tau, stationary_oracle
from .errors import NumericalError
from .phy_profiles import PhyProfile, t_data

_RESIDUAL_TOL = 1e-12
_MAX_ITER = 10_000
_DAMPING = 0.5


@dataclass(frozen=True)
class NetworkParams:
    """One operating point: profile, station count, frame length, FER.

    ``fer`` is the data-frame error probability (for the covert channel
    this is the error rate seen from the covert side). Compose with
    :func:`~hiccups_perf.phy_profiles.fer_from_ber` to start from a BER.
    """

    profile: PhyProfile
    n: int
    frame_bytes: int
    fer: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.frame_bytes <= 0:
            raise ValueError(f"frame_bytes must be > 0, got {self.frame_bytes}")
        if not 0.0 <= self.fer <= 1.0:
            raise ValueError(f"fer must be in [0, 1], got {self.fer}")


@dataclass(frozen=True)
class ChannelStateProbs:
    """Per-slot channel state probabilities (idle / success / collision /
    data error). They partition the slot, so they sum to 1."""

    p_idle: float
    p_success: float
    p_collision: float
    p_err_data: float

    def __post_init__(self):
        for name in ("p_idle", "p_success", "p_collision", "p_err_data"):
            v = getattr(self, name)
            if not -1e-12 <= v <= 1.0 + 1e-12:
                raise ValueError(f"{name} out of [0, 1]: {v}")
        total = self.p_idle + self.p_success + self.p_collision + self.p_err_data
        if abs(total - 1.0) > 1e-12:
            raise NumericalError("channel state probabilities do not sum to 1",
                                 residual=abs(total - 1.0))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_idle, self.p_success, self.p_collision, self.p_err_data)


class StateDurations(NamedTuple):
    """Durations (us) of the four channel states."""

    t_idle: float
    t_success: float
    t_collision: float
    t_err_data: float


@dataclass(frozen=True)
class ThroughputPoint:
    """Solved operating point: fixed-point (tau, p_coll), channel state
    probabilities, and saturation throughput in Mbps and normalized to
    the PHY rate."""

    tau: float
    p_coll: float
    probs: ChannelStateProbs
    s_mbps: float
    s_norm: float

    def __post_init__(self):
        if not -1e-12 <= self.s_norm <= 1.0 + 1e-12:
            raise ValueError(f"s_norm out of [0, 1]: {self.s_norm}")


def state_durations(profile: PhyProfile, frame_bytes: int,
                    quantized: bool = False) -> StateDurations:
    """Corrupted-frame-mode durations. No frame is ever acknowledged, so
    success, collision and data error all cost header + body + propagation
    + EIFS; only the idle slot differs."""
    busy = (profile.phy_hdr_us + t_data(profile, frame_bytes, quantized)
            + profile.prop_delay_us + profile.eifs_us)
    return StateDurations(profile.slot_us, busy, busy, busy)


def baseline_state_durations(profile: PhyProfile, frame_bytes: int,
                             quantized: bool = False) -> StateDurations:
    """Ordinary DCF durations: a success carries the full ACK exchange,
    collisions and errored frames end in an EIFS deferral."""
    body = t_data(profile, frame_bytes, quantized)
    success = (profile.phy_hdr_us + body + profile.prop_delay_us
               + profile.sifs_us + profile.ack_us + profile.prop_delay_us
               + profile.difs_us)
    failed = profile.phy_hdr_us + body + profile.prop_delay_us + profile.eifs_us
    return StateDurations(profile.slot_us, success, failed, failed)


def channel_state_probs(tau: float, n: int, fer: float) -> ChannelStateProbs:
    """State probabilities for ``n`` stations each transmitting with
    probability ``tau`` in a slot, with per-frame error probability
    ``fer`` on non-collided transmissions."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must be in [0, 1], got {tau}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    p_idle = (1.0 - tau) ** n
    p_one = n * tau * (1.0 - tau) ** (n - 1)
    p_coll = max(0.0, 1.0 - p_idle - p_one)
    return ChannelStateProbs(
        p_idle=p_idle,
        p_success=p_one * (1.0 - fer),
        p_collision=p_coll,
        p_err_data=p_one * fer,
    )


def _p_coll_of(tau: float, n: int) -> float:
    return 1.0 - (1.0 - tau) ** (n - 1)


def _fixed_point(tau_of_p_coll, n: int, tau_init: float | None) -> float:
    """Solve tau = F(1 - (1-tau)^(n-1)) by damped iteration, falling back
    to bisection; F must be nonincreasing in p_coll."""

    def step(tau: float) -> float:
        p = _p_coll_of(tau, n)
        if p >= 1.0:
            return 0.0
        return tau_of_p_coll(p)

    tau = tau_init if tau_init is not None else tau_of_p_coll(0.0)
    tau = min(max(tau, 1e-12), 1.0)
    residual = float("inf")
    for _ in range(_MAX_ITER):
        nxt = step(tau)
        residual = abs(tau - nxt)
        if residual < _RESIDUAL_TOL:
            return tau
        tau = (1.0 - _DAMPING) * tau + _DAMPING * nxt

    # G(tau) = tau - F(tau) is monotone increasing: bisection always lands
    lo, hi = 1e-15, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid - step(mid) > 0.0:
            hi = mid
        else:
            lo = mid
        if abs(mid - step(mid)) < _RESIDUAL_TOL:
            return mid
    tau = 0.5 * (lo + hi)
    residual = abs(tau - step(tau))
    if residual >= _RESIDUAL_TOL:
        raise NumericalError("fixed-point iteration did not converge",
                             residual=residual)
    return tau


def _throughput_point(tau: float, params: NetworkParams,
                      durations: StateDurations) -> ThroughputPoint:
    probs = channel_state_probs(tau, params.n, params.fer)
    denom = (durations.t_idle * probs.p_idle
             + durations.t_success * probs.p_success
             + durations.t_collision * probs.p_collision
             + durations.t_err_data * probs.p_err_data)
    payload_bits = 8.0 * params.frame_bytes
    s_mbps = probs.p_success * payload_bits / denom
    return ThroughputPoint(
        tau=tau,
        p_coll=_p_coll_of(tau, params.n),
        probs=probs,
        s_mbps=s_mbps,
        s_norm=s_mbps / params.profile.rate_mbps,
    )


def solve_hiccups(params: NetworkParams, quantized: bool = False,
                  tau_init: float | None = None) -> ThroughputPoint:
    """Covert-channel saturation throughput in corrupted-frame mode.

    The chain's closed form (always-failure case) and the coupling
    p_coll = 1 - (1-tau)^(n-1) are iterated to a residual below 1e-12.
    ``params.fer`` is the error rate seen by the covert channel, so the
    returned ``s_mbps`` is the covert payload rate.
    """
    p = params.profile

    def tau_of(p_coll: float) -> float:
        return closed_form_tau(ChainParams(p.w0, p.m, p.m_prime, p_coll, 1.0))

    tau = _fixed_point(tau_of, params.n, tau_init)
    return _throughput_point(tau, params, state_durations(p, params.frame_bytes, quantized))


@lru_cache(maxsize=1024)
def _oracle_tau(w0: int, m: int, m_prime: int, p_coll: float, p_f: float) -> float:
    return stationary_oracle(ChainParams(w0, m, m_prime, p_coll, p_f)).tau


@lru_cache(maxsize=1024)
def _baseline_tau(w0: int, m: int, m_prime: int, n: int, fer: float,
                  error_feedback: bool, tau_init: float | None) -> float:
    def tau_of(p_coll: float) -> float:
        if error_feedback:
            p_f = 1.0 - (1.0 - p_coll) * (1.0 - fer)
        else:
            p_f = p_coll
        return _oracle_tau(w0, m, m_prime, p_coll, p_f)

    return _fixed_point(tau_of, n, tau_init)


def solve_baseline(params: NetworkParams, error_feedback: bool = False,
                   quantized: bool = False,
                   tau_init: float | None = None) -> ThroughputPoint:
    """Saturation throughput of the 802.11 network without the covert
    channel, for Eq.-style cost accounting.

    The generic chain (p_f < 1) has no closed form here and is always
    solved through :func:`~hiccups_perf.backoff_chain.stationary_oracle`.
    With ``error_feedback=False`` (default) the chain feedback is
    collision-only, so tau does not depend on ``fer``.
    """
    p = params.profile
    fer_for_chain = params.fer if error_feedback else 0.0
    tau = _baseline_tau(p.w0, p.m, p.m_prime, params.n, fer_for_chain,
                        error_feedback, tau_init)
    return _throughput_point(
        tau, params, baseline_state_durations(p, params.frame_bytes, quantized))
