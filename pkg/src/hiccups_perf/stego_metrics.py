"""Cost and efficiency of the covert channel.

Cost (kappa) is the WLAN throughput given up when the covert channel
raises the frame error rate from FER' to FER' + dFER. Efficiency
(epsilon) is the covert channel's own saturation throughput at that
operating point; seen from the covert side the error rate is
``1 - dFER``, so ``epsilon = S_H(1 - dFER)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .phy_profiles import PhyProfile
from .saturation_model import NetworkParams, solve_baseline, solve_hiccups

DEFAULT_FER_PRIMES = (0.0, 0.0769, 0.5507)
DEFAULT_DELTA_FERS = (0.01, 0.02, 0.03, 0.04, 0.05)


@dataclass(frozen=True)
class CostResult:
    """Throughput decline caused by the covert channel at one grid point.

    ``kappa_mbps`` is the exact difference of two baseline solutions,
    ``kappa_approx_mbps`` the small-dFER linearization
    ``dFER / (1 - FER') * R * S_norm(FER')``.
    """

    fer_prime: float
    delta_fer: float
    kappa_mbps: float
    kappa_norm: float
    kappa_approx_mbps: float


@dataclass(frozen=True)
class EfficiencyResult:
    """Covert-channel throughput at injected error rate ``delta_fer``."""

    delta_fer: float
    fer_h: float
    epsilon_mbps: float
    epsilon_norm: float

    def __post_init__(self):
        if self.fer_h != 1.0 - self.delta_fer:
            raise ValueError("fer_h must equal 1 - delta_fer")


def _check_cost_args(fer_prime: float, delta_fer: float):
    if not 0.0 <= fer_prime <= 1.0:
        raise ValueError(f"fer_prime must be in [0, 1], got {fer_prime}")
    if not 0.0 <= delta_fer <= 1.0:
        raise ValueError(f"delta_fer must be in [0, 1], got {delta_fer}")
    if fer_prime + delta_fer > 1.0 + 1e-12:
        raise ValueError(
            f"fer_prime + delta_fer must not exceed 1, got {fer_prime + delta_fer}")


def cost(profile: PhyProfile, n: int, frame_bytes: int,
         fer_prime: float, delta_fer: float) -> CostResult:
    """Exact cost via two baseline solutions, plus the linearized value."""
    _check_cost_args(fer_prime, delta_fer)
    before = solve_baseline(NetworkParams(profile, n, frame_bytes, fer_prime))
    after = solve_baseline(
        NetworkParams(profile, n, frame_bytes, min(fer_prime + delta_fer, 1.0)))
    kappa = before.s_mbps - after.s_mbps
    if delta_fer == 0.0:
        approx = 0.0
    else:
        approx = cost_approx(profile, n, frame_bytes, fer_prime, delta_fer)
    return CostResult(
        fer_prime=fer_prime,
        delta_fer=delta_fer,
        kappa_mbps=kappa,
        kappa_norm=kappa / profile.rate_mbps,
        kappa_approx_mbps=approx,
    )


def cost_approx(profile: PhyProfile, n: int, frame_bytes: int,
                fer_prime: float, delta_fer: float) -> float:
    """Linearized cost in Mbps: dFER / (1 - FER') * R * S_norm(FER').

    Accurate for small dFER because baseline throughput falls almost
    linearly to zero at FER = 1.
    """
    if fer_prime == 1.0:
        raise ValueError("cost_approx is undefined at fer_prime = 1")
    _check_cost_args(fer_prime, delta_fer)
    if delta_fer == 0.0:
        return 0.0
    base = solve_baseline(NetworkParams(profile, n, frame_bytes, fer_prime))
    return delta_fer / (1.0 - fer_prime) * profile.rate_mbps * base.s_norm


def efficiency(profile: PhyProfile, n: int, frame_bytes: int,
               delta_fer: float) -> EfficiencyResult:
    """Covert-channel throughput when it injects ``delta_fer`` of frame
    errors: the corrupted-frame model evaluated at FER_H = 1 - dFER."""
    if not 0.0 <= delta_fer <= 1.0:
        raise ValueError(f"delta_fer must be in [0, 1], got {delta_fer}")
    fer_h = 1.0 - delta_fer
    point = solve_hiccups(NetworkParams(profile, n, frame_bytes, fer_h))
    return EfficiencyResult(
        delta_fer=delta_fer,
        fer_h=fer_h,
        epsilon_mbps=point.s_mbps,
        epsilon_norm=point.s_norm,
    )


def table_cost(profile: PhyProfile, n: int, frame_bytes: int,
               fer_primes=DEFAULT_FER_PRIMES,
               delta_fers=DEFAULT_DELTA_FERS) -> list[list[CostResult]]:
    """Cost grid, rows by FER' and columns by dFER."""
    return [[cost(profile, n, frame_bytes, fp, df) for df in delta_fers]
            for fp in fer_primes]


def table_efficiency(profile: PhyProfile, n_list, frame_bytes: int,
                     delta_fers=DEFAULT_DELTA_FERS) -> list[list[EfficiencyResult]]:
    """Efficiency grid, rows by station count and columns by dFER."""
    return [[efficiency(profile, n, frame_bytes, df) for df in delta_fers]
            for n in n_list]
