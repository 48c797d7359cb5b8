"""The (stage, counter) backoff-process Markov chain.

States are pairs ``(i, k)`` with stage ``0 <= i <= m`` and counter
``0 <= k <= W_i - 1``. A station at ``k >= 1`` decrements with
probability ``1 - p_coll`` and freezes with ``p_coll``; at ``k = 0`` it
transmits and moves to stage ``i + 1`` (uniform counter draw) with
probability ``p_f``, back to stage 0 with ``1 - p_f``. From the last
stage it always returns to stage 0. The corrupted-frame covert channel
is the ``p_f = 1`` special case, for which a closed-form stationary
distribution exists; the general chain is solved numerically by
:func:`stationary_oracle`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import NumericalError

_ORACLE_RESIDUAL = 1e-13
_POWER_MAX_SWEEPS = 500_000


@dataclass(frozen=True)
class ChainParams:
    """Backoff-chain parameterization.

    ``p_coll`` is the per-slot freeze probability, ``p_f`` the
    per-attempt failure probability (1 means every attempt fails).
    """

    w0: int
    m: int
    m_prime: int
    p_coll: float
    p_f: float = 1.0

    def __post_init__(self):
        if self.w0 < 2:
            raise ValueError(f"w0 must be >= 2, got {self.w0}")
        if self.m < 0 or self.m_prime < 0:
            raise ValueError("m and m_prime must be >= 0")
        if not 0.0 <= self.p_coll < 1.0:
            # p_coll = 1 freezes every counter forever, the chain is not ergodic
            raise ValueError(f"p_coll must be in [0, 1), got {self.p_coll}")
        if not 0.0 <= self.p_f <= 1.0:
            raise ValueError(f"p_f must be in [0, 1], got {self.p_f}")


@dataclass(frozen=True)
class ChainSolution:
    """Stationary distribution and the per-slot transmission probability."""

    b: dict[tuple[int, int], float]
    tau: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        total = sum(self.b.values())
        if abs(total - 1.0) > 1e-12:
            raise NumericalError("stationary distribution does not sum to 1",
                                 residual=abs(total - 1.0))
        if any(v < 0.0 for v in self.b.values()):
            worst = min(self.b.values())
            raise NumericalError("negative stationary probability", residual=-worst)
        tau = sum(v for (i, k), v in self.b.items() if k == 0)
        if self.tau is None:
            object.__setattr__(self, "tau", tau)
        elif abs(self.tau - tau) > 1e-12:
            raise NumericalError("tau inconsistent with b", residual=abs(self.tau - tau))


def window_size(params: ChainParams, i: int) -> int:
    """Contention window at stage ``i``: 2^i * W0, capped at 2^m' * W0."""
    if not 0 <= i <= params.m:
        raise ValueError(f"stage index must be in [0, {params.m}], got {i}")
    return (1 << min(i, params.m_prime)) * params.w0


def stage_windows(params: ChainParams) -> list[int]:
    return [window_size(params, i) for i in range(params.m + 1)]


def state_offsets(params: ChainParams) -> list[int]:
    """Start index of each stage in the flattened (stage-major) state vector."""
    offsets = [0]
    for w in stage_windows(params):
        offsets.append(offsets[-1] + w)
    return offsets


def enumerate_states(params: ChainParams) -> list[tuple[int, int]]:
    return [(i, k) for i, w in enumerate(stage_windows(params)) for k in range(w)]


def build_transition_matrix(params: ChainParams) -> sp.csr_matrix:
    """Row-stochastic one-step transition matrix over (stage, counter) states.

    Row/column order is stage-major, counters ascending, matching
    :func:`enumerate_states`.
    """
    windows = stage_windows(params)
    offsets = state_offsets(params)
    n = offsets[-1]
    p, pf, w0 = params.p_coll, params.p_f, params.w0

    rows, cols, vals = [], [], []
    for i, wi in enumerate(windows):
        base = offsets[i]
        if wi > 1:
            ks = np.arange(1, wi)
            # counter decrement on an idle slot
            rows.append(base + ks)
            cols.append(base + ks - 1)
            vals.append(np.full(wi - 1, 1.0 - p))
            # freeze while the channel is busy
            if p > 0.0:
                rows.append(base + ks)
                cols.append(base + ks)
                vals.append(np.full(wi - 1, p))
        # transmission at (i, 0)
        if i < params.m:
            if pf > 0.0:
                wn = windows[i + 1]
                rows.append(np.full(wn, base))
                cols.append(offsets[i + 1] + np.arange(wn))
                vals.append(np.full(wn, pf / wn))
            if pf < 1.0:
                rows.append(np.full(w0, base))
                cols.append(np.arange(w0))
                vals.append(np.full(w0, (1.0 - pf) / w0))
        else:
            # last stage: the frame is dropped, restart at stage 0
            rows.append(np.full(w0, base))
            cols.append(np.arange(w0))
            vals.append(np.full(w0, 1.0 / w0))

    matrix = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    ).tocsr()
    matrix.sum_duplicates()
    return matrix


def _solution_from_vector(params: ChainParams, pi: np.ndarray) -> ChainSolution:
    pi = np.where(np.abs(pi) < 1e-15, np.abs(pi), pi)  # scrub -0.0 / fp dust
    pi = pi / pi.sum()
    b = dict(zip(enumerate_states(params), pi.tolist()))
    offsets = state_offsets(params)
    tau = float(sum(pi[offsets[i]] for i in range(params.m + 1)))
    return ChainSolution(b=b, tau=tau)


def stationary_oracle(params: ChainParams) -> ChainSolution:
    """Brute-force stationary distribution: solve pi P = pi, sum(pi) = 1.

    Direct sparse linear solve; if that comes back ill-conditioned, falls
    back to damped power iteration. Raises :class:`NumericalError` when
    neither converges.
    """
    P = build_transition_matrix(params)
    n = P.shape[0]

    pi = None
    try:
        A = (P.T - sp.identity(n, format="csr")).tolil()
        A[n - 1, :] = 1.0
        rhs = np.zeros(n)
        rhs[n - 1] = 1.0
        candidate = spla.spsolve(A.tocsc(), rhs)
        if np.all(np.isfinite(candidate)) and candidate.sum() > 0:
            candidate = candidate / candidate.sum()
            residual = np.max(np.abs(candidate @ P - candidate))
            if residual < _ORACLE_RESIDUAL and candidate.min() > -1e-12:
                pi = candidate
    except Exception:
        pi = None

    if pi is None:
        # damped power iteration: robust against the near-periodic structure
        pi = np.full(n, 1.0 / n)
        residual = np.inf
        for _ in range(_POWER_MAX_SWEEPS):
            nxt = 0.5 * pi + 0.5 * (pi @ P)
            residual = np.max(np.abs(nxt - pi))
            pi = nxt
            if residual < _ORACLE_RESIDUAL / 2:
                break
        pi = pi / pi.sum()
        residual = np.max(np.abs(pi @ P - pi))
        if residual >= _ORACLE_RESIDUAL:
            raise NumericalError("stationary distribution did not converge",
                                 residual=float(residual))

    return _solution_from_vector(params, np.clip(pi, 0.0, None))


def closed_form_solution(params: ChainParams) -> ChainSolution:
    """Closed-form stationary distribution for the always-failure chain.

    Valid only for ``p_f = 1``:

    * ``b[i,0] = b00`` for every stage,
    * ``b[i,k] = b00 * (W_i - k) / (W_i * (1 - p_coll))`` for ``k >= 1``,
    * ``1/b00 = (sum(W_i) - (m+1)) / (2 (1 - p_coll)) + (m+1)``,
    * ``tau = (m+1) * b00``.

    The normalization uses the capped windows of :func:`window_size`
    directly, so it covers m' below, equal to, and above m.
    """
    if params.p_f != 1.0:
        raise ValueError("closed form is only valid for the always-failure "
                         f"chain (p_f = 1), got p_f = {params.p_f}")
    windows = stage_windows(params)
    m1 = params.m + 1
    one_minus_p = 1.0 - params.p_coll
    b00 = 1.0 / ((sum(windows) - m1) / (2.0 * one_minus_p) + m1)

    b: dict[tuple[int, int], float] = {}
    for i, wi in enumerate(windows):
        b[(i, 0)] = b00
        for k in range(1, wi):
            b[(i, k)] = b00 * (wi - k) / (wi * one_minus_p)
    return ChainSolution(b=b, tau=m1 * b00)


def closed_form_tau(params: ChainParams) -> float:
    """Transmission probability of the always-failure chain, without
    materializing the full distribution."""
    if params.p_f != 1.0:
        raise ValueError("closed form is only valid for p_f = 1")
    windows = stage_windows(params)
    m1 = params.m + 1
    return m1 / ((sum(windows) - m1) / (2.0 * (1.0 - params.p_coll)) + m1)
