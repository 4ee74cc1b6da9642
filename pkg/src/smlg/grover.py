"""Amplitude amplification: analytic model, brute-force check, and the
randomized-iteration search driver used by both quantum engines."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .qcore import TrackTable

MAX_ORACLE_N = 1 << 12
K_MODES = ("period", "pattern")


def _theta(N: int, M: int) -> float:
    return math.asin(math.sqrt(M / N))


def success_probability(N: int, M: int, K: int) -> float:
    """Probability of measuring a marked state after ``K`` Grover iterates:
    ``sin^2((2K+1) theta)`` with ``theta = asin(sqrt(M/N))``."""
    if N < 1 or K < 0 or M < 0:
        raise UsageError("need N >= 1, M >= 0, K >= 0")
    if M > N:
        raise UsageError(f"marked count {M} exceeds search space {N}")
    if M == 0:
        return 0.0
    return math.sin((2 * K + 1) * _theta(N, M)) ** 2


def period(N: int, M: int) -> float:
    """Approximate oscillation period ``(pi/2) sqrt(N/M) - 1``."""
    if M < 1 or M > N:
        raise UsageError("period needs 1 <= M <= N")
    return (math.pi / 2) * math.sqrt(N / M) - 1


def failure_bound(c: int) -> float:
    """Upper bound ``(7/8)**c`` on the failure probability for unknown M."""
    if c < 1:
        raise UsageError("c must be >= 1")
    return (7 / 8) ** c


def failure_bound_single(c: int) -> float:
    """Tighter ``(3/4)**c`` bound for the single-solution case."""
    if c < 1:
        raise UsageError("c must be >= 1")
    return (3 / 4) ** c


def full_grover_oracle(N: int, marked, K: int) -> float:
    """Explicit amplitude simulation: ``K`` rounds of phase flip on
    ``marked`` then inversion about the mean, starting uniform. Returns the
    probability mass on ``marked``."""
    if N < 1 or N & (N - 1) or N > MAX_ORACLE_N:
        raise UsageError(f"N must be a power of two <= {MAX_ORACLE_N}")
    idx = np.array(sorted(set(marked)), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= N):
        raise UsageError("marked index out of range")
    amp = np.full(N, 1 / math.sqrt(N))
    for _ in range(K):
        amp[idx] *= -1
        amp = 2 * amp.mean() - amp
    return float(np.sum(amp[idx] ** 2))


def k_upper(N: int, mode: str = "period", pattern_length: int | None = None) -> int:
    """Largest iteration count the driver may draw (range starts at 0).

    ``period`` uses ``ceil(lambda_1)`` for the search-space size; ``pattern``
    uses the pattern length.
    """
    if mode == "period":
        return max(1, math.ceil(period(N, 1)))
    if mode == "pattern":
        if pattern_length is None:
            raise UsageError("pattern mode needs the pattern length")
        return pattern_length
    raise UsageError(f"unknown K mode {mode!r}; expected one of {K_MODES}")


def round_success(N: int, M: int, k_max: int) -> float:
    """Exact single-round success probability with K uniform on [0, k_max]."""
    return sum(success_probability(N, M, k) for k in range(k_max + 1)) / (k_max + 1)


def expected_success(N: int, M: int, c: int, k_max: int) -> float:
    return 1 - (1 - round_success(N, M, k_max)) ** c


@dataclass
class GroverPlan:
    """Parameters of one search over a finalized track table."""

    N: int
    M: int
    c: int
    k_max: int
    K: int | None = None

    @property
    def theta(self) -> float:
        return _theta(self.N, self.M)

    @property
    def lambda1(self) -> float:
        return period(self.N, 1)

    def p(self, K: int | None = None) -> float:
        K = self.K if K is None else K
        if K is None:
            raise UsageError("no iteration count chosen")
        return success_probability(self.N, self.M, K)


@dataclass
class SearchOutcome:
    found: bool
    track: int | None
    rounds: int
    iterations: int
    ops: int
    plan: GroverPlan
    draws: list


def run_randomized_search(
    state: TrackTable,
    marked: str,
    c: int,
    rng: np.random.Generator,
    k_mode: str = "period",
    pattern_length: int | None = None,
    doubling: bool = False,
) -> SearchOutcome:
    """Grover search with a random iteration count, repeated up to ``c`` times.

    Each round draws ``K`` uniformly from ``[0, k_upper]`` and measures: with
    probability ``p(K)`` the outcome is a uniformly chosen marked track,
    otherwise a uniformly chosen unmarked one. ``doubling`` adds one index
    bit whose upper half is never marked, so ``M <= N/2``.

    Every round pays for its ``K`` iterates (two ops each: oracle and
    diffusion) plus one measurement, even when nothing is marked.
    """
    if c < 1:
        raise UsageError("c must be >= 1")
    n_tracks = state.n_tracks
    N = 2 * n_tracks if doubling else n_tracks
    marked_idx = state.marked_tracks(marked)
    M = int(marked_idx.size)
    k_max = k_upper(N, k_mode, pattern_length)
    plan = GroverPlan(N=N, M=M, c=c, k_max=k_max)
    iterations = 0
    ops = 1 if doubling else 0
    draws = []
    for r in range(1, c + 1):
        K = int(rng.integers(0, k_max + 1))
        plan.K = K
        draws.append(K)
        iterations += K
        ops += 2 * K + 1
        if M == 0:
            continue
        if rng.random() < success_probability(N, M, K):
            track = int(marked_idx[rng.integers(0, M)])
            return SearchOutcome(True, track, r, iterations, ops, plan, draws)
    return SearchOutcome(False, None, c, iterations, ops, plan, draws)
