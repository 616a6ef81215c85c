"""Exact and Monte-Carlo committee distributions and stability reports.

The exact distribution of a softmax greedy rule is computed by a forward
dynamic program over states (W, epoch, round). The next-candidate law only
depends on (W, epoch), so it is computed once per pair and reused across
rounds.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .distributions import (
    DEFAULT_EPS_GRID,
    CommitteeDistribution,
    max_kl_audit,
    selection_probabilities,
    tv_distance,
)
from .election import Election, differing_voters
from .errors import InputError, ResourceCapError
from .greedy import (
    BOTTOM,
    SOFTMAX_GJCR,
    GreedyParams,
    NextCandidateDistribution,
    epoch_temperatures,
    next_candidate_distribution,
)
from .rng import make_rng

DEFAULT_STATE_CAP = 10**5


class TransitionCache:
    """Memoised next-candidate laws of one (election, params) pair."""

    def __init__(self, E: Election, params: GreedyParams = SOFTMAX_GJCR):
        self.E = E
        self.params = params
        self.temps = epoch_temperatures(E, params)
        self._cache: dict = {}

    def __call__(self, W: frozenset, ell: int) -> NextCandidateDistribution:
        key = (W, ell)
        ncd = self._cache.get(key)
        if ncd is None:
            ncd = next_candidate_distribution(self.E, W, ell, self.params, a=self.temps[ell])
            self._cache[key] = ncd
        return ncd

    def schedule(self) -> list[int]:
        """Epoch of every sampling step, in order."""
        ell_max = self.params.resolve_ell_max(self.E)
        return [ell for ell in range(ell_max, 0, -1) for _ in range(self.E.k)]


def exact_committee_distribution(
    E: Election,
    params: GreedyParams = SOFTMAX_GJCR,
    cap: int = DEFAULT_STATE_CAP,
    transitions: TransitionCache | None = None,
) -> CommitteeDistribution:
    """Exact output law of :func:`~randcommittee.greedy.softmax_gjcr`."""
    step = transitions or TransitionCache(E, params)
    states: dict = {frozenset(): 1.0}
    seen = 1
    for ell in step.schedule():
        nxt: dict = defaultdict(float)
        for W, p in states.items():
            if len(W) >= E.k:
                nxt[W] += p
                continue
            ncd = step(W, ell)
            for c, q in ncd.probabilities.items():
                if q > 0.0:
                    nxt[W | {c}] += p * q
            if ncd.bottom > 0.0:
                nxt[W] += p * ncd.bottom
        states = nxt
        seen += len(states)
        if seen > cap:
            raise ResourceCapError(f"dynamic program visited more than {cap} states")
    return CommitteeDistribution(states, E.candidates)


def exact_sequence_distribution(
    E: Election,
    params: GreedyParams = SOFTMAX_GJCR,
    cap: int = DEFAULT_STATE_CAP,
    transitions: TransitionCache | None = None,
) -> dict[tuple, float]:
    """Exact law of the full selection sequence (``None`` for no pick)."""
    step = transitions or TransitionCache(E, params)
    states: dict = {(): 1.0}
    for ell in step.schedule():
        nxt: dict = defaultdict(float)
        for s, p in states.items():
            W = frozenset(c for c in s if c is not BOTTOM)
            if len(W) >= E.k:
                nxt[s + (BOTTOM,)] += p
                continue
            ncd = step(W, ell)
            for c, q in ncd.probabilities.items():
                if q > 0.0:
                    nxt[s + (c,)] += p * q
            if ncd.bottom > 0.0:
                nxt[s + (BOTTOM,)] += p * ncd.bottom
        states = nxt
        if len(states) > cap:
            raise ResourceCapError(f"more than {cap} selection sequences")
    return dict(states)


def reachable_states(E: Election, params: GreedyParams = SOFTMAX_GJCR, cap: int = DEFAULT_STATE_CAP):
    """Every (W, epoch) reached with positive probability."""
    step = TransitionCache(E, params)
    states = {frozenset()}
    out = set()
    for ell in step.schedule():
        nxt = set()
        for W in states:
            if len(W) >= E.k:
                nxt.add(W)
                continue
            out.add((W, ell))
            ncd = step(W, ell)
            nxt.update(W | {c} for c, q in ncd.probabilities.items() if q > 0.0)
            if ncd.bottom > 0.0:
                nxt.add(W)
        states = nxt
        if len(out) > cap:
            raise ResourceCapError(f"more than {cap} reachable states")
    return out


# --------------------------------------------------------------------------
# Monte Carlo
# --------------------------------------------------------------------------


def wilson_interval(successes: int, trials: int, confidence: float = 0.99) -> tuple[float, float]:
    z = norm.ppf(0.5 + confidence / 2)
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class MonteCarloEstimate:
    distribution: CommitteeDistribution
    counts: dict
    samples: int
    intervals: dict = field(repr=False)

    def interval(self, W) -> tuple[float, float]:
        """99% Wilson interval for P(W), also for committees never drawn."""
        W = frozenset(W)
        if W in self.intervals:
            return self.intervals[W]
        return wilson_interval(0, self.samples)


def monte_carlo_distribution(E: Election, rule, samples: int, seed: int, confidence: float = 0.99) -> MonteCarloEstimate:
    """Empirical committee frequencies of ``rule`` over ``samples`` draws.

    Draw ``i`` uses the stream ``mc/i`` of ``seed``, so a larger sample
    extends a smaller one without changing it.
    """
    if samples < 1:
        raise InputError("need at least one sample")
    counts: dict = defaultdict(int)
    if getattr(rule, "kind", None) in ("pav", "uniform"):
        exact = rule.exact(E)
        for i in range(samples):
            counts[exact.sample(make_rng(seed, f"mc/{i}"))] += 1
    else:
        for i in range(samples):
            counts[rule.sample(E, make_rng(seed, f"mc/{i}"))] += 1
    dist = CommitteeDistribution({W: c / samples for W, c in counts.items()}, E.candidates)
    intervals = {W: wilson_interval(c, samples, confidence) for W, c in counts.items()}
    return MonteCarloEstimate(dist, dict(counts), samples, intervals)


# --------------------------------------------------------------------------
# stability reports
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilityReport:
    """TV distance, per-candidate continuity gaps and max-KL deltas.

    ``kl_delta_hat[eps]`` is the larger of the two directional audits, since
    the stability notion quantifies over both orders of a neighbouring pair.
    """

    tv: float
    per_candidate_delta: dict
    kl_delta_hat: dict
    mode: str = "exact"

    def to_dict(self) -> dict:
        return {
            "tv": self.tv,
            "per_candidate_delta": dict(self.per_candidate_delta),
            "kl_delta_hat": [{"eps": e, "delta": d} for e, d in self.kl_delta_hat.items()],
            "mode": self.mode,
        }


def compare_distributions(mu: CommitteeDistribution, nu: CommitteeDistribution, candidates, eps_grid=DEFAULT_EPS_GRID, mode="exact") -> StabilityReport:
    pi, pi2 = selection_probabilities(mu), selection_probabilities(nu)
    deltas = {c: abs(pi2.get(c, 0.0) - pi.get(c, 0.0)) for c in candidates}
    kl = {float(e): max(max_kl_audit(mu, nu, e), max_kl_audit(nu, mu, e)) for e in eps_grid}
    return StabilityReport(tv_distance(mu, nu), deltas, kl, mode)


def stability_report(
    E: Election,
    E2: Election,
    rule,
    mode: str = "exact",
    eps_grid=DEFAULT_EPS_GRID,
    samples: int = 10_000,
    seed: int = 0,
    allow_equal: bool = True,
) -> StabilityReport:
    """Compare ``rule`` on two elections differing on one voter."""
    diff = differing_voters(E, E2)
    if len(diff) > 1 or (not diff and not allow_equal):
        raise InputError(f"elections differ on {len(diff)} voters; expected exactly one")
    if mode == "exact":
        mu, nu = rule.exact(E), rule.exact(E2)
    elif mode == "mc":
        mu = monte_carlo_distribution(E, rule, samples, seed).distribution
        nu = monte_carlo_distribution(E2, rule, samples, seed + 1).distribution
    else:
        raise InputError(f"mode must be 'exact' or 'mc', got {mode!r}")
    return compare_distributions(mu, nu, E.candidates, eps_grid, mode)
