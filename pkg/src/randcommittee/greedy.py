"""GJCR and the softmax greedy family.

One sampling step of Softmax-GJCR at epoch l and partial committee W:

* the candidate pool is every non-member whose under-represented supporter
  count n_{c,l} strictly exceeds n*l/(k+1);
* each pooled candidate gets weight exp(a_l * n_{c,l});
* weights are divided by max(sum of weights, exp(a_l * n*l/(alpha*k))), and
  whatever probability is left over selects nobody (``BOTTOM``).

``alpha < 1`` gives the Slack variant and ``ell_max < k`` the Capped variant
(``ell_max = 1`` is Softmax-GreedyJR). All probabilities are computed in log
space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .election import (
    Election,
    check_alpha,
    underrepresented_counts,
)
from .errors import InputError, InternalConsistencyError
from .rng import as_generator, categorical

BOTTOM = None  # "no selection" entry of a selection sequence


@dataclass(frozen=True)
class GreedyParams:
    """Parameters of the softmax greedy rules.

    ``delta`` is the assumed bound on how many approvals a single voter may
    change (``None`` means ``m``); ``ell_max=None`` means ``k``.
    ``a_override`` maps an epoch to a fixed temperature ``a_l``; a bare
    number applies to every epoch.
    """

    delta: int | None = None
    alpha: Fraction | float | int = 1
    ell_max: int | None = None
    a_override: Mapping[int, float] | float | None = field(default=None, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        if self.delta is not None and (isinstance(self.delta, bool) or int(self.delta) != self.delta or self.delta < 1):
            raise InputError(f"delta must be a positive integer, got {self.delta!r}")
        if self.ell_max is not None and (isinstance(self.ell_max, bool) or int(self.ell_max) != self.ell_max or self.ell_max < 1):
            raise InputError(f"ell_max must be a positive integer, got {self.ell_max!r}")
        if isinstance(self.a_override, (int, float)) and not isinstance(self.a_override, bool):
            a = float(self.a_override)
            if not math.isfinite(a) or a < 0:
                raise InputError("a_override must be finite and nonnegative")
            object.__setattr__(self, "a_override", a)
        elif self.a_override is not None:
            clean = {}
            for ell, a in dict(self.a_override).items():
                a = float(a)
                if not math.isfinite(a) or a < 0:
                    raise InputError(f"a_override[{ell}] must be finite and nonnegative")
                clean[int(ell)] = a
            object.__setattr__(self, "a_override", clean)

    def resolve_delta(self, E: Election) -> int:
        d = E.m if self.delta is None else int(self.delta)
        if d > E.m:
            raise InputError(f"delta={d} exceeds m={E.m}")
        return d

    def resolve_ell_max(self, E: Election) -> int:
        if self.ell_max is None:
            return E.k
        if self.ell_max > E.k:
            raise InputError(f"ell_max={self.ell_max} exceeds k={E.k}")
        return int(self.ell_max)


SOFTMAX_GJCR = GreedyParams()
GREEDY_JR = GreedyParams(ell_max=1)


def default_a_ell(E: Election, ell: int, params: GreedyParams = SOFTMAX_GJCR) -> float:
    """Temperature a_l for epoch ``ell``.

    alpha = 1:  k(k+1)/(n l) * ln(n Delta)
    alpha < 1:  (k+1)/(n l (1 - alpha + (2 - alpha)/k)) * ln(n Delta)
    """
    if not 1 <= ell <= E.k:
        raise InputError(f"epoch must lie in [1, {E.k}], got {ell}")
    if isinstance(params.a_override, float):
        return params.a_override
    if params.a_override and ell in params.a_override:
        return params.a_override[ell]
    n, k = E.n, E.k
    log_term = math.log(n * params.resolve_delta(E))
    alpha = params.alpha
    if alpha == 1:
        return k * (k + 1) / (n * ell) * log_term
    slack = 1 - alpha + (2 - alpha) / Fraction(k)
    return (k + 1) / (n * ell * float(slack)) * log_term


@dataclass(frozen=True)
class NextCandidateDistribution:
    """Law of one sampling step: candidate probabilities plus ``bottom``."""

    probabilities: Mapping[str, float]
    bottom: float
    epoch: int
    partial_committee: frozenset

    def outcomes(self, E: Election) -> list:
        """Support in sampling order: pool members canonically, then BOTTOM."""
        return [c for c in E.candidates if c in self.probabilities] + [BOTTOM]

    def as_dict(self) -> dict:
        """Outcome -> probability, BOTTOM keyed by ``None``."""
        d = dict(self.probabilities)
        d[BOTTOM] = self.bottom
        return d

    def prob(self, outcome) -> float:
        if outcome is BOTTOM:
            return self.bottom
        return self.probabilities.get(outcome, 0.0)


def _logsumexp(x: np.ndarray) -> float:
    top = float(x.max())
    return top + math.log(float(np.exp(x - top).sum()))


def next_candidate_distribution(
    E: Election,
    W,
    ell: int,
    params: GreedyParams = SOFTMAX_GJCR,
    counts: np.ndarray | None = None,
    a: float | None = None,
) -> NextCandidateDistribution:
    """Distribution of the next pick at epoch ``ell`` given committee ``W``.

    ``counts`` (n_{c,l} in canonical order) and ``a`` may be passed in by
    callers that already have them.
    """
    W = frozenset(W)
    if counts is None:
        counts = underrepresented_counts(E, W, ell)
    if a is None:
        a = default_a_ell(E, ell, params)
    n, k = E.n, E.k
    # pool membership n_cl > n l/(k+1), exact in integers
    pool = [
        j
        for j, c in enumerate(E.candidates)
        if c not in W and counts[j] * (k + 1) > n * ell
    ]
    if not pool:
        return NextCandidateDistribution({}, 1.0, ell, W)

    pc = counts[pool]
    floor = Fraction(n * ell) / (params.alpha * k)  # n l/(alpha k)
    exponents = a * pc.astype(np.float64)
    lse = _logsumexp(exponents)
    log_floor = a * float(floor)
    # the pool sum beats the floor: certainly when some count reaches it,
    # and whenever a = 0 (every weight is 1 >= 1)
    sum_wins = int(pc.max()) >= floor or a == 0.0 or lse >= log_floor
    if sum_wins:
        w = np.exp(exponents - exponents.max())
        probs = w / w.sum()
        bottom = 0.0
    else:
        probs = np.exp(exponents - log_floor)
        bottom = max(0.0, 1.0 - float(probs.sum()))
    return NextCandidateDistribution(
        {E.candidates[j]: float(p) for j, p in zip(pool, probs)}, bottom, ell, W
    )


@dataclass(frozen=True)
class SelectionSequence:
    """Picks in (epoch, round) order; ``None`` marks a round with no pick."""

    entries: tuple

    @property
    def committee(self) -> frozenset:
        return frozenset(c for c in self.entries if c is not BOTTOM)

    def __len__(self):
        return len(self.entries)


def gjcr(E: Election) -> frozenset:
    """Deterministic Greedy Justified Candidate Rule.

    For l = k..1, repeatedly add the first candidate (canonical order) with
    n_{c,l} >= l n/k.
    """
    W: set = set()
    n, k = E.n, E.k
    for ell in range(k, 0, -1):
        while True:
            counts = underrepresented_counts(E, W, ell)
            pick = next(
                (j for j, c in enumerate(E.candidates) if c not in W and counts[j] * k >= ell * n),
                None,
            )
            if pick is None:
                break
            W.add(E.candidates[pick])
    if len(W) > k:
        raise InternalConsistencyError("GJCR selected more than k candidates")
    return frozenset(W)


def epoch_temperatures(E: Election, params: GreedyParams) -> dict[int, float]:
    return {ell: default_a_ell(E, ell, params) for ell in range(1, params.resolve_ell_max(E) + 1)}


def softmax_gjcr(
    E: Election,
    params: GreedyParams = SOFTMAX_GJCR,
    rng=None,
    *,
    strict_guard: bool = False,
    transitions=None,
) -> tuple[frozenset, SelectionSequence]:
    """Sample a committee with Softmax-GJCR (and its Slack/Capped variants).

    Epochs run from ``ell_max`` down to 1 with k rounds each and one uniform
    draw per round. Once |W| = k the remaining rounds yield no pick; with
    ``strict_guard`` a case where that guard would have changed the
    outcome raises instead. ``transitions`` is an optional memoised
    ``(W, ell) -> NextCandidateDistribution`` for the same election and
    params.
    """
    gen = as_generator(rng)
    if transitions is None:
        temps = epoch_temperatures(E, params)

        def transitions(W, ell):
            return next_candidate_distribution(E, W, ell, params, a=temps[ell])

    W: set = set()
    entries = []
    for ell in range(params.resolve_ell_max(E), 0, -1):
        for _ in range(E.k):
            u = gen.random()
            if len(W) >= E.k:
                if strict_guard:
                    ncd = transitions(frozenset(W), ell)
                    if ncd.bottom < 1.0:
                        raise InternalConsistencyError("size guard bound: a full committee could grow")
                entries.append(BOTTOM)
                continue
            ncd = transitions(frozenset(W), ell)
            outcomes = ncd.outcomes(E)
            probs = [ncd.prob(o) for o in outcomes]
            pick = outcomes[categorical(probs, u)]
            entries.append(pick)
            if pick is not BOTTOM:
                W.add(pick)
    return frozenset(W), SelectionSequence(tuple(entries))


def pad_committee(E: Election, W, rng=None) -> frozenset:
    """Fill ``W`` up to k members uniformly at random from the non-members."""
    gen = as_generator(rng)
    rest = [c for c in E.candidates if c not in W]
    need = E.k - len(W)
    if need <= 0:
        return frozenset(W)
    picks = gen.choice(len(rest), size=need, replace=False)
    return frozenset(W) | {rest[i] for i in sorted(picks)}


def per_step_tv_ceiling(E: Election, ell: int, delta_v: int, params: GreedyParams = SOFTMAX_GJCR) -> float:
    """Upper bound on the TV distance between neighbouring next-candidate laws.

    min(1, 4(2e-1) a + 4 exp(ln delta_v - a n l/(k(k+1)) + a)) for exact EJR+.
    """
    a = default_a_ell(E, ell, params)
    n, k = E.n, E.k
    if delta_v <= 0:
        return 0.0
    second = 4.0 * math.exp(math.log(delta_v) - a * n * ell / (k * (k + 1)) + a)
    return min(1.0, 4 * (2 * math.e - 1) * a + second)


def committee_tv_ceiling(E: Election, params: GreedyParams = SOFTMAX_GJCR) -> float:
    """min(1, sum over rounds and epochs of (12e - 4) a_l)."""
    temps = epoch_temperatures(E, params)
    return min(1.0, E.k * sum((12 * math.e - 4) * a for a in temps.values()))
