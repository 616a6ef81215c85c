"""Enumeration-based randomized rules: Softmax-PAV and Uniform-EJR+.

Both rules are exact by construction: the support is enumerated and the
distribution is built explicitly before a single categorical draw.
Softmax-PAV ranges over EJR+ committees of size exactly k; Uniform-EJR+
ranges over EJR+ committees of every size up to k.
"""

from __future__ import annotations

import math

import numpy as np

from .distributions import CommitteeDistribution
from .election import (
    DEFAULT_ENUMERATION_CAP,
    Election,
    harmonic_scale,
    pav_scores_batch,
    proportional_masks,
)
from .errors import InputError, InternalConsistencyError


def default_pav_a(E: Election) -> float:
    """(k^2/n)(k ln m + ln(n/k^2)), clamped at 0."""
    k, n, m = E.k, E.n, E.m
    return max(0.0, (k * k / n) * (k * math.log(m) + math.log(n / (k * k))))


def private_pav_a(E: Election, kappa: float = 1.0) -> float:
    """2(k^2/n)(k ln m + kappa ln n): the temperature targeting delta <= n^-kappa."""
    if kappa <= 0:
        raise InputError("kappa must be positive")
    k, n, m = E.k, E.n, E.m
    return 2 * (k * k / n) * (k * math.log(m) + kappa * math.log(n))


PAV_PRESETS = {"default": default_pav_a, "private": private_pav_a}


def resolve_pav_a(E: Election, a) -> float:
    if a is None:
        return default_pav_a(E)
    if isinstance(a, str):
        try:
            return PAV_PRESETS[a](E)
        except KeyError:
            raise InputError(f"unknown PAV temperature preset {a!r}") from None
    a = float(a)
    if not math.isfinite(a) or a < 0:
        raise InputError("PAV temperature must be finite and nonnegative")
    return a


def ejr_committees_exact_size(E: Election, cap: int = DEFAULT_ENUMERATION_CAP):
    """Masks and exact scaled PAV scores of every size-k EJR+ committee."""
    masks = proportional_masks(E, 1, E.k, exact_size=True, cap=cap)
    return masks, pav_scores_batch(E, masks)


def softmax_pav_distribution(E: Election, a=None, cap: int = DEFAULT_ENUMERATION_CAP) -> CommitteeDistribution:
    """P(W) proportional to exp(a PAV(W)) over size-k EJR+ committees."""
    a = resolve_pav_a(E, a)
    masks, scaled = ejr_committees_exact_size(E, cap)
    if len(masks) == 0:
        raise InternalConsistencyError("no size-k EJR+ committee exists; a PAV optimum always should")
    # shift by the exact integer maximum before converting to floats
    gap = (scaled - scaled.max()).astype(np.float64) / harmonic_scale(E.k)
    w = np.exp(a * gap)
    probs = w / w.sum()
    return CommitteeDistribution(
        {E.committee_from_mask(row): float(p) for row, p in zip(masks, probs)}, E.candidates
    )


def pav_stability_guarantee(E: Election, a=None, delta_v: int | None = None) -> tuple[float, float]:
    """(eps, delta) that Softmax-PAV is guaranteed to meet for ballot changes
    of at most ``delta_v`` approvals (default m).

    eps = 2 a h and delta = min(1, exp(k ln m - a n/k^2 + 2 a h)) with
    h = H(min(delta_v, k)). Reported next to measured audits; no tightness
    is claimed at small n.
    """
    a = resolve_pav_a(E, a)
    d = E.m if delta_v is None else int(delta_v)
    if d < 1:
        raise InputError("delta_v must be positive")
    h = math.fsum(1 / j for j in range(1, min(d, E.k) + 1))
    k, n, m = E.k, E.n, E.m
    log_delta = k * math.log(m) - a * n / (k * k) + 2 * a * h
    return 2 * a * h, (1.0 if log_delta >= 0 else math.exp(log_delta))


def softmax_pav(E: Election, a=None, rng=None, cap: int = DEFAULT_ENUMERATION_CAP) -> frozenset:
    return softmax_pav_distribution(E, a, cap).sample(rng)


def uniform_ejr_plus_distribution(E: Election, cap: int = DEFAULT_ENUMERATION_CAP) -> CommitteeDistribution:
    masks = proportional_masks(E, 1, E.k, exact_size=False, cap=cap)
    if len(masks) == 0:
        raise InternalConsistencyError("no EJR+ committee of size <= k found")
    return CommitteeDistribution.uniform((E.committee_from_mask(r) for r in masks), E.candidates)


def uniform_ejr_plus(E: Election, rng=None, cap: int = DEFAULT_ENUMERATION_CAP) -> frozenset:
    return uniform_ejr_plus_distribution(E, cap).sample(rng)
