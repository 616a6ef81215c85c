"""Finite distributions, total variation, couplings and max-KL audits.

Outcomes are any hashable values (committees, candidates, ``None`` for the
no-selection symbol). Each distribution carries a canonical outcome order;
samplers and coupling constructions walk outcomes in that order so results
are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import InputError
from .rng import as_generator, categorical

MASS_TOL = 1e-10


def committee_sort_key(candidates: Sequence[str]):
    index = {c: j for j, c in enumerate(candidates)}

    def key(W):
        idx = sorted(index[c] for c in W)
        return (len(idx), idx)

    return key


class CommitteeDistribution:
    """Probability mass over committees of one election.

    ``candidates`` fixes the canonical order: committees are ordered by size
    and then lexicographically by candidate position.
    """

    __slots__ = ("mass", "candidates", "_key")

    def __init__(self, mass: Mapping, candidates: Sequence[str], *, check: bool = True):
        self.candidates = tuple(candidates)
        self._key = committee_sort_key(self.candidates)
        clean = {}
        for W, p in mass.items():
            W = frozenset(W)
            p = float(p)
            if p < 0:
                if p < -MASS_TOL:
                    raise InputError(f"negative probability {p} for {sorted(W)}")
                p = 0.0
            if p == 0.0:
                continue
            clean[W] = clean.get(W, 0.0) + p
        self.mass = {W: clean[W] for W in sorted(clean, key=self._key)}
        if check:
            total = math.fsum(self.mass.values())
            if abs(total - 1.0) > MASS_TOL:
                raise InputError(f"probabilities sum to {total}, not 1")

    @classmethod
    def point(cls, W, candidates) -> CommitteeDistribution:
        return cls({frozenset(W): 1.0}, candidates)

    @classmethod
    def uniform(cls, committees: Iterable, candidates) -> CommitteeDistribution:
        committees = list(committees)
        if not committees:
            raise InputError("uniform distribution over an empty set")
        p = 1.0 / len(committees)
        return cls({W: p for W in committees}, candidates)

    def __getitem__(self, W) -> float:
        return self.mass.get(frozenset(W), 0.0)

    def prob(self, W) -> float:
        return self[W]

    def support(self) -> list:
        return list(self.mass)

    def items(self):
        return self.mass.items()

    def __len__(self):
        return len(self.mass)

    def __repr__(self):
        inner = ", ".join(
            f"{{{','.join(c for c in self.candidates if c in W)}}}: {p:.6g}" for W, p in self.mass.items()
        )
        return f"CommitteeDistribution({inner})"

    def order_key(self):
        return self._key

    def sample(self, rng=None) -> frozenset:
        u = as_generator(rng).random()
        outcomes = list(self.mass)
        return outcomes[categorical([self.mass[W] for W in outcomes], u)]

    def relabel(self, mapping: Mapping[str, str], candidates=None) -> CommitteeDistribution:
        cands = candidates if candidates is not None else [mapping[c] for c in self.candidates]
        return CommitteeDistribution(
            {frozenset(mapping[c] for c in W): p for W, p in self.mass.items()}, cands
        )

    def to_json(self) -> list[dict]:
        return [
            {"committee": [c for c in self.candidates if c in W], "prob": p}
            for W, p in self.mass.items()
        ]


def selection_probabilities(d: CommitteeDistribution, E=None) -> dict[str, float]:
    """pi_c = P(c in W) for every candidate (canonical order)."""
    candidates = E.candidates if E is not None else d.candidates
    pi = {c: 0.0 for c in candidates}
    for W, p in d.items():
        for c in W:
            if c not in pi:
                raise InputError(f"committee member {c!r} not a candidate")
            pi[c] += p
    return pi


# --------------------------------------------------------------------------
# generic helpers over outcome -> probability mappings
# --------------------------------------------------------------------------


def _as_mapping(mu) -> Mapping:
    return mu.mass if isinstance(mu, CommitteeDistribution) else mu


def outcome_order(mu, nu, order: Sequence | None = None) -> list:
    """Union of supports in a canonical order."""
    m1, m2 = _as_mapping(mu), _as_mapping(nu)
    if order is not None:
        order = list(order)
        missing = (set(m1) | set(m2)) - set(order)
        if missing:
            raise InputError(f"order misses outcomes {missing}")
        return order
    if isinstance(mu, CommitteeDistribution) or isinstance(nu, CommitteeDistribution):
        ref = mu if isinstance(mu, CommitteeDistribution) else nu
        return sorted(set(m1) | set(m2), key=ref.order_key())
    out = list(m1)
    out += [x for x in m2 if x not in m1]
    return out


def tv_distance(mu, nu) -> float:
    """Half the L1 distance between two finite distributions."""
    m1, m2 = _as_mapping(mu), _as_mapping(nu)
    keys = set(m1) | set(m2)
    return min(1.0, 0.5 * math.fsum(abs(m1.get(x, 0.0) - m2.get(x, 0.0)) for x in keys))


def max_kl_audit(mu, nu, eps: float) -> float:
    """Smallest delta with mu(R) <= e^eps nu(R) + delta for every event R.

    The maximising event is {x : mu(x) > e^eps nu(x)}, so the answer is the
    sum of the positive parts of mu(x) - e^eps nu(x).
    """
    if eps < 0 or math.isnan(eps):
        raise InputError("eps must be nonnegative")
    m1, m2 = _as_mapping(mu), _as_mapping(nu)
    if math.isinf(eps):
        return math.fsum(p for x, p in m1.items() if m2.get(x, 0.0) == 0.0)
    scale = math.exp(eps)
    return math.fsum(max(0.0, p - scale * m2.get(x, 0.0)) for x, p in m1.items())


DEFAULT_EPS_GRID = (0.0, 0.01, 0.1, 0.5, 1.0, 2.0)


@dataclass(frozen=True)
class Coupling:
    """Joint law of (X, Y) with prescribed marginals.

    ``joint`` maps ``(x, y)`` pairs to positive mass; ``order`` is the
    canonical outcome order shared by both coordinates.
    """

    joint: Mapping
    left_marginal: Mapping
    right_marginal: Mapping
    order: tuple

    def disagreement(self) -> float:
        """P(X != Y)."""
        return math.fsum(p for (x, y), p in self.joint.items() if x != y)

    def row(self, x) -> list:
        return [(y, self.joint[(x, y)]) for y in self.order if (x, y) in self.joint]

    def column(self, y) -> list:
        return [(x, self.joint[(x, y)]) for x in self.order if (x, y) in self.joint]

    def marginal_error(self) -> float:
        """Largest deviation of row/column sums from the declared marginals."""
        rows: dict = {}
        cols: dict = {}
        for (x, y), p in self.joint.items():
            rows[x] = rows.get(x, 0.0) + p
            cols[y] = cols.get(y, 0.0) + p
        err = 0.0
        for x in self.order:
            err = max(err, abs(rows.get(x, 0.0) - self.left_marginal.get(x, 0.0)))
            err = max(err, abs(cols.get(x, 0.0) - self.right_marginal.get(x, 0.0)))
        return err


def optimal_coupling(mu, nu, order: Sequence | None = None) -> Coupling:
    """Maximal coupling: P(X != Y) equals the TV distance.

    Diagonal mass min(mu(x), nu(x)); the leftover mass of mu is then matched
    to the leftover mass of nu greedily, both walked in canonical order.
    """
    m1, m2 = _as_mapping(mu), _as_mapping(nu)
    order = outcome_order(mu, nu, order)
    joint: dict[tuple[Hashable, Hashable], float] = {}
    give, take = [], []
    for x in order:
        p, q = m1.get(x, 0.0), m2.get(x, 0.0)
        d = min(p, q)
        if d > 0.0:
            joint[(x, x)] = d
        if p > q:
            give.append([x, p - q])
        elif q > p:
            take.append([x, q - p])
    i = j = 0
    while i < len(give) and j < len(take):
        amount = min(give[i][1], take[j][1])
        if amount > 0.0:
            key = (give[i][0], take[j][0])
            joint[key] = joint.get(key, 0.0) + amount
        give[i][1] -= amount
        take[j][1] -= amount
        if give[i][1] <= 0.0:
            i += 1
        if take[j][1] <= 0.0:
            j += 1
    # only rounding residue can be left: both excess totals equal the TV
    # distance in exact arithmetic
    for x, r in give[i:]:
        if r > 0.0 and take:
            key = (x, take[-1][0])
            joint[key] = joint.get(key, 0.0) + r
    for y, r in take[j:]:
        if r > 0.0 and give:
            key = (give[-1][0], y)
            joint[key] = joint.get(key, 0.0) + r
    return Coupling(joint, dict(m1), dict(m2), tuple(order))


def conditional_coupling_sample(coupling: Coupling, given, rng=None, axis: int = 0):
    """Draw the other coordinate of ``coupling`` given one coordinate.

    ``axis=0`` conditions on the left coordinate (X = given) and returns Y;
    ``axis=1`` conditions on the right coordinate and returns X.
    """
    if axis == 0:
        entries = coupling.row(given)
    elif axis == 1:
        entries = coupling.column(given)
    else:
        raise InputError("axis must be 0 or 1")
    total = math.fsum(p for _, p in entries)
    if total <= 0.0:
        raise InputError(f"conditioning on zero-probability outcome {given!r}")
    u = as_generator(rng).random()
    probs = [p / total for _, p in entries]
    return entries[categorical(probs, u)][0]
