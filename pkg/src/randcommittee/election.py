"""Election model, approval-profile algebra and proportionality checkers.

Committees are plain ``frozenset`` objects of candidate ids. Wherever an
order is needed (serialisation, distribution keys, tie-breaking) the
election's declared candidate order is used; see :meth:`Election.canonical`.

The EJR+ family of axioms quantifies over groups of voters N' that all
approve a common non-winner c and are each covered fewer than l times. The
largest such group for a fixed (c, l) is exactly the set of under-represented
supporters of c, so a violation exists iff that single count is large
enough. All checkers use this reduction.
"""

from __future__ import annotations

import math
from types import MappingProxyType
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import InputError, ResourceCapError

Committee = frozenset

DEFAULT_ENUMERATION_CAP = 10**6


def as_fraction(x) -> Fraction:
    """Exact rational for ``x``; floats go through their shortest repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InputError(f"non-finite value {x!r}")
        return Fraction(repr(x))
    return Fraction(str(x))


def check_alpha(alpha) -> Fraction:
    a = as_fraction(alpha)
    if not 0 < a <= 1:
        raise InputError(f"alpha must lie in (0, 1], got {alpha}")
    return a


@dataclass(frozen=True)
class PerturbationSpec:
    """Replace one voter's approval set."""

    voter: str
    new_approvals: frozenset

    def __post_init__(self):
        object.__setattr__(self, "new_approvals", frozenset(self.new_approvals))


@dataclass(frozen=True)
class Witness:
    candidate: str
    level: int
    voters: frozenset


@dataclass(frozen=True)
class AxiomVerdict:
    satisfied: bool
    witness: Witness | None = None

    def __bool__(self):
        return self.satisfied

    def to_dict(self) -> dict:
        if self.witness is None:
            return {"satisfied": self.satisfied, "witness": None}
        w = self.witness
        return {
            "satisfied": self.satisfied,
            "witness": {
                "candidate": w.candidate,
                "level": w.level,
                "voters": sorted(w.voters),
            },
        }


class Election:
    """An approval election ``(C, N, A, k)``.

    Immutable once built. ``candidates`` and ``voters`` keep their declared
    order, which is the canonical order for iteration, tie-breaking and
    sampling.
    """

    __slots__ = (
        "candidates",
        "voters",
        "approvals",
        "k",
        "_cindex",
        "_vindex",
        "_matrix",
    )

    def __init__(
        self,
        candidates: Sequence[str],
        voters: Sequence[str],
        approvals: Mapping[str, Iterable[str]],
        k: int,
    ):
        candidates = tuple(candidates)
        voters = tuple(voters)
        if len(set(candidates)) != len(candidates):
            raise InputError("candidate ids must be unique")
        if len(set(voters)) != len(voters):
            raise InputError("voter ids must be unique")
        overlap = set(candidates) & set(voters)
        if overlap:
            raise InputError(f"ids used both as candidate and voter: {sorted(overlap)}")
        if not voters:
            raise InputError("an election needs at least one voter")
        if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
            raise InputError(f"k must be an integer, got {k!r}")
        k = int(k)
        if k < 1:
            raise InputError("k must be positive")
        if k > len(candidates):
            raise InputError("k exceeds candidate count")
        cindex = {c: j for j, c in enumerate(candidates)}
        vindex = {v: i for i, v in enumerate(voters)}
        for v in approvals:
            if v not in vindex:
                raise InputError(f"approvals given for unknown voter {v!r}")
        frozen = {}
        matrix = np.zeros((len(voters), len(candidates)), dtype=np.uint8)
        for v in voters:
            ballot = frozenset(approvals.get(v, ()))
            for c in ballot:
                if c not in cindex:
                    raise InputError(f"voter {v!r} approves unknown candidate {c!r}")
                matrix[vindex[v], cindex[c]] = 1
            frozen[v] = ballot
        matrix.setflags(write=False)
        object.__setattr__(self, "candidates", candidates)
        object.__setattr__(self, "voters", voters)
        object.__setattr__(self, "approvals", MappingProxyType(frozen))
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "_cindex", cindex)
        object.__setattr__(self, "_vindex", vindex)
        object.__setattr__(self, "_matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("Election is immutable")

    def __reduce__(self):
        return (Election, (self.candidates, self.voters, dict(self.approvals), self.k))

    # -- basic accessors ---------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.candidates)

    @property
    def n(self) -> int:
        return len(self.voters)

    @property
    def matrix(self) -> np.ndarray:
        """Read-only ``(n, m)`` uint8 approval matrix in canonical order."""
        return self._matrix

    def index(self, c: str) -> int:
        try:
            return self._cindex[c]
        except KeyError:
            raise InputError(f"unknown candidate {c!r}") from None

    def voter_index(self, v: str) -> int:
        try:
            return self._vindex[v]
        except KeyError:
            raise InputError(f"unknown voter {v!r}") from None

    def __eq__(self, other):
        if not isinstance(other, Election):
            return NotImplemented
        return (
            self.candidates == other.candidates
            and self.voters == other.voters
            and self.k == other.k
            and self.approvals == other.approvals
        )

    def __hash__(self):
        return hash((self.candidates, self.voters, self.k, self._matrix.tobytes()))

    def __repr__(self):
        return f"Election(m={self.m}, n={self.n}, k={self.k})"

    # -- committees --------------------------------------------------------

    def committee(self, members: Iterable[str] = ()) -> frozenset:
        W = frozenset(members)
        self.validate_committee(W)
        return W

    def validate_committee(self, W) -> None:
        for c in W:
            if c not in self._cindex:
                raise InputError(f"committee member {c!r} is not a candidate")
        if len(W) > self.k:
            raise InputError(f"committee has {len(W)} members but k = {self.k}")

    def canonical(self, W) -> tuple:
        """Members of ``W`` sorted by declared candidate order."""
        return tuple(sorted(W, key=self._cindex.__getitem__))

    def mask(self, W) -> np.ndarray:
        out = np.zeros(self.m, dtype=np.bool_)
        for c in W:
            out[self.index(c)] = True
        return out

    def committee_from_mask(self, mask) -> frozenset:
        return frozenset(self.candidates[j] for j in np.flatnonzero(mask))

    # -- derived elections -------------------------------------------------

    def apply(self, spec: PerturbationSpec) -> Election:
        """The election with ``spec.voter``'s ballot replaced."""
        self.voter_index(spec.voter)
        for c in spec.new_approvals:
            self.index(c)
        approvals = dict(self.approvals)
        approvals[spec.voter] = spec.new_approvals
        return Election(self.candidates, self.voters, approvals, self.k)

    def relabel(self, mapping: Mapping[str, str], order: Sequence[str] | None = None) -> Election:
        """Rename candidates by the bijection ``mapping``.

        ``order`` optionally gives the new canonical candidate order (as new
        names); by default positions are preserved.
        """
        if sorted(mapping) != sorted(self.candidates) or len(set(mapping.values())) != self.m:
            raise InputError("mapping must be a bijection on the candidates")
        new_cands = tuple(order) if order is not None else tuple(mapping[c] for c in self.candidates)
        if sorted(new_cands) != sorted(mapping.values()):
            raise InputError("order must list every relabelled candidate once")
        approvals = {v: {mapping[c] for c in A} for v, A in self.approvals.items()}
        return Election(new_cands, self.voters, approvals, self.k)

    def with_k(self, k: int) -> Election:
        return Election(self.candidates, self.voters, self.approvals, k)


def differing_voters(E: Election, F: Election) -> list[str]:
    """Voters whose ballots differ between two elections on the same (C, N, k)."""
    if E.candidates != F.candidates or E.voters != F.voters or E.k != F.k:
        raise InputError("elections do not share candidates, voters and k")
    return [v for v in E.voters if E.approvals[v] != F.approvals[v]]


def is_neighbor(E: Election, F: Election) -> bool:
    return len(differing_voters(E, F)) == 1


# --------------------------------------------------------------------------
# counting
# --------------------------------------------------------------------------


def supporters(E: Election, c: str) -> frozenset:
    E.index(c)
    return frozenset(v for v in E.voters if c in E.approvals[v])


def _check_level(E: Election, ell: int) -> int:
    if isinstance(ell, bool) or not isinstance(ell, (int, np.integer)) or not 1 <= ell <= E.k:
        raise InputError(f"level must be an integer in [1, {E.k}], got {ell!r}")
    return int(ell)


def underrepresented_counts(E: Election, W, ell: int) -> np.ndarray:
    """n_{c,l} for every candidate, as an int64 array in canonical order."""
    return _kernels.underrepresented_counts(E.matrix, E.mask(W), ell)


def underrepresented_supporters(E: Election, W, c: str, ell: int) -> int:
    """Number of supporters of ``c`` covered fewer than ``ell`` times by ``W``."""
    j = E.index(c)
    E.validate_committee(W)
    ell = _check_level(E, ell)
    return int(underrepresented_counts(E, W, ell)[j])


def harmonic_scale(k: int) -> int:
    """lcm(1..k): multiplying PAV scores by it makes them integers."""
    return math.lcm(*range(1, k + 1))


def _scaled_harmonics(k: int) -> np.ndarray:
    L = harmonic_scale(k)
    return np.array([sum(L // r for r in range(1, j + 1)) for j in range(k + 1)], dtype=np.int64)


def pav_score_exact(E: Election, W) -> Fraction:
    E.validate_committee(W)
    scores = pav_scores_batch(E, E.mask(W)[None, :])
    return Fraction(int(scores[0]), harmonic_scale(E.k))


def pav_score(E: Election, W) -> float:
    """Sum over voters of H(|A_i ∩ W|)."""
    return float(pav_score_exact(E, W))


def pav_scores_batch(E: Election, masks: np.ndarray) -> np.ndarray:
    """Integer PAV scores scaled by :func:`harmonic_scale` for each mask row."""
    return _kernels.pav_scores(E.matrix, np.ascontiguousarray(masks, dtype=np.bool_), _scaled_harmonics(E.k))


# --------------------------------------------------------------------------
# proportionality axioms
# --------------------------------------------------------------------------


def _check_ell_max(E: Election, ell_max) -> int:
    if ell_max is None:
        return E.k
    if isinstance(ell_max, bool) or not isinstance(ell_max, (int, np.integer)) or not 1 <= ell_max <= E.k:
        raise InputError(f"ell_max must be an integer in [1, {E.k}], got {ell_max!r}")
    return int(ell_max)


def check_proportionality(E: Election, W, alpha=1, ell_max: int | None = None) -> AxiomVerdict:
    """``ell_max``-capped alpha-EJR+.

    ``alpha=1, ell_max=k`` is EJR+ and ``alpha=1, ell_max=1`` is JR. A
    violation at level l needs n_{c,l} >= (l/alpha)(n/k), compared exactly.
    The witness is the first violating (l, c) with l ascending and c in
    canonical order; its voter set is every under-represented supporter.
    """
    a = check_alpha(alpha)
    ell_max = _check_ell_max(E, ell_max)
    E.validate_committee(W)
    code = int(
        _kernels.first_violations(
            E.matrix, E.mask(W)[None, :], a.numerator, a.denominator, ell_max, E.k
        )[0]
    )
    if code < 0:
        return AxiomVerdict(True)
    ell, j = divmod(code, E.m)
    ell += 1
    c = E.candidates[j]
    cov = _kernels.coverage(E.matrix, E.mask(W))
    group = frozenset(v for i, v in enumerate(E.voters) if E.matrix[i, j] and cov[i] < ell)
    return AxiomVerdict(False, Witness(c, ell, group))


def verify_witness(E: Election, W, alpha, witness: Witness) -> bool:
    """Independently re-check that ``witness`` certifies a violation."""
    a = check_alpha(alpha)
    c, ell, group = witness.candidate, witness.level, witness.voters
    if c in W or not group:
        return False
    for v in group:
        if c not in E.approvals[v] or len(E.approvals[v] & W) >= ell:
            return False
    return len(group) * a * E.k >= ell * E.n


def satisfies_jr(E: Election, W) -> bool:
    return check_proportionality(E, W, 1, 1).satisfied


def satisfies_ejr_plus(E: Election, W) -> bool:
    return check_proportionality(E, W, 1, E.k).satisfied


def _committee_masks(m: int, sizes: Iterable[int], cap: int) -> np.ndarray:
    sizes = list(sizes)
    total = sum(math.comb(m, s) for s in sizes)
    if total > cap:
        raise ResourceCapError(f"{total} committees to enumerate exceeds cap {cap}")
    masks = np.zeros((total, m), dtype=np.bool_)
    row = 0
    for s in sizes:
        for combo in combinations(range(m), s):
            masks[row, list(combo)] = True
            row += 1
    return masks


def committee_masks(E: Election, exact_size: bool, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """All committee masks of size exactly k, or of every size 0..k.

    Rows are ordered by size, then lexicographically in canonical order.
    """
    sizes = [E.k] if exact_size else range(E.k + 1)
    return _committee_masks(E.m, sizes, cap)


def proportional_masks(
    E: Election,
    alpha=1,
    ell_max: int | None = None,
    exact_size: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> np.ndarray:
    a = check_alpha(alpha)
    ell_max = _check_ell_max(E, ell_max)
    masks = committee_masks(E, exact_size, cap)
    codes = _kernels.first_violations(E.matrix, masks, a.numerator, a.denominator, ell_max, E.k)
    return masks[codes < 0]


def enumerate_proportional_committees(
    E: Election,
    alpha=1,
    ell_max: int | None = None,
    exact_size: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> list[frozenset]:
    """Every committee (size k, or size <= k) passing :func:`check_proportionality`."""
    return [E.committee_from_mask(row) for row in proportional_masks(E, alpha, ell_max, exact_size, cap)]
