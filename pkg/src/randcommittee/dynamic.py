"""Online committee maintenance with low recourse.

Two dynamic rules are provided:

* :func:`dynamic_reduce` turns any rule with an exact output distribution
  into a dynamic rule: each new committee is drawn from the optimal coupling
  of the new and the previous output laws, conditioned on the previous
  committee.
* :func:`dynamic_gjcr` does the same for Softmax-GJCR in polynomial time by
  coupling one sampling step at a time while the new selection sequence
  still agrees with the stored one, then sampling freshly.

In both cases each committee W^t is marginally distributed exactly like the
underlying rule on E^t.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .analysis import TransitionCache
from .distributions import conditional_coupling_sample, optimal_coupling
from .election import Election, PerturbationSpec, differing_voters
from .errors import InputError
from .greedy import BOTTOM, SOFTMAX_GJCR, GreedyParams, softmax_gjcr
from .rng import as_generator, categorical, make_rng

MODELS = ("single_approval", "full_resample")


@dataclass(frozen=True)
class ElectionSequence:
    """A base election and single-voter changes applied in order."""

    base: Election
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        self.elections()  # validates

    def elections(self) -> list[Election]:
        out = [self.base]
        for spec in self.steps:
            nxt = out[-1].apply(spec)
            if len(differing_voters(out[-1], nxt)) != 1:
                raise InputError(f"step for voter {spec.voter!r} does not change exactly one voter")
            out.append(nxt)
        return out

    def __len__(self):
        return len(self.steps) + 1


@dataclass(frozen=True)
class DynamicTrace:
    """Committees W^1..W^T with per-step recourse |W^t xor W^{t+1}|."""

    committees: tuple
    per_step_recourse: tuple
    sequences: tuple = ()
    provenance: tuple = field(default=(), repr=False)

    @property
    def total_recourse(self) -> int:
        return sum(self.per_step_recourse)

    def to_dict(self, candidates) -> dict:
        order = {c: j for j, c in enumerate(candidates)}
        out = {
            "committees": [sorted(W, key=order.__getitem__) for W in self.committees],
            "per_step_recourse": list(self.per_step_recourse),
            "total_recourse": self.total_recourse,
        }
        if self.sequences:
            out["sequences"] = [list(s) for s in self.sequences]
        if self.provenance:
            out["provenance"] = list(self.provenance)
        return out


def _recourse_steps(committees) -> tuple:
    return tuple(len(a ^ b) for a, b in zip(committees, committees[1:]))


def recourse(trace) -> tuple[int, tuple]:
    """Total and per-step symmetric-difference recourse of a trace."""
    committees = trace.committees if isinstance(trace, DynamicTrace) else tuple(frozenset(W) for W in trace)
    if not committees:
        raise InputError("trace must contain at least one committee")
    steps = _recourse_steps(committees)
    return sum(steps), steps


def make_trace(committees, sequences=(), provenance=()) -> DynamicTrace:
    committees = tuple(frozenset(W) for W in committees)
    return DynamicTrace(committees, _recourse_steps(committees), tuple(sequences), tuple(provenance))


# --------------------------------------------------------------------------
# oblivious adversary
# --------------------------------------------------------------------------


def adversary_sequence(E: Election, steps: int, model: str = "single_approval", rng=None) -> ElectionSequence:
    """A perturbation sequence fixed up front, one random voter per step.

    ``single_approval`` flips one uniformly chosen approval of the chosen
    voter; ``full_resample`` redraws the whole ballot (each candidate with
    probability 1/2) until it differs from the current one.
    """
    if steps < 0:
        raise InputError("steps must be nonnegative")
    if model not in MODELS:
        raise InputError(f"model must be one of {MODELS}")
    gen = as_generator(rng)
    current = E
    specs = []
    for _ in range(steps):
        v = current.voters[int(gen.integers(current.n))]
        ballot = current.approvals[v]
        if model == "single_approval":
            c = current.candidates[int(gen.integers(current.m))]
            new = ballot ^ {c}
        else:
            while True:
                pick = gen.random(current.m) < 0.5
                new = frozenset(c for c, keep in zip(current.candidates, pick) if keep)
                if new != ballot:
                    break
        spec = PerturbationSpec(v, frozenset(new))
        specs.append(spec)
        current = current.apply(spec)
    return ElectionSequence(E, tuple(specs))


# --------------------------------------------------------------------------
# generic reduction
# --------------------------------------------------------------------------


def _stepper(rng):
    """Generator factory per time step: seeded streams ``dynamic/t`` for an
    int seed, otherwise the one shared generator."""
    if isinstance(rng, (int, np.integer)):
        seed = int(rng)
        return lambda t: make_rng(seed, f"dynamic/{t}")
    gen = as_generator(rng)
    return lambda t: gen


def dynamic_reduce(rule, seq: ElectionSequence, rng=None) -> DynamicTrace:
    """Maintain committees by conditional sampling from optimal couplings.

    ``rule`` needs an ``exact(E)`` method returning a committee distribution.
    """
    elections = seq.elections()
    laws: dict = {}

    def law(E):
        if E not in laws:
            laws[E] = rule.exact(E)
        return laws[E]

    step_rng = _stepper(rng)
    committees = [law(elections[0]).sample(step_rng(0))]
    provenance = ["initial"]
    for t in range(1, len(elections)):
        prev, cur = law(elections[t - 1]), law(elections[t])
        coupling = optimal_coupling(cur, prev)
        W = conditional_coupling_sample(coupling, committees[-1], step_rng(t), axis=1)
        committees.append(W)
        provenance.append(f"coupled:{coupling.disagreement():.17g}")
    return make_trace(committees, provenance=provenance)


# --------------------------------------------------------------------------
# Dynamic-GJCR
# --------------------------------------------------------------------------


def _step_law(cache: TransitionCache, W: frozenset, ell: int) -> dict:
    """Next-pick law as outcome -> probability (``None`` = no pick)."""
    if len(W) >= cache.E.k:
        return {BOTTOM: 1.0}
    return cache(W, ell).as_dict()


def _outcome_order(E: Election) -> list:
    return list(E.candidates) + [BOTTOM]


def _draw(law: dict, order, gen) -> object:
    outcomes = [o for o in order if law.get(o, 0.0) > 0.0]
    return outcomes[categorical([law[o] for o in outcomes], gen.random())]


def _resample_sequence(prev_seq, old: TransitionCache, new: TransitionCache, gen) -> tuple:
    order = _outcome_order(new.E)
    out: list = []
    agree = True
    W: frozenset = frozenset()
    for r, ell in enumerate(new.schedule()):
        law_new = _step_law(new, W, ell)
        if agree:
            law_old = _step_law(old, W, ell)
            coupling = optimal_coupling(law_old, law_new, order)
            c = conditional_coupling_sample(coupling, prev_seq[r], gen, axis=0)
        else:
            c = _draw(law_new, order, gen)
        out.append(c)
        if c is not BOTTOM:
            W = W | {c}
        agree = agree and c == prev_seq[r]
    return tuple(out)


def dynamic_gjcr(
    seq: ElectionSequence,
    params: GreedyParams = SOFTMAX_GJCR,
    rng=None,
    transitions: list[TransitionCache] | None = None,
) -> DynamicTrace:
    """Polynomial-time dynamic Softmax-GJCR.

    At step t the stored selection sequence s^{t-1} is replayed: while the
    new sequence agrees with its prefix, each pick comes from the optimal
    coupling of the old and new next-candidate laws, conditioned on the old
    pick; after the first disagreement picks are drawn fresh.

    ``transitions`` (one cache per election, see :func:`transition_caches`)
    can be shared by many replays of the same sequence.
    """
    elections = seq.elections()
    caches = transitions if transitions is not None else transition_caches(seq, params)
    if len(caches) != len(elections):
        raise InputError("need one transition cache per election")
    step_rng = _stepper(rng)
    W, s = softmax_gjcr(elections[0], params, step_rng(0), transitions=caches[0])
    committees, sequences = [W], [s.entries]
    for t in range(1, len(elections)):
        s_new = _resample_sequence(sequences[-1], caches[t - 1], caches[t], step_rng(t))
        sequences.append(s_new)
        committees.append(frozenset(c for c in s_new if c is not BOTTOM))
    return make_trace(committees, sequences)


def transition_caches(seq: ElectionSequence, params: GreedyParams = SOFTMAX_GJCR) -> list[TransitionCache]:
    return [TransitionCache(E, params) for E in seq.elections()]


def dynamic_gjcr_transition(E_prev: Election, E_next: Election, prev_seq, params: GreedyParams = SOFTMAX_GJCR) -> dict:
    """Exact law of the next selection sequence given the stored one."""
    old, new = TransitionCache(E_prev, params), TransitionCache(E_next, params)
    order = _outcome_order(E_next)
    schedule = new.schedule()
    out: dict = defaultdict(float)

    def walk(r, prefix, W, agree, p):
        if r == len(schedule):
            out[tuple(prefix)] += p
            return
        ell = schedule[r]
        law_new = _step_law(new, W, ell)
        if agree:
            coupling = optimal_coupling(_step_law(old, W, ell), law_new, order)
            entries = coupling.row(prev_seq[r])
            total = sum(q for _, q in entries)
            choices = [(c, q / total) for c, q in entries]
        else:
            choices = [(c, q) for c, q in law_new.items() if q > 0.0]
        for c, q in choices:
            if q <= 0.0:
                continue
            W2 = W if c is BOTTOM else W | {c}
            walk(r + 1, prefix + [c], W2, agree and c == prev_seq[r], p * q)

    walk(0, [], frozenset(), True, 1.0)
    return dict(out)
