from collections import Counter

import pytest
from conftest import elections
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chisquare

from randcommittee import (
    BOTTOM,
    Election,
    ElectionSequence,
    GreedyParams,
    InputError,
    PerturbationSpec,
    adversary_sequence,
    check_proportionality,
    dynamic_gjcr,
    dynamic_gjcr_transition,
    dynamic_reduce,
    exact_committee_distribution,
    generate_instance,
    make_rng,
    make_rule,
    optimal_coupling,
    recourse,
)
from randcommittee.analysis import exact_sequence_distribution

WARM = GreedyParams(a_override=0.4)


@st.composite
def neighbour_pairs(draw):
    E = draw(elections(m_max=4, n_max=6, k_max=2))
    v = draw(st.sampled_from(E.voters))
    new = draw(st.sets(st.sampled_from(E.candidates)))
    return E, E.apply(PerturbationSpec(v, frozenset(new)))


def test_recourse():
    total, steps = recourse([{"a"}, {"a", "b"}, {"c"}])
    assert steps == (1, 3) and total == 4
    with pytest.raises(InputError):
        recourse([])


def test_sequence_validation(e0):
    with pytest.raises(InputError):
        ElectionSequence(e0, [PerturbationSpec("v1", frozenset({"c1"}))])  # no change
    seq = ElectionSequence(e0, [PerturbationSpec("v1", frozenset())])
    assert len(seq) == 2


def test_adversary_reproducible(e0):
    a = adversary_sequence(e0, 10, rng=make_rng(5))
    b = adversary_sequence(e0, 10, rng=make_rng(5))
    assert a == b and len(a) == 11
    c = adversary_sequence(e0, 4, "full_resample", make_rng(5))
    assert len(c.elections()) == 5


@given(neighbour_pairs())
def test_gjcr_transition_preserves_marginal(pair):
    E, F = pair
    before = exact_sequence_distribution(E, WARM)
    after = exact_sequence_distribution(F, WARM)
    mixed: Counter = Counter()
    for s, p in before.items():
        for s2, q in dynamic_gjcr_transition(E, F, s, WARM).items():
            mixed[s2] += p * q
    assert set(k for k, v in mixed.items() if v > 1e-15) == set(after)
    for s2, p in after.items():
        assert mixed[s2] == pytest.approx(p, abs=1e-12)


@given(neighbour_pairs())
def test_reduction_preserves_marginal(pair):
    E, F = pair
    rule = make_rule("uniform-ejr")
    mu, nu = rule.exact(F), rule.exact(E)
    c = optimal_coupling(mu, nu)
    mixed: Counter = Counter()
    for y, q in nu.items():
        col = c.column(y)
        total = sum(p for _, p in col)
        for x, p in col:
            mixed[x] += q * p / total
    for W, p in mu.items():
        assert mixed[W] == pytest.approx(p, abs=1e-12)


def test_dynamic_gjcr_is_reproducible_and_valid():
    E, _ = generate_instance("blocks", 12, 2, 5)
    seq = adversary_sequence(E, 20, rng=make_rng(1, "adv"))
    t1 = dynamic_gjcr(seq, rng=11)
    t2 = dynamic_gjcr(seq, rng=11)
    assert t1 == t2
    for F, W, s in zip(seq.elections(), t1.committees, t1.sequences):
        assert check_proportionality(F, W).satisfied
        assert frozenset(c for c in s if c is not BOTTOM) == W
    assert t1.total_recourse == sum(t1.per_step_recourse)


def test_dynamic_gjcr_second_committee_law():
    ballots = {f"v{i}": {"a"} if i < 3 else {"b"} if i < 6 else {"c"} for i in range(8)}
    E = Election(["a", "b", "c"], sorted(ballots), ballots, 2)
    seq = ElectionSequence(E, [PerturbationSpec("v7", frozenset({"a"}))])
    params = GreedyParams(a_override=1.0)
    target = exact_committee_distribution(seq.elections()[1], params)
    reps = 3000
    counts = Counter(dynamic_gjcr(seq, params, make_rng(i, "rep")).committees[1] for i in range(reps))
    support = target.support()
    assert set(counts) <= set(support)
    obs = [counts[W] for W in support]
    exp = [target[W] * reps for W in support]
    assert chisquare(obs, exp).pvalue > 1e-3


def test_dynamic_reduce_runs(e0):
    seq = adversary_sequence(e0, 6, rng=make_rng(2))
    rule = make_rule("softmax-pav")
    trace = dynamic_reduce(rule, seq, 3)
    assert len(trace.committees) == 7
    for F, W in zip(seq.elections(), trace.committees):
        assert W in rule.exact(F).support()
    d = trace.to_dict(e0.candidates)
    assert d["total_recourse"] == trace.total_recourse
