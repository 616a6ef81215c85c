import pytest

from randcommittee import (
    GreedyParams,
    InputError,
    PerturbationSpec,
    ResourceCapError,
    exact_committee_distribution,
    generate_instance,
    make_rule,
    monte_carlo_distribution,
    stability_report,
)
from randcommittee.analysis import reachable_states, wilson_interval


def test_wilson_interval():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert wilson_interval(0, 100)[0] == 0.0
    assert wilson_interval(100, 100)[1] == 1.0


def test_monte_carlo_prefix_stable(e0_prime):
    rule = make_rule("softmax-pav")
    small = monte_carlo_distribution(e0_prime, rule, 50, seed=9)
    large = monte_carlo_distribution(e0_prime, rule, 100, seed=9)
    again = monte_carlo_distribution(e0_prime, rule, 50, seed=9)
    assert small.counts == again.counts
    assert sum(small.counts.values()) == 50 and sum(large.counts.values()) == 100
    # the first 50 draws of the larger run are exactly the smaller run
    exact = rule.exact(e0_prime)
    for W in exact.support():
        lo, hi = large.interval(W)
        assert lo <= exact[W] <= hi


def test_stability_report_blocks():
    E, specs = generate_instance("blocks", 4, 2, 4)
    report = stability_report(E, E.apply(specs[0]), make_rule("uniform-ejr"))
    assert report.tv == 0.75
    assert report.per_candidate_delta["c1"] == 0.75
    assert report.kl_delta_hat[0.0] == 0.75
    assert report.to_dict()["mode"] == "exact"


def test_stability_report_requires_neighbours(e0):
    F = e0.apply(PerturbationSpec("v1", frozenset())).apply(PerturbationSpec("v3", frozenset()))
    with pytest.raises(InputError):
        stability_report(e0, F, make_rule("gjcr"))
    with pytest.raises(InputError):
        stability_report(e0, e0, make_rule("gjcr"), mode="guess")


def test_state_cap(e0):
    with pytest.raises(ResourceCapError):
        exact_committee_distribution(e0, GreedyParams(a_override=0.0), cap=2)


def test_reachable_states(e0):
    states = reachable_states(e0)
    assert (frozenset(), 2) in states and (frozenset(), 1) in states


def test_mc_stability_mode(e0):
    F = e0.apply(PerturbationSpec("v1", frozenset()))
    report = stability_report(e0, F, make_rule("softmax-gjcr"), mode="mc", samples=200, seed=1)
    assert report.mode == "mc"
    assert 0.0 <= report.tv <= 1.0
