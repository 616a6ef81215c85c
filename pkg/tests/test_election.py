import pickle
from fractions import Fraction

import numpy as np
import pytest
from conftest import committees, elections
from hypothesis import given
from hypothesis import strategies as st

import oracles
from randcommittee import (
    Election,
    InputError,
    PerturbationSpec,
    check_proportionality,
    enumerate_proportional_committees,
    pav_score,
    pav_score_exact,
    satisfies_ejr_plus,
    satisfies_jr,
    underrepresented_counts,
)
from randcommittee.election import (
    committee_masks,
    differing_voters,
    is_neighbor,
    pav_scores_batch,
    verify_witness,
)


def test_construction_errors():
    with pytest.raises(InputError, match="k exceeds candidate count"):
        Election(["a"], ["v"], {}, 2)
    with pytest.raises(InputError, match="unique"):
        Election(["a", "a"], ["v"], {}, 1)
    with pytest.raises(InputError, match="unknown candidate"):
        Election(["a"], ["v"], {"v": {"b"}}, 1)
    with pytest.raises(InputError):
        Election(["a"], [], {}, 1)
    with pytest.raises(InputError):
        Election(["a"], ["v"], {}, 0)


def test_immutable_and_hashable(e0):
    with pytest.raises(AttributeError):
        e0.k = 3
    with pytest.raises(TypeError):
        e0.approvals["v1"] = frozenset()
    assert not e0.matrix.flags.writeable
    assert hash(e0) == hash(pickle.loads(pickle.dumps(e0)))
    assert e0 == pickle.loads(pickle.dumps(e0))


def test_apply_and_neighbours(e0, e0_prime):
    assert e0_prime.approvals["v1"] == frozenset()
    assert e0.approvals["v1"] == {"c1"}
    assert differing_voters(e0, e0_prime) == ["v1"]
    assert is_neighbor(e0, e0_prime)
    assert not is_neighbor(e0, e0)


def test_underrepresented_counts_e0(e0):
    counts = underrepresented_counts(e0, {"c1"}, 1)
    assert list(counts) == [0, 2, 0, 0]  # c1 is in W so its supporters are covered
    assert list(underrepresented_counts(e0, {"c1"}, 2)) == [2, 2, 0, 0]


def test_jr_witness_e0(e0):
    verdict = check_proportionality(e0, {"c1", "d1"}, 1, 1)
    assert not verdict.satisfied
    w = verdict.witness
    assert (w.candidate, w.level, w.voters) == ("c2", 1, frozenset({"v3", "v4"}))
    assert verify_witness(e0, {"c1", "d1"}, 1, w)
    assert verdict.to_dict()["witness"]["voters"] == ["v3", "v4"]


def test_enumerate_e0(e0):
    assert enumerate_proportional_committees(e0) == [frozenset({"c1", "c2"})]
    assert enumerate_proportional_committees(e0, exact_size=True) == [frozenset({"c1", "c2"})]


def test_pav_examples(e0):
    assert pav_score_exact(e0, {"c1", "c2"}) == 4
    both = Election(["a", "b"], ["v"], {"v": {"a", "b"}}, 2)
    assert pav_score_exact(both, {"a", "b"}) == Fraction(3, 2)
    assert pav_score(both, {"a", "b"}) == pytest.approx(1.5)


def test_committee_masks_order(e0):
    masks = committee_masks(e0, exact_size=False)
    sizes = masks.sum(axis=1)
    assert list(sizes) == sorted(sizes)
    assert len(masks) == 1 + 4 + 6


def test_relabel(e0):
    mapping = {"c1": "x", "c2": "y", "d1": "z", "d2": "w"}
    F = e0.relabel(mapping)
    assert F.approvals["v1"] == {"x"}
    assert F.candidates == ("x", "y", "z", "w")


@given(elections(), st.data())
def test_checker_matches_definition(E, data):
    W = data.draw(committees(E))
    cands, _, ballots, k = oracles.raw(E)
    for alpha in (Fraction(1), Fraction(4, 5), Fraction(1, 2)):
        for ell_max in range(1, k + 1):
            verdict = check_proportionality(E, W, alpha, ell_max)
            assert verdict.satisfied == (not oracles.violates(cands, ballots, k, W, alpha, ell_max))
            if not verdict.satisfied:
                assert verify_witness(E, W, alpha, verdict.witness)
    assert satisfies_jr(E, W) == (not oracles.violates(cands, ballots, k, W, 1, 1))
    assert satisfies_ejr_plus(E, W) == (not oracles.violates(cands, ballots, k, W))


@given(elections())
def test_enumeration_matches_brute_force(E):
    assert set(enumerate_proportional_committees(E)) == set(oracles.proportional(E))
    assert set(enumerate_proportional_committees(E, exact_size=True)) == set(oracles.proportional(E, exact=True))


@given(elections(), st.data())
def test_counts_monotone_in_level(E, data):
    W = data.draw(committees(E))
    prev = None
    for ell in range(1, E.k + 1):
        cur = underrepresented_counts(E, W, ell)
        if prev is not None:
            assert np.all(cur >= prev)
        prev = cur


@given(elections(), st.data())
def test_pav_marginal_gain(E, data):
    W = data.draw(committees(E))
    _, _, ballots, _ = oracles.raw(E)
    assert pav_score_exact(E, W) == oracles.pav(ballots, W)
    for c in E.candidates:
        if c in W or len(W) == E.k:
            continue
        gain = sum(Fraction(1, len(A & W) + 1) for A in ballots.values() if c in A)
        assert pav_score_exact(E, W | {c}) - pav_score_exact(E, W) == gain


@given(elections())
def test_batch_pav_matches_scalar(E):
    masks = committee_masks(E, exact_size=True)
    scaled = pav_scores_batch(E, masks)
    ratios = {pav_score_exact(E, E.committee_from_mask(row)) / int(s) for row, s in zip(masks, scaled) if s}
    assert len(ratios) <= 1


@given(elections(), st.data())
def test_perturbation_changes_one_voter(E, data):
    v = data.draw(st.sampled_from(E.voters))
    new = data.draw(st.sets(st.sampled_from(E.candidates)))
    F = E.apply(PerturbationSpec(v, frozenset(new)))
    assert differing_voters(E, F) in ([], [v])
