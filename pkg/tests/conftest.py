import random
import sys
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from oracles import random_ballots  # noqa: E402

from randcommittee import Election, PerturbationSpec  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def make_e0() -> Election:
    return Election(
        ["c1", "c2", "d1", "d2"],
        ["v1", "v2", "v3", "v4"],
        {"v1": {"c1"}, "v2": {"c1"}, "v3": {"c2"}, "v4": {"c2"}},
        2,
    )


@pytest.fixture
def e0():
    return make_e0()


@pytest.fixture
def e0_prime():
    return make_e0().apply(PerturbationSpec("v1", frozenset()))


def corpus(size: int, seed: int = 20240601, **limits) -> list[Election]:
    rng = random.Random(seed)
    out = []
    for _ in range(size):
        cands, voters, ballots, k = random_ballots(rng, **limits)
        out.append(Election(cands, voters, ballots, k))
    return out


@st.composite
def elections(draw, m_max=5, n_max=8, k_max=3):
    m = draw(st.integers(2, m_max))
    n = draw(st.integers(1, n_max))
    k = draw(st.integers(1, min(k_max, m)))
    cands = [f"c{j}" for j in range(1, m + 1)]
    voters = [f"v{i}" for i in range(1, n + 1)]
    ballots = {v: draw(st.sets(st.sampled_from(cands))) for v in voters}
    return Election(cands, voters, ballots, k)


@st.composite
def committees(draw, E):
    return frozenset(draw(st.sets(st.sampled_from(E.candidates), max_size=E.k)))
