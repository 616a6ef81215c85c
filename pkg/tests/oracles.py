"""Slow, obviously-correct reference implementations.

Nothing here imports the package's algorithms: ballots are plain dicts of
sets and every quantity is recomputed from the definitions, with exact
rationals wherever a comparison decides an outcome.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.optimize import linprog


def raw(E):
    """(candidates, voters, ballots, k) as plain Python objects."""
    return list(E.candidates), list(E.voters), {v: set(E.approvals[v]) for v in E.voters}, E.k


def under(ballots, W, c, ell):
    return sum(1 for A in ballots.values() if c in A and len(A & set(W)) < ell)


def violates(cands, ballots, k, W, alpha=Fraction(1), ell_max=None):
    """True iff some c outside W has >= l n/(alpha k) supporters with < l hits."""
    n = len(ballots)
    ell_max = k if ell_max is None else ell_max
    for ell in range(1, ell_max + 1):
        for c in cands:
            if c not in W and Fraction(under(ballots, W, c, ell)) >= Fraction(ell * n) / (Fraction(alpha) * k):
                return True
    return False


def all_committees(cands, k, exact=False):
    sizes = [k] if exact else range(k + 1)
    for s in sizes:
        for W in combinations(cands, s):
            yield frozenset(W)


def proportional(E, alpha=1, ell_max=None, exact=False):
    cands, _, ballots, k = raw(E)
    return [W for W in all_committees(cands, k, exact) if not violates(cands, ballots, k, W, alpha, ell_max)]


def gjcr(E):
    cands, _, ballots, k = raw(E)
    n = len(ballots)
    W = set()
    for ell in range(k, 0, -1):
        added = True
        while added:
            added = False
            for c in cands:
                if c not in W and under(ballots, W, c, ell) * k >= ell * n:
                    W.add(c)
                    added = True
                    break
    return frozenset(W)


def pav(ballots, W):
    return sum(sum(Fraction(1, j) for j in range(1, len(A & set(W)) + 1)) for A in ballots.values())


def temperature(n, k, ell, delta, alpha=Fraction(1)):
    if alpha == 1:
        return k * (k + 1) / (n * ell) * math.log(n * delta)
    return (k + 1) / (n * ell * float(1 - alpha + (2 - alpha) / Fraction(k))) * math.log(n * delta)


def step_law(E, W, ell, a, alpha=Fraction(1)):
    """Next pick law by direct exponentiation (fine for the tiny a*n used here)."""
    cands, _, ballots, k = raw(E)
    n = len(ballots)
    pool = [c for c in cands if c not in W and under(ballots, W, c, ell) * (k + 1) > n * ell]
    weights = {c: math.exp(a * under(ballots, W, c, ell)) for c in pool}
    floor = math.exp(a * n * ell / (float(alpha) * k))
    z = max(sum(weights.values()), floor) if pool else 1.0
    law = {c: w / z for c, w in weights.items()}
    law[None] = 1.0 - sum(law.values())
    return law


def softmax_gjcr_dist(E, alpha=Fraction(1), ell_max=None, delta=None, a=None):
    """Exact committee law by brute-force recursion over all k*ell_max steps."""
    k, n = E.k, E.n
    ell_max = k if ell_max is None else ell_max
    delta = E.m if delta is None else delta
    temps = {ell: (a if a is not None else temperature(n, k, ell, delta, Fraction(alpha))) for ell in range(1, ell_max + 1)}
    schedule = [ell for ell in range(ell_max, 0, -1) for _ in range(k)]
    out: dict = {}

    def walk(r, W, p):
        if r == len(schedule):
            out[W] = out.get(W, 0.0) + p
            return
        if len(W) >= k:
            walk(r + 1, W, p)
            return
        for c, q in step_law(E, W, schedule[r], temps[schedule[r]], Fraction(alpha)).items():
            if q > 1e-300:
                walk(r + 1, W if c is None else W | {c}, p * q)

    walk(0, frozenset(), 1.0)
    return out


def softmax_pav_dist(E, a):
    cands, _, ballots, k = raw(E)
    comms = [W for W in all_committees(cands, k, exact=True) if not violates(cands, ballots, k, W)]
    scores = {W: float(pav(ballots, W)) for W in comms}
    top = max(scores.values())
    w = {W: math.exp(a * (s - top)) for W, s in scores.items()}
    z = sum(w.values())
    return {W: x / z for W, x in w.items()}


def uniform_dist(E):
    comms = proportional(E)
    return {W: 1.0 / len(comms) for W in comms}


def marginals(dist, cands):
    return {c: sum(p for W, p in dist.items() if c in W) for c in cands}


def tv_by_lp(mu: dict, nu: dict) -> float:
    """Minimum disagreement over all couplings, solved as a transport LP."""
    xs = sorted(set(mu) | set(nu), key=repr)
    m = len(xs)
    cost = np.array([[0.0 if i == j else 1.0 for j in range(m)] for i in range(m)]).ravel()
    A, b = [], []
    for i in range(m):
        row = np.zeros((m, m))
        row[i, :] = 1
        A.append(row.ravel())
        b.append(mu.get(xs[i], 0.0))
        col = np.zeros((m, m))
        col[:, i] = 1
        A.append(col.ravel())
        b.append(nu.get(xs[i], 0.0))
    res = linprog(cost, A_eq=np.array(A), b_eq=np.array(b), bounds=(0, None), method="highs")
    return float(res.fun)


def random_ballots(rng: random.Random, m_max=6, n_max=12, k_max=3):
    """A random small election as (candidates, voters, ballots, k)."""
    m = rng.randint(2, m_max)
    n = rng.randint(1, n_max)
    k = rng.randint(1, min(k_max, m))
    cands = [f"c{j}" for j in range(1, m + 1)]
    voters = [f"v{i}" for i in range(1, n + 1)]
    p = rng.choice([0.2, 0.35, 0.5])
    # correlated parties make the proportionality constraints bind
    parties = [set(rng.sample(cands, rng.randint(1, max(1, m // 2)))) for _ in range(rng.randint(1, 3))]
    ballots = {}
    for v in voters:
        if rng.random() < 0.5:
            ballots[v] = set(rng.choice(parties))
        else:
            ballots[v] = {c for c in cands if rng.random() < p}
    return cands, voters, ballots, k
