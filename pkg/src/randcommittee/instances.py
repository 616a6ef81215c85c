"""Generators for the adversarial instance families.

Each generator returns a base election and a list of single-voter
perturbations that are meant to be applied one after another.

blocks    k equal voter blocks, block i approves only c_i; m - k unapproved
          dummies. One perturbation: the first voter drops c_1.
jr_lb     k+1 candidates, each approved by its own group of n/k - n/k^2
          voters; n/k^2 voters approve nothing. Perturbations: the empty
          voters approve ``target`` one at a time.
pairs_lb  as jr_lb with k+1 candidate pairs (group i approves both members
          of pair i), m = 2(k+1).
obs53     k candidates, k singleton-approving groups of n/k voters. One
          perturbation: a voter of the last group approves nothing.
obs54     blocks with a spare dummy d1; perturbations move the first block
          over to d1, one voter at a time.
"""

from __future__ import annotations

from .election import Election, PerturbationSpec
from .errors import InputError

FAMILIES = ("blocks", "jr_lb", "pairs_lb", "obs53", "obs54")


def _voters(n: int) -> list[str]:
    return [f"v{i}" for i in range(1, n + 1)]


def _need(cond: bool, msg: str):
    if not cond:
        raise InputError(msg)


def blocks(n: int, k: int, m: int | None = None):
    m = k + 2 if m is None else m
    _need(n % k == 0, f"blocks needs n divisible by k (n = 0 mod {k})")
    _need(m >= k, "blocks needs m >= k")
    size = n // k
    cands = [f"c{i}" for i in range(1, k + 1)] + [f"d{i}" for i in range(1, m - k + 1)]
    voters = _voters(n)
    approvals = {v: {f"c{i // size + 1}"} for i, v in enumerate(voters)}
    E = Election(cands, voters, approvals, k)
    return E, [PerturbationSpec("v1", frozenset())]


def jr_lb(n: int, k: int, target: str | None = None):
    _need(n % (k * k) == 0, f"jr_lb needs n divisible by k^2 (n = 0 mod {k * k})")
    h = n // (k * k)
    group = n // k - h
    cands = [f"c{i}" for i in range(1, k + 2)]
    voters = _voters(n)
    approvals = {}
    for g, c in enumerate(cands):
        for v in voters[g * group : (g + 1) * group]:
            approvals[v] = {c}
    empty = voters[(k + 1) * group :]
    target = cands[0] if target is None else target
    _need(target in cands, f"unknown target {target!r}")
    E = Election(cands, voters, approvals, k)
    return E, [PerturbationSpec(v, frozenset({target})) for v in empty]


def pairs_lb(n: int, k: int, target: str | None = None):
    _need(n % (k * k) == 0, f"pairs_lb needs n divisible by k^2 (n = 0 mod {k * k})")
    h = n // (k * k)
    group = n // k - h
    cands = [f"c{i}" for i in range(1, 2 * (k + 1) + 1)]
    voters = _voters(n)
    approvals = {}
    for g in range(k + 1):
        for v in voters[g * group : (g + 1) * group]:
            approvals[v] = {cands[2 * g], cands[2 * g + 1]}
    empty = voters[(k + 1) * group :]
    target = cands[0] if target is None else target
    _need(target in cands, f"unknown target {target!r}")
    E = Election(cands, voters, approvals, k)
    return E, [PerturbationSpec(v, frozenset({target})) for v in empty]


def obs53(n: int, k: int):
    _need(n % k == 0, f"obs53 needs n divisible by k (n = 0 mod {k})")
    size = n // k
    cands = [f"c{i}" for i in range(1, k + 1)]
    voters = _voters(n)
    approvals = {v: {f"c{i // size + 1}"} for i, v in enumerate(voters)}
    E = Election(cands, voters, approvals, k)
    return E, [PerturbationSpec(voters[-1], frozenset())]


def obs54(n: int, k: int, m: int | None = None):
    m = k + 1 if m is None else m
    _need(m >= k + 1, "obs54 needs a dummy candidate (m >= k + 1)")
    E, _ = blocks(n, k, m)
    first = E.voters[: n // k]
    return E, [PerturbationSpec(v, frozenset({"d1"})) for v in first]


def generate_instance(family: str, n: int, k: int, m: int | None = None, target: str | None = None):
    """Dispatch to a family generator; returns ``(election, perturbations)``."""
    family = family.replace("-", "_")
    if n < 1 or k < 1:
        raise InputError("n and k must be positive")
    if family == "blocks":
        return blocks(n, k, m)
    if family == "jr_lb":
        _need(m in (None, k + 1), "jr_lb has exactly k + 1 candidates")
        return jr_lb(n, k, target)
    if family == "pairs_lb":
        _need(m in (None, 2 * (k + 1)), "pairs_lb has exactly 2(k + 1) candidates")
        return pairs_lb(n, k, target)
    if family == "obs53":
        _need(m in (None, k), "obs53 has exactly k candidates")
        return obs53(n, k)
    if family == "obs54":
        return obs54(n, k, m)
    raise InputError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def apply_sequence(E: Election, specs) -> list[Election]:
    """``[E, E after spec 1, E after specs 1-2, ...]``."""
    out = [E]
    for spec in specs:
        out.append(out[-1].apply(spec))
    return out
