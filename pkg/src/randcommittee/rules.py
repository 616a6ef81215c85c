"""Named rules with a uniform sample / exact-distribution interface."""

from __future__ import annotations

from dataclasses import dataclass, field

from .election import AxiomVerdict, Election, check_proportionality
from .errors import InputError
from .greedy import GreedyParams, gjcr, softmax_gjcr
from .global_rules import softmax_pav_distribution, uniform_ejr_plus_distribution

RULE_NAMES = ("gjcr", "softmax-gjcr", "greedy-jr", "softmax-pav", "uniform-ejr")


@dataclass(frozen=True)
class Rule:
    """A randomized (or deterministic) committee rule.

    ``kind`` is one of ``gjcr``, ``greedy``, ``pav`` or ``uniform``.
    ``params`` configures the greedy family and ``pav_a`` the Softmax-PAV
    temperature (a number, a preset name, or ``None`` for the default).
    """

    name: str
    kind: str
    params: GreedyParams = field(default_factory=GreedyParams)
    pav_a: object = None

    def sample(self, E: Election, rng=None) -> frozenset:
        if self.kind == "gjcr":
            return gjcr(E)
        if self.kind == "greedy":
            return softmax_gjcr(E, self.params, rng)[0]
        return self.exact(E).sample(rng)

    def exact(self, E: Election, cap: int | None = None):
        from .analysis import exact_committee_distribution
        from .distributions import CommitteeDistribution

        if self.kind == "gjcr":
            return CommitteeDistribution.point(gjcr(E), E.candidates)
        if self.kind == "greedy":
            return exact_committee_distribution(E, self.params, **({"cap": cap} if cap else {}))
        if self.kind == "pav":
            return softmax_pav_distribution(E, self.pav_a, **({"cap": cap} if cap else {}))
        return uniform_ejr_plus_distribution(E, **({"cap": cap} if cap else {}))

    def axiom(self, E: Election) -> tuple:
        """(alpha, ell_max) of the ex-post guarantee on ``E``."""
        if self.kind == "greedy":
            return self.params.alpha, self.params.resolve_ell_max(E)
        return 1, E.k

    def check(self, E: Election, W) -> AxiomVerdict:
        alpha, ell_max = self.axiom(E)
        return check_proportionality(E, W, alpha, ell_max)


def make_rule(
    name: str,
    *,
    alpha=None,
    ell_max: int | None = None,
    delta: int | None = None,
    a: float | None = None,
) -> Rule:
    """Build a rule from its CLI name and optional parameters.

    For the greedy family ``a`` overrides every epoch temperature; for
    ``softmax-pav`` it is the PAV temperature.
    """
    if name == "gjcr":
        return Rule("gjcr", "gjcr")
    if name in ("softmax-gjcr", "greedy-jr"):
        if name == "greedy-jr":
            if ell_max not in (None, 1):
                raise InputError("greedy-jr fixes ell_max = 1")
            ell_max = 1
        params = GreedyParams(
            delta=delta,
            alpha=1 if alpha is None else alpha,
            ell_max=ell_max,
            a_override=None if a is None else float(a),
        )
        return Rule(name, "greedy", params)
    if name == "softmax-pav":
        return Rule(name, "pav", pav_a=a)
    if name == "uniform-ejr":
        return Rule(name, "uniform")
    raise InputError(f"unknown rule {name!r}; choose from {', '.join(RULE_NAMES)}")

