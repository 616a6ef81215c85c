"""Command-line interface: JSON in, JSON out.

Election documents look like::

    {"candidates": ["c1", "c2"], "k": 1,
     "voters": [{"id": "v1", "approvals": ["c1"]}, ...]}

Step files for ``dynamic`` hold a list of ``{"voter": id, "approvals": [...]}``
objects, either bare or under a ``"steps"`` (or ``"perturbations"``) key, so
the output of ``gen`` can be fed back directly.

Exit status: 0 success, 2 usage error, 3 input or format error, 4 resource
cap exceeded. Diagnostics go to standard error only.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .analysis import compare_distributions, monte_carlo_distribution
from .distributions import DEFAULT_EPS_GRID, selection_probabilities
from .dynamic import ElectionSequence, dynamic_gjcr, dynamic_reduce
from .election import Election, PerturbationSpec, check_proportionality, differing_voters
from .errors import InputError, ParseError, ResourceCapError
from .greedy import pad_committee
from .instances import generate_instance
from .rng import make_rng
from .rules import RULE_NAMES, make_rule

SCHEMA_VERSION = 1

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_CAP = 0, 2, 3, 4


# --------------------------------------------------------------------------
# documents
# --------------------------------------------------------------------------


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _expect(cond: bool, where: str, msg: str):
    if not cond:
        raise ParseError(f"{where}: {msg}")


def _string_list(value, where: str) -> list[str]:
    _expect(isinstance(value, list), where, "expected an array of strings")
    for i, x in enumerate(value):
        _expect(isinstance(x, str), f"{where}[{i}]", "expected a string")
    return value


def election_from_obj(doc) -> Election:
    _expect(isinstance(doc, dict), "document", "expected a JSON object")
    for key in ("candidates", "k", "voters"):
        _expect(key in doc, key, "missing field")
    cands = _string_list(doc["candidates"], "candidates")
    seen: dict = {}
    for i, c in enumerate(cands):
        _expect(c not in seen, f"candidates[{i}]", f"duplicate candidate {c!r} (first at {seen.get(c)})")
        seen[c] = i
    k = doc["k"]
    _expect(isinstance(k, int) and not isinstance(k, bool) and k >= 1, "k", "expected a positive integer")
    _expect(k <= len(cands), "k", "k exceeds candidate count")
    voters = doc["voters"]
    _expect(isinstance(voters, list) and voters, "voters", "expected a nonempty array")
    ids, approvals = [], {}
    for i, v in enumerate(voters):
        where = f"voters[{i}]"
        _expect(isinstance(v, dict), where, "expected an object")
        _expect(isinstance(v.get("id"), str), f"{where}.id", "expected a string")
        vid = v["id"]
        _expect(vid not in approvals, f"{where}.id", f"duplicate voter {vid!r}")
        _expect(vid not in seen, f"{where}.id", f"id {vid!r} is also a candidate")
        ballot = _string_list(v.get("approvals", []), f"{where}.approvals")
        for j, c in enumerate(ballot):
            _expect(c in seen, f"{where}.approvals[{j}]", f"unknown candidate {c!r}")
        ids.append(vid)
        approvals[vid] = ballot
    try:
        return Election(cands, ids, approvals, k)
    except InputError as exc:
        raise ParseError(str(exc)) from None


def parse_election(text: str) -> Election:
    """Election from a JSON document; file order is the canonical order."""
    return election_from_obj(_load_json(text, "election"))


def election_to_obj(E: Election) -> dict:
    return {
        "candidates": list(E.candidates),
        "k": E.k,
        "voters": [{"id": v, "approvals": E.canonical(E.approvals[v])} for v in E.voters],
    }


def serialize_election(E: Election) -> str:
    return dumps(election_to_obj(E))


def parse_steps(text: str) -> list[PerturbationSpec]:
    doc = _load_json(text, "steps")
    if isinstance(doc, dict):
        key = "steps" if "steps" in doc else "perturbations"
        _expect(key in doc, "steps", "missing field")
        doc = doc[key]
    _expect(isinstance(doc, list), "steps", "expected an array")
    out = []
    for i, s in enumerate(doc):
        where = f"steps[{i}]"
        _expect(isinstance(s, dict), where, "expected an object")
        _expect(isinstance(s.get("voter"), str), f"{where}.voter", "expected a string")
        out.append(PerturbationSpec(s["voter"], frozenset(_string_list(s.get("approvals", []), f"{where}.approvals"))))
    return out


def steps_to_obj(E: Election, specs) -> list[dict]:
    order = {c: j for j, c in enumerate(E.candidates)}
    return [{"voter": s.voter, "approvals": sorted(s.new_approvals, key=order.__getitem__)} for s in specs]


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    text = "%.17g" % x
    return text if any(ch in text for ch in ".en") else text + ".0"


def _dump(obj, indent: int, level: int) -> str:
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, Fraction):
        return _fmt_float(float(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_dump(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(x, (str, int, float)) for x in obj):
            return "[" + ", ".join(_dump(x, indent, level + 1) for x in obj) + "]"
        return "[\n" + ",\n".join(inner + _dump(x, indent, level + 1) for x in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON; floats carry 17 significant digits."""
    return _dump(obj, 2, 0)


def _emit(obj: dict, out) -> None:
    out.write(dumps({"schema_version": SCHEMA_VERSION, **obj}) + "\n")


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _alpha(text):
    if text is None:
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"alpha must be a number, got {text!r}") from None


def _temperature(text, rule: str):
    if text is None:
        return None
    try:
        return float(text)
    except ValueError:
        if rule == "softmax-pav":
            return text  # preset name
        raise InputError(f"--a must be a number, got {text!r}") from None


def _rule_from_args(args, name=None):
    name = name or args.rule
    return make_rule(
        name,
        alpha=_alpha(getattr(args, "alpha", None)),
        ell_max=getattr(args, "ell_max", None),
        delta=getattr(args, "delta", None),
        a=_temperature(getattr(args, "a", None), name),
    )


def _axiom_dict(rule, E, W) -> dict:
    alpha, ell_max = rule.axiom(E)
    verdict = check_proportionality(E, W, alpha, ell_max).to_dict()
    return {**verdict, "alpha": float(alpha), "ell_max": ell_max}


def cmd_run(args, out):
    E = parse_election(_read(args.input))
    rule = _rule_from_args(args)
    W = rule.sample(E, make_rng(args.seed, "run"))
    result = {"rule": rule.name, "seed": args.seed, "committee": E.canonical(W)}
    result["axiom"] = _axiom_dict(rule, E, W)
    result["padded"] = bool(args.pad)
    if args.pad:
        result["committee"] = E.canonical(pad_committee(E, W, make_rng(args.seed, "pad")))
    _emit(result, out)


def _dist_obj(E, dist) -> dict:
    return {"support": dist.to_json(), "pi": selection_probabilities(dist, E)}


def cmd_dist(args, out):
    E = parse_election(_read(args.input))
    rule = _rule_from_args(args)
    if args.mc is not None:
        if args.seed is None:
            raise UsageError("--mc needs --seed")
        est = monte_carlo_distribution(E, rule, args.mc, args.seed)
        obj = _dist_obj(E, est.distribution)
        for entry in obj["support"]:
            entry["interval99"] = list(est.interval(entry["committee"]))
        _emit({"rule": rule.name, "mode": "mc", "samples": args.mc, "seed": args.seed, **obj}, out)
    else:
        _emit({"rule": rule.name, "mode": "exact", **_dist_obj(E, rule.exact(E))}, out)


def _eps_grid(text):
    if text is None:
        return DEFAULT_EPS_GRID
    try:
        grid = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise InputError(f"bad --eps-grid {text!r}") from None
    if not grid or any(e < 0 or math.isnan(e) for e in grid):
        raise InputError("--eps-grid needs nonnegative numbers")
    return grid


def cmd_compare(args, out):
    E, E2 = parse_election(_read(args.input_a)), parse_election(_read(args.input_b))
    if E.candidates != E2.candidates or E.voters != E2.voters or E.k != E2.k:
        raise InputError("both elections need the same candidates, voters and k")
    if len(differing_voters(E, E2)) > 1:
        raise InputError("elections differ on more than one voter")
    rule = _rule_from_args(args)
    grid = _eps_grid(args.eps_grid)
    if args.mc is not None:
        seed = 0 if args.seed is None else args.seed
        mu = monte_carlo_distribution(E, rule, args.mc, seed).distribution
        nu = monte_carlo_distribution(E2, rule, args.mc, seed + 1).distribution
        report = compare_distributions(mu, nu, E.candidates, grid, "mc")
    else:
        report = compare_distributions(rule.exact(E), rule.exact(E2), E.candidates, grid)
    _emit({"rule": rule.name, **report.to_dict()}, out)


def cmd_dynamic(args, out):
    E = parse_election(_read(args.base))
    seq = ElectionSequence(E, parse_steps(_read(args.steps_file)))
    if args.rule == "softmax-gjcr":
        rule = _rule_from_args(args)
        trace = dynamic_gjcr(seq, rule.params, args.seed)
    elif args.rule.startswith("reduce:"):
        rule = _rule_from_args(args, args.rule[len("reduce:"):])
        trace = dynamic_reduce(rule, seq, args.seed)
    else:
        raise UsageError("dynamic --rule must be softmax-gjcr or reduce:<rule>")
    obj = trace.to_dict(E.candidates)
    if "sequences" in obj:
        obj["sequences"] = [[c for c in s] for s in obj["sequences"]]
    _emit({"rule": args.rule, "seed": args.seed, **obj}, out)


def cmd_gen(args, out):
    E, specs = generate_instance(args.family, args.n, args.k, args.m, args.target)
    _emit({"family": args.family, "election": election_to_obj(E), "perturbations": steps_to_obj(E, specs)}, out)


def cmd_check(args, out):
    E = parse_election(_read(args.input))
    members = [c.strip() for c in args.committee.split(",") if c.strip()]
    W = E.committee(members)
    alpha = _alpha(args.alpha)
    verdict = check_proportionality(E, W, 1 if alpha is None else alpha, args.ell_max)
    _emit(verdict.to_dict(), out)


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return v


def _pos_int(text):
    v = _nonneg_int(text)
    if v == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _rule_flags(p, rule_choices=RULE_NAMES):
    if rule_choices is None:
        p.add_argument("--rule", required=True)
    else:
        p.add_argument("--rule", required=True, choices=rule_choices)
    p.add_argument("--alpha")
    p.add_argument("--ell-max", type=_pos_int)
    p.add_argument("--delta", type=_pos_int)
    p.add_argument("--a", help="temperature; for softmax-pav also 'default' or 'private'")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="randcommittee", description="Randomized proportional committee rules.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="sample one committee")
    _rule_flags(p)
    p.add_argument("--input", required=True)
    p.add_argument("--seed", type=_nonneg_int, required=True)
    p.add_argument("--pad", action="store_true", help="fill up to k members uniformly at random")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("dist", help="exact or Monte-Carlo committee distribution")
    _rule_flags(p)
    p.add_argument("--input", required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--mc", type=_pos_int, metavar="N")
    p.add_argument("--seed", type=_nonneg_int)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("compare", help="stability report for two neighbouring elections")
    _rule_flags(p)
    p.add_argument("--input-a", required=True)
    p.add_argument("--input-b", required=True)
    p.add_argument("--eps-grid", help="comma-separated epsilons")
    p.add_argument("--mc", type=_pos_int, metavar="N")
    p.add_argument("--seed", type=_nonneg_int)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("dynamic", help="maintain committees along a perturbation sequence")
    _rule_flags(p, rule_choices=None)
    p.add_argument("--base", required=True)
    p.add_argument("--steps-file", required=True)
    p.add_argument("--seed", type=_nonneg_int, required=True)
    p.set_defaults(func=cmd_dynamic)

    p = sub.add_parser("gen", help="generate an instance family")
    p.add_argument("--family", required=True, choices=["blocks", "jr-lb", "pairs-lb", "obs53", "obs54"])
    p.add_argument("--n", type=_pos_int, required=True)
    p.add_argument("--k", type=_pos_int, required=True)
    p.add_argument("--m", type=_pos_int)
    p.add_argument("--target")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="check a committee against (alpha-)EJR+")
    p.add_argument("--input", required=True)
    p.add_argument("--committee", required=True, help='comma-separated, e.g. "c1,c2"')
    p.add_argument("--alpha")
    p.add_argument("--ell-max", type=_pos_int)
    p.set_defaults(func=cmd_check)
    return parser


def run_command(argv, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ResourceCapError as exc:
        err.write(f"resource cap exceeded: {exc}\n")
        return EXIT_CAP
    except InputError as exc:
        err.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    return EXIT_OK


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
