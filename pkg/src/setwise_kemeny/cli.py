"""Command line entry point: ``setwise-kemeny <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (bad profile, solver limit,
failed verification) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import paperlab, sim
from ._accel import backend_name
from .distance import profile_distance
from .model import Profile, ProfileError, as_ratio, format_profile, parse_profile
from .reduce import (
    SCHEMES,
    ConstraintCycleError,
    NonUniqueSmithSetError,
    compute_alpha_smith_set,
    run_all_rules,
)
from .solve import SolverLimitError, median_bnb, median_bruteforce, median_dp

DOMAIN_ERRORS = (ProfileError, SolverLimitError, ConstraintCycleError, NonUniqueSmithSetError, KeyError, ValueError)


def _read_profile(path: str) -> Profile:
    if path == "-":
        return parse_profile(sys.stdin.read())
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_profile(fh.read())
    except OSError as exc:
        raise ProfileError(f"cannot read {path}: {exc.strerror}") from None


def _ratio(text: str) -> Fraction:
    try:
        return as_ratio(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a ratio like 3/4, got {text!r}") from None


def _emit(args, payload: dict, lines: list[str]):
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        for line in lines:
            print(line)


def _set_text(labels) -> str:
    return "{" + ", ".join(labels) + "}"


# ---------------------------------------------------------------- subcommands


def cmd_score(args) -> int:
    profile = _read_profile(args.profile)
    if args.ranking:
        rankings = [profile.ranking(args.ranking)]
    else:
        rankings = list(profile.merged())
    rows = [(r.format(profile.candidates), profile_distance(r, profile, args.k)) for r in rankings]
    _emit(
        args,
        {"k": args.k, "scores": [{"ranking": r, "score": s} for r, s in rows]},
        [f"score {s}  {r}" for r, s in rows] if not args.ranking else [f"score {rows[0][1]}"],
    )
    return 0


def cmd_median(args) -> int:
    profile = _read_profile(args.profile)
    if args.all and args.solver != "brute":
        raise ValueError("--all needs --solver brute (DP and B&B return one median)")
    if args.solver == "brute":
        result = median_bruteforce(profile, args.k, all_medians=args.all)
    elif args.solver == "dp":
        result = median_dp(profile, args.k)
    else:
        result = median_bnb(profile, args.k)
    medians = [r.format(profile.candidates) for r in result.medians]
    _emit(
        args,
        {
            "k": args.k,
            "solver": result.solver,
            "score": result.optimal_score,
            "medians": medians,
            "complete": result.complete,
        },
        [f"score {result.optimal_score}", *medians],
    )
    return 0


def cmd_reduce(args) -> int:
    profile = _read_profile(args.profile)
    label = profile.label
    schemes = {"2wise": (2,), "3wise": (3,), "both": SCHEMES}[args.scheme]
    cs = run_all_rules(profile)
    lines = []
    payload: dict = {"forced_pairs": [], "winners": [], "winner_sets": []}
    for k in schemes:
        for (x, y), rules in sorted(cs.forced[k].items()):
            names = ",".join(sorted(rules))
            lines.append(f"{label(x)} < {label(y)}  [{names}]  ({k}-wise)")
            payload["forced_pairs"].append({"scheme": k, "before": label(x), "after": label(y), "rules": sorted(rules)})
        for x, rules in sorted(cs.winners[k].items()):
            lines.append(f"winner {label(x)}  [{','.join(sorted(rules))}]  ({k}-wise)")
            payload["winners"].append({"scheme": k, "candidate": label(x), "rules": sorted(rules)})
        for members, rule in cs.winner_sets[k]:
            names = sorted(label(c) for c in members)
            lines.append(f"winner in {_set_text(names)}  [{rule}]  ({k}-wise)")
            payload["winner_sets"].append({"scheme": k, "candidates": names, "rule": rule})
    alpha = args.alpha if args.alpha is not None else Fraction(3, 4)
    smith = sorted(label(c) for c in compute_alpha_smith_set(profile, alpha))
    lines.append(f"{alpha}-smith set {_set_text(smith)}")
    payload["smith_set"] = smith
    payload["alpha"] = str(alpha)
    _emit(args, payload, lines)
    return 0


def cmd_smith(args) -> int:
    profile = _read_profile(args.profile)
    smith = sorted(profile.label(c) for c in compute_alpha_smith_set(profile, args.alpha))
    _emit(args, {"alpha": str(args.alpha), "smith_set": smith}, [_set_text(smith)])
    return 0


def cmd_simulate(args) -> int:
    rules = tuple(r.strip().upper() for r in args.rules.split(",") if r.strip())
    if args.grid == "paper":
        points = list(sim.PAPER_GRID)
    else:
        if args.n is None or args.m is None:
            raise ValueError("--n and --m are required unless --grid paper is given")
        points = [(args.n, args.m)]
    rows = []
    lines = [f"{'n':>3}  {'m':>3}  " + "  ".join(f"{r:>20}" for r in rules)]
    for n, m in points:
        rep = sim.applicability(sim.SimConfig(n, m, args.trials, args.seed, rules))
        row = {"n": n, "m": m, "trials": args.trials, "percentages": {}, "half_widths": {}}
        for rule in rules:
            rate = rep.rates[rule]
            row["percentages"][rule] = round(rate.percentage, 6)
            row["half_widths"][rule] = round(rate.half_width, 6)
        line = rep.row()
        if (n, m) in sim.PAPER_GRID:
            published = sim.PAPER_GRID[(n, m)]
            row["published"] = {r: published[sim.RULES.index(r)] for r in rules}
            if args.grid == "paper":
                line += "   published " + " ".join(f"{row['published'][r]:.3f}%" for r in rules)
        rows.append(row)
        lines.append(line)
    _emit(args, {"seed": args.seed, "rows": rows}, lines)
    return 0


def cmd_verify_paper(args) -> int:
    checks = paperlab.verify_paper(args.instance, samples=args.samples, seed=args.seed)
    failed = [c for c in checks if not c.passed]
    lines = [c.line() for c in checks]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    payload = {
        "checks": [
            {
                "group": c.group,
                "claim": c.name,
                "anchor": c.anchor,
                "expected": paperlab.instances.show(c.expected),
                "computed": paperlab.instances.show(c.computed),
                "passed": c.passed,
                "note": c.note,
            }
            for c in checks
        ],
        "passed": not failed,
    }
    _emit(args, payload, lines)
    return 1 if failed else 0


def cmd_gen(args) -> int:
    if args.kind == "two-thirds":
        if args.n is None:
            raise ValueError("gen two-thirds needs --n")
        text = format_profile(paperlab.gen_two_thirds_construction(args.n), f"2/3 construction, n = {args.n}")
    elif args.kind == "random":
        if args.n is None or args.m is None or args.seed is None:
            raise ValueError("gen random needs --n, --m and --seed")
        profile = sim.random_profile(args.n, args.m, args.seed, args.trial)
        text = format_profile(profile, f"uniform random, seed {args.seed}, trial {args.trial}")
    elif args.kind == "instance":
        if not args.target:
            raise ValueError(f"gen instance needs an id: {', '.join(paperlab.instance_ids())}")
        text = paperlab.asset_text(paperlab.get_instance(args.target).id.lower())
    else:
        if not args.target:
            raise ValueError("gen echo needs a profile file (or - for stdin)")
        text = format_profile(_read_profile(args.target))
    if args.json:
        print(json.dumps({"profile": text}))
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="setwise-kemeny", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({backend_name()})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", parents=[common], help="k-wise distance of a ranking to a profile")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ranking", help='e.g. "a > b > c"; default: every distinct vote')
    p.add_argument("profile")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("median", parents=[common], help="exact k-wise median")
    p.add_argument("--k", type=int, choices=(2, 3), required=True)
    p.add_argument("--solver", choices=("brute", "dp", "bnb"), default="dp")
    p.add_argument("--all", action="store_true", help="list every median (brute force only)")
    p.add_argument("profile")
    p.set_defaults(func=cmd_median)

    p = sub.add_parser("reduce", parents=[common], help="certified pairs, winners and Smith set")
    p.add_argument("--scheme", choices=("2wise", "3wise", "both"), default="both")
    p.add_argument("--alpha", type=_ratio, help="also report the alpha-Smith set (default 3/4)")
    p.add_argument("profile")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("smith", parents=[common], help="alpha-Smith set")
    p.add_argument("--alpha", type=_ratio, default=Fraction(3, 4))
    p.add_argument("profile")
    p.set_defaults(func=cmd_smith)

    p = sub.add_parser("simulate", parents=[common], help="applicability of AT / 2AT / 3AT")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--rules", default="at,2at,3at")
    p.add_argument("--grid", choices=("paper",))
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-paper", parents=[common], help="re-derive the published claims")
    p.add_argument("--instance", help="one instance id, TABLES or TWO_THIRDS")
    p.add_argument("--samples", type=int, default=10_000, help="swap samples per construction size")
    p.add_argument("--seed", type=int, default=0, help="seed for the swap samples")
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("gen", parents=[common], help="write a profile")
    p.add_argument("kind", choices=("two-thirds", "random", "instance", "echo"))
    p.add_argument("target", nargs="?", help="instance id or profile file")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--trial", type=int, default=0)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DOMAIN_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
