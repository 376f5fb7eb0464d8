"""Command-line front end.

    cogrowthkit cogrowth  --family bicyclic -N 10 --track 1
    cogrowthkit operator  --spec acbc.txt --rayleigh-samples 1000
    cogrowthkit structure --spec table.txt
    cogrowthkit simulate  --family free --rank 2 -n 4 --trials 100000 --seed 7

Exit codes: 0 success, 2 usage error, 3 resource error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import __version__
from .algebra import GeneratorChoice, eval_word, make_family, opposite, parse_element, tokenize
from .cayley import DEFAULT_CAP, CayleyBall, finite_structure, folner_defect
from .cogrowth import CogrowthTable, gamma_rate, local_rate, verify_convolution
from .errors import ResourceError, UsageError
from .markov import operator_report
from .montecarlo import estimate_coincidence, estimate_local, exact_coincidence, exact_local
from .specfile import load_spec, parse_vector

FAMILIES = ("free", "free_commutative", "bicyclic", "integer_lattice")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("semigroup")
    src.add_argument("--spec", help="semigroup spec file")
    src.add_argument("--family", choices=FAMILIES)
    src.add_argument("--rank", type=int, default=2)
    src.add_argument("--dim", type=int, default=1)
    src.add_argument("--gens", nargs="+", metavar="SYM:VALUE",
                     help="lattice generators name:(x1,..,xd), or symbol:word overrides")
    src.add_argument("--opposite", action="store_true", help="use the opposite semigroup (left walks)")
    out = common.add_argument_group("output")
    out.add_argument("--format", choices=("csv", "json"), default="json")
    out.add_argument("--out", metavar="DIR", help="write report files here instead of stdout")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="element cap for Cayley balls")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="cogrowthkit", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cogrowth", parents=[common], help="local and global cogrowth tables")
    p.add_argument("-N", type=int, default=10, help="horizon")
    p.add_argument("--track", action="append", default=[], metavar="WORD",
                   help="extra element to track (word over the generators, 1 = identity)")
    p.add_argument("--verify", action="store_true", help="cross-check gamma by pair enumeration")

    p = sub.add_parser("operator", parents=[common], help="Markov operator bounds")
    p.add_argument("-N", type=int, default=10)
    p.add_argument("--radius", type=int, help="ball radius for norm estimates (default min(N, 6))")
    p.add_argument("--iterations", type=int, default=20)
    p.add_argument("--rayleigh-samples", type=int, default=0)

    p = sub.add_parser("structure", parents=[common], help="finite-table predicates and Folner defect")
    p.add_argument("--folner-radius", type=int, help="F = ball of this radius, H = generators")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo random walks")
    p.add_argument("-n", type=int, default=4, help="largest walk length")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--event", choices=("local", "coincidence"), default="local")
    p.add_argument("--track", default="1", metavar="WORD", help="target element for --event local")
    return parser


def resolve_semigroup(args):
    if bool(args.spec) == bool(args.family):
        raise UsageError("give exactly one of --spec or --family")
    overrides = None
    if args.spec:
        spec = load_spec(args.spec)
        engine, gens = spec.build()
        overrides = args.gens
    elif args.family == "integer_lattice":
        lattice = None
        if args.gens:
            lattice = []
            for item in args.gens:
                name, sep, vec = item.partition(":")
                if not sep:
                    raise UsageError(f"lattice generator {item!r} must be name:vector")
                lattice.append((name, parse_vector(vec)))
        engine, gens = make_family("integer_lattice", dim=args.dim, gens=lattice)
    else:
        params = {"rank": args.rank} if args.family in ("free", "free_commutative") else {}
        engine, gens = make_family(args.family, **params)
        overrides = args.gens
    if overrides:
        symbols, targets = [], []
        for item in overrides:
            sym, sep, word = item.partition(":")
            if not sep:
                raise UsageError(f"generator override {item!r} must be symbol:word")
            symbols.append(sym)
            letters = tokenize(word, gens.symbols)
            targets.append(eval_word(engine, gens, letters) if letters else _identity_or_fail(engine))
        gens = GeneratorChoice(symbols, targets)
    if args.opposite:
        engine, gens = opposite(engine, gens)
    return engine, gens


def _identity_or_fail(engine):
    if not engine.has_identity:
        raise UsageError("a generator cannot represent 1 in a non-monoid")
    return engine.identity


def resolved_config(args, engine, gens):
    cfg = {
        "command": args.command,
        "version": __version__,
        "spec": args.spec,
        "family": args.family,
        "kind": engine.kind,
        "monoid": engine.has_identity,
        "opposite": args.opposite,
        "generators": {s: engine.canonical(t) for s, t in zip(gens.symbols, gens.targets)},
        "cap": args.cap,
        "seed": args.seed,
        "format": args.format,
    }
    if args.family in ("free", "free_commutative"):
        cfg["rank"] = args.rank
    if args.family == "integer_lattice":
        cfg["dim"] = args.dim
    for key in ("N", "radius", "iterations", "rayleigh_samples", "folner_radius", "n",
                "trials", "event", "track"):
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    return cfg


def _rate_json(r):
    if r is None:
        return None
    return {"value": r.value, "horizon": r.horizon,
            "certified_lower_bound": r.certified_lower_bound, "window": r.window}


def _csv_text(header, rows, comments=()):
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _config_comments(cfg):
    return [f"{k} = {json.dumps(v)}" for k, v in cfg.items()]


def emit(args, name, payload_json, csv_text):
    text = json.dumps(payload_json, indent=2) + "\n" if args.format == "json" else csv_text
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, f"{name}.{args.format}")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_cogrowth(args):
    if args.N < 1:
        raise UsageError("-N must be >= 1")
    engine, gens = resolve_semigroup(args)
    cfg = resolved_config(args, engine, gens)
    table = CogrowthTable(engine, gens, args.N, cap=args.cap)

    tracked, seen = [], set()
    for s in [engine.identity, *gens.targets, *(parse_element(engine, gens, w) for w in args.track)]:
        if s not in seen:
            seen.add(s)
            tracked.append(s)
    names = [engine.canonical(s) for s in tracked]
    lam = {name: table.local(s) for name, s in zip(names, tracked)}
    gp = table.gamma_prime()
    g = table.gamma()
    g_rate = gamma_rate(table=table)
    l_rates = {name: (local_rate(table=table, s=s) if args.N >= 2 else None)
               for name, s in zip(names, tracked)}
    check = verify_convolution(None, None, None, table=table) if args.verify else None

    payload = {
        "config": cfg,
        "lambda": {name: {str(n): str(c) for n, c in seq.items()} for name, seq in lam.items()},
        "gamma_prime": {str(n): str(c) for n, c in gp.items()},
        "gamma": {str(n): str(c) for n, c in g.items()},
        "gamma_horizon": table.gamma_horizon(),
        "rates": {"gamma": _rate_json(g_rate), "local": {k: _rate_json(v) for k, v in l_rates.items()}},
    }
    if check is not None:
        payload["convolution_check"] = {"passed": check.passed, "witness": check.witness}

    rows = []
    for n in range(1, 2 * args.N + 1):
        rows.append([n, *(lam[name].get(n, "") for name in names), gp.get(n, ""), g.get(n, "")])
    comments = _config_comments(cfg) + [f"gamma_rate = {g_rate.value!r} (certified lower bound)"]
    comments += [f"local_rate[{k}] = {v.value!r}" for k, v in l_rates.items() if v is not None]
    if check is not None:
        comments.append(f"convolution_check = {'pass' if check.passed else 'FAIL ' + check.witness}")
    text = _csv_text(["n", *(f"lambda_{name}" for name in names), "gamma_prime", "gamma"], rows, comments)
    emit(args, "cogrowth", payload, text)
    return 0 if check is None or check.passed else 1


def cmd_operator(args):
    if args.N < 1:
        raise UsageError("-N must be >= 1")
    engine, gens = resolve_semigroup(args)
    cfg = resolved_config(args, engine, gens)
    rep = operator_report(engine, gens, args.N, radius=args.radius, iterations=args.iterations,
                          rayleigh_samples=args.rayleigh_samples, seed=args.seed, cap=args.cap)
    indeg = rep.indegree
    payload = {
        "config": cfg,
        "walk_norms": [
            {"n": n, "norm_squared": {"numerator": str(q.numerator), "denominator": str(q.denominator)},
             "norm": rep.walk_norms[n]}
            for n, q in rep.walk_norms_squared.items()
        ],
        "walk_identity": {"passed": rep.walk_identity.passed, "witness": rep.walk_identity.witness},
        "spectral_radius_lower_bound": rep.spectral_radius_lower_bound,
        "norm_lower_bound": rep.norm_lower_bound,
        "rayleigh_max": rep.rayleigh_max,
        "rayleigh_samples": rep.rayleigh_samples,
        "indegree": {
            "max_per_generator": indeg.max_indegree,
            "witnesses": [list(w) if w else None for w in indeg.witnesses],
            "analytic_bounded": indeg.analytic_bounded,
        },
    }
    rows = [[n, q.numerator, q.denominator, repr(rep.walk_norms[n])]
            for n, q in rep.walk_norms_squared.items()]
    comments = _config_comments(cfg) + [
        f"walk_identity = {'pass' if rep.walk_identity.passed else 'FAIL'}",
        f"spectral_radius_lower_bound = {rep.spectral_radius_lower_bound!r}",
        f"norm_lower_bound = {rep.norm_lower_bound!r}",
        f"rayleigh_max = {rep.rayleigh_max!r}",
        f"max_right_indegree = {indeg.max_indegree}",
    ]
    emit(args, "operator", payload,
         _csv_text(["n", "norm_sq_numerator", "norm_sq_denominator", "norm"], rows, comments))
    return 0 if rep.walk_identity.passed else 1


def cmd_structure(args):
    engine, gens = resolve_semigroup(args)
    cfg = resolved_config(args, engine, gens)
    payload = {"config": cfg}
    rows = []
    if engine.elements() is not None:
        rep = finite_structure(engine)
        payload["structure"] = rep.as_dict()
        rows += [[k, json.dumps(v)] for k, v in rep.as_dict().items()]
    elif args.folner_radius is None:
        raise UsageError("structure needs a finite table, or --folner-radius for infinite engines")
    if args.folner_radius is not None:
        if args.folner_radius < 0:
            raise UsageError("--folner-radius must be >= 0")
        b = CayleyBall(engine, gens, args.folner_radius, cap=args.cap)
        F = b.elements if engine.has_identity else b.elements[1:]
        if not F:
            raise UsageError("Folner set is empty; use a radius >= 1")
        d = folner_defect(engine, gens, F, set(gens.targets))
        payload["folner"] = {"radius": args.folner_radius, "size": len(F),
                             "defect": {"numerator": str(d.numerator), "denominator": str(d.denominator)},
                             "value": float(d)}
        rows.append(["folner_defect", str(d)])
    emit(args, "structure", payload, _csv_text(["key", "value"], rows, _config_comments(cfg)))
    return 0


def cmd_simulate(args):
    if args.n < 1:
        raise UsageError("-n must be >= 1")
    engine, gens = resolve_semigroup(args)
    cfg = resolved_config(args, engine, gens)
    table = CogrowthTable(engine, gens, args.n, cap=args.cap)
    target = parse_element(engine, gens, args.track)
    results = []
    for n in range(1, args.n + 1):
        if args.event == "local":
            sample = estimate_local(engine, gens, target, n, args.trials, args.seed, args.threads, cap=args.cap)
            exact = exact_local(table, target, n)
        else:
            sample = estimate_coincidence(engine, gens, n, args.trials, args.seed, args.threads, cap=args.cap)
            exact = exact_coincidence(table, n)
        results.append((sample, exact))
    payload = {
        "config": cfg,
        "samples": [
            {"n": s.n, "trials": s.trials, "hits": s.hits, "estimate": s.estimate,
             "stderr": s.stderr, "exact": str(e), "exact_float": float(e),
             "z": (s.estimate - float(e)) / s.stderr if s.stderr else None}
            for s, e in results
        ],
    }
    rows = [[s.n, s.trials, s.hits, repr(s.estimate), repr(s.stderr), str(e)] for s, e in results]
    emit(args, "simulate", payload,
         _csv_text(["n", "trials", "hits", "estimate", "stderr", "exact"], rows, _config_comments(cfg)))
    return 0


COMMANDS = {
    "cogrowth": cmd_cogrowth,
    "operator": cmd_operator,
    "structure": cmd_structure,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cap < 1:
        parser.error("--cap must be >= 1")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"cogrowthkit: error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"cogrowthkit: resource limit: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
