"""Batch command-line interface with structured JSON reports.

Exit codes: 0 = success / claims pass; 2 = UNDECIDED-AT-MU or claims fail
(distinguished in the JSON); 1 = usage or parse error.  Every report carries
the certification window, and the seed and coordinate-change matrix when
randomness was involved.  All randomness flows from a single --seed flag.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import is_dataclass
from fractions import Fraction
from pathlib import Path

from . import approx, diagram, equising, parser, stdbasis
from .division import hironaka_divide
from .errors import LocalRingError, ParseError, UndecidedAtPrecision
from .kernel import EXACT, PrecisionSeries
from .order import LinearForm, form_label, std_form
from .parser import IdealFile, load_ideal_file, parse_expression


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def jsonable(value):
    """Recursively convert report values into JSON-encodable data."""
    if isinstance(value, Fraction):
        return str(value)
    if value is EXACT:
        return "EXACT"
    if isinstance(value, PrecisionSeries):
        return {
            "terms": [[list(e), str(c)] for e, c in value.sorted_terms()],
            "prec": "EXACT" if value.prec is EXACT else str(value.prec),
        }
    if isinstance(value, LinearForm):
        return form_label(value)
    if is_dataclass(value) and not isinstance(value, type):
        return jsonable(vars(value))
    if isinstance(value, dict):
        if all(isinstance(k, str) for k in value):
            return {k: jsonable(v) for k, v in value.items()}
        return [[jsonable(k), jsonable(v)] for k, v in sorted(value.items())]
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    return str(value)


def _load(path: str) -> IdealFile:
    return load_ideal_file(Path(path).read_text(encoding="utf-8"))


def _window(form, mu) -> dict:
    return {"form": form_label(form), "mu": str(Fraction(mu))}


def _form_of(args, f: IdealFile) -> "LinearForm":
    if getattr(args, "order", None):
        from .order import parse_form
        return parse_form(args.order, f.n)
    return f.form()


def _cmd_divide(args) -> tuple[int, dict]:
    f = _load(args.file)
    form = _form_of(args, f)
    mu = Fraction(args.mu) if args.mu else f.mu
    gens = f.generators(form, mu)
    dividend = parse_expression(args.dividend, f.var_names, form, mu)
    result = hironaka_divide(dividend, gens, form, mu)
    regions = [{"index": i, "head": list(a)}
               for i, a in enumerate(result.partition.alphas)]
    report = {
        "command": "divide",
        "window": _window(form, mu),
        "dividend": args.dividend,
        "regions": regions,
        "quotients": [jsonable(q) for q in result.quotients],
        "remainder": jsonable(result.remainder),
        "remainder_zero_up_to_mu": result.remainder_is_zero,
    }
    return 0, report


def _cmd_sbasis(args) -> tuple[int, dict]:
    f = _load(args.file)
    form = _form_of(args, f)
    mu = Fraction(args.mu) if args.mu else f.mu
    skip = not args.no_coprime_skip
    if args.action == "check":
        basis = stdbasis.becker_check(f.generators(form, mu), form, mu,
                                      use_coprime_skip=skip)
        code = 0 if basis.verified else 2
        report = {
            "command": "sbasis check",
            "window": _window(form, mu),
            "verified": basis.verified,
            "pairs": [{"i": c.i, "j": c.j, "status": c.status}
                      for c in basis.pair_checks],
            "heads": [list(h) for h in basis.heads],
        }
        return code, report
    basis = stdbasis.complete(f.presentation(form, mu), form, mu,
                              use_coprime_skip=skip)
    adjoined = basis.gens[len(f.gen_sources):]
    report = {
        "command": "sbasis complete",
        "window": _window(form, mu),
        "verified": basis.verified,
        "heads": [list(h) for h in basis.heads],
        "adjoined": [jsonable(g) for g in adjoined],
        "steps": len(basis.completion_steps),
    }
    return 0, report


def _cmd_diagram(args) -> tuple[int, dict]:
    f = _load(args.file)
    form = _form_of(args, f)
    mu = Fraction(args.mu) if args.mu else f.mu
    basis = stdbasis.complete(f.presentation(form, mu), form, mu)
    D = diagram.diagram_of(basis)
    return 0, {
        "command": "diagram",
        "window": _window(form, mu),
        "vertices": [list(v) for v in D.vertices],
    }


def _cmd_hs(args) -> tuple[int, dict]:
    f = _load(args.file)
    mu = Fraction(args.mu) if args.mu else f.mu
    form = std_form(f.n)
    eta = int(args.eta)
    basis = stdbasis.complete(f.presentation(form, mu), form, mu)
    table = diagram.hilbert_samuel(basis, eta)
    return 0, {
        "command": "hs",
        "window": _window(form, mu),
        "eta_max": eta,
        "values": list(table.values),
    }


def _cmd_oracle(args) -> tuple[int, dict]:
    f = _load(args.file)
    form = std_form(f.n)
    eta = int(args.eta)
    mu = max(f.mu, eta)
    I = f.presentation(form, mu)
    values = [diagram.oracle_jet_quotient_dim(I, e) for e in range(eta + 1)]
    return 0, {
        "command": "oracle hs",
        "window": _window(form, mu),
        "eta_max": eta,
        "values": values,
    }


def _cmd_flat(args) -> tuple[int, dict]:
    f = _load(args.file)
    mu = Fraction(args.mu) if args.mu else f.mu
    extra = tuple(int(w) for w in args.weights.split(",")) if args.weights else ()
    I = f.presentation(std_form(f.n), mu)
    rep = diagram.flatness_weight_search(I, args.k, mu,
                                         regenerate=f.regenerator(),
                                         extra_weights=extra)
    code = 0 if rep.verdict == "FLAT" else 2
    return code, {
        "command": "flat",
        "window": {"form": form_label(std_form(f.n)), "mu": str(mu),
                   "weighted_window": str(rep.window)},
        "k": rep.k,
        "verdict": rep.verdict,
        "l0": rep.l0,
        "l_used": str(rep.l_used),
        "base_vertices": [list(v) for v in rep.base_vertices],
        "vertices": [list(v) for v in rep.vertices],
        "offending": [list(v) for v in rep.offending],
        "base_matches_evaluated": rep.base_matches_evaluated,
    }


def _cmd_dim(args) -> tuple[int, dict]:
    f = _load(args.file)
    mu = Fraction(args.mu) if args.mu else f.mu
    I = f.presentation(std_form(f.n), mu)
    rep = diagram.axis_vertex_dimension(I, mu, trials=args.trials, seed=args.seed)
    return 0, {
        "command": "dim",
        "window": _window(std_form(f.n), mu),
        "seed": rep.seed,
        "trials": rep.trials,
        "matrix": jsonable(rep.matrix),
        "k_best": rep.k_best,
        "dim_upper_bound": rep.upper_bound,
        "note": "probabilistic upper bound; tightness depends on sampled changes",
    }


def _cmd_reduction(args) -> tuple[int, dict]:
    f = _load(args.file)
    mu = Fraction(args.mu) if args.mu else f.mu
    I = f.presentation(std_form(f.n), mu)
    rep = diagram.reduction_exponent(I, args.k, mu)
    code = 0 if rep.all_ok else 2
    return code, {
        "command": "reduction",
        "window": _window(std_form(f.n), mu),
        "k": rep.k,
        "axis_degrees": list(rep.axis_degrees),
        "d": rep.d,
        "eta": rep.eta,
        "memberships": [[list(b), ok] for b, ok in rep.monomial_checks],
        "all_ok": rep.all_ok,
    }


def _cmd_perturb(args) -> tuple[int, dict]:
    f = _load(args.file)
    mu = Fraction(args.mu) if args.mu else f.mu
    form = std_form(f.n)
    I = f.presentation(form, f.mu)
    deltas = tuple(parse_expression(src, f.var_names, form, 2 * mu)
                   for src in args.delta or [])
    while len(deltas) < len(I.gens):
        deltas = deltas + (PrecisionSeries(f.n, {}),)
    spec = approx.PerturbationSpec(I, mu, form, deltas)
    out = approx.perturb(spec)
    return 0, {
        "command": "perturb",
        "window": _window(form, mu),
        "generators": [jsonable(g) for g in out.gens],
    }


def _cmd_ci(args) -> tuple[int, dict]:
    f = _load(args.file)
    mu = Fraction(args.mu) if args.mu else f.mu
    form = std_form(f.n)
    I = f.presentation(form, mu)
    deltas = tuple(parse_expression(src, f.var_names, form, mu * 2)
                   for src in args.delta or [])
    while len(deltas) < len(I.gens):
        deltas = deltas + (PrecisionSeries(f.n, {}),)
    rep = approx.ci_stability_experiment(I, mu, deltas, seed=args.seed,
                                         trials=args.trials)
    rep["command"] = "ci-experiment"
    rep["window"] = _window(form, mu)
    code = 0 if rep.get("all_equal") else 2
    return code, jsonable(rep)


def _cmd_example82(args) -> tuple[int, dict]:
    h = None
    if args.h is not None:
        h = parse_expression(args.h, ("z",), std_form(1), args.mu)
    rep = approx.cm_counterexample_runner(args.mu, h, verify_mu=args.verify_mu)
    rep["command"] = "example82"
    rep["window"] = _window(std_form(3), args.mu)
    code = 0 if rep["all_pass"] else 2
    return code, jsonable(rep)


def _cmd_tower(args) -> tuple[int, dict]:
    f = _load(args.file)
    mu = Fraction(args.mu) if args.mu else f.mu
    gens = f.generators(std_form(f.n), mu)
    tower = equising.build_tower(gens, mu, seed=args.seed)
    levels = []
    for lvl in tower.levels:
        levels.append({
            "index": lvl.index,
            "is_one": lvl.is_one,
            "degree": lvl.degree,
            "disc_index": lvl.disc_index,
            "vanish_certificates": list(lvl.vanish_certificates),
            "unit_constant": jsonable(lvl.unit_constant),
            "poly": jsonable(lvl.poly) if lvl.poly is not None else None,
        })
    report = {
        "command": f"tower {args.action}",
        "window": _window(std_form(f.n), mu),
        "seed": args.seed,
        "coordinate_changes": jsonable(tower.coordinate_changes),
        "levels": levels,
    }
    if args.action == "build":
        return 0, report
    validation = equising.validate_tower(tower)
    report["validation"] = jsonable(validation)
    return (0 if validation["all_pass"] else 2), report


def _build_argparser() -> _Parser:
    top = _Parser(prog="localring", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, mu=True, order=False):
        p.add_argument("--file", required=True)
        if mu:
            p.add_argument("--mu", default=None)
        if order:
            p.add_argument("--order", default=None,
                           help="override the file's order: std, w:..., split:k=,l=")

    p = sub.add_parser("divide")
    common(p, order=True)
    p.add_argument("--dividend", required=True)
    p.set_defaults(fn=_cmd_divide)

    p = sub.add_parser("sbasis")
    p.add_argument("action", choices=["check", "complete"])
    common(p, order=True)
    p.add_argument("--no-coprime-skip", action="store_true")
    p.set_defaults(fn=_cmd_sbasis)

    p = sub.add_parser("diagram")
    common(p, order=True)
    p.set_defaults(fn=_cmd_diagram)

    p = sub.add_parser("hs")
    common(p)
    p.add_argument("--eta", required=True, type=int)
    p.set_defaults(fn=_cmd_hs)

    p = sub.add_parser("oracle")
    p.add_argument("action", choices=["hs"])
    common(p, mu=False)
    p.add_argument("--eta", required=True, type=int)
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("flat")
    common(p)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--weights", default=None,
                   help="extra split weights to try, comma separated")
    p.set_defaults(fn=_cmd_flat)

    p = sub.add_parser("dim")
    common(p)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_dim)

    p = sub.add_parser("reduction")
    common(p)
    p.add_argument("--k", required=True, type=int)
    p.set_defaults(fn=_cmd_reduction)

    p = sub.add_parser("perturb")
    common(p)
    p.add_argument("--delta", action="append")
    p.set_defaults(fn=_cmd_perturb)

    p = sub.add_parser("ci-experiment")
    common(p)
    p.add_argument("--delta", action="append")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=4)
    p.set_defaults(fn=_cmd_ci)

    p = sub.add_parser("example82")
    p.add_argument("--mu", required=True, type=int)
    p.add_argument("--h", default=None)
    p.add_argument("--verify-mu", dest="verify_mu", type=int, default=None)
    p.set_defaults(fn=_cmd_example82)

    p = sub.add_parser("tower")
    p.add_argument("action", choices=["build", "validate"])
    common(p)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_tower)

    return top


def run(argv) -> tuple[int, dict]:
    """Dispatch a command line; returns (exit code, JSON-ready report)."""
    try:
        args = _build_argparser().parse_args(argv)
    except UsageError as exc:
        return 1, {"error": "usage", "detail": str(exc)}
    try:
        return args.fn(args)
    except UndecidedAtPrecision as exc:
        return 2, {"error": "UNDECIDED-AT-MU", "detail": str(exc)}
    except ParseError as exc:
        return 1, {"error": "parse", "detail": str(exc), "position": exc.pos}
    except (LocalRingError, OSError) as exc:
        return 1, {"error": type(exc).__name__, "detail": str(exc)}


def main() -> None:
    code, report = run(sys.argv[1:])
    print(json.dumps(report, indent=2, sort_keys=True))
    sys.exit(code)


if __name__ == "__main__":
    main()
