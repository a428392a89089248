"""Command-line front end: ``sepval validate|eval|condition|compose|laws``.

Exit codes: 0 success, 1 a law or invariant is violated (or an operation
fails), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .belief import BeliefAlgebra
from .composition import Density, check_composition_laws_distributive, check_composition_laws_modular, compose
from .conditionals import check_conditional_laws, conditional
from .core import check_axioms
from .errors import DomainSyntaxError, ModelFileError, ModelSyntaxError, ValuationError
from .expr import ExpressionError, result_value, run
from .gaussian import GaussianAlgebra
from .lattice import check_lattice_suite
from .laws import LawReport
from .modelfile import Model, load, parse_result, render_result
from .potentials import PotentialAlgebra
from .quotient import check_separative, equals0, as_quotient
from .structure import belief_witness_report, check_cancellativity, check_regularity

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

BUILTINS = {
    "potentials": lambda: PotentialAlgebra({"A": 2, "B": 2, "C": 2, "D": 2}),
    "gaussian": lambda: GaussianAlgebra((1, 2, 3, 4)),
    "belief": lambda: BeliefAlgebra.multivariate({"A": 2, "B": 2, "C": 2}),
    "belief-partitions": lambda: BeliefAlgebra.partitions((1, 2, 3, 4)),
}


def _only(prefix: str):
    def run_(alg, n, seed, tol):
        rep = check_axioms(alg, n, seed, tol)
        out = LawReport([r for r in rep.results if r.name.startswith(prefix)])
        if not out.results:
            raise UsageError(f"{alg.name} does not declare strong combination")
        return out, None
    return run_


def _witness(alg, n, seed, tol):
    if not isinstance(alg, BeliefAlgebra):
        raise UsageError("regularity-witness applies to belief functions")
    return belief_witness_report()


SUITES = {
    "axioms": (1000, lambda a, n, s, t: (check_axioms(a, n, s, t), None)),
    "a5prime": (1000, _only("A5prime")),
    "separative": (500, lambda a, n, s, t: (check_separative(a, n, s, t), None)),
    "conditionals": (500, lambda a, n, s, t: (check_conditional_laws(a, n, s, t), None)),
    "composition-modular": (500, lambda a, n, s, t: (check_composition_laws_modular(a, n, s, t), None)),
    "composition-distributive": (300, lambda a, n, s, t: (check_composition_laws_distributive(a, n, s, t), None)),
    "regularity": (500, lambda a, n, s, t: (check_regularity(a, n, s, t), None)),
    "cancellativity": (200, lambda a, n, s, t: (check_cancellativity(a, n, s, t), None)),
    "regularity-witness": (1, _witness),
    "lattice": (1000, lambda a, n, s, t: (check_lattice_suite(n=n, seed=s), None)),
}


class UsageError(Exception):
    pass


def _out(text: str) -> None:
    sys.stdout.write(text + "\n")


def _err(text: str) -> None:
    sys.stderr.write(text + "\n")


def _load(path: str) -> Model:
    return load(path)


def _model_error(path: str, exc: ModelFileError) -> int:
    where = f"{path}:{exc.line}:{exc.column}" if exc.line is not None else path
    msg = str(exc).split(" (line ")[0]
    _err(f"{where}: error: {msg}")
    return EXIT_USAGE if isinstance(exc, ModelSyntaxError) else EXIT_FAIL


def _print_value(value, args, model: Model) -> int:
    text = render_result(value, args.format)
    _out(text)
    if args.format == "text":
        back = parse_result(model, text)
        tol = args.tol if args.tol is not None else model.algebra.tol
        if not equals0(as_quotient(back), as_quotient(value), max(tol, 1e-9)):
            _err("error: rendered result does not re-parse to the computed value")
            return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    model = _load(args.model)
    _out(f"OK {args.model}: instance={model.instance} valuations={len(model.valuations)} "
         f"quotients={len(model.quotients)}")
    if args.format == "text":
        for name, v in model.valuations.items():
            _out(f"  valuation {name}: {v.kind} on {v.domain}")
        for name, q in model.quotients.items():
            _out(f"  quotient {name}: {q.kind} on {q.domain} over {q.den_domain}")
    return EXIT_OK


def cmd_eval(args) -> int:
    model = _load(args.model)
    value = result_value(run(args.expr, model))
    return _print_value(value, args, model)


def _joint(model: Model):
    if not model.valuations:
        raise UsageError("model has no valuations")
    vals = list(model.valuations.values())
    out = vals[0]
    for v in vals[1:]:
        out = out.combine(v)
    return out


def cmd_condition(args) -> int:
    model = _load(args.model)
    if args.valuation:
        if args.valuation not in model.valuations:
            raise UsageError(f"unknown valuation {args.valuation!r}")
        phi = model.valuations[args.valuation]
    else:
        phi = _joint(model)
    x = model.parse_domain(args.of)
    y = model.parse_domain(args.given)
    d = Density.of(conditional(phi, x, y).body)
    return _print_value(result_value(d), args, model)


def cmd_compose(args) -> int:
    model = _load(args.model)
    names = [s.strip() for s in args.order.split(",") if s.strip()]
    if not names:
        raise UsageError("--order needs at least one name")
    try:
        items = [Density.of(model.lookup(n)) for n in names]
    except KeyError as exc:
        raise UsageError(f"unknown name {exc.args[0]!r}") from None
    out = items[0]
    for i, d in enumerate(items[1:], start=1):
        try:
            out = compose(out, d)
        except ValuationError as exc:
            raise ExpressionError(f"composition step {i} ({names[i]}): {type(exc).__name__}: {exc}") from None
    if args.project:
        out = out.project(model.parse_domain(args.project))
    return _print_value(result_value(out), args, model)


def _target(target: str):
    if target in BUILTINS:
        return target, BUILTINS[target]()
    if Path(target).is_file():
        return target, load(target).algebra
    raise UsageError(f"unknown target {target!r}: expected a model file or one of {', '.join(BUILTINS)}")


def cmd_laws(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}: expected one of {', '.join(SUITES)}")
    name, alg = _target(args.target)
    default_n, fn = SUITES[args.suite]
    n = args.n if args.n is not None else default_n
    rep, extra = fn(alg, n, args.seed, args.tol)
    if args.counterexamples:
        rep.save_counterexamples(args.counterexamples)
    status = "PASS" if rep.ok else "FAIL"
    if args.format == "compact":
        _out(f"{args.suite} {name} seed={args.seed} n={n} laws={len(rep.results)} "
             f"failed={len(rep.failed())} {status}")
    else:
        _out(f"suite {args.suite} on {name} seed={args.seed} n={n}")
        for r in rep.results:
            _out(r.line())
            if not r.passed and r.counterexample and not r.exploratory and not args.counterexamples:
                for ln in r.counterexample.splitlines():
                    _out(f"  | {ln}")
        if extra:
            _out(extra)
        _out(f"RESULT {status}")
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="equality tolerance override")
    common.add_argument("--format", choices=("text", "compact"), default="text")

    p = argparse.ArgumentParser(prog="sepval", description="Separative valuation algebras: models, pipelines, law suites.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="check a model file")
    v.add_argument("model")
    v.set_defaults(func=cmd_validate)

    e = sub.add_parser("eval", parents=[common], help="evaluate a pipeline expression")
    e.add_argument("model")
    e.add_argument("expr", help="e.g. 'p > q @ {A,B}'; operators * @ | > are left-associative")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("condition", parents=[common], help="conditional of a valuation")
    c.add_argument("model")
    c.add_argument("--of", required=True, help="upper domain x")
    c.add_argument("--given", required=True, help="lower domain y <= x")
    c.add_argument("--valuation", help="name of the valuation (default: combination of all)")
    c.set_defaults(func=cmd_condition)

    k = sub.add_parser("compose", parents=[common], help="left fold of the compositional operator")
    k.add_argument("model")
    k.add_argument("--order", required=True, help="comma-separated names")
    k.add_argument("--project", help="post-projection domain")
    k.set_defaults(func=cmd_compose)

    law = sub.add_parser("laws", parents=[common], help="run a law suite")
    law.add_argument("target", help=f"model file or builtin instance ({', '.join(BUILTINS)})")
    law.add_argument("suite", help=", ".join(SUITES))
    law.add_argument("--seed", type=int, default=0)
    law.add_argument("--n", type=int, default=None, help="number of randomized cases")
    law.add_argument("--counterexamples", metavar="DIR", help="write counterexamples to DIR")
    law.set_defaults(func=cmd_laws)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _err(f"error: {exc}")
        return EXIT_USAGE
    except ModelFileError as exc:
        return _model_error(getattr(args, "model", None) or getattr(args, "target", ""), exc)
    except DomainSyntaxError as exc:
        _err(f"error: {exc}")
        return EXIT_USAGE
    except ExpressionError as exc:
        _err(f"error: {exc}")
        return EXIT_FAIL if str(exc).startswith(("step", "composition step")) else EXIT_USAGE
    except ValuationError as exc:
        _err(f"error: {type(exc).__name__}: {exc}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
