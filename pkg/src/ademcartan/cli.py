"""Command line: ``ademcartan {verify,expand,adem,sq,solve,secondary}``.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 bad usage or
input, 3 a resource limit was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Iterable, Sequence

from . import suites
from .cochains import BUNDLED, ComplexFormatError, cohomology, load_model, sq
from .gcells import dG
from .gf2 import InconsistentSystem
from .report import CheckResult
from .steenrod import A2, B2, DEFAULT_FUEL, FuelExhausted, SqSyntaxError, normal_form, parse_sq
from .tree4 import alpha, u

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Emitter:
    """Writes text lines or JSON records, one per entry, in a fixed order."""

    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def record(self, rec: dict[str, Any], text: str) -> None:
        if self.fmt == "records":
            print(json.dumps(rec, default=str), file=self.stream)
        else:
            print(text, file=self.stream)

    def results(self, results: Iterable[CheckResult]) -> int:
        ok = True
        for r in results:
            ok &= r.ok
            self.record(r.record(), r.text())
        return EXIT_OK if ok else EXIT_FAIL


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected two integers 'm,p'") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "records"), default="text")
    common.add_argument("--jobs", type=_positive, default=1)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="ademcartan", parents=[common],
                                     description="Adem-Cartan operad workbench over F2")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[common], help="run a verification sweep")
    vsub = verify.add_subparsers(dest="kind", required=True)
    p = vsub.add_parser("identities", parents=[common])
    p.add_argument("--max-m", type=_positive, default=12)
    p.add_argument("--max-n", type=_nonneg, default=16)
    p.add_argument("--max-x", type=_nonneg, default=6)
    p = vsub.add_parser("d2", parents=[common])
    p.add_argument("--max-n", type=_positive, default=12)
    p = vsub.add_parser("lemma51", parents=[common])
    p.add_argument("--max-p", type=_nonneg, default=8)
    p.add_argument("--sample-p", type=_nonneg, nargs="*", default=[9, 10])
    p.add_argument("--samples", type=_positive, default=20000)
    p.add_argument("--bound", type=_nonneg, default=256)
    p = vsub.add_parser("diagonal", parents=[common])
    p.add_argument("--max-m", type=_positive, default=8)
    p.add_argument("--max-n", type=_nonneg, default=16)
    p.add_argument("--max-x", type=_nonneg, default=4)
    p.add_argument("--max-adem", type=_nonneg, default=24)
    p = vsub.add_parser("relations", parents=[common])
    p.add_argument("--complex", action="append", help="model file or bundled name (repeatable)")
    p.add_argument("--samples", type=_positive, default=1000)

    expand = sub.add_parser("expand", parents=[common], help="render u, alpha or dG")
    esub = expand.add_subparsers(dest="what", required=True)
    p = esub.add_parser("u", parents=[common])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p = esub.add_parser("alpha", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p = esub.add_parser("dg", parents=[common])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    adem = sub.add_parser("adem", parents=[common], help="Adem rewriting")
    asub = adem.add_subparsers(dest="action", required=True)
    p = asub.add_parser("reduce", parents=[common])
    p.add_argument("expr")
    p.add_argument("--mode", choices=(B2, A2), default=B2)
    p.add_argument("--fuel", type=_positive, default=DEFAULT_FUEL)

    p = sub.add_parser("sq", parents=[common], help="table of Steenrod squares on a model")
    p.add_argument("--complex", required=True)

    p = sub.add_parser("solve", parents=[common], help="solve for an arity-4 G-action")
    p.add_argument("--complex", required=True)
    p.add_argument("--max-n", type=_positive, required=True)
    p.add_argument("--check-functional", action="append", default=[])

    p = sub.add_parser("secondary", parents=[common], help="chain-level secondary operation")
    p.add_argument("--complex", required=True)
    p.add_argument("--cocycle", required=True, help="basis names joined by '+'")
    p.add_argument("--relation", required=True, help='e.g. "Sq^1 Sq^1"')
    p.add_argument("--target", type=_pair, help="m,p (found automatically when omitted)")
    return parser


# ---------------------------------------------------------------------------
# subcommands

def cmd_verify(args, out: Emitter) -> int:
    if args.kind == "identities":
        results = suites.identities(args.max_m, args.max_n, args.max_x)
    elif args.kind == "d2":
        results = suites.d2(args.max_n, jobs=args.jobs)
    elif args.kind == "lemma51":
        results = suites.lemma51(args.max_p, args.sample_p, args.samples, args.bound,
                                 seed=args.seed, jobs=args.jobs)
    elif args.kind == "diagonal":
        results = suites.diagonal(args.max_m, args.max_n, args.max_x, args.max_adem)
    else:
        models = args.complex or list(BUNDLED)
        for ref in models:
            load_model(ref)  # surface file errors before forking
        results = suites.relations(models, args.samples, seed=args.seed, jobs=args.jobs)
    return out.results(results)


def cmd_expand(args, out: Emitter) -> int:
    try:
        if args.what == "u":
            if args.m < 1:
                raise UsageError("u needs m >= 1")
            value, params = u(args.m, args.n, args.x), {"m": args.m, "n": args.n, "x": args.x}
        elif args.what == "alpha":
            value, params = alpha(args.n, args.p), {"n": args.n, "p": args.p}
        else:
            value, params = dG(args.m, args.n), {"m": args.m, "n": args.n}
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = str(value)
    out.record({"expand": args.what, **params, "value": text}, text)
    return EXIT_OK


def cmd_adem(args, out: Emitter) -> int:
    try:
        poly = parse_sq(args.expr)
        result = normal_form(poly, args.mode, args.fuel)
    except SqSyntaxError as exc:
        raise UsageError(f"parse error: {exc}") from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = str(result)
    out.record({"input": args.expr, "mode": args.mode, "normal_form": text}, text)
    return EXIT_OK


def cmd_sq(args, out: Emitter) -> int:
    A = load_model(args.complex)
    H = cohomology(A)
    names: dict[tuple[int, int], str] = {}
    for k in range(0, A.top_degree + 1):
        for idx, h in enumerate(H.basis(k)):
            names[(k, h.coords)] = f"h{k}" if H.dim(k) == 1 else f"h{k}_{idx}"
            rep = H.rep(h)
            out.record({"class": names[(k, h.coords)], "degree": k, "rep": A.render(rep)},
                       f"{names[(k, h.coords)]} = [{A.render(rep)}]")

    def show(c) -> str:
        if not c.coords:
            return "0"
        return " + ".join(names[(c.degree, 1 << b)] for b in range(H.dim(c.degree)) if (c.coords >> b) & 1)

    from .cochains import product_class

    for k in range(0, A.top_degree + 1):
        for h in H.basis(k):
            label = names[(k, h.coords)]
            for r in range(0, A.top_degree + 1):
                value = sq(A, H, h, r)
                unstable = r > k
                note = ""
                if unstable:
                    note = "instability"
                elif r == k and value.coords and value == product_class(A, H, h, h):
                    note = f"{label}^2"
                text = f"Sq^{r}({label}) = {show(value)}" + (f"  [{note}]" if note else "")
                out.record({"class": label, "r": r, "value": show(value), "note": note}, text)
    return EXIT_OK


def cmd_solve(args, out: Emitter) -> int:
    from .solver import assemble, functional_constant, named_functional, solve_structure

    A = load_model(args.complex)
    S = assemble(A, args.max_n)
    base = {"model": A.label, "max_n": args.max_n, "unknowns": S.n_unknowns, "rows": S.n_rows}
    try:
        sol = solve_structure(S)
    except InconsistentSystem as exc:
        labels = [str(tuple(x)) for x in S.witness_labels(exc.witness)[:8]]
        out.record({**base, "solution": False, "witness": labels},
                   f"solution: no  witness rows: {', '.join(labels)}")
        return EXIT_FAIL
    out.record({**base, "solution": True, "kernel_dim": sol.kernel_dim},
               f"solution: yes  unknowns={S.n_unknowns} rows={S.n_rows} kernel_dim={sol.kernel_dim}")
    status = EXIT_OK
    for name in args.check_functional:
        try:
            f, c = named_functional(S, name)
        except KeyError as exc:
            raise UsageError(str(exc)) from exc
        verdict = functional_constant(S, f, c)
        status = status if verdict else EXIT_FAIL
        out.record({"functional": name, "constant": c, "holds": verdict},
                   f"{'PASS' if verdict else 'FAIL'} functional {name} == {c} on all solutions")
    return status


def cmd_secondary(args, out: Emitter) -> int:
    from .solver import (
        AdemRelationData,
        PreconditionError,
        assemble,
        enumerate_b_choices,
        find_target,
        secondary_rep,
        solve_structure,
    )

    A = load_model(args.complex)
    try:
        c = A.element(*[s.strip() for s in args.cocycle.split("+")])
    except KeyError as exc:
        raise UsageError(f"unknown basis element {exc}") from exc
    n = A.degree_of(c)
    if n is None:
        raise UsageError("cocycle is zero")
    try:
        poly = parse_sq(args.relation)
    except SqSyntaxError as exc:
        raise UsageError(f"parse error: {exc}") from exc
    pairs = [tuple(mono) for mono in poly.sorted_terms()]
    if any(len(p) != 2 for p in pairs):
        raise UsageError("relation must be a sum of length-2 monomials")
    target = args.target
    if target is None:
        found = find_target(n, pairs)
        if not found:
            out.record({"relation": args.relation, "target": None}, "no cell realises this relation")
            return EXIT_FAIL
        target = found[0]
    try:
        R = AdemRelationData(tuple(pairs), n, target)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    sol = solve_structure(assemble(A, target[1] + 1))
    try:
        cls = secondary_rep(A, sol.action, c, R)
        seen = enumerate_b_choices(A, sol.action, c, R)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from exc
    invariant = seen == {cls.coords}
    rec = {"model": A.label, "cocycle": args.cocycle, "relation": args.relation,
           "target": list(target), **cls.record(), "b_choice_invariant": invariant}
    out.record(rec, f"secondary class in degree {cls.degree}: {rec['coords']}  "
                    f"target=(m={target[0]}, p={target[1]})  b-choice invariant: {'yes' if invariant else 'no'}")
    return EXIT_OK if invariant else EXIT_FAIL


COMMANDS = {
    "verify": cmd_verify,
    "expand": cmd_expand,
    "adem": cmd_adem,
    "sq": cmd_sq,
    "solve": cmd_solve,
    "secondary": cmd_secondary,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Emitter(args.format)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, ComplexFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FuelExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
