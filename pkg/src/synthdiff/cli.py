"""``sdg`` command line.

Exit status: 0 on success, 1 when the input is well formed but the
computation is not possible (or a verification suite finds a failure),
2 on usage errors.  Results are JSON on stdout; rationals are written as
"p/q" strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import mpmath

from . import combinat as cb
from . import envelope as env
from . import expr as ex
from . import jet
from . import verify as vf
from . import wavefront as wf
from .algebra import parse_poly
from .groups import GroupError, named_group
from .weil import WeilError, from_text


class UsageError(Exception):
    pass


def scalar_text(c) -> str:
    """Fractions as "p/q", mpmath floats to 50 significant digits."""
    if isinstance(c, mpmath.mpf):
        return mpmath.nstr(c, 50)
    return str(c)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _parse_base(text: str) -> tuple[list[str], list[str]]:
    """``"x=1,y=2/3"`` -> (["x", "y"], ["1", "2/3"]); bare values get x1, x2, ..."""
    names, values = [], []
    for i, part in enumerate(p.strip() for p in text.split(",") if p.strip()):
        if "=" in part:
            n, v = (s.strip() for s in part.split("=", 1))
        else:
            n, v = f"x{i + 1}", part
        if not n.isidentifier():
            raise UsageError(f"bad variable name {n!r} in --base")
        names.append(n)
        values.append(v)
    if not names:
        raise UsageError("--base needs at least one coordinate")
    if len(set(names)) != len(names):
        raise UsageError("repeated variable in --base")
    return names, values


def _scalar_arg(text: str, numeric: bool):
    try:
        if numeric:
            return jet.to_scalar(text, True)
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad number {text!r}") from None


# ------------------------------------------------------------------ commands

def cmd_jet(args) -> int:
    names, raw = _parse_base(args.base)
    f = ex.parse(args.expr, names)
    try:
        W = from_text(args.algebra)
    except WeilError as exc:
        raise UsageError(str(exc)) from None
    with mpmath.workprec(args.prec):
        base = [_scalar_arg(v, args.numeric) for v in raw]
    if args.along is not None:
        if args.along not in names:
            raise UsageError(f"--along {args.along!r} is not a variable of --base")
        if W.nvars != 1:
            raise UsageError("--along needs a one-generator algebra")
        var = names.index(args.along)
        zero = W.zero()
        disp = tuple(W.generator(0) if i == var else zero for i in range(len(base)))
        gen_names = [args.along]
    else:
        if W.nvars != len(base):
            raise UsageError(f"{W.name or 'algebra'} has {W.nvars} generators but --base has "
                             f"{len(base)} coordinates; use --along for a single direction")
        disp = tuple(W.generators())
        gen_names = names
    u = jet.taylor_lift(f, jet.JetPoint(tuple(base), disp), numeric=args.numeric, prec=args.prec)
    labels = W.monomial_names(gen_names)
    coeffs = {lab: scalar_text(c) for lab, c in zip(labels[1:], u.coeffs[1:])}
    _emit({"value": scalar_text(u.coeffs[0]), "coeffs": coeffs})
    return 0


def cmd_weil(args) -> int:
    try:
        W = from_text(args.algebra)
    except WeilError as exc:
        raise UsageError(str(exc)) from None
    names = [f"x{i + 1}" for i in range(W.nvars)]
    out = {
        "algebra": W.name or args.algebra,
        "dimension": W.dimension,
        "basis": W.monomial_names(names),
        "depth": W.depth,
    }
    if args.mul:
        a, b = (W.from_polynomial(parse_poly(t, W.nvars, names)) for t in args.mul)
        out["product"] = {k: scalar_text(v) for k, v in (a * b).as_dict(names).items()}
    _emit(out)
    return 0


def _t_range(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("--t-range is a:b:n")
    try:
        return float(Fraction(parts[0])), float(Fraction(parts[1])), int(parts[2])
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --t-range {text!r}") from None


def cmd_envelope(args) -> int:
    fam = env.Family.parse(args.family)
    t_range = _t_range(args.t_range) if args.t_range else None
    if args.exact and not fam.is_polynomial:
        raise env.EnvelopeError("exact elimination needs a polynomial family")
    locus = env.envelope_eliminate(fam, squarefree=args.squarefree, t_range=t_range)
    out = {"eliminant": locus.eliminant_text(), "degenerate": locus.degenerate}
    if t_range is not None or not fam.is_polynomial:
        out["samples"] = [[float(t), float(x), float(y)] for t, x, y in locus.samples]
    _emit(out)
    return 0


def _load_model(path: str) -> cb.Model:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read model file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"model file is not JSON: {exc}") from None
    return cb.load_model(data)


def _subset(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError("--subset is a comma separated list of point indices") from None


def cmd_forms(args) -> int:
    model = _load_model(args.model)
    if model.form1 is None:
        raise cb.ModelError("model has no 'form1'")
    w, G = model.form1, model.form1.group
    dw = cb.coboundary1(w)
    dist = cb.distribution_from_form(w)
    nontrivial = {",".join(map(str, s)): G.label(dw(*s))
                  for s in cb.simplices(w.space, 2) if dw(*s) != G.identity}
    out = {
        "closed": cb.is_closed(w),
        "involutive": cb.is_involutive(dist),
        "alternating": w.is_alternating(),
        "coboundary": nontrivial,
        "strong_pairs": [[int(i), int(j)] for i, j in zip(*dist.strong.nonzero()) if i < j],
    }
    subset = _subset(args.subset)
    if subset is not None:
        out["integral"] = cb.is_integral_subset(dist, subset)
    _emit(out)
    return 0


def cmd_connection(args) -> int:
    model = _load_model(args.model)
    if model.connection is None and model.affine is None:
        raise cb.ModelError("model has neither 'connection' nor 'lambda'")
    out = {}
    if model.connection is not None:
        conn = model.connection
        S = conn.structure
        curv = {",".join(map(str, s)): S.label(cb.curvature(conn, s))
                for s in cb.simplices(conn.space, 2)
                if cb.curvature(conn, s) != S.unit(s[0])}
        fails = cb.bianchi_failures(conn)
        out["curvature"] = curv
        out["flat"] = not curv
        out["bianchi"] = {"checked": len(cb.simplices(conn.space, 3)), "failures": len(fails),
                          "counterexamples": [list(s) for s in fails[:10]]}
    if model.affine is not None:
        lam = model.affine
        circuits = {}
        for s in cb.simplices(lam.space, 2):
            c = cb.affine_curvature(lam, s)
            if not c.is_identity:
                circuits[",".join(map(str, s))] = {
                    "map": {str(k): v for k, v in c.mapping.items()},
                    "bijective_fixing_base": c.is_bijection}
        out["affine_curvature"] = circuits
        out["affine_flat"] = not circuits
        out["symmetric"] = lam.is_symmetric()
        subset = _subset(args.subset)
        if subset is not None:
            out["geodesic"] = cb.is_geodesic(lam, subset)
    _emit(out)
    return 0


def cmd_wavefront(args) -> int:
    try:
        text = sys.stdin.read() if args.front == "-" else Path(args.front).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read front file: {exc}") from None
    front = wf.read_front_csv(text, closed=not args.open)
    report = wf.offset_front(front, args.s, args.orientation, tol=args.tol)
    csv_text = wf.write_front_csv(report.front)
    summary = {"s": args.s, "orientation": args.orientation, "vertices": len(report.front),
               "closed": report.front.closed, "cusps": report.indices,
               "has_cusps": report.has_cusps}
    if args.format == "csv":
        sys.stdout.write(csv_text)
        sys.stderr.write(json.dumps(summary) + "\n")
        return 0
    if args.out:
        Path(args.out).write_text(csv_text)
        summary["out"] = args.out
    else:
        summary["offset"] = [[float(v) for v in row] for row in
                             zip(*report.front.vertices.T, *report.front.normals.T)]
    _emit(summary)
    return 0


def cmd_verify(args) -> int:
    if args.group is not None:
        if args.suite not in vf.GROUP_SUITES:
            raise UsageError(f"suite {args.suite!r} does not take --group")
        for name in args.group.split(","):
            try:
                named_group(name)
            except GroupError as exc:
                raise UsageError(str(exc)) from None
    if args.trials is not None and args.trials < 0:
        raise UsageError("--trials must be non-negative")
    res = vf.run_suite(args.suite, seed=args.seed, trials=args.trials, group=args.group)
    body = res.as_dict()
    out = {"seed": args.seed, "suite": args.suite}
    if args.group is not None:
        out["group"] = args.group
    # timing goes to stderr so that stdout depends on the seed alone
    seconds = body.pop("seconds")
    out.update({k: v for k, v in body.items() if k not in out})
    _emit(out)
    sys.stderr.write(f"sdg verify: {args.suite} took {seconds:.3f} s\n")
    return 0 if res.passed else 1


# ------------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sdg", description="Jets over Weil algebras, envelopes, combinatorial "
                                         "forms and connections, and plane wave fronts.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    j = sub.add_parser("jet", help="lift an expression to a Weil-algebra point")
    j.add_argument("--expr", required=True, help='e.g. "x^2*exp(y)"')
    j.add_argument("--base", required=True, help='e.g. "x=1,y=2/3"')
    j.add_argument("--algebra", default="D", help='D, D(n), Dk(k,n), D_k(n), DL or weil n=.. rels=".."')
    j.add_argument("--along", help="displace only this variable (one-generator algebras)")
    j.add_argument("--numeric", action="store_true", help="high-precision binary floats")
    j.add_argument("--prec", type=int, default=jet.DEFAULT_PREC, help="mantissa bits in numeric mode")
    j.set_defaults(func=cmd_jet)

    w = sub.add_parser("weil", help="describe a Weil algebra")
    w.add_argument("--algebra", required=True)
    w.add_argument("--mul", nargs=2, metavar=("A", "B"), help="multiply two polynomials in x1..xn")
    w.set_defaults(func=cmd_weil)

    e = sub.add_parser("envelope", help="eliminate t from F = dF/dt = 0")
    e.add_argument("--family", required=True, help='F(x, y, t), e.g. "y-(x-t)^3"')
    mode = e.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="resultant only (polynomial families)")
    mode.add_argument("--t-range", help="sample characteristics at n values in [a, b]: a:b:n (write --t-range=-1:1:21 for a negative a)")
    e.add_argument("--squarefree", action="store_true")
    e.set_defaults(func=cmd_envelope)

    f = sub.add_parser("forms", help="closedness and involutivity of a model's 1-form")
    f.add_argument("--model", required=True, help="model JSON file")
    f.add_argument("--subset", help="point indices to test as an integral subset")
    f.set_defaults(func=cmd_forms)

    c = sub.add_parser("connection", help="curvature and Bianchi identity of a model's connection")
    c.add_argument("--model", required=True, help="model JSON file")
    c.add_argument("--subset", help="point indices to test as a geodesic subset")
    c.set_defaults(func=cmd_connection)

    v = sub.add_parser("wavefront", help="offset a front along its normals")
    v.add_argument("--front", required=True, help="CSV file of x,y,nx,ny rows (- for stdin)")
    v.add_argument("--s", type=float, required=True)
    v.add_argument("--orientation", choices=["outer", "inner"], default="outer")
    v.add_argument("--open", action="store_true", help="the front is an open polyline")
    v.add_argument("--tol", type=float, default=wf.DEFAULT_TOL)
    v.add_argument("--out", help="write the offset front here as CSV")
    v.add_argument("--format", choices=["json", "csv"], default="json")
    v.set_defaults(func=cmd_wavefront)

    r = sub.add_parser("verify", help="run a seeded property suite")
    r.add_argument("--suite", required=True, choices=sorted(vf.SUITES))
    r.add_argument("--group", help="group name(s), comma separated")
    r.add_argument("--trials", type=int)
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ex.ExprError) as exc:
        sys.stderr.write(f"sdg {args.command}: usage error: {exc}\n")
        return 2
    except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
        sys.stderr.write(f"sdg {args.command}: error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
