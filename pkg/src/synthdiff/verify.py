"""Seeded property suites.

Each suite draws its cases from ``random.Random(seed)`` so a run is
reproducible value for value, and reports every failing case.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product

import mpmath
import numpy as np

from . import combinat as cb
from . import expr as ex
from . import jet
from .algebra import from_expr
from .groups import FiniteGroup, named_group
from .weil import first_order, monad_check


@dataclass
class SuiteResult:
    suite: str
    seed: int
    trials: int
    checked: int = 0
    failures: int = 0
    counterexamples: list = field(default_factory=list)
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, case: dict, keep: int = 10):
        self.failures += 1
        if len(self.counterexamples) < keep:
            self.counterexamples.append(case)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        d["seconds"] = round(self.seconds, 3)
        return d


# ------------------------------------------------------------ random inputs

def random_space(rng: random.Random, n: int, density: float = 0.6) -> cb.NeighbourSpace:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return cb.NeighbourSpace.from_edges(n, edges)


def random_connection(rng: random.Random, space: cb.NeighbourSpace,
                      group: FiniteGroup) -> cb.GroupoidConnection:
    vals = {(i, j): rng.randrange(group.order)
            for i in range(space.size) for j in range(i + 1, space.size) if space.is_nbr(i, j)}
    return cb.GroupoidConnection.from_values(space, group, vals)


def random_one_form(rng: random.Random, space: cb.NeighbourSpace, group: FiniteGroup) -> cb.Form:
    vals = {(i, j): rng.randrange(group.order)
            for i in range(space.size) for j in range(i + 1, space.size) if space.is_nbr(i, j)}
    return cb.Form.one_form(space, group, vals)


def random_rational(rng: random.Random, num: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_polynomial_expr(rng: random.Random, nvars: int, depth: int = 3) -> ex.Expr:
    """Sum/product/power tree over variables and small rationals."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.6:
            return ex.Var(rng.randrange(nvars))
        return ex.Const(random_rational(rng))
    op = rng.choice("+-*^")
    if op == "^":
        return ex.Pow(random_polynomial_expr(rng, nvars, depth - 1), rng.randint(0, 3))
    a = random_polynomial_expr(rng, nvars, depth - 1)
    b = random_polynomial_expr(rng, nvars, depth - 1)
    return {"+": ex.Add, "-": ex.Sub, "*": ex.Mul}[op](a, b)


def random_smooth_expr(rng: random.Random, nvars: int, depth: int = 5) -> ex.Expr:
    """Expression of depth <= ``depth`` that is defined on all of R^n.

    Logs and quotients are guarded: log(1 + u^2), u / (1 + v^2); exp is
    applied to bounded arguments so values stay moderate.
    """
    if depth <= 1 or rng.random() < 0.15:
        if rng.random() < 0.7:
            return ex.Var(rng.randrange(nvars))
        return ex.Const(random_rational(rng, 3, 3))
    kind = rng.choice(["add", "sub", "mul", "div", "pow", "exp", "log", "sin", "cos"])
    sub = lambda: random_smooth_expr(rng, nvars, depth - 1)
    if kind in ("add", "sub", "mul"):
        return {"add": ex.Add, "sub": ex.Sub, "mul": ex.Mul}[kind](sub(), sub())
    if kind == "div":
        return ex.Div(random_smooth_expr(rng, nvars, depth - 1),
                      ex.Add(ex.Const(Fraction(1)), ex.Pow(random_smooth_expr(rng, nvars, depth - 3), 2)))
    if kind == "pow":
        return ex.Pow(sub(), rng.randint(2, 3))
    if kind == "log":
        return ex.Func("log", ex.Add(ex.Const(Fraction(1)), ex.Pow(random_smooth_expr(rng, nvars, depth - 2), 2)))
    if kind == "exp":
        return ex.Func("exp", ex.Func("sin", random_smooth_expr(rng, nvars, depth - 2)))
    return ex.Func(kind, sub())


# ------------------------------------------------------------------ suites

def suite_bianchi(seed: int = 0, trials: int = 200, group: str = "S3,S4",
                  exhaustive: bool = True) -> SuiteResult:
    """Bianchi identity on every 3-simplex.

    With ``exhaustive`` every Z2-valued connection on the complete 4-point
    space is checked first; then ``trials`` random connections over
    ``group`` (a comma list, used in turn) on random spaces with 3..6 points.
    """
    res = SuiteResult("bianchi", seed, trials)
    t0 = time.perf_counter()
    rng = random.Random(seed)
    if exhaustive:
        Z2 = named_group("Z2")
        K4 = cb.NeighbourSpace.complete(4)
        pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
        for bits in product(range(2), repeat=len(pairs)):
            conn = cb.GroupoidConnection.from_values(K4, Z2, dict(zip(pairs, bits)))
            for s in cb.simplices(K4, 3):
                res.checked += 1
                if not cb.bianchi_check(conn, s):
                    res.fail({"group": "Z2", "connection": list(bits), "simplex": list(s)})
    names = [g.strip() for g in group.split(",")]
    for k in range(trials):
        G = named_group(names[k % len(names)])
        space = random_space(rng, rng.randint(3, 6), density=rng.uniform(0.4, 1.0))
        conn = random_connection(rng, space, G)
        res.checked += len(cb.simplices(space, 3))
        for s in cb.bianchi_failures(conn):
            res.fail({"group": G.name, "trial": k, "simplex": list(s),
                      "connection": {f"{i},{j}": G.label(int(conn.arrows[i, j]))
                                     for i, j in zip(*np.nonzero(space.nbr))}})
    res.seconds = time.perf_counter() - t0
    return res


def all_spaces(n: int):
    """Every neighbour space on points 0..n-1 (labelled)."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for bits in product((False, True), repeat=len(pairs)):
        yield cb.NeighbourSpace.from_edges(n, [p for p, b in zip(pairs, bits) if b])


def all_one_forms(space: cb.NeighbourSpace, group: FiniteGroup):
    edges = [(i, j) for i in range(space.size) for j in range(i + 1, space.size) if space.is_nbr(i, j)]
    for vals in product(range(group.order), repeat=len(edges)):
        yield cb.Form.one_form(space, group, dict(zip(edges, vals)))


def suite_closed_involutive(seed: int = 0, trials: int = 200, group: str = "Z2,Z3",
                            max_points: int = 4) -> SuiteResult:
    """closed ⇒ involutive: exhaustive over 1-forms on every space with at most
    ``max_points`` points for each listed group, then ``trials`` random forms
    (half of them coboundaries) on spaces of up to 6 points over groups of
    order at most 6."""
    res = SuiteResult("closed-involutive", seed, trials)
    t0 = time.perf_counter()
    closed_seen = 0
    for name in (g.strip() for g in group.split(",")):
        G = named_group(name)
        for n in range(1, max_points + 1):
            for space in all_spaces(n):
                for w in all_one_forms(space, G):
                    res.checked += 1
                    if cb.is_closed(w):
                        closed_seen += 1
                        if not cb.is_involutive(cb.distribution_from_form(w)):
                            res.fail({"group": name, "nbr": space.nbr.astype(int).tolist(),
                                      "form": w.values.tolist()})
    rng = random.Random(seed)
    small = ["Z2", "Z3", "Z4", "Z5", "Z6", "S3"]
    for k in range(trials):
        G = named_group(rng.choice(small))
        space = random_space(rng, rng.randint(2, 6), density=rng.uniform(0.3, 1.0))
        if k % 2:
            w = cb.coboundary0(cb.zero_form(space, G, [rng.randrange(G.order) for _ in range(space.size)]))
        else:
            w = random_one_form(rng, space, G)
        res.checked += 1
        if cb.is_closed(w):
            closed_seen += 1
            if not cb.is_involutive(cb.distribution_from_form(w)):
                res.fail({"group": G.name, "trial": k, "nbr": space.nbr.astype(int).tolist(),
                          "form": w.values.tolist()})
    res.detail["closed_forms"] = closed_seen
    res.seconds = time.perf_counter() - t0
    return res


def suite_dd(seed: int = 0, trials: int = 500, group: str = "S3") -> SuiteResult:
    """d(df) = e for random 0-forms on random spaces."""
    res = SuiteResult("dd", seed, trials)
    t0 = time.perf_counter()
    rng = random.Random(seed)
    G = named_group(group)
    for k in range(trials):
        space = random_space(rng, rng.randint(1, 6), density=rng.uniform(0.3, 1.0))
        f = [rng.randrange(G.order) for _ in range(space.size)]
        res.checked += 1
        if not cb.is_closed(cb.coboundary0(cb.zero_form(space, G, f))):
            res.fail({"trial": k, "nbr": space.nbr.astype(int).tolist(), "f": [G.label(g) for g in f]})
    res.seconds = time.perf_counter() - t0
    return res


def _sympy_equal(u: ex.Expr, v: ex.Expr, n: int) -> bool:
    """Independent decision of u == v by sympy expansion."""
    import sympy

    names = syms_names(n)
    text = f"({u.to_string(names)}) - ({v.to_string(names)})"
    return sympy.expand(sympy.sympify(text.replace("^", "**"))) == 0


def syms_names(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(max(n, 1))]


def _rewrite_equal(rng: random.Random, u: ex.Expr, nvars: int) -> ex.Expr:
    """An expression equal to ``u`` as a polynomial but built differently."""
    w = random_polynomial_expr(rng, nvars, 2)
    choice = rng.randrange(3)
    if choice == 0:
        return ex.Sub(ex.Add(u, w), w)
    if choice == 1:
        return ex.Mul(ex.Const(Fraction(1)), ex.Add(ex.Mul(u, ex.Const(Fraction(2))), ex.Neg(u)))
    # expanded normal form, parsed back
    return ex.parse(from_expr(u, nvars).to_string(syms_names(nvars)), syms_names(nvars))


def suite_cancellation(seed: int = 0, trials: int = 100) -> SuiteResult:
    """cancel_d against sympy on random pairs, every other pair engineered equal."""
    res = SuiteResult("cancellation", seed, trials)
    t0 = time.perf_counter()
    rng = random.Random(seed)
    equal_pairs = 0
    for k in range(trials):
        nvars = rng.randint(1, 3)
        u = random_polynomial_expr(rng, nvars, 3)
        if k % 2 == 0:
            v = _rewrite_equal(rng, u, nvars)
        elif rng.random() < 0.5:
            v = ex.Add(u, ex.Const(random_rational(rng)))
        else:
            v = random_polynomial_expr(rng, nvars, 3)
        expected = _sympy_equal(u, v, nvars)
        equal_pairs += expected
        got = jet.cancel_d(u, v)
        res.checked += 1
        if got != expected:
            res.fail({"u": u.to_string(syms_names(nvars)), "v": v.to_string(syms_names(nvars)),
                      "expected": expected, "got": got})
    res.detail["equal_pairs"] = equal_pairs
    res.seconds = time.perf_counter() - t0
    return res


def suite_monad(seed: int = 0, trials: int = 100) -> SuiteResult:
    """Polynomial maps R^n -> R send D(n) into the first-order neighbourhood
    of their value at 0, for n = 2 and 3 alternately."""
    res = SuiteResult("monad", seed, trials)
    t0 = time.perf_counter()
    rng = random.Random(seed)
    for k in range(trials):
        n = 2 + k % 2
        maps = [random_polynomial_expr(rng, n, 3) for _ in range(rng.randint(1, 3))]
        res.checked += 1
        if not monad_check(maps, first_order(n)):
            res.fail({"n": n, "maps": [m.to_string(syms_names(n)) for m in maps]})
    res.seconds = time.perf_counter() - t0
    return res


def central_difference(f: ex.Expr, base, var: int, h, prec: int = jet.DEFAULT_PREC):
    with mpmath.workprec(prec):
        h = mpmath.mpf(h)
        up = list(base)
        dn = list(base)
        up[var] = up[var] + h
        dn[var] = dn[var] - h
        fu = jet.evaluate(f, up, numeric=True, prec=prec)
        fd = jet.evaluate(f, dn, numeric=True, prec=prec)
        return (fu - fd) / (2 * h)


def suite_derivative(seed: int = 0, trials: int = 100, depth: int = 5, rel_tol: float = 1e-20,
                     prec: int = jet.DEFAULT_PREC) -> SuiteResult:
    """Dual-number derivatives against central differences with step 1e-30."""
    res = SuiteResult("derivative", seed, trials)
    t0 = time.perf_counter()
    rng = random.Random(seed)
    worst = 0.0
    for k in range(trials):
        nvars = rng.randint(1, 3)
        f = random_smooth_expr(rng, nvars, depth)
        base = [random_rational(rng, 4, 4) for _ in range(nvars)]
        var = rng.randrange(nvars)
        with mpmath.workprec(prec):
            mbase = [mpmath.mpf(b.numerator) / b.denominator for b in base]
            d = jet.derivative(f, var, mbase, numeric=True, prec=prec)
            fd = central_difference(f, mbase, var, mpmath.mpf("1e-30"), prec)
            scale = max(abs(d), abs(fd))
            err = abs(d - fd) / scale if scale > mpmath.mpf("1e-40") else abs(d - fd)
        worst = max(worst, float(err))
        res.checked += 1
        if err > rel_tol:
            res.fail({"f": f.to_string(syms_names(nvars)), "base": [str(b) for b in base],
                      "var": var, "dual": mpmath.nstr(d, 30), "fd": mpmath.nstr(fd, 30),
                      "rel_err": float(err)})
    res.detail["worst_rel_err"] = worst
    res.seconds = time.perf_counter() - t0
    return res


def hessian_trace(f: ex.Expr, base) -> Fraction:
    """f_xx + f_yy from the degree-2 Taylor polynomial (coefficients of h1^2, h2^2 doubled)."""
    p = jet.taylor_poly(f, base, 2)
    return 2 * (p.terms.get((2, 0), Fraction(0)) + p.terms.get((0, 2), Fraction(0)))


def suite_laplacian(seed: int = 0, trials: int = 100) -> SuiteResult:
    """Laplace-algebra Laplacian equals the Hessian trace, exactly."""
    res = SuiteResult("laplacian", seed, trials)
    t0 = time.perf_counter()
    rng = random.Random(seed)
    for k in range(trials):
        f = random_polynomial_expr(rng, 2, 4)
        if rng.random() < 0.5:
            f = ex.Div(f, ex.Add(ex.Const(Fraction(1)), ex.Pow(random_polynomial_expr(rng, 2, 2), 2)))
        base = [random_rational(rng), random_rational(rng)]
        got, want = jet.laplacian(f, base), hessian_trace(f, base)
        res.checked += 1
        if got != want:
            res.fail({"f": f.to_string(["x", "y"]), "base": [str(b) for b in base],
                      "laplacian": str(got), "hessian_trace": str(want)})
    res.seconds = time.perf_counter() - t0
    return res


def suite_huygens(seed: int = 0, trials: int = 20, tol: float = 1e-9) -> SuiteResult:
    """Offsets of sampled circles land on the concentric circles."""
    from . import wavefront as wf

    res = SuiteResult("huygens", seed, trials)
    t0 = time.perf_counter()
    rng = random.Random(seed)
    for k in range(trials):
        c = (rng.uniform(-5, 5), rng.uniform(-5, 5))
        r = rng.uniform(0.5, 4)
        s = rng.uniform(0.05, 0.95) * r
        B = wf.OrientedFront.circle(c, r, rng.choice([64, 128, 256]))
        for sign, target in ((1, r + s), (-1, r - s)):
            out = wf.offset_front(B, s, sign)
            radii = np.hypot(*(out.front.vertices - np.asarray(c)).T)
            err = float(np.abs(radii - target).max())
            res.checked += 1
            if err > tol or out.has_cusps:
                res.fail({"center": c, "r": r, "s": s, "orientation": sign, "max_err": err,
                          "cusps": out.indices[:10]})
    res.seconds = time.perf_counter() - t0
    return res


SUITES = {
    "bianchi": suite_bianchi,
    "closed-involutive": suite_closed_involutive,
    "dd": suite_dd,
    "cancellation": suite_cancellation,
    "monad": suite_monad,
    "derivative": suite_derivative,
    "laplacian": suite_laplacian,
    "huygens": suite_huygens,
}

# suites that take a group argument
GROUP_SUITES = {"bianchi", "closed-involutive", "dd"}


def run_suite(name: str, seed: int = 0, trials: int | None = None, group: str | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    kwargs = {"seed": seed}
    if trials is not None:
        kwargs["trials"] = trials
    if group is not None:
        if name not in GROUP_SUITES:
            raise ValueError(f"suite {name!r} does not take a group")
        kwargs["group"] = group
    return SUITES[name](**kwargs)
