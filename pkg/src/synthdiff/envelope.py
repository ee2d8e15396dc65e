"""Characteristics and envelopes of one-parameter families of plane curves.

A family is an expression F(x, y, t); the t-th curve is the zero set of
F(-, -, t).  A point lies on the characteristic at t0 when F vanishes at
(x, y, t0 + d) for the square-zero d, which is the pair of equations
F = 0, dF/dt = 0.  Eliminating t with a resultant gives a polynomial whose
zero set contains the envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from . import expr as _expr
from . import jet
from .algebra import Polynomial, from_expr, resultant
from .weil import dual_numbers, kth_order

NAMES = ("x", "y", "t")
PLANE = ("x", "y")


class EnvelopeError(ValueError):
    pass


@dataclass(frozen=True)
class Family:
    F: _expr.Expr

    def __post_init__(self):
        if self.F.arity() > 3:
            raise EnvelopeError("a family is an expression in x, y, t only")

    @classmethod
    def parse(cls, text: str) -> "Family":
        return cls(_expr.parse(text, NAMES))

    @property
    def is_polynomial(self) -> bool:
        return self.F.is_polynomial()

    def polynomial(self) -> Polynomial:
        return from_expr(self.F, 3)

    def __str__(self):
        return self.F.to_string(NAMES)


@dataclass(frozen=True)
class CharacteristicSystem:
    F: _expr.Expr
    Ft: _expr.Expr
    Ft_poly: Polynomial | None
    degenerate: bool


@dataclass
class EnvelopeLocus:
    eliminant: Polynomial | None  # in (x, y)
    degenerate: bool
    samples: list[tuple] = field(default_factory=list)  # (t, x, y)

    def eliminant_text(self) -> str | None:
        return None if self.eliminant is None else self.eliminant.to_string(PLANE)


def _mentions_t(e: _expr.Expr) -> bool:
    if isinstance(e, _expr.Var):
        return e.index == 2
    return any(_mentions_t(c) for c in e.children())


def t_derivative_polynomial(fam: Family) -> Polynomial:
    """dF/dt for polynomial F: the ε-coefficient of F(x, y, t + ε) with x, y, t symbolic."""
    D = dual_numbers()
    x, y, t = (D.scalar(Polynomial.variable(i, 3)) for i in range(3))
    u = jet.lift(fam.F, [x, y, t + D.generator(0)])
    c = u.coeffs[1]
    return c if isinstance(c, Polynomial) else Polynomial.constant(c, 3)


def characteristic_system(fam: Family) -> CharacteristicSystem:
    Ft = _expr.Diff(fam.F, 2)
    if fam.is_polynomial:
        poly = t_derivative_polynomial(fam)
        return CharacteristicSystem(fam.F, Ft, poly, poly.is_zero())
    return CharacteristicSystem(fam.F, Ft, None, not _mentions_t(fam.F))


def synthetic_characteristic_check(fam: Family, t0, pt: Sequence, *, numeric: bool = False,
                                   tol=None, prec: int = jet.DEFAULT_PREC) -> bool:
    """Whether F(x0, y0, t0 + ε) = 0 in the dual numbers.

    Exact mode returns True only when both coordinates vanish exactly;
    numeric mode compares them against ``tol``.
    """
    if not numeric and not fam.is_polynomial:
        raise EnvelopeError("exact characteristic check needs a polynomial family")
    D = dual_numbers()
    zero = D.zero()
    point = jet.JetPoint((pt[0], pt[1], t0), (zero, zero, D.generator(0)))
    u = jet.taylor_lift(fam.F, point, numeric=numeric, prec=prec)
    if not numeric:
        return u.is_zero()
    if tol is None:
        tol = _default_tol(prec)
    return all(abs(c) <= tol for c in u.coeffs)


def _default_tol(prec: int) -> float:
    return 1e-30 if prec >= 200 else 1e-12


def envelope_eliminate(fam: Family, *, squarefree: bool = False, t_range=None,
                       seeds: Sequence[tuple] | None = None, prec: int = 53,
                       tol: float | None = None) -> EnvelopeLocus:
    """Eliminate t from F = dF/dt = 0.

    Polynomial families get an exact eliminant (the Sylvester resultant,
    not squarefree-reduced unless asked).  Otherwise, or when ``t_range``
    (a, b, n) is given, points of the characteristics are sampled by damped
    Newton iteration at n parameter values.
    """
    system = characteristic_system(fam)
    eliminant = None
    degenerate = system.degenerate
    if fam.is_polynomial:
        if degenerate:
            eliminant = Polynomial.zero(2)
        else:
            eliminant = _eliminate(fam.polynomial(), system.Ft_poly)
            degenerate = eliminant.is_zero()
            if squarefree and not degenerate:
                eliminant = squarefree_part(eliminant)
    samples = []
    if t_range is not None or not fam.is_polynomial:
        a, b, n = t_range if t_range is not None else (-1, 1, 21)
        samples = sample_characteristics(fam, a, b, int(n), seeds=seeds, prec=prec, tol=tol)
    return EnvelopeLocus(eliminant, degenerate, samples)


def _eliminate(F: Polynomial, Ft: Polynomial) -> Polynomial:
    dF, dFt = F.degree(2), Ft.degree(2)
    if dFt == 0:
        # Res(p, c) = c^deg(p) for c free of t
        res = Ft ** dF
    else:
        res = resultant(F, Ft, 2)
    return res.drop_variables((0, 1))


def squarefree_part(p: Polynomial) -> Polynomial:
    """Squarefree part of a bivariate polynomial, normalised to the original
    leading coefficient."""
    import sympy

    x, y = sympy.symbols("x y")
    sp = sympy.Poly(sum(sympy.Rational(c.numerator, c.denominator) * x**m[0] * y**m[1]
                        for m, c in p.terms.items()), x, y)
    sq = sympy.sqf_part(sp)
    terms = {tuple(int(e) for e in mon): Fraction(int(c.p), int(c.q))
             for mon, c in zip(sq.monoms(), sq.coeffs())}
    out = Polynomial(terms, 2)
    return out * (p.leading_coefficient() / out.leading_coefficient())


def _jets(F: _expr.Expr, x, y, t, prec: int):
    """F, Ft and the (x, y)-Jacobian of (F, Ft), from one second-order lift."""
    W = kth_order(2, 3)
    u = jet.taylor_lift(F, jet.JetPoint.generic((x, y, t), W), numeric=True, prec=prec)
    c = u.coefficient
    val, Fx, Fy, Ft = c((0, 0, 0)), c((1, 0, 0)), c((0, 1, 0)), c((0, 0, 1))
    Fxt, Fyt = c((1, 0, 1)), c((0, 1, 1))
    return (val, Ft), ((Fx, Fy), (Fxt, Fyt))


def _newton(F, t, x, y, prec, tol, max_iter=200):
    with mpmath.workprec(prec):
        x, y, t = mpmath.mpf(x), mpmath.mpf(y), mpmath.mpf(t)
        (r0, r1), J = _jets(F, x, y, t, prec)
        norm = mpmath.sqrt(r0**2 + r1**2)
        for _ in range(max_iter):
            if norm <= tol:
                return x, y
            (a, b), (c, d) = J
            det = a * d - b * c
            if det == 0:
                return None
            dx = -(d * r0 - b * r1) / det
            dy = -(-c * r0 + a * r1) / det
            step = mpmath.mpf(1)
            while step > mpmath.mpf(2) ** -30:
                nx, ny = x + step * dx, y + step * dy
                try:
                    (s0, s1), nJ = _jets(F, nx, ny, t, prec)
                except (jet.JetError, ZeroDivisionError):
                    step /= 2
                    continue
                nnorm = mpmath.sqrt(s0**2 + s1**2)
                if nnorm < norm:
                    x, y, r0, r1, J, norm = nx, ny, s0, s1, nJ, nnorm
                    break
                step /= 2
            else:
                return (x, y) if norm <= tol else None
        return (x, y) if norm <= tol else None


def sample_characteristics(fam: Family, a, b, n: int, *, seeds=None, prec: int = 53,
                           tol: float | None = None) -> list[tuple]:
    """Points (t, x, y) with F = dF/dt = 0 for n values of t in [a, b]."""
    if n < 1:
        raise EnvelopeError("need at least one parameter sample")
    tol = _default_tol(prec) if tol is None else tol
    if seeds is None:
        seeds = [(sx, sy) for sx in (-2, -0.5, 0.5, 2) for sy in (-2, -0.5, 0.5, 2)]
    ts = [a + (b - a) * i / (n - 1) for i in range(n)] if n > 1 else [a]
    out = []
    prev: list[tuple] = []
    for t in ts:
        found: list[tuple] = []
        # continue previous solutions first, shifted along with t
        starts = [(x, y) for x, y in prev] + [(sx, sy) for sx, sy in seeds]
        for sx, sy in starts:
            try:
                sol = _newton(fam.F, t, sx, sy, prec, tol)
            except (jet.JetError, ZeroDivisionError):
                continue
            if sol is None:
                continue
            if all(math.hypot(float(sol[0] - fx), float(sol[1] - fy)) > 1e-6 for fx, fy in found):
                found.append(sol)
        found.sort(key=lambda p: (float(p[0]), float(p[1])))
        out.extend((t, x, y) for x, y in found)
        prev = found
    return out


def touching_check(fam: Family, t0, pt: Sequence, locus: EnvelopeLocus, tol: float = 1e-9) -> bool:
    """First-order contact of S_t0 and the envelope at ``pt``: parallel gradients.

    With a sampled locus the envelope's tangent is estimated from the
    neighbouring samples instead.
    """
    exact = fam.is_polynomial and not any(isinstance(v, float) for v in (t0, *pt))
    x, y = pt
    f_val = jet.evaluate(fam.F, (x, y, t0), numeric=not exact, prec=53)
    if abs(f_val) > tol:
        raise EnvelopeError(f"point is not on the curve at t0 (F = {float(f_val):.3g})")
    gF = jet.gradient(fam.F, (x, y, t0), numeric=not exact, prec=53)[:2]
    gF = [float(v) for v in gF]
    if locus.eliminant is not None and not locus.degenerate:
        E = locus.eliminant
        e_val = E.evaluate((Fraction(x), Fraction(y)) if exact else (x, y))
        if abs(e_val) > tol:
            raise EnvelopeError(f"point is not on the envelope locus (E = {float(e_val):.3g})")
        point = (Fraction(x), Fraction(y)) if exact else (x, y)
        gE = [float(E.diff(0).evaluate(point)), float(E.diff(1).evaluate(point))]
        _require_regular(gF, gE, tol)
        cross = gF[0] * gE[1] - gF[1] * gE[0]
        return abs(cross) <= tol * math.hypot(*gF) * math.hypot(*gE)
    if not locus.samples:
        raise EnvelopeError("locus has neither an eliminant nor samples")
    tangent = _sample_tangent(locus.samples, float(x), float(y))
    _require_regular(gF, tangent, tol)
    dot = gF[0] * tangent[0] + gF[1] * tangent[1]
    return abs(dot) <= tol * math.hypot(*gF) * math.hypot(*tangent)


def _require_regular(g1, g2, tol):
    if math.hypot(*g1) <= tol or math.hypot(*g2) <= tol:
        raise EnvelopeError("singular point - touching undecidable")


def _sample_tangent(samples, x, y):
    pts = [(float(sx), float(sy)) for _t, sx, sy in samples]
    i = min(range(len(pts)), key=lambda k: math.hypot(pts[k][0] - x, pts[k][1] - y))
    near = sorted((k for k in range(len(pts)) if k != i),
                  key=lambda k: math.hypot(pts[k][0] - pts[i][0], pts[k][1] - pts[i][1]))
    if len(near) < 2:
        raise EnvelopeError("not enough samples to estimate a tangent")
    a, b = pts[near[0]], pts[near[1]]
    return (b[0] - a[0], b[1] - a[1])


def grid_intersections(fam: Family, t1, t2, bound: int = 10, step=Fraction(1, 4)) -> list[tuple]:
    """Rational grid points with |x|, |y| <= bound lying on both S_t1 and S_t2."""
    if not fam.is_polynomial:
        raise EnvelopeError("grid intersection needs a polynomial family")
    F = fam.polynomial()
    F1 = F.substitute({2: Fraction(t1)})
    F2 = F.substitute({2: Fraction(t2)})
    step = Fraction(step)
    count = int(bound / step)
    grid = [k * step for k in range(-count, count + 1)]
    hits = []
    for gx in grid:
        for gy in grid:
            p = (gx, gy, Fraction(0))
            if F1.evaluate(p) == 0 and F2.evaluate(p) == 0:
                hits.append((gx, gy))
    return hits
