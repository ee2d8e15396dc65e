"""Lifting expressions to Weil-algebra points.

``taylor_lift(f, JetPoint(base, displacement))`` evaluates ``f`` at
``base + displacement`` where the displacement has nilpotent entries, so
the result is the Taylor expansion of ``f`` truncated at the algebra's
nilpotency depth.  Derivatives, Taylor polynomials and Laplacians are then
read off basis coordinates.

Two modes:

* exact: Fractions throughout.  Function nodes are only accepted where
  their Taylor coefficients are rational (exp, sin, cos at 0; log at 1).
* numeric: mpmath binary floats, 256-bit mantissa by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from . import expr as _expr
from .algebra import Polynomial
from .weil import (WeilAlgebra, WeilElement, dual_numbers, embed_left, first_order, kth_order,
                   laplace_algebra, nilpotency_order, rationals, slice_right, weil_tensor)

DEFAULT_PREC = 256


class JetError(ValueError):
    pass


def to_scalar(x, numeric: bool = False):
    """Coerce to the scalar type of the mode (Fraction or mpf)."""
    if isinstance(x, Polynomial):
        return x
    if numeric:
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        if isinstance(x, str):
            return to_scalar(Fraction(x), True) if "/" in x else mpmath.mpf(x)
        return mpmath.mpf(x)
    if isinstance(x, float):
        raise JetError("exact mode does not accept binary floats; pass a Fraction or string")
    if isinstance(x, mpmath.mpf):
        raise JetError("exact mode does not accept mpmath floats")
    return Fraction(x)


@dataclass(frozen=True)
class JetPoint:
    """``base + displacement`` with nilpotent displacement entries in one algebra."""

    base: tuple
    displacement: tuple

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "displacement", tuple(self.displacement))
        if len(self.base) != len(self.displacement):
            raise JetError("base and displacement must have the same length")
        if not self.displacement:
            raise JetError("empty jet point")
        alg = self.displacement[0].algebra
        for d in self.displacement:
            if d.algebra is not alg:
                raise JetError("displacement entries must share one algebra")
            if d.coeffs[0] != 0:
                raise JetError("displacement must have zero augmentation")

    @property
    def algebra(self) -> WeilAlgebra:
        return self.displacement[0].algebra

    @classmethod
    def generic(cls, base: Sequence, algebra: WeilAlgebra) -> "JetPoint":
        """Base point displaced by the generators of ``algebra`` (one per coordinate)."""
        if algebra.nvars != len(base):
            raise JetError(f"{algebra!r} has {algebra.nvars} generators, point has {len(base)} coordinates")
        return cls(tuple(base), tuple(algebra.generators()))


# ----------------------------------------------------------- function series

def _exact_value(a) -> Fraction:
    if isinstance(a, Polynomial):
        if not a.is_constant():
            raise JetError("function of a symbolic quantity is not supported")
        return a.constant_term()
    return a


def _series(name: str, a, n: int, numeric: bool) -> list:
    """Taylor coefficients g^(k)(a)/k!, k = 0..n."""
    if numeric:
        if name == "exp":
            e = mpmath.exp(a)
            return [e / math.factorial(k) for k in range(n + 1)]
        if name == "log":
            if a <= 0:
                raise JetError(f"log of non-positive number {mpmath.nstr(a, 8)}")
            return [mpmath.log(a)] + [(-1) ** (k - 1) / (k * a**k) for k in range(1, n + 1)]
        s, c = mpmath.sin(a), mpmath.cos(a)
        cyc = [s, c, -s, -c] if name == "sin" else [c, -s, -c, s]
        return [cyc[k % 4] / math.factorial(k) for k in range(n + 1)]

    a = _exact_value(a)
    if name == "exp" and a == 0:
        return [Fraction(1, math.factorial(k)) for k in range(n + 1)]
    if name == "sin" and a == 0:
        cyc = [0, 1, 0, -1]
        return [Fraction(cyc[k % 4], math.factorial(k)) for k in range(n + 1)]
    if name == "cos" and a == 0:
        cyc = [1, 0, -1, 0]
        return [Fraction(cyc[k % 4], math.factorial(k)) for k in range(n + 1)]
    if name == "log":
        if a <= 0:
            raise JetError(f"log of non-positive number {a}")
        if a == 1:
            return [Fraction(0)] + [Fraction((-1) ** (k - 1), k) for k in range(1, n + 1)]
    raise JetError(f"{name}({a}) is irrational; use numeric mode")


def _apply(name: str, u: WeilElement, numeric: bool) -> WeilElement:
    alg = u.algebra
    a = u.coeffs[0]
    cs = _series(name, a, alg.depth, numeric)
    nil = u - a
    total = alg.scalar(cs[0])
    power = alg.one()
    for k in range(1, alg.depth + 1):
        power = power * nil
        if power.is_zero():
            break
        total = total + power * cs[k]
    return total


# ----------------------------------------------------------------- lifting

def lift(f: _expr.Expr, args: Sequence[WeilElement], numeric: bool = False) -> WeilElement:
    """Evaluate ``f`` on Weil elements (all in one algebra)."""
    alg = args[0].algebra if args else rationals()
    funcs = {name: (lambda u, _n=name: _apply(_n, u, numeric)) for name in _expr.FUNCTIONS}

    def diff(node: _expr.Diff, values):
        # first-order lifting into W ⊗ D
        base_alg = values[0].algebra
        tensor = weil_tensor(base_alg, dual_numbers())
        moved = [embed_left(v, tensor) for v in values]
        moved[node.index] = moved[node.index] + tensor.generator(base_alg.nvars)
        out = lift(node.arg, moved, numeric)
        return slice_right(out, base_alg, (1,))

    try:
        return _expr.evaluate(f, list(args), funcs=funcs, diff=diff, lift_const=alg.scalar)
    except ZeroDivisionError as exc:
        msg = str(exc)
        raise JetError(msg if "non-invertible" in msg else f"non-invertible denominator: {msg}") from exc


def _prec_context(numeric: bool, prec: int):
    return mpmath.workprec(prec) if numeric else _Null()


class _Null:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def taylor_lift(f: _expr.Expr, point: JetPoint, *, numeric: bool = False,
                prec: int = DEFAULT_PREC) -> WeilElement:
    """Value of ``f`` at ``point`` as an element of the point's algebra."""
    n = len(point.base)
    if f.arity() > n:
        raise JetError(f"expression uses {f.arity()} variables, point has {n}")
    with _prec_context(numeric, prec):
        alg = point.algebra
        args = [alg.scalar(to_scalar(b, numeric)) + d for b, d in zip(point.base, point.displacement)]
        out = lift(f, args, numeric)
        return out.map(lambda c: to_scalar(c, True)) if numeric else out


def evaluate(f: _expr.Expr, base: Sequence, *, numeric: bool = False, prec: int = DEFAULT_PREC):
    """Plain value of ``f`` (derivative nodes included)."""
    alg = rationals()
    with _prec_context(numeric, prec):
        args = [alg.scalar(to_scalar(b, numeric)) for b in base]
        if f.arity() > len(args):
            raise JetError(f"expression uses {f.arity()} variables, point has {len(args)}")
        value = lift(f, args, numeric).coeffs[0]
        return to_scalar(value, True) if numeric else value


def _unit_displacement(alg: WeilAlgebra, n: int, var: int) -> tuple:
    zero = alg.zero()
    return tuple(alg.generator(0) if i == var else zero for i in range(n))


def derivative(f: _expr.Expr, var: int, base: Sequence, *, numeric: bool = False,
               prec: int = DEFAULT_PREC):
    """Partial derivative in ``var`` at ``base``: the ε-coefficient of the lift to D."""
    base = tuple(base)
    if not 0 <= var < len(base):
        raise JetError(f"variable index {var} out of range")
    D = dual_numbers()
    return taylor_lift(f, JetPoint(base, _unit_displacement(D, len(base), var)),
                       numeric=numeric, prec=prec).coeffs[1]


def gradient(f: _expr.Expr, base: Sequence, *, numeric: bool = False, prec: int = DEFAULT_PREC) -> list:
    """All first partials in one lift to D(n)."""
    n = len(base)
    u = taylor_lift(f, JetPoint.generic(base, first_order(n)), numeric=numeric, prec=prec)
    return list(u.coeffs[1:])


def taylor_poly(f: _expr.Expr, base: Sequence, k: int, *, numeric: bool = False,
                prec: int = DEFAULT_PREC) -> Polynomial:
    """Degree-k Taylor polynomial at ``base`` in the increments h_i = x_i - base_i."""
    u = taylor_lift(f, JetPoint.generic(tuple(base), kth_order(k, len(base))),
                    numeric=numeric, prec=prec)
    return u.to_polynomial()


def laplacian(f: _expr.Expr, base: Sequence, *, numeric: bool = False, prec: int = DEFAULT_PREC):
    """f_xx + f_yy at a point of the plane, via the Laplace algebra.

    On the basis 1, x1, x2, x1^2 the x1^2 coordinate is half the Laplacian.
    """
    base = tuple(base)
    if len(base) != 2:
        raise JetError("laplacian needs a point of the plane")
    W = laplace_algebra()
    u = taylor_lift(f, JetPoint.generic(base, W), numeric=numeric, prec=prec)
    return 2 * u.coefficient((2, 0))


def kl_coefficients(f: _expr.Expr, n: int | None = None, *, numeric: bool = False,
                    prec: int = DEFAULT_PREC) -> tuple[list, bool]:
    """Coefficients (a, b1..bn) of f restricted to D(n) at the origin.

    The flag reports whether the lift has no component outside
    {1, x1..xn}; on D(n) this always holds.
    """
    n = max(f.arity(), 1) if n is None else n
    W = first_order(n)
    u = taylor_lift(f, JetPoint.generic((0,) * n, W), numeric=numeric, prec=prec)
    wanted = [(0,) * n] + [tuple(int(i == j) for j in range(n)) for i in range(n)]
    coeffs = [u.coefficient(m) for m in wanted]
    residual_ok = all(c == 0 for m, c in zip(W.basis, u.coeffs) if m not in wanted)
    return coeffs, residual_ok


def cancel_d(u: _expr.Expr, v: _expr.Expr) -> bool:
    """Decide ``d*u == d*v for all square-zero d`` by comparing ε-coefficients.

    ``u`` and ``v`` may depend polynomially on parameters; the comparison is
    an identity of polynomials in those parameters.
    """
    for e in (u, v):
        if not e.is_polynomial():
            raise JetError("cancel_d works in exact mode on polynomial expressions")
    n = max(u.arity(), v.arity())
    D = dual_numbers()
    params = [D.scalar(Polynomial.variable(i, max(n, 1))) for i in range(n)]
    d = _expr.Var(n)
    args = params + [D.generator(0)]
    lu = lift(d * u, args, numeric=False)
    lv = lift(d * v, args, numeric=False)
    return _as_poly(lu.coeffs[1], n) == _as_poly(lv.coeffs[1], n)


def _as_poly(c, n: int) -> Polynomial:
    return c if isinstance(c, Polynomial) else Polynomial.constant(c, max(n, 1))


def neighbour_order(u, v) -> int | None:
    """Smallest k with (u - v)^(k+1) = 0; None if u - v is not nilpotent."""
    if isinstance(u, WeilElement) or isinstance(v, WeilElement):
        diff = u - v
        if not isinstance(diff, WeilElement):
            raise JetError("cannot subtract these values")
        return nilpotency_order(diff)
    return 0 if u == v else None
