"""Weil algebras: finite-dimensional quotients Q[x1..xn]/I with I nilpotent.

An algebra is presented by a confluent :class:`~synthdiff.algebra.RewriteSystem`;
its basis is the set of irreducible monomials, listed in increasing graded
order so the unit monomial comes first.  Elements are coefficient vectors on
that basis.

The named families::

    dual_numbers()      Q[x]/(x^2)                          dim 2
    first_order(n)      Q[x1..xn]/(xi*xj)                   dim n+1
    kth_order(k, n)     Q[x1..xn]/(all monomials of degree k+1)
    laplace_algebra()   Q[x1,x2]/(x1^2 - x2^2, x1*x2)       dim 4
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath

from . import expr as _expr
from .algebra import (AlgebraError, Monomial, Polynomial, RewriteSystem, grlex_key,
                      monomials_of_degree, parse_poly)

MAX_BASIS = 10000


class WeilError(ValueError):
    pass


class WeilAlgebra:
    """A Weil algebra given by a rewrite system on ``nvars`` generators."""

    def __init__(self, rules: RewriteSystem, name: str | None = None, max_basis: int = MAX_BASIS):
        self.nvars = rules.nvars
        self.rules = rules
        self.name = name
        self.basis = self._enumerate_basis(max_basis)
        self.index = {m: i for i, m in enumerate(self.basis)}
        self.order = max(sum(m) for m in self.basis)
        self._table = self._structure_constants()
        self._check_weil()
        self.depth = self._loewy_depth()

    def _enumerate_basis(self, bound: int) -> tuple[Monomial, ...]:
        one = (0,) * self.nvars
        seen = {one}
        frontier = [one]
        while frontier:
            nxt = []
            for m in frontier:
                for i in range(self.nvars):
                    mm = list(m)
                    mm[i] += 1
                    mm = tuple(mm)
                    if mm in seen or self.rules.is_reducible(mm):
                        continue
                    seen.add(mm)
                    nxt.append(mm)
                    if len(seen) > bound:
                        raise WeilError(
                            f"quotient is not finite-dimensional (basis exceeds {bound} monomials)")
            frontier = nxt
        return tuple(sorted(seen, key=grlex_key))

    def _structure_constants(self):
        n = len(self.basis)
        table = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                prod = tuple(a + b for a, b in zip(self.basis[i], self.basis[j]))
                nf = self.rules.normal_form(Polynomial.monomial(prod))
                entry = tuple((self.index[m], c.numerator if c.denominator == 1 else c)
                              for m, c in nf.terms.items())
                table[i][j] = table[j][i] = entry
        return table

    def _check_weil(self):
        # the unit monomial must not appear in a product of two nilpotent basis elements
        n = len(self.basis)
        for i in range(1, n):
            for j in range(1, n):
                if any(k == 0 for k, _ in self._table[i][j]):
                    raise WeilError("not a Weil algebra: nilpotent part is not an ideal")
        for i in range(self.nvars):
            g = self.generator(i)
            if nilpotency_order(g) is None:
                raise WeilError(f"not a Weil algebra: generator x{i + 1} is not nilpotent")

    def _loewy_depth(self) -> int:
        """Smallest N with (nilpotent ideal)^(N+1) = 0, from structural supports."""
        ideal = set(range(1, len(self.basis)))
        support = set(ideal)
        depth = 0
        while support:
            depth += 1
            support = {k for i in support for j in ideal for k, _ in self._table[i][j]}
        return depth

    # ----------------------------------------------------------- elements
    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def element(self, coeffs: Sequence) -> "WeilElement":
        return WeilElement(self, coeffs)

    def scalar(self, c) -> "WeilElement":
        return WeilElement(self, [c] + [Fraction(0)] * (len(self.basis) - 1))

    def zero(self) -> "WeilElement":
        return self.scalar(Fraction(0))

    def one(self) -> "WeilElement":
        return self.scalar(Fraction(1))

    def generator(self, i: int) -> "WeilElement":
        m = [0] * self.nvars
        m[i] = 1
        return self.from_polynomial(Polynomial.monomial(tuple(m)))

    def generators(self) -> list["WeilElement"]:
        return [self.generator(i) for i in range(self.nvars)]

    def from_polynomial(self, p: Polynomial) -> "WeilElement":
        if p.nvars != self.nvars:
            raise WeilError("polynomial has the wrong number of variables")
        nf = self.rules.normal_form(p)
        coeffs = [Fraction(0)] * len(self.basis)
        for m, c in nf.terms.items():
            coeffs[self.index[m]] = c
        return WeilElement(self, coeffs)

    def monomial_names(self, names: Sequence[str] | None = None) -> list[str]:
        return [monomial_name(m, names) for m in self.basis]

    def __repr__(self):
        label = self.name or f"<{self.rules}>"
        return f"WeilAlgebra({label}, dim={self.dimension})"


def monomial_name(m: Monomial, names: Sequence[str] | None = None) -> str:
    if sum(m) == 0:
        return "1"
    return str(Polynomial.monomial(m)) if names is None else Polynomial.monomial(m).to_string(names)


def _scalar_like(c) -> bool:
    return isinstance(c, (int, Fraction, float, mpmath.mpf, Polynomial))


def _is_zero(c) -> bool:
    return c == 0


class WeilElement:
    """Coefficient vector on the basis of a Weil algebra.

    Coefficients are Fractions, mpmath floats, or (for computations with
    symbolic parameters) Polynomials.
    """

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: WeilAlgebra, coeffs: Sequence):
        if len(coeffs) != len(algebra.basis):
            raise WeilError(f"expected {len(algebra.basis)} coefficients, got {len(coeffs)}")
        self.algebra = algebra
        self.coeffs = tuple(Fraction(c) if isinstance(c, int) else c for c in coeffs)

    def _other(self, other) -> "WeilElement | None":
        if isinstance(other, WeilElement):
            if other.algebra is not self.algebra:
                raise WeilError("elements belong to different Weil algebras")
            return other
        if _scalar_like(other):
            return self.algebra.scalar(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return WeilElement(self.algebra, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return WeilElement(self.algebra, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return WeilElement(self.algebra, [a + (-b) for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if _scalar_like(other):
            return WeilElement(self.algebra, [a * other for a in self.coeffs])
        o = self._other(other)
        if o is None:
            return NotImplemented
        table = self.algebra._table
        out = [Fraction(0)] * len(self.coeffs)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            row = table[i]
            for j, b in enumerate(o.coeffs):
                if _is_zero(b):
                    continue
                ab = a * b
                for k, c in row[j]:
                    out[k] = out[k] + (ab if c == 1 else ab * c)
        return WeilElement(self.algebra, out)

    __rmul__ = __mul__

    def inverse(self) -> "WeilElement":
        a = self.coeffs[0]
        if isinstance(a, Polynomial):
            if not a.is_constant():
                raise WeilError("non-invertible denominator: symbolic constant term")
            a = a.constant_term()
        if _is_zero(a):
            raise ZeroDivisionError("non-invertible denominator: augmentation is zero")
        inv_a = Fraction(1) / a if isinstance(a, Fraction) else 1 / a
        # u = a(1 + n), u^-1 = a^-1 * sum (-n)^k
        n = (self - self.coeffs[0]) * inv_a
        term = self.algebra.one()
        total = self.algebra.one()
        for _ in range(self.algebra.depth):
            term = term * (-n)
            total = total + term
        return total * inv_a

    def __truediv__(self, other):
        if _scalar_like(other) and not isinstance(other, Polynomial):
            if _is_zero(other):
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / other if isinstance(other, (int, Fraction)) else 1 / other)
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.algebra.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, WeilElement):
            if other.algebra is not self.algebra:
                return False
            o = other
        elif _scalar_like(other):
            o = self.algebra.scalar(other)
        else:
            return NotImplemented
        return all(_is_zero(a + (-b)) for a, b in zip(self.coeffs, o.coeffs))

    __hash__ = None

    def coefficient(self, m: Monomial):
        return self.coeffs[self.algebra.index[tuple(m)]]

    def map(self, fn) -> "WeilElement":
        return WeilElement(self.algebra, [fn(c) for c in self.coeffs])

    def nilpotent_part(self) -> "WeilElement":
        return self - self.coeffs[0]

    def to_polynomial(self) -> Polynomial:
        return Polynomial({m: c for m, c in zip(self.algebra.basis, self.coeffs)}, self.algebra.nvars)

    def as_dict(self, names: Sequence[str] | None = None) -> dict[str, object]:
        return {monomial_name(m, names): c for m, c in zip(self.algebra.basis, self.coeffs)
                if not _is_zero(c)}

    def __repr__(self):
        terms = [f"{c}" if n == "1" else f"{c}*{n}" for n, c in self.as_dict().items()]
        return " + ".join(terms) or "0"


# ------------------------------------------------------------------ operations

def weil_build(nvars: int, relations: RewriteSystem | Iterable[Polynomial | str],
               name: str | None = None) -> WeilAlgebra:
    """Build a Weil algebra from a rewrite system or from relations ``p = 0``.

    Strings may be ``"lhs = rhs"`` or a bare polynomial.  Relations are
    oriented and completed; anything outside monomial and
    monomial-difference rewriting is rejected.
    """
    if isinstance(relations, RewriteSystem):
        return WeilAlgebra(relations, name)
    polys = []
    for r in relations:
        if isinstance(r, str):
            lhs, _, rhs = r.partition("=")
            p = parse_poly(lhs, nvars)
            if rhs.strip():
                p = p - parse_poly(rhs, nvars)
            polys.append(p)
        else:
            polys.append(r)
    try:
        rules = RewriteSystem.from_relations(polys, nvars)
    except AlgebraError as exc:
        raise WeilError(str(exc)) from exc
    return WeilAlgebra(rules, name)


def weil_mul(u: WeilElement, v: WeilElement) -> WeilElement:
    if u.algebra is not v.algebra:
        raise WeilError("elements belong to different Weil algebras")
    return u * v


@lru_cache(maxsize=None)
def weil_tensor(a: WeilAlgebra, b: WeilAlgebra) -> WeilAlgebra:
    """Tensor product; generators of ``b`` are renamed to follow those of ``a``."""
    n = a.nvars + b.nvars
    rules = a.rules.embed(n, 0) + b.rules.embed(n, a.nvars)
    name = f"{a.name}⊗{b.name}" if a.name and b.name else None
    return WeilAlgebra(RewriteSystem(rules, n), name)


def embed_left(u: WeilElement, target: WeilAlgebra) -> WeilElement:
    """Image of ``u`` under W -> W ⊗ V (``target`` from :func:`weil_tensor`)."""
    pad = (0,) * (target.nvars - u.algebra.nvars)
    coeffs = [Fraction(0)] * target.dimension
    for m, c in zip(u.algebra.basis, u.coeffs):
        coeffs[target.index[m + pad]] = c
    return WeilElement(target, coeffs)


def slice_right(u: WeilElement, source: WeilAlgebra, right: Monomial) -> WeilElement:
    """Coefficient of the right-factor monomial ``right`` in ``u`` ∈ source ⊗ V,
    as an element of ``source``."""
    coeffs = [u.coeffs[u.algebra.index[m + tuple(right)]] for m in source.basis]
    return WeilElement(source, coeffs)


def augmentation(u: WeilElement):
    """Constant-term projection (set every nilpotent generator to zero)."""
    return u.coeffs[0]


def nilpotency_order(u: WeilElement) -> int | None:
    """Smallest k with u^(k+1) = 0, or None when u is not nilpotent."""
    if not _is_zero(u.coeffs[0]):
        return None
    k = 0
    p = u
    limit = len(u.algebra.basis) + 1
    while not p.is_zero():
        p = p * u
        k += 1
        if k > limit:
            return None
    return k


def monad_check(alpha, algebra: WeilAlgebra) -> bool:
    """Whether alpha(d) - alpha(0) squares to zero at the generic point d of ``algebra``.

    ``alpha`` is a polynomial Expr (or a sequence of them, for a map into
    R^m).  For the first-order algebras this always holds: the generic
    point of D(n) lies in the first-order neighbourhood of 0.
    """
    maps = [alpha] if isinstance(alpha, _expr.Expr) else list(alpha)
    gens = algebra.generators()
    zero = [algebra.zero()] * algebra.nvars
    for f in maps:
        if not f.is_polynomial():
            raise WeilError("monad_check needs a polynomial map in exact mode")
        if f.arity() > algebra.nvars:
            raise WeilError("map uses more variables than the algebra has generators")
        lift = algebra.scalar
        diff = _expr.evaluate(f, gens, lift_const=lift) - _expr.evaluate(f, zero, lift_const=lift)
        if not (diff * diff).is_zero():
            return False
    return True


# ------------------------------------------------------------- named algebras

@lru_cache(maxsize=None)
def rationals() -> WeilAlgebra:
    return WeilAlgebra(RewriteSystem([], 0), "Q")


@lru_cache(maxsize=None)
def kth_order(k: int, n: int = 1) -> WeilAlgebra:
    """Q[x1..xn] modulo all monomials of degree k+1."""
    if k < 1 or n < 1:
        raise WeilError("need k >= 1 and n >= 1")
    zero = Polynomial.zero(n)
    rules = [(m, zero) for m in monomials_of_degree(n, k + 1)]
    if n == 1:
        name = "D" if k == 1 else f"D_{k}"
    else:
        name = f"D({n})" if k == 1 else f"D_{k}({n})"
    return WeilAlgebra(RewriteSystem(rules, n), name)


def dual_numbers() -> WeilAlgebra:
    return kth_order(1, 1)


def first_order(n: int) -> WeilAlgebra:
    return kth_order(1, n)


@lru_cache(maxsize=None)
def laplace_algebra() -> WeilAlgebra:
    """Q[x1,x2]/(x1^2 - x2^2, x1*x2); basis 1, x1, x2, x1^2."""
    return weil_build(2, ["x1^2 = x2^2", "x1*x2 = 0"], name="DL")


_NAMED = re.compile(r"^\s*(?:(D)|D\((\d+)\)|Dk\((\d+)\s*,\s*(\d+)\)|D_(\d+)(?:\((\d+)\))?|(DL)|(Q))\s*$")
_PRESENTATION = re.compile(r'^\s*(?:weil\s+)?n\s*=\s*(\d+)\s+rels\s*=\s*"([^"]*)"\s*$')


def from_text(text: str) -> WeilAlgebra:
    """``D``, ``D(n)``, ``Dk(k,n)``, ``D_k``, ``DL``, ``Q`` or
    ``weil n=2 rels="x1^2=0; x2^2=0; x1*x2=0"``."""
    m = _NAMED.match(text)
    if m:
        d, n, kk, kn, uk, un, dl, q = m.groups()
        if d:
            return dual_numbers()
        if n:
            return first_order(int(n))
        if kk:
            return kth_order(int(kk), int(kn))
        if uk:
            return kth_order(int(uk), int(un or 1))
        if dl:
            return laplace_algebra()
        return rationals()
    m = _PRESENTATION.match(text)
    if m:
        n = int(m.group(1))
        rels = [r for r in (s.strip() for s in m.group(2).split(";")) if r]
        return weil_build(n, rels)
    raise WeilError(f"cannot parse Weil algebra description {text!r}")
