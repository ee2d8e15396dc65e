"""Sparse multivariate polynomials over the rationals, monomial rewrite
systems for nilpotency ideals, and Sylvester resultants.

Monomials are exponent tuples of length ``nvars``.  Terms are ordered by
graded lexicographic order in which later variables are larger
(``x1 < x2 < ... < xn``), so that a relation such as ``x2^2 = x1^2``
orients as ``x2^2 -> x1^2``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

import mpmath

from . import expr as _expr

Monomial = tuple[int, ...]


class AlgebraError(ValueError):
    pass


def grlex_key(m: Monomial):
    return (sum(m), m[::-1])


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """a / b if b divides a, else None."""
    q = tuple(x - y for x, y in zip(a, b))
    return None if any(e < 0 for e in q) else q


def _mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _is_scalar(c) -> bool:
    return isinstance(c, (int, Fraction, float, mpmath.mpf))


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps monomial -> nonzero coefficient.

    Coefficients are Fractions in exact work, but any field-like type with
    mixed Fraction arithmetic (mpmath floats) is tolerated.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, nvars: int = 1):
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != nvars:
                raise AlgebraError(f"monomial {m} does not have {nvars} exponents")
            if any(e < 0 for e in m):
                raise AlgebraError(f"negative exponent in {m}")
            if isinstance(c, int):
                c = Fraction(c)
            if c != 0:
                clean[m] = c
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        m = [0] * nvars
        m[i] = 1
        return cls({tuple(m): Fraction(1)}, nvars)

    @classmethod
    def monomial(cls, m: Monomial, c=Fraction(1)) -> "Polynomial":
        return cls({tuple(m): c}, len(m))

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise AlgebraError("zero polynomial has no leading monomial")
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree(self, var: int) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        return max((m[var] for m in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def coefficients_in(self, var: int) -> list["Polynomial"]:
        """Coefficients of ``var^0, var^1, ...`` as polynomials (same nvars, var absent)."""
        out: list[dict] = [dict() for _ in range(self.degree(var) + 1)]
        for m, c in self.terms.items():
            k = m[var]
            mm = list(m)
            mm[var] = 0
            out[k][tuple(mm)] = c
        return [Polynomial(d, self.nvars) for d in out]

    def diff(self, var: int) -> "Polynomial":
        out = {}
        for m, c in self.terms.items():
            if m[var]:
                mm = list(m)
                mm[var] -= 1
                out[tuple(mm)] = c * m[var]
        return Polynomial(out, self.nvars)

    def __call__(self, *point):
        return self.evaluate(point)

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise AlgebraError(f"expected {self.nvars} values, got {len(point)}")
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * x**e
            total = total + v
        return total

    def substitute(self, values: Mapping[int, object]) -> "Polynomial":
        """Substitute scalars for some variables, keeping nvars."""
        out: dict = {}
        for m, c in self.terms.items():
            v = c
            mm = list(m)
            for i, x in values.items():
                if mm[i]:
                    v = v * x ** mm[i]
                    mm[i] = 0
            key = tuple(mm)
            out[key] = out.get(key, 0) + v
        return Polynomial(out, self.nvars)

    def embed(self, nvars: int, offset: int = 0) -> "Polynomial":
        """Rename x_i to x_{i+offset} inside a ring with ``nvars`` variables."""
        if offset + self.nvars > nvars:
            raise AlgebraError("embedding does not fit")
        out = {}
        for m, c in self.terms.items():
            mm = [0] * nvars
            mm[offset:offset + self.nvars] = m
            out[tuple(mm)] = c
        return Polynomial(out, nvars)

    def drop_variables(self, keep: Sequence[int]) -> "Polynomial":
        """Project onto the variables in ``keep``; dropped ones must not occur."""
        out = {}
        for m, c in self.terms.items():
            if any(m[i] for i in range(self.nvars) if i not in keep):
                raise AlgebraError("cannot drop a variable that occurs")
            out[tuple(m[i] for i in keep)] = c
        return Polynomial(out, len(keep))

    # arithmetic
    def _coerce(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial) and not _is_scalar(other):
            raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise AlgebraError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
            return other
        return Polynomial.constant(other, self.nvars)

    def __add__(self, other):
        if not isinstance(other, Polynomial) and not _is_scalar(other):
            return NotImplemented
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        if not isinstance(other, Polynomial) and not _is_scalar(other):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial) and not _is_scalar(other):
            return NotImplemented
        if _is_scalar(other):
            return Polynomial({m: c * other for m, c in self.terms.items()}, self.nvars)
        other = self._coerce(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out, self.nvars)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if not other.is_constant() or other.is_zero():
                raise AlgebraError("division by a non-constant polynomial")
            other = other.constant_term()
        if other == 0:
            raise ZeroDivisionError("polynomial division by zero")
        inv = Fraction(1) / other if isinstance(other, (int, Fraction)) else 1 / other
        return self * inv

    def __rtruediv__(self, other):
        if not self.is_constant() or self.is_zero():
            raise AlgebraError("division by a non-constant polynomial")
        return Polynomial.constant(other, self.nvars) / self.constant_term()

    def __pow__(self, n: int):
        if n < 0:
            raise AlgebraError("negative power of a polynomial")
        result = Polynomial.constant(Fraction(1), self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Quotient of an exact division; raises if ``other`` does not divide."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("exact division by zero polynomial")
        lm, lc = other.leading_monomial(), other.leading_coefficient()
        rem = self
        quot: dict = {}
        while rem:
            m = rem.leading_monomial()
            q = _mono_div(m, lm)
            if q is None:
                raise AlgebraError("division is not exact")
            c = rem.terms[m] / lc
            quot[q] = quot.get(q, 0) + c
            rem = rem - other * Polynomial({q: c}, self.nvars)
        return Polynomial(quot, self.nvars)

    # comparison / display
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for i, e in enumerate(m):
                if e:
                    n = _expr.var_name(i, names)
                    factors.append(n if e == 1 else f"{n}^{e}")
            neg = c < 0
            mag = -c if neg else c
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.to_string()!r}, nvars={self.nvars})"


def variables(nvars: int) -> list[Polynomial]:
    return [Polynomial.variable(i, nvars) for i in range(nvars)]


def from_expr(e: _expr.Expr, nvars: int | None = None) -> Polynomial:
    """Expand a polynomial expression; raises for function nodes or
    non-constant denominators."""
    if not e.is_polynomial():
        raise AlgebraError(f"expression is not polynomial: {e}")
    n = max(e.arity(), 1) if nvars is None else nvars
    return _expr.evaluate(e, variables(n), lift_const=lambda c: Polynomial.constant(c, n))


def parse_poly(text: str, nvars: int | None = None, names: Sequence[str] | None = None) -> Polynomial:
    """Parse ``x1..xn`` (aliases ``x, y, t``) polynomial text."""
    e = _expr.parse(text, names)
    if nvars is None:
        nvars = len(names) if names is not None else max(e.arity(), 1)
    if e.arity() > nvars:
        raise AlgebraError(f"{text!r} uses more than {nvars} variables")
    return from_expr(e, nvars)


def poly_arith(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise AlgebraError(f"unknown operation {op!r}")


# ------------------------------------------------------------ rewriting

class RewriteSystem:
    """Rules ``lhs -> rhs`` with monomial left-hand sides.

    Every rhs must be zero or have a smaller leading monomial than its lhs,
    and the system must be confluent; both are checked on construction.
    """

    def __init__(self, rules: Iterable[tuple[Monomial, Polynomial]], nvars: int):
        self.nvars = nvars
        checked = []
        for lhs, rhs in rules:
            lhs = tuple(lhs)
            if len(lhs) != nvars or rhs.nvars != nvars:
                raise AlgebraError("rule does not match nvars")
            if sum(lhs) == 0:
                raise AlgebraError("a rule may not rewrite the unit monomial")
            if rhs and grlex_key(rhs.leading_monomial()) >= grlex_key(lhs):
                raise AlgebraError(f"rule {lhs} -> {rhs} is not decreasing")
            checked.append((lhs, rhs))
        self.rules = tuple(checked)
        bad = self.critical_pair_failures()
        if bad:
            raise AlgebraError(f"rewrite system is not confluent (critical monomial {bad[0][0]})")

    @classmethod
    def from_relations(cls, relations: Iterable[Polynomial], nvars: int,
                       complete: bool = True, max_rounds: int = 50) -> "RewriteSystem":
        """Orient relations ``p = 0`` into rules; optionally add the missing
        rules produced by critical pairs (only monomial and monomial-difference
        rules are admitted)."""
        rules = []
        for p in relations:
            if p.nvars != nvars:
                raise AlgebraError("relation does not match nvars")
            if p:
                rules.append(_orient(p))
        if complete:
            for _ in range(max_rounds):
                trial = cls.__new__(cls)
                trial.nvars, trial.rules = nvars, tuple(rules)
                new = []
                for _m, a, b in trial.critical_pair_failures():
                    d = trial.normal_form(a - b)
                    if d:
                        rule = _orient(d)
                        if rule not in rules and rule not in new:
                            new.append(rule)
                if not new:
                    break
                rules.extend(new)
            else:
                raise AlgebraError("rule completion did not terminate")
        for lhs, rhs in rules:
            if len(rhs.terms) > 1:
                raise AlgebraError(
                    "relations fall outside monomial / monomial-difference rewriting")
        return cls(rules, nvars)

    def _find(self, m: Monomial):
        for lhs, rhs in self.rules:
            q = _mono_div(m, lhs)
            if q is not None:
                return q, rhs
        return None

    def is_reducible(self, m: Monomial) -> bool:
        return self._find(m) is not None

    def normal_form(self, p: Polynomial) -> Polynomial:
        if p.nvars != self.nvars:
            raise AlgebraError("nvars mismatch")
        work = dict(p.terms)
        result = {}
        while work:
            m = max(work, key=grlex_key)
            c = work.pop(m)
            hit = self._find(m)
            if hit is None:
                result[m] = c
                continue
            q, rhs = hit
            for rm, rc in rhs.terms.items():
                nm = _mono_mul(q, rm)
                v = work.get(nm, 0) + c * rc
                if v != 0:
                    work[nm] = v
                else:
                    work.pop(nm, None)
        return Polynomial(result, self.nvars)

    def critical_pair_failures(self) -> list[tuple[Monomial, Polynomial, Polynomial]]:
        """Critical pairs whose two one-step reducts have different normal forms."""
        failures = []
        rules = self.rules
        for i in range(len(rules)):
            for j in range(i + 1, len(rules)):
                (l1, r1), (l2, r2) = rules[i], rules[j]
                if not any(a and b for a, b in zip(l1, l2)):
                    continue  # coprime lhs: always joinable
                lcm = _mono_lcm(l1, l2)
                a = r1 * Polynomial.monomial(_mono_div(lcm, l1))
                b = r2 * Polynomial.monomial(_mono_div(lcm, l2))
                if self.normal_form(a) != self.normal_form(b):
                    failures.append((lcm, a, b))
        return failures

    def is_confluent(self) -> bool:
        return not self.critical_pair_failures()

    def embed(self, nvars: int, offset: int) -> list[tuple[Monomial, Polynomial]]:
        out = []
        for lhs, rhs in self.rules:
            m = [0] * nvars
            m[offset:offset + self.nvars] = lhs
            out.append((tuple(m), rhs.embed(nvars, offset)))
        return out

    def __repr__(self):
        rs = "; ".join(f"{Polynomial.monomial(l)} -> {r}" for l, r in self.rules)
        return f"RewriteSystem({rs}, nvars={self.nvars})"


def _orient(p: Polynomial) -> tuple[Monomial, Polynomial]:
    lm = p.leading_monomial()
    lc = p.terms[lm]
    rest = Polynomial({m: -c / lc for m, c in p.terms.items() if m != lm}, p.nvars)
    return lm, rest


def normal_form(p: Polynomial, rules: RewriteSystem) -> Polynomial:
    return rules.normal_form(p)


def monomials_of_degree(nvars: int, degree: int) -> list[Monomial]:
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        m = [0] * nvars
        for i in combo:
            m[i] += 1
        out.append(tuple(m))
    return out


# ------------------------------------------------------------ resultants

def sylvester_matrix(p: Polynomial, q: Polynomial, var: int) -> list[list[Polynomial]]:
    """Sylvester matrix with the coefficients of ``p`` in the first rows."""
    a = p.coefficients_in(var)[::-1]  # leading coefficient first
    b = q.coefficients_in(var)[::-1]
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    zero = Polynomial.zero(p.nvars)
    rows = []
    for i in range(n):
        rows.append([zero] * i + a + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + b + [zero] * (size - n - 1 - i))
    return rows


def determinant(matrix: list[list[Polynomial]]) -> Polynomial:
    """Fraction-free (Bareiss) determinant over the polynomial ring."""
    n = len(matrix)
    if n == 0:
        raise AlgebraError("empty matrix")
    nv = matrix[0][0].nvars
    M = [row[:] for row in matrix]
    sign = 1
    prev = Polynomial.constant(Fraction(1), nv)
    for k in range(n - 1):
        if not M[k][k]:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return Polynomial.zero(nv)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]).exact_div(prev)
            M[i][k] = Polynomial.zero(nv)
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


def resultant(p: Polynomial, q: Polynomial, var: int) -> Polynomial:
    """Res_var(p, q) as the Sylvester determinant; the result no longer
    involves ``var`` (nvars is kept)."""
    if p.nvars != q.nvars:
        raise AlgebraError("nvars mismatch")
    if p.degree(var) < 1 or q.degree(var) < 1:
        raise AlgebraError("nothing to eliminate: an input has degree zero in the variable")
    return determinant(sylvester_matrix(p, q, var))
