"""Finite groups given by multiplication tables, and finite groupoids."""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
import re
from typing import Sequence

import numpy as np


class GroupError(ValueError):
    pass


class FiniteGroup:
    """Group on elements 0..n-1 with ``table[a, b] = a*b``.

    ``names`` label the elements for input and output.  The group axioms
    are verified on construction.
    """

    def __init__(self, table, names: Sequence[str] | None = None, name: str | None = None):
        T = np.asarray(table, dtype=np.int64)
        n = T.shape[0]
        if T.ndim != 2 or T.shape != (n, n) or n == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        if T.min() < 0 or T.max() >= n:
            raise GroupError("table entries must be element indices")
        idx = np.arange(n)
        left = T[T]  # left[a, b, c] = (ab)c
        right = T[idx[:, None, None], T[None, :, :]]  # a(bc)
        if not np.array_equal(left, right):
            raise GroupError("multiplication is not associative")
        ids = [e for e in range(n) if np.array_equal(T[e], idx) and np.array_equal(T[:, e], idx)]
        if not ids:
            raise GroupError("no identity element")
        e = ids[0]
        inv = np.full(n, -1)
        for a in range(n):
            hits = np.nonzero(T[a] == e)[0]
            if len(hits) != 1 or T[hits[0], a] != e:
                raise GroupError(f"element {a} has no two-sided inverse")
            inv[a] = hits[0]
        self.table = T
        self.identity = int(e)
        self.inverse_table = inv
        self.names = [str(s) for s in names] if names is not None else [str(i) for i in range(n)]
        if len(set(self.names)) != n:
            raise GroupError("element names must be distinct")
        self._lookup = {s: i for i, s in enumerate(self.names)}
        self.name = name

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self):
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse_table[a])

    def conj(self, g: int, h: int) -> int:
        """g^h = h^-1 g h."""
        return self.mul(self.mul(self.inv(h), g), h)

    def product(self, *elements: int) -> int:
        out = self.identity
        for g in elements:
            out = int(self.table[out, g])
        return out

    def element(self, label) -> int:
        key = str(label)
        if key not in self._lookup:
            raise GroupError(f"unknown group element {label!r}")
        return self._lookup[key]

    def label(self, a: int) -> str:
        return self.names[a]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def are_conjugate(self, g: int, h: int) -> bool:
        return any(self.conj(g, k) == h for k in range(self.order))

    # groupoid-style interface used by connections (single object)
    def compose(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def arrow_inverse(self, a: int) -> int:
        return int(self.inverse_table[a])

    def unit(self, _obj=None) -> int:
        return self.identity

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"


def _from_elements(elements: list, mul, names, name) -> FiniteGroup:
    index = {el: i for i, el in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    return FiniteGroup(table, names, name)


@lru_cache(maxsize=None)
def cyclic(n: int) -> FiniteGroup:
    if not 1 <= n <= 12:
        raise GroupError("built-in cyclic groups are Z_1 .. Z_12")
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], name=f"Z{n}")


@lru_cache(maxsize=None)
def symmetric(n: int) -> FiniteGroup:
    """S_n on one-line permutations; (p*q)(i) = q(p(i)), i.e. apply p first."""
    if n not in (1, 2, 3, 4):
        raise GroupError("built-in symmetric groups are S1 .. S4")
    perms = list(permutations(range(n)))
    return _from_elements(perms, lambda p, q: tuple(q[p[i]] for i in range(n)),
                          ["".join(map(str, p)) for p in perms], f"S{n}")


@lru_cache(maxsize=None)
def dihedral4() -> FiniteGroup:
    """Symmetries of a square, as permutations of its corners."""
    r = (1, 2, 3, 0)
    s = (0, 3, 2, 1)
    compose = lambda p, q: tuple(q[p[i]] for i in range(4))
    rots = [(0, 1, 2, 3)]
    for _ in range(3):
        rots.append(compose(rots[-1], r))
    elements = rots + [compose(s, x) for x in rots]
    names = [f"r{i}" for i in range(4)] + [f"s{i}" for i in range(4)]
    return _from_elements(elements, compose, names, "D4")


@lru_cache(maxsize=None)
def quaternion() -> FiniteGroup:
    """Q8 as signed quaternion units."""
    basis = ["1", "i", "j", "k"]
    # unit products: (row, col) -> (sign, unit)
    mult = {
        ("1", u): (1, u) for u in basis
    }
    mult.update({(u, "1"): (1, u) for u in basis})
    mult.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                 ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                 ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elements = [(s, u) for u in basis for s in (1, -1)]

    def mul(a, b):
        s, u = mult[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    names = [("" if s > 0 else "-") + u for s, u in elements]
    return _from_elements(elements, mul, names, "Q8")


def named_group(name: str) -> FiniteGroup:
    """``Z1``..``Z12`` (or ``Z_n``), ``S1``..``S4``, ``D4``, ``Q8``."""
    key = name.strip().replace("_", "").upper()
    m = re.fullmatch(r"Z(\d+)", key)
    if m:
        return cyclic(int(m.group(1)))
    m = re.fullmatch(r"S(\d)", key)
    if m:
        return symmetric(int(m.group(1)))
    if key == "D4":
        return dihedral4()
    if key == "Q8":
        return quaternion()
    raise GroupError(f"unknown group {name!r}")


class FiniteGroupoid:
    """Finite groupoid over objects 0..m-1.

    Arrows are 0..n-1 with ``source``/``target`` arrays and a composition
    table ``comp[a, b]`` = "a then b" (defined when target(a) == source(b),
    -1 otherwise).
    """

    def __init__(self, source: Sequence[int], target: Sequence[int], comp, nobjects: int,
                 names: Sequence[str] | None = None):
        self.source = np.asarray(source, dtype=np.int64)
        self.target = np.asarray(target, dtype=np.int64)
        C = np.asarray(comp, dtype=np.int64)
        n = len(self.source)
        if C.shape != (n, n) or len(self.target) != n:
            raise GroupError("composition table does not match the arrows")
        self.comp = C
        self.nobjects = nobjects
        self.names = [str(s) for s in names] if names is not None else [str(i) for i in range(n)]
        self._lookup = {s: i for i, s in enumerate(self.names)}
        self._verify()

    def _verify(self):
        n = len(self.source)
        for a in range(n):
            for b in range(n):
                ok = self.target[a] == self.source[b]
                c = self.comp[a, b]
                if ok != (c >= 0):
                    raise GroupError(f"composition of arrows {a}, {b} is wrongly (un)defined")
                if ok and (self.source[c] != self.source[a] or self.target[c] != self.target[b]):
                    raise GroupError(f"composite of {a}, {b} has wrong endpoints")
        for a in range(n):
            for b in range(n):
                if self.comp[a, b] < 0:
                    continue
                for c in range(n):
                    if self.comp[b, c] < 0:
                        continue
                    if self.comp[self.comp[a, b], c] != self.comp[a, self.comp[b, c]]:
                        raise GroupError("composition is not associative")
        self.units = np.full(self.nobjects, -1)
        for x in range(self.nobjects):
            for a in range(n):
                if self.source[a] == x and self.target[a] == x and all(
                        self.comp[a, b] == b for b in range(n) if self.source[b] == x) and all(
                        self.comp[b, a] == b for b in range(n) if self.target[b] == x):
                    self.units[x] = a
                    break
            else:
                raise GroupError(f"object {x} has no identity arrow")
        self.inverses = np.full(n, -1)
        for a in range(n):
            for b in range(n):
                if self.comp[a, b] >= 0 and self.comp[a, b] == self.units[self.source[a]] \
                        and self.comp[b, a] == self.units[self.target[a]]:
                    self.inverses[a] = b
                    break
            else:
                raise GroupError(f"arrow {a} is not invertible")

    def compose(self, a: int, b: int) -> int:
        c = int(self.comp[a, b])
        if c < 0:
            raise GroupError(f"arrows {a} and {b} are not composable")
        return c

    def arrow_inverse(self, a: int) -> int:
        return int(self.inverses[a])

    def unit(self, obj: int) -> int:
        return int(self.units[obj])

    def element(self, label) -> int:
        key = str(label)
        if key not in self._lookup:
            raise GroupError(f"unknown arrow {label!r}")
        return self._lookup[key]

    def label(self, a: int) -> str:
        return self.names[a]

    @classmethod
    def pair_groupoid(cls, nobjects: int, group: FiniteGroup) -> "FiniteGroupoid":
        """Trivial-bundle groupoid: arrows x -> y labelled by group elements."""
        g = group.order
        src, tgt, names = [], [], []
        for x in range(nobjects):
            for y in range(nobjects):
                for a in range(g):
                    src.append(x)
                    tgt.append(y)
                    names.append(f"{x}>{y}:{group.label(a)}")
        n = len(src)
        comp = np.full((n, n), -1)
        for i in range(n):
            x, y, a = i // (nobjects * g), (i // g) % nobjects, i % g
            for z in range(nobjects):
                for b in range(g):
                    j = (y * nobjects + z) * g + b
                    comp[i, j] = (x * nobjects + z) * g + group.mul(a, b)
        return cls(src, tgt, comp, nobjects, names)
