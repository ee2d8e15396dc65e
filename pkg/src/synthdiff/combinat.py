"""Combinatorial differential geometry on finite neighbour spaces.

A neighbour space is a finite set with a reflexive symmetric relation.
On it live group-valued forms (functions on tuples of mutual neighbours),
distributions (finer relations), affine connections (parallelogram
completion), and connections with values in a group or groupoid, whose
curvature satisfies the Bianchi identity.

Points are referred to by index; labels are kept for I/O.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .groups import FiniteGroup, FiniteGroupoid, GroupError, named_group


class ModelError(ValueError):
    pass


class NeighbourSpace:
    def __init__(self, nbr, labels: Sequence | None = None):
        N = np.asarray(nbr, dtype=bool)
        n = N.shape[0]
        if N.shape != (n, n):
            raise ModelError("neighbour relation must be a square matrix")
        if not N.diagonal().all():
            raise ModelError("neighbour relation must be reflexive")
        if not np.array_equal(N, N.T):
            raise ModelError("neighbour relation must be symmetric")
        self.nbr = N
        self.labels = list(labels) if labels is not None else list(range(n))
        if len(self.labels) != n:
            raise ModelError("wrong number of point labels")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "NeighbourSpace":
        """Reflexive-symmetric closure of ``edges``."""
        N = np.eye(n, dtype=bool)
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ModelError(f"edge ({i}, {j}) refers to a missing point")
            N[i, j] = N[j, i] = True
        return cls(N, labels)

    @classmethod
    def complete(cls, n: int, labels=None) -> "NeighbourSpace":
        return cls(np.ones((n, n), dtype=bool), labels)

    @classmethod
    def path(cls, n: int) -> "NeighbourSpace":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @property
    def size(self) -> int:
        return self.nbr.shape[0]

    def __len__(self):
        return self.size

    def is_nbr(self, x: int, y: int) -> bool:
        return bool(self.nbr[x, y])

    def monad(self, x: int) -> list[int]:
        return [int(y) for y in np.nonzero(self.nbr[x])[0]]

    def is_simplex(self, pts: Sequence[int]) -> bool:
        return all(self.nbr[a, b] for a in pts for b in pts)

    def __repr__(self):
        return f"NeighbourSpace({self.size} points, {int(self.nbr.sum() - self.size) // 2} edges)"


def simplices(space: NeighbourSpace, k: int) -> list[tuple[int, ...]]:
    """Ordered (k+1)-tuples of mutual neighbours, repetitions allowed."""
    if k < 0:
        raise ModelError("k must be non-negative")
    out = []

    def extend(prefix):
        if len(prefix) == k + 1:
            out.append(tuple(prefix))
            return
        for y in range(space.size):
            if all(space.nbr[p, y] for p in prefix):
                prefix.append(y)
                extend(prefix)
                prefix.pop()

    extend([])
    return out


def check_morphism(src: NeighbourSpace, dst: NeighbourSpace, images: Sequence[int]) -> None:
    """Raise unless ``images`` (point of src -> point of dst) preserves neighbours."""
    if len(images) != src.size:
        raise ModelError("map must send every point somewhere")
    for i in images:
        if not 0 <= i < dst.size:
            raise ModelError(f"image {i} is not a point of the target")
    for x in range(src.size):
        for y in range(src.size):
            if src.nbr[x, y] and not dst.nbr[images[x], images[y]]:
                raise ModelError(
                    f"map does not preserve neighbours: {src.labels[x]} ~ {src.labels[y]} "
                    f"but their images are not neighbours")


# ------------------------------------------------------------------- forms

class Form:
    """A G-valued k-form, stored as an int array of shape (n,)*(k+1).

    Entries outside the k-simplices are -1.  Normalisation (value e when two
    entries coincide) and, for 1-forms, ω(y,x) = ω(x,y)^-1 are checked on
    construction.
    """

    def __init__(self, space: NeighbourSpace, group: FiniteGroup, k: int, values):
        V = np.asarray(values, dtype=np.int64)
        n = space.size
        if V.shape != (n,) * (k + 1):
            raise ModelError(f"a {k}-form on {n} points needs shape {(n,) * (k + 1)}")
        self.space, self.group, self.k, self.values = space, group, k, V
        mask = _simplex_mask(space, k)
        if ((V >= 0) != mask).any():
            raise ModelError("form must be defined exactly on the simplices")
        if (V >= group.order).any():
            raise ModelError("form value is not a group element")
        if k >= 1:
            e = group.identity
            for s in zip(*np.nonzero(mask)):
                if len(set(s)) < len(s) and V[s] != e:
                    raise ModelError(f"form is not normalised at {tuple(int(i) for i in s)}")
        if k == 1:
            inv = group.inverse_table
            ok = V < 0
            ok |= inv[np.where(V >= 0, V, 0)] == np.where(V.T >= 0, V.T, 0)
            if not ok.all():
                raise ModelError("1-form must satisfy ω(y,x) = ω(x,y)^-1")

    def __call__(self, *pts: int) -> int:
        if len(pts) != self.k + 1:
            raise ModelError(f"a {self.k}-form takes {self.k + 1} points")
        v = int(self.values[pts])
        if v < 0:
            raise ModelError(f"{pts} is not a simplex")
        return v

    def is_identity(self) -> bool:
        V = self.values
        return bool(((V < 0) | (V == self.group.identity)).all())

    def is_alternating(self) -> bool:
        """Diagnostic: swapping two adjacent entries inverts the value."""
        if self.k == 0:
            return True
        V, inv = self.values, self.group.inverse_table
        for axis in range(self.k):
            perm = list(range(self.k + 1))
            perm[axis], perm[axis + 1] = perm[axis + 1], perm[axis]
            W = V.transpose(perm)
            defined = V >= 0
            if (inv[np.where(defined, V, 0)][defined] != W[defined]).any():
                return False
        return True

    @classmethod
    def one_form(cls, space: NeighbourSpace, group: FiniteGroup,
                 values: Mapping[tuple[int, int], int]) -> "Form":
        """1-form from values on some ordered pairs; reverse pairs get inverses,
        diagonal and unspecified pairs get the identity."""
        n = space.size
        V = np.where(space.nbr, group.identity, -1).astype(np.int64)
        given: dict[tuple[int, int], int] = {}
        for (x, y), g in values.items():
            if not space.nbr[x, y]:
                raise ModelError(f"({x}, {y}) are not neighbours")
            for key, val in (((x, y), g), ((y, x), group.inv(g))):
                if key in given and given[key] != val:
                    raise ModelError(f"inconsistent 1-form values on {key}")
                given[key] = val
        for (x, y), g in given.items():
            if x == y and g != group.identity:
                raise ModelError("1-form must be the identity on (x, x)")
            V[x, y] = g
        return cls(space, group, 1, V)

    def __repr__(self):
        return f"Form(k={self.k}, space={self.space!r}, group={self.group!r})"


def _simplex_mask(space: NeighbourSpace, k: int) -> np.ndarray:
    N = space.nbr
    n = space.size
    ndim = k + 1
    mask = np.ones((n,) * ndim, dtype=bool)
    for a in range(ndim):
        for b in range(a + 1, ndim):
            others = tuple(i for i in range(ndim) if i not in (a, b))
            mask &= np.expand_dims(N, axis=others)
    return mask


def zero_form(space: NeighbourSpace, group: FiniteGroup, f: Sequence[int]) -> Form:
    return Form(space, group, 0, list(f))


def coboundary0(f: Form) -> Form:
    """df(x, y) = f(x)^-1 f(y)."""
    if f.k != 0:
        raise ModelError("coboundary0 takes a 0-form")
    G, N = f.group, f.space.nbr
    fx = f.values
    V = G.table[G.inverse_table[fx][:, None], fx[None, :]]
    return Form(f.space, G, 1, np.where(N, V, -1))


def coboundary1(w: Form) -> Form:
    """dω(x, y, z) = ω(x, y) ω(y, z) ω(z, x)."""
    if w.k != 1:
        raise ModelError("coboundary1 takes a 1-form")
    G, W = w.group, w.values
    T = G.table
    safe = np.where(W >= 0, W, 0)
    V = T[T[safe[:, :, None], safe[None, :, :]], safe.T[:, None, :]]
    mask = _simplex_mask(w.space, 2)
    return Form(w.space, G, 2, np.where(mask, V, -1))


def is_closed(w: Form) -> bool:
    return coboundary1(w).is_identity()


def maurer_cartan(group: FiniteGroup) -> Form:
    """d of the identity map, on the group with every pair neighbours."""
    space = NeighbourSpace.complete(group.order, labels=group.names)
    return coboundary0(zero_form(space, group, range(group.order)))


# ------------------------------------------------------------ distributions

class Distribution:
    """A reflexive symmetric relation ``strong`` refining the neighbour relation."""

    def __init__(self, space: NeighbourSpace, strong):
        S = np.asarray(strong, dtype=bool)
        if S.shape != space.nbr.shape:
            raise ModelError("distribution has the wrong shape")
        if not S.diagonal().all() or not np.array_equal(S, S.T):
            raise ModelError("distribution must be reflexive and symmetric")
        if (S & ~space.nbr).any():
            raise ModelError("distribution must refine the neighbour relation")
        self.space, self.strong = space, S

    @classmethod
    def from_function(cls, space: NeighbourSpace, f: Sequence) -> "Distribution":
        """x ≈ y iff x ~ y and f(x) = f(y)."""
        f = np.asarray(list(f))
        return cls(space, space.nbr & (f[:, None] == f[None, :]))


def distribution_from_form(w: Form) -> Distribution:
    if w.k != 1:
        raise ModelError("a distribution comes from a 1-form")
    return Distribution(w.space, w.space.nbr & (w.values == w.group.identity))


def is_involutive(dist: Distribution) -> bool:
    """x ≈ y, x ≈ z, y ~ z  imply  y ≈ z."""
    S, N = dist.strong, dist.space.nbr
    premise = S[:, :, None] & S[:, None, :] & N[None, :, :]
    return not (premise & ~S[None, :, :]).any()


def is_integral_subset(dist: Distribution, subset: Iterable[int]) -> bool:
    idx = sorted(set(subset))
    sub = np.ix_(idx, idx)
    return bool(np.array_equal(dist.strong[sub], dist.space.nbr[sub]))


# ------------------------------------------------------ group(oid) connections

class GroupoidConnection:
    """∇(x, y) for neighbours x ~ y, valued in a group (one vertex group for
    all points) or in a finite groupoid over the points.

    ``arrows[x, y]`` holds the arrow index, -1 off the neighbour relation.
    """

    def __init__(self, space: NeighbourSpace, structure: FiniteGroup | FiniteGroupoid, arrows):
        A = np.asarray(arrows, dtype=np.int64)
        if A.shape != space.nbr.shape:
            raise ModelError("connection has the wrong shape")
        if ((A >= 0) != space.nbr).any():
            raise ModelError("connection must be defined exactly on neighbour pairs")
        self.space, self.structure, self.arrows = space, structure, A
        grouplike = isinstance(structure, FiniteGroup)
        for x, y in zip(*np.nonzero(space.nbr)):
            a = int(A[x, y])
            if not grouplike and (structure.source[a] != x or structure.target[a] != y):
                raise ModelError(f"∇({x}, {y}) is not an arrow from {x} to {y}")
            if x == y and a != structure.unit(int(x)):
                raise ModelError(f"∇({x}, {x}) must be the identity")
            if int(A[y, x]) != structure.arrow_inverse(a):
                raise ModelError(f"∇({y}, {x}) must be the inverse of ∇({x}, {y})")

    @classmethod
    def from_values(cls, space: NeighbourSpace, group: FiniteGroup,
                    values: Mapping[tuple[int, int], int]) -> "GroupoidConnection":
        w = Form.one_form(space, group, values)
        return cls(space, group, w.values)

    @property
    def is_vertex_group(self) -> bool:
        return isinstance(self.structure, FiniteGroup)

    def __call__(self, x: int, y: int) -> int:
        a = int(self.arrows[x, y])
        if a < 0:
            raise ModelError(f"{x} and {y} are not neighbours")
        return a

    def conj(self, g: int, h: int) -> int:
        """g^h = h^-1 . g . h (composing left to right)."""
        S = self.structure
        return S.compose(S.compose(S.arrow_inverse(h), g), h)


def curvature(conn: GroupoidConnection, simplex: Sequence[int]) -> int:
    """R(x, y, z) = ∇(x, y) . ∇(y, z) . ∇(z, x), composed left to right."""
    x, y, z = simplex
    if not conn.space.is_simplex((x, y, z)):
        raise ModelError(f"{tuple(simplex)} is not a 2-simplex")
    S = conn.structure
    return S.compose(S.compose(conn(x, y), conn(y, z)), conn(z, x))


def bianchi_value(conn: GroupoidConnection, simplex: Sequence[int]) -> int:
    """R(y,z,u)^∇(y,x) . R(x,y,u) . R(x,u,z) . R(x,z,y), an arrow x -> x."""
    x, y, z, u = simplex
    if not conn.space.is_simplex((x, y, z, u)):
        raise ModelError(f"{tuple(simplex)} is not a 3-simplex")
    S = conn.structure
    first = conn.conj(curvature(conn, (y, z, u)), conn(y, x))
    out = first
    for s in ((x, y, u), (x, u, z), (x, z, y)):
        out = S.compose(out, curvature(conn, s))
    return out


def bianchi_check(conn: GroupoidConnection, simplex: Sequence[int]) -> bool:
    return bianchi_value(conn, simplex) == conn.structure.unit(simplex[0])


def bianchi_failures(conn: GroupoidConnection) -> list[tuple[int, ...]]:
    """All 3-simplices at which the Bianchi identity fails.

    Vertex-group connections are checked in one vectorised sweep.
    """
    if not conn.is_vertex_group:
        return [s for s in simplices(conn.space, 3) if not bianchi_check(conn, s)]
    G = conn.structure
    T, inv = G.table, G.inverse_table
    A = np.where(conn.arrows >= 0, conn.arrows, 0)
    n = conn.space.size
    x, y, z, u = np.meshgrid(*(np.arange(n),) * 4, indexing="ij")

    def R(a, b, c):
        return T[T[A[a, b], A[b, c]], A[c, a]]

    h = A[y, x]
    first = T[T[inv[h], R(y, z, u)], h]
    total = T[T[T[first, R(x, y, u)], R(x, u, z)], R(x, z, y)]
    mask = _simplex_mask(conn.space, 3)
    bad = mask & (total != G.identity)
    return [tuple(int(i) for i in s) for s in zip(*np.nonzero(bad))]


def curvature_form(conn: GroupoidConnection) -> Form:
    """Curvature of a vertex-group connection as a group-valued 2-form."""
    if not conn.is_vertex_group:
        raise ModelError("curvature is a 2-form only for vertex-group connections")
    w = Form(conn.space, conn.structure, 1, conn.arrows)
    return coboundary1(w)


# --------------------------------------------------------- affine connections

class AffineConnection:
    """λ(x, y, z) for x ~ y, x ~ z; a point neighbouring both y and z.

    Degenerate values λ(x, x, z) = z and λ(x, y, x) = y are filled in; other
    configurations may be left undefined, in which case transport through
    them fails.
    """

    def __init__(self, space: NeighbourSpace, values: Mapping[tuple[int, int, int], int]):
        self.space = space
        lam: dict[tuple[int, int, int], int] = {}
        N = space.nbr
        n = space.size
        for x in range(n):
            for z in range(n):
                if N[x, z]:
                    lam[(x, x, z)] = z
                    lam[(x, z, x)] = z
        for (x, y, z), p in values.items():
            if not (N[x, y] and N[x, z]):
                raise ModelError(f"λ({x},{y},{z}) needs x ~ y and x ~ z")
            if not 0 <= p < n:
                raise ModelError(f"λ({x},{y},{z}) = {p} is not a point")
            if (x, y, z) in lam and lam[(x, y, z)] != p:
                raise ModelError(f"λ({x},{y},{z}) contradicts λ(x,x,z)=z or λ(x,y,x)=y")
            if not (N[p, y] and N[p, z]):
                raise ModelError(f"λ({x},{y},{z}) = {p} must neighbour both {y} and {z}")
            lam[(x, y, z)] = p
        self.values = lam

    def __call__(self, x: int, y: int, z: int) -> int:
        try:
            return self.values[(x, y, z)]
        except KeyError:
            raise ModelError("connection not transportable on this model: "
                             f"λ({x},{y},{z}) is undefined") from None

    def is_symmetric(self) -> bool:
        return all(self.values.get((x, z, y), p) == p for (x, y, z), p in self.values.items())

    @classmethod
    def group_translation(cls, group: FiniteGroup) -> "AffineConnection":
        """λ(x, y, z) = z x^-1 y on the group with every pair neighbours."""
        space = NeighbourSpace.complete(group.order, labels=group.names)
        vals = {(x, y, z): group.product(z, group.inv(x), y)
                for x in range(group.order) for y in range(group.order) for z in range(group.order)}
        return cls(space, vals)


@dataclass
class CircuitMap:
    """Transport of the monad of ``base`` around an infinitesimal triangle."""

    base: int
    mapping: dict[int, int]
    is_bijection: bool

    @property
    def is_identity(self) -> bool:
        return all(k == v for k, v in self.mapping.items())


def affine_curvature(lam: AffineConnection, simplex: Sequence[int]) -> CircuitMap:
    """z -> λ(x2, x0, λ(x1, x2, λ(x0, x1, z))) on the monad of x0."""
    x0, x1, x2 = simplex
    if not lam.space.is_simplex((x0, x1, x2)):
        raise ModelError(f"{tuple(simplex)} is not a 2-simplex")
    N = lam.space.nbr
    mapping = {}
    for z in lam.space.monad(x0):
        z1 = lam(x0, x1, z)
        z2 = lam(x1, x2, z1)
        z3 = lam(x2, x0, z2)
        if not N[z3, x0]:
            raise ModelError("connection not transportable on this model")
        mapping[z] = z3
    fixes = mapping.get(x0) == x0
    bijective = sorted(mapping.values()) == sorted(mapping)
    return CircuitMap(x0, mapping, bijective and fixes)


def is_geodesic(lam: AffineConnection, subset: Iterable[int]) -> bool:
    """Whether ``subset`` is stable under a torsion-free λ."""
    if not lam.is_symmetric():
        raise ModelError("geodesics are defined for symmetric (torsion free) connections")
    S = set(subset)
    N = lam.space.nbr
    for x in S:
        for y in S:
            for z in S:
                if N[x, y] and N[x, z] and lam(x, y, z) not in S:
                    return False
    return True


# ---------------------------------------------------------- bundle connections

class BundleConnection:
    """Fibre transport ∇(x, y): E_x -> E_y for neighbours x ~ y."""

    def __init__(self, base: NeighbourSpace, projection: Sequence[int],
                 transport: Mapping[tuple[int, int], Mapping[int, int]], labels=None):
        self.base = base
        self.projection = list(projection)
        self.labels = list(labels) if labels is not None else list(range(len(self.projection)))
        self.transport = {k: dict(v) for k, v in transport.items()}
        fibres = self.fibres()
        N = base.nbr
        for x, y in zip(*np.nonzero(N)):
            x, y = int(x), int(y)
            t = self.transport.get((x, y))
            if t is None:
                raise ModelError(f"no transport along ({x}, {y})")
            if sorted(t) != fibres[x] or sorted(t.values()) != fibres[y]:
                raise ModelError(f"∇({x}, {y}) is not a bijection of fibres")
            if x == y and any(k != v for k, v in t.items()):
                raise ModelError(f"∇({x}, {x}) must be the identity")
        for (x, y), t in self.transport.items():
            back = self.transport[(y, x)]
            if any(back[v] != k for k, v in t.items()):
                raise ModelError(f"∇({y}, {x}) must undo ∇({x}, {y})")

    def fibres(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {x: [] for x in range(self.base.size)}
        for e, x in enumerate(self.projection):
            out[x].append(e)
        return out

    @classmethod
    def from_affine(cls, lam: AffineConnection) -> "BundleConnection":
        """E = pairs (x, z) with x ~ z over the first point; ∇(x, y)(x, z) = (y, λ(x, y, z))."""
        M = lam.space
        pairs = [(x, z) for x in range(M.size) for z in M.monad(x)]
        index = {p: i for i, p in enumerate(pairs)}
        transport = {}
        for x in range(M.size):
            for y in M.monad(x):
                transport[(x, y)] = {index[(x, z)]: index[(y, lam(x, y, z))] for z in M.monad(x)}
        return cls(M, [x for x, _ in pairs], transport, labels=pairs)


def bundle_transport(conn: BundleConnection, x: int, y: int, e: int) -> int:
    if not conn.base.is_nbr(x, y):
        raise ModelError(f"{x} and {y} are not neighbours")
    if conn.projection[e] != x:
        raise ModelError(f"element {e} does not lie over {x}")
    return conn.transport[(x, y)][e]


# ----------------------------------------------------------------- model files

@dataclass
class Model:
    """A neighbour space with the optional data a model file may carry."""

    space: NeighbourSpace
    group: FiniteGroup | None = None
    form1: Form | None = None
    connection: GroupoidConnection | None = None
    affine: AffineConnection | None = None
    groupoid: FiniteGroupoid | None = None
    maps: dict = field(default_factory=dict)


def _split_key(key: str, arity: int) -> tuple[int, ...]:
    parts = key.split(",")
    if len(parts) != arity:
        raise ModelError(f"key {key!r} should list {arity} point indices")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ModelError(f"key {key!r} should list point indices") from None


def _load_group(desc) -> FiniteGroup:
    try:
        if "name" in desc:
            return named_group(desc["name"])
        if "table" in desc:
            return FiniteGroup(desc["table"], desc.get("names"), desc.get("label"))
    except GroupError as exc:
        raise ModelError(str(exc)) from exc
    raise ModelError('group must be {"name": ...} or {"table": [[...]]}')


def _load_groupoid(desc) -> FiniteGroupoid:
    try:
        return FiniteGroupoid(desc["source"], desc["target"], desc["composition"],
                              desc["objects"], desc.get("names"))
    except KeyError as exc:
        raise ModelError(f"groupoid is missing {exc.args[0]!r}") from None
    except GroupError as exc:
        raise ModelError(str(exc)) from exc


def load_model(data: Mapping) -> Model:
    """Build a :class:`Model` from parsed JSON.

    Group elements are referred to by their names (plain indices for a
    table without names).  Optional keys: ``form1``, ``connection``,
    ``lambda``, ``groupoid`` (with ``source``, ``target``, ``composition``,
    ``objects``) and ``maps`` (name -> {"target": model, "images": [...]}).
    """
    if "points" not in data:
        raise ModelError("model needs a 'points' list")
    points = list(data["points"])
    n = len(points)
    try:
        edges = [(int(i), int(j)) for i, j in data.get("neighbours", [])]
    except (TypeError, ValueError):
        raise ModelError("neighbours must be a list of [i, j] pairs") from None
    space = NeighbourSpace.from_edges(n, edges, labels=points)
    model = Model(space)
    if "group" in data:
        model.group = _load_group(data["group"])

    def elem(g):
        try:
            return model.group.element(g)
        except GroupError as exc:
            raise ModelError(str(exc)) from exc

    for key in ("form1", "connection"):
        if key in data and model.group is None and not (key == "connection" and "groupoid" in data):
            raise ModelError(f"'{key}' needs a group")
    if "form1" in data:
        vals = {_split_key(k, 2): elem(v) for k, v in data["form1"].items()}
        model.form1 = Form.one_form(space, model.group, vals)
    if "groupoid" in data:
        model.groupoid = _load_groupoid(data["groupoid"])
    if "connection" in data:
        if model.groupoid is not None:
            G = model.groupoid
            A = np.full((n, n), -1, dtype=np.int64)
            for x in range(n):
                A[x, x] = G.unit(x)
            given = {}
            for k, v in data["connection"].items():
                x, y = _split_key(k, 2)
                if not space.is_nbr(x, y):
                    raise ModelError(f"({x}, {y}) are not neighbours")
                try:
                    given[(x, y)] = G.element(v)
                except GroupError as exc:
                    raise ModelError(str(exc)) from exc
            for (x, y), a in given.items():
                A[x, y] = a
                if (y, x) not in given:
                    A[y, x] = G.arrow_inverse(a)
            if (A[space.nbr] < 0).any():
                raise ModelError("connection leaves some neighbour pair unassigned")
            model.connection = GroupoidConnection(space, G, A)
        else:
            vals = {_split_key(k, 2): elem(v) for k, v in data["connection"].items()}
            model.connection = GroupoidConnection.from_values(space, model.group, vals)
    if "lambda" in data:
        vals = {}
        for k, v in data["lambda"].items():
            vals[_split_key(k, 3)] = int(v)
        model.affine = AffineConnection(space, vals)
    for name, desc in data.get("maps", {}).items():
        target = load_model(desc["target"]).space if "target" in desc else space
        images = [int(i) for i in desc["images"]]
        check_morphism(space, target, images)
        model.maps[name] = images
    return model
