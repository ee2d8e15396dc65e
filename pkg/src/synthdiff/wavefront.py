"""Spheres, contact elements and wave fronts in the Euclidean plane.

A contact element is a focus point with a unit normal and a side (+1 outer,
-1 inner).  A front is a polyline of contact elements; offsetting it by s
moves every focus a distance s along its oriented normal.  Offsets that
fold over themselves are reported as cusps rather than rejected.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

DEFAULT_TOL = 1e-9


class GeometryError(ValueError):
    pass


def _point(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.shape != (2,):
        raise GeometryError(f"expected a plane point, got {p!r}")
    if not np.isfinite(a).all():
        raise GeometryError("coordinates must be finite")
    return a


def distance(a, b) -> float:
    return float(np.hypot(*(_point(b) - _point(a))))


@dataclass(frozen=True)
class Sphere:
    center: tuple
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(v) for v in _point(self.center)))
        if not self.radius > 0:
            raise GeometryError("radius must be strictly positive")

    def sample(self, n: int, phase: float = 0.0) -> np.ndarray:
        theta = phase + 2 * np.pi * np.arange(n) / n
        c = np.asarray(self.center)
        return c + self.radius * np.column_stack([np.cos(theta), np.sin(theta)])

    def contains(self, p, tol: float = DEFAULT_TOL) -> bool:
        return abs(distance(self.center, p) - self.radius) <= tol


@dataclass(frozen=True)
class ContactElement:
    focus: tuple
    normal: tuple
    orientation: int = 1

    def __post_init__(self):
        object.__setattr__(self, "focus", tuple(float(v) for v in _point(self.focus)))
        n = _point(self.normal)
        if abs(np.hypot(*n) - 1) > 1e-12:
            raise GeometryError("normal must be a unit vector")
        object.__setattr__(self, "normal", tuple(float(v) for v in n))
        if self.orientation not in (1, -1):
            raise GeometryError("orientation is +1 (outer) or -1 (inner)")


def external_touch_point(A: Sphere, C: Sphere, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Where two externally touching spheres meet."""
    a, c = np.asarray(A.center), np.asarray(C.center)
    ac = distance(a, c)
    if abs(A.radius + C.radius - ac) > tol:
        raise GeometryError("spheres do not touch externally")
    return a + (A.radius / ac) * (c - a)


def touch_constant(A: Sphere, C: Sphere) -> float:
    """K = (1/r + 1/s) / 2.

    For b' on S(a, r) at arc distance h from the touch point b, ab' = ab
    exactly and b'c - bc = K h^2 + O(h^4): the distance to c is stationary
    at b to first order.
    """
    return (1 / A.radius + 1 / C.radius) / 2


def touch_defect(A: Sphere, C: Sphere, h: float, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """(|ab' - ab|, |b'c - bc|) for b' on S(a, r) at arc distance h from b."""
    a, c = np.asarray(A.center), np.asarray(C.center)
    b = external_touch_point(A, C, tol)
    u = (b - a) / A.radius
    phi = h / A.radius
    rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    b2 = a + A.radius * (rot @ u)
    return abs(distance(a, b2) - distance(a, b)), abs(distance(b2, c) - distance(b, c))


def internal_touch_point(a, b, s: float) -> np.ndarray:
    """The point c where S(a, ab + s) and S(b, s) touch."""
    a, b = _point(a), _point(b)
    if not s > 0:
        raise GeometryError("s must be strictly positive")
    ab = distance(a, b)
    if ab == 0:
        raise GeometryError("distance undefined: a and b coincide")
    return b + s * (b - a) / ab


def perpendicular_check(c, P: ContactElement, tol: float = DEFAULT_TOL) -> bool:
    """Whether c lies on the normal line of P (either side).

    Parallelism is measured as 1 - |cos θ| between c - focus and the normal,
    so the test is quadratic in the angle.
    """
    c = _point(c)
    v = c - np.asarray(P.focus)
    r = float(np.hypot(*v))
    if r <= tol:
        raise GeometryError("distance undefined: point coincides with the focus")
    cos = abs(float(v @ np.asarray(P.normal))) / r
    return 1 - cos <= tol


def ray_point(P: ContactElement, s: float) -> np.ndarray:
    if not s > 0:
        raise GeometryError("s must be strictly positive")
    return np.asarray(P.focus) + s * P.orientation * np.asarray(P.normal)


def collinearity_check(a, b, c, tol: float = DEFAULT_TOL) -> bool:
    """ab + bc = ac within tol (b between a and c)."""
    ab, bc, ac = distance(a, b), distance(b, c), distance(a, c)
    if min(ab, bc, ac) <= tol:
        raise GeometryError("distance undefined: coincident points")
    return abs(ab + bc - ac) <= tol


# ------------------------------------------------------------------ fronts

@dataclass
class OrientedFront:
    vertices: np.ndarray
    normals: np.ndarray
    closed: bool = True

    def __post_init__(self):
        V = np.asarray(self.vertices, dtype=float)
        N = np.asarray(self.normals, dtype=float)
        if V.ndim != 2 or V.shape[1] != 2 or N.shape != V.shape:
            raise GeometryError("vertices and normals must be matching (n, 2) arrays")
        if len(V) < 2:
            raise GeometryError("a front needs at least two vertices")
        if not (np.isfinite(V).all() and np.isfinite(N).all()):
            raise GeometryError("coordinates must be finite")
        if (np.abs(np.hypot(N[:, 0], N[:, 1]) - 1) > 1e-12).any():
            raise GeometryError("normals must be unit vectors")
        steps = np.diff(np.vstack([V, V[:1]]) if self.closed else V, axis=0)
        if (np.hypot(steps[:, 0], steps[:, 1]) == 0).any():
            raise GeometryError("consecutive vertices must be distinct")
        self.vertices, self.normals = V, N

    def __len__(self):
        return len(self.vertices)

    def elements(self, orientation: int = 1) -> list[ContactElement]:
        return [ContactElement(v, n, orientation) for v, n in zip(self.vertices, self.normals)]

    @classmethod
    def circle(cls, center, radius: float, n: int) -> "OrientedFront":
        """Regular n-gon on a circle with exact outward radial normals."""
        theta = 2 * np.pi * np.arange(n) / n
        u = np.column_stack([np.cos(theta), np.sin(theta)])
        return cls(np.asarray(center, dtype=float) + radius * u, u, True)

    @classmethod
    def ellipse(cls, a: float, b: float, n: int) -> "OrientedFront":
        """x = a cos θ, y = b sin θ at n equally spaced θ, outward normals."""
        theta = 2 * np.pi * np.arange(n) / n
        V = np.column_stack([a * np.cos(theta), b * np.sin(theta)])
        N = np.column_stack([b * np.cos(theta), a * np.sin(theta)])
        N /= np.hypot(N[:, 0], N[:, 1])[:, None]
        return cls(V, N, True)

    @classmethod
    def segment(cls, p, q, n: int, side: int = 1) -> "OrientedFront":
        p, q = _point(p), _point(q)
        t = np.linspace(0, 1, n)[:, None]
        d = (q - p) / distance(p, q)
        normal = side * np.array([-d[1], d[0]])
        return cls(p + t * (q - p), np.tile(normal, (n, 1)), False)


@dataclass
class CuspReport:
    """An offset front together with the vertices where it folds over."""

    front: OrientedFront
    indices: list = field(default_factory=list)

    @property
    def has_cusps(self) -> bool:
        return bool(self.indices)


def _orientation_sign(orientation) -> int:
    if orientation in (1, "outer", "+1", "+"):
        return 1
    if orientation in (-1, "inner", "-1", "-"):
        return -1
    raise GeometryError("orientation must be 'outer' or 'inner'")


def offset_front(B: OrientedFront, s: float, orientation=1, tol: float = DEFAULT_TOL) -> CuspReport:
    """B ⊢ s: move every vertex by s along its oriented normal.

    A vertex i is reported when the offset edge leaving it points against
    the original edge, or when that edge crosses the edge two steps on;
    both mean the offset is not locally injective there.
    """
    if not s > 0:
        raise GeometryError("s must be strictly positive")
    sign = _orientation_sign(orientation)
    V = B.vertices + (sign * s) * B.normals
    n = len(V)
    nxt = np.roll(np.arange(n), -1)
    edges = n if B.closed else n - 1
    old = B.vertices[nxt] - B.vertices
    new = V[nxt] - V
    bad = set()
    for i in range(edges):
        if float(old[i] @ new[i]) <= 0 or np.hypot(*new[i]) <= tol:
            bad.add(i)
        j = (i + 2) % n
        if (B.closed or j + 1 < n) and j != i and (j + 1) % n != i:
            if _segments_cross(V[i], V[(i + 1) % n], V[j], V[(j + 1) % n]):
                bad.add(i)
    front = OrientedFront.__new__(OrientedFront)
    front.vertices, front.normals, front.closed = V, B.normals.copy(), B.closed
    return CuspReport(front, sorted(bad))


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    return d1 * d2 < 0 and d3 * d4 < 0


def ellipse_min_radius(a: float, b: float) -> float:
    """Smallest radius of curvature of x²/a² + y²/b² = 1 (a ≥ b): b²/a."""
    a, b = max(a, b), min(a, b)
    return b * b / a


def ellipse_curvature_radius(a: float, b: float, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return (a * a * np.sin(theta) ** 2 + b * b * np.cos(theta) ** 2) ** 1.5 / (a * b)


# ------------------------------------------------------------- sphere fitting

def fit_sphere(points: Sequence) -> Sphere:
    """Circle through three points, or least-squares (Kasa) fit through more."""
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[1] != 2 or len(P) < 3:
        raise GeometryError("need at least three plane points")
    if len(P) == 3:
        (ax, ay), (bx, by), (cx, cy) = P
        d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
        if d == 0:
            raise GeometryError("points are collinear")
        a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
        ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
        uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
        return Sphere((ux, uy), math.hypot(ax - ux, ay - uy))
    A = np.column_stack([2 * P, np.ones(len(P))])
    rhs = (P**2).sum(axis=1)
    sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    cx, cy, k = sol
    r2 = k + cx * cx + cy * cy
    if r2 <= 0:
        raise GeometryError("points do not determine a circle")
    return Sphere((cx, cy), math.sqrt(r2))


# ------------------------------------------------------------------ CSV I/O

def read_front_csv(text: str, closed: bool = True) -> OrientedFront:
    """Rows ``x,y,nx,ny``; a header row is skipped if present."""
    rows = []
    for rec in csv.reader(io.StringIO(text)):
        if not rec or all(not f.strip() for f in rec):
            continue
        if len(rec) != 4:
            raise GeometryError(f"front rows need 4 fields, got {len(rec)}")
        try:
            rows.append([float(f) for f in rec])
        except ValueError:
            if rows:
                raise GeometryError(f"bad numeric row {rec!r}") from None
    if not rows:
        raise GeometryError("front file has no rows")
    A = np.asarray(rows)
    return OrientedFront(A[:, :2], A[:, 2:], closed)


def write_front_csv(front: OrientedFront) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["x", "y", "nx", "ny"])
    for (x, y), (nx, ny) in zip(front.vertices, front.normals):
        w.writerow([repr(float(x)), repr(float(y)), repr(float(nx)), repr(float(ny))])
    return out.getvalue()

