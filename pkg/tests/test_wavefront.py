import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from synthdiff import wavefront as wf
from synthdiff.wavefront import ContactElement, GeometryError, OrientedFront, Sphere

finite = st.floats(-50, 50, allow_nan=False)
positive = st.floats(0.1, 20)


class TestSpheres:
    def test_external_touch_point(self):
        b = wf.external_touch_point(Sphere((0, 0), 1), Sphere((3, 0), 2))
        assert np.allclose(b, (1, 0), atol=1e-15)

    def test_swapped_arguments(self):
        A, C = Sphere((0, 0), 1), Sphere((3, 0), 2)
        assert np.allclose(wf.external_touch_point(A, C), wf.external_touch_point(C, A))

    def test_not_touching(self):
        with pytest.raises(GeometryError, match="do not touch externally"):
            wf.external_touch_point(Sphere((0, 0), 1), Sphere((4, 0), 2))

    @given(finite, finite, st.floats(0, 2 * math.pi), positive, positive)
    def test_touch_point_properties(self, x, y, phi, r, s):
        a = np.array([x, y])
        c = a + (r + s) * np.array([math.cos(phi), math.sin(phi)])
        A, C = Sphere(a, r), Sphere(c, s)
        b = wf.external_touch_point(A, C, tol=1e-9)
        assert abs(wf.distance(a, b) + wf.distance(b, c) - wf.distance(a, c)) <= 1e-9
        assert A.contains(b, 1e-9) and C.contains(b, 1e-9)

    @given(positive, positive, st.floats(1e-4, 1e-2))
    def test_touch_defect_is_second_order(self, r, s, h):
        A, C = Sphere((0, 0), r), Sphere((r + s, 0), s)
        d_ab, d_bc = wf.touch_defect(A, C, h)
        K = wf.touch_constant(A, C)
        assert d_ab <= 1e-12
        assert d_bc <= K * h * h * (1 + 1e-3) + 1e-12

    def test_touch_defect_constant_is_sharp(self):
        A, C = Sphere((0, 0), 1), Sphere((3, 0), 2)
        h = 1e-3
        _, d = wf.touch_defect(A, C, h)
        assert d == pytest.approx(wf.touch_constant(A, C) * h * h, rel=1e-4)

    def test_radius_must_be_positive(self):
        with pytest.raises(GeometryError):
            Sphere((0, 0), 0)


class TestRays:
    def test_internal_touch_point(self):
        assert np.allclose(wf.internal_touch_point((0, 0), (1, 0), 2), (3, 0))

    def test_tiny_s(self):
        c = wf.internal_touch_point((0, 0), (1, 0), 1e-9)
        assert wf.distance(c, (1, 0)) <= 2e-9

    def test_internal_touch_collinear(self):
        c = wf.internal_touch_point((0.3, -1), (2, 5), 1.5)
        assert wf.collinearity_check((0.3, -1), (2, 5), c)

    def test_internal_touch_coincident(self):
        with pytest.raises(GeometryError):
            wf.internal_touch_point((1, 1), (1, 1), 1)

    def test_perpendicular(self):
        P = ContactElement((0, 0), (0, 1))
        assert wf.perpendicular_check((0, 3), P)
        assert wf.perpendicular_check((0, -3), P)
        assert not wf.perpendicular_check((1, 0), P)
        assert wf.perpendicular_check((1e-6, 1e-3), P, tol=1e-4)
        with pytest.raises(GeometryError, match="distance undefined"):
            wf.perpendicular_check((0, 0), P)

    def test_ray_point(self):
        assert np.allclose(wf.ray_point(ContactElement((0, 0), (1, 0), 1), 2), (2, 0))
        assert np.allclose(wf.ray_point(ContactElement((0, 0), (1, 0), -1), 2), (-2, 0))
        with pytest.raises(GeometryError):
            wf.ray_point(ContactElement((0, 0), (1, 0)), 0)

    def test_points_on_a_ray_are_collinear(self):
        P = ContactElement((1, 2), (0.6, -0.8))
        a, b, c = (wf.ray_point(P, s) for s in (1, 2, 3))
        assert wf.collinearity_check(a, b, c)

    def test_collinearity(self):
        assert wf.collinearity_check((0, 0), (1, 0), (2, 0))
        assert not wf.collinearity_check((0, 0), (0, 1), (1, 0))
        with pytest.raises(GeometryError):
            wf.collinearity_check((0, 0), (0, 0), (1, 0))

    def test_contact_element_validation(self):
        with pytest.raises(GeometryError, match="unit"):
            ContactElement((0, 0), (1, 1))
        with pytest.raises(GeometryError):
            ContactElement((0, 0), (1, 0), 0)


class TestOffsets:
    @pytest.mark.parametrize("orientation,radius", [("outer", 2.5), ("inner", 1.5)])
    def test_circle(self, orientation, radius):
        B = OrientedFront.circle((0, 0), 2, 256)
        rep = wf.offset_front(B, 0.5, orientation)
        r = np.hypot(*rep.front.vertices.T)
        assert np.abs(r - radius).max() <= 1e-9
        assert not rep.has_cusps

    def test_inner_past_center_is_cusped(self):
        rep = wf.offset_front(OrientedFront.circle((0, 0), 2, 64), 2.5, "inner")
        assert rep.has_cusps

    def test_segment_translates(self):
        B = OrientedFront.segment((0, 0), (4, 0), 9)
        rep = wf.offset_front(B, 0.75)
        assert np.allclose(rep.front.vertices, B.vertices + [0, 0.75])

    @given(st.floats(0.01, 0.24), st.floats(0.01, 0.24))
    def test_semigroup_on_ellipse(self, s, t):
        B = OrientedFront.ellipse(2, 1, 400)
        two = wf.offset_front(wf.offset_front(B, s).front, t).front.vertices
        one = wf.offset_front(B, s + t).front.vertices
        assert np.abs(two - one).max() <= 1e-9

    def test_inner_semigroup_below_threshold(self):
        B = OrientedFront.ellipse(2, 1, 400)
        two = wf.offset_front(wf.offset_front(B, 0.2, -1).front, 0.2, -1).front.vertices
        assert np.abs(two - wf.offset_front(B, 0.4, -1).front.vertices).max() <= 1e-9

    @pytest.mark.parametrize("a,b", [(2, 1), (3, 1), (1.5, 1)])
    def test_cusp_threshold_matches_curvature(self, a, b):
        n = 512
        B = OrientedFront.ellipse(a, b, n)
        rmin = wf.ellipse_min_radius(a, b)
        spacing = np.hypot(*np.diff(B.vertices, axis=0).T).max()
        assert not wf.offset_front(B, rmin - spacing, "inner").has_cusps
        assert wf.offset_front(B, rmin + spacing, "inner").has_cusps

    def test_cusps_sit_at_vertices_of_high_curvature(self):
        B = OrientedFront.ellipse(2, 1, 512)
        rep = wf.offset_front(B, 0.6, "inner")
        theta = 2 * np.pi * np.array(rep.indices) / 512
        assert (wf.ellipse_curvature_radius(2, 1, theta) < 0.6 + 0.05).all()

    def test_rejects_nonpositive(self):
        with pytest.raises(GeometryError):
            wf.offset_front(OrientedFront.circle((0, 0), 1, 8), 0)
        with pytest.raises(GeometryError):
            wf.offset_front(OrientedFront.circle((0, 0), 1, 8), 1, "sideways")

    def test_front_validation(self):
        with pytest.raises(GeometryError, match="distinct"):
            OrientedFront([[0, 0], [0, 0]], [[0, 1], [0, 1]], closed=False)
        with pytest.raises(GeometryError, match="unit"):
            OrientedFront([[0, 0], [1, 0]], [[0, 2], [0, 1]], closed=False)


class TestCurvatureRadius:
    def test_extremes(self):
        assert wf.ellipse_curvature_radius(2, 1, 0) == pytest.approx(0.5)
        assert wf.ellipse_curvature_radius(2, 1, math.pi / 2) == pytest.approx(4)
        assert wf.ellipse_min_radius(1, 2) == 0.5


class TestFit:
    @given(finite, finite, positive, st.floats(0, 2 * math.pi))
    def test_three_points(self, x, y, r, phase):
        S = wf.fit_sphere(Sphere((x, y), r).sample(3, phase))
        assert abs(S.radius - r) <= 1e-9 * max(1, r)
        assert wf.distance(S.center, (x, y)) <= 1e-9 * max(1, r, abs(x), abs(y))

    @given(finite, finite, positive, st.integers(4, 40))
    def test_many_points(self, x, y, r, n):
        S = wf.fit_sphere(Sphere((x, y), r).sample(n, 0.3))
        assert abs(S.radius - r) <= 1e-9 * max(1, r, abs(x), abs(y))
        assert wf.distance(S.center, (x, y)) <= 1e-9 * max(1, r, abs(x), abs(y))

    def test_collinear(self):
        with pytest.raises(GeometryError):
            wf.fit_sphere([(0, 0), (1, 1), (2, 2)])


class TestCsv:
    def test_round_trip(self):
        B = OrientedFront.ellipse(2, 1, 17)
        back = wf.read_front_csv(wf.write_front_csv(B))
        assert np.array_equal(back.vertices, B.vertices) and np.array_equal(back.normals, B.normals)

    def test_headerless_open(self):
        F = wf.read_front_csv("0,0,0,1\n1,0,0,1\n", closed=False)
        assert len(F) == 2 and not F.closed

    @pytest.mark.parametrize("text", ["", "x,y,nx,ny\n", "0,0,0\n", "0,0,0,1\n1,a,0,1\n"])
    def test_bad(self, text):
        with pytest.raises(GeometryError):
            wf.read_front_csv(text)
