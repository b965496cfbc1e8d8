import numpy as np
import pytest

from arcbem.errors import GeometryError
from arcbem.geometry import (
    Arc,
    beta_graded_mesh,
    graded_mesh,
    make_arc,
    normal_vector,
    weight_omega,
)

# exact spiral length: speed = sqrt(4.16) e^{0.4 (t - 0.2)}
SPIRAL_LENGTH = np.sqrt(4.16) / 0.4 * (np.exp(0.32) - np.exp(-0.48))


@pytest.fixture(scope="module")
def spiral():
    return make_arc("spiral")


class TestMakeArc:
    def test_flat_segment(self):
        arc = make_arc("flat-segment")
        assert arc.length == pytest.approx(2.0, abs=1e-13)
        t = np.linspace(-1, 1, 11)
        pts = arc.point(t)
        assert np.allclose(pts[:, 0], t, atol=1e-13)
        assert np.allclose(pts[:, 1], 0.0, atol=1e-15)

    def test_spiral_length_closed_form(self, spiral):
        assert spiral.length == pytest.approx(SPIRAL_LENGTH, rel=1e-10)
        # quoted rounded value is ~3.87
        assert abs(spiral.length - 3.8668) < 5e-4

    def test_vshape_pi_is_flat(self):
        arc = make_arc("v-shape", theta=np.pi)
        flat = make_arc("flat-segment")
        t = np.linspace(-1, 1, 17)
        assert np.allclose(arc.point(t), flat.point(t), atol=1e-13)
        assert arc.corners == ()

    def test_vshape_angle_validation(self):
        for bad in (0.0, -1.0, np.pi + 0.1):
            with pytest.raises(GeometryError):
                make_arc("v-shape", theta=bad)

    def test_vshape_speed_and_length(self):
        arc = make_arc("v-shape", theta=np.pi / 2)
        assert arc.length == pytest.approx(2.0, abs=1e-13)
        d = arc.derivative(np.array([-0.7, -0.1, 0.3, 0.9]))
        assert np.allclose(np.hypot(d[:, 0], d[:, 1]), 1.0, atol=1e-13)
        assert arc.corners == (0.0,)

    def test_custom_curve_roundtrip(self):
        t = np.linspace(-1, 1, 101)
        samples = np.column_stack([t, t, 0.25 * (1 - t * t)])
        arc = make_arc("custom", samples=samples)
        want = np.trapezoid(np.hypot(1.0, -0.5 * t), t)
        # natural spline ends perturb the curve slightly near t = +-1
        assert arc.length == pytest.approx(want, rel=2e-4)
        sp = np.hypot(*arc.derivative(np.linspace(-1, 1, 200)).T)
        assert np.allclose(sp, arc.length / 2, rtol=1e-8)

    def test_custom_self_intersecting_rejected(self):
        t = np.linspace(-1, 1, 201)
        # figure-eight-ish curve crosses itself
        samples = np.column_stack([t, np.sin(2 * np.pi * t), np.sin(4 * np.pi * t) * 0.5])
        with pytest.raises(GeometryError):
            make_arc("custom", samples=samples)

    def test_unknown_kind(self):
        with pytest.raises(GeometryError):
            make_arc("circle")


class TestNormalization:
    def test_flat_identity(self):
        arc = make_arc("flat-segment")
        u = np.linspace(-1, 1, 33)
        assert np.allclose(arc.raw_parameter(u), u, atol=1e-14)

    def test_spiral_constant_speed(self, spiral):
        u = np.linspace(-1, 1, 4001)
        d = spiral.derivative(u)
        sp = np.hypot(d[:, 0], d[:, 1])
        assert np.max(np.abs(sp - spiral.length / 2)) / (spiral.length / 2) < 1e-8

    def test_spiral_derivative_consistent_with_points(self, spiral):
        u = np.linspace(-0.95, 0.95, 41)
        h = 1e-6
        fd = (spiral.point(u + h) - spiral.point(u - h)) / (2 * h)
        assert np.allclose(fd, spiral.derivative(u), atol=1e-6, rtol=1e-6)

    def test_idempotent(self, spiral):
        # mapping is already constant speed: solving again must return u
        u = np.linspace(-1, 1, 65)
        t = spiral.raw_parameter(u)
        s_of_t, _ = spiral._arclength_and_speed(t)
        back = 2.0 * s_of_t / spiral.length - 1.0
        assert np.allclose(back, u, atol=1e-12)

    def test_endpoints_preserved(self, spiral):
        assert spiral.raw_parameter(np.array([-1.0, 1.0])) == pytest.approx([-1.0, 1.0], abs=1e-14)


class TestWeight:
    def test_flat_values(self):
        arc = make_arc("flat-segment")
        assert weight_omega(arc, 0.0) == pytest.approx(1.0, abs=1e-15)
        assert weight_omega(arc, 1.0) == 0.0
        assert weight_omega(arc, -1.0) == 0.0

    def test_spiral_midpoint(self, spiral):
        assert weight_omega(spiral, 0.0) == pytest.approx(spiral.length / 2, rel=1e-12)

    def test_symmetry(self, spiral):
        rng = np.random.default_rng(11)
        t = rng.uniform(-1, 1, 257)
        assert np.allclose(weight_omega(spiral, t), weight_omega(spiral, -t), atol=1e-14)

    def test_roundoff_clamp(self):
        arc = make_arc("flat-segment")
        assert weight_omega(arc, 1.0 + 1e-13) == 0.0


class TestNormals:
    def test_flat_normal(self):
        arc = make_arc("flat-segment")
        n = normal_vector(arc, np.array([-0.5, 0.0, 0.8]))
        assert np.allclose(n, [[0, 1], [0, 1], [0, 1]], atol=1e-14)

    def test_vshape_normal(self):
        arc = make_arc("v-shape", theta=np.pi / 2)
        n = normal_vector(arc, 0.5)
        assert np.allclose(n, [-np.cos(np.pi / 4), np.sin(np.pi / 4)], atol=1e-14)

    def test_vshape_corner_rejected(self):
        arc = make_arc("v-shape", theta=np.pi / 2)
        with pytest.raises(GeometryError):
            normal_vector(arc, 0.0)

    def test_orthogonal_to_tangent(self, spiral):
        u = np.linspace(-0.99, 0.99, 101)
        n = normal_vector(spiral, u)
        d = spiral.derivative(u)
        dots = np.abs(np.sum(n * d, axis=-1)) / (spiral.length / 2)
        assert np.max(dots) < 1e-12
        assert np.allclose(np.hypot(n[:, 0], n[:, 1]), 1.0, atol=1e-13)


class TestGradedMesh:
    def test_small_breakpoints(self):
        arc = make_arc("flat-segment")
        m2 = graded_mesh(arc, 2)
        assert np.allclose(m2.breakpoints, [-1, 0, 1], atol=1e-15)
        m4 = graded_mesh(arc, 4)
        s = np.sqrt(2) / 2
        assert np.allclose(m4.breakpoints, [-1, -s, 0, s, 1], atol=1e-15)

    def test_weighted_measures_equal(self):
        arc = make_arc("flat-segment")
        mesh = graded_mesh(arc, 100)
        h = mesh.weighted_measures()
        assert np.allclose(h, np.pi / 100, rtol=1e-12)

    def test_breakpoints_increasing_symmetric(self, spiral):
        mesh = graded_mesh(spiral, 37)
        b = mesh.breakpoints
        assert np.all(np.diff(b) > 0)
        assert np.allclose(b, -b[::-1], atol=1e-14)

    def test_width_ratio_limit(self):
        # widths grow like (2i+1) near the edge: second/first -> 3
        arc = make_arc("flat-segment")
        mesh = graded_mesh(arc, 400)
        w = np.diff(mesh.breakpoints)
        assert abs(w[1] / w[0] - 3.0) < 0.3

    def test_corner_needs_even(self):
        arc = make_arc("v-shape", theta=np.pi / 3)
        with pytest.raises(GeometryError):
            graded_mesh(arc, 7)
        mesh = graded_mesh(arc, 8)
        assert mesh.breakpoints[4] == pytest.approx(0.0, abs=1e-15)

    def test_min_panels(self):
        with pytest.raises(GeometryError):
            graded_mesh(make_arc("flat-segment"), 1)


class TestBetaMesh:
    def test_beta_one_uniform(self):
        x = beta_graded_mesh(10, 1.0)
        assert np.allclose(np.diff(x), 0.2, atol=1e-14)

    def test_beta_two_clusters_toward_edges(self):
        x = beta_graded_mesh(40, 2.0)
        w = np.diff(x)
        assert w[0] < w[19] / 10
        assert np.allclose(x, -x[::-1], atol=1e-15)

    def test_validation(self):
        with pytest.raises(GeometryError):
            beta_graded_mesh(9, 2.0)
        with pytest.raises(GeometryError):
            beta_graded_mesh(10, 6.0)
