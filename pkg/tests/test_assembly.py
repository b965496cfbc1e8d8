
import numpy as np
import pytest
from scipy.integrate import dblquad
from scipy.linalg import eigh, eigvalsh

from arcbem.assembly import (GalerkinSpace, ParamFunction,
                             PlaneWaveNormalDerivative, PlaneWaveTrace,
                             assemble_hypersingular_weighted, assemble_mass,
                             assemble_rhs, assemble_single_layer_standard,
                             assemble_single_layer_weighted,
                             assemble_sqrt_argument, interpolate, node_grid,
                             standard_mass_and_stiffness)
from arcbem.errors import AssemblyError
from arcbem.geometry import beta_graded_mesh, graded_mesh, make_arc
from arcbem.specfun import chebyshev_T, chebyshev_U, mathieu_char


@pytest.fixture(scope="module")
def flat():
    return make_arc("flat-segment")


@pytest.fixture(scope="module")
def flat_mesh256(flat):
    return graded_mesh(flat, 256)


@pytest.fixture(scope="module")
def space_d(flat_mesh256):
    return GalerkinSpace(flat_mesh256, "continuous", "inv-omega")


@pytest.fixture(scope="module")
def space_n(flat_mesh256):
    return GalerkinSpace(flat_mesh256, "continuous", "omega")


@pytest.fixture(scope="module")
def s_matrix(space_d, flat):
    return assemble_single_layer_weighted(space_d, flat, 0.0)


@pytest.fixture(scope="module")
def n_matrix(space_n, flat):
    return assemble_hypersingular_weighted(space_n, flat, 0.0)


class TestSpaces:
    def test_dof_counts(self, flat_mesh256):
        assert GalerkinSpace(flat_mesh256, "continuous", "inv-omega").dof_count == 257
        assert GalerkinSpace(flat_mesh256, "discontinuous", "inv-omega").dof_count == 512

    def test_partition_of_unity(self, flat_mesh256):
        for continuity in ("continuous", "discontinuous"):
            space = GalerkinSpace(flat_mesh256, continuity, "inv-omega")
            tau = np.linspace(0.013, np.pi - 0.013, 100)
            panel = np.clip((tau // flat_mesh256.panel_tau_width).astype(int),
                            0, 255)
            vals = space.local_values(panel, tau, "value")
            assert np.allclose(vals.sum(axis=0), 1.0, atol=1e-14)

    def test_invalid_args(self, flat_mesh256):
        with pytest.raises(AssemblyError):
            GalerkinSpace(flat_mesh256, "quadratic", "inv-omega")
        with pytest.raises(AssemblyError):
            GalerkinSpace(flat_mesh256, "continuous", "sqrt")


class TestMass:
    def test_inv_omega_total(self, space_d):
        assert assemble_mass(space_d).sum() == pytest.approx(1.0, abs=1e-13)

    def test_omega_total(self, space_n):
        assert assemble_mass(space_n).sum() == pytest.approx(np.pi / 2, abs=1e-13)

    def test_unit_total(self, flat_mesh256):
        space = GalerkinSpace(flat_mesh256, "continuous", "unit")
        # plain arclength measure of the segment
        assert assemble_mass(space).sum() == pytest.approx(2.0, abs=1e-12)

    def test_positive_definite(self, flat):
        mesh = graded_mesh(flat, 64)
        space = GalerkinSpace(mesh, "continuous", "inv-omega")
        vals = eigvalsh(assemble_mass(space).toarray())
        assert vals[0] > 0

    def test_discontinuous_mass(self, flat_mesh256):
        space = GalerkinSpace(flat_mesh256, "discontinuous", "inv-omega")
        m = assemble_mass(space)
        assert m.sum() == pytest.approx(1.0, abs=1e-13)
        assert eigvalsh(m.toarray())[0] > 0


class TestSqrtArgument:
    def test_dirichlet_rayleigh_T3(self, flat):
        mesh = graded_mesh(flat, 2048)
        space = GalerkinSpace(mesh, "continuous", "inv-omega")
        x_mat = assemble_sqrt_argument(space, flat, 0.0, "dirichlet")
        m_mat = assemble_mass(space)
        v = interpolate(space, lambda t: chebyshev_T(3, t))
        q = (v @ x_mat @ v) / (v @ m_mat @ v)
        assert q == pytest.approx(9.0, rel=5e-3)

    def test_neumann_rayleigh_U2(self, flat):
        mesh = graded_mesh(flat, 2048)
        space = GalerkinSpace(mesh, "continuous", "omega")
        x_mat = assemble_sqrt_argument(space, flat, 0.0, "neumann")
        m_mat = assemble_mass(space)
        v = interpolate(space, lambda t: chebyshev_U(2, t))
        q = (v @ x_mat @ v) / (v @ m_mat @ v)
        assert q == pytest.approx(9.0, rel=5e-3)

    def test_tridiagonal(self, space_d, flat):
        x_mat = assemble_sqrt_argument(space_d, flat, 2.0, "dirichlet").toarray()
        mask = np.abs(np.subtract.outer(np.arange(257), np.arange(257))) > 1
        assert np.max(np.abs(x_mat[mask])) == 0.0

    def test_discontinuous_rejected(self, flat_mesh256, flat):
        space = GalerkinSpace(flat_mesh256, "discontinuous", "inv-omega")
        with pytest.raises(AssemblyError):
            assemble_sqrt_argument(space, flat, 1.0, "dirichlet")

    def test_wrong_weight_rejected(self, space_d, space_n, flat):
        with pytest.raises(AssemblyError):
            assemble_sqrt_argument(space_n, flat, 1.0, "dirichlet")
        with pytest.raises(AssemblyError):
            assemble_sqrt_argument(space_d, flat, 1.0, "neumann")

    def test_dirichlet_pencil_matches_mathieu(self, flat):
        # eigenvalues of ([X] - k^2 [I], [I]) are a_n(q) - 2q, q = k^2 / 4
        k = 4.0
        mesh = graded_mesh(flat, 1024)
        space = GalerkinSpace(mesh, "continuous", "inv-omega")
        x_mat = assemble_sqrt_argument(space, flat, k, "dirichlet").toarray()
        m_mat = assemble_mass(space).toarray()
        vals = eigh(x_mat - k**2 * m_mat, m_mat, eigvals_only=True,
                    subset_by_index=[0, 8])
        q = k * k / 4
        for n in range(7):
            want = mathieu_char("even", n, q) - 2 * q
            assert vals[n] == pytest.approx(want, rel=5e-3, abs=5e-4)

    def test_neumann_pencil_matches_mathieu(self, flat):
        # Neumann side diagonalizes on the odd family: b_(n+1)(q) - 2q
        k = 4.0
        mesh = graded_mesh(flat, 1024)
        space = GalerkinSpace(mesh, "continuous", "omega")
        x_mat = assemble_sqrt_argument(space, flat, k, "neumann").toarray()
        m_mat = assemble_mass(space).toarray()
        vals = eigh(x_mat - k**2 * m_mat, m_mat, eigvals_only=True,
                    subset_by_index=[0, 6])
        q = k * k / 4
        for n in range(5):
            want = mathieu_char("odd", n + 1, q) - 2 * q
            assert vals[n] == pytest.approx(want, rel=5e-3, abs=5e-4)


class TestSingleLayerWeighted:
    def test_sigma_identities(self, s_matrix, space_d):
        targets = {0: np.log(2.0) / 2.0, 1: 0.25, 2: 0.125}
        for n, want in targets.items():
            v = interpolate(space_d, lambda t: chebyshev_T(n, t))
            assert v @ s_matrix @ v == pytest.approx(want, rel=1e-3)

    def test_symmetry_spiral_helmholtz(self):
        arc = make_arc("spiral")
        mesh = graded_mesh(arc, 96)
        space = GalerkinSpace(mesh, "continuous", "inv-omega")
        s = assemble_single_layer_weighted(space, arc, 10.0)
        assert np.max(np.abs(s - s.T)) / np.max(np.abs(s)) < 1e-10

    def test_wrong_weight(self, space_n, flat):
        with pytest.raises(AssemblyError):
            assemble_single_layer_weighted(space_n, flat, 0.0)

    def test_entries_against_nested_quad_oracle(self, flat):
        # an independent nested adaptive quadrature of the defining integral
        # (1/pi) iint -ln|t - s| / (2 pi) phi_i(tau) phi_j(sigma) d sigma d tau
        from scipy.integrate import quad

        mesh = graded_mesh(flat, 8)
        space = GalerkinSpace(mesh, "continuous", "inv-omega")
        s = assemble_single_layer_weighted(space, flat, 0.0)
        tb = mesh.breakpoints
        delta = mesh.panel_tau_width

        def hat(j, tau):
            t = -np.cos(tau)
            if j > 0 and tb[j - 1] <= t <= tb[j]:
                return (t - tb[j - 1]) / (tb[j] - tb[j - 1])
            if j < 8 and tb[j] <= t <= tb[j + 1]:
                return (tb[j + 1] - t) / (tb[j + 1] - tb[j])
            return 0.0

        def entry(i, j):
            lo_i, hi_i = max(i - 1, 0) * delta, min(i + 1, 8) * delta
            lo_j, hi_j = max(j - 1, 0) * delta, min(j + 1, 8) * delta

            def outer(tau):
                f = lambda sig: (-np.log(abs(np.cos(tau) - np.cos(sig)) + 1e-300)
                                 / (2 * np.pi)) * hat(j, sig)
                pts = [p for p in (tau, 0.5 * (lo_j + hi_j)) if lo_j < p < hi_j]
                val, _ = quad(f, lo_j, hi_j, points=pts, limit=200,
                              epsabs=1e-12, epsrel=1e-12)
                return hat(i, tau) * val

            val, _ = quad(outer, lo_i, hi_i, limit=200, epsabs=1e-11)
            return val / np.pi

        # far pair: dofs 2 and 6 (panels 1-2 vs 5-6)
        assert s[2, 6] == pytest.approx(entry(2, 6), rel=1e-8)
        # touching pair: dofs 4 and 5 share panel 4 (log-singular diagonal)
        assert s[4, 5] == pytest.approx(entry(4, 5), rel=1e-6)

    def test_quadrature_self_check(self, flat):
        arc = make_arc("spiral")
        mesh = graded_mesh(arc, 48)
        space = GalerkinSpace(mesh, "continuous", "inv-omega")
        assemble_single_layer_weighted(space, arc, 3.0, validate=True)

    def test_richardson_consistency(self, flat):
        # quadratic forms on a fixed smooth interpolant converge at order >= 2
        f = lambda t: np.cos(2.1 * t) + 0.3 * t
        forms = []
        for n in (64, 128, 256):
            mesh = graded_mesh(flat, n)
            space = GalerkinSpace(mesh, "continuous", "inv-omega")
            s = assemble_single_layer_weighted(space, flat, 0.0)
            v = interpolate(space, f)
            forms.append(v @ s @ v)
        e1 = abs(forms[0] - forms[2])
        e2 = abs(forms[1] - forms[2])
        assert e1 / e2 > 3.4   # order two gives a factor ~4 with nested meshes


class TestHypersingularWeighted:
    def test_u_identities(self, n_matrix, space_n):
        targets = {0: np.pi / 4, 1: np.pi / 2}
        for n, want in targets.items():
            v = interpolate(space_n, lambda t: chebyshev_U(n, t))
            assert v @ n_matrix @ v == pytest.approx(want, rel=1e-2)

    def test_integration_by_parts_consistency(self, n_matrix, s_matrix,
                                              space_n, space_d):
        # <N U2, U2>_omega = pi <S (w d w U2~), (w d w U2~)>_(1/pi-normalized)
        # with w d/dx (w U_n) = -(n+1) T_{n+1}
        v = interpolate(space_n, lambda t: chebyshev_U(2, t))
        lhs = v @ n_matrix @ v
        w = interpolate(space_d, lambda t: -3.0 * chebyshev_T(3, t))
        rhs = np.pi * (w @ s_matrix @ w)
        assert lhs == pytest.approx(rhs, rel=1e-2)

    def test_finite_at_moderate_frequency(self):
        arc = make_arc("flat-segment")
        mesh = graded_mesh(arc, 128)
        space = GalerkinSpace(mesh, "continuous", "omega")
        n_mat = assemble_hypersingular_weighted(space, arc, 12.0)
        assert np.all(np.isfinite(n_mat))
        assert np.max(np.abs(n_mat - n_mat.T)) / np.max(np.abs(n_mat)) < 1e-10


class TestStandardSingleLayer:
    def test_constant_form_against_closed_form(self):
        x = beta_graded_mesh(64, 1.0)
        s, cond = assemble_single_layer_standard(0.0, x)
        ones = np.ones(len(x))
        # double integral of -ln|x-y|/(2 pi) over the square
        want = (3.0 - 2.0 * np.log(2.0)) / np.pi
        assert ones @ s @ ones == pytest.approx(want, rel=2e-8)

    def test_constant_form_against_dblquad(self):
        x = beta_graded_mesh(16, 2.0)
        s, _ = assemble_single_layer_standard(0.0, x)
        ones = np.ones(len(x))
        val, err = dblquad(lambda yy, xx: -np.log(abs(xx - yy) + 1e-300) / (2 * np.pi),
                           -1, 1, -1, 1, epsabs=1e-10)
        assert ones @ s @ ones == pytest.approx(val, rel=1e-6)

    def test_symmetry(self):
        x = beta_graded_mesh(32, 3.0)
        s, _ = assemble_single_layer_standard(4.0, x)
        assert np.max(np.abs(s - s.T)) / np.max(np.abs(s)) < 1e-10

    def test_beta_one_is_uniform(self):
        x = beta_graded_mesh(20, 1.0)
        assert np.allclose(np.diff(x), 0.1, atol=1e-14)

    def test_gram_condition_grows_with_beta(self):
        _, c1 = assemble_single_layer_standard(0.0, beta_graded_mesh(40, 1.0))
        _, c5 = assemble_single_layer_standard(0.0, beta_graded_mesh(40, 5.0))
        assert c5 > 1e3 * c1

    def test_mass_stiffness(self):
        x = beta_graded_mesh(10, 1.0)
        mass, stiff = standard_mass_and_stiffness(x)
        assert mass.sum() == pytest.approx(2.0, abs=1e-14)
        ones = np.ones(len(x))
        assert abs(stiff @ ones).max() < 1e-13


class TestRhs:
    def test_constant_data_equals_mass_rowsums(self, space_d, flat):
        b = assemble_rhs(space_d, flat, ParamFunction(lambda t: np.ones_like(t)))
        rows = np.asarray(assemble_mass(space_d).sum(axis=1)).ravel()
        assert np.allclose(b, rows, atol=1e-14)

    def test_table_rhs_finite_and_symmetric(self, space_d, flat):
        n = space_d.mesh.n_panels
        b = assemble_rhs(space_d, flat,
                         ParamFunction(lambda t: (t**2 + 1.0 / n**2) ** -0.5))
        assert np.all(np.isfinite(b))
        assert np.allclose(b, b[::-1], rtol=1e-10)

    def test_diagonal_plane_wave_normal_derivative(self, space_n, flat):
        # on the flat segment: ik sqrt(2)/2 exp(i k sqrt(2)/2 x)
        k = 3.0
        b = assemble_rhs(space_n, flat, PlaneWaveNormalDerivative(k, np.pi / 4))
        c = k * np.sqrt(2) / 2
        closed = ParamFunction(lambda t: 1j * c * np.exp(1j * c * t))
        b2 = assemble_rhs(space_n, flat, closed)
        assert np.allclose(b, b2, atol=1e-13)

    def test_plane_wave_trace(self, space_d, flat):
        k = 5.0
        b = assemble_rhs(space_d, flat, PlaneWaveTrace(k, 0.0))
        b2 = assemble_rhs(space_d, flat, ParamFunction(lambda t: np.exp(1j * k * t)))
        assert np.allclose(b, b2, atol=1e-13)
