import numpy as np
import pytest

from splitdg.basis import build_basis
from splitdg.euler import GasModel, conserved_from_primitive
from splitdg.mesh import build_cartesian_mesh
from splitdg.solver import Field, SemidiscreteConfig
from splitdg.timestepping import advance, compute_dt, lsrk_step, step_field

GAS = GasModel()


def constant_field(mesh, basis, prim):
    state = conserved_from_primitive(np.asarray(prim, dtype=float), GAS)
    data = np.empty((5, mesh.nelements, basis.nnodes, basis.nnodes, basis.nnodes))
    data[:] = state[:, None, None, None, None]
    return Field(data, mesh, basis)


class TestStepper:
    def test_zero_rate_leaves_state_unchanged(self):
        y0 = np.array([1.0, -2.0, 3.0])
        y1 = lsrk_step(y0, 0.0, 0.1, lambda y, t: np.zeros_like(y))
        np.testing.assert_array_equal(y0, y1)

    def test_constant_rate_advances_exactly(self):
        y1 = lsrk_step(np.array(2.0), 0.0, 0.25, lambda y, t: np.array(3.0))
        assert float(y1) == pytest.approx(2.75, abs=1e-14)

    def test_exact_on_polynomial_rates(self):
        # y' = 2t integrates exactly: RK4 is exact through degree-4 solutions
        y1 = lsrk_step(np.array(0.0), 0.0, 0.3, lambda y, t: np.array(2.0 * t))
        assert float(y1) == pytest.approx(0.09, rel=1e-13)

    def test_does_not_mutate_input(self):
        y0 = np.ones(4)
        lsrk_step(y0, 0.0, 0.5, lambda y, t: y)
        np.testing.assert_array_equal(y0, np.ones(4))

    def test_rejects_nonpositive_dt(self):
        with pytest.raises(ValueError):
            lsrk_step(np.array(1.0), 0.0, 0.0, lambda y, t: y)

    def test_observed_order_at_least_four(self):
        errs = []
        for dt in (0.1, 0.05, 0.025):
            y, t = np.array(1.0), 0.0
            while t < 1.0 - 1e-12:
                h = min(dt, 1.0 - t)
                y = lsrk_step(y, t, h, lambda yy, tt: -yy)
                t += h
            errs.append(abs(float(y) - np.exp(-1.0)))
        orders = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
        assert min(orders) >= 3.9


class TestCflStep:
    def test_stagnant_reference_value(self):
        mesh = build_cartesian_mesh(1, 1, 1, ((0, 2 * np.pi),) * 3)
        basis = build_basis(1)
        fld = constant_field(mesh, basis, [1.0, 0, 0, 0, 1.0])
        dt = compute_dt(fld, 1.0, GAS)
        expected = np.pi / (3.0 * np.sqrt(1.4))
        assert dt == pytest.approx(expected, rel=1e-14)

    def test_linear_in_cfl(self):
        mesh = build_cartesian_mesh(2, 2, 2, ((0, 1),) * 3)
        basis = build_basis(3)
        fld = constant_field(mesh, basis, [1.0, 0.5, 0, 0, 1.0])
        assert compute_dt(fld, 1.0, GAS) == pytest.approx(
            2 * compute_dt(fld, 0.5, GAS), rel=1e-14
        )

    def test_halves_under_mesh_refinement(self):
        basis = build_basis(3)
        coarse = build_cartesian_mesh(2, 2, 2, ((0, 1),) * 3)
        fine = build_cartesian_mesh(4, 4, 4, ((0, 1),) * 3)
        dt_c = compute_dt(constant_field(coarse, basis, [1, 0, 0, 0, 1.0]), 0.5, GAS)
        dt_f = compute_dt(constant_field(fine, basis, [1, 0, 0, 0, 1.0]), 0.5, GAS)
        assert dt_c == pytest.approx(2 * dt_f, rel=1e-14)

    def test_rejects_nonpositive_cfl(self):
        mesh = build_cartesian_mesh(1, 1, 1, ((0, 1),) * 3)
        basis = build_basis(1)
        fld = constant_field(mesh, basis, [1, 0, 0, 0, 1.0])
        with pytest.raises(ValueError):
            compute_dt(fld, 0.0, GAS)


class TestAdvance:
    def test_free_stream_stays_constant(self):
        mesh = build_cartesian_mesh(2, 2, 2, ((0, 2 * np.pi),) * 3)
        basis = build_basis(2)
        fld = constant_field(mesh, basis, [1.0, 0.3, -0.1, 0.2, 2.0])
        cfg = SemidiscreteConfig(scheme="kg", stab="llf", gas=GAS)
        out, t = advance(fld, cfg, 0.0, 0.5, 0.5)
        assert t == pytest.approx(0.5)
        np.testing.assert_allclose(out.data, fld.data, atol=1e-11)

    def test_lands_exactly_on_t_end(self):
        mesh = build_cartesian_mesh(2, 2, 2, ((0, 2 * np.pi),) * 3)
        basis = build_basis(2)
        fld = constant_field(mesh, basis, [1.0, 0, 0, 0, 2.0])
        calls = []
        _, t = advance(fld, SemidiscreteConfig("kg", "llf", GAS), 0.0, 0.7,
                       0.5, on_step=lambda f, tt: calls.append(tt))
        assert t == pytest.approx(0.7, abs=1e-12)
        assert calls[-1] == pytest.approx(0.7, abs=1e-12)

    def test_step_field_matches_manual_stepping(self):
        mesh = build_cartesian_mesh(2, 2, 2, ((0, 2 * np.pi),) * 3)
        basis = build_basis(2)
        fld = constant_field(mesh, basis, [1.0, 0.1, 0, 0, 2.0])
        cfg = SemidiscreteConfig(scheme="kg", stab="llf", gas=GAS)
        stepped = step_field(fld, cfg, 0.0, 1e-3)
        assert stepped.data.shape == fld.data.shape
        assert stepped is not fld
