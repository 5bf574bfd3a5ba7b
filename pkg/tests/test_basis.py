import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitdg.basis import build_basis, differentiate, quadrature_integrate


class TestNodesAndWeights:
    @pytest.mark.parametrize("n", range(1, 16))
    def test_nodes_cover_endpoints_and_increase(self, n):
        b = build_basis(n)
        assert b.nodes[0] == -1.0
        assert b.nodes[-1] == 1.0
        assert np.all(np.diff(b.nodes) > 0)

    @pytest.mark.parametrize("n", range(1, 16))
    def test_nodes_symmetric(self, n):
        b = build_basis(n)
        assert np.max(np.abs(b.nodes + b.nodes[::-1])) == 0.0

    @pytest.mark.parametrize("n", range(1, 16))
    def test_weights_positive_symmetric_sum_two(self, n):
        b = build_basis(n)
        assert np.all(b.weights > 0)
        np.testing.assert_allclose(b.weights, b.weights[::-1], rtol=0, atol=0)
        assert abs(b.weights.sum() - 2.0) < 1e-14

    def test_degree_one_values(self):
        b = build_basis(1)
        np.testing.assert_allclose(b.nodes, [-1.0, 1.0])
        np.testing.assert_allclose(b.weights, [1.0, 1.0])
        np.testing.assert_allclose(b.deriv, [[-0.5, 0.5], [-0.5, 0.5]], atol=1e-15)

    def test_degree_two_values(self):
        b = build_basis(2)
        np.testing.assert_allclose(b.nodes, [-1.0, 0.0, 1.0], atol=1e-15)
        np.testing.assert_allclose(b.weights, [1 / 3, 4 / 3, 1 / 3], atol=1e-15)
        expected = np.array([[-1.5, 2.0, -0.5], [-0.5, 0.0, 0.5], [0.5, -2.0, 1.5]])
        np.testing.assert_allclose(b.deriv, expected, atol=1e-14)

    @pytest.mark.parametrize("bad", [0, -1, 21, 2.5, "3"])
    def test_degree_out_of_range_rejected(self, bad):
        with pytest.raises(ValueError):
            build_basis(bad)


class TestQuadrature:
    @pytest.mark.parametrize("n", range(1, 16))
    def test_exact_for_monomials_through_2n_minus_1(self, n):
        b = build_basis(n)
        for k in range(2 * n):
            exact = 2.0 / (k + 1) if k % 2 == 0 else 0.0
            got = quadrature_integrate(b, b.nodes**k)
            assert abs(got - exact) < 1e-13, (n, k)

    def test_constant_integrates_to_measure(self):
        b = build_basis(4)
        assert quadrature_integrate(b, np.ones(5)) == pytest.approx(2.0, abs=1e-14)

    def test_quadratic_example(self):
        b = build_basis(2)
        assert quadrature_integrate(b, b.nodes**2) == pytest.approx(2 / 3, abs=1e-14)

    def test_odd_power_vanishes(self):
        b = build_basis(3)
        assert quadrature_integrate(b, b.nodes**5) == pytest.approx(0.0, abs=1e-15)

    def test_length_mismatch_rejected(self):
        b = build_basis(3)
        with pytest.raises(ValueError):
            quadrature_integrate(b, np.ones(3))


class TestDerivative:
    @pytest.mark.parametrize("n", range(1, 16))
    def test_row_sums_vanish(self, n):
        b = build_basis(n)
        assert np.max(np.abs(b.deriv.sum(axis=1))) < 1e-13
        assert np.max(np.abs(b.qmat.sum(axis=1))) < 1e-13

    @pytest.mark.parametrize("n", range(1, 16))
    def test_exact_for_polynomials_through_degree_n(self, n):
        b = build_basis(n)
        for k in range(n + 1):
            got = differentiate(b, b.nodes**k)
            exact = k * b.nodes ** (k - 1) if k > 0 else np.zeros(n + 1)
            assert np.max(np.abs(got - exact)) < 1e-11 * max(1.0, n**2), (n, k)

    def test_constant_maps_to_zero(self):
        b = build_basis(5)
        assert np.max(np.abs(differentiate(b, np.full(6, 3.7)))) < 1e-13

    def test_identity_maps_to_ones(self):
        b = build_basis(4)
        np.testing.assert_allclose(differentiate(b, b.nodes), np.ones(5), atol=1e-13)

    def test_quartic_example(self):
        b = build_basis(4)
        got = differentiate(b, b.nodes**4)
        np.testing.assert_allclose(got, 4 * b.nodes**3, atol=1e-12)

    def test_length_mismatch_rejected(self):
        b = build_basis(2)
        with pytest.raises(ValueError):
            differentiate(b, np.ones(5))


class TestSbpProperty:
    @pytest.mark.parametrize("n", range(1, 16))
    def test_q_plus_qt_is_boundary_operator(self, n):
        b = build_basis(n)
        assert np.max(np.abs(b.qmat + b.qmat.T - b.bmat)) < 1e-13


def _split_two(d, a, b_vec):
    return 0.5 * (d @ (a * b_vec) + a * (d @ b_vec) + b_vec * (d @ a))


def _split_three(d, a, b_vec, c):
    return 0.25 * (
        d @ (a * b_vec * c)
        + a * (d @ (b_vec * c))
        + b_vec * (d @ (a * c))
        + c * (d @ (a * b_vec))
        + b_vec * c * (d @ a)
        + a * c * (d @ b_vec)
        + a * b_vec * (d @ c)
    )


class TestDiscreteSplitIdentities:
    """Pairwise average contractions against their matrix split forms."""

    @staticmethod
    def _pairwise(d, factors):
        n = d.shape[0]
        out = np.zeros(n)
        for i in range(n):
            for m in range(n):
                prod = 1.0
                for f in factors:
                    prod *= 0.5 * (f[i] + f[m])
                out[i] += 2.0 * d[i, m] * prod
        return out

    @pytest.mark.parametrize("n", [2, 3, 5, 8])
    def test_single_average_recovers_derivative(self, n):
        rng = np.random.default_rng(100 + n)
        b = build_basis(n)
        for _ in range(100):
            a = rng.uniform(-2, 2, n + 1)
            lhs = self._pairwise(b.deriv, [a])
            rhs = b.deriv @ a
            scale = max(1.0, np.abs(rhs).max())
            assert np.max(np.abs(lhs - rhs)) / scale < 1e-12

    @pytest.mark.parametrize("n", [2, 3, 5, 8])
    def test_double_average_recovers_quadratic_split(self, n):
        rng = np.random.default_rng(200 + n)
        b = build_basis(n)
        for _ in range(100):
            a, c = rng.uniform(-2, 2, (2, n + 1))
            lhs = self._pairwise(b.deriv, [a, c])
            rhs = _split_two(b.deriv, a, c)
            scale = max(1.0, np.abs(rhs).max())
            assert np.max(np.abs(lhs - rhs)) / scale < 1e-12

    @pytest.mark.parametrize("n", [2, 3, 5, 8])
    def test_triple_average_recovers_cubic_split(self, n):
        rng = np.random.default_rng(300 + n)
        b = build_basis(n)
        for _ in range(100):
            a, c, e = rng.uniform(-2, 2, (3, n + 1))
            lhs = self._pairwise(b.deriv, [a, c, e])
            rhs = _split_three(b.deriv, a, c, e)
            scale = max(1.0, np.abs(rhs).max())
            assert np.max(np.abs(lhs - rhs)) / scale < 1e-12


@settings(max_examples=30, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=10),
    coeffs=st.lists(st.floats(-5, 5), min_size=1, max_size=8),
)
def test_derivative_matches_polynomial_calculus(n, coeffs):
    """D differentiates any interpolated polynomial of degree <= N exactly."""
    coeffs = coeffs[: n + 1]
    b = build_basis(n)
    poly = np.polynomial.Polynomial(coeffs)
    got = differentiate(b, poly(b.nodes))
    want = poly.deriv()(b.nodes)
    assert np.max(np.abs(got - want)) < 1e-10 * max(1.0, np.max(np.abs(want)))
