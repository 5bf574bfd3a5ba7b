import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitdg.basis import build_basis
from splitdg.mesh import (
    FACE_XM,
    FACE_XP,
    FACE_YM,
    FACE_YP,
    FACE_ZM,
    FACE_ZP,
    build_cartesian_mesh,
    node_coordinates,
)


class TestMetricTerms:
    def test_unit_cube_reference_element(self):
        m = build_cartesian_mesh(1, 1, 1, ((-1, 1), (-1, 1), (-1, 1)))
        assert m.dx == m.dy == m.dz == 2.0
        assert m.jacobian == 1.0
        assert m.metric == (1.0, 1.0, 1.0)

    def test_periodic_box_spacing(self):
        m = build_cartesian_mesh(16, 16, 16, ((0, 2 * np.pi),) * 3)
        assert m.dx == pytest.approx(np.pi / 8, rel=1e-15)

    def test_anisotropic_jacobian(self):
        m = build_cartesian_mesh(2, 1, 1, ((0, 2), (0, 1), (0, 1)))
        assert m.jacobian == pytest.approx(1 / 8)
        assert m.metric == (0.5, 0.5, 0.5)

    def test_jacobian_sums_to_domain_volume(self):
        m = build_cartesian_mesh(3, 4, 5, ((0, 1), (-2, 0), (1, 4)))
        assert m.nelements * m.jacobian * 8 == pytest.approx(m.volume, rel=1e-14)

    @pytest.mark.parametrize("counts", [(0, 1, 1), (1, -2, 1)])
    def test_bad_counts_rejected(self, counts):
        with pytest.raises(ValueError):
            build_cartesian_mesh(*counts, ((0, 1),) * 3)

    def test_degenerate_interval_rejected(self):
        with pytest.raises(ValueError):
            build_cartesian_mesh(1, 1, 1, ((0, 0), (0, 1), (0, 1)))


class TestNeighbors:
    def test_wraparound_positive_x(self):
        m = build_cartesian_mesh(4, 1, 1, ((0, 1),) * 3)
        assert m.neighbor(3, FACE_XP) == 0

    def test_wraparound_negative_x(self):
        m = build_cartesian_mesh(4, 1, 1, ((0, 1),) * 3)
        assert m.neighbor(0, FACE_XM) == 3

    def test_opposite_faces_compose_to_identity(self):
        m = build_cartesian_mesh(3, 4, 2, ((0, 1),) * 3)
        pairs = ((FACE_XM, FACE_XP), (FACE_YM, FACE_YP), (FACE_ZM, FACE_ZP))
        for e in range(m.nelements):
            for lo, hi in pairs:
                assert m.neighbor(m.neighbor(e, hi), lo) == e
                assert m.neighbor(m.neighbor(e, lo), hi) == e

    def test_neighbor_is_bijection_per_face(self):
        m = build_cartesian_mesh(3, 2, 5, ((0, 1),) * 3)
        for face in range(6):
            image = sorted(m.neighbor(e, face) for e in range(m.nelements))
            assert image == list(range(m.nelements))

    def test_bad_indices_rejected(self):
        m = build_cartesian_mesh(2, 2, 2, ((0, 1),) * 3)
        with pytest.raises(ValueError):
            m.neighbor(8, FACE_XP)
        with pytest.raises(ValueError):
            m.neighbor(0, 6)

    def test_lexicographic_indexing(self):
        m = build_cartesian_mesh(3, 4, 5, ((0, 1),) * 3)
        assert m.element_index(1, 2, 3) == 1 + 3 * (2 + 4 * 3)
        assert m.element_coords(m.element_index(2, 1, 4)) == (2, 1, 4)


@settings(max_examples=50, deadline=None)
@given(
    nx=st.integers(1, 5),
    ny=st.integers(1, 5),
    nz=st.integers(1, 5),
    face=st.integers(0, 5),
    data=st.data(),
)
def test_neighbor_round_trip_property(nx, ny, nz, face, data):
    m = build_cartesian_mesh(nx, ny, nz, ((0, 1),) * 3)
    e = data.draw(st.integers(0, m.nelements - 1))
    opposite = face + 1 if face % 2 == 0 else face - 1
    assert m.neighbor(m.neighbor(e, face), opposite) == e


class TestNodeCoordinates:
    def test_cover_element_bounds(self):
        m = build_cartesian_mesh(2, 2, 2, ((0, 2), (0, 2), (0, 2)))
        b = build_basis(3)
        x, y, z = node_coordinates(m, b)
        assert x.shape == (8, 4, 4, 4)
        e = m.element_index(1, 0, 1)
        assert x[e, 0, 0, 0] == pytest.approx(1.0)
        assert x[e, -1, 0, 0] == pytest.approx(2.0)
        assert z[e, 0, 0, 0] == pytest.approx(1.0)
        assert y[e, 0, -1, 0] == pytest.approx(1.0)

    def test_axis_alignment(self):
        m = build_cartesian_mesh(1, 1, 1, ((0, 1),) * 3)
        b = build_basis(2)
        x, y, z = node_coordinates(m, b)
        # x varies along the first node axis only
        assert np.ptp(x[0], axis=(1, 2)).max() == 0.0
        assert np.ptp(y[0], axis=(0, 2)).max() == 0.0
        assert np.ptp(z[0], axis=(0, 1)).max() == 0.0
