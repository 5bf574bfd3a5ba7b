"""Periodic Cartesian hexahedral mesh with metric terms and face topology.

Elements are indexed lexicographically, e = i + nx*(j + ny*k). Face ids
follow the order -x, +x, -y, +y, -z, +z. All boundaries are periodic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import PolyBasis

FACE_XM, FACE_XP, FACE_YM, FACE_YP, FACE_ZM, FACE_ZP = range(6)


@dataclass(frozen=True)
class CartesianMesh:
    nx: int
    ny: int
    nz: int
    bounds: tuple  # ((x0, x1), (y0, y1), (z0, z1))
    dx: float
    dy: float
    dz: float
    jacobian: float          # J = dx dy dz / 8
    metric: tuple            # (X_xi, Y_eta, Z_zeta) = (dx/2, dy/2, dz/2)
    neighbors: np.ndarray    # (6, nelements) periodic neighbor table
    origins: np.ndarray      # (nelements, 3) low corner of each element

    @property
    def nelements(self) -> int:
        return self.nx * self.ny * self.nz

    @property
    def extents(self) -> tuple:
        return tuple(hi - lo for lo, hi in self.bounds)

    @property
    def volume(self) -> float:
        ex, ey, ez = self.extents
        return ex * ey * ez

    def element_index(self, i: int, j: int, k: int) -> int:
        return i + self.nx * (j + self.ny * k)

    def element_coords(self, e: int) -> tuple:
        i = e % self.nx
        j = (e // self.nx) % self.ny
        k = e // (self.nx * self.ny)
        return i, j, k

    def neighbor(self, element: int, face: int) -> int:
        """Periodic wraparound neighbor across the given face."""
        if not 0 <= element < self.nelements:
            raise ValueError(f"element index {element} out of range")
        if not 0 <= face < 6:
            raise ValueError(f"face id {face} out of range 0..5")
        return int(self.neighbors[face, element])


def build_cartesian_mesh(nx: int, ny: int, nz: int, bounds) -> CartesianMesh:
    """Uniform periodic partition of a box into nx*ny*nz hexahedra."""
    counts = (nx, ny, nz)
    for c in counts:
        if not isinstance(c, (int, np.integer)) or c < 1:
            raise ValueError(f"element counts must be positive integers, got {counts}")
    bounds = tuple((float(lo), float(hi)) for lo, hi in bounds)
    if len(bounds) != 3:
        raise ValueError("bounds must give one (lo, hi) interval per axis")
    for lo, hi in bounds:
        if not hi > lo:
            raise ValueError(f"degenerate interval ({lo}, {hi})")
    dx = (bounds[0][1] - bounds[0][0]) / nx
    dy = (bounds[1][1] - bounds[1][0]) / ny
    dz = (bounds[2][1] - bounds[2][0]) / nz
    jac = dx * dy * dz / 8.0
    metric = (dx / 2.0, dy / 2.0, dz / 2.0)

    ne = nx * ny * nz
    # lexicographic order: i fastest
    idx = np.arange(ne)
    ei = idx % nx
    ej = (idx // nx) % ny
    ek = idx // (nx * ny)

    def lex(i, j, k):
        return i + nx * (j + ny * k)

    neighbors = np.empty((6, ne), dtype=np.int64)
    neighbors[FACE_XM] = lex((ei - 1) % nx, ej, ek)
    neighbors[FACE_XP] = lex((ei + 1) % nx, ej, ek)
    neighbors[FACE_YM] = lex(ei, (ej - 1) % ny, ek)
    neighbors[FACE_YP] = lex(ei, (ej + 1) % ny, ek)
    neighbors[FACE_ZM] = lex(ei, ej, (ek - 1) % nz)
    neighbors[FACE_ZP] = lex(ei, ej, (ek + 1) % nz)

    origins = np.empty((ne, 3))
    origins[:, 0] = bounds[0][0] + ei * dx
    origins[:, 1] = bounds[1][0] + ej * dy
    origins[:, 2] = bounds[2][0] + ek * dz

    neighbors.setflags(write=False)
    origins.setflags(write=False)
    return CartesianMesh(
        int(nx), int(ny), int(nz), bounds, dx, dy, dz, jac, metric, neighbors, origins
    )


def node_coordinates(mesh: CartesianMesh, basis: PolyBasis):
    """Physical node coordinates, three arrays of shape (nelements, n, n, n)."""
    n = basis.nnodes
    ref = 0.5 * (basis.nodes + 1.0)
    ne = mesh.nelements
    x = np.empty((ne, n, n, n))
    y = np.empty((ne, n, n, n))
    z = np.empty((ne, n, n, n))
    x[:] = (mesh.origins[:, 0, None] + mesh.dx * ref[None, :])[:, :, None, None]
    y[:] = (mesh.origins[:, 1, None] + mesh.dy * ref[None, :])[:, None, :, None]
    z[:] = (mesh.origins[:, 2, None] + mesh.dz * ref[None, :])[:, None, None, :]
    return x, y, z
