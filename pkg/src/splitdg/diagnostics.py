"""Discrete integrals and derived run diagnostics.

All totals are Gauss-Lobatto quadrature sums J * sum w_i w_j w_k (...) over
every node of every element, accumulated in a fixed order so reruns are
bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import euler
from .euler import GasModel
from .solver import Field, _dop

ENSTROPHY_FLOOR = 1e-12  # below this the viscosity estimate is undefined


@dataclass
class DiagnosticsRecord:
    """Time-stamped totals written to the run time-series."""

    t: float
    mass: float
    mom_x: float
    mom_y: float
    mom_z: float
    energy: float
    kinetic_energy: float
    entropy_total: float
    enstrophy: float | None = None
    ke_dissipation_rate: float | None = None
    mu_num: float | None = None

    CSV_COLUMNS = (
        "t",
        "mass",
        "mom_x",
        "mom_y",
        "mom_z",
        "energy",
        "kinetic_energy",
        "entropy_total",
        "enstrophy",
        "ke_dissipation_rate",
        "mu_num",
    )

    def as_row(self):
        return [getattr(self, c) for c in self.CSV_COLUMNS]


def _weights3(field: Field) -> np.ndarray:
    w = field.basis.weights
    return w[:, None, None] * w[None, :, None] * w[None, None, :]


def total_quantities(field: Field, gas: GasModel, t: float = 0.0) -> DiagnosticsRecord:
    """Quadrature totals of the conserved densities, kinetic energy and entropy."""
    u = field.data
    prim = euler.primitive_from_conserved(u, gas)
    w3 = _weights3(field)[None]
    jac = field.mesh.jacobian

    def total(q):
        return jac * float(np.sum(w3[0] * q))

    kappa = euler.kinetic_energy_density(prim)
    s_density = euler.entropy_density(prim, gas)
    return DiagnosticsRecord(
        t=t,
        mass=total(u[0]),
        mom_x=total(u[1]),
        mom_y=total(u[2]),
        mom_z=total(u[3]),
        energy=total(u[4]),
        kinetic_energy=total(kappa),
        entropy_total=total(s_density),
    )


def enstrophy(field: Field) -> float:
    """Volume-normalized integral of rho |curl u|^2 / 2.

    Vorticity uses broken per-element collocation derivatives of the nodal
    velocities (interface jumps ignored).
    """
    u = field.data
    rho = u[0]
    vel = u[1:4] / rho
    mesh, basis = field.mesh, field.basis
    d = basis.deriv
    sx, sy, sz = (2.0 / mesh.dx, 2.0 / mesh.dy, 2.0 / mesh.dz)
    om_x = sy * _dop(vel[2], d, 1) - sz * _dop(vel[1], d, 2)
    om_y = sz * _dop(vel[0], d, 2) - sx * _dop(vel[2], d, 0)
    om_z = sx * _dop(vel[1], d, 0) - sy * _dop(vel[0], d, 1)
    dens = 0.5 * rho * (om_x**2 + om_y**2 + om_z**2)
    total = mesh.jacobian * float(np.sum(_weights3(field)[None] * dens[None]))
    return total / mesh.volume


def ke_dissipation_rate(field: Field, rate: np.ndarray) -> float:
    """-d(kappa)/dt from the instantaneous rate (positive = dissipation).

    Contracts the chain rule d(kappa)/dU = (-|vel|^2/2, u, v, w, 0) with the
    semidiscrete rate and quadrature-sums the result.
    """
    u = field.data
    vel = u[1:4] / u[0]
    node = (
        -0.5 * (vel[0] ** 2 + vel[1] ** 2 + vel[2] ** 2) * rate[0]
        + vel[0] * rate[1]
        + vel[1] * rate[2]
        + vel[2] * rate[3]
    )
    total = field.mesh.jacobian * float(np.sum(_weights3(field)[None] * node[None]))
    return -total


def numerical_viscosity(rate: float, sigma: float) -> float | None:
    """Viscosity estimate rate / (2 sigma); undefined at negligible enstrophy."""
    if sigma <= ENSTROPHY_FLOOR:
        return None
    return rate / (2.0 * sigma)


def discrete_l2_error(field: Field, exact_fn, t: float) -> np.ndarray:
    """Per-variable collocation L2 errors against exact_fn(x, y, z, t)."""
    from .mesh import node_coordinates

    x, y, z = node_coordinates(field.mesh, field.basis)
    diff = field.data - np.asarray(exact_fn(x, y, z, t), dtype=float)
    w3 = _weights3(field)[None]
    return np.sqrt(field.mesh.jacobian * np.sum(w3 * diff**2, axis=(1, 2, 3, 4)))
