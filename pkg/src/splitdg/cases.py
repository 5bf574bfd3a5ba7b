"""Built-in problem definitions.

* manufactured -- smooth traveling wave with an analytic source term, used
  for convergence studies on the periodic box [-1, 1]^3.
* tgv / tgv-ma04 -- inviscid Taylor-Green vortex on [0, 2 pi]^3 at reference
  Mach numbers 0.1 and 0.4 (the Mach number enters through the constant part
  of the initial pressure, 1 / (gamma Ma^2)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import euler
from .euler import GasModel

CASE_NAMES = ("manufactured", "tgv", "tgv-ma04")


@dataclass(frozen=True)
class Case:
    name: str
    domain: tuple  # ((x0, x1), (y0, y1), (z0, z1))
    initial: object         # (x, y, z) -> conserved (5, ...)
    exact: object = None    # (x, y, z, t) -> conserved (5, ...)
    source: object = None   # (x, y, z, t) -> (5, ...)


def manufactured_state(x, y, z, t):
    """Traveling-wave conserved state: unit velocities, rho e = rho^2."""
    rho = 2.0 + 0.1 * np.sin(np.pi * (x + y + z - 2.0 * t))
    one = np.ones_like(rho)
    return np.stack([rho, rho * one, rho * one, rho * one, rho * rho])


def manufactured_source(x, y, z, t, gas: GasModel):
    """Source that makes manufactured_state solve the forced Euler system.

    The double-frequency contributions come from the p_x ~ rho rho_x term of
    the pressure gradient, which produces sin(2 phi) = 2 sin(phi) cos(phi).
    """
    g = gas.gamma
    phi = np.pi * (x + y + z - 2.0 * t)
    c1 = np.pi / 10.0
    c2 = -np.pi / 5.0 + np.pi * (1.0 + 5.0 * g) / 20.0
    c3 = np.pi * (g - 1.0) / 100.0
    c4 = (-16.0 * np.pi + np.pi * (9.0 + 15.0 * g)) / 20.0
    c5 = (3.0 * np.pi * g - 2.0 * np.pi) / 100.0
    cos1 = np.cos(phi)
    sin2 = np.sin(2.0 * phi)
    q_mom = c2 * cos1 + c3 * sin2
    return np.stack([c1 * cos1, q_mom, q_mom.copy(), q_mom.copy(), c4 * cos1 + c5 * sin2])


def taylor_green_state(x, y, z, gas: GasModel, pressure_const: float):
    """Taylor-Green vortex conserved state at t = 0."""
    u = np.sin(x) * np.cos(y) * np.cos(z)
    v = -np.cos(x) * np.sin(y) * np.cos(z)
    w = np.zeros_like(u)
    p = pressure_const + (
        np.cos(2.0 * x) * np.cos(2.0 * z)
        + 2.0 * np.cos(2.0 * y)
        + 2.0 * np.cos(2.0 * x)
        + np.cos(2.0 * y) * np.cos(2.0 * z)
    ) / 16.0
    rho = np.ones_like(u)
    return euler.conserved_from_primitive(np.stack([rho, u, v, w, p]), gas)


def get_case(name: str, gas: GasModel) -> Case:
    if name == "manufactured":
        return Case(
            name=name,
            domain=((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)),
            initial=lambda x, y, z: manufactured_state(x, y, z, 0.0),
            exact=manufactured_state,
            source=lambda x, y, z, t: manufactured_source(x, y, z, t, gas),
        )
    if name in ("tgv", "tgv-ma04"):
        mach = 0.4 if name == "tgv-ma04" else 0.1
        const = 1.0 / (gas.gamma * mach * mach)
        return Case(
            name=name,
            domain=((0.0, 2.0 * np.pi), (0.0, 2.0 * np.pi), (0.0, 2.0 * np.pi)),
            initial=lambda x, y, z: taylor_green_state(x, y, z, gas, const),
        )
    raise ValueError(f"unknown case {name!r}; known: {CASE_NAMES}")
