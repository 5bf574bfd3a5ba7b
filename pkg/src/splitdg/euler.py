"""Perfect-gas Euler algebra: conversions, fluxes, wave speeds, entropy quantities.

States are numpy arrays with the component axis first and broadcast over any
trailing shape. Conserved U = (rho, rho*u, rho*v, rho*w, rho*e), primitive
P = (rho, u, v, w, p). The closure is p = (gamma - 1) * rho * theta with
specific inner energy theta, i.e. rho*e = p/(gamma-1) + rho*|vel|^2/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_AXIS_NAMES = {"x": 0, "y": 1, "z": 2, 0: 0, 1: 1, 2: 2}

# log-mean switches to a truncated series in u = hi/lo - 1 below this
LOG_MEAN_SERIES_CUTOFF = 1e-4


@dataclass(frozen=True)
class GasModel:
    """Perfect gas with adiabatic coefficient gamma."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")


class InvalidStateError(RuntimeError):
    """Raised when a state loses positivity of density or pressure.

    Carries enough context (element, node, time, offending values) for a
    robustness harness to log where and when a run blew up.
    """

    def __init__(self, message, element=None, node=None, time=None, values=None):
        super().__init__(message)
        self.element = element
        self.node = node
        self.time = time
        self.values = values


def axis_index(direction) -> int:
    try:
        return _AXIS_NAMES[direction]
    except KeyError:
        raise ValueError(f"unknown direction {direction!r}; use 0/1/2 or x/y/z")


def primitive_from_conserved(u: np.ndarray, gas: GasModel) -> np.ndarray:
    """(rho, u, v, w, p) from conserved variables.

    Raises InvalidStateError (with the offending values) on nonpositive
    density or pressure; NaNs fail the same positivity checks.
    """
    u = np.asarray(u, dtype=float)
    rho = u[0]
    if not np.all(rho > 0.0):
        raise InvalidStateError("nonpositive or non-finite density", values=rho)
    vel = u[1:4] / rho
    p = (gas.gamma - 1.0) * (u[4] - 0.5 * (u[1] * vel[0] + u[2] * vel[1] + u[3] * vel[2]))
    if not np.all(p > 0.0):
        raise InvalidStateError("nonpositive or non-finite pressure", values=p)
    return np.stack([rho, vel[0], vel[1], vel[2], p])


def conserved_from_primitive(p: np.ndarray, gas: GasModel) -> np.ndarray:
    """Inverse of primitive_from_conserved."""
    p = np.asarray(p, dtype=float)
    rho = p[0]
    rho_e = p[4] / (gas.gamma - 1.0) + 0.5 * rho * (p[1] ** 2 + p[2] ** 2 + p[3] ** 2)
    return np.stack([rho, rho * p[1], rho * p[2], rho * p[3], rho_e])


def specific_inner_energy(prim: np.ndarray, gas: GasModel) -> np.ndarray:
    """theta = p / ((gamma - 1) rho)."""
    return prim[4] / ((gas.gamma - 1.0) * prim[0])


def specific_total_energy(prim: np.ndarray, gas: GasModel) -> np.ndarray:
    return specific_inner_energy(prim, gas) + 0.5 * (
        prim[1] ** 2 + prim[2] ** 2 + prim[3] ** 2
    )


def enthalpy(prim: np.ndarray, gas: GasModel) -> np.ndarray:
    """Specific enthalpy h = e + p / rho."""
    return specific_total_energy(prim, gas) + prim[4] / prim[0]


def sound_speed(prim: np.ndarray, gas: GasModel) -> np.ndarray:
    return np.sqrt(gas.gamma * prim[4] / prim[0])


def inv_temperature(prim: np.ndarray) -> np.ndarray:
    """beta = rho / (2 p), the inverse-temperature proxy."""
    return prim[0] / (2.0 * prim[4])


def physical_flux(u: np.ndarray, direction, gas: GasModel) -> np.ndarray:
    """Euler flux F, G or H of a conserved state in the given direction."""
    d = axis_index(direction)
    prim = primitive_from_conserved(u, gas)
    u = np.asarray(u, dtype=float)
    un = prim[1 + d]
    flux = np.stack([u[0] * un, u[1] * un, u[2] * un, u[3] * un, (u[4] + prim[4]) * un])
    flux[1 + d] = flux[1 + d] + prim[4]
    return flux


def max_wave_speed(ul: np.ndarray, ur: np.ndarray, direction, gas: GasModel) -> np.ndarray:
    """max(|u_n| + a) over the two states, direction-aligned velocity u_n."""
    d = axis_index(direction)
    pl = primitive_from_conserved(ul, gas)
    pr = primitive_from_conserved(ur, gas)
    lam_l = np.abs(pl[1 + d]) + sound_speed(pl, gas)
    lam_r = np.abs(pr[1 + d]) + sound_speed(pr, gas)
    return np.maximum(lam_l, lam_r)


def thermodynamic_entropy(prim: np.ndarray, gas: GasModel) -> np.ndarray:
    """s = ln p - gamma ln rho."""
    return np.log(prim[4]) - gas.gamma * np.log(prim[0])


def entropy_variables(u: np.ndarray, gas: GasModel) -> np.ndarray:
    """V = [(gamma-s)/(gamma-1) - rho|vel|^2/(2p), rho u/p, rho v/p, rho w/p, -rho/p]."""
    g = gas.gamma
    prim = primitive_from_conserved(u, gas)
    rho, uu, vv, ww, p = prim
    s = thermodynamic_entropy(prim, gas)
    v1 = (g - s) / (g - 1.0) - rho * (uu * uu + vv * vv + ww * ww) / (2.0 * p)
    return np.stack([v1, rho * uu / p, rho * vv / p, rho * ww / p, -rho / p])


def entropy_jacobian_from_parts(rho, uu, vv, ww, p, rho_e, h, gamma) -> np.ndarray:
    """The symmetric matrix dU/dV assembled from explicitly supplied parts.

    Splitting out rho_e and h lets callers evaluate the matrix at averaged
    states whose energy and enthalpy entries are defined separately.
    """
    a2 = gamma * p / rho
    return np.array(
        [
            [rho, rho * uu, rho * vv, rho * ww, rho_e],
            [rho * uu, rho * uu * uu + p, rho * uu * vv, rho * uu * ww, rho * h * uu],
            [rho * vv, rho * uu * vv, rho * vv * vv + p, rho * vv * ww, rho * h * vv],
            [rho * ww, rho * uu * ww, rho * vv * ww, rho * ww * ww + p, rho * h * ww],
            [rho_e, rho * h * uu, rho * h * vv, rho * h * ww,
             rho * h * h - a2 * p / (gamma - 1.0)],
        ]
    )


def entropy_jacobian(u: np.ndarray, gas: GasModel) -> np.ndarray:
    """Entropy Jacobian dU/dV of a single conserved state; symmetric positive definite."""
    u = np.asarray(u, dtype=float)
    if u.shape != (5,):
        raise ValueError(f"expected a single conserved state of shape (5,), got {u.shape}")
    prim = primitive_from_conserved(u, gas)
    h = enthalpy(prim, gas)
    return entropy_jacobian_from_parts(
        prim[0], prim[1], prim[2], prim[3], prim[4], u[4], h, gas.gamma
    )


def log_mean(a_l, a_r):
    """Logarithmic mean (a_l - a_r) / (ln a_l - ln a_r) of positive inputs.

    Near-equal arguments use a truncated series in u = max/min - 1 to avoid
    the 0/0 cancellation; the direct branch is written with log1p on the same
    u so the two branches join smoothly. Ordering the arguments first makes
    the result exactly symmetric.
    """
    a_l = np.asarray(a_l, dtype=float)
    a_r = np.asarray(a_r, dtype=float)
    if not (np.all(a_l > 0.0) and np.all(a_r > 0.0)):
        raise ValueError("log_mean requires strictly positive inputs")
    lo = np.minimum(a_l, a_r)
    hi = np.maximum(a_l, a_r)
    u = (hi - lo) / lo
    series = lo / (1.0 - u / 2.0 + u * u / 3.0 - u**3 / 4.0 + u**4 / 5.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.where(u > 0.0, (hi - lo) / np.log1p(u), lo)
    out = np.where(u < LOG_MEAN_SERIES_CUTOFF, series, direct)
    if out.ndim == 0:
        return float(out)
    return out


def kinetic_energy_density(prim: np.ndarray) -> np.ndarray:
    """kappa = rho |vel|^2 / 2."""
    return 0.5 * prim[0] * (prim[1] ** 2 + prim[2] ** 2 + prim[3] ** 2)


def entropy_density(prim: np.ndarray, gas: GasModel) -> np.ndarray:
    """S = -rho s / (gamma - 1)."""
    return -prim[0] * thermodynamic_entropy(prim, gas) / (gas.gamma - 1.0)
