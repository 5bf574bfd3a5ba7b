"""Strong-form DGSEM residual assembly on periodic Cartesian meshes.

The volume terms use two-point flux differencing, 2 sum_m D[i,m] F#(U_i, U_m)
per direction, scaled by the Cartesian metric (2/dx etc.). Surface coupling
applies [F* - F] at the two face nodes of each direction with the inverse
mass-matrix weights 1/w_0 and 1/w_N. A matrix split-form evaluation of the
same volume operator serves as an independent cross-check for the schemes
that possess an explicit split form.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from numba import njit, prange

from . import euler, fluxes
from .basis import PolyBasis
from .euler import GasModel, InvalidStateError
from .fluxes import _surface_flux_batch, _two_point_flux_x
from .mesh import (
    FACE_XM,
    FACE_YM,
    FACE_ZM,
    CartesianMesh,
    node_coordinates,
)


@dataclass
class Field:
    """Nodal coefficients of the five conserved variables.

    data has shape (5, nelements, n, n, n) with n = degree + 1 and node
    ordering (i, j, k) along (x, y, z).
    """

    data: np.ndarray
    mesh: CartesianMesh
    basis: PolyBasis

    def __post_init__(self):
        n = self.basis.nnodes
        expected = (5, self.mesh.nelements, n, n, n)
        if self.data.shape != expected:
            raise ValueError(f"field data must have shape {expected}, got {self.data.shape}")

    def copy(self) -> "Field":
        return replace(self, data=self.data.copy())


@dataclass
class SemidiscreteConfig:
    """Scheme selection and gas model for the semidiscrete operator."""

    scheme: str = "kg"
    stab: str = "llf"
    gas: GasModel = GasModel()
    source: object = None  # callable (x, y, z, t) -> (5, ...) or None


def init_field(mesh: CartesianMesh, basis: PolyBasis, state_fn) -> Field:
    """Field from a pointwise conserved-state function (x, y, z) -> (5, ...)."""
    x, y, z = node_coordinates(mesh, basis)
    data = np.ascontiguousarray(np.asarray(state_fn(x, y, z), dtype=float))
    return Field(data, mesh, basis)


def _locate_invalid(u: np.ndarray, gas: GasModel):
    """First (element, node) with nonpositive density or pressure, or None."""
    rho = u[0]
    bad = ~(rho > 0.0)
    if not bad.any():
        with np.errstate(invalid="ignore", divide="ignore"):
            p = (gas.gamma - 1.0) * (
                u[4] - 0.5 * (u[1] ** 2 + u[2] ** 2 + u[3] ** 2) / rho
            )
        bad = ~(p > 0.0)
    hits = np.argwhere(bad)
    if hits.size == 0:
        return None
    e, i, j, k = hits[0]
    return int(e), (int(i), int(j), int(k))


def _primitives(field: Field, gas: GasModel, t: float) -> np.ndarray:
    try:
        return euler.primitive_from_conserved(field.data, gas)
    except InvalidStateError as err:
        where = _locate_invalid(field.data, gas)
        if where is None:
            raise
        element, node = where
        raise InvalidStateError(
            f"{err} at element {element}, node {node}, t={t}",
            element=element,
            node=node,
            time=t,
            values=field.data[(slice(None), element) + node].copy(),
        ) from None


@njit(parallel=True, cache=True)
def _volume_kernel(prim, g, scheme, dmat, sx, sy, sz, out):
    """Flux-differencing volume divergence, all three directions.

    Writes the metric-scaled divergence-side operator into `out`; each
    symmetric node pair is evaluated once and scattered to both rows.
    """
    ne = prim.shape[1]
    n = prim.shape[2]
    for e in prange(ne):
        for j in range(n):
            for k in range(n):
                # x direction: frame (rho, u, v, w, p)
                for i in range(n):
                    rl = prim[0, e, i, j, k]
                    ul = prim[1, e, i, j, k]
                    vl = prim[2, e, i, j, k]
                    wl = prim[3, e, i, j, k]
                    pl = prim[4, e, i, j, k]
                    for m in range(i, n):
                        f1, f2, f3, f4, f5 = _two_point_flux_x(
                            scheme, rl, ul, vl, wl, pl,
                            prim[0, e, m, j, k], prim[1, e, m, j, k],
                            prim[2, e, m, j, k], prim[3, e, m, j, k],
                            prim[4, e, m, j, k], g,
                        )
                        ci = 2.0 * sx * dmat[i, m]
                        out[0, e, i, j, k] += ci * f1
                        out[1, e, i, j, k] += ci * f2
                        out[2, e, i, j, k] += ci * f3
                        out[3, e, i, j, k] += ci * f4
                        out[4, e, i, j, k] += ci * f5
                        if m > i:
                            cm = 2.0 * sx * dmat[m, i]
                            out[0, e, m, j, k] += cm * f1
                            out[1, e, m, j, k] += cm * f2
                            out[2, e, m, j, k] += cm * f3
                            out[3, e, m, j, k] += cm * f4
                            out[4, e, m, j, k] += cm * f5
        for i in range(n):
            for k in range(n):
                # y direction: frame (rho, v, u, w, p), momentum comps swap back
                for j in range(n):
                    rl = prim[0, e, i, j, k]
                    ul = prim[2, e, i, j, k]
                    vl = prim[1, e, i, j, k]
                    wl = prim[3, e, i, j, k]
                    pl = prim[4, e, i, j, k]
                    for m in range(j, n):
                        f1, f2, f3, f4, f5 = _two_point_flux_x(
                            scheme, rl, ul, vl, wl, pl,
                            prim[0, e, i, m, k], prim[2, e, i, m, k],
                            prim[1, e, i, m, k], prim[3, e, i, m, k],
                            prim[4, e, i, m, k], g,
                        )
                        ci = 2.0 * sy * dmat[j, m]
                        out[0, e, i, j, k] += ci * f1
                        out[2, e, i, j, k] += ci * f2
                        out[1, e, i, j, k] += ci * f3
                        out[3, e, i, j, k] += ci * f4
                        out[4, e, i, j, k] += ci * f5
                        if m > j:
                            cm = 2.0 * sy * dmat[m, j]
                            out[0, e, i, m, k] += cm * f1
                            out[2, e, i, m, k] += cm * f2
                            out[1, e, i, m, k] += cm * f3
                            out[3, e, i, m, k] += cm * f4
                            out[4, e, i, m, k] += cm * f5
        for i in range(n):
            for j in range(n):
                # z direction: frame (rho, w, v, u, p)
                for k in range(n):
                    rl = prim[0, e, i, j, k]
                    ul = prim[3, e, i, j, k]
                    vl = prim[2, e, i, j, k]
                    wl = prim[1, e, i, j, k]
                    pl = prim[4, e, i, j, k]
                    for m in range(k, n):
                        f1, f2, f3, f4, f5 = _two_point_flux_x(
                            scheme, rl, ul, vl, wl, pl,
                            prim[0, e, i, j, m], prim[3, e, i, j, m],
                            prim[2, e, i, j, m], prim[1, e, i, j, m],
                            prim[4, e, i, j, m], g,
                        )
                        ci = 2.0 * sz * dmat[k, m]
                        out[0, e, i, j, k] += ci * f1
                        out[3, e, i, j, k] += ci * f2
                        out[2, e, i, j, k] += ci * f3
                        out[1, e, i, j, k] += ci * f4
                        out[4, e, i, j, k] += ci * f5
                        if m > k:
                            cm = 2.0 * sz * dmat[m, k]
                            out[0, e, i, j, m] += cm * f1
                            out[3, e, i, j, m] += cm * f2
                            out[2, e, i, j, m] += cm * f3
                            out[1, e, i, j, m] += cm * f4
                            out[4, e, i, j, m] += cm * f5


def _phys_flux_from_prim(pface: np.ndarray, d: int, g: float) -> np.ndarray:
    """Physical flux at face nodes from a primitive slice (5, ...)."""
    rho, uu, vv, ww, p = pface
    un = pface[1 + d]
    rho_e = p / (g - 1.0) + 0.5 * rho * (uu * uu + vv * vv + ww * ww)
    flux = np.stack([rho * un, rho * uu * un, rho * vv * un, rho * ww * un, (rho_e + p) * un])
    flux[1 + d] += p
    return flux


_FACE_SLICES = (
    # (minus-side node slice at the high face, plus-side node slice at the low face)
    (np.s_[:, :, -1, :, :], np.s_[:, :, 0, :, :]),
    (np.s_[:, :, :, -1, :], np.s_[:, :, :, 0, :]),
    (np.s_[:, :, :, :, -1], np.s_[:, :, :, :, 0]),
)


def _surface_terms(rate, prim, cfg_scheme, cfg_stab, mesh, basis, g):
    """Accumulate the M^-1 B [F* - F] face coupling into `rate` (divergence side)."""
    n = basis.nnodes
    ne = mesh.nelements
    w0 = basis.weights[0]
    wn = basis.weights[-1]
    scales = (2.0 / mesh.dx, 2.0 / mesh.dy, 2.0 / mesh.dz)
    minus_faces = (FACE_XM, FACE_YM, FACE_ZM)
    frame = fluxes._FRAME
    for d in range(3):
        hi_sl, lo_sl = _FACE_SLICES[d]
        pm = prim[hi_sl]                                  # own high-face nodes
        pp = prim[:, mesh.neighbors[minus_faces[d] + 1]][lo_sl]  # +d neighbor low-face
        perm = list(frame[d])
        fl = np.ascontiguousarray(pm[perm].reshape(5, -1))
        fr = np.ascontiguousarray(pp[perm].reshape(5, -1))
        fstar = np.empty_like(fl)
        _surface_flux_batch(cfg_scheme, cfg_stab, fl, fr, g, fstar)
        fstar = fstar[perm].reshape((5, ne, n, n))
        # the flux on an element's low face is its -d neighbor's high-face flux
        fstar_lo = fstar[:, mesh.neighbors[minus_faces[d]]]
        s = scales[d]
        rate[hi_sl] += (s / wn) * (fstar - _phys_flux_from_prim(pm, d, g))
        rate[lo_sl] -= (s / w0) * (fstar_lo - _phys_flux_from_prim(prim[lo_sl], d, g))


def compute_residual(field: Field, cfg: SemidiscreteConfig, t: float) -> np.ndarray:
    """Semidiscrete rate dU/dt of the field at time t.

    Raises InvalidStateError with element/node/time context when any nodal
    state has lost positivity; robustness drivers treat that as the crash
    signal.
    """
    gas = cfg.gas
    prim = _primitives(field, gas, t)
    scheme = fluxes.scheme_id(cfg.scheme)
    stab = fluxes.stabilization_id(cfg.stab)
    mesh, basis = field.mesh, field.basis
    sx, sy, sz = (2.0 / mesh.dx, 2.0 / mesh.dy, 2.0 / mesh.dz)

    op = np.zeros_like(field.data)
    _volume_kernel(prim, gas.gamma, scheme, basis.deriv, sx, sy, sz, op)
    _surface_terms(op, prim, scheme, stab, mesh, basis, gas.gamma)
    rate = -op
    if cfg.source is not None:
        x, y, z = node_coordinates(mesh, basis)
        rate += np.asarray(cfg.source(x, y, z, t))
    return rate


def _dop(q: np.ndarray, dmat: np.ndarray, d: int) -> np.ndarray:
    """Collocation derivative along direction d of a nodal array (ne, n, n, n)."""
    if d == 0:
        return np.einsum("im,emjk->eijk", dmat, q)
    if d == 1:
        return np.einsum("jm,eimk->eijk", dmat, q)
    return np.einsum("km,eijm->eijk", dmat, q)


def split_form_reference_residual(field: Field, cfg: SemidiscreteConfig, t: float) -> np.ndarray:
    """Rate with the volume terms evaluated as explicit matrix split forms.

    Independent oracle for the flux-differencing kernel; surface treatment is
    identical to compute_residual. Only schemes with an explicit split form
    are supported (ir/ch have none).
    """
    name = cfg.scheme if isinstance(cfg.scheme, str) else None
    if name not in fluxes.SPLIT_FORM_SCHEMES:
        raise ValueError(
            f"no explicit split form for scheme {cfg.scheme!r}; "
            f"supported: {fluxes.SPLIT_FORM_SCHEMES}"
        )
    gas = cfg.gas
    g = gas.gamma
    prim = _primitives(field, gas, t)
    mesh, basis = field.mesh, field.basis
    dmat = basis.deriv
    scales = (2.0 / mesh.dx, 2.0 / mesh.dy, 2.0 / mesh.dz)

    rho = prim[0]
    p = prim[4]
    op = np.zeros_like(field.data)

    def d2(a, b, d):
        # quadratic split of (a b)_x
        return 0.5 * (_dop(a * b, dmat, d) + a * _dop(b, dmat, d) + b * _dop(a, dmat, d))

    def d3(a, b, c, d):
        # cubic split of (a b c)_x
        return 0.25 * (
            _dop(a * b * c, dmat, d)
            + a * _dop(b * c, dmat, d)
            + b * _dop(a * c, dmat, d)
            + c * _dop(a * b, dmat, d)
            + b * c * _dop(a, dmat, d)
            + a * c * _dop(b, dmat, d)
            + a * b * _dop(c, dmat, d)
        )

    for d in range(3):
        un = prim[1 + d]
        t1, t2 = [a for a in range(3) if a != d]
        vt1 = prim[1 + t1]
        vt2 = prim[1 + t2]
        s = scales[d]
        if name == "standard":
            rho_e = p / (g - 1.0) + 0.5 * rho * (prim[1] ** 2 + prim[2] ** 2 + prim[3] ** 2)
            l1 = _dop(rho * un, dmat, d)
            l2 = _dop(rho * un * un + p, dmat, d)
            l3 = _dop(rho * un * vt1, dmat, d)
            l4 = _dop(rho * un * vt2, dmat, d)
            l5 = _dop((rho_e + p) * un, dmat, d)
        elif name == "mo":
            ru = rho * un
            l1 = _dop(ru, dmat, d)
            l2 = 0.5 * (_dop(ru * un, dmat, d) + ru * _dop(un, dmat, d) + un * _dop(ru, dmat, d)) + _dop(p, dmat, d)
            l3 = 0.5 * (_dop(ru * vt1, dmat, d) + ru * _dop(vt1, dmat, d) + vt1 * _dop(ru, dmat, d))
            l4 = 0.5 * (_dop(ru * vt2, dmat, d) + ru * _dop(vt2, dmat, d) + vt2 * _dop(ru, dmat, d))
            l5 = _dop(g / (g - 1.0) * p * un, dmat, d) + 0.5 * (
                ru * un * _dop(un, dmat, d)
                + un * _dop(ru * un, dmat, d)
                + ru * vt1 * _dop(vt1, dmat, d)
                + vt1 * _dop(ru * vt1, dmat, d)
                + ru * vt2 * _dop(vt2, dmat, d)
                + vt2 * _dop(ru * vt2, dmat, d)
            )
        elif name == "du":
            rho_e = p / (g - 1.0) + 0.5 * rho * (prim[1] ** 2 + prim[2] ** 2 + prim[3] ** 2)
            l1 = d2(rho, un, d)
            l2 = d2(rho * un, un, d) + _dop(p, dmat, d)
            l3 = d2(rho * vt1, un, d)
            l4 = d2(rho * vt2, un, d)
            l5 = d2(rho_e + p, un, d)
        elif name in ("kg", "pi"):
            l1 = d2(rho, un, d)
            l2 = d3(rho, un, un, d) + _dop(p, dmat, d)
            l3 = d3(rho, un, vt1, d)
            l4 = d3(rho, un, vt2, d)
            e = p / ((g - 1.0) * rho) + 0.5 * (prim[1] ** 2 + prim[2] ** 2 + prim[3] ** 2)
            if name == "kg":
                l5 = d2(p, un, d) + d3(rho, e, un, d)
            else:
                l5 = d3(rho, e + p / rho, un, d)
        else:  # qu
            sq = np.sqrt(rho)
            e = p / ((g - 1.0) * rho) + 0.5 * (prim[1] ** 2 + prim[2] ** 2 + prim[3] ** 2)
            q1 = sq
            qn = sq * un
            qt1 = sq * vt1
            qt2 = sq * vt2
            q5 = sq * (e + p / rho)
            l1 = d2(q1, qn, d)
            l2 = d2(qn, qn, d) + (g - 1.0) / g * (
                d2(q1, q5, d) - 0.5 * (d2(qn, qn, d) + d2(qt1, qt1, d) + d2(qt2, qt2, d))
            )
            l3 = d2(qn, qt1, d)
            l4 = d2(qn, qt2, d)
            l5 = d2(qn, q5, d)
        op[0] += s * l1
        op[1 + d] += s * l2
        op[1 + t1] += s * l3
        op[1 + t2] += s * l4
        op[4] += s * l5

    scheme = fluxes.scheme_id(cfg.scheme)
    stab = fluxes.stabilization_id(cfg.stab)
    _surface_terms(op, prim, scheme, stab, mesh, basis, g)
    rate = -op
    if cfg.source is not None:
        x, y, z = node_coordinates(mesh, basis)
        rate += np.asarray(cfg.source(x, y, z, t))
    return rate


@dataclass(frozen=True)
class KeBalance:
    """Global kinetic energy budget of the semidiscrete operator.

    advective_rate and pressure_work_rate are the divergence-side sums
    (volume flux-difference terms plus their interface counterparts), so for
    fluxes with the kinetic-energy-preserving momentum structure
    total_ke_rate = -(advective_rate + pressure_work_rate) to round-off, and
    advective_rate telescopes to zero over a periodic mesh.
    """

    advective_rate: float
    pressure_work_rate: float
    total_ke_rate: float


def _pair_arrays(prim: np.ndarray, d: int):
    """Broadcast (left, right) primitive arrays over all node pairs along d.

    Returns arrays of shape (5, ne, n, n, n, n) with the pair axes (row, m)
    in positions (1+d...) matching einsum contraction below.
    """
    if d == 0:
        pl = prim[:, :, :, None, :, :]
        pr = prim[:, :, None, :, :, :]
    elif d == 1:
        pl = prim[:, :, :, :, None, :]
        pr = prim[:, :, :, None, :, :]
    else:
        pl = prim[:, :, :, :, :, None]
        pr = prim[:, :, :, :, None, :]
    shape = np.broadcast_shapes(pl.shape, pr.shape)
    return np.broadcast_to(pl, shape), np.broadcast_to(pr, shape)


_PAIR_CONTRACT = ("im,eimjk->eijk", "jm,eijmk->eijk", "km,eijkm->eijk")


def ke_balance_decomposition(field: Field, cfg: SemidiscreteConfig, t: float) -> KeBalance:
    """Split the global kinetic energy rate into advective and pressure parts.

    The identity total = -(advective + pressure_work) is exact (round-off)
    when both the volume and surface fluxes carry the kinetic-energy
    preserving momentum structure, i.e. for kg/pi/ch/mo with stab='none';
    for other configurations the defect is whatever the scheme produces.
    """
    gas = cfg.gas
    g = gas.gamma
    prim = _primitives(field, gas, t)
    mesh, basis = field.mesh, field.basis
    n = basis.nnodes
    dmat = basis.deriv
    w = basis.weights
    w3 = w[:, None, None] * w[None, :, None] * w[None, None, :]
    jac = mesh.jacobian
    scales = (2.0 / mesh.dx, 2.0 / mesh.dy, 2.0 / mesh.dz)
    vel = prim[1:4]

    rate = compute_residual(field, cfg, t)
    ke_rate_node = (
        -0.5 * (vel[0] ** 2 + vel[1] ** 2 + vel[2] ** 2) * rate[0]
        + vel[0] * rate[1]
        + vel[1] * rate[2]
        + vel[2] * rate[3]
    )
    total = jac * float(np.sum(w3[None] * ke_rate_node))

    adv = 0.0
    press = 0.0
    minus_faces = (FACE_XM, FACE_YM, FACE_ZM)
    for d in range(3):
        pl, pr = _pair_arrays(prim, d)
        ul = euler.conserved_from_primitive(pl, gas)
        ur = euler.conserved_from_primitive(pr, gas)
        f = fluxes.volume_flux(cfg.scheme, ul, ur, d, gas)
        udot = pl[1] * pr[1] + pl[2] * pr[2] + pl[3] * pr[3]
        fk = 0.5 * f[0] * udot
        ptilde = f[1 + d] - f[0] * 0.5 * (pl[1 + d] + pr[1 + d])
        adv_node = 2.0 * scales[d] * np.einsum(_PAIR_CONTRACT[d], dmat, fk)
        press_node = prim[1 + d] * 2.0 * scales[d] * np.einsum(_PAIR_CONTRACT[d], dmat, ptilde)
        adv += jac * float(np.sum(w3[None] * adv_node))
        press += jac * float(np.sum(w3[None] * press_node))

        # interface parts: the 1/w face weight cancels against the node weight
        hi_sl, lo_sl = _FACE_SLICES[d]
        pm = prim[hi_sl]
        pp = prim[:, mesh.neighbors[minus_faces[d] + 1]][lo_sl]
        um = euler.conserved_from_primitive(pm, gas)
        up = euler.conserved_from_primitive(pp, gas)
        fstar = fluxes.surface_flux(cfg.scheme, cfg.stab, um, up, d, gas)
        fstar_lo = fstar[:, mesh.neighbors[minus_faces[d]]]
        plo = prim[lo_sl]

        fk_hi = 0.5 * fstar[0] * (pm[1] * pp[1] + pm[2] * pp[2] + pm[3] * pp[3])
        fk_hi_own = 0.5 * _phys_flux_from_prim(pm, d, g)[0] * (
            pm[1] ** 2 + pm[2] ** 2 + pm[3] ** 2
        )
        pt_hi = fstar[1 + d] - fstar[0] * 0.5 * (pm[1 + d] + pp[1 + d])

        pm_lo_nbr = pm[:, mesh.neighbors[minus_faces[d]]]  # left neighbor high-face state
        fk_lo = 0.5 * fstar_lo[0] * (
            pm_lo_nbr[1] * plo[1] + pm_lo_nbr[2] * plo[2] + pm_lo_nbr[3] * plo[3]
        )
        fk_lo_own = 0.5 * _phys_flux_from_prim(plo, d, g)[0] * (
            plo[1] ** 2 + plo[2] ** 2 + plo[3] ** 2
        )
        pt_lo = fstar_lo[1 + d] - fstar_lo[0] * 0.5 * (pm_lo_nbr[1 + d] + plo[1 + d])

        wf = w[:, None] * w[None, :]  # quadrature weights of the two in-face axes
        adv += jac * scales[d] * float(
            np.sum(wf * ((fk_hi - fk_hi_own) - (fk_lo - fk_lo_own)))
        )
        press += jac * scales[d] * float(
            np.sum(wf * (pm[1 + d] * (pt_hi - pm[4]) - plo[1 + d] * (pt_lo - plo[4])))
        )
    return KeBalance(advective_rate=adv, pressure_work_rate=press, total_ke_rate=total)
