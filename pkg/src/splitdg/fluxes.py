"""Two-point volume fluxes and matched interface stabilization terms.

Eight interchangeable symmetric, consistent two-point fluxes drive the
flux-differencing volume kernel and double as the symmetric part of the
surface flux:

* ``standard`` -- arithmetic mean of the physical fluxes (divergence form)
* ``mo``       -- Morinishi skew-symmetric momentum form, advective energy form
* ``du``       -- Ducros et al. quadratic splitting of every equation
* ``kg``       -- Kennedy & Gruber cubic splitting (kinetic energy preserving)
* ``pi``       -- Pirozzoli enthalpy variant of ``kg`` (kinetic energy preserving)
* ``ir``       -- Ismail & Roe entropy-conservative flux (parameter vector z)
* ``ch``       -- Chandrashekar entropy-conservative, kinetic-energy-preserving flux
* ``qu``       -- quadratic splitting of the flux written in Roe variables

Stabilizations: ``none``, ``llf`` (local Lax-Friedrichs jump term), ``ch``
(LLF in mass/momentum with Chandrashekar's energy component), ``ir``
(entropy-Jacobian weighted jump in entropy variables at the Ismail-Roe
averaged state). The surface flux is the symmetric part minus stabilization.

All fluxes are implemented once in an x-direction frame; the y/z variants
feed the frame with permuted velocities and permute the momentum components
of the result back (the Euler flux is equivariant under that relabeling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import euler
from .euler import GasModel, axis_index

SCHEMES = {"standard": 0, "mo": 1, "du": 2, "kg": 3, "pi": 4, "ir": 5, "ch": 6, "qu": 7}
STABILIZATIONS = {"none": 0, "llf": 1, "ch": 2, "ir": 3}

# default coupling of volume flux and interface dissipation
PAIRED_STABILIZATION = {
    "standard": "llf",
    "mo": "llf",
    "du": "llf",
    "kg": "llf",
    "pi": "llf",
    "qu": "llf",
    "ir": "ir",
    "ch": "ch",
}

# schemes with an explicit split form of the spatial operator (ir/ch have none)
SPLIT_FORM_SCHEMES = ("standard", "mo", "du", "kg", "pi", "qu")

# component index maps between the physical flux vector and the x-frame,
# per direction; the maps are their own inverses
_FRAME = ((0, 1, 2, 3, 4), (0, 2, 1, 3, 4), (0, 3, 2, 1, 4))

_LOG_MEAN_CUTOFF = euler.LOG_MEAN_SERIES_CUTOFF


def scheme_id(scheme) -> int:
    if isinstance(scheme, str):
        try:
            return SCHEMES[scheme.lower()]
        except KeyError:
            raise ValueError(f"unknown flux scheme {scheme!r}; known: {sorted(SCHEMES)}")
    if scheme in SCHEMES.values():
        return int(scheme)
    raise ValueError(f"unknown flux scheme {scheme!r}")


def stabilization_id(stab) -> int:
    if stab is None:
        return 0
    if isinstance(stab, str):
        try:
            return STABILIZATIONS[stab.lower()]
        except KeyError:
            raise ValueError(
                f"unknown stabilization {stab!r}; known: {sorted(STABILIZATIONS)}"
            )
    if stab in STABILIZATIONS.values():
        return int(stab)
    raise ValueError(f"unknown stabilization {stab!r}")


@njit(cache=True)
def _log_mean_s(a, b):
    if a > b:
        a, b = b, a
    u = (b - a) / a
    if u < _LOG_MEAN_CUTOFF:
        return a / (1.0 - 0.5 * u + u * u / 3.0 - 0.25 * u**3 + 0.2 * u**4)
    return (b - a) / math.log1p(u)


@njit(cache=True)
def _two_point_flux_x(scheme, rl, ul, vl, wl, pl, rr, ur, vr, wr, pr, g):
    """x-frame two-point volume flux of two primitive states."""
    if scheme == 0:  # standard: mean of physical fluxes
        rel = pl / (g - 1.0) + 0.5 * rl * (ul * ul + vl * vl + wl * wl)
        rer = pr / (g - 1.0) + 0.5 * rr * (ur * ur + vr * vr + wr * wr)
        f1 = 0.5 * (rl * ul + rr * ur)
        f2 = 0.5 * (rl * ul * ul + rr * ur * ur) + 0.5 * (pl + pr)
        f3 = 0.5 * (rl * ul * vl + rr * ur * vr)
        f4 = 0.5 * (rl * ul * wl + rr * ur * wr)
        f5 = 0.5 * ((rel + pl) * ul + (rer + pr) * ur)
        return f1, f2, f3, f4, f5
    if scheme == 1:  # mo
        ru = 0.5 * (rl * ul + rr * ur)
        um = 0.5 * (ul + ur)
        vm = 0.5 * (vl + vr)
        wm = 0.5 * (wl + wr)
        pm = 0.5 * (pl + pr)
        gt = g / (g - 1.0)
        f1 = ru
        f2 = ru * um + pm
        f3 = ru * vm
        f4 = ru * wm
        f5 = (
            0.5 * (gt * pl * ul + gt * pr * ur)
            + 0.5 * (rl * ul * ul + rr * ur * ur) * um
            + 0.5 * (rl * ul * vl + rr * ur * vr) * vm
            + 0.5 * (rl * ul * wl + rr * ur * wr) * wm
            - 0.25 * (rl * ul * ul * ul + rr * ur * ur * ur)
            - 0.25 * (rl * ul * vl * vl + rr * ur * vr * vr)
            - 0.25 * (rl * ul * wl * wl + rr * ur * wr * wr)
        )
        return f1, f2, f3, f4, f5
    if scheme == 2:  # du
        rel = pl / (g - 1.0) + 0.5 * rl * (ul * ul + vl * vl + wl * wl)
        rer = pr / (g - 1.0) + 0.5 * rr * (ur * ur + vr * vr + wr * wr)
        rm = 0.5 * (rl + rr)
        um = 0.5 * (ul + ur)
        pm = 0.5 * (pl + pr)
        f1 = rm * um
        f2 = 0.5 * (rl * ul + rr * ur) * um + pm
        f3 = 0.5 * (rl * vl + rr * vr) * um
        f4 = 0.5 * (rl * wl + rr * wr) * um
        f5 = (0.5 * (rel + rer) + pm) * um
        return f1, f2, f3, f4, f5
    if scheme == 3 or scheme == 4:  # kg / pi
        rm = 0.5 * (rl + rr)
        um = 0.5 * (ul + ur)
        vm = 0.5 * (vl + vr)
        wm = 0.5 * (wl + wr)
        pm = 0.5 * (pl + pr)
        f1 = rm * um
        f2 = rm * um * um + pm
        f3 = rm * um * vm
        f4 = rm * um * wm
        el = pl / ((g - 1.0) * rl) + 0.5 * (ul * ul + vl * vl + wl * wl)
        er = pr / ((g - 1.0) * rr) + 0.5 * (ur * ur + vr * vr + wr * wr)
        if scheme == 3:
            f5 = rm * um * 0.5 * (el + er) + pm * um
        else:
            hl = el + pl / rl
            hr = er + pr / rr
            f5 = rm * um * 0.5 * (hl + hr)
        return f1, f2, f3, f4, f5
    if scheme == 5:  # ir
        z1l = math.sqrt(rl / pl)
        z1r = math.sqrt(rr / pr)
        z5l = math.sqrt(rl * pl)
        z5r = math.sqrt(rr * pr)
        z1m = 0.5 * (z1l + z1r)
        z2m = 0.5 * (z1l * ul + z1r * ur)
        z3m = 0.5 * (z1l * vl + z1r * vr)
        z4m = 0.5 * (z1l * wl + z1r * wr)
        z5m = 0.5 * (z5l + z5r)
        z1ln = _log_mean_s(z1l, z1r)
        z5ln = _log_mean_s(z5l, z5r)
        rh = z1m * z5ln
        uh = z2m / z1m
        vh = z3m / z1m
        wh = z4m / z1m
        p1 = z5m / z1m
        p2 = 0.5 * (g + 1.0) / g * z5ln / z1ln + 0.5 * (g - 1.0) / g * p1
        hh = g * p2 / (rh * (g - 1.0)) + 0.5 * (uh * uh + vh * vh + wh * wh)
        f1 = rh * uh
        f2 = rh * uh * uh + p1
        f3 = rh * uh * vh
        f4 = rh * uh * wh
        f5 = rh * uh * hh
        return f1, f2, f3, f4, f5
    if scheme == 6:  # ch
        bl = rl / (2.0 * pl)
        br = rr / (2.0 * pr)
        rln = _log_mean_s(rl, rr)
        bln = _log_mean_s(bl, br)
        rm = 0.5 * (rl + rr)
        um = 0.5 * (ul + ur)
        vm = 0.5 * (vl + vr)
        wm = 0.5 * (wl + wr)
        ph = rm / (bl + br)
        u2m = 0.5 * (ul * ul + ur * ur)
        v2m = 0.5 * (vl * vl + vr * vr)
        w2m = 0.5 * (wl * wl + wr * wr)
        hh = (
            0.5 / (bln * (g - 1.0))
            - 0.5 * (u2m + v2m + w2m)
            + ph / rln
            + um * um
            + vm * vm
            + wm * wm
        )
        f1 = rln * um
        f2 = rln * um * um + ph
        f3 = rln * um * vm
        f4 = rln * um * wm
        f5 = rln * um * hh
        return f1, f2, f3, f4, f5
    if scheme == 7:  # qu
        sl = math.sqrt(rl)
        sr = math.sqrt(rr)
        el = pl / ((g - 1.0) * rl) + 0.5 * (ul * ul + vl * vl + wl * wl)
        er = pr / ((g - 1.0) * rr) + 0.5 * (ur * ur + vr * vr + wr * wr)
        hl = el + pl / rl
        hr = er + pr / rr
        q1 = 0.5 * (sl + sr)
        q2 = 0.5 * (sl * ul + sr * ur)
        q3 = 0.5 * (sl * vl + sr * vr)
        q4 = 0.5 * (sl * wl + sr * wr)
        q5 = 0.5 * (sl * hl + sr * hr)
        f1 = q1 * q2
        f2 = q2 * q2 + (g - 1.0) / g * (q1 * q5 - 0.5 * (q2 * q2 + q3 * q3 + q4 * q4))
        f3 = q2 * q3
        f4 = q2 * q4
        f5 = q2 * q5
        return f1, f2, f3, f4, f5
    raise ValueError("unknown scheme id")


@njit(cache=True)
def _stab_x(stab, rl, ul, vl, wl, pl, rr, ur, vr, wr, pr, g):
    """x-frame stabilization (the term subtracted from the symmetric flux)."""
    if stab == 0:
        return 0.0, 0.0, 0.0, 0.0, 0.0
    if stab == 3:
        # ir: 0.5 * lam * H @ (V_r - V_l); the entropy Jacobian H and lam are
        # assembled from the Ismail-Roe averaged primitives (rho, vel, p1),
        # with energy and enthalpy entries reconstructed consistently from
        # them so H stays symmetric positive definite for any state pair
        z1l = math.sqrt(rl / pl)
        z1r = math.sqrt(rr / pr)
        z5l = math.sqrt(rl * pl)
        z5r = math.sqrt(rr * pr)
        z1m = 0.5 * (z1l + z1r)
        z5m = 0.5 * (z5l + z5r)
        z5ln = _log_mean_s(z5l, z5r)
        rh = z1m * z5ln
        uh = 0.5 * (z1l * ul + z1r * ur) / z1m
        vh = 0.5 * (z1l * vl + z1r * vr) / z1m
        wh = 0.5 * (z1l * wl + z1r * wr) / z1m
        p1 = z5m / z1m
        reh = p1 / (g - 1.0) + 0.5 * rh * (uh * uh + vh * vh + wh * wh)
        hh = (reh + p1) / rh
        lam = abs(uh) + math.sqrt(g * p1 / rh)
        # entropy-variable jump
        sl_ = math.log(pl) - g * math.log(rl)
        sr_ = math.log(pr) - g * math.log(rr)
        dv1 = ((g - sr_) / (g - 1.0) - rr * (ur * ur + vr * vr + wr * wr) / (2.0 * pr)) - (
            (g - sl_) / (g - 1.0) - rl * (ul * ul + vl * vl + wl * wl) / (2.0 * pl)
        )
        dv2 = rr * ur / pr - rl * ul / pl
        dv3 = rr * vr / pr - rl * vl / pl
        dv4 = rr * wr / pr - rl * wl / pl
        dv5 = -(rr / pr) + rl / pl
        a2p = g * p1 / rh * p1 / (g - 1.0)
        d1 = rh * dv1 + rh * uh * dv2 + rh * vh * dv3 + rh * wh * dv4 + reh * dv5
        d2 = (
            rh * uh * dv1
            + (rh * uh * uh + p1) * dv2
            + rh * uh * vh * dv3
            + rh * uh * wh * dv4
            + rh * hh * uh * dv5
        )
        d3 = (
            rh * vh * dv1
            + rh * uh * vh * dv2
            + (rh * vh * vh + p1) * dv3
            + rh * vh * wh * dv4
            + rh * hh * vh * dv5
        )
        d4 = (
            rh * wh * dv1
            + rh * uh * wh * dv2
            + rh * vh * wh * dv3
            + (rh * wh * wh + p1) * dv4
            + rh * hh * wh * dv5
        )
        d5 = (
            reh * dv1
            + rh * hh * uh * dv2
            + rh * hh * vh * dv3
            + rh * hh * wh * dv4
            + (rh * hh * hh - a2p) * dv5
        )
        half_lam = 0.5 * lam
        return half_lam * d1, half_lam * d2, half_lam * d3, half_lam * d4, half_lam * d5
    lam = max(
        abs(ul) + math.sqrt(g * pl / rl), abs(ur) + math.sqrt(g * pr / rr)
    )
    d1 = 0.5 * lam * (rr - rl)
    d2 = 0.5 * lam * (rr * ur - rl * ul)
    d3 = 0.5 * lam * (rr * vr - rl * vl)
    d4 = 0.5 * lam * (rr * wr - rl * wl)
    if stab == 1:  # llf
        rel = pl / (g - 1.0) + 0.5 * rl * (ul * ul + vl * vl + wl * wl)
        rer = pr / (g - 1.0) + 0.5 * rr * (ur * ur + vr * vr + wr * wr)
        d5 = 0.5 * lam * (rer - rel)
        return d1, d2, d3, d4, d5
    # ch: llf in the first four components, entropy-consistent energy jump
    bl = rl / (2.0 * pl)
    br = rr / (2.0 * pr)
    bln = _log_mean_s(bl, br)
    rm = 0.5 * (rl + rr)
    um = 0.5 * (ul + ur)
    vm = 0.5 * (vl + vr)
    wm = 0.5 * (wl + wr)
    d5 = 0.5 * lam * (
        (0.5 / ((g - 1.0) * bln) + ul * ur + vl * vr + wl * wr) * (rr - rl)
        + rm * um * (ur - ul)
        + rm * vm * (vr - vl)
        + rm * wm * (wr - wl)
        + rm / (2.0 * (g - 1.0)) * (1.0 / br - 1.0 / bl)
    )
    return d1, d2, d3, d4, d5


@njit(cache=True)
def _volume_flux_batch(scheme, pml, pmr, g, out):
    for k in range(pml.shape[1]):
        f1, f2, f3, f4, f5 = _two_point_flux_x(
            scheme,
            pml[0, k], pml[1, k], pml[2, k], pml[3, k], pml[4, k],
            pmr[0, k], pmr[1, k], pmr[2, k], pmr[3, k], pmr[4, k],
            g,
        )
        out[0, k] = f1
        out[1, k] = f2
        out[2, k] = f3
        out[3, k] = f4
        out[4, k] = f5


@njit(cache=True)
def _stab_batch(stab, pml, pmr, g, out):
    for k in range(pml.shape[1]):
        d1, d2, d3, d4, d5 = _stab_x(
            stab,
            pml[0, k], pml[1, k], pml[2, k], pml[3, k], pml[4, k],
            pmr[0, k], pmr[1, k], pmr[2, k], pmr[3, k], pmr[4, k],
            g,
        )
        out[0, k] = d1
        out[1, k] = d2
        out[2, k] = d3
        out[3, k] = d4
        out[4, k] = d5


@njit(cache=True)
def _surface_flux_batch(scheme, stab, pml, pmr, g, out):
    for k in range(pml.shape[1]):
        f1, f2, f3, f4, f5 = _two_point_flux_x(
            scheme,
            pml[0, k], pml[1, k], pml[2, k], pml[3, k], pml[4, k],
            pmr[0, k], pmr[1, k], pmr[2, k], pmr[3, k], pmr[4, k],
            g,
        )
        d1, d2, d3, d4, d5 = _stab_x(
            stab,
            pml[0, k], pml[1, k], pml[2, k], pml[3, k], pml[4, k],
            pmr[0, k], pmr[1, k], pmr[2, k], pmr[3, k], pmr[4, k],
            g,
        )
        out[0, k] = f1 - d1
        out[1, k] = f2 - d2
        out[2, k] = f3 - d3
        out[3, k] = f4 - d4
        out[4, k] = f5 - d5


def _to_frame(u, direction, gas: GasModel):
    """Conserved array (5, ...) -> x-frame primitive array (5, K) + trailing shape."""
    u = np.asarray(u, dtype=float)
    if u.shape[0] != 5:
        raise ValueError("state arrays must have the component axis first (length 5)")
    prim = euler.primitive_from_conserved(u, gas)
    frame = prim[list(_FRAME[direction])]
    return np.ascontiguousarray(frame.reshape(5, -1)), u.shape[1:]


def _from_frame(flat, direction, trailing):
    out = flat[list(_FRAME[direction])]
    return out.reshape((5,) + trailing)


def volume_flux(scheme, ul, ur, direction, gas: GasModel) -> np.ndarray:
    """Two-point volume flux of the selected scheme in the given direction.

    ul, ur are conserved states of identical shape (5, ...); the result has
    the same shape. Symmetric in (ul, ur) and consistent with the physical
    flux at ul == ur.
    """
    s = scheme_id(scheme)
    d = axis_index(direction)
    fl, trailing = _to_frame(ul, d, gas)
    fr, trailing_r = _to_frame(ur, d, gas)
    if trailing != trailing_r:
        raise ValueError("ul and ur must have identical shapes")
    out = np.empty_like(fl)
    _volume_flux_batch(s, fl, fr, gas.gamma, out)
    return _from_frame(out, d, trailing)


def stabilization(stab, ul, ur, direction, gas: GasModel) -> np.ndarray:
    """Interface dissipation term subtracted from the symmetric surface flux."""
    sid = stabilization_id(stab)
    d = axis_index(direction)
    fl, trailing = _to_frame(ul, d, gas)
    fr, trailing_r = _to_frame(ur, d, gas)
    if trailing != trailing_r:
        raise ValueError("ul and ur must have identical shapes")
    out = np.empty_like(fl)
    _stab_batch(sid, fl, fr, gas.gamma, out)
    return _from_frame(out, d, trailing)


def surface_flux(scheme, stab, ul, ur, direction, gas: GasModel) -> np.ndarray:
    """Numerical surface flux: symmetric two-point part minus stabilization."""
    s = scheme_id(scheme)
    sid = stabilization_id(stab)
    d = axis_index(direction)
    fl, trailing = _to_frame(ul, d, gas)
    fr, trailing_r = _to_frame(ur, d, gas)
    if trailing != trailing_r:
        raise ValueError("ul and ur must have identical shapes")
    out = np.empty_like(fl)
    _surface_flux_batch(s, sid, fl, fr, gas.gamma, out)
    return _from_frame(out, d, trailing)


def sample_states(count: int, rng: np.random.Generator) -> np.ndarray:
    """Random valid conserved states: rho, p in [0.1, 10], velocities in [-2, 2]."""
    prim = np.empty((5, count))
    prim[0] = rng.uniform(0.1, 10.0, count)
    prim[1:4] = rng.uniform(-2.0, 2.0, (3, count))
    prim[4] = rng.uniform(0.1, 10.0, count)
    return euler.conserved_from_primitive(prim, GasModel())


@dataclass(frozen=True)
class KepStructureReport:
    """Outcome of the kinetic-energy-preservation structure check."""

    passes: bool
    max_defect: float


def check_kep_structure(
    scheme,
    sample_count: int,
    rng: np.random.Generator | None = None,
    gas: GasModel = GasModel(),
    tol: float = 1e-13,
) -> KepStructureReport:
    """Probe the momentum structure that yields kinetic energy preservation.

    Over random state pairs, the pressure-carrying momentum component must
    split as F_n = F_mass * <u_n> + ptilde with ptilde symmetric and
    consistent, and the transverse momentum components must equal
    F_mass * <u_t>. The maximum defect over all identities is reported;
    schemes below `tol` count as kinetic energy preserving.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    if rng is None:
        rng = np.random.default_rng(20160913)
    ul = sample_states(sample_count, rng)
    ur = sample_states(sample_count, rng)
    pl = euler.primitive_from_conserved(ul, gas)
    pr = euler.primitive_from_conserved(ur, gas)
    vel_mean = 0.5 * (pl[1:4] + pr[1:4])
    defect = 0.0
    for d in range(3):
        f = volume_flux(scheme, ul, ur, d, gas)
        f_swap = volume_flux(scheme, ur, ul, d, gas)
        for t in range(3):
            if t == d:
                continue
            defect = max(defect, float(np.max(np.abs(f[1 + t] - f[0] * vel_mean[t]))))
        ptilde = f[1 + d] - f[0] * vel_mean[d]
        ptilde_swap = f_swap[1 + d] - f_swap[0] * vel_mean[d]
        defect = max(defect, float(np.max(np.abs(ptilde - ptilde_swap))))
        f_self = volume_flux(scheme, ul, ul, d, gas)
        ptilde_self = f_self[1 + d] - f_self[0] * pl[1 + d]
        defect = max(defect, float(np.max(np.abs(ptilde_self - pl[4]))))
    return KepStructureReport(passes=defect < tol, max_defect=defect)
