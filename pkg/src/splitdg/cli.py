"""Command-line driver: single runs, convergence sweeps, robustness sweeps.

Configuration is a flat key=value text file ('#' starts a comment). A run
writes one CSV row per output interval with the diagnostic totals; a crashed
run records the crash time in a final row and exits with status 3. Exit
codes: 0 success, 2 configuration error, 3 solver crash.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

from . import diagnostics, fluxes, timestepping
from .cases import CASE_NAMES, get_case
from .basis import build_basis
from .euler import GasModel, InvalidStateError
from .mesh import build_cartesian_mesh
from .solver import Field, SemidiscreteConfig, compute_residual, init_field


class ConfigError(Exception):
    """Bad or missing configuration input."""


@dataclass
class RunConfig:
    case: str = "tgv"
    degree: int = 3
    elements: tuple = (4, 4, 4)
    scheme: str = "kg"
    stab: str = ""            # empty -> stabilization paired with the scheme
    cfl: float = 0.5
    t_end: float = 1.0
    output_interval: float = 0.1
    gamma: float = 1.4
    seed: int = 0
    threads: int = 0
    out: str = "run.csv"
    grids: tuple = (2, 4, 8)          # converge: element counts per axis
    schemes: tuple = ("standard", "mo", "du", "kg", "pi", "ir", "ch")  # sweep
    degrees: tuple = (7,)             # sweep

    def resolved_stab(self, scheme: str) -> str:
        if self.stab:
            return self.stab
        return fluxes.PAIRED_STABILIZATION[scheme]


def _parse_int_tuple(text: str) -> tuple:
    return tuple(int(v) for v in text.replace(",", " ").split())


def _parse_str_tuple(text: str) -> tuple:
    return tuple(v.strip() for v in text.split(",") if v.strip())


_PARSERS = {
    "case": str,
    "degree": int,
    "elements": _parse_int_tuple,
    "scheme": str,
    "stab": str,
    "cfl": float,
    "t_end": float,
    "output_interval": float,
    "gamma": float,
    "seed": int,
    "threads": int,
    "out": str,
    "grids": _parse_int_tuple,
    "schemes": _parse_str_tuple,
    "degrees": _parse_int_tuple,
}


def parse_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}")
    values = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw.strip()!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _PARSERS[key](val)
        except ValueError as err:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {err}")
    cfg = RunConfig(**values)
    _validate_config(cfg)
    return cfg


def _validate_config(cfg: RunConfig):
    if cfg.case not in CASE_NAMES:
        raise ConfigError(f"unknown case {cfg.case!r}; known: {CASE_NAMES}")
    for s in (cfg.scheme, *cfg.schemes):
        if s not in fluxes.SCHEMES:
            raise ConfigError(f"unknown scheme {s!r}; known: {sorted(fluxes.SCHEMES)}")
    if cfg.stab and cfg.stab not in fluxes.STABILIZATIONS:
        raise ConfigError(
            f"unknown stabilization {cfg.stab!r}; known: {sorted(fluxes.STABILIZATIONS)}"
        )
    if len(cfg.elements) == 1:
        cfg.elements = cfg.elements * 3
    if len(cfg.elements) != 3 or any(e < 1 for e in cfg.elements):
        raise ConfigError(f"elements must be one or three positive counts, got {cfg.elements}")
    if not cfg.t_end > 0:
        raise ConfigError(f"t_end must be positive, got {cfg.t_end}")
    if not cfg.cfl > 0:
        raise ConfigError(f"cfl must be positive, got {cfg.cfl}")
    if not cfg.output_interval > 0:
        raise ConfigError(f"output_interval must be positive, got {cfg.output_interval}")
    if not 1 <= cfg.degree <= 20:
        raise ConfigError(f"degree must be in 1..20, got {cfg.degree}")
    if cfg.threads < 0:
        raise ConfigError(f"threads must be nonnegative, got {cfg.threads}")


def _apply_threads(cfg: RunConfig):
    if cfg.threads > 0:
        import numba

        numba.set_num_threads(cfg.threads)


def _setup(cfg: RunConfig, elements=None, scheme=None, stab=None, degree=None):
    gas = GasModel(cfg.gamma)
    case = get_case(cfg.case, gas)
    nel = elements if elements is not None else cfg.elements
    if isinstance(nel, int):
        nel = (nel, nel, nel)
    mesh = build_cartesian_mesh(*nel, case.domain)
    basis = build_basis(degree if degree is not None else cfg.degree)
    fld = init_field(mesh, basis, case.initial)
    scheme = scheme if scheme is not None else cfg.scheme
    sd_cfg = SemidiscreteConfig(
        scheme=scheme,
        stab=stab if stab is not None else cfg.resolved_stab(scheme),
        gas=gas,
        source=case.source,
    )
    return case, fld, sd_cfg


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def _record_row(fld: Field, sd_cfg: SemidiscreteConfig, t: float) -> list:
    rec = diagnostics.total_quantities(fld, sd_cfg.gas, t)
    rec.enstrophy = diagnostics.enstrophy(fld)
    rate = compute_residual(fld, sd_cfg, t)
    rec.ke_dissipation_rate = diagnostics.ke_dissipation_rate(fld, rate)
    rec.mu_num = diagnostics.numerical_viscosity(rec.ke_dissipation_rate, rec.enstrophy)
    return rec.as_row()


def run_simulation(cfg: RunConfig, out_path: str | None = None) -> int:
    """Integrate one configuration, streaming diagnostic rows to CSV.

    Returns the process exit status: 0 on completion, 3 on solver crash.
    """
    _apply_threads(cfg)
    case, fld, sd_cfg = _setup(cfg)
    path = out_path if out_path is not None else cfg.out
    t = 0.0
    next_out = cfg.output_interval
    eps = 1e-12 * max(1.0, cfg.t_end)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(diagnostics.DiagnosticsRecord.CSV_COLUMNS) + "\n")
        fh.write(",".join(_fmt(v) for v in _record_row(fld, sd_cfg, t)) + "\n")
        try:
            while t < cfg.t_end - eps:
                dt = min(
                    timestepping.compute_dt(fld, cfg.cfl, sd_cfg.gas), cfg.t_end - t
                )
                fld = timestepping.step_field(fld, sd_cfg, t, dt)
                t += dt
                if t >= next_out - eps or t >= cfg.t_end - eps:
                    fh.write(",".join(_fmt(v) for v in _record_row(fld, sd_cfg, t)) + "\n")
                    while next_out <= t + eps:
                        next_out += cfg.output_interval
        except InvalidStateError as err:
            fh.write(",".join([_fmt(err.time if err.time is not None else t)] + [""] * 10) + "\n")
            print(f"run crashed: {err}", file=sys.stderr)
            return 3
    return 0


def run_convergence(cfg: RunConfig, out_path: str | None = None) -> int:
    """Grid-refinement study against the case's exact solution."""
    _apply_threads(cfg)
    if len(cfg.grids) < 2:
        raise ConfigError("converge needs at least 2 grids")
    gas = GasModel(cfg.gamma)
    case = get_case(cfg.case, gas)
    if case.exact is None:
        raise ConfigError(f"case {cfg.case!r} has no exact solution to converge against")
    path = out_path if out_path is not None else cfg.out
    names = ("rho", "mom_x", "mom_y", "mom_z", "energy")
    rows = []
    prev = None
    for g in cfg.grids:
        _, fld, sd_cfg = _setup(cfg, elements=(g, g, g))
        fld, t = timestepping.advance(fld, sd_cfg, 0.0, cfg.t_end, cfg.cfl)
        errs = diagnostics.discrete_l2_error(fld, case.exact, t)
        orders = [None] * 5
        if prev is not None:
            pg, perr = prev
            h_ratio = math.log(g / pg)
            orders = [math.log(perr[c] / errs[c]) / h_ratio for c in range(5)]
        rows.append((g, errs, orders))
        prev = (g, errs)
    with open(path, "w", newline="") as fh:
        header = ["grid"] + [f"err_{n}" for n in names] + [f"order_{n}" for n in names]
        fh.write(",".join(header) + "\n")
        for g, errs, orders in rows:
            cells = [str(g)] + [_fmt(e) for e in errs] + [_fmt(o) for o in orders]
            fh.write(",".join(cells) + "\n")
    return 0


def classify_run(cfg: RunConfig, degree: int, grid: int, scheme: str):
    """Integrate one sweep cell; returns ('ok'|'crash', reached_time)."""
    _, fld, sd_cfg = _setup(cfg, elements=(grid, grid, grid), scheme=scheme, degree=degree)
    try:
        _, t = timestepping.advance(fld, sd_cfg, 0.0, cfg.t_end, cfg.cfl)
        return "ok", t
    except InvalidStateError as err:
        return "crash", err.time if err.time is not None else math.nan


def run_sweep(cfg: RunConfig, out_path: str | None = None) -> int:
    """Robustness matrix over degrees x grids x schemes; records completion."""
    _apply_threads(cfg)
    path = out_path if out_path is not None else cfg.out
    with open(path, "w", newline="") as fh:
        fh.write("degree,grid,scheme,stab,outcome,t_reached\n")
        for degree in cfg.degrees:
            for grid in cfg.grids:
                for scheme in cfg.schemes:
                    outcome, t = classify_run(cfg, degree, grid, scheme)
                    stab = cfg.resolved_stab(scheme)
                    fh.write(f"{degree},{grid},{scheme},{stab},{outcome},{_fmt(t)}\n")
                    fh.flush()
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="splitdg",
        description="Split-form DG solver for the compressible Euler equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "integrate a single configuration, writing a CSV time series"),
        ("converge", "grid refinement study with observed convergence orders"),
        ("sweep", "robustness matrix over degrees x grids x schemes"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="path to a key=value config file")
        p.add_argument("--out", default=None, help="override the output CSV path")
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 2 if err.code not in (0, None) else 0
    try:
        cfg = parse_config(args.config)
        if args.command == "run":
            return run_simulation(cfg, args.out)
        if args.command == "converge":
            return run_convergence(cfg, args.out)
        return run_sweep(cfg, args.out)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
