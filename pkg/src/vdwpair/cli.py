"""Command-line interface: parameter sweeps, figure-data reproduction and the
verification suite.  Output is data-only (CSV or JSON); plotting is left to
external tools, e.g.

    vdwpair figure --out fig5.csv
    python -c "import pandas as pd, matplotlib.pyplot as plt; \
d = pd.read_csv('fig5.csv'); d.plot(x='k0R'); plt.show()"
"""
from __future__ import annotations

import json
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import click
import numpy as np

from . import dissimilar as diss
from . import identical as idem
from .params import (AtomPairConfig, AtomSpec, EvalPoint, ValidityWarning,
                     check_validity, load_config)
from .quadrature import QuadratureError, QuadratureSettings
from .verification import format_table, report_to_json, run_all

EXIT_BAD_CONFIG = 2
EXIT_NUMERICAL = 3


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable over a linear or log range; remaining parameters fixed."""

    variable: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.variable not in ("kR", "gammaT", "delta_ratio"):
            raise ValueError("sweep variable must be one of kR, gammaT, delta_ratio")
        if self.count < 2:
            raise ValueError("sweep count must be at least 2")
        if not self.start < self.stop:
            raise ValueError("sweep start must be below stop")
        if self.spacing == "log" and self.start <= 0:
            raise ValueError("log sweeps need a positive start")
        if self.spacing not in ("linear", "log"):
            raise ValueError("spacing must be linear or log")

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise ValueError("sweep format: variable:start:stop:count[:log]")
        spacing = parts[4] if len(parts) == 5 else "linear"
        return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]), spacing)

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _emit(rows, columns, out, fmt):
    if fmt == "csv":
        lines = [",".join(columns)]
        lines += [",".join(_fmt(row[c]) for c in columns) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps([{c: (float(r[c]) if not isinstance(r[c], str) else r[c])
                            for c in columns} for r in rows], indent=2) + "\n"
    if out in (None, "-"):
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _base_config(ctx_obj, kw) -> AtomPairConfig:
    data = {}
    if ctx_obj.get("config"):
        with open(ctx_obj["config"], "r", encoding="utf-8") as fh:
            data = json.load(fh)
    flag_map = {
        "omega_a": kw.get("omega_a"), "omega_b": kw.get("omega_b"),
        "gamma_a": kw.get("gamma_a"), "gamma_b": kw.get("gamma_b"),
        "dipole_a": kw.get("dipole_a"), "dipole_b": kw.get("dipole_b"),
        "separation": kw.get("separation"),
    }
    for key, val in flag_map.items():
        if val is not None:
            data[key] = [float(p) for p in val.split(",")] if isinstance(val, str) else val
    defaults = {
        "omega_a": 1.0, "omega_b": 0.999, "gamma_a": 1 / 22.0, "gamma_b": 1 / 22.0,
        "dipole_a": (np.ones(3) / np.sqrt(3.0)).tolist(),
        "dipole_b": (np.ones(3) / np.sqrt(3.0)).tolist(),
        "separation": [0.0, 0.0, 2.0],
    }
    for key, val in defaults.items():
        data.setdefault(key, val)
    return load_config(data)


def _apply_sweep(cfg: AtomPairConfig, t: float, variable: str, value: float):
    if variable == "kR":
        sep = cfg.r_hat * (value / cfg.k_a)
        cfg = AtomPairConfig(atom_a=cfg.atom_a, atom_b=cfg.atom_b, separation=sep)
    elif variable == "gammaT":
        if cfg.atom_a.gamma <= 0:
            raise ValueError("gammaT sweep needs gamma_a > 0")
        t = value / cfg.atom_a.gamma
    elif variable == "delta_ratio":
        wb = cfg.atom_a.omega * (1.0 - value)
        cfg = AtomPairConfig(
            atom_a=cfg.atom_a,
            atom_b=AtomSpec(wb, cfg.atom_b.gamma, cfg.atom_b.dipole),
            separation=cfg.separation)
    return cfg, t


def _validity_cols(cfg, t, regime):
    rep = check_validity(cfg, EvalPoint(t), regime=regime)
    return {
        "valid_causal": rep.causal,
        "valid_weak": rep.weak_interaction,
        "valid_perturbative": rep.perturbative,
    }


def _to_identical(cfg: AtomPairConfig) -> idem.IdenticalConfig:
    return idem.IdenticalConfig(cfg.atom_a.omega, cfg.atom_a.gamma,
                                cfg.atom_a.dipole, cfg.atom_b.dipole,
                                cfg.separation)


def _sweep_points(cfg, t, sweep):
    if sweep is None:
        return [(cfg, t, float("nan"))]
    spec = SweepSpec.parse(sweep)
    pts = []
    for value in spec.values():
        c, tt = _apply_sweep(cfg, t, spec.variable, value)
        pts.append((c, tt, float(value)))
    return pts


def _run_pool(fn, points, threads):
    if threads <= 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, points))


_MODE = click.option("--mode", type=click.Choice(["dissimilar", "identical"]),
                     default="dissimilar", show_default=True)
_TIME = click.option("--T", "t_obs", type=float, default=30.0, show_default=True,
                     help="Observation time in natural units.")
_SWEEP = click.option("--sweep", default=None,
                      help="variable:start:stop:count[:log] with variable in "
                           "{kR, gammaT, delta_ratio}.")

_CFG_FLAGS = [
    click.option("--omega-a", type=float, default=None),
    click.option("--omega-b", type=float, default=None),
    click.option("--gamma-a", type=float, default=None),
    click.option("--gamma-b", type=float, default=None),
    click.option("--dipole-a", type=str, default=None, help="x,y,z"),
    click.option("--dipole-b", type=str, default=None, help="x,y,z"),
    click.option("--separation", type=str, default=None, help="x,y,z"),
]


def _with_cfg_flags(fn):
    for opt in reversed(_CFG_FLAGS):
        fn = opt(fn)
    return fn


@click.group()
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON file with omega_a, omega_b, gamma_a, gamma_b, dipole_a, "
                   "dipole_b, separation; flags win on conflict.")
@click.option("--out", default=None, help="Output path; '-' or omitted for stdout.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--tol", type=float, default=1e-10, show_default=True,
              help="Relative quadrature tolerance.")
@click.option("--threads", type=int, default=1, show_default=True)
@click.pass_context
def main(ctx, config, out, fmt, tol, threads):
    """Time-dependent two-atom van der Waals forces, directional emission and
    consistency checks (natural units, atom A initially excited)."""
    ctx.obj = {
        "config": config,
        "out": out,
        "fmt": fmt,
        "settings": QuadratureSettings(rel_tol=tol),
        "threads": threads,
    }


def _guard(ctx_obj, fn):
    with warnings.catch_warnings():
        warnings.simplefilter("always", ValidityWarning)
        try:
            return fn()
        except (ValueError, OSError, json.JSONDecodeError) as exc:
            click.echo(f"error: invalid configuration: {exc}", err=True)
            sys.exit(EXIT_BAD_CONFIG)
        except (QuadratureError, FloatingPointError, ArithmeticError) as exc:
            click.echo(f"error: numerical failure: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)


def _breakdown_row(label, bd, extra):
    row = dict(extra)
    row["atom"] = label
    for name in bd.names:
        vec = bd[name]
        for ax, comp in zip("xyz", vec):
            row[f"{name}_{ax}"] = comp
    for ax, comp in zip("xyz", bd.total):
        row[f"total_{ax}"] = comp
    return row


@main.command()
@_MODE
@_TIME
@_SWEEP
@_with_cfg_flags
@click.pass_obj
def force(obj, mode, t_obs, sweep, **kw):
    """Per-atom force records with the block decomposition."""
    def run():
        cfg0 = _base_config(obj, kw)
        if mode == "dissimilar" and cfg0.detuning == 0.0:
            raise ValueError("omega_a equals omega_b; use --mode identical")
        points = _sweep_points(cfg0, t_obs, sweep)
        settings = obj["settings"]

        def one(point):
            cfg, t, sv = point
            extra = {"sweep_value": sv, "T": t}
            extra.update(_validity_cols(
                cfg, t, "dissimilar" if mode == "dissimilar" else "identical-limit"))
            if mode == "dissimilar":
                fa = diss.force_A_dissimilar(cfg, t, settings)
                fb = diss.force_B_dissimilar(cfg, t, settings)
            else:
                icfg = _to_identical(cfg)
                fa = idem.force_A_identical(icfg, t, settings)
                fb = idem.force_B_identical(icfg, t, settings)
            return [_breakdown_row("A", fa, extra), _breakdown_row("B", fb, extra)]

        rows = [r for pair in _run_pool(one, points, obj["threads"]) for r in pair]
        cols = list(rows[0])
        _emit(rows, cols, obj["out"], obj["fmt"])

    _guard(obj, run)


@main.command()
@_MODE
@_TIME
@_SWEEP
@_with_cfg_flags
@click.pass_obj
def net(obj, mode, t_obs, sweep, **kw):
    """Net (non-reciprocal) force records."""
    def run():
        cfg0 = _base_config(obj, kw)
        if mode == "dissimilar" and cfg0.detuning == 0.0:
            raise ValueError("omega_a equals omega_b; use --mode identical")
        points = _sweep_points(cfg0, t_obs, sweep)
        settings = obj["settings"]

        def one(point):
            cfg, t, sv = point
            extra = {"sweep_value": sv, "T": t}
            extra.update(_validity_cols(
                cfg, t, "dissimilar" if mode == "dissimilar" else "identical-limit"))
            if mode == "dissimilar":
                bd = diss.net_force_dissimilar(cfg, t, settings)
            else:
                bd = idem.net_force_identical(_to_identical(cfg), t, settings)
            return _breakdown_row("A+B", bd, extra)

        rows = _run_pool(one, points, obj["threads"])
        _emit(rows, list(rows[0]), obj["out"], obj["fmt"])

    _guard(obj, run)


@main.command()
@_TIME
@_SWEEP
@_with_cfg_flags
@click.pass_obj
def energy(obj, t_obs, sweep, **kw):
    """Interaction-energy records (dissimilar regime)."""
    def run():
        cfg0 = _base_config(obj, kw)
        if cfg0.detuning == 0.0:
            raise ValueError("omega_a equals omega_b; energies need a finite detuning")
        points = _sweep_points(cfg0, t_obs, sweep)
        settings = obj["settings"]

        def one(point):
            cfg, t, sv = point
            extra = {"sweep_value": sv, "T": t}
            extra.update(_validity_cols(cfg, t, "dissimilar"))
            rows = []
            for label, bd in (("A", diss.energy_A_dissimilar(cfg, t, settings)),
                              ("B", diss.energy_B_dissimilar(cfg, t, settings))):
                row = dict(extra)
                row["atom"] = label
                for name in bd.names:
                    row[name] = bd[name]
                row["total"] = bd.total
                rows.append(row)
            return rows

        rows = [r for pair in _run_pool(one, points, obj["threads"]) for r in pair]
        _emit(rows, list(rows[0]), obj["out"], obj["fmt"])

    _guard(obj, run)


@main.command()
@_MODE
@_TIME
@click.option("--theta-grid", type=int, default=19, show_default=True)
@click.option("--phi-grid", type=int, default=1, show_default=True)
@click.option("--moment", is_flag=True, default=False,
              help="Emit the first angular moment (photon momentum rate) instead.")
@_with_cfg_flags
@click.pass_obj
def emission(obj, mode, t_obs, theta_grid, phi_grid, moment, **kw):
    """Directional emission density table, or its first angular moment."""
    def run():
        cfg0 = _base_config(obj, kw)
        if mode == "dissimilar" and cfg0.detuning == 0.0:
            raise ValueError("omega_a equals omega_b; use --mode identical")
        settings = obj["settings"]
        t = t_obs
        validity = _validity_cols(
            cfg0, t, "dissimilar" if mode == "dissimilar" else "identical-limit")
        if moment:
            if mode == "dissimilar":
                p = diss.momentum_rate_dissimilar(cfg0, t, settings)
            else:
                p = idem.momentum_rate_identical(_to_identical(cfg0), t, settings)
            row = {"T": t, "moment_x": p[0], "moment_y": p[1], "moment_z": p[2]}
            row.update(validity)
            _emit([row], list(row), obj["out"], obj["fmt"])
            return
        frame = diss._axis_frame(cfg0.r_hat)
        rows = []
        icfg = _to_identical(cfg0) if mode == "identical" else None
        for th in np.linspace(0.0, np.pi, theta_grid):
            for ph in np.linspace(0.0, 2 * np.pi, phi_grid, endpoint=False):
                d_frame = np.array([np.sin(th) * np.cos(ph),
                                    np.sin(th) * np.sin(ph), np.cos(th)])
                d = frame @ d_frame
                if mode == "dissimilar":
                    rate = diss.emission_rate_dissimilar(cfg0, t, d, settings)
                else:
                    rate = idem.emission_rate_identical(icfg, t, d, settings)
                row = {"theta": th, "phi": ph, "rate": rate, "T": t}
                row.update(validity)
                rows.append(row)
        _emit(rows, list(rows[0]), obj["out"], obj["fmt"])

    _guard(obj, run)


@main.command()
@click.option("--gammaT", "gamma_t", type=float, default=1.0, show_default=True)
@click.option("--kR-range", "kr_range", default="0.5:8:512", show_default=True,
              help="start:stop:count for the k0*R grid.")
@click.option("--delta-ratio", type=float, default=1e-3, show_default=True)
@click.option("--omega-over-gamma", type=float, default=22.0, show_default=True,
              help="omega0/Gamma0 setting the weight of the T-linear block.")
@click.pass_obj
def figure(obj, gamma_t, kr_range, delta_ratio, omega_over_gamma):
    """Normalized net-force curves versus k0*R (identical and dissimilar)."""
    def run():
        parts = kr_range.split(":")
        if len(parts) != 3:
            raise ValueError("kR-range format: start:stop:count")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 2 or not 0 < start < stop:
            raise ValueError("invalid kR range")
        omega0 = 1.0
        gamma0 = omega0 / omega_over_gamma
        t = gamma_t / gamma0
        grid = np.linspace(start, stop, count) / omega0
        data = idem.figure_net_force_curve(omega0, gamma0, t, grid, delta_ratio,
                                           settings=obj["settings"])
        rows = [
            {"k0R": r[0], "net_identical_normalized": r[1],
             "net_dissimilar_normalized": r[2], "validity_flag": bool(r[3])}
            for r in data
        ]
        _emit(rows, list(rows[0]), obj["out"], obj["fmt"])

    _guard(obj, run)


@main.command()
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None,
              help="Write the machine-readable JSON report here.")
@click.option("--fb0-sign", type=click.Choice(["limit", "printed"]), default="limit",
              show_default=True,
              help="Sign convention the identical-sum check is evaluated under; "
                   "'printed' demonstrably fails it.")
@click.option("--allow-informational", is_flag=True, default=False,
              help="Demote failures caused by as-printed modes to informational.")
@click.option("--grid", type=click.Choice(["default", "minimal"]), default="default",
              show_default=True)
@click.pass_obj
def verify(obj, report_path, fb0_sign, allow_informational, grid):
    """Run the full consistency suite; exit 0 iff all mandatory checks pass."""
    reports = run_all(obj["settings"], fb0_sign=fb0_sign, grid=grid)
    if fb0_sign == "printed" and allow_informational:
        for r in reports:
            if r.name == "sum_consistency_identical" and not r.passed:
                r.mandatory = False
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write(report_to_json(reports))
    click.echo(format_table(reports))
    failed = [r for r in reports if r.mandatory and not r.passed]
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
