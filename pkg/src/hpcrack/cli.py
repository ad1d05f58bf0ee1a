"""Command-line front end.

Exit codes: 0 success, 1 numerical failure or residual above tolerance,
2 usage error.  Data files are deterministic; wall-clock information goes
to a ``timing.json`` sidecar.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import platform
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from ._accel import BACKEND
from .errors import HpcrackError
from .field import (default_axes, dtn_check, harmonicity_residual, reconstruct_field,
                    strain_bound_report)
from .fredholm import (CrackParams, SolveReport, convergence_study, limiting_profile,
                       nondimensionalize, solve_nystrom)
from .kinematics import (compute_surface_state, exponential_example,
                         geodesic_distortion_rate, stretch_of_convected_curve)

MODES = ("solve", "sweep", "fig3", "fig4", "converge", "field", "kinematics-demo")
# (beta, alpha, gamma, n).  Stiff cases need a finer grid for the strong
# residual; soft ones stay coarse because roundoff in the FD fourth
# derivative grows like h**-4.
FIG3 = ((1.0, 1.0, 1.0, 513), (5.0, 1.0, 5.0, 513), (10.0, 1.0, 10.0, 513))
FIG4 = ((1e-1, 1e-1, 1.0, 513), (1e-2, 1e-1, 1.0, 513),
        (1e-5, 1e-2, 1.0, 2049), (1e-6, 1e-3, 1.0, 2049))
PHYSICAL_KEYS = ("mu", "mu_s", "zeta", "eta", "ell", "sigma")
PROFILE_COLUMNS = ("x", "f", "df", "d2f", "strong_residual")


class UsageError(Exception):
    pass


@dataclasses.dataclass
class RunConfig:
    mode: str = "solve"
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    n: int | None = None
    out: str = "hpcrack_out"
    format: str = "csv"
    tol_residual: float = 1e-3
    physical: dict | None = None
    sweep_param: str = "beta"
    sweep_values: list | None = None
    ns: list | None = None
    field_L: float = 3.0
    field_Y: float = 3.0
    field_shape: list | None = None

    def params(self) -> CrackParams:
        if self.physical:
            missing = [k for k in PHYSICAL_KEYS if k not in self.physical]
            if missing:
                raise UsageError(f"physical inputs missing: {', '.join(missing)}")
            try:
                return nondimensionalize(**{k: float(self.physical[k]) for k in PHYSICAL_KEYS})
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        vals = dict(alpha=self.alpha, beta=self.beta, gamma=self.gamma)
        missing = [k for k, v in vals.items() if v is None]
        if missing:
            raise UsageError(f"missing parameter(s): {', '.join(missing)}")
        try:
            return CrackParams(float(self.alpha), float(self.beta), float(self.gamma))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------- output

def _fmt(v) -> str:
    return "%.17g" % v


def run_meta(report: SolveReport, **extra) -> dict:
    p = report.params
    meta = {
        "alpha": p.alpha, "beta": p.beta, "gamma": p.gamma, "n": report.profile.n,
        "residual_interior_rel": report.residual, "residual_tol": report.residual_tol,
        "residual_flagged": report.flagged,
        "weak_residual_max": float(np.max(np.abs(report.profile.weak_residual))),
        "condition_1norm": report.condition, "max_abs_f": report.max_abs_f,
        "max_abs_df": report.max_abs_df, "tip_slope_left": report.tip_slopes[0],
        "tip_slope_right": report.tip_slopes[1], "energy": report.energy,
    }
    meta.update(extra)
    meta.update(versions())
    return meta


def versions() -> dict:
    return {"hpcrack": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version(), "backend": BACKEND}


def _meta_str(v):
    if isinstance(v, float):
        return _fmt(v)
    return str(v)


def write_table_csv(path, columns: dict, meta: dict):
    names = list(columns)
    data = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for k, v in meta.items():
            fh.write(f"# {k}={_meta_str(v)}\n")
        fh.write(",".join(names) + "\n")
        for row in data:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _json_num(v):
    v = float(v)
    return v if math.isfinite(v) else None


def write_table_json(path, columns: dict, meta: dict):
    doc = {"meta": {k: (_json_num(v) if isinstance(v, float) else v) for k, v in meta.items()}}
    for k, col in columns.items():
        doc[k] = [_json_num(v) for v in np.asarray(col, dtype=float)]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def write_table(path_stem: Path, columns, meta, fmt) -> Path:
    path = path_stem.parent / f"{path_stem.name}.{fmt}"
    (write_table_csv if fmt == "csv" else write_table_json)(path, columns, meta)
    return path


def profile_columns(report: SolveReport) -> dict:
    pr = report.profile
    return dict(zip(PROFILE_COLUMNS, (pr.x, pr.values, pr.df, pr.d2f, pr.strong_residual)))


def emit_profile_csv(report: SolveReport, path, **extra_meta):
    write_table_csv(path, profile_columns(report), run_meta(report, **extra_meta))


def read_table_csv(path):
    """Inverse of :func:`write_table_csv`: ``(meta, {column: array})``."""
    meta = {}
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    i = 0
    while lines[i].startswith("# "):
        k, _, v = lines[i][2:].partition("=")
        meta[k] = v
        i += 1
    names = lines[i].split(",")
    rows = [ln for ln in lines[i + 1:] if ln]
    data = np.array([[float(v) for v in ln.split(",")] for ln in rows]).reshape(-1, len(names))
    return meta, {k: data[:, j] for j, k in enumerate(names)}


def _tag(p: CrackParams) -> str:
    return f"b{p.beta:g}_a{p.alpha:g}_g{p.gamma:g}"


# ----------------------------------------------------------------- modes

def _solve_and_write(cfg, params, out, n, stem=None, rep=None, **extra):
    if rep is None:
        rep = solve_nystrom(params, n, residual_tol=cfg.tol_residual)
    path = write_table(out / (stem or f"profile_{_tag(params)}"), profile_columns(rep),
                       run_meta(rep, **extra), cfg.format)
    return rep, path


def _mode_solve(cfg, out):
    rep, _ = _solve_and_write(cfg, cfg.params(), out, cfg.n or 513, stem="profile")
    return [rep]


def _mode_figure(cfg, out, cases, reference):
    reps = []
    for beta, alpha, gamma, n_case in cases:
        n = cfg.n or n_case
        p = CrackParams(alpha, beta, gamma)
        rep = solve_nystrom(p, n, residual_tol=cfg.tol_residual)
        extra = {}
        if reference:
            finf = gamma / beta * limiting_profile(rep.profile.x)
            extra["max_abs_f_minus_finf"] = float(np.max(np.abs(rep.profile.values - finf)))
        _solve_and_write(cfg, p, out, n, rep=rep, **extra)
        reps.append(rep)
    if reference:
        n = cfg.n or cases[0][3]
        x = np.linspace(-1, 1, n)
        write_table(out / "reference_finf", {"x": x, "f_inf": limiting_profile(x)},
                    {"description": "(1-x^2)^2/24", "n": n, **versions()}, cfg.format)
    return reps


def _mode_sweep(cfg, out):
    base = cfg.params()
    if cfg.sweep_param not in ("alpha", "beta", "gamma"):
        raise UsageError("sweep_param must be alpha, beta or gamma")
    if not cfg.sweep_values:
        raise UsageError("sweep needs sweep_values")
    n = cfg.n or 513
    reps, rows = [], []
    for v in cfg.sweep_values:
        p = dataclasses.replace(base, **{cfg.sweep_param: float(v)}, physical=None)
        rep, _ = _solve_and_write(cfg, p, out, n)
        reps.append(rep)
        pr = rep.profile
        rows.append((float(v), float(pr.values[pr.n // 2]), rep.max_abs_f,
                     pr.max_slope_near_tips(), rep.residual, rep.condition))
    cols = (cfg.sweep_param, "f0", "max_abs_f", "max_tip_slope", "residual", "condition")
    arr = np.array(rows)
    write_table(out / "sweep_summary", {c: arr[:, j] for j, c in enumerate(cols)},
                {"sweep_param": cfg.sweep_param, "n": n, "alpha": base.alpha,
                 "beta": base.beta, "gamma": base.gamma, **versions()}, cfg.format)
    return reps


def _mode_converge(cfg, out):
    p = cfg.params()
    ns = tuple(cfg.ns or (129, 257, 513, 1025))
    tab = convergence_study(p, ns)
    orders = (math.nan,) + tab.orders
    write_table(out / "convergence",
                {"n": ns[:-1], "diff_inf": tab.differences, "order": orders},
                {"alpha": p.alpha, "beta": p.beta, "gamma": p.gamma,
                 "min_order": tab.min_order, **versions()}, cfg.format)
    rep = solve_nystrom(p, ns[-1], residual_tol=cfg.tol_residual)
    rep.convergence = tab
    return [rep]


def _mode_field(cfg, out):
    p = cfg.params()
    rep, _ = _solve_and_write(cfg, p, out, cfg.n or 513, stem="profile")
    shape = tuple(cfg.field_shape or (301, 301))
    xs, ys = default_axes(cfg.field_L, cfg.field_Y, shape)
    fld = reconstruct_field(rep.profile, xs, ys)
    hy = 1e-3
    near = reconstruct_field(rep.profile, rep.profile.x, np.array([0.0, hy, 2 * hy]))
    X, Y = np.meshgrid(xs, ys)
    meta = {"alpha": p.alpha, "beta": p.beta, "gamma": p.gamma, "n": rep.profile.n,
            "nx": xs.size, "ny": ys.size,
            "harmonicity_residual_y_ge_0.5": harmonicity_residual(fld, y_min=0.5),
            "dtn_mismatch_hy_1e-3": dtn_check(rep.profile, near),
            "strain_bound_ratio": strain_bound_report(fld, p), **versions()}
    write_table(out / "field", {"x": X.ravel(), "y": Y.ravel(), "w": fld.w.ravel(),
                                "w_x": fld.w_x.ravel(), "w_y": fld.w_y.ravel()},
                meta, cfg.format)
    return [rep]


def _mode_kinematics(cfg, out):
    chart, deform = exponential_example()
    rows = []
    for X1 in np.linspace(-1.0, 1.0, 9):
        s = compute_surface_state(chart, deform, [X1, 1.0])
        rows.append((X1, s.E[0, 0], s.E[1, 1], s.K[0, 0], s.L[0, 0, 0], s.L[0, 1, 1],
                     s.L[1, 0, 1], stretch_of_convected_curve(s, [1, 0]),
                     geodesic_distortion_rate(s, [1, 0]), geodesic_distortion_rate(s, [0, 1])))
    cols = ("X1", "E11", "E22", "K11", "L111", "L122", "L212", "stretch_e1",
            "rate_e1", "rate_e2")
    arr = np.array(rows)
    write_table(out / "kinematics_exponential", {c: arr[:, j] for j, c in enumerate(cols)},
                {"X2": 1.0, **versions()}, cfg.format)
    return []


# ------------------------------------------------------------------ glue

def build_parser():
    ap = argparse.ArgumentParser(prog="hpcrack", description=(
        "Mode-III crack opening with strain-gradient surface elasticity."))
    ap.add_argument("--mode", choices=MODES)
    ap.add_argument("--alpha", type=float)
    ap.add_argument("--beta", type=float)
    ap.add_argument("--gamma", type=float)
    ap.add_argument("--n", type=int)
    ap.add_argument("--config", type=Path, help="flat JSON file; flags override it")
    ap.add_argument("--out", type=str)
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--tol-residual", dest="tol_residual", type=float)
    ap.add_argument("--sweep-param", dest="sweep_param", choices=("alpha", "beta", "gamma"))
    ap.add_argument("--sweep-values", dest="sweep_values",
                    type=lambda s: [float(v) for v in s.split(",")])
    return ap


def load_config(args) -> RunConfig:
    data = {}
    if args.config is not None:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config must be a flat JSON object")
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    physical = {k: data.pop(k) for k in PHYSICAL_KEYS if k in data}
    unknown = set(data) - fields
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for k, v in vars(args).items():
        if k != "config" and v is not None:
            data[k] = v
    if physical:
        data["physical"] = physical
    cfg = RunConfig(**data)
    if cfg.mode not in MODES:
        raise UsageError(f"mode must be one of {MODES}")
    if cfg.format not in ("csv", "json"):
        raise UsageError("format must be csv or json")
    if cfg.n is not None and (cfg.n < 33 or cfg.n % 2 == 0):
        raise UsageError("n must be odd and >= 33")
    if not cfg.tol_residual > 0:
        raise UsageError("tol-residual must be positive")
    return cfg


def run(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    started = time.time()
    t0 = time.perf_counter()
    if cfg.mode == "solve":
        reps = _mode_solve(cfg, out)
    elif cfg.mode == "fig3":
        reps = _mode_figure(cfg, out, FIG3, reference=True)
    elif cfg.mode == "fig4":
        reps = _mode_figure(cfg, out, FIG4, reference=False)
    elif cfg.mode == "sweep":
        reps = _mode_sweep(cfg, out)
    elif cfg.mode == "converge":
        reps = _mode_converge(cfg, out)
    elif cfg.mode == "field":
        reps = _mode_field(cfg, out)
    else:
        reps = _mode_kinematics(cfg, out)
    timing = {"mode": cfg.mode, "started_unix": started,
              "elapsed_s": time.perf_counter() - t0,
              "solves": [{"params": list(r.params.as_tuple()), **r.timings} for r in reps]}
    (out / "timing.json").write_text(json.dumps(timing, indent=1) + "\n", encoding="utf-8")
    flagged = [r for r in reps if r.flagged]
    for r in flagged:
        print(f"residual {r.residual:.3e} above tolerance {r.residual_tol:.1e} "
              f"for (alpha, beta, gamma) = {r.params.as_tuple()}", file=sys.stderr)
    return 1 if flagged else 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args)
        return run(cfg)
    except UsageError as exc:
        print(f"hpcrack: usage error: {exc}", file=sys.stderr)
        return 2
    except (HpcrackError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"hpcrack: numerical failure: {exc}", file=sys.stderr)
        return 1
