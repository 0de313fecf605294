"""Deterministic experiment front end: TOML configs in, CSV/JSON out.

Every scenario is a pure function of its config: no randomness, no clocks
in the data files, atomic per-file writes (temp + rename), and a manifest
JSON written last as the success marker.  Numbers are serialized with 17
significant digits so round-tripping through text is exact.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field as dc_field

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

import numpy as np

from . import __version__
from .analysis import (
    ConvexityError,
    build_bounds_report,
    lebesgue_upper_value,
    shifted_x_hat,
)
from .barycentric import lebesgue_constant, lebesgue_function, weights_from_nodes
from .density import (
    DensitySpec,
    QuantileSolveError,
    equidistant_nodes,
    generate_nodes,
    spacing_profile,
)
from .fh import (
    POLE_RECOVERY_MAX_N,
    FHConfig,
    denominator_roots,
    fh_potential_report,
    fh_weight_integers,
    fh_weights,
)
from .potential import (
    ContinuousPotential,
    DiscretePotential,
    ExternalField,
    complex_grid_sample,
    equilibrium_field,
    half_i_functional_field,
    half_i_pole_field,
    no_field,
    pole_field,
    potential_extrema,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "RunManifest",
    "load_config",
    "run",
    "validate",
    "main",
    "OUTDIR_ENV",
]

OUTDIR_ENV = "BARYPOT_OUTDIR"

SCENARIOS = (
    "nodes",
    "weights",
    "lebesgue",
    "sweep",
    "contour",
    "fh",
    "repro_fig1",
    "repro_fig4",
    "repro_fig6",
)

REPRO_N_LIST = (20, 40, 80, 160, 320)

FIELD_KINDS = ("none", "poles", "half_i_poles", "functional", "equilibrium")


class ConfigError(ValueError):
    """Schema or cross-field violation, carrying a dotted field path."""

    def __init__(self, where: str, detail: str):
        super().__init__(f"{where}: {detail}")
        self.where = where


# ---------------------------------------------------------------------------
# config model

@dataclass(frozen=True)
class ContourGrid:
    re_range: tuple[float, float]
    im_range: tuple[float, float]
    nx: int
    ny: int


@dataclass(frozen=True)
class GridConfig:
    samples_per_gap: int = 30
    contour: ContourGrid | None = None


@dataclass(frozen=True)
class DensityConfig:
    kind: str = "uniform"
    params: tuple = ()
    samples: tuple | None = None  # (t, w) rows for user_tabulated


@dataclass(frozen=True)
class FieldConfig:
    kind: str = "none"
    poles: tuple = ()  # ((re, im, multiplicity), ...)
    u_bar: float = 0.0
    builtin_name: str = "half_i_pair"


@dataclass(frozen=True)
class FHSection:
    d: int | None = None
    c_fh: float | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    density: DensityConfig = dc_field(default_factory=DensityConfig)
    field: FieldConfig = dc_field(default_factory=FieldConfig)
    n_list: tuple[int, ...] = ()
    grid: GridConfig = dc_field(default_factory=GridConfig)
    outputs: str = "out"
    fh: FHSection | None = None


@dataclass
class RunManifest:
    config: dict
    files: list  # [{"name": ..., "rows": ...}]
    version: str
    wall_time_s: float


# ---------------------------------------------------------------------------
# parsing / validation

def _section(raw: dict, key: str) -> dict:
    val = raw.get(key, {})
    if not isinstance(val, dict):
        raise ConfigError(key, "must be a table")
    return val


_REQUIRED = object()


def _get(tab: dict, where: str, key: str, kinds, default):
    if key not in tab:
        if default is _REQUIRED:
            raise ConfigError(f"{where}.{key}", "required field is missing")
        return default
    val = tab[key]
    if not isinstance(val, kinds) or (isinstance(val, bool) and kinds is not bool):
        raise ConfigError(f"{where}.{key}", f"unexpected type {type(val).__name__}")
    return val


def _number(tab, where, key, default=_REQUIRED):
    val = _get(tab, where, key, (int, float), default)
    return val if val is None else float(val)


def _parse_density(raw: dict) -> DensityConfig:
    tab = _section(raw, "density")
    kind = _get(tab, "density", "kind", str, "uniform")
    params = tuple(float(v) for v in _get(tab, "density", "params", list, []))
    samples = None
    if "samples" in tab:
        rows = _get(tab, "density", "samples", list, [])
        try:
            samples = (
                tuple(float(r[0]) for r in rows),
                tuple(float(r[1]) for r in rows),
            )
        except (TypeError, IndexError, ValueError):
            raise ConfigError("density.samples", "must be [t, w] pairs") from None
    return DensityConfig(kind=kind, params=params, samples=samples)


def _parse_field(raw: dict) -> FieldConfig:
    tab = _section(raw, "field")
    kind = _get(tab, "field", "kind", str, "none")
    if kind not in FIELD_KINDS:
        raise ConfigError("field.kind", f"unknown kind {kind!r}; choose from {FIELD_KINDS}")
    poles = []
    for i, row in enumerate(_get(tab, "field", "poles", list, [])):
        try:
            re, im, mult = float(row[0]), float(row[1]), row[2]
        except (TypeError, IndexError, ValueError):
            raise ConfigError(f"field.poles[{i}]", "must be [re, im, multiplicity]") from None
        if not isinstance(mult, int) or mult < 1:
            raise ConfigError(f"field.poles[{i}]", "multiplicity must be an integer >= 1")
        poles.append((re, im, mult))
    return FieldConfig(
        kind=kind,
        poles=tuple(poles),
        u_bar=_number(tab, "field", "u_bar", 0.0),
        builtin_name=_get(tab, "field", "builtin_name", str, "half_i_pair"),
    )


def _parse_grid(raw: dict) -> GridConfig:
    tab = _section(raw, "grid")
    spg = _get(tab, "grid", "samples_per_gap", int, 30)
    contour = None
    if "contour" in tab:
        ct = _section(tab, "contour")
        where = "grid.contour"
        rr = _get(ct, where, "re_range", list, _REQUIRED)
        ir = _get(ct, where, "im_range", list, _REQUIRED)
        for name, rng in (("re_range", rr), ("im_range", ir)):
            if len(rng) != 2 or not all(isinstance(v, (int, float)) for v in rng):
                raise ConfigError(f"{where}.{name}", "must be [lo, hi]")
            if not rng[0] < rng[1]:
                raise ConfigError(f"{where}.{name}", "needs lo < hi")
        nx = _get(ct, where, "nx", int, _REQUIRED)
        ny = _get(ct, where, "ny", int, _REQUIRED)
        if nx < 2 or ny < 2:
            raise ConfigError(f"{where}.nx", "nx and ny must be >= 2")
        contour = ContourGrid(
            re_range=(float(rr[0]), float(rr[1])),
            im_range=(float(ir[0]), float(ir[1])),
            nx=nx,
            ny=ny,
        )
    return GridConfig(samples_per_gap=spg, contour=contour)


def parse_config(raw: dict) -> ExperimentConfig:
    """Schema + cross-field validation of a parsed TOML document."""
    scenario = _get(raw, "config", "scenario", str, _REQUIRED)
    if scenario not in SCENARIOS:
        raise ConfigError("scenario", f"unknown scenario {scenario!r}; choose from {SCENARIOS}")
    run_tab = _section(raw, "run")
    n_list = _get(run_tab, "run", "n_list", list, None)
    if n_list is None:
        if not scenario.startswith("repro") and scenario not in ("fh",):
            raise ConfigError("run.n_list", "required field is missing")
        n_list = ()
    else:
        if not n_list:
            raise ConfigError("run.n_list", "must be nonempty")
        if not all(isinstance(v, int) and v >= 1 for v in n_list):
            raise ConfigError("run.n_list", "entries must be integers >= 1")
        if any(b <= a for a, b in zip(n_list, n_list[1:])):
            raise ConfigError("run.n_list", "must be strictly increasing")
        n_list = tuple(n_list)
    grid = _parse_grid(raw)
    if grid.samples_per_gap < 10:
        raise ConfigError("grid.samples_per_gap", "must be >= 10")
    out_tab = _section(raw, "outputs")
    outputs = _get(out_tab, "outputs", "directory", str, "out")
    fh_sec = None
    if "fh" in raw:
        tab = _section(raw, "fh")
        d = _get(tab, "fh", "d", int, None)
        c_fh = _number(tab, "fh", "c_fh", None)
        fh_sec = FHSection(d=d, c_fh=c_fh)
    cfg = ExperimentConfig(
        scenario=scenario,
        density=_parse_density(raw),
        field=_parse_field(raw),
        n_list=n_list,
        grid=grid,
        outputs=outputs,
        fh=fh_sec,
    )
    _cross_validate(cfg)
    return cfg


def _cross_validate(cfg: ExperimentConfig) -> None:
    # constructing the domain objects runs their own invariants
    try:
        spec = _density_spec(cfg.density)
    except (ValueError, TypeError) as exc:
        raise ConfigError("density", str(exc)) from None
    try:
        _build_field(cfg.field, spec, n=max(cfg.n_list or REPRO_N_LIST))
    except (ValueError, TypeError) as exc:
        raise ConfigError("field", str(exc)) from None
    if cfg.scenario == "contour" and cfg.grid.contour is None:
        raise ConfigError("grid.contour", "required for the contour scenario")
    if cfg.scenario == "fh":
        if cfg.fh is None:
            raise ConfigError("fh", "required table for the fh scenario")
        if (cfg.fh.d is None) == (cfg.fh.c_fh is None):
            raise ConfigError("fh", "specify exactly one of d and c_fh")
        for n in cfg.n_list:
            if n > POLE_RECOVERY_MAX_N:
                raise ConfigError(
                    "run.n_list", f"fh pole recovery is capped at n = {POLE_RECOVERY_MAX_N}"
                )
        try:
            for n in cfg.n_list:
                FHConfig(n=n, d=cfg.fh.d, c_fh=cfg.fh.c_fh)
        except ValueError as exc:
            raise ConfigError("fh", str(exc)) from None


def load_config(path: str) -> ExperimentConfig:
    """Read and validate a TOML config file."""
    with open(path, "rb") as fh:
        try:
            raw = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError("(file)", f"TOML parse error: {exc}") from None
    return parse_config(raw)


# ---------------------------------------------------------------------------
# domain object construction

def _density_spec(d: DensityConfig) -> DensitySpec:
    if d.samples is not None:
        return DensitySpec(kind=d.kind, params=d.params, samples=d.samples)
    return DensitySpec(kind=d.kind, params=d.params)


def _build_field(f: FieldConfig, spec: DensitySpec, n: int) -> ExternalField:
    if f.kind == "none":
        return no_field()
    if f.kind == "poles":
        if not f.poles:
            raise ValueError("field.poles must be nonempty for kind = poles")
        return pole_field([(complex(re, im), m) for re, im, m in f.poles])
    if f.kind == "half_i_poles":
        return half_i_pole_field(n)
    if f.kind == "functional":
        if f.builtin_name != "half_i_pair":
            raise ValueError(f"unknown builtin field {f.builtin_name!r}")
        return half_i_functional_field()
    return equilibrium_field(spec, f.u_bar)


# ---------------------------------------------------------------------------
# serialization

def fmt(v) -> str:
    """One CSV/JSON cell: booleans lowercase, None as na, floats %.17g."""
    if v is None:
        return "na"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def _json_render(obj, indent: int = 0) -> str:
    """JSON with deterministic key order and 17-digit floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{inner}{json.dumps(str(k))}: {_json_render(v, indent + 1)}'
            for k, v in sorted(obj.items())
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not len(obj):
            return "[]"
        items = [f"{inner}{_json_render(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v) or math.isinf(v):
            return json.dumps(fmt(v))  # quoted: JSON has no inf/nan literals
        return fmt(v)
    return json.dumps(str(obj))


class OutputWriter:
    """Atomic per-file writer that tracks everything it created."""

    def __init__(self, directory: str):
        self.directory = directory
        self.files: list[dict] = []
        os.makedirs(directory, exist_ok=True)

    def _emit(self, name: str, text: str, rows: int) -> None:
        path = os.path.join(self.directory, name)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
        self.files.append({"name": name, "rows": rows})

    def write_csv(self, name: str, header: str, rows) -> None:
        lines = [header]
        lines.extend(",".join(fmt(c) for c in row) for row in rows)
        self._emit(name, "\n".join(lines) + "\n", len(lines) - 1)

    def write_json(self, name: str, obj) -> None:
        self._emit(name, _json_render(obj) + "\n", 1)

    def discard_all(self) -> None:
        for entry in self.files:
            try:
                os.remove(os.path.join(self.directory, entry["name"]))
            except OSError:
                pass
        self.files.clear()


# ---------------------------------------------------------------------------
# scenario payloads

def _suffix(cfg_n_list, n: int) -> str:
    return "" if len(cfg_n_list) == 1 else f"_n{n}"


def _scenario_nodes(cfg: ExperimentConfig, spec: DensitySpec, w: OutputWriter) -> None:
    for n in cfg.n_list:
        nodes = generate_nodes(spec, n)
        w.write_csv(
            f"nodes{_suffix(cfg.n_list, n)}.csv",
            "i,x",
            [(i, x) for i, x in enumerate(nodes.nodes)],
        )


def _scenario_weights(cfg: ExperimentConfig, spec: DensitySpec, w: OutputWriter) -> None:
    for n in cfg.n_list:
        nodes = generate_nodes(spec, n)
        ws = weights_from_nodes(nodes, _build_field(cfg.field, spec, n))
        w.write_csv(
            f"weights{_suffix(cfg.n_list, n)}.csv",
            "k,x,sign,log_abs_w",
            [
                (k, nodes.nodes[k], int(ws.signs[k]), ws.log_abs[k])
                for k in range(n + 1)
            ],
        )


def _lebesgue_grid(nodes) -> np.ndarray:
    x = nodes.nodes
    frac = np.linspace(0.0, 1.0, 17)[1:-1]
    mids = (x[:-1, None] + np.diff(x)[:, None] * frac[None, :]).ravel()
    return np.sort(np.concatenate([x, mids]))


def _scenario_lebesgue(cfg: ExperimentConfig, spec: DensitySpec, w: OutputWriter) -> None:
    reports = []
    for n in cfg.n_list:
        nodes = generate_nodes(spec, n)
        ws = weights_from_nodes(nodes, _build_field(cfg.field, spec, n))
        xs = _lebesgue_grid(nodes)
        lam = lebesgue_function(nodes, ws, xs)
        w.write_csv(
            f"lebesgue{_suffix(cfg.n_list, n)}.csv",
            "x,lambda",
            list(zip(xs, lam)),
        )
        rep = lebesgue_constant(nodes, ws, samples_per_gap=cfg.grid.samples_per_gap)
        reports.append({"n": n, "lambda": rep.lam, "argmax_x": rep.argmax_x})
    w.write_json("lebesgue_report.json", reports)


SWEEP_HEADER = (
    "n,lambda,log_lambda,weight_ratio_log,delta_minus,delta_plus,d,rho,"
    "lb_thm41_log,ub_thm53,ok_thm34,ok_cor,ok_thm41,ok_thm53"
)


def _sweep_rows(spec: DensitySpec, field_for, n_list, samples_per_gap: int):
    nodesets = [generate_nodes(spec, n) for n in n_list]
    spacing = spacing_profile(nodesets)
    rows = []
    for nodes in nodesets:
        field = field_for(nodes.n)
        ws = weights_from_nodes(nodes, field)
        U = ContinuousPotential(spec, field)
        Un = DiscretePotential(nodes, field)
        rep = build_bounds_report(nodes, ws, U, Un, spacing, samples_per_gap)
        rows.append(
            (
                nodes.n,
                rep.lebesgue,
                math.log(rep.lebesgue),
                rep.weight_ratio_log,
                rep.delta.delta_minus,
                rep.delta.delta_plus,
                rep.extrema.d,
                rep.rho,
                rep.lebesgue_lower_log,
                lebesgue_upper_value(rep),
                rep.ok_thm34,
                rep.ok_cor,
                rep.ok_thm41,
                rep.ok_thm53,
            )
        )
    return rows


def _scenario_sweep(cfg: ExperimentConfig, spec: DensitySpec, w: OutputWriter) -> None:
    rows = _sweep_rows(
        spec,
        lambda n: _build_field(cfg.field, spec, n),
        cfg.n_list,
        cfg.grid.samples_per_gap,
    )
    w.write_csv("sweep.csv", SWEEP_HEADER, rows)


def _scenario_contour(cfg: ExperimentConfig, spec: DensitySpec, w: OutputWriter) -> None:
    ct = cfg.grid.contour
    for n in cfg.n_list:
        nodes = generate_nodes(spec, n)
        Un = DiscretePotential(nodes, _build_field(cfg.field, spec, n))
        re, im, u = complex_grid_sample(Un, ct.re_range, ct.im_range, ct.nx, ct.ny)
        rows = [
            (re[ix], im[iy], u[iy, ix]) for iy in range(ct.ny) for ix in range(ct.nx)
        ]
        w.write_csv(f"contour{_suffix(cfg.n_list, n)}.csv", "re,im,u", rows)


FH_HEADER = "n,d,range_u_hat,ratio_log"


def _fh_rows_and_poles(cfgs: list[FHConfig], w: OutputWriter, tag: str, n_list) -> list:
    ranges = fh_potential_report(cfgs)
    rows = []
    for cfg, rng in zip(cfgs, ranges):
        ints = fh_weight_integers(cfg.n, cfg.degree)
        rows.append((cfg.n, cfg.degree, rng, math.log(max(ints)) - math.log(min(ints))))
        ps = denominator_roots(equidistant_nodes(cfg.n), fh_weights(cfg))
        w.write_csv(
            f"{tag}_poles{_suffix(n_list, cfg.n)}.csv",
            "re,im,residual",
            [
                (p.real, p.imag, r)
                for p, r in zip(ps.poles, ps.residual_norms)
            ],
        )
    return rows


def _scenario_fh(cfg: ExperimentConfig, spec: DensitySpec, w: OutputWriter) -> None:
    cfgs = [FHConfig(n=n, d=cfg.fh.d, c_fh=cfg.fh.c_fh) for n in cfg.n_list]
    rows = _fh_rows_and_poles(cfgs, w, "fh", cfg.n_list)
    w.write_csv("fh_report.csv", FH_HEADER, rows)


def _fit_slope(ns, logs) -> float:
    # drop the smallest n to damp transients, matching the analysis module
    return float(np.polyfit(ns[1:], logs[1:], 1)[0])


def _scenario_repro_fig1(cfg: ExperimentConfig, spec: DensitySpec, w: OutputWriter) -> None:
    n_list = cfg.n_list or REPRO_N_LIST
    spg = cfg.grid.samples_per_gap
    cases = {
        "a": (DensitySpec(kind="uniform"), lambda n: no_field()),
        "b": (DensitySpec(kind="chebyshev"), half_i_pole_field),
        "c": (DensitySpec(kind="uniform"), half_i_pole_field),
    }
    rates = {
        "d_1": math.log(2.0),
        "d_2": potential_extrema(
            ContinuousPotential(cases["b"][0], half_i_pole_field(2))
        ).d,
        "d_3": potential_extrema(
            ContinuousPotential(cases["c"][0], half_i_pole_field(2))
        ).d,
    }
    for tag, (dspec, field_for) in cases.items():
        rows = _sweep_rows(dspec, field_for, n_list, spg)
        w.write_csv(f"sweep_{tag}.csv", SWEEP_HEADER, rows)
        ns = [r[0] for r in rows]
        rates[f"slope_lambda_{tag}"] = _fit_slope(ns, [r[2] for r in rows])
        rates[f"slope_ratio_{tag}"] = _fit_slope(ns, [r[3] for r in rows])
    w.write_json("rates.json", rates)


POINTWISE_X_HATS = (0.0, 0.25, 0.5, 0.75)


def _pointwise_eval(nodes, ws, x_hat: float) -> float:
    """Λ_n(x̂), shifting half a gap when x̂ lands on a node."""
    return float(lebesgue_function(nodes, ws, shifted_x_hat(nodes, x_hat)))


def _scenario_repro_fig4(cfg: ExperimentConfig, spec: DensitySpec, w: OutputWriter) -> None:
    n_list = cfg.n_list or REPRO_N_LIST
    spg = cfg.grid.samples_per_gap
    gauss = DensitySpec(kind="truncated_gaussian")
    cases = {
        "example1": lambda n: no_field(),
        "example2": half_i_pole_field,
        "example3": lambda n: equilibrium_field(gauss, 0.0),
    }
    for tag, field_for in cases.items():
        rows = _sweep_rows(gauss, field_for, n_list, spg)
        w.write_csv(f"{tag}.csv", SWEEP_HEADER, rows)
    pw_rows = []
    for n in n_list:
        nodes = generate_nodes(gauss, n)
        ws = weights_from_nodes(nodes, no_field())
        for x_hat in POINTWISE_X_HATS:
            lam = _pointwise_eval(nodes, ws, x_hat)
            pw_rows.append((n, x_hat, lam, math.log(lam)))
    w.write_csv("pointwise.csv", "n,x_hat,lambda,log_lambda", pw_rows)


FIG6_FIXED_D = 3
FIG6_FIXED_N = (20, 40, 60)
FIG6_PROP_C = 0.25
FIG6_PROP_N = (16, 24, 32, 40, 48, 56, 64)


def _scenario_repro_fig6(cfg: ExperimentConfig, spec: DensitySpec, w: OutputWriter) -> None:
    fixed = [FHConfig(n=n, d=FIG6_FIXED_D) for n in FIG6_FIXED_N]
    rows = _fh_rows_and_poles(fixed, w, "fh_fixed", FIG6_FIXED_N)
    w.write_csv("fh_fixed.csv", FH_HEADER, rows)
    prop = [FHConfig(n=n, c_fh=FIG6_PROP_C) for n in FIG6_PROP_N]
    rows = _fh_rows_and_poles(prop, w, "fh_proportional", FIG6_PROP_N)
    w.write_csv("fh_proportional.csv", FH_HEADER, rows)


_SCENARIO_RUNNERS = {
    "nodes": _scenario_nodes,
    "weights": _scenario_weights,
    "lebesgue": _scenario_lebesgue,
    "sweep": _scenario_sweep,
    "contour": _scenario_contour,
    "fh": _scenario_fh,
    "repro_fig1": _scenario_repro_fig1,
    "repro_fig4": _scenario_repro_fig4,
    "repro_fig6": _scenario_repro_fig6,
}


# ---------------------------------------------------------------------------
# entry points

def _config_echo(cfg: ExperimentConfig) -> dict:
    return {
        "scenario": cfg.scenario,
        "density": {
            "kind": cfg.density.kind,
            "params": list(cfg.density.params),
        },
        "field": {
            "kind": cfg.field.kind,
            "poles": [list(p) for p in cfg.field.poles],
            "u_bar": cfg.field.u_bar,
            "builtin_name": cfg.field.builtin_name,
        },
        "n_list": list(cfg.n_list),
        "samples_per_gap": cfg.grid.samples_per_gap,
        "outputs": cfg.outputs,
    }


def run(cfg: ExperimentConfig) -> RunManifest:
    """Dispatch a validated config; outputs land atomically, manifest last.

    On any scenario failure every file written so far is removed, so an
    interrupted or failed run leaves no partial artifacts.
    """
    out_dir = os.environ.get(OUTDIR_ENV) or cfg.outputs
    start = time.monotonic()
    writer = OutputWriter(out_dir)
    spec = _density_spec(cfg.density)
    try:
        _SCENARIO_RUNNERS[cfg.scenario](cfg, spec, writer)
    except BaseException:
        writer.discard_all()
        raise
    manifest = RunManifest(
        config=_config_echo(cfg),
        files=list(writer.files),
        version=__version__,
        wall_time_s=time.monotonic() - start,
    )
    writer.write_json(
        "manifest.json",
        {
            "config": manifest.config,
            "files": manifest.files,
            "version": manifest.version,
            "wall_time_s": manifest.wall_time_s,
        },
    )
    return manifest


def validate(path: str) -> ExperimentConfig:
    return load_config(path)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="barypot",
        description="Barycentric interpolation experiments: TOML config in, CSV/JSON out.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a scenario")
    p_run.add_argument("config", help="path to a TOML experiment config")
    p_val = sub.add_parser("validate", help="validate a config without running")
    p_val.add_argument("config", help="path to a TOML experiment config")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3

    if args.command == "validate":
        print(f"ok: {args.config} ({cfg.scenario})")
        return 0

    try:
        manifest = run(cfg)
    except (ConvexityError, QuantileSolveError) as exc:
        print(f"numerical precondition failed: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    for entry in manifest.files:
        print(f"wrote {entry['name']} ({entry['rows']} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
