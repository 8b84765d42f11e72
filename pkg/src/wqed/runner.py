"""Scenario reproduction, parameter sweeps and CSV export.

Every scenario returns deterministic data tables: identical configuration
gives byte-identical CSV files regardless of the worker count (grid points
are evaluated independently and assembled by index). The WQED_THREADS
environment variable caps the worker pool; the default is the available
parallelism.
"""

from __future__ import annotations

import copy
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import (
    DEFAULT_OUTPUTS,
    ScenarioConfig,
    SweepAxis,
    apply_overrides,
    config_from_dict,
    config_to_dict,
)
from .errors import ConfigError, PhysicsError
from .evolve import decompose, propagate, steady_state
from .layout import AtomLayout, coupling_set, make_layout
from .liouvillian import DriveSpec, bell_state, build_model, ket, pure_density
from .observables import (
    concurrence,
    concurrence_batch,
    field_amplitudes,
    g2_zero,
    intensity,
    mandel_q,
)
from .spectral import dressed_states, drive_couplings, transition_rates

__all__ = [
    "Table",
    "SweepResult",
    "run_scenario",
    "sweep",
    "write_tables",
    "SCENARIO_NAMES",
]

SCENARIO_NAMES = (
    "fig1c",
    "fig1d",
    "fig2",
    "fig3a",
    "fig3b",
    "fig4a",
    "fig4b",
    "fig5",
    "figS2",
    "figS3",
    "custom",
)

# shared time grid for decay scenarios: dense early, coarse out to the
# subradiant tail
DECAY_TIMES = np.concatenate(
    [np.linspace(0.0, 20.0, 401), np.arange(22.0, 2502.0, 2.0)]
)


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple
    rows: tuple

    def column(self, name: str) -> np.ndarray:
        idx = self.columns.index(name)
        return np.array([row[idx] for row in self.rows])


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if math.isnan(x):
        return "nan"
    return format(x, ".12g")


def write_tables(tables, outdir) -> list:
    """Write each table as <name>.csv under outdir; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for table in tables:
        path = outdir / f"{table.name}.csv"
        lines = [",".join(table.columns)]
        lines.extend(",".join(_fmt(v) for v in row) for row in table.rows)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
        paths.append(path)
    return paths


def _worker_count() -> int:
    env = os.environ.get("WQED_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as e:
            raise ConfigError(f"WQED_THREADS must be an integer, got {env!r}") from e
        return max(1, n)
    return os.cpu_count() or 1


def _parallel_map(fn, items: list) -> list:
    n = min(_worker_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _layout_of(cfg: ScenarioConfig) -> AtomLayout:
    return make_layout(
        cfg.geometry.kind, cfg.geometry.spacing_over_pi * np.pi, cfg.geometry.gamma0
    )


def _drive_of(cfg: ScenarioConfig) -> DriveSpec:
    return DriveSpec(rabi=cfg.drive.rabi, detuning=cfg.drive.detuning)


def _initial_density(cfg: ScenarioConfig) -> np.ndarray:
    init = cfg.initial_state
    if init.amplitudes is not None:
        psi = np.array([complex(re, im) for re, im in init.amplitudes])
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise ConfigError("initial_state.amplitudes: zero vector")
        return pure_density(psi / norm)
    return _named_density(init.named)


def _named_density(name: str) -> np.ndarray:
    if name == "beta":
        return pure_density(bell_state())
    return pure_density(ket(name))


# ---------------------------------------------------------------------------
# generic sweep engine


@dataclass
class SweepResult:
    """Evaluated grid of steady-state scalars over one or two parameters."""

    param_names: list
    grids: list
    points: list              # tuples of parameter values, C-order over the grids
    observables: dict         # name -> list of floats (nan where a point failed)
    errors: list              # per-point error message or None

    def extremum(self, name: str, mode: str = "max") -> dict:
        values = np.asarray(self.observables[name], dtype=float)
        if np.all(np.isnan(values)):
            raise PhysicsError(f"no valid points for observable {name!r}")
        idx = int(np.nanargmax(values) if mode == "max" else np.nanargmin(values))
        resolution = tuple(
            float(g[1] - g[0]) if len(g) > 1 else 0.0 for g in self.grids
        )
        return {
            "params": self.points[idx],
            "value": float(values[idx]),
            "index": idx,
            "resolution": resolution,
        }

    def to_table(self, name: str, param_columns=None) -> Table:
        cols = list(param_columns or self.param_names) + list(self.observables)
        rows = [
            tuple(point) + tuple(self.observables[k][i] for k in self.observables)
            for i, point in enumerate(self.points)
        ]
        return Table(name=name, columns=tuple(cols), rows=tuple(rows))


def _set_path(d: dict, path: str, value) -> None:
    parts = path.split(".")
    node = d
    for p in parts[:-1]:
        node = node[p]
    node[parts[-1]] = value


def _point_scalars(cfg: ScenarioConfig, outputs) -> dict:
    layout = _layout_of(cfg)
    cs = coupling_set(layout)
    out = {}
    rate_keys = [k for k in outputs if k.startswith("rate_")]
    if rate_keys:
        rates = transition_rates(cs)
        aliases = {
            "rate_e_plus": rates.gamma_e_plus,
            "rate_e_minus": rates.gamma_e_minus,
            "rate_plus_g": rates.gamma_plus_g,
            "rate_minus_g": rates.gamma_minus_g,
        }
        for k in rate_keys:
            out[k] = float(aliases[k])
    state_keys = [k for k in outputs if not k.startswith("rate_")]
    if state_keys:
        model = build_model(cs, _drive_of(cfg))
        rho = steady_state(model).rho
        fields = field_amplitudes(layout, "left")
        beta = bell_state()
        for k in state_keys:
            if k == "concurrence":
                out[k] = concurrence(rho)
            elif k == "p_gg":
                out[k] = float(np.real(rho[0, 0]))
            elif k == "p_ee":
                out[k] = float(np.real(rho[3, 3]))
            elif k == "p_beta":
                out[k] = float(np.real(beta.conj() @ rho @ beta))
            elif k == "intensity":
                out[k] = intensity(rho, fields)
            elif k == "g2_zero":
                out[k] = g2_zero(rho, fields)
            elif k == "mandel_q":
                out[k] = mandel_q(rho, fields)
            elif k in ("p_psi_plus", "p_psi_minus"):
                _, pp, pm, _ = decompose(rho, dressed_states(cs))
                out[k] = pp if k == "p_psi_plus" else pm
            else:
                raise ConfigError(f"unknown observable {k!r}")
    return out


def sweep(cfg: ScenarioConfig) -> SweepResult:
    """Evaluate steady-state observables over the configured parameter grid.

    Physics errors at individual points (degeneracies, dark states) are
    recorded per point and do not abort the sweep.
    """
    if not cfg.sweep:
        raise ConfigError("sweep: configuration has no sweep axes")
    axes = cfg.sweep
    grids = [np.linspace(a.min, a.max, a.points) for a in axes]
    names = [a.parameter for a in axes]
    base = config_to_dict(cfg)
    points = list(itertools.product(*grids))
    outputs = list(cfg.outputs)

    def evaluate(values):
        d = copy.deepcopy(base)
        d.pop("sweep", None)
        for name, value in zip(names, values):
            _set_path(d, name, float(value))
        point_cfg = config_from_dict(d)
        try:
            return _point_scalars(point_cfg, outputs), None
        except PhysicsError as e:
            return {k: math.nan for k in outputs}, str(e)

    results = _parallel_map(evaluate, points)
    observables = {k: [r[0][k] for r in results] for k in outputs}
    errors = [r[1] for r in results]
    return SweepResult(
        param_names=names,
        grids=grids,
        points=[tuple(float(v) for v in p) for p in points],
        observables=observables,
        errors=errors,
    )


# ---------------------------------------------------------------------------
# figure scenarios

STATE_LABELS = ("gg", "ge", "eg", "ee")

TRAJECTORY_COLUMNS = ("t", "p_gg", "p_ge", "p_eg", "p_ee", "p_beta", "concurrence")


def _base_config(**overrides) -> ScenarioConfig:
    d = config_to_dict(ScenarioConfig())
    for path, value in overrides.items():
        _set_path(d, path, value)
    return config_from_dict(d)


def _apply_user(cfg: ScenarioConfig, overrides) -> ScenarioConfig:
    return apply_overrides(cfg, overrides) if overrides else cfg


def _trajectory_table(name: str, cfg: ScenarioConfig) -> Table:
    model = build_model(coupling_set(_layout_of(cfg)), _drive_of(cfg))
    times = np.linspace(0.0, cfg.time.t_max, cfg.time.samples)
    traj = propagate(model, _initial_density(cfg), times)
    beta = bell_state()
    rows = []
    for t, rho in zip(traj.times, traj.states):
        pops = [float(np.real(rho[i, i])) for i in range(4)]
        rows.append(
            (
                float(t),
                pops[0],
                pops[1],
                pops[2],
                pops[3],
                float(np.real(beta.conj() @ rho @ beta)),
                concurrence(rho),
            )
        )
    return Table(name=name, columns=TRAJECTORY_COLUMNS, rows=tuple(rows))


def _scenario_fig1c(overrides) -> list:
    tables = []
    for kind in ("nested", "small"):
        cfg = _base_config(**{
            "geometry.kind": kind,
            "drive.rabi": 1.5,
            "time.t_max": 10000.0,
            "time.samples": 501,
        })
        cfg = _apply_user(cfg, overrides)
        tables.append(_trajectory_table(f"fig1c_{kind}", cfg))
    return tables


def _scenario_fig1d(overrides) -> list:
    cfg = _apply_user(_base_config(**{"drive.rabi": 1.5}), overrides)
    model = build_model(coupling_set(_layout_of(cfg)), _drive_of(cfg))
    rho = steady_state(model).rho
    rows = [
        (STATE_LABELS[i], STATE_LABELS[j], float(rho[i, j].real), float(rho[i, j].imag))
        for i in range(4)
        for j in range(4)
    ]
    return [Table(name="fig1d_nested", columns=("bra", "ket", "re", "im"), rows=tuple(rows))]


def _rates_table(name: str, kind: str, grid: np.ndarray, cfg: ScenarioConfig) -> Table:
    def one(x):
        lay = make_layout(kind, x * np.pi, cfg.geometry.gamma0)
        r = transition_rates(coupling_set(lay))
        return (
            float(x),
            r.gamma_e_plus,
            r.gamma_e_minus,
            r.gamma_plus_g,
            r.gamma_minus_g,
        )

    rows = _parallel_map(one, list(grid))
    return Table(
        name=name,
        columns=("kdx_over_pi", "rate_e_plus", "rate_e_minus", "rate_plus_g", "rate_minus_g"),
        rows=tuple(rows),
    )


def _scenario_fig2(overrides) -> list:
    cfg = _apply_user(_base_config(), overrides)
    grid = np.linspace(0.005, 0.995, 199)
    return [
        _rates_table("fig2_nested", "nested", grid, cfg),
        _rates_table("fig2_small", "small", grid, cfg),
    ]


def _scenario_fig3a(overrides) -> list:
    if overrides:
        raise ConfigError("fig3a is a closed-form curve with no adjustable parameters")
    grid = np.linspace(-10.0, 10.0, 401)
    root2 = math.sqrt(2.0)
    rows = []
    for d_rel in grid:
        op, om = drive_couplings(float(d_rel), 1.0, 1.0)
        rows.append((float(d_rel), op / root2, om / root2))
    return [
        Table(
            name="fig3a",
            columns=("delta_rel", "omega_plus_over_sqrt2", "omega_minus_over_sqrt2"),
            rows=tuple(rows),
        )
    ]


def _concurrence_sweep_table(name: str, cfg: ScenarioConfig) -> Table:
    result = sweep(cfg)
    kdx = cfg.geometry.spacing_over_pi
    if len(result.param_names) == 1:
        rows = tuple(
            (p[0], kdx, c)
            for p, c in zip(result.points, result.observables["concurrence"])
        )
    else:
        rows = tuple(
            (p[1], p[0], c)
            for p, c in zip(result.points, result.observables["concurrence"])
        )
    return Table(
        name=name, columns=("omega0", "kdx_over_pi", "concurrence_ss"), rows=rows
    )


def _scenario_fig3b(overrides) -> list:
    tables = []
    for kind in ("nested", "small"):
        cfg = _base_config(**{"geometry.kind": kind})
        cfg.outputs = ["concurrence"]
        cfg.sweep = [SweepAxis(parameter="drive.rabi", min=0.1, max=4.0, points=60)]
        cfg = _apply_user(cfg, overrides)
        tables.append(_concurrence_sweep_table(f"fig3b_{kind}", cfg))
    return tables


def _scenario_figS2(overrides) -> list:
    tables = []
    for kind in ("separated", "braided"):
        cfg = _base_config(**{"geometry.kind": kind})
        cfg.outputs = ["concurrence"]
        cfg.sweep = [
            SweepAxis(parameter="geometry.spacing_over_pi", min=0.02, max=0.98, points=49),
            SweepAxis(parameter="drive.rabi", min=0.1, max=4.0, points=40),
        ]
        cfg = _apply_user(cfg, overrides)
        tables.append(_concurrence_sweep_table(f"figS2_{kind}", cfg))
    return tables


def _decay_concurrence(kind: str, spacing_over_pi: float, gamma0: float = 1.0):
    lay = make_layout(kind, spacing_over_pi * np.pi, gamma0)
    model = build_model(coupling_set(lay), DriveSpec())
    traj = propagate(model, _named_density("ee"), DECAY_TIMES)
    return traj, concurrence_batch(traj.states)


def _scenario_fig4a(overrides) -> list:
    cfg = _apply_user(_base_config(), overrides)
    grid = np.linspace(0.01, 0.99, 99)
    tables = []
    for kind in ("nested", "small"):
        def one(x, kind=kind):
            _, c = _decay_concurrence(kind, float(x), cfg.geometry.gamma0)
            return (float(x), float(c.max()))

        rows = _parallel_map(one, list(grid))
        tables.append(
            Table(name=f"fig4a_{kind}", columns=("kdx_over_pi", "concurrence"), rows=tuple(rows))
        )
    return tables


FIG4_SPACINGS = {"nested": 0.99, "small": 0.19}


def _scenario_fig4b(overrides) -> list:
    if overrides:
        raise ConfigError("fig4b has fixed operating points; use fig4a or custom")
    tables = []
    for kind, x in FIG4_SPACINGS.items():
        traj, c = _decay_concurrence(kind, x)
        rows = tuple((float(t), float(v)) for t, v in zip(traj.times, c))
        tables.append(Table(name=f"fig4b_{kind}", columns=("t", "concurrence"), rows=rows))
    return tables


def _scenario_figS3(overrides) -> list:
    if overrides:
        raise ConfigError("figS3 has fixed operating points; use custom instead")
    tables = []
    for kind, x in FIG4_SPACINGS.items():
        lay = make_layout(kind, x * np.pi)
        cs = coupling_set(lay)
        model = build_model(cs, DriveSpec())
        traj = propagate(model, _named_density("ee"), DECAY_TIMES)
        dressed = dressed_states(cs)
        rows = []
        for t, rho in zip(traj.times, traj.states):
            _, pp, pm, _ = decompose(rho, dressed)
            rows.append((float(t), pp, pm))
        tables.append(
            Table(name=f"figS3_{kind}", columns=("t", "p_psi_plus", "p_psi_minus"), rows=tuple(rows))
        )
    return tables


def _scenario_fig5(overrides) -> list:
    base = _base_config(**{"drive.rabi": 1.5})
    base = _apply_user(base, overrides)
    # detuning range follows the exchange coupling of the nested geometry
    nested_cs = coupling_set(
        make_layout("nested", base.geometry.spacing_over_pi * np.pi, base.geometry.gamma0)
    )
    d12 = float(nested_cs.Delta[0, 1])
    dets = np.linspace(-2.0 * d12, 2.0 * d12, 81)
    tables = []
    for kind in ("nested", "small"):
        lay = make_layout(kind, base.geometry.spacing_over_pi * np.pi, base.geometry.gamma0)
        cs = coupling_set(lay)
        fields = field_amplitudes(lay, "left")
        beta = bell_state()

        def one(dp):
            rho = steady_state(
                build_model(cs, DriveSpec(rabi=base.drive.rabi, detuning=float(dp)))
            ).rho
            return (
                float(dp),
                g2_zero(rho, fields),
                mandel_q(rho, fields),
                float(np.real(beta.conj() @ rho @ beta)),
                concurrence(rho),
            )

        rows = _parallel_map(one, list(dets))
        tables.append(
            Table(
                name=f"fig5_{kind}",
                columns=("detuning_over_gamma", "g2_zero", "mandel_q", "p_beta", "concurrence"),
                rows=tuple(rows),
            )
        )
    return tables


def _scenario_custom(overrides, cfg: ScenarioConfig | None = None) -> list:
    cfg = cfg if cfg is not None else ScenarioConfig()
    cfg = _apply_user(cfg, overrides)
    if cfg.sweep:
        return [sweep(cfg).to_table("custom_sweep")]
    return [_trajectory_table("custom_trajectory", cfg)]


_SCENARIOS = {
    "fig1c": _scenario_fig1c,
    "fig1d": _scenario_fig1d,
    "fig2": _scenario_fig2,
    "fig3a": _scenario_fig3a,
    "fig3b": _scenario_fig3b,
    "fig4a": _scenario_fig4a,
    "fig4b": _scenario_fig4b,
    "fig5": _scenario_fig5,
    "figS2": _scenario_figS2,
    "figS3": _scenario_figS3,
}


def run_scenario(name: str, overrides=None, config: ScenarioConfig | None = None) -> list:
    """Produce the data tables of a named scenario.

    Overrides (dotted path -> value) are applied on top of the scenario's
    baked-in defaults, per variant. The 'custom' scenario runs entirely from
    the given configuration.
    """
    if name == "custom":
        return _scenario_custom(overrides, cfg=config)
    if name not in _SCENARIOS:
        raise ConfigError(
            f"unknown scenario {name!r}; choose from {', '.join(SCENARIO_NAMES)}"
        )
    return _SCENARIOS[name](overrides)
