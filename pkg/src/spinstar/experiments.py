"""Declarative experiments that regenerate figure data as CSV.

An experiment file is INI-style with three sections::

    [experiment]
    kind = SigmaZ
    output = sigma_z.csv
    initial_state = ket1

    [model]
    omega0 = 2
    ...

    [grid]
    start = 0
    stop = 25
    points = 500

Overrides are ``key=value`` or ``section.key=value`` strings and win over
the file.
"""

from __future__ import annotations

import ast
import configparser
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .dynamics import Trajectory, evolve_single, evolve_two_qubit
from .errors import CapExceeded, ConfigParse, ImpureInitialState, SpinStarError
from .measures import (concurrence, entropies, qsl_curve, qsl_time,
                       quantum_discord, trace_distances)
from .models import SZ, CouplingAxis, ModelConfig, Scenario, TwoQubitConfig

SINGLE_CAP = 200
GLOBAL_CAP = 20
BUNDLED_DIR = Path(__file__).parent / "experiments"


class Kind(enum.Enum):
    SigmaZ = "SigmaZ"
    TraceDistanceSingle = "TraceDistanceSingle"
    TraceDistanceTwoGlobal = "TraceDistanceTwoGlobal"
    TraceDistanceTwoLocal = "TraceDistanceTwoLocal"
    EntropySingle = "EntropySingle"
    EntropyTwo = "EntropyTwo"
    QslSweepEpsilon = "QslSweepEpsilon"
    QslSweepTau = "QslSweepTau"
    CorrelationsTimeLocal = "CorrelationsTimeLocal"
    CorrelationsTimeGlobal = "CorrelationsTimeGlobal"
    CorrelationsSweepDelta = "CorrelationsSweepDelta"
    ConcurrenceCouplingAxis = "ConcurrenceCouplingAxis"


SINGLE_KINDS = {Kind.SigmaZ, Kind.TraceDistanceSingle, Kind.EntropySingle,
                Kind.QslSweepEpsilon, Kind.QslSweepTau}

COLUMNS = {
    Kind.SigmaZ: ["t", "sigma_z"],
    Kind.TraceDistanceSingle: ["t", "trace_distance"],
    Kind.TraceDistanceTwoGlobal: ["t", "trace_distance"],
    Kind.TraceDistanceTwoLocal: ["t", "trace_distance"],
    Kind.EntropySingle: ["t", "entropy_interacting", "entropy_noninteracting"],
    Kind.EntropyTwo: ["t", "entropy_interacting", "entropy_noninteracting"],
    Kind.QslSweepEpsilon: ["epsilon", "n_bath", "tau_qsl", "bures_angle",
                           "lambda_op", "lambda_hs", "lambda_tr"],
    Kind.QslSweepTau: ["tau", "n_bath", "tau_qsl", "bures_angle",
                       "lambda_op", "lambda_hs", "lambda_tr"],
    Kind.CorrelationsTimeLocal: ["t", "tau_qsl", "concurrence", "discord"],
    Kind.CorrelationsTimeGlobal: ["t", "tau_qsl", "concurrence", "discord"],
    Kind.CorrelationsSweepDelta: ["delta", "tau_qsl", "concurrence", "discord"],
    Kind.ConcurrenceCouplingAxis: ["t", "concurrence"],
}

SINGLE_KEYS = {"omega0": float, "omega": float, "epsilon": float, "n_bath": None,
               "temperature": float, "bath_interacting": bool}
TWO_KEYS = {"omega1": float, "omega2": float, "omega_a": float, "omega_b": float,
            "eps1": float, "eps2": float, "delta": float, "m_bath": int, "n_bath": int,
            "temperature": float, "bath_interacting": bool, "scenario": Scenario,
            "coupling_axis": CouplingAxis}
EXPERIMENT_KEYS = {"kind", "output", "initial_state", "tau", "quad_per_unit",
                   "flip_sigma_z", "entropy_base", "description"}
GRID_KEYS = {"start", "stop", "points"}

DEFAULTS = {"quad_per_unit": 1000, "flip_sigma_z": False, "entropy_base": "natural",
            "scenario": Scenario.GLOBAL, "coupling_axis": CouplingAxis.ZZ, "delta": 0.0}


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.points < 2:
            raise ConfigParse(f"grid needs at least 2 points, got {self.points}")
        if not self.start < self.stop:
            raise ConfigParse(f"grid start {self.start} must be below stop {self.stop}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass
class ExperimentSpec:
    kind: Kind
    params: dict
    grid: Grid
    initial_state: object = None
    output_path: str = "out.csv"
    tau: Optional[float] = None
    quad_per_unit: int = 1000
    flip_sigma_z: bool = False
    entropy_base: str = "natural"
    description: str = ""
    n_bath_list: tuple = field(default=())


# --- parsing -----------------------------------------------------------------

_BOOL = {"true": True, "yes": True, "1": True, "on": True,
         "false": False, "no": False, "0": False, "off": False}


def _convert(key: str, raw: str, typ):
    try:
        if typ is bool:
            return _BOOL[raw.strip().lower()]
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
        if isinstance(typ, type) and issubclass(typ, enum.Enum):
            return typ(raw.strip().lower())
    except (KeyError, ValueError) as exc:
        raise ConfigParse(f"bad value {raw!r} for {key}") from exc
    return raw.strip()


def _apply_overrides(cp: configparser.ConfigParser, overrides: Iterable[str]) -> None:
    for item in overrides:
        if "=" not in item:
            raise ConfigParse(f"override {item!r} is not key=value")
        key, value = (s.strip() for s in item.split("=", 1))
        if "." in key:
            section, key = key.split(".", 1)
        elif key in EXPERIMENT_KEYS:
            section = "experiment"
        elif key in GRID_KEYS:
            section = "grid"
        else:
            section = "model"
        if not cp.has_section(section):
            cp.add_section(section)
        cp.set(section, key, value)


def named_state(name: str) -> np.ndarray:
    name = name.strip().lower()
    if name == "ket1":
        return np.diag([0.0, 1.0]).astype(complex)
    if name == "ket11":
        return np.diag([0.0, 0.0, 0.0, 1.0]).astype(complex)
    if name in ("bell_phi_plus", "bellphiplus", "phi_plus"):
        v = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
        return np.outer(v, v.conj())
    raise ConfigParse(f"unknown initial state {name!r}")


def _parse_state(raw: str) -> np.ndarray:
    raw = raw.strip()
    if raw.startswith("["):
        try:
            return np.array(ast.literal_eval(raw), dtype=complex)
        except (ValueError, SyntaxError) as exc:
            raise ConfigParse(f"cannot parse initial state matrix {raw!r}") from exc
    return named_state(raw)


def load_spec(path, overrides: Sequence[str] = ()) -> ExperimentSpec:
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except configparser.Error as exc:
        raise ConfigParse(str(exc)) from exc
    _apply_overrides(cp, overrides)
    spec = parse_config(cp)
    if "output" not in cp["experiment"]:
        spec.output_path = Path(path).with_suffix(".csv").name
    return spec


def parse_text(text: str, overrides: Sequence[str] = ()) -> ExperimentSpec:
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigParse(str(exc)) from exc
    _apply_overrides(cp, overrides)
    return parse_config(cp)


def parse_config(cp: configparser.ConfigParser) -> ExperimentSpec:
    for section in ("experiment", "model", "grid"):
        if not cp.has_section(section):
            raise ConfigParse(f"missing [{section}] section")
    exp, model, grid = cp["experiment"], cp["model"], cp["grid"]
    unknown = set(exp) - EXPERIMENT_KEYS
    if unknown:
        raise ConfigParse(f"unknown experiment keys {sorted(unknown)}")
    try:
        kind = Kind(exp["kind"].strip())
    except (KeyError, ValueError) as exc:
        raise ConfigParse(f"unknown or missing kind {exp.get('kind')!r}") from exc

    keys = SINGLE_KEYS if kind in SINGLE_KINDS else TWO_KEYS
    unknown = set(model) - set(keys)
    if unknown:
        raise ConfigParse(f"unknown model keys {sorted(unknown)} for {kind.value}")
    params = {}
    n_list: tuple = ()
    for key, typ in keys.items():
        if key in model:
            if key == "n_bath" and typ is None:
                try:
                    n_list = tuple(int(x) for x in model[key].split(","))
                except ValueError as exc:
                    raise ConfigParse(f"bad n_bath {model[key]!r}") from exc
                params[key] = n_list[0]
            else:
                params[key] = _convert(key, model[key], typ)
        elif key in DEFAULTS:
            params[key] = DEFAULTS[key]
        elif key == "bath_interacting" and kind in (
                Kind.TraceDistanceSingle, Kind.TraceDistanceTwoGlobal,
                Kind.TraceDistanceTwoLocal, Kind.EntropySingle, Kind.EntropyTwo):
            params[key] = True  # both variants are computed
        else:
            raise ConfigParse(f"missing model key {key!r} for {kind.value}")

    try:
        g = Grid(float(grid["start"]), float(grid["stop"]), int(grid["points"]))
    except (KeyError, ValueError) as exc:
        raise ConfigParse(f"grid needs numeric start, stop, points: {exc}") from exc

    spec = ExperimentSpec(
        kind=kind, params=params, grid=g,
        initial_state=_parse_state(exp["initial_state"]) if "initial_state" in exp else None,
        output_path=exp.get("output", "out.csv"),
        tau=_convert("tau", exp["tau"], float) if "tau" in exp else None,
        quad_per_unit=_convert("quad_per_unit", exp.get("quad_per_unit", "1000"), int),
        flip_sigma_z=_convert("flip_sigma_z", exp.get("flip_sigma_z", "false"), bool),
        entropy_base=exp.get("entropy_base", "natural").strip(),
        description=exp.get("description", "").strip(),
        n_bath_list=n_list or ((params["n_bath"],) if "n_bath" in params else ()),
    )
    validate_spec(spec)
    return spec


def validate_spec(spec: ExperimentSpec) -> None:
    kind, p = spec.kind, spec.params
    if kind in (Kind.QslSweepEpsilon, Kind.CorrelationsSweepDelta):
        if spec.tau is None or not spec.tau > 0:
            raise ConfigParse(f"{kind.value} needs a positive tau")
    if spec.quad_per_unit < 1:
        raise ConfigParse("quad_per_unit must be >= 1")
    if spec.entropy_base not in ("natural", "two"):
        raise ConfigParse("entropy_base must be 'natural' or 'two'")
    if kind not in (Kind.QslSweepEpsilon, Kind.CorrelationsSweepDelta) and spec.grid.start < 0:
        raise ConfigParse("time grids must start at t >= 0")
    if kind in SINGLE_KINDS:
        sizes = spec.n_bath_list
        if any(n > SINGLE_CAP for n in sizes):
            raise CapExceeded(f"n_bath {max(sizes)} exceeds the cap of {SINGLE_CAP}")
        if len(sizes) > 1 and kind not in (Kind.QslSweepEpsilon, Kind.QslSweepTau):
            raise ConfigParse(f"{kind.value} takes a single n_bath")
    else:
        local = kind is Kind.TraceDistanceTwoLocal or kind is Kind.CorrelationsTimeLocal or (
            kind is Kind.EntropyTwo and p["scenario"] is Scenario.LOCAL)
        cap = SINGLE_CAP if local else GLOBAL_CAP
        if max(p["m_bath"], p["n_bath"]) > cap:
            raise CapExceeded(f"bath size {max(p['m_bath'], p['n_bath'])} exceeds the cap of {cap}")
    # building the configs validates temperatures and sizes
    try:
        _configs(spec)
    except SpinStarError as exc:
        if isinstance(exc, CapExceeded):
            raise
        raise ConfigParse(str(exc)) from exc
    if spec.initial_state is not None:
        dim = 2 if kind in SINGLE_KINDS else 4
        if np.shape(spec.initial_state) != (dim, dim):
            raise ConfigParse(f"initial state must be {dim}x{dim} for {kind.value}")


def _configs(spec: ExperimentSpec):
    p = dict(spec.params)
    if spec.kind in SINGLE_KINDS:
        return [ModelConfig(p["omega0"], p["omega"], p["epsilon"], n, p["temperature"],
                            p["bath_interacting"]) for n in spec.n_bath_list]
    scenario = p["scenario"]
    if spec.kind in (Kind.TraceDistanceTwoLocal, Kind.CorrelationsTimeLocal):
        scenario = Scenario.LOCAL
    elif spec.kind in (Kind.TraceDistanceTwoGlobal, Kind.CorrelationsTimeGlobal,
                       Kind.CorrelationsSweepDelta, Kind.ConcurrenceCouplingAxis):
        scenario = Scenario.GLOBAL
    return [TwoQubitConfig(p["omega1"], p["omega2"], p["omega_a"], p["omega_b"], p["eps1"],
                           p["eps2"], p["delta"], p["m_bath"], p["n_bath"], p["temperature"],
                           p["bath_interacting"], scenario, p["coupling_axis"])]


# --- running -----------------------------------------------------------------

def _default_state(kind: Kind) -> np.ndarray:
    if kind in SINGLE_KINDS:
        return named_state("ket1")
    if kind in (Kind.CorrelationsTimeLocal, Kind.CorrelationsTimeGlobal, Kind.CorrelationsSweepDelta):
        return named_state("bell_phi_plus")
    return named_state("ket11")


def pure_vector(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    if abs(w[-1] - 1) > 1e-8:
        raise ImpureInitialState("the speed limit needs a pure initial state")
    return v[:, -1]


def _fine_grid(grid: Grid, quad_per_unit: int):
    """Uniform quadrature grid from 0 that contains every output point.

    Returns the fine times and the indices of the output points in it, or
    None when the output grid does not sit on a lattice through 0.
    """
    step = (grid.stop - grid.start) / (grid.points - 1)
    offset = grid.start / step
    if abs(offset - round(offset)) > 1e-9:
        return None
    k = max(1, math.ceil(quad_per_unit * step))
    first = int(round(offset)) * k
    n_fine = first + (grid.points - 1) * k + 1
    fine = np.linspace(0.0, grid.stop, n_fine)
    return fine, first + k * np.arange(grid.points)


def _quad_times(tau: float, quad_per_unit: int) -> np.ndarray:
    return np.linspace(0.0, tau, max(2, math.ceil(quad_per_unit * tau)) + 1)


def _qsl_row(r) -> list:
    return [r.tau_qsl, r.bures_angle, r.lambda_op, r.lambda_hs, r.lambda_tr]


Rows = list[list]


def _map(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _variants(cfg):
    return replace(cfg, bath_interacting=True), replace(cfg, bath_interacting=False)


def compute(spec: ExperimentSpec, threads: int = 1,
            qsl_log: Optional[list] = None) -> tuple[list[str], Rows]:
    """Evaluate an experiment, returning the CSV header and rows.

    For kinds that report a speed-limit time, the full :class:`QslResult`
    behind every row is appended to ``qsl_log`` when one is given.
    """
    log = qsl_log if qsl_log is not None else []
    kind = spec.kind
    rho0 = spec.initial_state if spec.initial_state is not None else _default_state(kind)
    cfgs = _configs(spec)
    cfg = cfgs[0]
    t = spec.grid.values()

    def evolve(c, times, gens=False) -> Trajectory:
        if isinstance(c, ModelConfig):
            return evolve_single(c, rho0, times, gens)
        return evolve_two_qubit(c, rho0, times, gens)

    if kind is Kind.SigmaZ:
        sign = -1.0 if spec.flip_sigma_z else 1.0
        traj = evolve(cfg, t)
        sz = sign * np.einsum("ij,tji->t", SZ, traj.states).real
        return COLUMNS[kind], [[a, b] for a, b in zip(t, sz)]

    if kind in (Kind.TraceDistanceSingle, Kind.TraceDistanceTwoGlobal, Kind.TraceDistanceTwoLocal):
        ci, cn = _variants(cfg)
        a, b = _map(lambda c: evolve(c, t), [ci, cn], threads)
        return COLUMNS[kind], [[x, y] for x, y in zip(t, trace_distances(a.states, b.states))]

    if kind in (Kind.EntropySingle, Kind.EntropyTwo):
        ci, cn = _variants(cfg)
        a, b = _map(lambda c: evolve(c, t), [ci, cn], threads)
        sa = entropies(a.states, spec.entropy_base)
        sb = entropies(b.states, spec.entropy_base)
        return COLUMNS[kind], [[x, y, z] for x, y, z in zip(t, sa, sb)]

    psi0 = pure_vector(rho0) if kind is not Kind.ConcurrenceCouplingAxis else None

    if kind is Kind.QslSweepEpsilon:
        jobs = [(n, e) for n in spec.n_bath_list for e in t]

        def one(job):
            n, e = job
            c = replace(cfg, n_bath=n, epsilon=float(e))
            traj = evolve(c, _quad_times(spec.tau, spec.quad_per_unit), True)
            return qsl_time(traj, psi0, spec.tau)
        results = _map(one, jobs, threads)
        log.extend(results)
        return COLUMNS[kind], [[e, n] + _qsl_row(r) for (n, e), r in zip(jobs, results)]

    if kind is Kind.QslSweepTau:

        def per_n(n):
            c = replace(cfg, n_bath=n)
            return _qsl_along(lambda times: evolve(c, times, True), psi0, spec)
        rows = []
        for n, results in zip(spec.n_bath_list, _map(per_n, spec.n_bath_list, threads)):
            log.extend(results)
            rows += [[r.tau, n] + _qsl_row(r) for r in results]
        return COLUMNS[kind], rows

    if kind in (Kind.CorrelationsTimeLocal, Kind.CorrelationsTimeGlobal):
        fine = _fine_grid(spec.grid, spec.quad_per_unit)
        if fine is None:
            raise ConfigParse("correlation time grids must lie on a lattice through t = 0")
        times, idx = fine
        traj = evolve(cfg, times, True)
        qsl = qsl_curve(traj, psi0, idx)
        log.extend(qsl)
        states = traj.states[idx]
        corr = _map(lambda s: (concurrence(s), quantum_discord(s).discord), list(states), threads)
        return COLUMNS[kind], [[x, q.tau_qsl, c, d] for x, q, (c, d) in zip(t, qsl, corr)]

    if kind is Kind.CorrelationsSweepDelta:
        times = _quad_times(spec.tau, spec.quad_per_unit)

        def one(delta):
            c = replace(cfg, delta=float(delta))
            traj = evolve(c, times, True)
            r = qsl_time(traj, psi0, spec.tau)
            s = traj.states[-1]
            return r, concurrence(s), quantum_discord(s).discord
        results = _map(one, list(t), threads)
        log.extend(r for r, _, _ in results)
        return COLUMNS[kind], [[d, r.tau_qsl, c, q] for d, (r, c, q) in zip(t, results)]

    if kind is Kind.ConcurrenceCouplingAxis:
        traj = evolve(cfg, t)
        return COLUMNS[kind], [[x, concurrence(s)] for x, s in zip(t, traj.states)]

    raise ConfigParse(f"unhandled kind {kind}")  # pragma: no cover


def _qsl_along(evolve_fn, psi0, spec: ExperimentSpec):
    fine = _fine_grid(spec.grid, spec.quad_per_unit)
    if fine is not None:
        times, idx = fine
        return qsl_curve(evolve_fn(times), psi0, idx)
    return [qsl_time(evolve_fn(_quad_times(tau, spec.quad_per_unit)), psi0, tau)
            for tau in spec.grid.values()]


def format_value(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def write_csv(path, header: Sequence[str], rows: Rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(format_value(v) for v in row) for row in rows]
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def run(spec: ExperimentSpec, output: Optional[str] = None, threads: int = 1) -> Path:
    header, rows = compute(spec, threads)
    path = Path(output or spec.output_path)
    write_csv(path, header, rows)
    return path


def bundled_specs() -> list[Path]:
    return sorted(BUNDLED_DIR.glob("*.ini"))
