"""Run configuration: a small YAML file with nested blocks.

Blocks and keys (all optional, defaults in parentheses):

    bath:     coupling (1.0), field (0.1), beta (1.0), n_sites (10)
    system:   alpha (0.1), a_re/a_im/b_re/b_im (|+>), omega (0.0)
    grid:     t_min (0.0), t_max (one recoherence period), t_steps (201),
              s_min/s_max/s_steps (copy the t grid), beta_list (unset),
              beta_min/beta_max/beta_steps (0..4, 81; used by `purity`)
    fragment: size (n_sites // 2)
    sweep:    analysis, axes {name: list | {min, max, steps}}, cap (10^6)

Amplitudes off unit norm by at most 1e-6 are renormalized with a warning;
anything worse is rejected.  Validation failures raise ConfigError naming
the offending field.
"""

from __future__ import annotations

import math
import sys as _sys
from dataclasses import dataclass, field as dataclass_field
from typing import Any

import numpy as np
import yaml

from .bath import BathParams
from .dephasing import SystemParams, recoherence_period

__all__ = ["ConfigError", "RunConfig", "SweepSpec", "load_config"]

_AMP_SLACK = 1e-6
_SWEEP_AXES = ("beta", "coupling", "field", "n_sites", "alpha", "t", "s")
_SWEEP_ANALYSES = ("decoherence", "trace-distance", "cpf", "purity")


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass(frozen=True)
class SweepSpec:
    analysis: str
    axes: tuple[tuple[str, tuple[float, ...]], ...]
    cap: int = 1_000_000

    def n_cells(self) -> int:
        out = 1
        for _, values in self.axes:
            out *= len(values)
        return out


@dataclass(frozen=True)
class RunConfig:
    bath: BathParams
    system: SystemParams
    times: np.ndarray
    s_times: np.ndarray
    beta_list: tuple[float, ...] | None
    beta_grid: np.ndarray
    fragment_size: int
    sweep: SweepSpec | None
    resolved: dict = dataclass_field(repr=False, default_factory=dict)


def _get(block: dict, block_name: str, key: str, default, kind):
    value = block.get(key, default)
    try:
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{block_name}.{key}: cannot read {value!r} as {kind.__name__}") from exc


def _axis_values(name: str, spec: Any) -> tuple[float, ...]:
    if isinstance(spec, (list, tuple)):
        return tuple(float(v) for v in spec)
    if isinstance(spec, dict):
        for needed in ("min", "max", "steps"):
            if needed not in spec:
                raise ConfigError(f"sweep.axes.{name}: missing {needed!r}")
        steps = int(spec["steps"])
        if steps < 1:
            raise ConfigError(f"sweep.axes.{name}.steps: must be >= 1, got {steps}")
        return tuple(float(v) for v in np.linspace(float(spec["min"]), float(spec["max"]), steps))
    raise ConfigError(f"sweep.axes.{name}: expected a list or a min/max/steps mapping")


def load_config(path: str | None) -> RunConfig:
    """Read and validate a configuration file; ``None`` yields the defaults."""
    raw: dict = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            loaded = yaml.safe_load(fh)
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"top level of {path} must be a mapping")
        raw = loaded

    for block_name in raw:
        if block_name not in ("bath", "system", "grid", "fragment", "sweep"):
            raise ConfigError(f"unknown configuration block {block_name!r}")

    bath_block = raw.get("bath", {}) or {}
    try:
        bath = BathParams(
            coupling=_get(bath_block, "bath", "coupling", 1.0, float),
            field=_get(bath_block, "bath", "field", 0.1, float),
            beta=_get(bath_block, "bath", "beta", 1.0, float),
            n_sites=_get(bath_block, "bath", "n_sites", 10, int),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"bath: {exc}") from exc

    system_block = raw.get("system", {}) or {}
    root_half = 1.0 / math.sqrt(2.0)
    alpha = _get(system_block, "system", "alpha", 0.1, float)
    a = complex(_get(system_block, "system", "a_re", root_half, float),
                _get(system_block, "system", "a_im", 0.0, float))
    b = complex(_get(system_block, "system", "b_re", root_half, float),
                _get(system_block, "system", "b_im", 0.0, float))
    omega = _get(system_block, "system", "omega", 0.0, float)
    norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
    if abs(norm - 1.0) > _AMP_SLACK:
        raise ConfigError(
            f"system.a/system.b: |a|^2 + |b|^2 = {norm**2:.9g} is off unit norm "
            f"by more than {_AMP_SLACK}")
    if norm != 1.0:
        if abs(norm - 1.0) > 1e-15:
            print(f"warning: renormalizing amplitudes (norm deviation {norm - 1.0:.3e})",
                  file=_sys.stderr)
        a /= norm
        b /= norm
    try:
        system = SystemParams(alpha=alpha, a=a, b=b, omega=omega)
    except ValueError as exc:
        raise ConfigError(f"system: {exc}") from exc

    grid_block = raw.get("grid", {}) or {}
    t_min = _get(grid_block, "grid", "t_min", 0.0, float)
    t_max = _get(grid_block, "grid", "t_max",
                 recoherence_period(alpha) if alpha > 0 else 1.0, float)
    t_steps = _get(grid_block, "grid", "t_steps", 201, int)
    if t_steps < 2:
        raise ConfigError(f"grid.t_steps: must be >= 2, got {t_steps}")
    if not (t_max > t_min >= 0.0):
        raise ConfigError(f"grid.t_min/t_max: need t_max > t_min >= 0, got [{t_min}, {t_max}]")
    times = np.linspace(t_min, t_max, t_steps)

    s_min = _get(grid_block, "grid", "s_min", t_min, float)
    s_max = _get(grid_block, "grid", "s_max", t_max, float)
    s_steps = _get(grid_block, "grid", "s_steps", t_steps, int)
    if s_steps < 2:
        raise ConfigError(f"grid.s_steps: must be >= 2, got {s_steps}")
    if not (s_max > s_min >= 0.0):
        raise ConfigError(f"grid.s_min/s_max: need s_max > s_min >= 0, got [{s_min}, {s_max}]")
    s_times = np.linspace(s_min, s_max, s_steps)

    beta_list = grid_block.get("beta_list")
    if beta_list is not None:
        if not isinstance(beta_list, (list, tuple)) or not beta_list:
            raise ConfigError("grid.beta_list: expected a non-empty list")
        beta_list = tuple(float(v) for v in beta_list)
        if any(v < 0 for v in beta_list):
            raise ConfigError("grid.beta_list: entries must be >= 0")

    beta_min = _get(grid_block, "grid", "beta_min", 0.0, float)
    beta_max = _get(grid_block, "grid", "beta_max", 4.0, float)
    beta_steps = _get(grid_block, "grid", "beta_steps", 81, int)
    if beta_steps < 2 or not (beta_max > beta_min >= 0.0):
        raise ConfigError("grid.beta_min/beta_max/beta_steps: need max > min >= 0 and steps >= 2")
    beta_grid = np.linspace(beta_min, beta_max, beta_steps)

    fragment_block = raw.get("fragment", {}) or {}
    fragment_size = _get(fragment_block, "fragment", "size", bath.n_sites // 2, int)
    if not 0 <= fragment_size <= bath.n_sites:
        raise ConfigError(
            f"fragment.size: must lie in 0..{bath.n_sites}, got {fragment_size}")

    sweep = None
    if "sweep" in raw:
        sweep_block = raw["sweep"] or {}
        analysis = sweep_block.get("analysis")
        if analysis not in _SWEEP_ANALYSES:
            raise ConfigError(
                f"sweep.analysis: expected one of {_SWEEP_ANALYSES}, got {analysis!r}")
        axes_block = sweep_block.get("axes")
        if not isinstance(axes_block, dict) or not axes_block:
            raise ConfigError("sweep.axes: expected a non-empty mapping of axis name to values")
        axes = []
        for name, spec in axes_block.items():
            if name not in _SWEEP_AXES:
                raise ConfigError(f"sweep.axes.{name}: unknown axis (allowed: {_SWEEP_AXES})")
            axes.append((name, _axis_values(name, spec)))
        cap = _get(sweep_block, "sweep", "cap", 1_000_000, int)
        sweep = SweepSpec(analysis=analysis, axes=tuple(axes), cap=cap)
        if sweep.n_cells() > cap:
            raise ConfigError(
                f"sweep.axes: {sweep.n_cells()} cells exceed the cap of {cap}")

    resolved = {
        "bath": {"coupling": bath.coupling, "field": bath.field,
                 "beta": bath.beta, "n_sites": bath.n_sites, "boundary": bath.boundary},
        "system": {"alpha": system.alpha, "a_re": system.a.real, "a_im": system.a.imag,
                   "b_re": system.b.real, "b_im": system.b.imag, "omega": system.omega},
        "grid": {"t_min": t_min, "t_max": t_max, "t_steps": t_steps,
                 "s_min": s_min, "s_max": s_max, "s_steps": s_steps,
                 "beta_list": list(beta_list) if beta_list else None,
                 "beta_min": beta_min, "beta_max": beta_max, "beta_steps": beta_steps},
        "fragment": {"size": fragment_size},
        "sweep": None if sweep is None else {
            "analysis": sweep.analysis,
            "axes": {name: list(values) for name, values in sweep.axes},
            "cap": sweep.cap,
        },
    }
    return RunConfig(bath=bath, system=system, times=times, s_times=s_times,
                     beta_list=beta_list, beta_grid=beta_grid,
                     fragment_size=fragment_size, sweep=sweep, resolved=resolved)
