"""Command-line front end.

Subcommands: decoherence, lee-yang, trace-distance, cpf, pip, sbs, purity,
sweep.  Every run reads one YAML configuration (see ``config``), writes a
delimited result file plus a JSON metadata sidecar with the fully resolved
configuration, and optionally renders a figure next to the data.

Output is deterministic: floats are printed with 17 significant digits,
lines end with a bare newline, and sweep cells are emitted in cell-index
order no matter how many worker threads computed them.

Exit codes: 0 success, 2 configuration error, 3 numeric or internal
consistency error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from itertools import product

import numpy as np

from . import __version__
from .bath import BathParams, bath_purity
from .config import ConfigError, RunConfig, SweepSpec, load_config
from .dephasing import SystemParams, decoherence_function, decoherence_rate, evolve_qubit
from .envinfo import FragmentSpec, joint_state_general, joint_state_noninteracting, \
    mutual_information, pip_curve, sbs_diagnostics, von_neumann_entropy
from .errors import InternalConsistencyError, NumericError
from .leeyang import critical_times, zeros_interacting, zeros_numeric
from .witnesses import blp_witness_series, cpf_formula, cpf_oracle, probe_pair

_ORACLE_SITE_LIMIT = 20


# ---------------------------------------------------------------------------
# deterministic writers
# ---------------------------------------------------------------------------

def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value) + 0.0, ".17g")  # +0.0 folds -0.0 into 0.0
    return str(value)


def _write_csv(path: str, columns: list[str], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_format_cell(v) for v in row) + "\n")


def _write_json(path: str, columns: list[str], rows: list[tuple]) -> None:
    payload = {
        "columns": columns,
        "rows": [[None if isinstance(v, float) and math.isnan(v) else
                  (bool(v) if isinstance(v, bool) else
                   (int(v) if isinstance(v, (int, np.integer)) else float(v)))
                  if not isinstance(v, str) else v
                  for v in row] for row in rows],
    }
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _write_sidecar(path: str, subcommand: str, cfg: RunConfig, extra: dict) -> None:
    meta = {
        "subcommand": subcommand,
        "version": __version__,
        "config": cfg.resolved,
        **extra,
    }
    with open(path + ".meta.json", "w", encoding="utf-8", newline="") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# analyses
# ---------------------------------------------------------------------------

def _run_decoherence(cfg: RunConfig):
    gamma = decoherence_function(cfg.bath, cfg.system.alpha, cfg.times)
    rate = decoherence_rate(cfg.bath, cfg.system.alpha, cfg.times)
    rows = [(float(t), g.real, g.imag, abs(g), float(r))
            for t, g, r in zip(cfg.times, gamma, rate)]
    return ["t", "re_gamma", "im_gamma", "abs_gamma", "rate"], rows, {}


def _run_lee_yang(cfg: RunConfig):
    bath = cfg.bath
    if bath.coupling > 0.0 and bath.beta > 0.0:
        zeros = zeros_interacting(bath)
    else:
        zeros = zeros_numeric(bath)
    times = critical_times(bath, cfg.system.alpha) if bath.field == 0.0 or bath.beta == 0.0 \
        else []
    pad = [math.nan] * max(0, len(zeros) - len(times))
    rows = [
        (z.index, z.value.real, z.value.imag, z.angle, z.multiplicity, t)
        for z, t in zip(zeros, list(times) + pad)
    ]
    return ["index", "re_z", "im_z", "angle", "multiplicity", "critical_time"], rows, {
        "n_zeros": len(zeros), "n_critical_times": len(times)}


def _run_trace_distance(cfg: RunConfig):
    sys1, sys2 = probe_pair(cfg.system.alpha)
    series = blp_witness_series(sys1, sys2, cfg.bath, cfg.times)
    rows = [(float(t), float(d), float(r))
            for t, d, r in zip(series.times, series.values, series.rates)]
    return ["t", "trace_distance", "sigma"], rows, {"blp_measure": series.blp_measure}


def _run_cpf(cfg: RunConfig):
    with_oracle = cfg.bath.n_sites <= _ORACLE_SITE_LIMIT
    oracle_state = SystemParams(cfg.system.alpha, 1.0 + 0.0j, 0.0j)
    rows = []
    for t in cfg.times:
        for s in cfg.s_times:
            formula = cpf_formula(cfg.bath, cfg.system.alpha, float(t), float(s))
            oracle = math.nan
            if with_oracle:
                oracle = cpf_oracle(oracle_state, cfg.bath, float(t), float(s)).value_oracle
            rows.append((float(t), float(s), formula.value_formula, oracle))
    return ["t", "s", "cpf_formula", "cpf_oracle"], rows, {
        "oracle_computed": with_oracle,
        "oracle_initial_state": "|0>",
        "conditioning_outcome": "plus",
    }


def _run_pip(cfg: RunConfig):
    t = float(cfg.times[-1])
    betas = cfg.beta_list
    if betas is None:
        curve = pip_curve(cfg.system, cfg.bath, t)
        rows = [(float(f), float(i), curve.system_entropy)
                for f, i in zip(curve.fractions, curve.mutual_info)]
        return ["fraction", "mutual_info_bits", "system_entropy_bits"], rows, {"t": t}
    rows = []
    for beta in betas:
        curve = pip_curve(cfg.system, replace(cfg.bath, beta=beta), t)
        rows.extend((beta, float(f), float(i), curve.system_entropy)
                    for f, i in zip(curve.fractions, curve.mutual_info))
    return ["beta", "fraction", "mutual_info_bits", "system_entropy_bits"], rows, {"t": t}


def _run_sbs(cfg: RunConfig):
    frag = FragmentSpec.first(cfg.fragment_size, cfg.bath.n_sites)
    rows = []
    for t in cfg.times:
        if cfg.bath.coupling == 0.0:
            state = joint_state_noninteracting(cfg.system, cfg.bath, frag, float(t))
        else:
            state = joint_state_general(cfg.system, cfg.bath, frag, float(t))
        report = sbs_diagnostics(state, cfg.system)
        rows.append((float(t), report.coherence_trace_norm,
                     report.conditional_fidelity, report.sbs))
    return ["t", "coherence_trace_norm", "conditional_fidelity", "sbs_flag"], rows, {
        "fragment_size": cfg.fragment_size, "tolerance": 1e-6}


def _run_purity(cfg: RunConfig):
    betas = cfg.beta_list if cfg.beta_list is not None else tuple(cfg.beta_grid)
    rows = [(float(beta), bath_purity(replace(cfg.bath, beta=float(beta))))
            for beta in betas]
    return ["beta", "purity"], rows, {}


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _sweep_cell(cfg: RunConfig, spec: SweepSpec, values: tuple[float, ...]):
    overrides = dict(zip([name for name, _ in spec.axes], values))
    bath = cfg.bath
    for name in ("beta", "coupling", "field"):
        if name in overrides:
            bath = replace(bath, **{name: overrides[name]})
    if "n_sites" in overrides:
        bath = replace(bath, n_sites=int(overrides["n_sites"]))
    alpha = overrides.get("alpha", cfg.system.alpha)
    t = overrides.get("t", float(cfg.times[-1]))
    s = overrides.get("s", float(cfg.s_times[-1]))

    if spec.analysis == "decoherence":
        g = decoherence_function(bath, alpha, t)
        return (g.real, g.imag, abs(g), decoherence_rate(bath, alpha, t))
    if spec.analysis == "trace-distance":
        sys1, sys2 = probe_pair(alpha)
        from .witnesses import trace_distance
        return (trace_distance(evolve_qubit(sys1, bath, t), evolve_qubit(sys2, bath, t)),)
    if spec.analysis == "cpf":
        formula = cpf_formula(bath, alpha, t, s).value_formula
        if bath.n_sites <= _ORACLE_SITE_LIMIT:
            oracle_state = SystemParams(alpha, 1.0 + 0.0j, 0.0j)
            oracle = cpf_oracle(oracle_state, bath, t, s).value_oracle
        else:
            oracle = math.nan
        return (formula, oracle)
    if spec.analysis == "purity":
        return (bath_purity(bath),)
    raise ConfigError(f"sweep.analysis: unsupported analysis {spec.analysis!r}")


_SWEEP_VALUE_COLUMNS = {
    "decoherence": ["re_gamma", "im_gamma", "abs_gamma", "rate"],
    "trace-distance": ["trace_distance"],
    "cpf": ["cpf_formula", "cpf_oracle"],
    "purity": ["purity"],
}


def _run_sweep(cfg: RunConfig, threads: int):
    spec = cfg.sweep
    if spec is None:
        raise ConfigError("sweep: missing sweep block in the configuration")
    axis_names = [name for name, _ in spec.axes]
    cells = list(product(*[values for _, values in spec.axes]))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda cell: _sweep_cell(cfg, spec, cell), cells))
    else:
        results = [_sweep_cell(cfg, spec, cell) for cell in cells]
    rows = [tuple(cell) + tuple(result) for cell, result in zip(cells, results)]
    columns = axis_names + _SWEEP_VALUE_COLUMNS[spec.analysis]
    return columns, rows, {"analysis": spec.analysis, "n_cells": len(cells)}


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinbath",
        description="Exact qubit dephasing against a thermal Ising ring: "
                    "decoherence curves, Lee-Yang zeros, non-Markovianity "
                    "witnesses and environment-information reports.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in [
        ("decoherence", "decoherence function on a time grid"),
        ("lee-yang", "partition-function zeros and critical times"),
        ("trace-distance", "BLP witness series for the |+>/|-> probe pair"),
        ("cpf", "conditional past-future correlator on a (t, s) grid"),
        ("pip", "mutual information against fragment fraction"),
        ("sbs", "broadcast-structure diagnostics on a time grid"),
        ("purity", "bath purity against inverse temperature"),
        ("sweep", "Cartesian parameter sweep of a scalar analysis"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", default=None, help="YAML run configuration")
        cmd.add_argument("--out", required=True, help="output file path")
        cmd.add_argument("--format", choices=("csv", "json"), default="csv")
        cmd.add_argument("--threads", type=int, default=None,
                         help="worker threads (default: SPINBATH_THREADS or 1)")
        cmd.add_argument("--plot", action="store_true",
                         help="render a PNG figure next to the output file")
    return parser


_RUNNERS = {
    "decoherence": _run_decoherence,
    "lee-yang": _run_lee_yang,
    "trace-distance": _run_trace_distance,
    "cpf": _run_cpf,
    "pip": _run_pip,
    "sbs": _run_sbs,
    "purity": _run_purity,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("SPINBATH_THREADS", "1"))
    if threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        cfg = load_config(args.config)
        if args.subcommand == "sweep":
            columns, rows, extra = _run_sweep(cfg, threads)
        else:
            columns, rows, extra = _RUNNERS[args.subcommand](cfg)
        writer = _write_csv if args.format == "csv" else _write_json
        writer(args.out, columns, rows)
        _write_sidecar(args.out, args.subcommand, cfg, extra)
        if args.plot:
            from . import plotting
            root, _ = os.path.splitext(args.out)
            plotting.render(args.subcommand, columns, rows, root + ".png")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (InternalConsistencyError, NumericError, np.linalg.LinAlgError,
            FloatingPointError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
