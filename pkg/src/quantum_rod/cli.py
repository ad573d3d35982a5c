"""Command-line front end.

Every computation in the package is exposed as a subcommand with
machine-readable output:

    spectrum     levels and pairing columns for one barrier height
    wkb-compare  numerical levels against the semiclassical predictions
    summit       quantization through the barrier-top region
    airy         linear-well eigenvalue table (exact zeros vs their
                 semiclassical estimates)
    fall-time    classical and quantum fall-time estimates for a rod
    evolve       wavepacket propagation observables
    slant        two-level response of a doublet to a table tilt

Configuration precedence is flags > JSON config file > defaults; pass
--config FILE to load a flat JSON object whose keys are the flag names
with underscores.  Output is a JSON envelope {config, results,
provenance} or a CSV table with a header row, written to --output or
stdout.  All numbers are rounded to --precision significant digits
(round-half-even), and a given configuration always produces
byte-identical output.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any

import numpy as np

from . import __version__
from . import airy as airy_mod
from . import dynamics, slanted, summit, wkb
from .errors import (
    DomainError,
    InsufficientBasisError,
    InvalidParameterError,
    RegimeError,
    ResolutionError,
    StepSizeError,
)
from .spectrum import make_grid, pairing_table, solve_spectrum
from .units import RodParams, derive_scales

_CONFIG_ERRORS = (InvalidParameterError, DomainError)
_NUMERICAL_ERRORS = (ResolutionError, RegimeError, InsufficientBasisError,
                     StepSizeError)

# (flag, type, default, help); None default means optional/absent
_COMMON = [
    ("config", str, None, "JSON file with default option values"),
    ("format", str, "json", "output format: json or csv"),
    ("output", str, None, "output file (default stdout)"),
    ("precision", int, 9, "significant digits in output, 3..15"),
]

_ROD = [
    ("mass", float, None, "rod mass in kg"),
    ("length", float, None, "rod length in m"),
    ("gravity", float, 9.81, "gravitational acceleration in m/s^2"),
]

_SCHEMAS: dict[str, list[tuple[str, type, Any, str]]] = {
    "spectrum": _COMMON + _ROD + [
        ("B", float, None, "dimensionless barrier height 2J*V0/hbar^2"),
        ("n-levels", int, 10, "number of levels (both parities combined)"),
        ("grid-n", int, 4001, "base grid size (odd)"),
        ("tilt", float, 0.0, "table tilt delta_theta in rad"),
    ],
    "wkb-compare": _COMMON + _ROD + [
        ("B", float, None, "dimensionless barrier height"),
        ("n-min", int, 0, "first doublet index"),
        ("n-max", int, 9, "last doublet index"),
        ("grid-n", int, 4001, "base grid size (odd)"),
    ],
    "summit": _COMMON + _ROD + [
        ("B", float, None, "dimensionless barrier height"),
        ("n-min", int, None, "first per-parity level index (default: near summit)"),
        ("n-max", int, None, "last per-parity level index"),
        ("grid-n", int, 4001, "base grid size (odd)"),
        ("xi-match", float, 3.0, "matching point of the parabolic region"),
    ],
    "airy": _COMMON + [
        ("count", int, 6, "number of levels"),
        ("B", float, None, "optional barrier height for energy columns"),
    ],
    "fall-time": _COMMON + _ROD + [
        ("delta-theta", float, None, "classical release angle in rad"),
        ("alpha", float, None, "initial width sigma/s for the spreading time"),
    ],
    "evolve": _COMMON + _ROD + [
        ("B", float, None, "dimensionless barrier height"),
        ("sigma", float, 0.05, "initial Gaussian width in rad"),
        ("t-max", float, 5.0, "final time in 1/omega_c"),
        ("n-times", int, 26, "number of output times"),
        ("dt", float, 0.001, "direct-integrator step bound in 1/omega_c"),
        ("method", str, "eigen", "propagator: eigen, direct, or both"),
        ("grid-n", int, 2001, "grid size (odd)"),
        ("n-levels", int, 200, "eigenbasis size"),
    ],
    "slant": _COMMON + _ROD + [
        ("B", float, None, "dimensionless barrier height"),
        ("n", int, 18, "doublet index"),
        ("tilts", float, [1e-3], "tilt values delta_theta in rad"),
        ("grid-n", int, 4001, "base grid size (odd)"),
    ],
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantum-rod",
        description="spectrum, tunneling, and fall dynamics of a rod "
                    "balanced on a table",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="subcommand", required=True)
    for name, schema in _SCHEMAS.items():
        sp = subs.add_parser(name, help=f"run the {name} computation")
        for flag, typ, default, text in schema:
            kwargs: dict[str, Any] = {"type": typ, "default": None, "help": text}
            if flag == "format":
                kwargs["choices"] = ["json", "csv"]
            if flag == "method":
                kwargs["choices"] = ["eigen", "direct", "both"]
            if flag == "tilts":
                kwargs["nargs"] = "+"
            sp.add_argument(f"--{flag}", **kwargs)
    return parser


def resolve_config(args: argparse.Namespace) -> dict[str, Any]:
    """Merge flags over the config file over defaults into one flat dict."""
    schema = _SCHEMAS[args.subcommand]
    file_values: dict[str, Any] = {}
    config_path = getattr(args, "config", None)
    if config_path is not None:
        try:
            with open(config_path) as fh:
                file_values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidParameterError(f"cannot read config file: {exc}") from exc
        if not isinstance(file_values, dict):
            raise InvalidParameterError("config file must hold a JSON object")

    cfg: dict[str, Any] = {"subcommand": args.subcommand}
    for flag, typ, default, _ in schema:
        if flag == "config":
            continue
        key = flag.replace("-", "_")
        value = getattr(args, key)
        if value is None:
            value = file_values.get(key, default)
        if value is not None and flag == "tilts":
            value = [float(v) for v in np.atleast_1d(value)]
        elif value is not None and not isinstance(value, typ):
            value = typ(value)
        cfg[key] = value

    unknown = set(file_values) - {f.replace("-", "_") for f, *_ in schema}
    if unknown:
        raise InvalidParameterError(f"unknown config keys: {sorted(unknown)}")
    if not 3 <= cfg["precision"] <= 15:
        raise InvalidParameterError("precision must be in [3, 15]")
    if cfg["format"] not in ("json", "csv"):
        raise InvalidParameterError("format must be json or csv")
    return cfg


def _resolve_barrier(cfg: dict[str, Any], required: bool = True) -> float:
    """Barrier height from either --B or the rod parameters, never both."""
    have_rod = cfg.get("mass") is not None or cfg.get("length") is not None
    if cfg.get("B") is not None:
        if have_rod:
            raise InvalidParameterError(
                "give either --B or the rod parameters, not both")
        return float(cfg["B"])
    if have_rod:
        scales = derive_scales(_rod_params(cfg))
        return scales.B
    if required:
        raise InvalidParameterError("need --B or --mass and --length")
    return math.nan


def _rod_params(cfg: dict[str, Any]) -> RodParams:
    if cfg.get("mass") is None or cfg.get("length") is None:
        raise InvalidParameterError("need both --mass and --length")
    return RodParams(mass=cfg["mass"], length=cfg["length"],
                     gravity=cfg["gravity"])


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns (results dict, csv header, csv rows)

Payload = tuple[dict[str, Any], list[str], list[list[Any]]]


def run_spectrum(cfg: dict[str, Any]) -> Payload:
    B = _resolve_barrier(cfg)
    result = solve_spectrum(B, cfg["n_levels"], grid_n=cfg["grid_n"],
                            tilt=cfg["tilt"])
    by_even_n = {}
    if cfg["tilt"] == 0.0:
        by_even_n = {d.n: d for d in pairing_table(result)}

    header = ["n", "parity", "energy", "splitting", "gap", "pairing_ratio"]
    rows = []
    entries = []
    for level in result.levels:
        d = by_even_n.get(level.index) if level.parity == "even" else None
        row = [level.index, level.parity or "none", level.energy,
               d.splitting if d else None,
               d.gap if d else None,
               d.pairing_ratio if d else None]
        rows.append(row)
        entries.append(dict(zip(header, row)))
    return {"levels": entries}, header, rows


def run_wkb_compare(cfg: dict[str, Any]) -> Payload:
    B = _resolve_barrier(cfg)
    n_min, n_max = cfg["n_min"], cfg["n_max"]
    if not 0 <= n_min <= n_max:
        raise InvalidParameterError("need 0 <= n-min <= n-max")

    if B == 0.0:
        # free well: each level is its own row, E = n^2 exactly
        count = n_max + 1
        result = solve_spectrum(B, count, grid_n=cfg["grid_n"])
        header = ["n", "energy", "energy_wkb"]
        rows = [[k + 1, result.energies[k], wkb.high_energy_quantize(k + 1, B)]
                for k in range(count)]
        return {"levels": [dict(zip(header, r)) for r in rows]}, header, rows

    result = solve_spectrum(B, 2 * (n_max + 1) + 2, grid_n=cfg["grid_n"])
    doublets = pairing_table(result)
    if n_max >= len(doublets):
        raise RegimeError(f"doublet {n_max} not resolved by the eigensolve")

    header = ["n", "center", "center_wkb", "splitting", "splitting_wkb",
              "regime"]
    rows = []
    for n in range(n_min, n_max + 1):
        d = doublets[n]
        try:
            pred = wkb.doublet_prediction(n, B)
            center_wkb, split_wkb, regime = pred.center, pred.splitting, pred.regime
        except RegimeError:
            lo = wkb.high_energy_quantize(2 * n + 1, B)
            hi = wkb.high_energy_quantize(2 * n + 2, B)
            center_wkb, split_wkb = 0.5 * (lo + hi), hi - lo
            regime = wkb.ABOVE_BARRIER
        rows.append([n, d.center, center_wkb, d.splitting, split_wkb, regime])
    return {"doublets": [dict(zip(header, r)) for r in rows]}, header, rows


def run_summit(cfg: dict[str, Any]) -> Payload:
    B = _resolve_barrier(cfg)
    n_summit = int(wkb.max_well_action(B) / math.pi - 0.75)
    n_min = cfg["n_min"] if cfg["n_min"] is not None else max(0, n_summit - 2)
    n_max = cfg["n_max"] if cfg["n_max"] is not None else n_summit + 2
    if not 0 <= n_min <= n_max:
        raise InvalidParameterError("need 0 <= n-min <= n-max")

    result = solve_spectrum(B, 2 * (n_max + 1) + 4, grid_n=cfg["grid_n"])
    hw = math.sqrt(2.0 * B)
    header = ["n", "parity", "epsilon", "energy_model", "energy", "error"]
    rows = []
    for n in range(n_min, n_max + 1):
        for parity in ("even", "odd"):
            e_model = summit.summit_quantize(n, B, parity,
                                             xi_match=cfg["xi_match"])
            e_num = result.level(parity, n).energy
            rows.append([n, parity, (e_model - B) / hw, e_model, e_num,
                         e_model - e_num])
    return {"levels": [dict(zip(header, r)) for r in rows]}, header, rows


def run_airy(cfg: dict[str, Any]) -> Payload:
    count = cfg["count"]
    if count < 1:
        raise InvalidParameterError("count must be >= 1")
    B = cfg.get("B")
    header = ["n", "lambda_wkb", "lambda"]
    if B is not None:
        header += ["energy_wkb", "energy"]
    rows = []
    for n in range(count):
        lam_wkb = airy_mod.wkb_lambda(n)
        lam = airy_mod.airy_zero(n)
        row = [n, lam_wkb, lam]
        if B is not None:
            row += [airy_mod.linear_well_energy(n, B, exact=False),
                    airy_mod.linear_well_energy(n, B)]
        rows.append(row)
    return {"levels": [dict(zip(header, r)) for r in rows]}, header, rows


def run_fall_time(cfg: dict[str, Any]) -> Payload:
    scales = derive_scales(_rod_params(cfg))
    t_prime = dynamics.quantum_fall_time_estimate(scales)
    t_wkb = dynamics.quantum_fall_time_wkb(scales)
    results: dict[str, Any] = {
        "scales": {"omega_c": scales.omega_c, "B": scales.B, "s": scales.s},
        "quantum_estimate": {"omega_c_units": t_prime.omega_c_units,
                             "seconds": t_prime.seconds},
        "quantum_wkb": {"omega_c_units": t_wkb.omega_c_units,
                        "seconds": t_wkb.seconds,
                        "terms": t_wkb.terms},
    }
    if cfg["delta_theta"] is not None:
        t_cl = dynamics.classical_fall_time(cfg["delta_theta"])
        results["classical"] = {
            "delta_theta": t_cl.delta_theta,
            "exact_omega_c_units": t_cl.exact,
            "asymptotic_omega_c_units": t_cl.asymptotic,
            "exact_seconds": t_cl.exact / scales.omega_c,
        }
    if cfg["alpha"] is not None:
        t_sp = dynamics.spreading_time(cfg["alpha"], scales)
        results["spreading"] = {"alpha": t_sp.alpha,
                                "omega_c_units": t_sp.omega_c_units,
                                "seconds": t_sp.seconds}

    header = ["quantity", "value"]
    rows = [["omega_c", scales.omega_c], ["B", scales.B], ["s", scales.s],
            ["t_q_prime_omega_c_units", t_prime.omega_c_units],
            ["t_q_prime_seconds", t_prime.seconds],
            ["t_q_omega_c_units", t_wkb.omega_c_units],
            ["t_q_seconds", t_wkb.seconds]]
    if "classical" in results:
        c = results["classical"]
        rows += [["t_classical_exact_omega_c_units", c["exact_omega_c_units"]],
                 ["t_classical_asymptotic_omega_c_units",
                  c["asymptotic_omega_c_units"]],
                 ["t_classical_exact_seconds", c["exact_seconds"]]]
    if "spreading" in results:
        rows += [["t_spread_omega_c_units", results["spreading"]["omega_c_units"]],
                 ["t_spread_seconds", results["spreading"]["seconds"]]]
    return results, header, rows


def run_evolve(cfg: dict[str, Any]) -> Payload:
    B = _resolve_barrier(cfg)
    if cfg["t_max"] <= 0.0 or cfg["n_times"] < 2:
        raise InvalidParameterError("need t-max > 0 and n-times >= 2")
    times = np.linspace(0.0, cfg["t_max"], cfg["n_times"])
    method = cfg["method"]

    res_eigen = res_direct = None
    if method in ("eigen", "both"):
        # refine=False so both propagators step the same discrete operator
        basis = solve_spectrum(B, cfg["n_levels"], grid_n=cfg["grid_n"],
                               refine=False)
        state = dynamics.prepare_gaussian(cfg["sigma"],
                                          basis.wavefunctions[0].grid)
        coeffs = dynamics.expand(state, basis)
        res_eigen = dynamics.evolve_eigen(coeffs, basis, times,
                                          snapshot_times=times)
    if method in ("direct", "both"):
        state = dynamics.prepare_gaussian(cfg["sigma"],
                                          make_grid(cfg["grid_n"]))
        res_direct = dynamics.evolve_direct(state, B, cfg["dt"], times,
                                            snapshot_times=times)

    main_res = res_eigen if res_eigen is not None else res_direct
    header = ["time", "norm", "energy", "mean_abs_theta", "fall_prob"]
    rows = [[t, main_res.norm[i], main_res.energy[i],
             main_res.mean_abs_theta[i], main_res.fall_prob[i]]
            for i, t in enumerate(times)]
    if method == "both":
        header.append("l2_distance")
        grid = make_grid(cfg["grid_n"])
        from scipy.integrate import simpson
        for i in range(len(times)):
            diff = res_eigen.snapshots[i] - res_direct.snapshots[i]
            rows[i].append(math.sqrt(float(
                simpson(np.abs(diff) ** 2, x=grid))))
    return {"method": method,
            "series": [dict(zip(header, r)) for r in rows]}, header, rows


def run_slant(cfg: dict[str, Any]) -> Payload:
    B = _resolve_barrier(cfg)
    n = cfg["n"]
    basis = solve_spectrum(B, 2 * (n + 1) + 4, grid_n=cfg["grid_n"])
    responses = slanted.tilt_sweep(basis, n, np.asarray(cfg["tilts"]))
    header = ["delta_theta", "coupling", "effective_splitting",
              "p_left_lower", "regime_upper", "regime_lower"]
    rows = [[r.delta_theta, r.coupling, r.effective_splitting,
             r.p_left_lower, r.regime["upper"], r.regime["lower"]]
            for r in responses]
    return {"doublet": n, "sweep": [dict(zip(header, r)) for r in rows]}, \
        header, rows


_DISPATCH = {
    "spectrum": run_spectrum,
    "wkb-compare": run_wkb_compare,
    "summit": run_summit,
    "airy": run_airy,
    "fall-time": run_fall_time,
    "evolve": run_evolve,
    "slant": run_slant,
}


# ---------------------------------------------------------------------------
# Output


def _round_value(value: Any, precision: int) -> Any:
    """Round floats to the output precision; make everything JSON-safe."""
    if isinstance(value, dict):
        return {k: _round_value(v, precision) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_value(v, precision) for v in value]
    if isinstance(value, np.ndarray):
        return [_round_value(v, precision) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            return repr(v)
        return float(f"{v:.{precision}g}")
    return value


def _csv_cell(value: Any, precision: int) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{precision}g}"
    return str(value)


def emit(cfg: dict[str, Any], results: dict[str, Any],
         header: list[str], rows: list[list[Any]]) -> str:
    precision = cfg["precision"]
    if cfg["format"] == "json":
        doc = {
            "config": _round_value({k: v for k, v in cfg.items()
                                    if k not in ("output",)}, precision),
            "results": _round_value(results, precision),
            "provenance": {"version": __version__},
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v, precision) for v in row])
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        results, header, rows = _DISPATCH[args.subcommand](cfg)
        text = emit(cfg, results, header, rows)
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    if cfg["output"] is not None:
        with open(cfg["output"], "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
