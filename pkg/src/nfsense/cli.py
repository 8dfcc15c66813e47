"""Command-line front end.

Commands
--------
tables           half-power coefficients, mode ratios and sidelobe levels
af-curve         normalized power vs probe range from the closed forms
beamdepth-sweep  beamdepth vs target range, with divergence metadata
validate         direct element summation vs closed forms on broadside
dump-geometry    element positions of one array as CSV

Outputs are CSV (''#''-prefixed metadata lines, then a header row) or JSON
(a metadata object plus an array of row records).  Identical inputs give
byte-identical output.  Exit codes: 0 success, 1 usage error, 2 validation
failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .ambiguity import broadside_power_sweep
from .closed_form import (GeometryKind, ProcessingMode, af_argument,
                          normalized_af_power, vergence_difference)
from .geometry import (build_array, export_geometry_csv, fraunhofer_distance,
                       simo_miso_setup)
from .metrics import (beamdepth, compute_metrics, half_power_coefficient,
                      half_power_distances, max_nearfield_range)

DB_FLOOR = -60.0
DEVIATION_THRESHOLD = 0.02  # of the unit mainlobe peak
CROSSING_THRESHOLD = 0.03   # relative, in distance

_DEFAULTS = {
    "kind": "ula,uca,ura,upca",
    "mode": "both",
    "aperture_lambda": 50.0,
    "target_lambda": 100.0,
    "wavelength": 1.0,
    "format": "csv",
    "out": "-",
}
_SWEEP_DEFAULTS = {
    "af-curve": "50:400:2000",
    "beamdepth-sweep": "10:1200:500",
    "validate": "0:0:3001",  # validate picks its own window; only points used
}


class UsageError(Exception):
    pass


class ValidationFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    kinds: list
    modes: list
    aperture_lambda: float
    target_lambda: float
    wavelength: float
    sweep: tuple
    out: str
    fmt: str


def _parse_kinds(text: str) -> list:
    names = [t.strip().lower() for t in text.split(",") if t.strip()]
    if not names:
        raise UsageError("at least one geometry kind is required")
    kinds = []
    for name in names:
        try:
            kind = GeometryKind(name)
        except ValueError:
            raise UsageError(f"unknown kind {name!r} (choose from ula, uca, ura, upca)")
        if kind not in kinds:
            kinds.append(kind)
    return kinds


def _parse_modes(text: str) -> list:
    key = text.strip().lower().replace("-", "_")
    table = {
        "simo": [ProcessingMode.SIMO_MISO],
        "miso": [ProcessingMode.SIMO_MISO],
        "simo_miso": [ProcessingMode.SIMO_MISO],
        "mimo": [ProcessingMode.MIMO],
        "both": [ProcessingMode.SIMO_MISO, ProcessingMode.MIMO],
    }
    if key not in table:
        raise UsageError(f"unknown mode {text!r} (choose simo, mimo or both)")
    return table[key]


def _parse_sweep(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"sweep must be start:stop:points, got {text!r}")
    try:
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad sweep value {text!r}")
    if points < 2:
        raise UsageError("sweep needs at least 2 points")
    if not (start < stop or (start == stop == 0.0)):
        raise UsageError("sweep start must be below stop")
    return start, stop, points


def _parse_positive(text, name: str) -> float:
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise UsageError(f"{name} must be a number, got {text!r}")
    if not value > 0:
        raise UsageError(f"{name} must be positive, got {value}")
    return value


def _load_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key = value")
                key, _, value = line.partition("=")
                key = key.strip().lower().replace("-", "_")
                values[key] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}")
    known = set(_DEFAULTS) | {"sweep"}
    for key in values:
        if key not in known:
            raise UsageError(f"unknown config key {key!r} in {path}")
    return values


def _resolve(args, key: str, file_values: dict):
    cli_value = getattr(args, key.replace("-", "_"), None)
    if cli_value is not None:
        return cli_value
    if key in file_values:
        return file_values[key]
    if key == "sweep":
        return _SWEEP_DEFAULTS.get(args.command, "0:0:2")
    return _DEFAULTS[key]


def _build_config(args) -> RunConfig:
    file_values = _load_config_file(args.config) if args.config else {}
    return RunConfig(
        command=args.command,
        kinds=_parse_kinds(str(_resolve(args, "kind", file_values))),
        modes=_parse_modes(str(_resolve(args, "mode", file_values))),
        aperture_lambda=_parse_positive(
            _resolve(args, "aperture_lambda", file_values), "aperture-lambda"),
        target_lambda=_parse_positive(
            _resolve(args, "target_lambda", file_values), "target-lambda"),
        wavelength=_parse_positive(
            _resolve(args, "wavelength", file_values), "wavelength"),
        sweep=_parse_sweep(str(_resolve(args, "sweep", file_values))),
        out=str(_resolve(args, "out", file_values)),
        fmt=str(_resolve(args, "format", file_values)).lower(),
    )


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return f"{value:.12g}"
    if isinstance(value, GeometryKind):
        return value.name
    if isinstance(value, ProcessingMode):
        return value.name
    return str(value)


def _jsonable(value):
    if isinstance(value, float):
        return "inf" if math.isinf(value) else value
    if isinstance(value, (GeometryKind, ProcessingMode)):
        return value.name
    return value


def _emit(config: RunConfig, metadata: dict, rows: list) -> None:
    if config.fmt not in ("csv", "json"):
        raise UsageError(f"unknown format {config.fmt!r} (choose csv or json)")
    try:
        stream = sys.stdout if config.out == "-" else open(config.out, "w",
                                                           encoding="utf-8",
                                                           newline="")
        try:
            if config.fmt == "csv":
                for key, value in metadata.items():
                    stream.write(f"# {key} = {_fmt(value)}\n")
                writer = csv.writer(stream, lineterminator="\n")
                if rows:
                    writer.writerow(list(rows[0].keys()))
                    for row in rows:
                        writer.writerow([_fmt(v) for v in row.values()])
            else:
                doc = {
                    "metadata": {k: _jsonable(v) for k, v in metadata.items()},
                    "rows": [{k: _jsonable(v) for k, v in row.items()}
                             for row in rows],
                }
                json.dump(doc, stream, indent=2, allow_nan=False)
                stream.write("\n")
        finally:
            if stream is not sys.stdout:
                stream.close()
    except OSError as exc:
        raise IOError(f"cannot write output {config.out!r}: {exc}") from exc


def _base_metadata(config: RunConfig) -> dict:
    return {"tool": "nfsense", "version": __version__, "command": config.command}


def cmd_tables(config: RunConfig) -> int:
    metadata = _base_metadata(config)
    metadata["x3db_tolerance"] = 1e-9
    metadata["sidelobe_scan_max_x"] = 50.0
    rows = []
    for kind in config.kinds:
        m = compute_metrics(kind)
        rows.append({
            "kind": m.kind, "argument_scale": m.argument_scale,
            "x3db_simo": m.x3db_simo, "x3db_mimo": m.x3db_mimo,
            "alpha_simo": m.alpha_simo, "alpha_mimo": m.alpha_mimo,
            "alpha_ratio": m.alpha_ratio,
            "psl_simo_db": m.psl_simo_db, "psl_mimo_db": m.psl_mimo_db,
        })
    _emit(config, metadata, rows)
    return 0


def cmd_af_curve(config: RunConfig) -> int:
    lam = config.wavelength
    d_target = config.target_lambda * lam
    aperture = config.aperture_lambda * lam
    d_fa = 2.0 * aperture ** 2 / lam
    start, stop, points = config.sweep
    distances = np.linspace(start * lam, stop * lam, points)
    if distances[0] <= 0:
        raise UsageError("probe distances must be positive")
    metadata = _base_metadata(config)
    metadata.update({
        "lambda_m": lam, "aperture_m": aperture, "target_m": d_target,
        "fraunhofer_m": d_fa, "db_floor": DB_FLOOR,
    })
    for kind in config.kinds:
        for mode in config.modes:
            metadata[f"alpha[{kind.name},{mode.name}]"] = \
                half_power_coefficient(kind, mode)
    rows = []
    for kind in config.kinds:
        x = kind.argument_scale * d_fa * np.abs(1.0 / d_target - 1.0 / distances)
        for mode in config.modes:
            power = normalized_af_power(kind, mode, x)
            db = 10.0 * np.log10(np.maximum(power, 1e-300))
            db = np.maximum(db, DB_FLOOR)
            for dist, val in zip(distances, db):
                rows.append({"kind": kind, "mode": mode,
                             "distance_m": float(dist), "power_db": float(val)})
    _emit(config, metadata, rows)
    return 0


def cmd_beamdepth_sweep(config: RunConfig) -> int:
    lam = config.wavelength
    aperture = config.aperture_lambda * lam
    d_fa = 2.0 * aperture ** 2 / lam
    start, stop, points = config.sweep
    targets = np.linspace(start * lam, stop * lam, points)
    if targets[0] <= 0:
        raise UsageError("target distances must be positive")
    metadata = _base_metadata(config)
    metadata.update({"lambda_m": lam, "aperture_m": aperture, "fraunhofer_m": d_fa})
    rows = []
    for kind in config.kinds:
        for mode in config.modes:
            coeff = half_power_coefficient(kind, mode)
            metadata[f"alpha[{kind.name},{mode.name}]"] = coeff
            metadata[f"max_nf_range_m[{kind.name},{mode.name}]"] = \
                max_nearfield_range(d_fa, coeff)
    for kind in config.kinds:
        for mode in config.modes:
            coeff = half_power_coefficient(kind, mode)
            for d in targets:
                rows.append({"kind": kind, "mode": mode, "target_m": float(d),
                             "beamdepth_m": beamdepth(float(d), d_fa, coeff)})
    _emit(config, metadata, rows)
    return 0


def _validate_series(kind: GeometryKind, config: RunConfig) -> list:
    """Exact vs closed-form comparison rows for one geometry, both modes."""
    lam = config.wavelength
    geometry = build_array(kind, config.aperture_lambda * lam, lam)
    d_fa = fraunhofer_distance(geometry)
    d_target = config.target_lambda * lam
    setup = simo_miso_setup(geometry)
    points = max(config.sweep[2], 201)
    rows = []
    for mode in config.modes:
        coeff = half_power_coefficient(kind, mode)
        d_low, d_high = half_power_distances(d_target, d_fa, coeff)
        if math.isinf(d_high):
            raise ValidationFailure(
                f"{kind.name}: target beyond the maximum near-field range; "
                "no finite mainlobe to validate")
        grid = np.linspace(d_low, d_high, points)
        exact = broadside_power_sweep(setup, d_target, grid) ** mode.power_exponent
        x = np.array([af_argument(kind, d_fa, vergence_difference(d_target, d))
                      for d in grid])
        closed = normalized_af_power(kind, mode, x)
        deviation = np.abs(exact - closed)
        rel = deviation / closed
        # locate the exact half-power crossings around the target
        wide = np.linspace(0.85 * d_low, 1.15 * d_high, 4 * points)
        wide = wide[wide > 1e-9]
        exact_wide = broadside_power_sweep(setup, d_target, wide) ** mode.power_exponent
        lower = _crossing(wide, exact_wide, d_target, upper=False)
        upper = _crossing(wide, exact_wide, d_target, upper=True)
        err_low = abs(lower - d_low) / d_low if lower is not None else math.inf
        err_high = abs(upper - d_high) / d_high if upper is not None else math.inf
        ok = (deviation.max() <= DEVIATION_THRESHOLD
              and err_low <= CROSSING_THRESHOLD and err_high <= CROSSING_THRESHOLD)
        rows.append({
            "kind": kind, "mode": mode, "elements": geometry.n_elements,
            "aperture_m": geometry.aperture, "fraunhofer_m": d_fa,
            "d3db_low_m": d_low, "d3db_high_m": d_high,
            "max_peak_deviation": float(deviation.max()),
            "max_rel_error": float(rel.max()),
            "crossing_low_rel_err": err_low, "crossing_high_rel_err": err_high,
            "status": "pass" if ok else "fail",
        })
    return rows


def _crossing(distances, power, d_target, upper: bool):
    """Interpolated half-power crossing adjacent to the target range."""
    above = power >= 0.5
    if upper:
        idx = np.where((distances[:-1] > d_target) & above[:-1] & ~above[1:])[0]
        if idx.size == 0:
            return None
        i = int(idx[0])
    else:
        idx = np.where((distances[1:] < d_target) & ~above[:-1] & above[1:])[0]
        if idx.size == 0:
            return None
        i = int(idx[-1])
    p0, p1 = power[i], power[i + 1]
    return float(distances[i] + (0.5 - p0) / (p1 - p0)
                 * (distances[i + 1] - distances[i]))


def cmd_validate(config: RunConfig) -> int:
    metadata = _base_metadata(config)
    metadata.update({
        "lambda_m": config.wavelength,
        "aperture_lambda": config.aperture_lambda,
        "target_lambda": config.target_lambda,
        "deviation_threshold": DEVIATION_THRESHOLD,
        "crossing_threshold": CROSSING_THRESHOLD,
    })
    rows = []
    for kind in config.kinds:
        rows.extend(_validate_series(kind, config))
    _emit(config, metadata, rows)
    failed = [r for r in rows if r["status"] == "fail"]
    for r in rows:
        print(f"validate {r['kind'].name:4s} {r['mode'].name:9s} "
              f"peak-deviation {r['max_peak_deviation']:.4f} "
              f"crossings {r['crossing_low_rel_err']:.4f}/"
              f"{r['crossing_high_rel_err']:.4f} {r['status']}",
              file=sys.stderr)
    if failed:
        raise ValidationFailure(
            f"{len(failed)} of {len(rows)} series exceeded thresholds")
    return 0


def cmd_dump_geometry(config: RunConfig) -> int:
    if len(config.kinds) != 1:
        raise UsageError("dump-geometry takes exactly one kind")
    geometry = build_array(config.kinds[0],
                           config.aperture_lambda * config.wavelength,
                           config.wavelength)
    try:
        stream = sys.stdout if config.out == "-" else open(config.out, "w",
                                                           encoding="utf-8",
                                                           newline="")
        try:
            export_geometry_csv(geometry, stream)
        finally:
            if stream is not sys.stdout:
                stream.close()
    except OSError as exc:
        raise IOError(f"cannot write output {config.out!r}: {exc}") from exc
    return 0


_COMMANDS = {
    "tables": cmd_tables,
    "af-curve": cmd_af_curve,
    "beamdepth-sweep": cmd_beamdepth_sweep,
    "validate": cmd_validate,
    "dump-geometry": cmd_dump_geometry,
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="nfsense", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version",
                        version=f"nfsense {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--kind", help="comma-separated: ula,uca,ura,upca")
        p.add_argument("--mode", help="simo, mimo or both")
        p.add_argument("--aperture-lambda", help="aperture D in wavelengths")
        p.add_argument("--target-lambda", help="target range d' in wavelengths")
        p.add_argument("--wavelength", help="wavelength in meters")
        p.add_argument("--sweep", help="grid as start:stop:points (wavelengths)")
        p.add_argument("--format", help="csv or json")
        p.add_argument("--out", help="output path, - for stdout")
        p.add_argument("--config", help="key = value file with flag defaults")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required (see --help)")
        config = _build_config(args)
        return _COMMANDS[config.command](config)
    except UsageError as exc:
        print(f"nfsense: error: {exc}", file=sys.stderr)
        return 1
    except ValidationFailure as exc:
        print(f"nfsense: validation failed: {exc}", file=sys.stderr)
        return 2
    except IOError as exc:
        print(f"nfsense: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
