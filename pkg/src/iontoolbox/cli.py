"""Command-line scenario runner.

    iontoolbox --config scenario.json [--out PATH] [--format csv|json]
               [--check] [--fock-cutoff N]

Exit status: 0 on success, 2 for an invalid configuration, 3 when the
numerics fail (truncation leakage, too few steps).  Failures print a JSON
object to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import driven_osc as dosc
from . import qlinalg as ql
from . import species as sp
from . import spin_motion as sm
from . import twoqubit as tq
from .errors import NumericalError

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3
DEFAULT_SAMPLES = 201


class ConfigError(ValueError):
    def __init__(self, problems):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


def load_schema():
    text = (resources.files("iontoolbox") / "data" / "scenario.schema.json").read_text()
    return json.loads(text)


def validate(config):
    """List every problem with a config without running anything; empty means valid."""
    validator = jsonschema.Draft202012Validator(load_schema())
    problems = []
    for err in sorted(validator.iter_errors(config), key=lambda e: (list(e.absolute_path), e.message)):
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        problems.append(f"{where}: {err.message}")
    return problems


# -- scenarios -------------------------------------------------------------
# Each returns a payload dict: either columns + rows, or matrix (+ basis),
# or a free-form "report" for scenarios without a natural table.

def _space(config):
    return sm.single_mode_space(config.get("fockCutoff", ql.DEFAULT_CUTOFF))


def _nutation(params, config):
    space = _space(config)
    spec = sm.PulseSpec(
        rabi=params["rabi"],
        detuning=params.get("detuning", 0.0),
        phase=params.get("phase", 0.0),
        lamb_dicke=params.get("lamb_dicke", 0.0),
        duration=params["duration"],
    )
    s = params.get("sideband", 0)
    samples = config.get("samples", DEFAULT_SAMPLES)
    if "mean_n" in params:
        times, p_up = sm.thermal_nutation(spec, s, params["mean_n"], samples, space)
    else:
        n0 = params.get("initial_n", 0)
        if n0 >= space.fock_cutoffs[0]:
            raise ValueError(f"initial_n {n0} is outside the Fock cutoff")
        times, p_up = sm.nutation_curve(spec, s, space.basis_state((1,), (n0,)), samples, space)
    return {"columns": ["time", "p_up"], "rows": np.column_stack([times, p_up])}


def _spectrum(params, config):
    space = _space(config)
    spec = sm.PulseSpec(
        rabi=params["rabi"],
        phase=params.get("phase", 0.0),
        lamb_dicke=params.get("lamb_dicke", 0.0),
        duration=params["duration"],
    )
    if params["detuning_max"] < params["detuning_min"]:
        raise ValueError("detuning_max is below detuning_min")
    n0 = params.get("initial_n", 0)
    grid = np.linspace(params["detuning_min"], params["detuning_max"], config.get("samples", DEFAULT_SAMPLES))
    detunings, p_up = sm.sideband_spectrum(spec, space.basis_state((1,), (n0,)), grid, space, max_workers=4)
    return {"columns": ["detuning", "p_up"], "rows": np.column_stack([detunings, p_up])}


def _driven_path(params, config):
    spec = dosc.DriveSpec(
        force=params["force"],
        width=params.get("width", 1.0),
        detuning=params["detuning"],
        duration=params.get("duration"),
    )
    path = dosc.drive_path(spec, config.get("samples", 2001))
    return {"columns": list(dosc.PATH_COLUMNS), "rows": path.rows()}


def _sigma_z_gate(params, config):
    modes = tq.normal_modes(params.get("trap_frequency", 1.0), params.get("width", 1.0))
    mode = params.get("mode", "st")
    force = params.get("force")
    if force is None:
        force = tq.calibrate_sigma_z(modes, params["detuning"], mode)
    pattern = tq.ForcePattern(force, -force)
    gate, _ = tq.sigma_z_gate(pattern, modes, params["detuning"], mode, cutoff=config.get("fockCutoff", 40))
    return {"matrix": gate, "basis": list(tq.BASIS_LABELS)}


def _sigma_phi_gate(params, config):
    gate = tq.sigma_phi_gate(
        params.get("phi", 0.0),
        params.get("drive_parameter", 1.0),
        detuning_sign=params.get("detuning_sign", 1),
    )
    return {"matrix": gate, "basis": list(tq.BASIS_LABELS)}


def _identities(params, config):
    report = tq.identity_report()
    rows = [[r["identity"], r["deviation"], r["tolerance"], r["passed"]] for r in report]
    return {"columns": ["identity", "deviation", "tolerance", "passed"], "rows": rows,
            "report": {"identities": report, "all_passed": all(r["passed"] for r in report)}}


def _species(params, config):
    try:
        record = sp.lookup(params["name"])
    except KeyError as exc:
        raise ValueError(exc.args[0]) from None
    flat = record.to_dict()
    optical = flat.pop("optical") or {}
    flat.update({f"optical.{k}": v for k, v in optical.items()})
    return {"columns": ["field", "value"], "rows": [[k, v] for k, v in flat.items()],
            "report": {"species": record.to_dict()}}


SCENARIOS = {
    "nutation": _nutation,
    "spectrum": _spectrum,
    "driven_path": _driven_path,
    "sigma_z_gate": _sigma_z_gate,
    "sigma_phi_gate": _sigma_phi_gate,
    "identities": _identities,
    "species": _species,
}


def run(config):
    """Validate then execute a scenario; returns its payload."""
    problems = validate(config)
    if problems:
        raise ConfigError(problems)
    return SCENARIOS[config["scenario"]](config.get("parameters", {}), config)


# -- output ----------------------------------------------------------------

def _cell(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (int, float, np.integer, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def _json_value(value):
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def emit(scenario, payload, fmt):
    """Render a payload as CSV or JSON text."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if "matrix" in payload:
            writer.writerow(["row", "col", "re", "im"])
            for (i, j), v in np.ndenumerate(np.asarray(payload["matrix"])):
                writer.writerow([i, j, _cell(v.real), _cell(v.imag)])
        else:
            writer.writerow(payload["columns"])
            for row in payload["rows"]:
                writer.writerow([_cell(v) for v in row])
        return buf.getvalue()
    if fmt != "json":
        raise ValueError(f"unknown format {fmt!r}")
    doc = {"schema_version": SCHEMA_VERSION, "scenario": scenario}
    if "matrix" in payload:
        doc.update(tq.gate_to_json(payload["matrix"]))
        doc["basis"] = payload.get("basis", doc.get("basis"))
    else:
        doc["columns"] = list(payload["columns"])
        doc["rows"] = [[_json_value(v) for v in row] for row in payload["rows"]]
    if "report" in payload:
        doc["report"] = payload["report"]
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_output(text, fmt):
    """Inverse of :func:`emit` for tabular and matrix payloads (numbers only)."""
    if fmt == "json":
        doc = json.loads(text)
        if "matrix" in doc:
            return tq.gate_from_json(doc)
        return doc["columns"], doc["rows"]
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def write_atomic(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fail(code, kind, message, details=()):
    err = {"error": kind, "exit_code": code, "message": message, "details": list(details)}
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return code


def build_parser():
    parser = argparse.ArgumentParser(prog="iontoolbox", description="Run a trapped-ion simulation scenario.")
    parser.add_argument("--config", required=True, help="scenario JSON file")
    parser.add_argument("--out", help="output path (overrides the config)")
    parser.add_argument("--format", choices=("csv", "json"), help="output format (overrides the config)")
    parser.add_argument("--check", action="store_true", help="validate the config and exit")
    parser.add_argument("--fock-cutoff", type=int, help="Fock cutoff (overrides the config)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(EXIT_INVALID, "config", f"cannot read {args.config}: {exc}")
    if not isinstance(config, dict):
        return _fail(EXIT_INVALID, "config", "config must be a JSON object")
    if args.fock_cutoff is not None:
        config["fockCutoff"] = args.fock_cutoff
    output = dict(config.get("output") or {})
    if args.out:
        output["path"] = args.out
    if args.format:
        output["format"] = args.format
    if output:
        config["output"] = output

    if args.check:
        problems = validate(config)
        sys.stdout.write(json.dumps({"valid": not problems, "errors": problems}, indent=2) + "\n")
        return EXIT_OK if not problems else EXIT_INVALID

    try:
        payload = run(config)
    except ConfigError as exc:
        return _fail(EXIT_INVALID, "validation", "invalid configuration", exc.problems)
    except NumericalError as exc:
        return _fail(EXIT_NUMERICAL, "numerical", str(exc))
    except ValueError as exc:
        return _fail(EXIT_INVALID, "validation", str(exc))

    text = emit(config["scenario"], payload, output.get("format", "csv"))
    if output.get("path"):
        write_atomic(output["path"], text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
