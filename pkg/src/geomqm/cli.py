"""Scenario runner: ``geomqm run <file>`` and ``geomqm validate <file>``.

A scenario is a JSON document::

    {
      "task": "spectrum" | "evolve" | "uncertainty" | "superpose" | "star" | "bloch",
      "dimension": 2,
      "operators": {"Z": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]},
      "states": {"up": [[1, 0], [0, 0]]},
      "parameters": {...}
    }

Complex numbers are ``[re, im]`` pairs (a bare real number is accepted as
shorthand) and matrices are row-major nested arrays.  Task parameters and
their defaults:

``spectrum``
    ``operator`` (name); ``restarts`` (20), ``step`` (0.5), ``tol`` (1e-9),
    ``max_iters`` (20000), ``seed`` (0), ``value_merge`` (10 * tol).
``evolve``
    ``hamiltonian``, ``observables`` (list of names), ``state``, and ``times``
    as a list or ``{"start", "stop", "num"}`` (inclusive ends).
``uncertainty``
    ``triples``: list of ``{"A", "B", "state"}``; ``path`` ("operator" or
    "tensor", default "operator").
``superpose``
    ``rho1``, ``rho2``, ``fiducial`` (state names, taken as rays) and ``p1``.
``star``
    ``base``, ``first``, ``second``: state names (dimension 2) or unit 3-vectors.
``bloch``
    ``state`` (dimension 2); optional ``operators`` (names) whose Pauli
    coefficients, expectation values and pairwise tensor contractions are
    reported.

Exit codes: 0 success, 2 validation failure, 3 numerical failure, 4 focal
point.  Output floats carry 17 significant digits and keys are sorted, so a
fixed input and seed always produce the same bytes.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import __version__
from .bloch import (
    BLOCH_TENSOR_NORMALIZATION,
    DensityMatrix,
    PauliCoefficients,
    bloch_tensor_eval,
    pauli_expectation,
    state_to_bloch,
)
from .dynamics import expectation_trajectory
from .errors import FocalPointError, GeomQMError, NonHermitianError, NumericalConsistencyError
from .hilbert import HERMITIAN_REJECT_TOL, HERMITIAN_TOL, HermitianOperator, projector
from .interference import (
    FiducialProjector,
    density_to_sphere,
    sphere_point,
    sphere_to_density,
    star_compose,
    state_to_sphere,
    superpose,
)
from .spectral import SearchConfig, critical_values, find_critical_points
from .uncertainty import uncertainty_report

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_FOCAL = 0, 2, 3, 4

TASKS = ("spectrum", "evolve", "uncertainty", "superpose", "star", "bloch")
TOP_LEVEL = {"task", "dimension", "operators", "states", "parameters"}
PARAMETERS = {
    "spectrum": {"operator", "restarts", "step", "tol", "max_iters", "seed", "value_merge"},
    "evolve": {"hamiltonian", "observables", "state", "times"},
    "uncertainty": {"triples", "path"},
    "superpose": {"rho1", "rho2", "fiducial", "p1"},
    "star": {"base", "first", "second"},
    "bloch": {"state", "operators"},
}
#: library tolerances, echoed in every result document
TOLERANCES = {"hermitian_flag": HERMITIAN_TOL, "hermitian_reject": HERMITIAN_REJECT_TOL}


class ScenarioError(GeomQMError, ValueError):
    """Invalid scenario; ``code`` is machine readable."""

    def __init__(self, code: str, message: str, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message)
        self.code = code
        self.line = line
        self.column = column

    def as_dict(self) -> dict:
        d = {"code": self.code, "message": str(self)}
        if self.line is not None:
            d.update(line=self.line, column=self.column)
        return d


@dataclass
class Scenario:
    task: str
    dimension: int
    operators: dict[str, HermitianOperator]
    states: dict[str, np.ndarray]
    parameters: dict[str, Any]
    warnings: list[str] = field(default_factory=list)
    symmetrized: dict[str, np.ndarray] = field(default_factory=dict)


# ---------------------------------------------------------------- parsing


def _complex(x, where: str) -> complex:
    if isinstance(x, bool):
        raise ScenarioError("invalid_value", f"{where}: expected a number or [re, im]")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return complex(x[0], x[1])
    raise ScenarioError("invalid_value", f"{where}: expected a number or [re, im]")


def _matrix(rows, name: str, n: int) -> np.ndarray:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ScenarioError("invalid_value", f"operator {name!r} must be a nested array")
    if len(rows) != n or any(len(r) != n for r in rows):
        shape = f"{len(rows)}x{'/'.join(sorted({str(len(r)) for r in rows})) or 0}"
        raise ScenarioError("dimension_mismatch", f"operator {name!r} has shape {shape}, expected {n}x{n}")
    return np.array([[_complex(x, f"operator {name!r}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)])


def _vector(entries, name: str, n: int) -> np.ndarray:
    if not isinstance(entries, list):
        raise ScenarioError("invalid_value", f"state {name!r} must be an array")
    if len(entries) != n:
        raise ScenarioError("dimension_mismatch", f"state {name!r} has length {len(entries)}, expected {n}")
    v = np.array([_complex(x, f"state {name!r}[{i}]") for i, x in enumerate(entries)])
    if not np.any(v):
        raise ScenarioError("invalid_value", f"state {name!r} is the zero vector")
    return v


def _ref(table: dict, key, kind: str):
    if not isinstance(key, str) or key not in table:
        raise ScenarioError("unresolved_name", f"{kind} {key!r} is not defined")
    return key


def _need(params: dict, key: str, task: str):
    if key not in params:
        raise ScenarioError("invalid_value", f"task {task!r} requires parameter {key!r}")
    return params[key]


def _check_references(s: Scenario):
    p, ops, sts = s.parameters, s.operators, s.states
    if s.task == "spectrum":
        _ref(ops, _need(p, "operator", s.task), "operator")
    elif s.task == "evolve":
        _ref(ops, _need(p, "hamiltonian", s.task), "operator")
        obs = _need(p, "observables", s.task)
        if not isinstance(obs, list) or not obs:
            raise ScenarioError("invalid_value", "observables must be a non-empty list of names")
        for o in obs:
            _ref(ops, o, "operator")
        _ref(sts, _need(p, "state", s.task), "state")
        _times(_need(p, "times", s.task))
    elif s.task == "uncertainty":
        triples = _need(p, "triples", s.task)
        if not isinstance(triples, list) or not triples:
            raise ScenarioError("invalid_value", "triples must be a non-empty list")
        for t in triples:
            if not isinstance(t, dict) or set(t) != {"A", "B", "state"}:
                raise ScenarioError("invalid_value", "each triple needs exactly the keys A, B, state")
            _ref(ops, t["A"], "operator")
            _ref(ops, t["B"], "operator")
            _ref(sts, t["state"], "state")
        if p.get("path", "operator") not in ("operator", "tensor"):
            raise ScenarioError("invalid_value", "path must be 'operator' or 'tensor'")
    elif s.task == "superpose":
        for key in ("rho1", "rho2", "fiducial"):
            _ref(sts, _need(p, key, s.task), "state")
        p1 = _need(p, "p1", s.task)
        if isinstance(p1, bool) or not isinstance(p1, (int, float)) or not 0 <= p1 <= 1:
            raise ScenarioError("invalid_value", "p1 must be a number in [0, 1]")
    elif s.task == "star":
        for key in ("base", "first", "second"):
            v = _need(p, key, s.task)
            if isinstance(v, str):
                _ref(sts, v, "state")
                if s.dimension != 2:
                    raise ScenarioError("dimension_mismatch", "sphere points from states need dimension 2")
            else:
                try:
                    sphere_point(v)
                except (ValueError, TypeError) as exc:
                    raise ScenarioError("invalid_value", f"{key}: {exc}") from None
    elif s.task == "bloch":
        if s.dimension != 2:
            raise ScenarioError("dimension_mismatch", "the bloch task needs dimension 2")
        _ref(sts, _need(p, "state", s.task), "state")
        names = p.get("operators", [])
        if not isinstance(names, list):
            raise ScenarioError("invalid_value", "operators must be a list of names")
        for o in names:
            _ref(ops, o, "operator")


def _times(raw) -> np.ndarray:
    if isinstance(raw, dict):
        if set(raw) != {"start", "stop", "num"}:
            raise ScenarioError("invalid_value", "times needs exactly start, stop, num")
        if not isinstance(raw["num"], int) or raw["num"] < 1:
            raise ScenarioError("invalid_value", "times.num must be a positive integer")
        t = np.linspace(float(raw["start"]), float(raw["stop"]), raw["num"])
    elif isinstance(raw, list) and raw:
        t = np.array(raw, dtype=float)
    else:
        raise ScenarioError("invalid_value", "times must be a list or {start, stop, num}")
    if t.size > 1 and np.any(np.diff(t) <= 0):
        raise ScenarioError("invalid_value", "times must be strictly increasing")
    return t


def parse_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("syntax_error", exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ScenarioError("invalid_value", "scenario must be a JSON object")
    extra = sorted(set(doc) - TOP_LEVEL)
    if extra:
        raise ScenarioError("unknown_field", f"unknown top-level field {extra[0]!r}")
    task = doc.get("task")
    if task not in TASKS:
        raise ScenarioError("invalid_value", f"task must be one of {', '.join(TASKS)}")
    n = doc.get("dimension")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ScenarioError("invalid_value", "dimension must be a positive integer")
    params = doc.get("parameters", {})
    if not isinstance(params, dict):
        raise ScenarioError("invalid_value", "parameters must be an object")
    extra = sorted(set(params) - PARAMETERS[task])
    if extra:
        raise ScenarioError("unknown_field", f"unknown parameter {extra[0]!r} for task {task!r}")

    scenario = Scenario(task, n, {}, {}, params)
    for name, rows in sorted(doc.get("operators", {}).items()):
        m = _matrix(rows, name, n)
        try:
            op = HermitianOperator(m)
        except NonHermitianError as exc:
            raise ScenarioError("non_hermitian", f"operator {name!r}: {exc}") from None
        if op.symmetrized:
            scenario.warnings.append(f"operator {name!r} symmetrized (relative deviation {op.deviation:.3g})")
            scenario.symmetrized[name] = op.matrix
        scenario.operators[name] = op
    for name, entries in sorted(doc.get("states", {}).items()):
        scenario.states[name] = _vector(entries, name, n)
    _check_references(scenario)
    return scenario


# ---------------------------------------------------------------- running


def _cmatrix(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _cvector(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v)]


def _run_spectrum(s: Scenario, seed: int) -> dict:
    p = s.parameters
    cfg = SearchConfig(
        restarts=int(p.get("restarts", 20)),
        step=float(p.get("step", 0.5)),
        tol=float(p.get("tol", 1e-9)),
        max_iters=int(p.get("max_iters", 20000)),
        seed=seed,
        value_merge=p.get("value_merge"),
    )
    points = find_critical_points(s.operators[p["operator"]], cfg)
    if not points:
        raise NumericalConsistencyError("no restart converged to a critical point")
    return {
        "values": [float(v) for v in critical_values(points, 10 * cfg.tol)],
        "critical_points": [
            {
                "value": float(pt.value),
                "residual": float(pt.residual),
                "multiplicity_hint": pt.multiplicity_hint,
                "state": _cvector(pt.state),
            }
            for pt in points
        ],
        "failed_sweeps": len(points.failures),
        "iterations": points.iterations,
    }, {"tol": cfg.tol, "value_merge": cfg.merge_tol}


def _run_evolve(s: Scenario) -> dict:
    p = s.parameters
    times = _times(p["times"])
    traj = expectation_trajectory(
        s.operators[p["hamiltonian"]], [s.operators[o] for o in p["observables"]], s.states[p["state"]], times
    )
    columns = ["t"] + [f"e_{o}" for o in p["observables"]]
    rows = [[float(t), *map(float, vals)] for t, vals in zip(traj.times, traj.values)]
    return {"columns": columns, "rows": rows}, {}


def _run_uncertainty(s: Scenario) -> dict:
    path = s.parameters.get("path", "operator")
    reports = []
    for t in s.parameters["triples"]:
        r = uncertainty_report(s.operators[t["A"]], s.operators[t["B"]], s.states[t["state"]], path)
        reports.append(
            {
                "A": t["A"],
                "B": t["B"],
                "state": t["state"],
                "varA": r.varA,
                "varB": r.varB,
                "cov": r.cov,
                "commutator_term": r.commutator_term,
                "robertson_slack": r.robertson_slack,
                "schrodinger_slack": r.schrodinger_slack,
                "robertson_holds": r.robertson_holds,
                "schrodinger_holds": r.schrodinger_holds,
            }
        )
    return {"path": path, "reports": reports}, {}


def _run_superpose(s: Scenario) -> dict:
    p = s.parameters
    rho1 = DensityMatrix(projector(s.states[p["rho1"]]))
    rho2 = DensityMatrix(projector(s.states[p["rho2"]]))
    P0 = FiducialProjector.from_vector(s.states[p["fiducial"]])
    rho = superpose(rho1, rho2, P0, float(p["p1"]))
    defect = rho.purity_defect()
    trace_err = abs(np.trace(rho.matrix).real - 1.0)
    return {
        "rho": _cmatrix(rho.matrix),
        "purity_defect": defect,
        "trace_error": trace_err,
        "pure": bool(defect <= 1e-10 and trace_err <= 1e-12),
    }, {"purity": 1e-10, "trace": 1e-12}


def _sphere_arg(s: Scenario, v) -> np.ndarray:
    return state_to_sphere(s.states[v]) if isinstance(v, str) else sphere_point(v)


def _run_star(s: Scenario) -> dict:
    p = s.parameters
    s0, s1, s2 = (_sphere_arg(s, p[k]) for k in ("base", "first", "second"))
    out = star_compose(s0, s1, s2)
    rho = sphere_to_density(out)
    return {
        "point": [float(x) for x in out],
        "bloch": [0.5, *(0.5 * out).tolist()],
        "rho": _cmatrix(rho),
    }, {}


def _run_bloch(s: Scenario) -> dict:
    p = s.parameters
    y = state_to_bloch(s.states[p["state"]])
    out: dict[str, Any] = {
        "y": [float(v) for v in y.as_array()],
        "radius2": y.radius2(),
        "pure": y.is_pure(),
        "sphere_point": [float(v) for v in density_to_sphere(y.to_density())],
    }
    names = list(p.get("operators", []))
    coeffs = {o: PauliCoefficients.from_matrix(s.operators[o]) for o in names}
    out["operators"] = {
        o: {"coefficients": [float(v) for v in c.as_array()], "expectation": pauli_expectation(c, y)}
        for o, c in coeffs.items()
    }
    out["tensors"] = [
        {
            "A": a,
            "B": b,
            **{k: bloch_tensor_eval(k, coeffs[a], coeffs[b], y) for k in BLOCH_TENSOR_NORMALIZATION},
        }
        for i, a in enumerate(names)
        for b in names[i + 1 :]
    ]
    return out, {}


def run(scenario: Scenario, seed: Optional[int] = None) -> dict:
    """Execute a validated scenario and return the result document."""
    if seed is None:
        seed = int(scenario.parameters.get("seed", 0))
    if scenario.task == "spectrum":
        outputs, tols = _run_spectrum(scenario, seed)
    else:
        outputs, tols = {
            "evolve": _run_evolve,
            "uncertainty": _run_uncertainty,
            "superpose": _run_superpose,
            "star": _run_star,
            "bloch": _run_bloch,
        }[scenario.task](scenario)
    diagnostics = {
        "warnings": list(scenario.warnings),
        "seed": seed,
        "tolerances": {**TOLERANCES, **tols},
    }
    if scenario.symmetrized:
        diagnostics["symmetrized_operators"] = {k: _cmatrix(v) for k, v in scenario.symmetrized.items()}
    return {"task": scenario.task, "outputs": outputs, "diagnostics": diagnostics}


# ---------------------------------------------------------------- output


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    s = format(x, ".17g")
    return s if any(c in s for c in ".en") else s + ".0"


def _encode(obj, indent: int, level: int) -> str:
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_encode(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _encode(v, indent, level + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc) -> str:
    """Byte-stable JSON: sorted keys, 17 significant digits, trailing newline."""
    return _encode(doc, 2, 0) + "\n"


def write_csv(doc: dict, path: Path) -> None:
    out = doc["outputs"]
    if "columns" not in out:
        raise ScenarioError("invalid_value", f"task {doc['task']!r} has no trajectory to write as CSV")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(out["columns"])
        for row in out["rows"]:
            w.writerow([_fmt_float(x) for x in row])


# ---------------------------------------------------------------- entry


def parse_args(argv=None) -> argparse.Namespace:
    ap = argparse.ArgumentParser(prog="geomqm", description="Run geometric quantum mechanics scenarios.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="execute a scenario and print the JSON result")
    r.add_argument("scenario", type=Path)
    r.add_argument("--csv", type=Path, default=None, help="also write the trajectory table here")
    r.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    v = sub.add_parser("validate", help="parse and validate a scenario without running it")
    v.add_argument("scenario", type=Path)
    return ap.parse_args(argv)


def _fail(code: int, kind: str, err: dict) -> int:
    sys.stderr.write(dumps({"status": kind, "error": err}))
    return code


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        text = args.scenario.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        return _fail(EXIT_VALIDATION, "invalid", {"code": "io_error", "message": str(exc)})
    try:
        scenario = parse_scenario(text)
    except ScenarioError as exc:
        return _fail(EXIT_VALIDATION, "invalid", exc.as_dict())

    if args.command == "validate":
        sys.stdout.write(
            dumps(
                {
                    "status": "valid",
                    "task": scenario.task,
                    "dimension": scenario.dimension,
                    "warnings": scenario.warnings,
                }
            )
        )
        return EXIT_OK

    try:
        doc = run(scenario, args.seed)
        if args.csv is not None:
            write_csv(doc, args.csv)
    except FocalPointError as exc:
        return _fail(EXIT_FOCAL, "focal_point", {"code": "focal_point", "message": f"{scenario.task}: {exc}"})
    except (NumericalConsistencyError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERICAL, "numerical", {"code": "numerical", "message": f"{scenario.task}: {exc}"})
    except ScenarioError as exc:
        return _fail(EXIT_VALIDATION, "invalid", exc.as_dict())
    except (GeomQMError, ValueError) as exc:
        return _fail(EXIT_VALIDATION, "invalid", {"code": "invalid_value", "message": f"{scenario.task}: {exc}"})
    except OSError as exc:
        return _fail(EXIT_VALIDATION, "invalid", {"code": "io_error", "message": str(exc)})
    sys.stdout.write(dumps(doc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
