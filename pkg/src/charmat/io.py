"""File formats and machine-readable reports for the command-line tools.

Three JSON schemas:

- *matrix file*: ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` with
  exactly ``r * c`` row-major ``[re, im]`` pairs;
- *family file*: ``{"grid": [t...], "weights": [w...]?, "fibers": ...}``
  where ``fibers`` is either a list of matrix-file objects (one per node)
  or a named generator ``{"kind": <name>, "n": <dim>}`` replicated over the
  nodes (kinds: ``dirichlet-derivative``, ``periodic-derivative``,
  ``dirichlet-laplacian``, ``periodic-laplacian``);
- *report*: command, input digest, seed, residual/tolerance tables, an
  overall ``pass`` flag (true exactly when every residual is at most its
  tolerance), and wall time.

Floats serialize through Python's shortest round-trip repr (at most 17
significant digits), so writing and re-reading a matrix reproduces it
bit for bit.  Malformed files raise :class:`ParseError`; well-formed files
with invalid *values* (non-finite entries, inconsistent fiber shapes)
raise :class:`ValueError`.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .boundary import GridDiscretization, derivative_operator, laplacian
from .family import OperatorFamily, ParameterGrid

__all__ = [
    "ParseError",
    "Report",
    "load_matrix",
    "save_matrix",
    "load_family",
    "file_digest",
]

GENERATOR_KINDS = (
    "dirichlet-derivative",
    "periodic-derivative",
    "dirichlet-laplacian",
    "periodic-laplacian",
)


class ParseError(Exception):
    """A file is syntactically malformed or violates its schema."""


def _load_json(path) -> object:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
                         f"{exc.msg}") from exc


def _matrix_from_obj(obj, where: str) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object, got {type(obj).__name__}")
    missing = {"rows", "cols", "data"} - obj.keys()
    if missing:
        raise ParseError(f"{where}: missing field(s) {sorted(missing)}")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 1:
        raise ParseError(f"{where}: rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        got = len(data) if isinstance(data, list) else f"type {type(data).__name__}"
        raise ParseError(
            f"{where}: data must hold exactly rows*cols = {rows * cols} entries, got {got}"
        )
    for i, pair in enumerate(data):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
        ):
            raise ParseError(f"{where}: data[{i}] must be a [re, im] pair of numbers")
    flat = np.asarray(data, dtype=float)
    A = (flat[:, 0] + 1j * flat[:, 1]).reshape(rows, cols)
    if not np.all(np.isfinite(flat)):
        bad = int(np.argwhere(~np.isfinite(flat))[0][0])
        raise ValueError(f"{where}: non-finite entry at data[{bad}]")
    return A


def load_matrix(path) -> np.ndarray:
    """Read a matrix file into a complex array.

    Raises
    ------
    ParseError
        On malformed JSON or schema violations (including a wrong data
        length); the message carries the offending line or element.
    ValueError
        On non-finite entries.
    """
    return _matrix_from_obj(_load_json(path), str(path))


def _matrix_to_obj(A: np.ndarray) -> dict:
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "data": [[float(x.real), float(x.imag)] for x in A.ravel()],
    }


def save_matrix(path, A) -> None:
    """Write a matrix file; floats keep shortest round-trip precision."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_matrix_to_obj(A), fh)
        fh.write("\n")


def load_family(path) -> OperatorFamily:
    """Read a family file into an :class:`~charmat.family.OperatorFamily`.

    Raises
    ------
    ParseError
        On malformed JSON or schema violations.
    ValueError
        On invalid values: non-increasing grid, non-positive weights,
        mixed fiber dimensions, non-finite entries, unknown generator kind.
    """
    obj = _load_json(path)
    where = str(path)
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object at top level")
    if "grid" not in obj or "fibers" not in obj:
        raise ParseError(f"{where}: missing field(s) {sorted({'grid', 'fibers'} - obj.keys())}")
    nodes = obj["grid"]
    if not isinstance(nodes, list) or not all(
        isinstance(t, (int, float)) and not isinstance(t, bool) for t in nodes
    ):
        raise ParseError(f"{where}: grid must be a list of numbers")
    weights = obj.get("weights")
    if weights is not None and (
        not isinstance(weights, list)
        or not all(isinstance(w, (int, float)) and not isinstance(w, bool) for w in weights)
    ):
        raise ParseError(f"{where}: weights must be a list of numbers")
    grid = ParameterGrid(np.asarray(nodes, dtype=float),
                         None if weights is None else np.asarray(weights, dtype=float))

    fibers_obj = obj["fibers"]
    if isinstance(fibers_obj, dict):
        missing = {"kind", "n"} - fibers_obj.keys()
        if missing:
            raise ParseError(f"{where}: generator missing field(s) {sorted(missing)}")
        kind, n = fibers_obj["kind"], fibers_obj["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise ParseError(f"{where}: generator n must be an integer")
        if kind not in GENERATOR_KINDS:
            raise ValueError(f"{where}: unknown generator kind {kind!r}; "
                             f"expected one of {GENERATOR_KINDS}")
        bc = kind.split("-")[0]
        g = GridDiscretization(n, bc)
        fiber = (derivative_operator(g, bc) if kind.endswith("derivative")
                 else laplacian(g, bc))
        fibers = np.broadcast_to(fiber, (grid.m, n, n)).copy()
    elif isinstance(fibers_obj, list):
        if len(fibers_obj) != grid.m:
            raise ParseError(f"{where}: {len(fibers_obj)} fibers for {grid.m} grid nodes")
        mats = [_matrix_from_obj(o, f"{where}: fibers[{k}]") for k, o in enumerate(fibers_obj)]
        shapes = {m.shape for m in mats}
        if len(shapes) > 1:
            raise ValueError(f"{where}: mixed fiber dimensions {sorted(shapes)}")
        fibers = np.stack(mats)
    else:
        raise ParseError(f"{where}: fibers must be a list of matrices or a generator object")
    return OperatorFamily(grid, fibers)


def file_digest(path) -> str:
    """Hex sha256 of a file's raw bytes."""
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def params_digest(params: dict) -> str:
    """Hex sha256 of a canonical JSON encoding of command parameters."""
    return hashlib.sha256(json.dumps(params, sort_keys=True).encode()).hexdigest()


@dataclass
class Report:
    """Machine-readable outcome of one command invocation.

    ``passed`` is true exactly when every residual is at most its declared
    tolerance.  ``notes`` carries non-numeric diagnostics (skipped checks,
    classification outcomes) without affecting the pass rule.
    """

    command: str
    inputs: str
    residuals: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seed: int | None = None
    wall_time_ms: float = 0.0
    notes: dict = field(default_factory=dict)

    def add(self, label: str, residual: float, tolerance: float) -> None:
        self.residuals[label] = float(residual)
        self.tolerances[label] = float(tolerance)

    @property
    def passed(self) -> bool:
        return all(self.residuals[k] <= self.tolerances[k] for k in self.residuals)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "seed": self.seed,
            "residuals": dict(self.residuals),
            "tolerances": dict(self.tolerances),
            "notes": dict(self.notes),
            "pass": self.passed,
            "wall_time_ms": self.wall_time_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def save(self, path, fmt: str = "json") -> None:
        """Write the report as ``json`` or as a flat ``csv`` table."""
        if fmt == "json":
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(self.to_json())
                fh.write("\n")
        elif fmt == "csv":
            with open(path, "w", encoding="utf-8", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["field", "label", "value"])
                w.writerow(["command", "", self.command])
                w.writerow(["inputs", "", self.inputs])
                w.writerow(["seed", "", "" if self.seed is None else self.seed])
                w.writerow(["pass", "", str(self.passed).lower()])
                w.writerow(["wall_time_ms", "", repr(self.wall_time_ms)])
                for label in sorted(self.residuals):
                    w.writerow(["residual", label, repr(self.residuals[label])])
                    w.writerow(["tolerance", label, repr(self.tolerances[label])])
                for label in sorted(self.notes):
                    w.writerow(["note", label, self.notes[label]])
        else:
            raise ValueError(f"unknown report format {fmt!r}")
