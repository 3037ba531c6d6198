"""Scenario and state files.

Files are JSON. Complex numbers are ``[re, im]`` pairs and matrices are
row-major nested lists of them. The schema is strict: unknown keys are
rejected, and every quantum-object invariant is re-checked on load.
Diagnostics carry the line of the offending value.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import jsonschema
import numpy as np
import yaml

from .bounds import Scenario
from .errors import RucboundError
from .quantum import ChannelMeasurement, Povm, QubitState

SCHEMA_VERSION = "1"

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}


def _matrix_schema(n):
    row = {"type": "array", "items": _COMPLEX, "minItems": n, "maxItems": n}
    return {"type": "array", "items": row, "minItems": n, "maxItems": n}


_MEASUREMENT = {
    "type": "object",
    "additionalProperties": False,
    "required": ["input", "povm"],
    "properties": {
        "input": _matrix_schema(2),
        "ancilla": _matrix_schema(2),
        "povm": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["label", "effect"],
                "properties": {"label": {"type": "string"}, "effect": _matrix_schema(2)},
            },
        },
    },
}

SCENARIO_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema", "r", "meas1", "meas2", "subsetM", "subsetN"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "id": {"type": "string"},
        "r": {"type": "number"},
        "meas1": _MEASUREMENT,
        "meas2": _MEASUREMENT,
        "subsetM": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "subsetN": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
    },
}

STATE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema", "state"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "id": {"type": "string"},
        "state": _matrix_schema(4),
    },
}


class ScenarioFileError(RucboundError):
    """Invalid scenario or state file; ``line`` is 1-based when known."""

    def __init__(self, message, path=(), line=None, filename=None):
        super().__init__(message)
        self.message = message
        self.path = tuple(path)
        self.line = line
        self.filename = filename

    def __str__(self):
        where = self.filename or "<input>"
        if self.line is not None:
            where = f"{where}:{self.line}"
        loc = ".".join(str(p) for p in self.path)
        return f"{where}: {loc + ': ' if loc else ''}{self.message}"


def matrix_to_json(m) -> list:
    return [[[float(c.real), float(c.imag)] for c in row] for row in np.asarray(m, dtype=complex)]


def matrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def _line_of(text: str, path) -> int | None:
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return None
    line = node.start_mark.line + 1 if node is not None else None
    for key in path:
        if isinstance(node, yaml.MappingNode):
            nxt = next((v for k, v in node.value if k.value == key), None)
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            nxt = node.value[key]
        else:
            nxt = None
        if nxt is None:
            break
        node = nxt
        line = node.start_mark.line + 1
    return line


def _parse(text: str, schema, filename):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFileError(f"parse error: {exc.msg}", line=exc.lineno, filename=filename) from None
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = tuple(err.absolute_path)
        line_path = path
        if err.validator == "additionalProperties" and isinstance(err.instance, dict):
            allowed = err.schema.get("properties", {})
            extra = sorted(k for k in err.instance if k not in allowed)
            if extra:
                line_path = path + (extra[0],)
        raise ScenarioFileError(err.message, path, _line_of(text, line_path), filename)
    return data


def _measurement_from_dict(d, key):
    try:
        state = QubitState(matrix_from_json(d["input"]))
    except RucboundError as exc:
        raise ScenarioFileError(str(exc), (key, "input")) from None
    try:
        povm = Povm(tuple(matrix_from_json(e["effect"]) for e in d["povm"]), tuple(e["label"] for e in d["povm"]))
    except RucboundError as exc:
        path = (key, "povm") + ((exc.index, "effect") if hasattr(exc, "index") else ())
        raise ScenarioFileError(str(exc), path) from None
    return ChannelMeasurement(state, povm, d.get("ancilla"))


def scenario_from_dict(d) -> Scenario:
    meas1 = _measurement_from_dict(d["meas1"], "meas1")
    meas2 = _measurement_from_dict(d["meas2"], "meas2")
    for key, meas in (("subsetM", meas1), ("subsetN", meas2)):
        for k, lab in enumerate(d[key]):
            if lab not in meas.povm.labels:
                raise ScenarioFileError(f"unknown outcome label {lab!r}", (key, k))
    try:
        return Scenario(meas1, meas2, d["r"], tuple(d["subsetM"]), tuple(d["subsetN"]))
    except RucboundError as exc:
        raise ScenarioFileError(str(exc), ("r",)) from None


def scenario_to_dict(s: Scenario, ident: str | None = None) -> dict:
    def meas(m: ChannelMeasurement):
        return {
            "input": matrix_to_json(m.state.matrix),
            "povm": [{"label": lab, "effect": matrix_to_json(e)} for lab, e in zip(m.povm.labels, m.povm.effects)],
        }

    d = {"schema": SCHEMA_VERSION}
    if ident is not None:
        d["id"] = ident
    d.update({
        "r": s.r,
        "meas1": meas(s.meas1),
        "meas2": meas(s.meas2),
        "subsetM": list(s.subset_m),
        "subsetN": list(s.subset_n),
    })
    return d


def loads_scenario(text: str, filename=None):
    """Parse scenario text; returns ``(scenario, identifier or None)``."""
    data = _parse(text, SCENARIO_SCHEMA, filename)
    try:
        return scenario_from_dict(data), data.get("id")
    except ScenarioFileError as exc:
        exc.line = _line_of(text, exc.path)
        exc.filename = filename
        raise


def load_scenario(path):
    path = Path(path)
    return loads_scenario(path.read_text(), str(path))


_NUM = r"-?[0-9][0-9.eE+-]*"
_PAIR = re.compile(r"\[\s*(" + _NUM + r"),\s*(" + _NUM + r")\s*\]")
_ROW = re.compile(r"\[\s*(\[[^\[\]]*\](?:,\s*\[[^\[\]]*\])*)\s*\]")
_STRINGS = re.compile(r'\[\s*("[^"\n]*"(?:,\s*"[^"\n]*")*)\s*\]')


def dumps_pretty(d) -> str:
    """Indented JSON with each matrix row on a single line."""
    text = json.dumps(d, indent=2)
    text = _PAIR.sub(r"[\1, \2]", text)
    text = _ROW.sub(lambda m: "[" + re.sub(r",\s*", ", ", m.group(1)) + "]", text)
    text = _STRINGS.sub(lambda m: "[" + re.sub(r'",\s*"', '", "', m.group(1)) + "]", text)
    return text + "\n"


def dumps_scenario(s: Scenario, ident: str | None = None) -> str:
    return dumps_pretty(scenario_to_dict(s, ident))


def dump_scenario(s: Scenario, path, ident: str | None = None) -> None:
    Path(path).write_text(dumps_scenario(s, ident))


def load_state(path) -> np.ndarray:
    path = Path(path)
    text = path.read_text()
    data = _parse(text, STATE_SCHEMA, str(path))
    return matrix_from_json(data["state"])


def dump_state(rho, path) -> None:
    Path(path).write_text(dumps_pretty({"schema": SCHEMA_VERSION, "state": matrix_to_json(rho)}))
