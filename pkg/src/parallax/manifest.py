"""JSON problem manifests: schema validation and construction of library objects.

Expressions stay in the text grammar inside JSON strings.  Every failure is
reported as :class:`SchemaError` whose witness carries a JSON pointer to the
offending field.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from .errors import ExprSyntaxError, SchemaError, UnknownSymbol
from .expr import Chart, ConstField, DiffTower
from .geometry import RationalMap, VectorField
from .liealg import StructureConstants

KINDS = ("parallelism", "coparallelism", "connection", "sl2", "galois", "isogeny")

_EXPR = {"type": ["string", "integer"]}
_NAMES = {"type": "array", "items": {"type": "string", "pattern": "^[A-Za-z_][A-Za-z_0-9]*$"},
          "uniqueItems": True}
_FIELDS = {"type": "array", "items": {"type": "array", "items": _EXPR}}
_ENTRY = {"type": "object", "required": ["i", "j", "k", "value"], "additionalProperties": False,
          "properties": {"i": {"type": "integer", "minimum": 1}, "j": {"type": "integer", "minimum": 1},
                         "k": {"type": "integer", "minimum": 1}, "value": _EXPR}}
_TOWER = {"type": "array", "items": {
    "type": "object", "required": ["name", "derivatives"], "additionalProperties": False,
    "properties": {"name": {"type": "string", "pattern": "^[A-Za-z_][A-Za-z_0-9]*$"},
                   "derivatives": {"type": "object", "additionalProperties": _EXPR}}}}
_ALGEBRA = {"type": "object", "required": ["dim"], "additionalProperties": False,
            "properties": {"dim": {"type": "integer", "minimum": 1},
                           "params": _NAMES,
                           "brackets": {"type": "array", "items": {
                               "type": "object", "required": ["i", "j", "coeffs"],
                               "additionalProperties": False,
                               "properties": {"i": {"type": "integer", "minimum": 1},
                                              "j": {"type": "integer", "minimum": 1},
                                              "coeffs": {"type": "object",
                                                         "additionalProperties": _EXPR}}}}}}
_POINT = {"type": "object", "additionalProperties": _EXPR}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["kind"],
    "additionalProperties": False,
    "properties": {
        "kind": {"enum": list(KINDS)},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "chart": _NAMES,
        "params": _NAMES,
        "tower": _TOWER,
        "frame": _FIELDS,
        "coframe": _FIELDS,
        "algebra": _ALGEBRA,
        "christoffel": {"type": "array", "items": _ENTRY},
        "christoffel_frame": {"enum": ["coordinate", "parallelism"]},
        "horizontal": _FIELDS,
        "point": _POINT,
        "tower_values": _POINT,
        "second_frame": _FIELDS,
        "isogeny": {"type": "object", "required": ["target_chart", "map", "target_frame"],
                    "additionalProperties": False,
                    "properties": {"target_chart": _NAMES, "map": {"type": "array", "items": _EXPR},
                                   "target_frame": _FIELDS}},
        "nu": _EXPR,
        "hypergeometric": {"type": "object", "additionalProperties": False,
                           "properties": {k: _EXPR for k in ("a", "b", "c", "l", "m", "n")}},
        "flags": {"type": "object",
                  "additionalProperties": {"enum": ["irrational", "rational", "integer"]}},
        "expect": {"type": "object"},
    },
}


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else ""


def validate(data) -> dict:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: (list(e.absolute_path), e.message))
    if errors:
        e = errors[0]
        raise SchemaError(f"manifest invalid at '{_pointer(e.absolute_path)}': {e.message}",
                          pointer=_pointer(e.absolute_path), problems=len(errors))
    return data


def load(source, tower_file=None) -> "Problem":
    """Read a manifest from a path, a JSON string or a dict."""
    if isinstance(source, dict):
        data = source
    else:
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise SchemaError(f"cannot read manifest: {exc}", pointer="") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"manifest is not JSON: {exc.msg}", pointer="", line=exc.lineno,
                              column=exc.colno) from None
    data = validate(data)
    if tower_file is not None:
        try:
            extra = json.loads(Path(tower_file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(f"cannot read tower file: {exc}", pointer="") from None
        try:
            jsonschema.validate(extra, _TOWER)
        except jsonschema.ValidationError as exc:
            raise SchemaError(f"tower file invalid: {exc.message}",
                              pointer="/tower" + _pointer(exc.absolute_path)) from None
        data = dict(data)
        data["tower"] = list(data.get("tower", [])) + extra
    return Problem(data)


class Problem:
    """A validated manifest with lazily built charts and objects."""

    def __init__(self, data: dict):
        self.data = data
        self.kind = data["kind"]
        self.name = data.get("name", "")
        params = tuple(data.get("params", ()))
        try:
            self.base = Chart(tuple(data.get("chart", ())), ConstField(params))
        except Exception as exc:  # name clashes between variables and parameters
            raise SchemaError(str(exc), pointer="/chart") from None
        self.chart = self._tower_chart()

    # -- expressions ------------------------------------------------------------------------

    def expr(self, value, pointer: str, chart: Chart | None = None):
        chart = chart or self.chart
        try:
            return chart.coerce(str(value)) if not isinstance(value, int) else chart.const(value)
        except (ExprSyntaxError, UnknownSymbol) as exc:
            raise SchemaError(f"bad expression at '{pointer}': {exc}", pointer=pointer,
                              source=str(value), **exc.witness) from None

    def _tower_chart(self) -> Chart:
        entries = self.data.get("tower", [])
        if not entries:
            return self.base
        tower = DiffTower(self.base.variables, self.base.field)
        for n, entry in enumerate(entries):
            table = {}
            for v, text in sorted(entry["derivatives"].items()):
                if v not in self.base.variables:
                    raise SchemaError(f"tower element {entry['name']} differentiates by unknown "
                                      f"variable {v}", pointer=f"/tower/{n}/derivatives/{v}")
                table[v] = str(text)
            try:
                tower = tower.extend(entry["name"], table)
            except (ExprSyntaxError, UnknownSymbol) as exc:
                raise SchemaError(f"bad tower entry: {exc}", pointer=f"/tower/{n}",
                                  **exc.witness) from None
        return tower.chart

    # -- builders ---------------------------------------------------------------------------

    def _fields(self, key, rows, chart=None):
        chart = chart or self.chart
        out = []
        for i, row in enumerate(rows):
            if len(row) != chart.dim:
                raise SchemaError(f"field {i + 1} needs {chart.dim} components",
                                  pointer=f"/{key}/{i}")
            out.append(VectorField(chart, [self.expr(v, f"/{key}/{i}/{a}", chart)
                                           for a, v in enumerate(row)]))
        return out

    def require(self, key):
        if key not in self.data:
            raise SchemaError(f"manifest of kind {self.kind} needs '{key}'", pointer=f"/{key}")
        return self.data[key]

    def frame(self, key="frame"):
        from .parallelism import Frame

        rows = self.require(key)
        fields = self._fields(key, rows, self.base)
        if len(fields) != self.base.dim:
            raise SchemaError(f"a frame needs {self.base.dim} fields", pointer=f"/{key}")
        return Frame(self.base, fields)

    def coframe_matrix(self):
        rows = self.require("coframe")
        if len(rows) != self.base.dim or any(len(r) != self.base.dim for r in rows):
            raise SchemaError("coframe must be a square matrix", pointer="/coframe")
        return [[self.expr(v, f"/coframe/{i}/{a}", self.base) for a, v in enumerate(r)]
                for i, r in enumerate(rows)]

    def algebra(self):
        if "algebra" not in self.data:
            return None
        data = dict(self.data["algebra"])
        data.setdefault("params", list(self.base.parameters))
        K = Chart((), ConstField(tuple(data["params"])))
        for n, b in enumerate(data.get("brackets", [])):
            for k, v in b["coeffs"].items():
                self.expr(v, f"/algebra/brackets/{n}/coeffs/{k}", K)
                if not k.isdigit() or not 1 <= int(k) <= data["dim"]:
                    raise SchemaError("bracket coefficient index out of range",
                                      pointer=f"/algebra/brackets/{n}/coeffs/{k}")
            if b["i"] > data["dim"] or b["j"] > data["dim"]:
                raise SchemaError("bracket index out of range", pointer=f"/algebra/brackets/{n}")
        return StructureConstants.from_json(data)

    def christoffel(self, frame):
        from .connection import FrameConnection, change_frame
        from .parallelism import Frame

        r = self.base.dim
        kind = self.data.get("christoffel_frame", "coordinate")
        zero = self.base.zero
        gamma = [[[zero] * r for _ in range(r)] for _ in range(r)]
        for n, e in enumerate(self.require("christoffel")):
            if max(e["i"], e["j"], e["k"]) > r:
                raise SchemaError("Christoffel index out of range", pointer=f"/christoffel/{n}")
            gamma[e["i"] - 1][e["j"] - 1][e["k"] - 1] = self.expr(e["value"], f"/christoffel/{n}/value",
                                                                  self.base)
        if kind == "coordinate":
            C = FrameConnection(Frame.coordinate(self.base), gamma)
            return change_frame(C, frame) if frame is not None else C
        if frame is None:
            raise SchemaError("parallelism-frame Christoffels need a frame", pointer="/frame")
        return FrameConnection(frame, gamma)

    def horizontal(self):
        return self._fields("horizontal", self.require("horizontal"))

    def values(self, key):
        out = {}
        for name, v in sorted(self.data.get(key, {}).items()):
            if name not in self.chart.symbols or name in self.chart.parameters:
                raise SchemaError(f"unknown coordinate or tower element {name}", pointer=f"/{key}/{name}")
            out[name] = self.expr(v, f"/{key}/{name}", self.base.constants())
        return out

    def isogeny(self):
        data = self.require("isogeny")
        target = Chart(tuple(data["target_chart"]), self.base.field)
        if len(data["map"]) != target.dim:
            raise SchemaError("map needs one component per target coordinate", pointer="/isogeny/map")
        comps = [self.expr(v, f"/isogeny/map/{i}", self.base) for i, v in enumerate(data["map"])]
        fields = []
        for i, row in enumerate(data["target_frame"]):
            if len(row) != target.dim:
                raise SchemaError(f"field {i + 1} needs {target.dim} components",
                                  pointer=f"/isogeny/target_frame/{i}")
            fields.append(VectorField(target, [self.expr(v, f"/isogeny/target_frame/{i}/{a}", target)
                                               for a, v in enumerate(row)]))
        from .parallelism import Frame
        return RationalMap(self.base, target, comps), Frame(target, fields)

    def nu(self):
        from .jets import line_chart

        value = self.data.get("nu", "nu")
        if isinstance(value, str) and value.strip() in ("nu", "symbolic"):
            return None
        return self.expr(value, "/nu", line_chart(tuple(self.base.parameters)))

    def hypergeometric(self):
        from .galois.hypergeometric import HGParams

        data = self.require("hypergeometric")
        flags = dict(self.data.get("flags", {}))
        keys = set(data)
        try:
            if keys == {"a", "b", "c"}:
                return HGParams.from_abc(*(str(data[k]) for k in "abc"), flags=flags)
            if keys == {"l", "m", "n"}:
                return HGParams.from_lmn(*(str(data[k]) for k in "lmn"), flags=flags)
        except (ExprSyntaxError, UnknownSymbol) as exc:
            raise SchemaError(f"bad hypergeometric parameter: {exc}", pointer="/hypergeometric",
                              **exc.witness) from None
        except ValueError as exc:
            raise SchemaError(str(exc), pointer="/hypergeometric") from None
        raise SchemaError("give either a, b, c or l, m, n", pointer="/hypergeometric")
