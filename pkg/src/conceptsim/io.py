"""File formats: JSON for networks, scenarios, and parameters; CSV for traces.

All parsers are strict: unknown fields, wrong types, and unresolved names are
hard errors, never warnings. Serialized output is canonical (sorted keys,
shortest round-trip floats), so goldens are byte-stable across runs.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from enum import Enum
from io import StringIO
from typing import Iterable, Mapping, Union

from .engine import EngineParams, ErrorRouting, Trace
from .errors import (
    EmptyScenario,
    NonBottomClamp,
    ParseError,
    SchemaMismatch,
    TypeMismatch,
    UnknownElement,
    UnknownField,
)
from .model import ConceptId, ConceptSpec, NetworkSpec, ValidatedNetwork


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None


def _require_object(value, path: str, allowed: frozenset[str], required: frozenset[str]):
    if not isinstance(value, dict):
        raise TypeMismatch(f"{path}: expected an object")
    for key in value:
        if key not in allowed:
            raise UnknownField(f"{path}: unknown field {key!r}")
    for key in sorted(required):
        if key not in value:
            raise TypeMismatch(f"{path}: missing field {key!r}")
    return value


def _require_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise TypeMismatch(f"{path}: expected a list")
    return value


def _require_str(value, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise TypeMismatch(f"{path}: expected a non-empty string")
    return value


def _require_nonneg_int(value, path: str) -> int:
    if type(value) is not int or value < 0:
        raise TypeMismatch(f"{path}: expected a non-negative integer")
    return value


def _require_number(value, path: str) -> float:
    if type(value) not in (int, float):
        raise TypeMismatch(f"{path} expected a number")
    return float(value)


# --- networks ---

def parse_network_file(text: str) -> NetworkSpec:
    """Parse the network JSON format; validation is a separate step."""
    root = _load_json(text)
    _require_object(root, "$", frozenset({"concepts"}), frozenset({"concepts"}))
    concepts: list[ConceptSpec] = []
    for i, raw in enumerate(_require_list(root["concepts"], "$.concepts")):
        path = f"$.concepts[{i}]"
        _require_object(
            raw, path, frozenset({"name", "layer", "patterns"}),
            frozenset({"name", "layer", "patterns"}),
        )
        name = _require_str(raw["name"], f"{path}.name")
        layer = _require_nonneg_int(raw["layer"], f"{path}.layer")
        patterns = []
        for k, pat in enumerate(_require_list(raw["patterns"], f"{path}.patterns")):
            elems = _require_list(pat, f"{path}.patterns[{k}]")
            patterns.append(
                tuple(
                    _require_str(e, f"{path}.patterns[{k}][{j}]")
                    for j, e in enumerate(elems)
                )
            )
        concepts.append(ConceptSpec(name=name, layer=layer, patterns=tuple(patterns)))
    return NetworkSpec(tuple(concepts))


def serialize_network(spec: Union[NetworkSpec, ValidatedNetwork]) -> str:
    """Canonical JSON for a network; element order inside patterns is preserved
    for a NetworkSpec and sorted by id for a ValidatedNetwork."""
    if isinstance(spec, ValidatedNetwork):
        net = spec
        concepts = [
            {
                "name": net.names[c],
                "layer": net.layer_of[c],
                "patterns": [
                    [net.names[e] for e in sorted(pat.elements)]
                    for pat in net.patterns_of(c)
                ],
            }
            for c in range(net.n_concepts)
        ]
    else:
        concepts = [
            {"name": c.name, "layer": c.layer, "patterns": [list(p) for p in c.patterns]}
            for c in spec.concepts
        ]
    return json.dumps({"concepts": concepts}, sort_keys=True, indent=2) + "\n"


# --- scenarios ---

@dataclass(frozen=True)
class ScenarioPhase:
    """One clamp episode; hold is None for run-to-convergence or a sweep count."""

    clamp: Mapping[str, int]
    hold: int | None = None


@dataclass(frozen=True)
class ScenarioSpec:
    phases: tuple[ScenarioPhase, ...]

    def resolve(self, net: ValidatedNetwork) -> list[tuple[dict[ConceptId, int], int | None]]:
        """Name-resolved (clamp, hold) pairs ready for the engine."""
        return [
            ({net.name_to_id[name]: v for name, v in ph.clamp.items()}, ph.hold)
            for ph in self.phases
        ]


def parse_scenario_file(text: str, net: ValidatedNetwork) -> ScenarioSpec:
    """Parse and resolve a scenario against an already-validated network."""
    root = _load_json(text)
    _require_object(root, "$", frozenset({"phases"}), frozenset({"phases"}))
    raw_phases = _require_list(root["phases"], "$.phases")
    if not raw_phases:
        raise EmptyScenario("a scenario needs at least one phase")
    phases: list[ScenarioPhase] = []
    for i, raw in enumerate(raw_phases):
        path = f"$.phases[{i}]"
        _require_object(raw, path, frozenset({"clamp", "hold"}), frozenset({"clamp", "hold"}))
        clamp_raw = raw["clamp"]
        if not isinstance(clamp_raw, dict):
            raise TypeMismatch(f"{path}.clamp: expected an object")
        clamp: dict[str, int] = {}
        for name, value in clamp_raw.items():
            if type(value) is not int or value not in (0, 1):
                raise TypeMismatch(f"{path}.clamp.{name}: expected 0 or 1")
            cid = net.name_to_id.get(name)
            if cid is None:
                raise UnknownElement(f"{path}.clamp: no concept named {name!r}")
            if net.layer_of[cid] != 0:
                raise NonBottomClamp(f"{path}.clamp: {name!r} is not a layer-0 concept")
            clamp[name] = value
        hold_raw = raw["hold"]
        if hold_raw == "converge":
            hold = None
        elif type(hold_raw) is int and hold_raw >= 1:
            hold = hold_raw
        else:
            raise TypeMismatch(f"{path}.hold: expected \"converge\" or a positive integer")
        phases.append(ScenarioPhase(clamp=clamp, hold=hold))
    return ScenarioSpec(tuple(phases))


def serialize_scenario(spec: ScenarioSpec) -> str:
    phases = [
        {
            "clamp": {name: ph.clamp[name] for name in sorted(ph.clamp)},
            "hold": "converge" if ph.hold is None else ph.hold,
        }
        for ph in spec.phases
    ]
    return json.dumps({"phases": phases}, sort_keys=True, indent=2) + "\n"


# --- engine parameters ---

_PARAM_FIELDS = frozenset(
    {"w_ff", "w_self", "w_lat", "w_err", "theta", "tau", "max_sweeps", "error_routing"}
)


def parse_params(text: str | None = None) -> EngineParams:
    """Parse a flat params object; absent fields take the documented defaults.

    Only syntax and field names are checked here; the numeric invariants are
    enforced when an engine is initialized.
    """
    if text is None:
        return EngineParams()
    root = _load_json(text)
    _require_object(root, "$", _PARAM_FIELDS, frozenset())
    kwargs = {}
    for key in ("w_ff", "w_self", "w_lat", "w_err", "theta", "tau"):
        if key in root:
            kwargs[key] = _require_number(root[key], f"$.{key}")
    if "max_sweeps" in root:
        value = root["max_sweeps"]
        if type(value) is not int:
            raise TypeMismatch("$.max_sweeps: expected an integer")
        kwargs["max_sweeps"] = value
    if "error_routing" in root:
        value = root["error_routing"]
        routings = {r.value: r for r in ErrorRouting}
        if not isinstance(value, str) or value not in routings:
            raise TypeMismatch(
                "$.error_routing: expected \"split\" or \"all_global\""
            )
        kwargs["error_routing"] = routings[value]
    return EngineParams(**kwargs)


def serialize_params(params: EngineParams) -> str:
    obj = {
        "w_ff": params.w_ff,
        "w_self": params.w_self,
        "w_lat": params.w_lat,
        "w_err": params.w_err,
        "theta": params.theta,
        "tau": params.tau,
        "max_sweeps": params.max_sweeps,
        "error_routing": params.error_routing.value,
    }
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# --- traces ---

class UnitKind(Enum):
    CONCEPT = "concept"
    OMISSION = "omission"
    COMMISSION = "commission"


_KIND_ORDER = {UnitKind.CONCEPT: 0, UnitKind.OMISSION: 1, UnitKind.COMMISSION: 2}

CSV_HEADER = ("phase", "sweep", "kind", "name", "value")


@dataclass(frozen=True)
class TraceRow:
    phase: int
    sweep: int
    kind: UnitKind
    name: str
    value: int

    def sort_key(self):
        return (self.phase, self.sweep, _KIND_ORDER[self.kind], self.name)


def trace_rows(trace: Trace) -> list[TraceRow]:
    """Flatten a trace into canonically sorted rows.

    Concept rows exist for every concept; omission/commission rows only for
    concepts below the top layer (top-layer concepts have no error units).
    """
    net = trace.net
    error_units = [c for c in range(net.n_concepts) if net.layer_of[c] < net.max_layer]
    rows: list[TraceRow] = []
    for pi, phase in enumerate(trace.phases):
        for si, snap in enumerate(phase.snapshots):
            for c in range(net.n_concepts):
                rows.append(TraceRow(pi, si, UnitKind.CONCEPT, net.names[c], snap.activation[c]))
            for c in error_units:
                rows.append(TraceRow(pi, si, UnitKind.OMISSION, net.names[c], snap.omission[c]))
                rows.append(TraceRow(pi, si, UnitKind.COMMISSION, net.names[c], snap.commission[c]))
    rows.sort(key=TraceRow.sort_key)
    return rows


def _as_rows(trace: Union[Trace, Iterable[TraceRow]]) -> list[TraceRow]:
    if isinstance(trace, Trace):
        return trace_rows(trace)
    return sorted(trace, key=TraceRow.sort_key)


def write_trace_csv(trace: Union[Trace, Iterable[TraceRow]]) -> str:
    """Render rows as CSV with the fixed header, in canonical order."""
    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in _as_rows(trace):
        writer.writerow((row.phase, row.sweep, row.kind.value, row.name, row.value))
    return buf.getvalue()


def read_trace_csv(text: str) -> list[TraceRow]:
    """Parse a trace CSV back into canonically sorted rows (lossless round-trip)."""
    reader = csv.reader(StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaMismatch("missing header row") from None
    if tuple(header) != CSV_HEADER:
        raise SchemaMismatch(f"expected header {','.join(CSV_HEADER)}, got {','.join(header)}")
    kinds = {k.value: k for k in UnitKind}
    rows: list[TraceRow] = []
    seen: set[tuple] = set()
    for lineno, record in enumerate(reader, start=2):
        if not record:
            continue
        if len(record) != 5:
            raise ParseError(f"line {lineno}: expected 5 fields, got {len(record)}")
        phase_s, sweep_s, kind_s, name, value_s = record
        try:
            phase, sweep, value = int(phase_s), int(sweep_s), int(value_s)
        except ValueError:
            raise ParseError(f"line {lineno}: phase, sweep and value must be integers") from None
        if phase < 0 or sweep < 0:
            raise SchemaMismatch(f"line {lineno}: negative phase or sweep index")
        if kind_s not in kinds:
            raise SchemaMismatch(f"line {lineno}: unknown kind {kind_s!r}")
        if value not in (0, 1):
            raise SchemaMismatch(f"line {lineno}: value must be 0 or 1")
        if not name:
            raise SchemaMismatch(f"line {lineno}: empty unit name")
        key = (phase, sweep, kind_s, name)
        if key in seen:
            raise SchemaMismatch(f"line {lineno}: duplicate row for {key}")
        seen.add(key)
        rows.append(TraceRow(phase, sweep, kinds[kind_s], name, value))
    rows.sort(key=TraceRow.sort_key)
    return rows


def render_ascii_timeline(trace: Union[Trace, Iterable[TraceRow]]) -> str:
    """One row per unit, one column per sweep, phases separated by '|'.

    Characters: '#' concept active, 'o' commission error (the unit is active),
    'g' omission error (the unit is inactive), '.' inactive. The three unit
    kinds of one concept collapse into one row without loss: omission implies
    inactive and commission implies active.
    """
    rows = _as_rows(trace)
    if not rows:
        raise ValueError("cannot render an empty trace")
    columns = sorted({(r.phase, r.sweep) for r in rows})
    names = sorted({r.name for r in rows})
    values = {(r.name, r.kind, (r.phase, r.sweep)): r.value for r in rows}
    width = max(len(n) for n in names)
    lines = []
    for name in names:
        cells = []
        previous_phase = columns[0][0]
        for col in columns:
            if col[0] != previous_phase:
                cells.append("|")
                previous_phase = col[0]
            if values.get((name, UnitKind.COMMISSION, col)):
                cells.append("o")
            elif values.get((name, UnitKind.OMISSION, col)):
                cells.append("g")
            elif values.get((name, UnitKind.CONCEPT, col)):
                cells.append("#")
            else:
                cells.append(".")
        lines.append(f"{name:<{width}} " + "".join(cells))
    return "\n".join(lines)
