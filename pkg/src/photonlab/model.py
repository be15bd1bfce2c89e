"""Optical setup data model: components, beam paths, serialization, checks.

A setup is a titled graph of components on a schematic table grid.  Positions
are advisory drawing coordinates only; no geometric optics is derived from
them.  Beam paths are directed edges between component ids, and propagation
order is the listed order.

Construction is permissive (duplicate ids, dangling paths and missing
sources/detectors are representable); :func:`validate_structure` reports such
problems as findings rather than raising, so that linting stages can surface
them to the user.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Iterable, Mapping

__all__ = [
    "Unit",
    "ComponentKind",
    "Quantity",
    "Component",
    "BeamPath",
    "OpticalSetup",
    "StructureFinding",
    "SetupParseError",
    "validate_structure",
    "serialize_setup",
    "parse_setup",
    "CANONICAL_PARAM_NAMES",
]

# Documented canonical parameter names.  Free-form names are allowed so that
# custom components are not blocked; these spellings are what the bundled
# library and the design linter use.
CANONICAL_PARAM_NAMES = (
    "wavelength_nm",
    "power_mw",
    "efficiency",
    "reflectivity",
    "bandwidth_nm",
    "dark_counts_hz",
    "timing_resolution_ps",
    "transmittivity",
    "angle_deg",
)

# dB is reserved for logarithmic loss/gain figures; a dB value on e.g. a
# wavelength is always a mistake.
_DB_PARAM_TOKENS = ("squeezing", "attenuation", "rejection", "loss", "extinction")


class Unit(str, Enum):
    NM = "nm"
    MM = "mm"
    M = "m"
    MW = "mW"
    MHZ = "MHz"
    GHZ = "GHz"
    HZ = "Hz"
    PS = "ps"
    FS = "fs"
    DB = "dB"
    DEGREE = "degree"
    DIMENSIONLESS = "dimensionless"
    COUNT_PER_S = "count_per_s"
    CELSIUS = "celsius"


class ComponentKind(str, Enum):
    SOURCE = "source"
    DETECTOR = "detector"
    CRYSTAL = "crystal"
    PASSIVE_OPTICS = "passive_optics"
    MEASUREMENT = "measurement"
    MODULATION = "modulation"


@dataclass(frozen=True)
class Quantity:
    """A real value tagged with an explicit unit."""

    value: float
    unit: Unit

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"quantity value must be finite, got {self.value!r}")
        if not isinstance(self.unit, Unit):
            object.__setattr__(self, "unit", Unit(self.unit))


@dataclass(frozen=True)
class Component:
    id: str
    kind: ComponentKind
    label: str
    position: tuple[float, float]  # (x_mm, y_mm) on the table grid
    params: Mapping[str, Quantity] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise ValueError("component id must be non-empty")
        if not isinstance(self.kind, ComponentKind):
            object.__setattr__(self, "kind", ComponentKind(self.kind))
        for name, q in self.params.items():
            if q.unit is Unit.DB and not any(t in name.lower() for t in _DB_PARAM_TOKENS):
                raise ValueError(
                    f"component {self.id!r}: dB unit not allowed on parameter {name!r}"
                )


@dataclass(frozen=True)
class BeamPath:
    from_id: str
    to_id: str
    order_index: int


@dataclass(frozen=True)
class OpticalSetup:
    """Complete experiment description; the contract between all stages."""

    title: str
    description: str
    components: tuple[Component, ...]
    beam_paths: tuple[BeamPath, ...]
    physics_explanation: str = ""
    expected_outcomes: tuple[str, ...] = ()
    created_at: str = "1970-01-01T00:00:00+00:00"  # RFC 3339, caller-supplied

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "beam_paths", tuple(self.beam_paths))
        object.__setattr__(self, "expected_outcomes", tuple(self.expected_outcomes))

    def component(self, component_id: str) -> Component:
        for c in self.components:
            if c.id == component_id:
                return c
        raise KeyError(component_id)

    def components_of_kind(self, kind: ComponentKind) -> tuple[Component, ...]:
        return tuple(c for c in self.components if c.kind is kind)


@dataclass(frozen=True)
class StructureFinding:
    """One structural defect; an empty finding list means structurally sound."""

    code: str
    subject: str
    message: str


def validate_structure(setup: OpticalSetup) -> list[StructureFinding]:
    """Check graph-level soundness of a setup.

    Reported findings: duplicate component ids, beam paths with endpoints
    that do not exist or that loop on themselves, missing source/detector
    components, and detectors that no source can reach along beam paths.
    """
    findings: list[StructureFinding] = []

    seen: set[str] = set()
    for c in setup.components:
        if c.id in seen:
            findings.append(
                StructureFinding("duplicate-id", c.id, f"component id {c.id!r} appears more than once")
            )
        seen.add(c.id)

    ids = {c.id for c in setup.components}
    for p in setup.beam_paths:
        for endpoint in (p.from_id, p.to_id):
            if endpoint not in ids:
                findings.append(
                    StructureFinding(
                        "dangling-endpoint",
                        endpoint,
                        f"beam path {p.from_id!r}->{p.to_id!r} references unknown component {endpoint!r}",
                    )
                )
        if p.from_id == p.to_id:
            findings.append(
                StructureFinding("self-loop", p.from_id, f"beam path loops on component {p.from_id!r}")
            )

    sources = [c.id for c in setup.components if c.kind is ComponentKind.SOURCE]
    detectors = [c.id for c in setup.components if c.kind is ComponentKind.DETECTOR]
    if not sources:
        findings.append(StructureFinding("missing-source", "", "setup has no source component"))
    if not detectors:
        findings.append(StructureFinding("missing-detector", "", "setup has no detector component"))

    # Breadth-first reachability from all sources along directed paths.
    adjacency: dict[str, list[str]] = {}
    for p in setup.beam_paths:
        if p.from_id in ids and p.to_id in ids:
            adjacency.setdefault(p.from_id, []).append(p.to_id)
    reached = set(sources)
    frontier = list(sources)
    while frontier:
        nxt = []
        for node in frontier:
            for nb in adjacency.get(node, ()):
                if nb not in reached:
                    reached.add(nb)
                    nxt.append(nb)
        frontier = nxt
    for d in detectors:
        if d not in reached:
            findings.append(
                StructureFinding(
                    "unreachable-detector", d, f"detector {d!r} is not reachable from any source"
                )
            )
    return findings


class SetupParseError(ValueError):
    """Parse failure with a JSON-path style location."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def _require_keys(obj: Mapping[str, Any], allowed: Iterable[str], required: Iterable[str], path: str):
    allowed = set(allowed)
    for key in obj:
        if key not in allowed:
            raise SetupParseError(path, f"unknown key {key!r}")
    for key in required:
        if key not in obj:
            raise SetupParseError(path, f"missing key {key!r}")


def _parse_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SetupParseError(path, f"expected a number, got {type(value).__name__}")
    if not math.isfinite(value):
        raise SetupParseError(path, f"number must be finite, got {value!r}")
    return float(value)


def _parse_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SetupParseError(path, f"expected a string, got {type(value).__name__}")
    return value


def _parse_quantity(obj: Any, path: str) -> Quantity:
    if not isinstance(obj, dict):
        raise SetupParseError(path, "expected an object with value/unit")
    _require_keys(obj, ("value", "unit"), ("value", "unit"), path)
    value = _parse_number(obj["value"], f"{path}.value")
    unit_raw = _parse_str(obj["unit"], f"{path}.unit")
    try:
        unit = Unit(unit_raw)
    except ValueError:
        raise SetupParseError(f"{path}.unit", f"unknown unit {unit_raw!r}") from None
    return Quantity(value, unit)


def _parse_component(obj: Any, path: str) -> Component:
    if not isinstance(obj, dict):
        raise SetupParseError(path, "expected a component object")
    _require_keys(
        obj,
        ("id", "kind", "label", "position", "params"),
        ("id", "kind", "label", "position"),
        path,
    )
    cid = _parse_str(obj["id"], f"{path}.id")
    if not cid:
        raise SetupParseError(f"{path}.id", "component id must be non-empty")
    kind_raw = _parse_str(obj["kind"], f"{path}.kind")
    try:
        kind = ComponentKind(kind_raw)
    except ValueError:
        raise SetupParseError(f"{path}.kind", f"unknown component kind {kind_raw!r}") from None
    label = _parse_str(obj["label"], f"{path}.label")
    pos = obj["position"]
    if not isinstance(pos, dict):
        raise SetupParseError(f"{path}.position", "expected an object with x_mm/y_mm")
    _require_keys(pos, ("x_mm", "y_mm"), ("x_mm", "y_mm"), f"{path}.position")
    x = _parse_number(pos["x_mm"], f"{path}.position.x_mm")
    y = _parse_number(pos["y_mm"], f"{path}.position.y_mm")
    params: dict[str, Quantity] = {}
    for name, q in obj.get("params", {}).items():
        params[name] = _parse_quantity(q, f"{path}.params.{name}")
    try:
        return Component(cid, kind, label, (x, y), params)
    except ValueError as exc:
        raise SetupParseError(path, str(exc)) from None


def _parse_beam_path(obj: Any, path: str) -> BeamPath:
    if not isinstance(obj, dict):
        raise SetupParseError(path, "expected a beam path object")
    _require_keys(obj, ("from_id", "to_id", "order_index"), ("from_id", "to_id", "order_index"), path)
    from_id = _parse_str(obj["from_id"], f"{path}.from_id")
    to_id = _parse_str(obj["to_id"], f"{path}.to_id")
    order = obj["order_index"]
    if isinstance(order, bool) or not isinstance(order, int):
        raise SetupParseError(f"{path}.order_index", "expected an integer")
    return BeamPath(from_id, to_id, order)


def _parse_timestamp(value: Any, path: str) -> str:
    ts = _parse_str(value, path)
    try:
        datetime.fromisoformat(ts.replace("Z", "+00:00"))
    except ValueError:
        raise SetupParseError(path, f"not an RFC 3339 timestamp: {ts!r}") from None
    return ts


def setup_to_dict(setup: OpticalSetup) -> dict[str, Any]:
    return {
        "title": setup.title,
        "description": setup.description,
        "components": [
            {
                "id": c.id,
                "kind": c.kind.value,
                "label": c.label,
                "position": {"x_mm": c.position[0], "y_mm": c.position[1]},
                "params": {
                    name: {"value": q.value, "unit": q.unit.value} for name, q in c.params.items()
                },
            }
            for c in setup.components
        ],
        "beam_paths": [
            {"from_id": p.from_id, "to_id": p.to_id, "order_index": p.order_index}
            for p in setup.beam_paths
        ],
        "physics_explanation": setup.physics_explanation,
        "expected_outcomes": list(setup.expected_outcomes),
        "created_at": setup.created_at,
    }


def setup_from_dict(obj: Any, path: str = "setup") -> OpticalSetup:
    if not isinstance(obj, dict):
        raise SetupParseError(path, "expected a setup object")
    keys = (
        "title",
        "description",
        "components",
        "beam_paths",
        "physics_explanation",
        "expected_outcomes",
        "created_at",
    )
    _require_keys(obj, keys, keys, path)
    title = _parse_str(obj["title"], f"{path}.title")
    description = _parse_str(obj["description"], f"{path}.description")
    if not isinstance(obj["components"], list):
        raise SetupParseError(f"{path}.components", "expected an array")
    components = tuple(
        _parse_component(c, f"{path}.components[{i}]") for i, c in enumerate(obj["components"])
    )
    if not isinstance(obj["beam_paths"], list):
        raise SetupParseError(f"{path}.beam_paths", "expected an array")
    beam_paths = tuple(
        _parse_beam_path(p, f"{path}.beam_paths[{i}]") for i, p in enumerate(obj["beam_paths"])
    )
    physics = _parse_str(obj["physics_explanation"], f"{path}.physics_explanation")
    outcomes_raw = obj["expected_outcomes"]
    if not isinstance(outcomes_raw, list):
        raise SetupParseError(f"{path}.expected_outcomes", "expected an array")
    outcomes = tuple(
        _parse_str(o, f"{path}.expected_outcomes[{i}]") for i, o in enumerate(outcomes_raw)
    )
    created_at = _parse_timestamp(obj["created_at"], f"{path}.created_at")
    return OpticalSetup(title, description, components, beam_paths, physics, outcomes, created_at)


def serialize_setup(setup: OpticalSetup) -> bytes:
    """UTF-8 JSON encoding; the exact inverse of :func:`parse_setup`."""
    return (json.dumps(setup_to_dict(setup), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def parse_setup(data: bytes | str) -> OpticalSetup:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SetupParseError("", f"invalid JSON: {exc}") from None
    return setup_from_dict(obj)
