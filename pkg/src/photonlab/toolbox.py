"""Three-tier component library with an approval flow for validated setups.

Tier files (JSON, one per tier):

* ``primitives.json`` -- immutable basic components, bundled with the
  package (50+ entries spanning sources, passive optics, crystals,
  detectors, measurement electronics and modulators).
* ``learned_composites.json`` -- whole validated setups saved under a
  versioned name; approving a setup appends version max+1 for its name.
* ``custom_components.json`` -- specialized one-off component definitions
  with usage counters.

Persistence is whole-file atomic rewrite (write temp, rename over), so a
crash can never leave a half-written tier file.  Timestamps are always
caller-supplied; nothing in this module reads a clock.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .model import (
    ComponentKind,
    OpticalSetup,
    Quantity,
    SetupParseError,
    setup_from_dict,
    setup_to_dict,
    validate_structure,
)

__all__ = [
    "PrimitiveEntry",
    "Composite",
    "CustomComponent",
    "Toolbox",
    "ToolboxError",
    "bundled_primitives_path",
    "load_toolbox",
    "approve_setup",
    "record_usage",
    "composite_text",
]

PRIMITIVES_FILE = "primitives.json"
COMPOSITES_FILE = "learned_composites.json"
CUSTOM_FILE = "custom_components.json"


class ToolboxError(ValueError):
    pass


@dataclass(frozen=True)
class PrimitiveEntry:
    name: str
    category: ComponentKind
    params: dict[str, Quantity] = field(default_factory=dict)


@dataclass(frozen=True)
class Composite:
    name: str
    version: int
    setup: OpticalSetup
    approved_at: str

    def __post_init__(self):
        if self.version < 1:
            raise ToolboxError(f"composite version must be positive, got {self.version}")


@dataclass(frozen=True)
class CustomComponent:
    name: str
    definition: str
    params: dict[str, Quantity] = field(default_factory=dict)
    usage_count: int = 0
    last_used: str = ""

    def __post_init__(self):
        if self.usage_count < 0:
            raise ToolboxError("usage_count must be non-negative")


@dataclass
class Toolbox:
    primitives: tuple[PrimitiveEntry, ...]
    composites: list[Composite]
    custom: dict[str, CustomComponent]
    directory: Path | None = None

    def latest(self, name: str) -> Composite | None:
        versions = [c for c in self.composites if c.name == name]
        return max(versions, key=lambda c: c.version) if versions else None

    def tier_counts(self) -> dict[str, int]:
        return {
            "primitives": len(self.primitives),
            "composites": len(self.composites),
            "custom": len(self.custom),
        }


def bundled_primitives_path() -> Path:
    return Path(str(resources.files("photonlab").joinpath("data", PRIMITIVES_FILE)))


def _parse_params(obj, path: str) -> dict[str, Quantity]:
    params = {}
    for name, q in (obj or {}).items():
        if not isinstance(q, dict) or set(q) != {"value", "unit"}:
            raise SetupParseError(f"{path}.{name}", "expected {value, unit}")
        try:
            params[name] = Quantity(q["value"], q["unit"])
        except ValueError as exc:
            raise SetupParseError(f"{path}.{name}", str(exc)) from None
    return params


def _load_json(path: Path):
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SetupParseError(str(path), f"invalid JSON: {exc}") from None


def _load_primitives(path: Path) -> tuple[PrimitiveEntry, ...]:
    raw = _load_json(path)
    if not isinstance(raw, list):
        raise SetupParseError(str(path), "primitive tier must be an array")
    entries = []
    for i, obj in enumerate(raw):
        where = f"{path}[{i}]"
        if not isinstance(obj, dict) or "name" not in obj or "category" not in obj:
            raise SetupParseError(where, "primitive needs name and category")
        try:
            kind = ComponentKind(obj["category"])
        except ValueError:
            raise SetupParseError(f"{where}.category", f"unknown category {obj['category']!r}") from None
        entries.append(PrimitiveEntry(obj["name"], kind, _parse_params(obj.get("params"), where)))
    return tuple(entries)


def _load_composites(path: Path) -> list[Composite]:
    raw = _load_json(path)
    if not isinstance(raw, list):
        raise SetupParseError(str(path), "composite tier must be an array")
    seen: set[tuple[str, int]] = set()
    composites = []
    for i, obj in enumerate(raw):
        where = f"{path}[{i}]"
        for key in ("name", "version", "approved_at", "setup"):
            if key not in obj:
                raise SetupParseError(where, f"missing key {key!r}")
        key = (obj["name"], obj["version"])
        if key in seen:
            raise ToolboxError(f"duplicate composite {key[0]!r} v{key[1]} in {path}")
        seen.add(key)
        setup = setup_from_dict(obj["setup"], f"{where}.setup")
        composites.append(Composite(obj["name"], int(obj["version"]), setup, obj["approved_at"]))
    return composites


def _load_custom(path: Path) -> dict[str, CustomComponent]:
    raw = _load_json(path)
    if not isinstance(raw, list):
        raise SetupParseError(str(path), "custom tier must be an array")
    custom = {}
    for i, obj in enumerate(raw):
        where = f"{path}[{i}]"
        for key in ("name", "definition"):
            if key not in obj:
                raise SetupParseError(where, f"missing key {key!r}")
        custom[obj["name"]] = CustomComponent(
            obj["name"],
            obj["definition"],
            _parse_params(obj.get("params"), where),
            int(obj.get("usage_count", 0)),
            obj.get("last_used", ""),
        )
    return custom


def load_toolbox(directory: str | Path | None = None, primitives_path: str | Path | None = None) -> Toolbox:
    """Load all three tiers.

    ``directory`` holds the mutable tiers (missing files mean empty tiers).
    The primitive tier comes from ``primitives_path``, from
    ``directory/primitives.json`` when present, or from the bundled library.
    """
    directory = Path(directory) if directory is not None else None
    if primitives_path is None:
        candidate = directory / PRIMITIVES_FILE if directory else None
        primitives_path = candidate if candidate and candidate.exists() else bundled_primitives_path()
    primitives = _load_primitives(Path(primitives_path))

    composites: list[Composite] = []
    custom: dict[str, CustomComponent] = {}
    if directory is not None:
        comp_file = directory / COMPOSITES_FILE
        if comp_file.exists():
            composites = _load_composites(comp_file)
        custom_file = directory / CUSTOM_FILE
        if custom_file.exists():
            custom = _load_custom(custom_file)
    return Toolbox(primitives, composites, custom, directory)


def _atomic_write(path: Path, payload: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _persist_composites(toolbox: Toolbox) -> None:
    if toolbox.directory is None:
        return
    payload = [
        {
            "name": c.name,
            "version": c.version,
            "approved_at": c.approved_at,
            "setup": setup_to_dict(c.setup),
        }
        for c in toolbox.composites
    ]
    _atomic_write(
        toolbox.directory / COMPOSITES_FILE,
        json.dumps(payload, indent=2, ensure_ascii=False) + "\n",
    )


def _persist_custom(toolbox: Toolbox) -> None:
    if toolbox.directory is None:
        return
    payload = [
        {
            "name": c.name,
            "definition": c.definition,
            "params": {n: {"value": q.value, "unit": q.unit.value} for n, q in c.params.items()},
            "usage_count": c.usage_count,
            "last_used": c.last_used,
        }
        for c in sorted(toolbox.custom.values(), key=lambda c: c.name)
    ]
    _atomic_write(
        toolbox.directory / CUSTOM_FILE,
        json.dumps(payload, indent=2, ensure_ascii=False) + "\n",
    )


def approve_setup(toolbox: Toolbox, setup: OpticalSetup, name: str, approved_at: str) -> Composite:
    """Append a validated setup as the next version of its name group.

    Rejects setups with structural findings; never mutates existing entries.
    """
    findings = validate_structure(setup)
    if findings:
        detail = "; ".join(f"{f.code}: {f.message}" for f in findings)
        raise ToolboxError(f"setup rejected for approval: {detail}")
    latest = toolbox.latest(name)
    version = latest.version + 1 if latest else 1
    composite = Composite(name, version, setup, approved_at)
    toolbox.composites.append(composite)
    _persist_composites(toolbox)
    return composite


def record_usage(toolbox: Toolbox, name: str, at: str) -> CustomComponent:
    """Bump the usage counter of a custom component; raises for unknown names."""
    if name not in toolbox.custom:
        raise KeyError(f"no custom component named {name!r}")
    entry = toolbox.custom[name]
    updated = replace(entry, usage_count=entry.usage_count + 1, last_used=at)
    toolbox.custom[name] = updated
    _persist_custom(toolbox)
    return updated


def composite_text(name: str, setup: OpticalSetup) -> str:
    """Indexed text for a composite: title, description, sorted component labels."""
    labels = " ".join(sorted(c.label for c in setup.components))
    return f"{name} {setup.title} {setup.description} {labels}"
