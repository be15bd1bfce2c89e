"""Self-contained result bundles: design, metrics, series CSVs, summary.

A bundle directory holds everything needed to re-read a run without any
process state: the design in the standard setup format, a metrics index
listing every scalar and every series file, one two-column CSV per series
(header ``axis,value``, '.' decimal separator, shortest round-trip float
formatting), a Markdown summary, and the pipeline history when one exists.
Nothing in a bundle depends on the clock, so identical inputs produce
byte-identical bundles.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .experiments import MetricSet
from .model import OpticalSetup, serialize_setup
from .pipeline import RunRecord, record_to_dict

__all__ = ["ReportBundle", "BundleError", "write_bundle"]

DESIGN_FILE = "design.json"
METRICS_FILE = "metrics.json"
SUMMARY_FILE = "summary.md"
HISTORY_FILE = "history.json"


class BundleError(OSError):
    pass


@dataclass(frozen=True)
class ReportBundle:
    directory: Path
    design_file: Path
    metrics_file: Path
    summary_file: Path
    series_files: dict[str, Path] = field(default_factory=dict)
    history_file: Path | None = None


def _slug(name: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_")
    return slug or "series"


def _format_value(x: float) -> str:
    return repr(float(x))


def write_bundle(
    out_dir: str | Path,
    setup: OpticalSetup,
    metrics: MetricSet,
    history: list[RunRecord] | None = None,
    seed: int | None = None,
) -> ReportBundle:
    """Write one run's outputs into a fresh directory.

    Refuses to write into an existing non-empty directory so prior results
    can never be clobbered.
    """
    directory = Path(out_dir)
    if directory.exists():
        if not directory.is_dir():
            raise BundleError(f"{directory}: exists and is not a directory")
        if any(directory.iterdir()):
            raise BundleError(f"{directory}: refusing to overwrite a non-empty directory")
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise BundleError(f"{directory}: cannot create bundle directory ({exc})") from exc

    design_file = directory / DESIGN_FILE
    design_file.write_bytes(serialize_setup(setup))

    series_files: dict[str, Path] = {}
    used_names: set[str] = set()
    for name in sorted(metrics.series):
        axis, values = metrics.series[name]
        base = _slug(name)
        filename = base
        suffix = 2
        while filename in used_names:
            filename = f"{base}_{suffix}"
            suffix += 1
        used_names.add(filename)
        path = directory / f"{filename}.csv"
        rows = ["axis,value"]
        rows.extend(f"{_format_value(a)},{_format_value(v)}" for a, v in zip(axis, values))
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        series_files[name] = path

    metrics_payload = {
        "experiment": setup.title,
        "seed": seed,
        "scalars": {k: metrics.scalars[k] for k in sorted(metrics.scalars)},
        "series_files": {name: series_files[name].name for name in sorted(series_files)},
        "notes": list(metrics.notes),
    }
    metrics_file = directory / METRICS_FILE
    metrics_file.write_text(
        json.dumps(metrics_payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )

    history_file = None
    if history is not None:
        history_file = directory / HISTORY_FILE
        history_file.write_text(
            json.dumps([record_to_dict(r) for r in history], indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )

    lines = [f"# {setup.title}", "", setup.description, ""]
    if seed is not None:
        lines += [f"Seed: {seed}", ""]
    lines += ["## Scalars", ""]
    for name in sorted(metrics.scalars):
        lines.append(f"- {name}: {_format_value(metrics.scalars[name])}")
    if series_files:
        lines += ["", "## Series", ""]
        for name in sorted(series_files):
            lines.append(f"- {name}: `{series_files[name].name}`")
    if history is not None:
        lines += ["", "## Pipeline history", ""]
        for record in history:
            score = record.alignment.score if record.alignment else "-"
            lines.append(
                f"- iteration {record.iteration}: {record.plan.key} "
                f"[{record.status.value}] score={score}"
            )
    summary_file = directory / SUMMARY_FILE
    summary_file.write_text("\n".join(lines) + "\n", encoding="utf-8")

    return ReportBundle(directory, design_file, metrics_file, summary_file, series_files, history_file)
