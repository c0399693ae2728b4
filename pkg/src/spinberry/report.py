"""Run reports and their JSON / CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

CSV_COLUMNS = [
    "system",
    "theta",
    "n_samples",
    "band",
    "m_label",
    "energy",
    "berry_phase",
    "predicted_phase",
    "adiabatic_phase",
    "flags",
]
FLAGS = frozenset({"disputed_paper_value", "nonadiabatic", "tracking_failure"})
SIG_DIGITS = 12


def fmt(x: float) -> str:
    return format(float(x), f".{SIG_DIGITS}g")


def round_sig(x):
    """Round floats (recursively) to 12 significant digits."""
    if isinstance(x, float):
        return float(fmt(x))
    if isinstance(x, dict):
        return {k: round_sig(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [round_sig(v) for v in x]
    return x


@dataclass
class BandRecord:
    band: int
    m_label: float | None
    energy: float
    berry_phase_numeric: float | None
    predicted_phase: float | None
    adiabatic_phase: float | None = None
    flags: list[str] = field(default_factory=list)


@dataclass
class BlockRecord:
    block: int
    dim: int
    energy: float
    eigenphases: list[float]
    predicted_eigenphases: list[float] | None = None
    flags: list[str] = field(default_factory=list)
    note: str = "eigenphases are defined mod 2pi, reported in (-pi, pi]"


@dataclass
class RunReport:
    system: str
    spec: dict
    theta: float
    n_samples: int
    bands: list[BandRecord] = field(default_factory=list)
    blocks: list[BlockRecord] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    timing: float | None = None

    def validate(self) -> None:
        for rec in [*self.bands, *self.blocks]:
            bad = set(rec.flags) - FLAGS
            if bad:
                raise ValueError(f"unknown flags {sorted(bad)}")
        for value in _numbers(asdict(self)):
            if not math.isfinite(value):
                raise ValueError("report contains a non-finite number")

    def to_dict(self) -> dict:
        return round_sig(asdict(self))

    def csv_rows(self) -> list[list[str]]:
        rows = []
        for b in self.bands:
            rows.append(
                [
                    self.system,
                    fmt(self.theta),
                    str(self.n_samples),
                    str(b.band),
                    "" if b.m_label is None else fmt(b.m_label),
                    fmt(b.energy),
                    "" if b.berry_phase_numeric is None else fmt(b.berry_phase_numeric),
                    "" if b.predicted_phase is None else fmt(b.predicted_phase),
                    "" if b.adiabatic_phase is None else fmt(b.adiabatic_phase),
                    ";".join(b.flags),
                ]
            )
        return rows


def _numbers(obj):
    if isinstance(obj, bool):
        return
    if isinstance(obj, (int, float)):
        yield float(obj)
    elif isinstance(obj, dict):
        for v in obj.values():
            yield from _numbers(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            yield from _numbers(v)


def render(reports: RunReport | list[RunReport], fmt_name: str = "json") -> str:
    many = isinstance(reports, list)
    items = reports if many else [reports]
    for r in items:
        r.validate()
    if fmt_name == "json":
        payload = [r.to_dict() for r in items] if many else items[0].to_dict()
        return json.dumps(payload, indent=2) + "\n"
    if fmt_name == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in items:
            writer.writerows(r.csv_rows())
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt_name!r}")


def emit_report(reports: RunReport | list[RunReport], fmt_name: str = "json", path: str | Path | None = None) -> None:
    """Write one report (or a sweep of them) as JSON or CSV to ``path`` or stdout."""
    text = render(reports, fmt_name)
    write_text(text, path)


def write_text(text: str, path: str | Path | None) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc
