"""Assemble engine results into reports; shared by the CLI and the acceptance suite."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .adiabatic import evolve_loop, extract_geometric_phase
from .berry import (
    DEFAULT_SAMPLES,
    berry_phase_band,
    block_projections,
    m_label,
    predicted_phase,
    track_bands,
    wrap_phase,
    wz_holonomy,
    wz_projection_phases,
)
from .errors import NonAdiabatic
from .oracle import (
    expected_phases,
    printed_spin1_half_energies,
    table_kind,
    two_spin_coupling_constants,
    two_spin_transcription_report,
)
from .report import BandRecord, BlockRecord, RunReport
from .systems import PRESETS, SystemSpec, loop_samples

TWO_SPIN_TABLE_PRESETS = ("hydrogen", "positronium", "muonium")


def system_name(spec: SystemSpec) -> str:
    if spec.kind == "quadrupole":
        return "quadrupole"
    for name, vals in PRESETS.items():
        if all(np.isclose(getattr(spec, k), v) for k, v in vals.items()):
            return name
    return "two-momenta"


def _disputed(spec: SystemSpec, m: float | None) -> bool:
    kind = table_kind(spec)
    if kind is None or m is None:
        return False
    return any(r.disputed and r.m_label == m for r in expected_phases(kind, 0.0).rows)


def _block_record(ls, i) -> BlockRecord:
    b = ls.blocks[i]
    _, phases = wz_holonomy(ls, i)
    ms = block_projections(ls, i)
    diffs = np.abs(np.subtract.outer(ms, ms))
    # projections one unit apart are mixed by the holonomy; no scalar prediction
    abelian = not np.any(np.isclose(diffs, 1.0, atol=1e-6))
    predicted = None
    if abelian:
        predicted = sorted(
            (wrap_phase(ls.loop.direction * predicted_phase(m, ls.loop.theta)) for m in ms), reverse=True
        )
    return BlockRecord(i, b.dim, b.energy, [float(p) for p in phases], predicted)


def berry_report(
    spec: SystemSpec,
    theta: float,
    n_samples: int = DEFAULT_SAMPLES,
    resolve: bool = True,
    timing: bool = False,
) -> RunReport:
    """Wilson-loop phases of every band, with the -m * solid-angle prediction."""
    t0 = time.perf_counter()
    ls = track_bands(spec, loop_samples(theta, n_samples), resolve=resolve)
    report = RunReport(system_name(spec), spec.to_dict(), float(theta), int(n_samples))
    if ls.loop.degenerate:
        report.flags.append("degenerate_loop")
    for i, b in enumerate(ls.blocks):
        if b.dim == 1:
            m = m_label(ls, i)
            report.bands.append(
                BandRecord(
                    i,
                    m,
                    b.energy,
                    berry_phase_band(ls, i),
                    predicted_phase(m, theta),
                    flags=["disputed_paper_value"] if _disputed(spec, m) else [],
                )
            )
        else:
            report.blocks.append(_block_record(ls, i))
    if timing:
        report.timing = time.perf_counter() - t0
    return report


def holonomy_report(spec: SystemSpec, theta: float, n_samples: int = DEFAULT_SAMPLES, timing: bool = False) -> RunReport:
    """Degenerate blocks kept whole: Wilczek-Zee eigenphases plus the abelian bands."""
    return berry_report(spec, theta, n_samples, resolve=False, timing=timing)


def evolve_report(
    spec: SystemSpec,
    theta: float,
    band: int,
    omega: float | None = None,
    n_steps: int | None = None,
    n_samples: int = DEFAULT_SAMPLES,
    timing: bool = False,
) -> RunReport:
    """Time-evolution phase of one band next to its Wilson-loop phase."""
    t0 = time.perf_counter()
    ls = track_bands(spec, loop_samples(theta, n_samples))
    b = ls.blocks[band]
    m = m_label(ls, band)
    flags = ["disputed_paper_value"] if _disputed(spec, m) else []
    run = evolve_loop(spec, theta, omega, n_steps, band, allow_nonadiabatic=True)
    if not run.adiabatic:
        flags.append("nonadiabatic")
    report = RunReport(system_name(spec), spec.to_dict(), float(theta), int(n_samples))
    report.bands.append(
        BandRecord(band, m, b.energy, berry_phase_band(ls, band), predicted_phase(m, theta),
                   extract_geometric_phase(run), flags)
    )
    if timing:
        report.timing = time.perf_counter() - t0
    return report


def _sweep_one(args):
    spec, theta, n_samples, resolve = args
    return berry_report(spec, theta, n_samples, resolve)


def sweep_reports(
    spec: SystemSpec, thetas, n_samples: int = DEFAULT_SAMPLES, resolve: bool = True, jobs: int = 1
) -> list[RunReport]:
    """One report per cone angle, in the order given."""
    tasks = [(spec, float(t), n_samples, resolve) for t in thetas]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_one, tasks))
    return [_sweep_one(t) for t in tasks]


def _pair_rows(table, computed):
    """Match printed rows to computed ``(m, energy, phase)`` entries by m, then energy (descending)."""
    out = []
    by_m: dict[float, list] = {}
    for entry in sorted(computed, key=lambda e: -e[1]):
        by_m.setdefault(entry[0], []).append(entry)
    for row in table.rows:
        bucket = by_m.get(row.m_label, [])
        entry = bucket.pop(0) if bucket else None
        out.append((row, entry))
    return out


def _table_rows(table, computed, extra=None):
    rows = []
    for row, entry in _pair_rows(table, computed):
        rec = {
            "label": row.label,
            "m_label": row.m_label,
            "printed": row.phase,
            "computed": None,
            "delta": None,
            "mod_2pi": row.mod_2pi,
            "flags": ["disputed_paper_value"] if row.disputed else [],
        }
        if entry is not None:
            phase = entry[2]
            rec["computed"] = phase
            rec["energy"] = entry[1]
            diff = wrap_phase(phase - row.phase) if row.mod_2pi else phase - row.phase
            rec["delta"] = abs(diff)
        if extra and row.label in extra:
            rec.update(extra[row.label])
        rows.append(rec)
    return rows


def _abelian_entries(spec, theta, n_samples):
    ls = track_bands(spec, loop_samples(theta, n_samples), resolve=True)
    return [(m_label(ls, i), b.energy, berry_phase_band(ls, i)) for i, b in enumerate(ls.blocks)]


def tables(theta: float, n_samples: int = DEFAULT_SAMPLES, G: float = 1.0, B0: float = 1.0, adiabatic: bool = True) -> dict:
    """Printed phase tables next to computed values, plus the eigen-system transcription report."""
    out: dict = {"theta": float(theta), "n_samples": int(n_samples), "tables": [], "transcription": []}

    for name in TWO_SPIN_TABLE_PRESETS:
        spec = SystemSpec.preset(name, G=G, B0=B0)
        table = expected_phases("two_spin", theta)
        out["tables"].append(
            {"kind": "two_spin", "system": name, "rows": _table_rows(table, _abelian_entries(spec, theta, n_samples))}
        )

    spec = SystemSpec.preset("spin-orbit", G=G, B0=B0)
    table = expected_phases("spin1_half", theta)
    rows = _table_rows(table, _abelian_entries(spec, theta, n_samples))
    out["tables"].append({"kind": "spin1_half", "system": "spin-orbit", "rows": rows})

    spec = SystemSpec(kind="quadrupole", j=1.0, K=1.0)
    ls = track_bands(spec, loop_samples(theta, n_samples), resolve=False)
    computed = []
    chi0_block = None
    for i, b in enumerate(ls.blocks):
        if b.dim == 1:
            computed.append((m_label(ls, i), b.energy, berry_phase_band(ls, i)))
            chi0_block = i
        else:
            for m, ph in wz_projection_phases(ls, i):
                if ph is not None:
                    computed.append((m, b.energy, ph))
    extra = {}
    if adiabatic and chi0_block is not None and not ls.loop.degenerate:
        try:
            run = evolve_loop(spec, theta, initial_band=chi0_block)
            extra["chi0"] = {"adiabatic": extract_geometric_phase(run)}
        except NonAdiabatic:
            extra["chi0"] = {"adiabatic": None, "flags": ["disputed_paper_value", "nonadiabatic"]}
    table = expected_phases("quadrupole_j1", theta)
    out["tables"].append({"kind": "quadrupole_j1", "system": "quadrupole j=1", "rows": _table_rows(table, computed, extra)})

    for name in PRESETS:
        spec = SystemSpec.preset(name, G=G, B0=B0)
        eta, gp, gm = two_spin_coupling_constants(spec)
        if table_kind(spec) == "two_spin":
            rows = two_spin_transcription_report(spec, theta, 0.0)
            out["transcription"].append({"system": name, "source": "two-spin eigen-system", "rows": rows})
        else:
            printed = printed_spin1_half_energies(eta, gp, gm)
            ls = track_bands(spec, loop_samples(theta, 16))
            exact = sorted((b.energy for b in ls.blocks), reverse=True)
            rows = []
            if printed is not None:
                for k, e in enumerate(printed):
                    near = min(exact, key=lambda x: abs(x - e))
                    rows.append({"state": f"n{k + 1}", "printed_energy": float(e), "nearest_exact_energy": near,
                                 "energy_delta": abs(float(e) - near)})
            out["transcription"].append(
                {"system": name, "source": "spin-1 x spin-1/2 energies", "rows": rows,
                 "note": None if printed is not None else "printed k^2 negative for these couplings"}
            )
    return out
