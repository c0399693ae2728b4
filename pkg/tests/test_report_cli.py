import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from spinberry.cli import run
from spinberry.report import CSV_COLUMNS, BandRecord, RunReport, render
from spinberry.runs import berry_report, holonomy_report, sweep_reports
from spinberry.systems import SystemSpec


def cli(argv, capsys):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_csv_header_only_for_empty_sweep():
    assert render([], "csv") == ",".join(CSV_COLUMNS) + "\n"


def test_report_json_round_trip(two_spin):
    rep = berry_report(two_spin, 0.9, 256)
    data = json.loads(render(rep, "json"))
    assert data["spec"] == two_spin.to_dict()
    assert SystemSpec.from_dict(data["spec"]) == two_spin
    assert len(data["bands"]) == 4
    for b in data["bands"]:
        assert abs(b["berry_phase_numeric"] - b["predicted_phase"]) <= 1e-5


def test_report_rejects_bad_flags_and_nan():
    rep = RunReport("x", {}, 0.1, 8, bands=[BandRecord(0, 0.5, 1.0, 0.1, 0.1, flags=["weird"])])
    with pytest.raises(ValueError):
        rep.validate()
    rep = RunReport("x", {}, 0.1, 8, bands=[BandRecord(0, 0.5, math.nan, 0.1, 0.1)])
    with pytest.raises(ValueError):
        render(rep)


def test_holonomy_report_quadrupole(quad1):
    rep = holonomy_report(quad1, 0.7, 512)
    (block,) = rep.blocks
    c = 2 * np.pi * np.cos(0.7)
    expected = sorted([math.remainder(c, 2 * np.pi), math.remainder(-c, 2 * np.pi)], reverse=True)
    assert np.allclose(block.eigenphases, expected, atol=1e-6)
    assert np.allclose(block.predicted_eigenphases, expected, atol=1e-9)
    (chi0,) = rep.bands
    assert chi0.flags == ["disputed_paper_value"]


def test_sweep_parallel_matches_serial(two_spin):
    thetas = [0.2, 0.9]
    serial = render(sweep_reports(two_spin, thetas, 64), "csv")
    parallel = render(sweep_reports(two_spin, thetas, 64, jobs=2), "csv")
    assert serial == parallel


def test_cli_sweep_twenty_rows(capsys):
    code, out, _ = cli(["sweep", "--system", "two-spin", "--b0", "0.3", "--theta-min", "0.1",
                        "--theta-max", "2.5", "--count", "5", "--points", "128"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == 21
    for r in rows[1:]:
        assert abs(float(r[6]) - float(r[7])) <= 1e-4


def test_cli_output_is_bit_identical(tmp_path, capsys):
    args = ["berry", "--preset", "muonium", "--theta", "60", "--degrees", "--points", "256"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(args + ["-o", str(a)]) == 0
    assert run(args + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["timing"] is None


def test_cli_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "quadrupole", "j": 1.5, "K": 2.0, "theta": 0.5, "n_samples": 128}))
    code, out, _ = cli(["holonomy", "--config", str(cfg)], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["spec"]["j"] == 1.5 and data["n_samples"] == 128
    assert len(data["blocks"]) == 2


def test_cli_evolve(capsys):
    code, out, _ = cli(["evolve", "--system", "spin-half", "--theta", "1.0", "--band", "0",
                        "--omega", "0.008", "--steps", "4096", "--points", "64"], capsys)
    assert code == 0
    (band,) = json.loads(out)["bands"]
    assert abs(band["adiabatic_phase"] - math.remainder(band["predicted_phase"], 2 * math.pi)) <= 1e-2


def test_cli_spectrum(capsys):
    code, out, _ = cli(["spectrum", "--system", "quadrupole", "--theta", "0.3", "--format", "csv"], capsys)
    assert code == 0
    energies = [float(line.split(",")[1]) for line in out.strip().splitlines()[1:]]
    assert np.allclose(energies, [-2 / 3, 1 / 3, 1 / 3])


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["berry"],
        ["berry", "--theta", "0.5", "--points", "4"],
        ["berry", "--theta", "9"],
        ["berry", "--theta", "0.5", "--b0", "-1"],
        ["berry", "--theta", "0.5", "--system", "two-spin", "--j1", "1"],
        ["holonomy", "--theta", "0.5", "--config", "/nonexistent.json"],
        ["berry", "--theta", "0.5", "--preset", "hydrogen", "--system", "quadrupole"],
        ["sweep", "--system", "two-spin"],
        ["evolve", "--theta", "0.5"],
        ["frobnicate"],
    ],
)
def test_cli_usage_errors_exit_1(argv, capsys):
    code, _, err = cli(argv, capsys)
    assert code == 1
    assert "error" in err


def test_cli_fast_drive_is_flagged_not_fatal(capsys):
    code, out, _ = cli(["evolve", "--system", "spin-half", "--theta", "1.0", "--band", "0",
                        "--omega", "10", "--steps", "1000", "--points", "64"], capsys)
    assert code == 0
    assert "nonadiabatic" in json.loads(out)["bands"][0]["flags"]


def test_cli_numerical_failure_exit_2(capsys):
    # eight samples cannot follow a j = 5/2 frame around the cone
    code, _, err = cli(["berry", "--system", "quadrupole", "--theta", "1.0", "--points", "8",
                        "--j", "2.5"], capsys)
    assert code == 2
    assert "numerical failure" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "spinberry", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "berry" in out.stdout
