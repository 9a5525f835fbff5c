"""Command-line surface: JSON in, JSON out, exit codes as documented.

Everything runs in-process through main(argv) so coverage and speed stay
reasonable; stdout/stderr are captured and parsed back as JSON.  Usage
errors raised before a handler runs (bad flags, wrong mode combinations)
surface as SystemExit(1); errors inside a handler return the exit code.
"""
import json

import pytest

from frosette.cli import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, main

CELLS_CONFIG = {
    "n": 8,
    "m": 6,
    "k": 1,
    "altitude_km": 1260.0,
    "inclination_deg": 45.0,
    "min_elevation_deg": 25.0,
}

ROUTING_CONFIG = dict(CELLS_CONFIG, inclination_deg=70.0)

# dense enough that every ground point sees at least one satellite
GEO_CONFIG = {
    "n": 16,
    "m": 8,
    "k": 1,
    "altitude_km": 1100.0,
    "inclination_deg": 70.0,
    "min_elevation_deg": 0.0,
}


@pytest.fixture()
def cfg_path(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(ROUTING_CONFIG), encoding="utf-8")
    return str(path)


@pytest.fixture()
def cells_cfg_path(tmp_path):
    path = tmp_path / "cells.json"
    path.write_text(json.dumps(CELLS_CONFIG), encoding="utf-8")
    return str(path)


def _json_out(capsys):
    out = capsys.readouterr()
    return json.loads(out.out)


def _json_err(capsys):
    out = capsys.readouterr()
    return json.loads(out.err)


# --- generate -------------------------------------------------------------------


def test_generate_stdout(cfg_path, capsys):
    assert main(["generate", "--config", cfg_path]) == EXIT_OK
    doc = _json_out(capsys)
    assert len(doc["nodes"]) == 64
    assert len(doc["edges"]) == 128
    assert doc["nodes"][0] == "0.0"
    assert doc["config"]["n"] == 8
    assert doc["config"]["inclination_deg"] == pytest.approx(70.0)


def test_generate_files(tmp_path, capsys):
    topo_path = tmp_path / "topo.json"
    tables_path = tmp_path / "tables.fra0"
    cells_path = tmp_path / "cells.json"
    cells_path.write_text(json.dumps(CELLS_CONFIG), encoding="utf-8")
    rc = main(
        [
            "generate",
            "--config",
            str(cells_path),
            "--output",
            str(topo_path),
            "--tables",
            str(tables_path),
        ]
    )
    assert rc == EXIT_OK
    summary = _json_out(capsys)
    assert summary["nodes"] == 64 and summary["edges"] == 128
    assert summary["tables_bytes"] == tables_path.stat().st_size
    on_disk = json.loads(topo_path.read_text(encoding="utf-8"))
    assert len(on_disk["edges"]) == 128
    assert on_disk["edges"][0][2] == 0  # [addr, addr, layer] triples


def test_generate_missing_config(tmp_path, capsys):
    assert main(["generate", "--config", str(tmp_path / "nope.json")]) == EXIT_USAGE
    assert _json_err(capsys)["error"] == "io"


# --- route ----------------------------------------------------------------------


def test_route_reference_example(cfg_path, capsys):
    assert main(["route", "--config", cfg_path, "--from", "0.0", "--to", "4.5"]) == EXIT_OK
    doc = _json_out(capsys)
    assert doc["hop_count"] == 7
    assert doc["path"][0] == "0.0" and doc["path"][-1] == "4.5"
    assert len(doc["path"]) == 8
    assert {h["layer"] for h in doc["hops"]} == {0, 1}


def test_route_literal_rule(cfg_path, capsys):
    assert (
        main(["route", "--config", cfg_path, "--from", "0.0", "--to", "3.0", "--rule", "literal"])
        == EXIT_OK
    )
    doc = _json_out(capsys)
    assert doc["hop_count"] == 5  # the literal convention takes the long way round


def test_route_bad_address(cfg_path, capsys):
    assert main(["route", "--config", cfg_path, "--from", "0.9", "--to", "1.1"]) == EXIT_USAGE
    assert _json_err(capsys)["error"] == "RangeError"


def test_route_missing_flags(cfg_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["route", "--config", cfg_path, "--from", "0.0"])
    assert exc.value.code == EXIT_USAGE
    assert _json_err(capsys)["error"] == "usage"


def test_route_geo(tmp_path, capsys):
    geo_path = tmp_path / "geo.json"
    geo_path.write_text(json.dumps(GEO_CONFIG), encoding="utf-8")
    rc = main(
        [
            "route",
            "--config",
            str(geo_path),
            "--geo",
            "--from-lat",
            "10.0",
            "--from-lon",
            "20.0",
            "--to-lat",
            "-30.0",
            "--to-lon",
            "150.0",
            "--time",
            "60",
        ]
    )
    assert rc == EXIT_OK
    doc = _json_out(capsys)
    assert doc["delivered"] is True
    assert doc["coverage_violation"] is False
    assert doc["hop_count"] == len(doc["path"]) - 1
    assert "/" in doc["dst_cell"]
    assert doc["terminal"] == doc["path"][-1]
    assert doc["path"][0] == doc["serving"]


def test_route_geo_missing_coords(cfg_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["route", "--config", cfg_path, "--geo", "--from-lat", "1.0"])
    assert exc.value.code == EXIT_USAGE
    err = _json_err(capsys)
    assert err["error"] == "usage"
    assert "--to-lat" in err["detail"]


# --- fib ------------------------------------------------------------------------


def test_fib(cfg_path, capsys):
    assert main(["fib", "--config", cfg_path, "--owner", "3.5"]) == EXIT_OK
    doc = _json_out(capsys)
    assert doc["owner"] == "3.5"
    assert doc["entry_count"] == 6
    assert {(e["layer"], e["pattern"], e["direction"]) for e in doc["entries"]} == {
        (0, "001", 1),
        (0, "01*", 1),
        (0, "1**", -1),
        (1, "001", 1),
        (1, "01*", 1),
        (1, "1**", -1),
    }


# --- cells ----------------------------------------------------------------------


def test_cells_count(cells_cfg_path, capsys):
    assert main(["cells", "--config", cells_cfg_path, "--count"]) == EXIT_OK
    assert _json_out(capsys)["cell_count"] == 256


def test_cells_locate_and_back(cells_cfg_path, capsys):
    assert main(["cells", "--config", cells_cfg_path, "--locate", "12.5", "40.0"]) == EXIT_OK
    doc = _json_out(capsys)
    cell_text = doc["cell"]
    assert doc["level"] == 1
    assert main(["cells", "--config", cells_cfg_path, "--to-location", cell_text]) == EXIT_OK
    doc2 = _json_out(capsys)
    assert doc2["cell"] == cell_text
    assert -90.0 <= doc2["lat_deg"] <= 90.0
    assert -180.0 <= doc2["lon_deg"] <= 180.0
    rc = main(
        ["cells", "--config", cells_cfg_path, "--to-location", cell_text, "--level", "0"]
    )
    assert rc == EXIT_OK
    assert _json_out(capsys)["level"] == 0


def test_cells_mode_exclusivity(cells_cfg_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["cells", "--config", cells_cfg_path])
    assert exc.value.code == EXIT_USAGE
    assert _json_err(capsys)["error"] == "usage"
    with pytest.raises(SystemExit) as exc:
        main(["cells", "--config", cells_cfg_path, "--count", "--to-location", "0,0/0,0"])
    assert exc.value.code == EXIT_USAGE


def test_cells_lattice_violation(cfg_path, capsys):
    # the 70-degree two-row config cannot host the ground lattice
    assert main(["cells", "--config", cfg_path, "--locate", "0.0", "0.0"]) == EXIT_DOMAIN
    assert _json_err(capsys)["error"] == "ConfigError"


def test_cells_bad_cell_id(cells_cfg_path, capsys):
    rc = main(["cells", "--config", cells_cfg_path, "--to-location", "9,9/0,0"])
    assert rc == EXIT_USAGE
    assert _json_err(capsys)["error"] == "RangeError"


# --- size -----------------------------------------------------------------------


def test_size_reference(capsys):
    rc = main(["size", "--rtt-ms", "8.41", "--elevation-deg", "25", "--base-n", "8"])
    assert rc == EXIT_OK
    doc = _json_out(capsys)
    assert doc["k"] == 1 and doc["n_sats"] == 64
    assert doc["altitude_km"] == pytest.approx(0.00841 * 299792.458 / 2)
    assert 0 < doc["coverage_deg"] < 90
    assert doc["n_min"] <= doc["n_sats"]


def test_size_infeasible(capsys):
    rc = main(["size", "--rtt-ms", "1e-7", "--elevation-deg", "25", "--base-n", "8"])
    assert rc == EXIT_DOMAIN
    assert _json_err(capsys)["error"] == "InfeasibleError"


def test_size_missing_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["size", "--rtt-ms", "8.41"])
    assert exc.value.code == EXIT_USAGE
    assert _json_err(capsys)["error"] == "usage"


# --- simulate ---------------------------------------------------------------------


def test_simulate(tmp_path, capsys):
    scenario = {
        "config": ROUTING_CONFIG,
        "window": {"start_s": 0.0, "end_s": 40.0, "step_s": 20.0},
        "endpoints": {
            "bj": {"lat_deg": 39.9, "lon_deg": 116.4},
            "ny": {"lat_deg": 40.7, "lon_deg": -74.0},
        },
        "experiments": [{"src": "bj", "dst": "ny"}],
        "seed": 3,
    }
    scn_path = tmp_path / "scenario.json"
    scn_path.write_text(json.dumps(scenario), encoding="utf-8")
    trace_path = tmp_path / "trace.csv"
    rc = main(["simulate", "--scenario", str(scn_path), "--trace", str(trace_path)])
    assert rc == EXIT_OK
    summary = _json_out(capsys)
    assert summary["records"] == 3
    assert summary["seed"] == 3
    lines = trace_path.read_text(encoding="utf-8").strip().splitlines()
    assert len(lines) == 4
    assert lines[0].startswith("t,experiment,frosette_hops")


def test_simulate_bad_scenario(tmp_path, capsys):
    scn_path = tmp_path / "bad.json"
    scn_path.write_text(json.dumps({"config": ROUTING_CONFIG}), encoding="utf-8")
    rc = main(["simulate", "--scenario", str(scn_path), "--trace", str(tmp_path / "t.csv")])
    assert rc == EXIT_USAGE
    assert _json_err(capsys)["error"] == "ParseError"


# --- verify -----------------------------------------------------------------------


def test_verify(capsys):
    assert main(["verify"]) == EXIT_OK
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert all(line.startswith("PASS ") for line in lines[:-1])
    assert lines[-1].endswith("checks passed")


# --- parser surface ----------------------------------------------------------------


def test_unknown_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE
    assert _json_err(capsys)["error"] == "usage"


def test_missing_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == EXIT_USAGE
    assert _json_err(capsys)["error"] == "usage"
