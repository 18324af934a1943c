"""
End-to-end tests of the command-line entry point
"""

import sys
import os
import json

import pandas as pd
import pytest

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import EXIT_CLAIM_FAILED, EXIT_INVALID_INPUT, EXIT_IO_ERROR, EXIT_OK, EXIT_SINGULAR
from main import build_parser, main
from src.tools.table_tool import CSV_COLUMNS

pytestmark = pytest.mark.integration


@pytest.fixture
def scenario_file(tmp_path):
    payload = {
        "name": "cli",
        "hamiltonian": {"kind": "interaction"},
        "rhoS": [0.0, 0.0, 1.0],
        "ancilla": [0.0, 0.0, 1.0],
        "observables": {
            "system": {"coefficients": [0.0, 1.0, 1.0, 1.0]},
            "ancilla": {"coefficients": [0.0, 1.0, 0.5, 0.25]},
        },
        "tgrid": {"t_min": 0.0, "t_max": 2.0, "steps": 21},
        "tolerances": {"derivative_step": 1e-4},
    }
    path = tmp_path / "cli.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_parser_knows_all_commands():
    parser = build_parser()
    for argv in (
        ["scan", "x.json"],
        ["zeros", "x.json", "--interval", "0", "1"],
        ["claims"],
        ["reconstruct", "x.json", "--t", "1.5"],
    ):
        assert parser.parse_args(argv).command == argv[0]


def test_scan_writes_csv(scenario_file, tmp_path):
    out = tmp_path / "scan.csv"
    assert main(["--quiet", "scan", str(scenario_file), "--out", str(out)]) == EXIT_OK

    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# tolerance override derivative_step")
    df = pd.read_csv(out, comment="#")
    assert list(df.columns) == CSV_COLUMNS
    assert len(df) == 21


def test_scan_output_is_byte_identical(scenario_file, tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["--quiet", "scan", str(scenario_file), "--out", str(first)]) == EXIT_OK
    assert main(["--quiet", "scan", str(scenario_file), "--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_scan_json(scenario_file, tmp_path):
    out = tmp_path / "scan.json"
    assert main(["--quiet", "scan", str(scenario_file), "--out", str(out), "--format", "json"]) == EXIT_OK
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["tolerance_overrides"] == {"derivative_step": 1e-4}
    assert len(payload["records"]) == 21


def test_zeros_command(scenario_file, capsys):
    assert main(["--quiet", "zeros", str(scenario_file)]) == EXIT_OK
    assert "ENTANGLEMENT ZEROS" in capsys.readouterr().out


def test_reconstruct_at_time_zero_is_singular(scenario_file):
    assert main(["--quiet", "reconstruct", str(scenario_file), "--t", "0"]) == EXIT_SINGULAR


def test_malformed_scenario_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["--quiet", "scan", str(bad)]) == EXIT_INVALID_INPUT


def test_missing_scenario_exit_code(tmp_path):
    assert main(["--quiet", "scan", str(tmp_path / "missing.json")]) == EXIT_IO_ERROR


def test_unknown_command_exit_code():
    assert main(["frobnicate"]) == EXIT_INVALID_INPUT


def test_claims_command(tmp_path):
    out = tmp_path / "claims.json"
    code = main(["--quiet", "claims", "--out", str(out)])
    payload = json.loads(out.read_text(encoding="utf-8"))
    failed = [v for v in payload["verdicts"] if v["status"] == "fail"]
    assert code == (EXIT_CLAIM_FAILED if failed else EXIT_OK)
    assert code == EXIT_OK, failed
