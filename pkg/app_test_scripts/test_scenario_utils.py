"""
Tests for scenario parsing, validation and runtime construction
"""

import sys
import os
import json

import numpy as np
import pytest

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import TOLERANCE_DEFAULTS
from src.utils.file_utils import load_json_file, save_json_file
from src.utils.scenario_utils import (
    ScenarioParseError,
    ScenarioValidationError,
    build_runtime,
    load_builtin_scenario,
    load_scenario,
)

pytestmark = pytest.mark.unit


@pytest.fixture
def base_scenario():
    return {
        "name": "small",
        "hamiltonian": {"kind": "interaction"},
        "rhoS": [0.0, 0.0, 1.0],
        "ancilla": [0.0, 0.0, 1.0],
        "observables": {
            "system": {"coefficients": [0.0, 1.0, 1.0, 1.0]},
            "ancilla": {"coefficients": [0.0, 1.0, 0.5, 0.25]},
        },
        "tgrid": {"t_min": 0.0, "t_max": 2.0, "steps": 11},
    }


def _write(tmp_path, payload, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_builtin_fig1_and_fig2():
    fig1 = load_builtin_scenario("fig1")
    fig2 = load_builtin_scenario("fig2")
    assert fig1.rho_s == [0.0, 0.0, 1.0]
    assert fig1.ancilla == [0.0, 0.0, 1.0]
    assert fig2.ancilla == [0.0, 0.0, 0.5]
    assert fig1.tgrid.steps == 2001 and fig1.tgrid.t_max == 20.0
    runtime = build_runtime(fig1)
    assert runtime.dim == 2
    assert runtime.hamiltonian.label.startswith("interaction")


def test_defaults_are_filled(tmp_path, base_scenario):
    del base_scenario["tgrid"]
    cfg = load_scenario(_write(tmp_path, base_scenario))
    assert cfg.seed == 0
    assert cfg.tolerances.resolved() == TOLERANCE_DEFAULTS
    assert cfg.tgrid.steps == 2001
    assert cfg.resolved_protocol == "expectation"


def test_malformed_json_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"name": "x",\n  "rhoS": [0, 0, 1\n}', encoding="utf-8")
    with pytest.raises(ScenarioParseError, match="line 3"):
        load_scenario(path)


def test_unknown_field_rejected(tmp_path, base_scenario):
    base_scenario["colour"] = "blue"
    with pytest.raises(ScenarioValidationError, match="colour"):
        load_scenario(_write(tmp_path, base_scenario))


@pytest.mark.parametrize(
    "tgrid",
    [
        {"t_min": 0.0, "t_max": 1.0, "steps": 1},
        {"t_min": 1.0, "t_max": 1.0, "steps": 10},
    ],
)
def test_bad_time_grid_rejected(tmp_path, base_scenario, tgrid):
    base_scenario["tgrid"] = tgrid
    with pytest.raises(ScenarioValidationError, match="tgrid"):
        load_scenario(_write(tmp_path, base_scenario))


def test_unphysical_state_rejected(tmp_path, base_scenario):
    base_scenario["ancilla"] = [0.0, 0.9, 0.9]
    with pytest.raises(ScenarioValidationError):
        load_scenario(_write(tmp_path, base_scenario))


def test_mismatched_component_counts_rejected(tmp_path, base_scenario):
    base_scenario["rhoS"] = [0.0] * 8
    with pytest.raises(ScenarioValidationError, match="ancilla"):
        load_scenario(_write(tmp_path, base_scenario))


def test_tolerance_override_is_kept(tmp_path, base_scenario):
    base_scenario["tolerances"] = {"derivative_step": 1e-4}
    cfg = load_scenario(_write(tmp_path, base_scenario))
    runtime = build_runtime(cfg)
    assert runtime.overrides == {"derivative_step": 1e-4}
    assert runtime.tolerances["derivative_step"] == 1e-4


def test_hamiltonian_file_relative_to_scenario(tmp_path, base_scenario):
    entries = np.diag([4.0, 2.0, 1.0, 0.0])
    (tmp_path / "h.json").write_text(
        json.dumps({"dim": 4, "entries_re": entries.ravel().tolist()}), encoding="utf-8"
    )
    base_scenario["hamiltonian"] = {"kind": "file", "path": "h.json"}
    cfg = load_scenario(_write(tmp_path, base_scenario))
    runtime = build_runtime(cfg)
    assert np.allclose(runtime.hamiltonian.mat, entries)


def test_hamiltonian_file_missing_field(tmp_path, base_scenario):
    (tmp_path / "h.json").write_text(json.dumps({"entries_re": [0.0] * 16}), encoding="utf-8")
    base_scenario["hamiltonian"] = {"kind": "file", "path": "h.json"}
    with pytest.raises(ScenarioValidationError, match="dim"):
        load_scenario(_write(tmp_path, base_scenario))


def test_qutrit_scenario_uses_probability_protocol(tmp_path, base_scenario):
    base_scenario.update(
        {
            "hamiltonian": {"kind": "integer_spectrum", "dim": 9, "seed": 3},
            "rhoS": [0.0] * 8,
            "ancilla": [0.0] * 7 + [0.5],
            "observables": {
                "system": {"eigenvalues": [-1.0, 0.0, 1.0], "basis_seed": 1},
                "ancilla": {"eigenvalues": [-1.0, 0.5, 2.0]},
            },
        }
    )
    cfg = load_scenario(_write(tmp_path, base_scenario))
    runtime = build_runtime(cfg)
    assert runtime.protocol == "probability"
    assert len(runtime.components) == 8
    assert runtime.hamiltonian.dim == 9


def test_degenerate_observable_rejected(tmp_path, base_scenario):
    base_scenario.update(
        {
            "hamiltonian": {"kind": "zero", "dim": 9},
            "rhoS": [0.0] * 8,
            "ancilla": [0.0] * 8,
            "observables": {
                "system": {"eigenvalues": [1.0, 1.0, 2.0]},
                "ancilla": {"eigenvalues": [-1.0, 0.5, 2.0]},
            },
        }
    )
    with pytest.raises(ScenarioValidationError, match="gap"):
        load_scenario(_write(tmp_path, base_scenario))


def test_missing_file_is_an_os_error(tmp_path):
    with pytest.raises(OSError):
        load_scenario(tmp_path / "nope.json")


def test_malformed_hamiltonian_file(tmp_path, base_scenario):
    (tmp_path / "h.json").write_text('{"dim": 4,\n "entries_re": [', encoding="utf-8")
    base_scenario["hamiltonian"] = {"kind": "file", "path": "h.json"}
    with pytest.raises(ScenarioParseError, match="line 2"):
        load_scenario(_write(tmp_path, base_scenario))


def test_json_file_helpers(tmp_path):
    target = tmp_path / "nested" / "report.json"
    save_json_file(target, {"delta": -0.017578125, "cond": None})
    assert load_json_file(target) == {"delta": -0.017578125, "cond": None}
    assert target.read_text(encoding="utf-8").endswith("}\n")

    with pytest.raises(OSError):
        load_json_file(tmp_path / "absent.json")
    with pytest.raises(ValueError):
        save_json_file(tmp_path / "nan.json", {"x": float("nan")})


def test_snake_case_state_field_is_accepted(tmp_path, base_scenario):
    base_scenario["rho_s"] = base_scenario.pop("rhoS")
    cfg = load_scenario(_write(tmp_path, base_scenario))
    assert cfg.rho_s == [0.0, 0.0, 1.0]
    assert "rhoS" in cfg.model_dump(by_alias=True)


def test_missing_state_field_is_named(tmp_path, base_scenario):
    del base_scenario["rhoS"]
    with pytest.raises(ScenarioValidationError, match="rhoS"):
        load_scenario(_write(tmp_path, base_scenario))


def test_scenario_seed_drives_seeded_hamiltonian(tmp_path, base_scenario):
    base_scenario["hamiltonian"] = {"kind": "integer_spectrum", "dim": 4}
    base_scenario["seed"] = 4
    seeded = build_runtime(load_scenario(_write(tmp_path, base_scenario, "a.json")))
    base_scenario["seed"] = 5
    other = build_runtime(load_scenario(_write(tmp_path, base_scenario, "b.json")))
    assert seeded.hamiltonian.label == "integer_spectrum(dim=4, seed=4)"
    assert not np.allclose(seeded.hamiltonian.mat, other.hamiltonian.mat)

    base_scenario["hamiltonian"]["seed"] = 4
    pinned = build_runtime(load_scenario(_write(tmp_path, base_scenario, "c.json")))
    assert np.allclose(pinned.hamiltonian.mat, seeded.hamiltonian.mat)


@pytest.mark.parametrize("payload", [[4, [0.0] * 16], 4, "h"])
def test_hamiltonian_file_that_is_not_an_object(tmp_path, base_scenario, payload):
    (tmp_path / "h.json").write_text(json.dumps(payload), encoding="utf-8")
    base_scenario["hamiltonian"] = {"kind": "file", "path": "h.json"}
    with pytest.raises(ScenarioValidationError, match="object"):
        load_scenario(_write(tmp_path, base_scenario))


@pytest.mark.parametrize("name", ["fig1", "fig2"])
def test_second_observable_choice_differs_only_in_observables(name):
    first = load_builtin_scenario(name)
    second = load_builtin_scenario(f"{name}_b")
    assert second.name == f"{name}_b"
    assert second.observables != first.observables
    assert second.model_dump(exclude={"name", "observables"}) == first.model_dump(
        exclude={"name", "observables"}
    )


def test_builtin_scenarios_load():
    breakdown = load_builtin_scenario("breakdown")
    assert breakdown.hamiltonian.kind == "spectrum_4210"
    assert breakdown.observables.ancilla.coefficients == [0.0, 1.0, 0.5, 0.0]
    recurrence = load_builtin_scenario("recurrence")
    assert recurrence.seed == 11
    assert recurrence.tgrid.t_max == 2 * np.pi
