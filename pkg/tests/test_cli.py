"""CLI: artifacts, exit codes, and byte-identical reproducibility."""
import json
from pathlib import Path

import pytest

from voxelskin.cli import main


def run(argv):
    return main(argv)


def read_tree(root: Path) -> dict[str, bytes]:
    return {str(p.relative_to(root)): p.read_bytes()
            for p in sorted(root.rglob("*")) if p.is_file()}


def test_design_sweep_artifacts(tmp_path):
    out = tmp_path / "d"
    assert run(["design", "--param", "t_f", "--min", "0.6", "--max", "1.6",
                "--steps", "4", "--out", str(out)]) == 0
    doc = json.loads((out / "sweep.json").read_text())
    assert 2.0 <= doc["exponent"] <= 3.0
    assert doc["meta"]["toolkit_version"]
    assert len(doc["rows"]) == 4
    csv = (out / "sweep.csv").read_text().splitlines()
    assert csv[0].startswith("# toolkit_version=")
    assert csv[1] == "value,axial,shear,bending,torsion,k_area,response"


def test_design_rejects_bad_parameter(tmp_path, capsys):
    code = run(["design", "--param", "t_f", "--values=-1,2,3",
                "--out", str(tmp_path)])
    assert code == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ValidationError"


def test_simulate_artifacts(tmp_path):
    out = tmp_path / "s"
    assert run(["simulate", "--duty", "1.0", "--horizon", "80",
                "--out", str(out)]) == 0
    doc = json.loads((out / "transient.json").read_text())
    assert doc["melt_closed_form_s"] == pytest.approx(31.25)
    assert doc["cool_time_constant_s"] == pytest.approx(45.0)
    assert doc["energy_audit"] < 0.01
    lines = (out / "trace.csv").read_text().splitlines()
    assert lines[1] == "t,T,phase_fraction,P_in"


def test_synth_artifacts(tmp_path):
    out = tmp_path / "j"
    assert run(["synth", "--joint", "hinge_bilateral", "--size", "large",
                "--row", "2", "--col", "0", "--out", str(out)]) == 0
    pattern = json.loads((out / "pattern.json").read_text())
    assert len(pattern["addresses"]) == 40
    report = json.loads((out / "joint_report.json").read_text())
    assert report["localization"] >= 0.8
    assert report["rotational_after"] < report["rotational_before"]


def test_schedule_artifacts_and_infeasible(tmp_path, capsys):
    out = tmp_path / "sch"
    assert run(["schedule", "--demo-voxels", "3", "--budget", "9",
                "--out", str(out)]) == 0
    doc = json.loads((out / "schedule.json").read_text())
    assert doc["makespan_s"] == pytest.approx(62.5)
    code = run(["schedule", "--demo-voxels", "1", "--budget", "2",
                "--out", str(out)])
    assert code == 3
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "InfeasibleError"


def test_missing_config_is_io_error(tmp_path, capsys):
    code = run(["design", "--param", "t_f", "--config",
                str(tmp_path / "nope.json"), "--out", str(tmp_path)])
    assert code == 4


def test_calibrate_byte_identical_at_fixed_seed(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run(["calibrate", "--voxels", "80", "--seed", "7",
                    "--out", str(out)]) == 0
    assert read_tree(a) == read_tree(b)
    c = tmp_path / "c"
    assert run(["calibrate", "--voxels", "80", "--seed", "8",
                "--out", str(c)]) == 0
    assert read_tree(a) != read_tree(c)


@pytest.mark.parametrize("argv", [
    ["design", "--param", "t_f", "--min", "0.8", "--max", "1.4", "--steps", "3"],
    ["simulate", "--duty", "0.5", "--horizon", "30"],
    ["synth", "--joint", "twist"],
    ["schedule", "--demo-voxels", "4", "--budget", "10"],
])
def test_commands_reproducible(tmp_path, argv):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(argv + ["--out", str(a), "--seed", "0"]) == 0
    assert run(argv + ["--out", str(b), "--seed", "0"]) == 0
    assert read_tree(a) == read_tree(b)


def test_report_renders_figures(tmp_path):
    out = tmp_path / "rep"
    assert run(["report", "--out", str(out)]) == 0
    figures = list((out / "figures").glob("*.png"))
    data = list((out / "data").rglob("*"))
    assert len(figures) >= 6
    assert any(p.suffix == ".csv" for p in data)
    assert any(p.suffix == ".json" for p in data)
