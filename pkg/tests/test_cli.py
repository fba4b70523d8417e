"""End-to-end CLI tests driving main(argv) in process.

Each command writes real files into tmp_path; assertions read them back
through the library loaders so the CLI and the file formats stay in step.
"""

import dataclasses
import os
import re


from viscopath.cli import main
from viscopath.fileio import (
    default_params,
    load_params,
    load_report,
    load_result,
    load_scenario,
    save_params,
    save_scenario,
)

from support import single_block_scenario, walled_off_scenario


def _write_scenario(tmp_path, builder=single_block_scenario):
    dest = tmp_path / "scenario.json"
    save_scenario(builder(), dest)
    return str(dest)


def test_write_params(tmp_path, capsys):
    out = tmp_path / "params.json"
    assert main(["write-params", "--out", str(out)]) == 0
    assert load_params(out) == default_params()
    assert f"params -> {out}" in capsys.readouterr().out


def test_plan_safe_scenario(tmp_path, capsys):
    scenario_file = _write_scenario(tmp_path)
    out = tmp_path / "result.json"
    assert main(["plan", "--scenario", scenario_file, "--out", str(out)]) == 0
    result, deviation = load_result(out)
    assert result.safe
    assert deviation > 0.0
    stdout = capsys.readouterr().out
    assert "safe=1" in stdout
    assert str(out) in stdout


def test_plan_unsafe_scenario_still_exits_zero(tmp_path, capsys):
    scenario_file = _write_scenario(tmp_path, walled_off_scenario)
    out = tmp_path / "result.json"
    assert main(["plan", "--scenario", scenario_file, "--out", str(out)]) == 0
    result, _ = load_result(out)
    assert not result.safe
    assert "safe=0" in capsys.readouterr().out


def test_plan_writes_svg_when_asked(tmp_path):
    scenario_file = _write_scenario(tmp_path)
    out = tmp_path / "result.json"
    svg = tmp_path / "picture.svg"
    assert main(["plan", "--scenario", scenario_file, "--out", str(out),
                 "--svg", str(svg)]) == 0
    assert svg.read_text().startswith("<?xml")


def test_plan_seed_override_reaches_the_integrator(tmp_path):
    # Make stagnation kicks likely so the rng seed actually matters.
    bundle = default_params()
    bundle = dataclasses.replace(
        bundle, sim=dataclasses.replace(bundle.sim, v_stag=0.05, stag_window=10)
    )
    params_file = tmp_path / "params.json"
    save_params(bundle, params_file)
    scenario_file = _write_scenario(tmp_path)

    outputs = []
    for seed in (1, 2):
        out = tmp_path / f"result_{seed}.json"
        assert main(["plan", "--scenario", scenario_file, "--params", str(params_file),
                     "--out", str(out), "--seed", str(seed)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] != outputs[1]


def test_plan_snapshots(tmp_path):
    scenario_file = _write_scenario(tmp_path)
    out = tmp_path / "result.json"
    snap_dir = tmp_path / "snaps"
    assert main(["plan", "--scenario", scenario_file, "--out", str(out),
                 "--snapshot-every", "200", "--snapshot-dir", str(snap_dir)]) == 0
    names = sorted(os.listdir(snap_dir))
    assert names
    assert all(re.fullmatch(r"snapshot_i\d{2}_s\d{5}\.svg", n) for n in names)
    assert names[0] == "snapshot_i01_s00200.svg"
    assert (snap_dir / names[0]).read_text().startswith("<?xml")


def test_generate_writes_numbered_scenarios(tmp_path, capsys):
    out_dir = tmp_path / "dataset"
    assert main(["generate", "--count", "3", "--out-dir", str(out_dir)]) == 0
    names = sorted(os.listdir(out_dir))
    assert names == ["scenario_0000.json", "scenario_0001.json", "scenario_0002.json"]
    scenarios = [load_scenario(out_dir / n) for n in names]
    assert len({s.seed for s in scenarios}) == 3
    assert "wrote 3 scenarios" in capsys.readouterr().out


def test_generate_is_reproducible(tmp_path):
    dir_a = tmp_path / "a"
    dir_b = tmp_path / "b"
    assert main(["generate", "--count", "2", "--out-dir", str(dir_a)]) == 0
    assert main(["generate", "--count", "2", "--out-dir", str(dir_b)]) == 0
    for name in os.listdir(dir_a):
        assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes()


def test_evaluate_dataset(tmp_path, capsys):
    out_dir = tmp_path / "dataset"
    assert main(["generate", "--count", "2", "--out-dir", str(out_dir)]) == 0
    capsys.readouterr()
    report_file = tmp_path / "report.json"
    assert main(["evaluate", "--dataset", str(out_dir),
                 "--report", str(report_file), "--jobs", "1"]) == 0
    doc = load_report(report_file)
    assert doc["total"] == 2
    stdout = capsys.readouterr().out
    assert "success_rate:" in stdout
    assert "(reference: 0.943)" in stdout
    assert "not part of the report file" in stdout
    assert f"report -> {report_file}" in stdout


def test_evaluate_rejects_empty_dataset_dir(tmp_path, capsys):
    empty = tmp_path / "nothing"
    empty.mkdir()
    report_file = tmp_path / "report.json"
    assert main(["evaluate", "--dataset", str(empty), "--report", str(report_file)]) == 3
    assert "error (validation)" in capsys.readouterr().err


def test_render_scenario_and_result(tmp_path):
    scenario_file = _write_scenario(tmp_path)
    plain = tmp_path / "plain.svg"
    assert main(["render", "--scenario", scenario_file, "--out", str(plain)]) == 0
    assert plain.read_text().startswith("<?xml")

    result_file = tmp_path / "result.json"
    assert main(["plan", "--scenario", scenario_file, "--out", str(result_file)]) == 0
    overlay = tmp_path / "overlay.svg"
    assert main(["render", "--scenario", scenario_file, "--result", str(result_file),
                 "--out", str(overlay)]) == 0
    assert len(overlay.read_text()) > len(plain.read_text())


def test_usage_errors_exit_two(capsys):
    assert main([]) == 2
    assert main(["no-such-command"]) == 2
    capsys.readouterr()


def test_missing_scenario_file_exits_three(tmp_path, capsys):
    out = tmp_path / "result.json"
    code = main(["plan", "--scenario", str(tmp_path / "absent.json"), "--out", str(out)])
    assert code == 3
    assert "error (io)" in capsys.readouterr().err


def test_corrupt_scenario_file_exits_three(tmp_path, capsys):
    bad = tmp_path / "scenario.json"
    bad.write_text("{broken")
    out = tmp_path / "result.json"
    assert main(["plan", "--scenario", str(bad), "--out", str(out)]) == 3
    assert "error (parse)" in capsys.readouterr().err


def test_numeric_failure_exits_four(tmp_path, capsys):
    bundle = default_params()
    bundle = dataclasses.replace(bundle, sim=dataclasses.replace(bundle.sim, dt=100.0))
    params_file = tmp_path / "params.json"
    save_params(bundle, params_file)
    scenario_file = _write_scenario(tmp_path)
    out = tmp_path / "result.json"
    code = main(["plan", "--scenario", scenario_file, "--params", str(params_file),
                 "--out", str(out)])
    assert code == 4
    assert "error (numeric)" in capsys.readouterr().err
    assert not out.exists()
