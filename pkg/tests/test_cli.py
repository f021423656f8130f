import json

from click.testing import CliRunner

from muxim import save_multiplex
from muxim.cli import main

from conftest import make_toy_multiplex


def _toy_manifest(tmp_path) -> str:
    return save_multiplex(make_toy_multiplex(), str(tmp_path / "toy"), name="toy")


def test_generate_writes_manifest(tmp_path):
    runner = CliRunner()
    out_dir = tmp_path / "gen"
    result = runner.invoke(
        main,
        ["--seed", "3", "generate", "--kind", "ba", "--n", "30", "--m", "2",
         "--k", "2", "--overlap", "4", "--models", "ic,lt",
         "--out", str(out_dir), "--name", "demo"],
    )
    assert result.exit_code == 0, result.output
    assert "overlap=4" in result.output
    assert (out_dir / "demo.manifest").exists()
    assert (out_dir / "demo_layer0.edges").exists()


def test_estimate_command(tmp_path):
    manifest = _toy_manifest(tmp_path)
    runner = CliRunner()
    result = runner.invoke(
        main,
        ["--seed", "2", "--samples", "20000", "estimate",
         "--manifest", manifest, "--seeds", "0"],
    )
    assert result.exit_code == 0, result.output
    sigma = float(result.output.split("=")[1].split("+-")[0])
    assert abs(sigma - 2.0) < 0.05


def test_select_repeats_identically(tmp_path):
    manifest = _toy_manifest(tmp_path)
    runner = CliRunner()
    args = ["--seed", "8", "--samples", "400", "select", "--manifest", manifest,
            "--algorithm", "isf", "-l", "2"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0, first.output
    assert first.output == second.output
    assert "seeds = [0," in first.output


def test_select_ksn_with_options(tmp_path):
    manifest = _toy_manifest(tmp_path)
    runner = CliRunner()
    result = runner.invoke(
        main,
        ["--seed", "1", "--solver", "exact_dp", "select", "--manifest", manifest,
         "--algorithm", "ksn", "-l", "1", "--estimator", "exact",
         "--seeder", "brute"],
    )
    assert result.exit_code == 0, result.output
    assert "seeds = [0]" in result.output
    assert "per-layer budget split: [0, 1]" in result.output


def test_experiment_command(tmp_path):
    manifest = _toy_manifest(tmp_path)
    config = {
        "multiplex": {"manifest": manifest},
        "algorithms": ["isf", "es"],
        "budgets": [1],
        "seed": 4,
        "samples": 300,
    }
    config_path = tmp_path / "exp.json"
    config_path.write_text(json.dumps(config), encoding="utf-8")
    out_csv = tmp_path / "out.csv"
    runner = CliRunner()
    result = runner.invoke(
        main, ["experiment", "--config", str(config_path), "--out", str(out_csv)]
    )
    assert result.exit_code == 0, result.output
    lines = out_csv.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("algorithm,l,")
    assert len(lines) == 3


def test_experiment_rerun_matches_excluding_timing(tmp_path):
    manifest = _toy_manifest(tmp_path)
    config = {
        "multiplex": {"manifest": manifest},
        "algorithms": ["ksn"],
        "budgets": [1, 2],
        "seed": 4,
        "samples": 250,
    }
    config_path = tmp_path / "exp.json"
    config_path.write_text(json.dumps(config), encoding="utf-8")
    runner = CliRunner()
    outputs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        result = runner.invoke(
            main, ["experiment", "--config", str(config_path), "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        import csv as csvmod

        rows = list(csvmod.reader(out.open()))
        header = rows[0]
        drop = {header.index("wall_s"), header.index("cpu_s")}
        outputs.append(
            [[c for i, c in enumerate(r) if i not in drop] for r in rows]
        )
    assert outputs[0] == outputs[1]


def test_mckp_solve_command(tmp_path):
    inst = {
        "classes": [
            [{"cost": 0, "profit": 0.0}, {"cost": 1, "profit": 9.0}],
            [{"cost": 0, "profit": 0.0}, {"cost": 2, "profit": 11.0}],
        ],
        "budget": 2,
    }
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(inst), encoding="utf-8")
    runner = CliRunner()
    result = runner.invoke(
        main, ["--solver", "exact_dp", "mckp-solve", "--instance", str(path)]
    )
    assert result.exit_code == 0, result.output
    assert "picks = [0, 1]" in result.output
    assert "profit = 11.0" in result.output


def test_cli_surfaces_service_errors(tmp_path):
    manifest = _toy_manifest(tmp_path)
    runner = CliRunner()
    result = runner.invoke(
        main,
        ["estimate", "--manifest", manifest, "--seeds", "99"],
    )
    assert result.exit_code != 0
    assert "not in the multiplex universe" in result.output
