import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from permoptics.cli import main
from permoptics.serialization import (
    ConfigError,
    config_hash,
    load_experiment_config,
    matrix_from_json,
    matrix_to_json,
    parse_experiment_config,
)


@pytest.fixture
def runner():
    return CliRunner()


def write_matrix(path: Path, matrix: np.ndarray):
    path.write_text(json.dumps(matrix_to_json(matrix)))
    return path


def make_config(tmp_path: Path, n_samples=10**6, seed=5) -> Path:
    config = {
        "unitary": matrix_to_json(np.array([[0.707, 0.709], [-0.707, 0.705]])),
        "mus": [0.001, 0.00104],
        "detection": {"kind": "exact_single_photon", "cutoff": 4},
        "rep_rate_hz": 80e6,
        "accum_s": 20.0,
        "plan": {"n_samples": n_samples, "seed": seed, "partitions": 1, "confidence": 0.95},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return path


class TestSerialization:
    def test_matrix_roundtrip(self):
        gen = np.random.default_rng(4)
        a = gen.normal(size=(3, 3)) + 1j * gen.normal(size=(3, 3))
        assert np.array_equal(matrix_from_json(matrix_to_json(a)), a)

    def test_matrix_validation(self):
        with pytest.raises(ConfigError):
            matrix_from_json({"dim": 2, "re": [[1, 0]], "im": [[0, 0]]})
        with pytest.raises(ConfigError):
            matrix_from_json({"dim": 2, "re": [[1, 0], [0, 1]]})
        with pytest.raises(ConfigError):
            matrix_from_json([1, 2, 3])

    def test_config_parsing(self, tmp_path):
        config = load_experiment_config(make_config(tmp_path))
        assert config.unitary.dim == 2
        assert config.plan.n_samples == 10**6
        assert len(config.config_hash) == 16

    def test_config_errors(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_experiment_config(path)
        with pytest.raises(ConfigError):
            parse_experiment_config({"mus": [0.1]})
        with pytest.raises(ConfigError):
            parse_experiment_config(
                {"unitary": matrix_to_json(np.eye(2)), "mus": [0.1, 0.2], "detection": {"kind": "bogus"}}
            )

    def test_hash_stability(self):
        obj = {"b": 1, "a": [1, 2]}
        assert config_hash(obj) == config_hash({"a": [1, 2], "b": 1})
        assert config_hash(obj) != config_hash({"a": [1, 2], "b": 2})


class TestPermCommand:
    def test_identity(self, runner, tmp_path):
        path = write_matrix(tmp_path / "id.json", np.eye(3))
        result = runner.invoke(main, ["perm", str(path)])
        assert result.exit_code == 0
        assert "permanent = 1" in result.output

    def test_methods_agree(self, runner, tmp_path):
        gen = np.random.default_rng(11)
        path = write_matrix(tmp_path / "m.json", gen.normal(size=(4, 4)))
        values = []
        for method in ("naive", "ryser", "glynn"):
            result = runner.invoke(main, ["perm", str(path), "--method", method])
            assert result.exit_code == 0
            payload = json.loads(result.output[result.output.index("{") :])
            values.append(payload["permanent_re"])
        assert values[0] == pytest.approx(values[1], rel=1e-9)
        assert values[0] == pytest.approx(values[2], rel=1e-9)

    def test_printed_instance_value(self, runner, tmp_path):
        path = write_matrix(tmp_path / "a.json", 1e-3 * np.array([[1.02, 0.02], [0.02, 1.02]]))
        result = runner.invoke(main, ["perm", str(path)])
        assert result.exit_code == 0
        payload = json.loads(result.output[result.output.index("{") :])
        assert abs(payload["permanent_re"] - 1.04e-6) <= 0.02e-6

    def test_csv_format(self, runner, tmp_path):
        path = write_matrix(tmp_path / "id.json", np.eye(2))
        out = tmp_path / "csvout"
        result = runner.invoke(main, ["perm", str(path), "--format", "csv", "--out", str(out)])
        assert result.exit_code == 0
        lines = (out / "perm.csv").read_text().splitlines()
        assert lines[0].startswith("permanent_re")
        assert lines[1].startswith("1,")

    def test_dimension_guard_exit_code(self, runner, tmp_path):
        path = write_matrix(tmp_path / "big.json", np.eye(26))
        result = runner.invoke(main, ["perm", str(path)])
        assert result.exit_code == 3

    def test_parse_error_exit_code(self, runner, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("nonsense")
        result = runner.invoke(main, ["perm", str(path)])
        assert result.exit_code == 2


class TestSimulateCommand:
    def test_bundled_config(self, runner, tmp_path):
        result = runner.invoke(
            main, ["--out", str(tmp_path), "simulate", "--bundled", "table1_row1"]
        )
        assert result.exit_code == 0
        assert "permanent estimate" in result.output
        log = tmp_path / "runs.jsonl"
        assert log.exists()
        record = json.loads(log.read_text().splitlines()[-1])
        assert record["generator"].startswith("philox")

    def test_deterministic_payload(self, runner, tmp_path):
        config = make_config(tmp_path)
        records = []
        for run in range(2):
            out = tmp_path / f"out{run}"
            result = runner.invoke(main, ["simulate", str(config), "--out", str(out)])
            assert result.exit_code == 0, result.output
            records.append(json.loads((out / "runs.jsonl").read_text()))
        numeric_keys = ("n", "k", "p_hat", "ci", "perm_estimate", "perm_ci", "config_hash")
        assert {k: records[0][k] for k in numeric_keys} == {k: records[1][k] for k in numeric_keys}

    def test_partition_override_identical(self, runner, tmp_path):
        config = make_config(tmp_path, n_samples=2 * 10**8)
        payloads = []
        for partitions in ("1", "4"):
            out = tmp_path / f"p{partitions}"
            result = runner.invoke(
                main, ["simulate", str(config), "--partitions", partitions, "--out", str(out)]
            )
            assert result.exit_code == 0, result.output
            payloads.append(json.loads((out / "runs.jsonl").read_text())["k"])
        assert payloads[0] == payloads[1]

    def test_log_env_override(self, runner, tmp_path, monkeypatch):
        log = tmp_path / "elsewhere" / "audit.jsonl"
        monkeypatch.setenv("PERMOPTICS_LOG", str(log))
        config = make_config(tmp_path, n_samples=10**4)
        result = runner.invoke(main, ["simulate", str(config), "--out", str(tmp_path)])
        assert result.exit_code == 0
        assert log.exists()

    def test_missing_source_rejected(self, runner):
        result = runner.invoke(main, ["simulate"])
        assert result.exit_code == 2

    def test_invalid_config_exit_code(self, runner, tmp_path):
        path = tmp_path / "invalid.json"
        path.write_text(json.dumps({"unitary": matrix_to_json(np.eye(2) * 2), "mus": [0.1, 0.1]}))
        result = runner.invoke(main, ["simulate", str(path)])
        assert result.exit_code == 2


class TestResourcesCommand:
    def test_reference_value(self, runner):
        result = runner.invoke(
            main,
            ["resources", "--p", "0.01", "--epsilon", "0.1", "--delta", "0.95"],
        )
        assert result.exit_code == 0
        assert "N = 38031" in result.output

    def test_perm_u2_one(self, runner):
        result = runner.invoke(main, ["resources", "--perm-u2", "1.0"])
        assert result.exit_code == 0
        assert "N = 0" in result.output

    def test_zero_probability_machine_readable(self, runner):
        result = runner.invoke(main, ["resources", "--p", "0"])
        assert result.exit_code == 0
        payload = json.loads(result.output[result.output.index("{") :])
        assert payload["n_required"] is None
        assert payload["infinite"] is True

    def test_conflicting_flags(self, runner):
        result = runner.invoke(main, ["resources", "--p", "0.1", "--perm-u2", "0.5"])
        assert result.exit_code == 2
        result = runner.invoke(main, ["resources"])
        assert result.exit_code == 2

    def test_cost_comparison_payload(self, runner):
        result = runner.invoke(main, ["resources", "--p", "0.1", "--cost-dim", "4", "--eta", "0.5"])
        assert result.exit_code == 0
        payload = json.loads(result.output[result.output.index("{") :])
        assert len(payload["cost_comparison"]["dims"]) == 4

    def test_sweep_csv(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "resources",
                "--p", "1e-3,1e-2",
                "--epsilon", "0.1",
                "--delta", "0.95,0.997",
                "--out", str(tmp_path),
            ],
        )
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "resources_sweep.csv").read_text().splitlines()
        assert len(lines) == 5  # header + 2x1x2 grid
        header = lines[0].split(",")
        n_col = header.index("n_required")
        row = dict(zip(header, lines[2].split(",")))
        assert row["delta"] == "0.997"
        # third grid point is p=0.01, epsilon=0.1, delta=0.95
        assert int(lines[3].split(",")[n_col]) == 38031

    def test_sweep_grid_values(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["resources", "--p", "0.01,0.02", "--epsilon", "0.1", "--delta", "0.95", "--out", str(tmp_path)],
        )
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "resources_sweep.csv").read_text().splitlines()
        header = lines[0].split(",")
        n_col = header.index("n_required")
        assert int(lines[1].split(",")[n_col]) == 38031


class TestReproduceCommand:
    def test_unknown_target(self, runner):
        result = runner.invoke(main, ["reproduce", "fig9"])
        assert result.exit_code == 2

    def test_visibility_target(self, runner, tmp_path):
        result = runner.invoke(main, ["reproduce", "visibility", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "visibility.csv").exists()
        assert (tmp_path / "visibility.png").exists()

    def test_no_figures_flag(self, runner, tmp_path):
        result = runner.invoke(
            main, ["reproduce", "visibility", "--no-figures", "--out", str(tmp_path)]
        )
        assert result.exit_code == 0
        assert not (tmp_path / "visibility.png").exists()

    def test_table1_golden_flags(self, runner, tmp_path):
        result = runner.invoke(main, ["reproduce", "table1", "--no-figures", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "table1.csv").read_text().splitlines()
        header = lines[0].split(",")
        exact_col = header.index("exact_within_tolerance")
        noint_col = header.index("no_interference_within_tolerance")
        assert len(lines) == 5
        for line in lines[1:]:
            cells = line.split(",")
            assert cells[exact_col] == "True" and cells[noint_col] == "True"

    def test_haar_closed_form_rows(self, runner, tmp_path):
        result = runner.invoke(
            main, ["reproduce", "haar", "--fast", "--no-figures", "--out", str(tmp_path)]
        )
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "haar.csv").read_text().splitlines()
        header = lines[0].split(",")
        dim_col, exact_col = header.index("dim"), header.index("exact")
        values = {int(l.split(",")[dim_col]): float(l.split(",")[exact_col]) for l in lines[1:]}
        # the report format carries 12 significant digits
        assert values[2] == pytest.approx(1 / 3, abs=1e-12)
        assert values[4] == pytest.approx(1 / 35, abs=1e-12)

    @pytest.mark.parametrize("target", ["bounds", "haar", "fig3", "table1"])
    def test_targets_bit_identical_csv(self, runner, tmp_path, target):
        contents = []
        for run in range(2):
            out = tmp_path / f"{target}{run}"
            args = ["reproduce", target, "--no-figures", "--out", str(out)]
            if target in ("fig3", "bounds", "haar"):
                args.append("--fast")
            result = runner.invoke(main, args)
            assert result.exit_code == 0, result.output
            contents.append((out / f"{target}.csv").read_bytes())
        assert contents[0] == contents[1]


class TestOracleCommand:
    def test_bundled(self, runner, tmp_path):
        result = runner.invoke(main, ["oracle", "--bundled", "table1_row1", "--out", str(tmp_path)])
        assert result.exit_code == 0
        payload = json.loads(result.output[result.output.index("{") :])
        assert payload["difference"] <= payload["truncation_bound"] + 1e-12

    def test_guard_exit_code(self, runner, tmp_path):
        config = {
            "unitary": matrix_to_json(np.eye(5)),
            "mus": [0.01] * 5,
            "detection": {"kind": "exact_single_photon", "cutoff": 4},
        }
        path = tmp_path / "wide.json"
        path.write_text(json.dumps(config))
        result = runner.invoke(main, ["oracle", str(path)])
        assert result.exit_code == 3
