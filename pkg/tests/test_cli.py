"""End-to-end tests for the command-line interface."""

import json

import pytest

from sonine_rd import cli

GOOD_CONFIG = """\
[kernel]
type = riemann_liouville
alpha = 0.5

[operator]
type = dirichlet_laplacian
length = 1.0
modes = 8

[source]
type = fisher_kpp

[initial]
type = bump
scale = 1.0

[time]
t = 1.0
steps = 32
"""


def _write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestConfigValidation:
    def test_good_config_loads(self, tmp_path):
        cfg = cli.load_config(_write(tmp_path, GOOD_CONFIG))
        assert cfg["kernel"]["type"] == "riemann_liouville"

    def test_missing_file(self):
        with pytest.raises(cli.ConfigError):
            cli.load_config("/nonexistent/run.ini")

    def test_unknown_key_is_line_anchored(self, tmp_path):
        path = _write(tmp_path, "[kernel]\ntype = dirac\nbogus_key = 1\n"
                      "[operator]\ntype = laplacian\n[time]\nt = 1\nsteps = 4\n")
        with pytest.raises(cli.ConfigError) as exc:
            cli.load_config(path)
        message = str(exc.value)
        assert "bogus_key" in message
        assert f"{path}:3:" in message

    def test_unknown_section(self, tmp_path):
        path = _write(
            tmp_path,
            GOOD_CONFIG + "\n[extras]\nfoo = 1\n",
        )
        with pytest.raises(cli.ConfigError, match=r"unknown section"):
            cli.load_config(path)

    def test_missing_required_section(self, tmp_path):
        path = _write(tmp_path, "[kernel]\ntype = dirac\n")
        with pytest.raises(cli.ConfigError, match=r"missing section"):
            cli.load_config(path)


class TestSolveCommand:
    def test_solve_succeeds_and_writes_artifacts(self, tmp_path):
        cfg = _write(tmp_path, GOOD_CONFIG)
        out = tmp_path / "out"
        code = cli.main(["solve", "--config", cfg, "--out", str(out)])
        assert code == cli.EXIT_OK
        assert (out / "report.csv").exists()
        summary = json.loads((out / "summary.json").read_text())
        assert summary["status"] == "completed"
        assert summary["decay_violations"] == 0

    def test_solve_is_deterministic(self, tmp_path):
        cfg = _write(tmp_path, GOOD_CONFIG)
        outputs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert cli.main(["solve", "--config", cfg, "--out", str(out)]) == 0
            outputs.append((out / "report.csv").read_bytes())
        assert outputs[0] == outputs[1]

    def test_invalid_alpha_exits_one(self, tmp_path):
        cfg = _write(tmp_path, GOOD_CONFIG.replace("alpha = 0.5", "alpha = 1.5"))
        assert cli.main(["solve", "--config", cfg, "--out", str(tmp_path / "o")]) \
            == cli.EXIT_INVALID

    def test_unknown_key_exits_one(self, tmp_path):
        cfg = _write(tmp_path, GOOD_CONFIG + "\n[output]\nbogus = 1\n")
        assert cli.main(["solve", "--config", cfg, "--out", str(tmp_path / "o")]) \
            == cli.EXIT_INVALID

    def test_blowup_run_exits_zero(self, tmp_path):
        text = GOOD_CONFIG.replace(
            "[initial]\ntype = bump\nscale = 1.0",
            "[initial]\ntype = eigenfunction\nscale = 12.0",
        ).replace("t = 1.0\nsteps = 32", "t = 2.0\nsteps = 256")
        cfg = _write(tmp_path, text)
        out = tmp_path / "out"
        code = cli.main(["solve", "--config", cfg, "--out", str(out)])
        assert code == cli.EXIT_OK
        summary = json.loads((out / "summary.json").read_text())
        assert summary["status"] == "blowup"
        assert summary["bracket"] is not None


class TestVerifyCommand:
    def test_sonine_suite_passes(self, tmp_path):
        code = cli.main(
            ["verify", "--suite", "sonine", "--out", str(tmp_path / "v")]
        )
        assert code == cli.EXIT_OK
        summary = json.loads(
            (tmp_path / "v" / "sonine" / "summary.json").read_text()
        )
        assert summary["suite"] == "sonine"

    def test_unknown_suite(self):
        assert cli.main(["verify", "--suite", "nope"]) == cli.EXIT_INVALID


class TestBoundsCommand:
    def test_bounds_json(self, capsys):
        assert cli.main(["bounds", "--alpha", "0.5", "--c0", "4.0"]) == cli.EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["schema_version"] == 1
        assert 0.0 < data["lower"] < data["upper"]
        assert data["upper"] == pytest.approx(0.049086, abs=1e-5)

    def test_invalid_bounds(self, capsys):
        assert cli.main(["bounds", "--alpha", "1.5", "--c0", "4.0"]) \
            == cli.EXIT_INVALID
