"""End-to-end tests of the pdim-lab command line."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from pdim_lab import __version__
from pdim_lab.cli import runner, selftest
from pdim_lab.cli._output import csv_body
from pdim_lab.settings import LabSettings


def _rows(text: str) -> list[str]:
    return [line for line in csv_body(text).splitlines() if line]


class TestExitStatus:
    """0 ok, 1 usage, 2 cap, 3 selftest failure."""

    def test_unknown_group(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert runner.run(["ball", "--group", "torus:2", "--n", "1"]) == 1
        assert "error: unknown group spec" in capsys.readouterr().err

    def test_unknown_flag(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert runner.run(["ball", "--bogus"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_missing_command(self) -> None:
        assert runner.run([]) == 1

    def test_ball_needs_radius(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert runner.run(["ball", "--group", "zd:2"]) == 1
        assert "--n" in capsys.readouterr().err

    def test_missing_measure_file(self, tmp_path: Path) -> None:
        missing = tmp_path / "none.txt"
        assert runner.run(["measure", "--group", "zd:1", "--measure", f"file:{missing}"]) == 1

    def test_cap_exceeded(
        self, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
    ) -> None:
        monkeypatch.setattr(
            "pdim_lab.core.groups.get_settings", lambda: LabSettings(element_cap=100)
        )
        assert runner.run(["ball", "--group", "free:7", "--n", "5"]) == 2
        err = capsys.readouterr().err
        assert "exceeds cap 100" in err
        assert "partial counts: [1, 14" in err

    def test_selftest_failure(
        self, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
    ) -> None:
        checks = (
            selftest._Check(1, "always", lambda run: (True, "fine")),
            selftest._Check(2, "never", lambda run: (False, "nope")),
            selftest._Check(3, "slow one", lambda run: (False, "unreached"), slow=True),
        )
        monkeypatch.setattr(selftest, "_CHECKS", checks)
        assert runner.run(["selftest", "--quick"]) == 3
        out = capsys.readouterr().out
        assert "[PASS]  1 always: fine" in out
        assert "[FAIL]  2 never: nope" in out
        assert "[SKIP]  3 slow one" in out
        assert "Selftest failed: 1 / 3 criteria" in out


class TestCommands:
    """Representative runs of each subcommand on small inputs."""

    def test_saw_exact(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert runner.run(["saw", "--group", "zd:2", "--nmax", "4", "--exact"]) == 0
        rows = _rows(capsys.readouterr().out)
        assert rows[0] == "group,measure,n,sigma_n,exact_flag,nu_upper"
        assert rows[-1].startswith("zd:2,uniform-ball:1,4,25/64,true,")

    def test_ball_radius_zero(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert runner.run(["ball", "--group", "heis", "--n", "0"]) == 0
        out = capsys.readouterr().out
        assert _rows(out) == ["group,radius,sphere_size,ball_size", "heis,0,1,1"]
        assert f"# pdim-lab {__version__}" in out
        assert "# seed=0" in out

    def test_ball_sizes(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert runner.run(["ball", "--group", "free:2", "--n", "2", "--seed", "9"]) == 0
        out = capsys.readouterr().out
        assert _rows(out)[1:] == ["free:2,0,1,1", "free:2,1,4,5", "free:2,2,12,17"]
        assert "# seed=9" in out

    def test_config_file(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = tmp_path / "ball.cfg"
        path.write_text("group=zd:1\nn=3\n", encoding="utf-8")
        assert runner.run(["ball", "--config", str(path)]) == 0
        assert len(_rows(capsys.readouterr().out)) == 5
        assert runner.run(["ball", "--config", str(path), "--n", "1"]) == 0
        assert len(_rows(capsys.readouterr().out)) == 3

    def test_measure_report(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        out = tmp_path / "runs" / "mu.csv"
        args = ["measure", "--group", "free:2", "--measure", "uniform-ball:1", "--s", "1,2"]
        assert runner.run([*args, "--lambda", "2", "--out", str(out)]) == 0
        printed = capsys.readouterr().out
        assert f"Written: {out}" in printed
        assert len(_rows(out.read_text(encoding="utf-8"))) == 5
        report = json.loads(out.with_suffix(".json").read_text(encoding="utf-8"))
        assert report["version"] == __version__
        assert report["max_atom"]["mass"] == pytest.approx(0.25)
        assert [d["s"] for d in report["decay"]] == [1.0, 2.0]
        assert report["expected_simple_degree"] > 0

    def test_lambda_c_tree(self, tmp_path: Path) -> None:
        out = tmp_path / "lc.csv"
        args = ["lambda-c", "--group", "free:2", "--L", "6", "--trials", "300", "--seed", "4"]
        assert runner.run([*args, "--no-window-check", "--out", str(out)]) == 0
        rows = _rows(out.read_text(encoding="utf-8"))
        assert rows[0] == "group,measure,L,trials,theta,lambda_hat,ci_low,ci_high,capped,seed"
        fields = rows[1].split(",")
        assert fields[8] == "false"
        assert 1.0 < float(fields[5]) < 3.0
        report = json.loads(out.with_suffix(".json").read_text(encoding="utf-8"))
        assert report["evaluations"]

    def test_threads_do_not_change_results(self, tmp_path: Path) -> None:
        bodies = []
        for threads in ("1", "4"):
            out = tmp_path / f"t{threads}.csv"
            args = ["lambda-c", "--group", "free:2", "--L", "5", "--trials", "200"]
            assert runner.run([*args, "--threads", threads, "--out", str(out)]) == 0
            bodies.append(csv_body(out.read_text(encoding="utf-8")))
        assert bodies[0] == bodies[1]

    @pytest.mark.slow
    @pytest.mark.parametrize("estimator", ["growth", "theta"])
    def test_threads_identical_at_default_window(self, tmp_path: Path, estimator: str) -> None:
        bodies = []
        for threads in ("1", "4"):
            out = tmp_path / f"{estimator}-{threads}.csv"
            args = ["lambda-c", "--group", "free:2", "--trials", "400", "--estimator", estimator]
            assert runner.run([*args, "--threads", threads, "--out", str(out)]) == 0
            bodies.append(csv_body(out.read_text(encoding="utf-8")).encode())
        assert bodies[0] == bodies[1]
        assert ",40,400," in bodies[0].decode()

    def test_unknown_estimator(self, capsys: pytest.CaptureFixture[str]) -> None:
        args = ["lambda-c", "--group", "free:2", "--estimator", "median"]
        assert runner.run(args) == 1
        assert "error:" in capsys.readouterr().err

    def test_spectral_free_group(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert runner.run(["spectral", "--group", "free:2", "--nmax", "24"]) == 0
        out = capsys.readouterr().out
        report = json.loads(out[out.index("{") :])
        assert report["mode"] == "radial-chain"
        assert 0.7 < report["rho"] < 0.9
        assert report["kesten"]["passed"] is True

    def test_sweep_tree(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert runner.run(["sweep", "--family", "tree", "--radii", "2,3,4"]) == 0
        rows = _rows(capsys.readouterr().out)
        assert rows[1].startswith("free:k,")
        assert ",k=2," in rows[1]

    def test_sweep_growth(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert runner.run(["sweep", "--family", "growth", "--group", "zd:2"]) == 0
        assert "polynomial growth" in capsys.readouterr().out

    def test_sweep_lb_needs_one_exponent(self) -> None:
        assert runner.run(["sweep", "--family", "lb", "--group", "zd:2", "--s", "2,3"]) == 1

    def test_sweep_pdim_needs_grid(self) -> None:
        assert runner.run(["sweep", "--family", "pdim", "--group", "zd:1"]) == 1

    def test_giant_complete(self, capsys: pytest.CaptureFixture[str]) -> None:
        args = ["giant", "--n", "60", "--samples", "3", "--lambda", "3", "--seed", "2"]
        assert runner.run(args) == 0
        out = capsys.readouterr().out
        rows = _rows(out)
        assert "weights,vertices,lambda,sample,fraction,seed" in rows
        assert len([r for r in rows if r.startswith("complete,60,")]) == 3
        assert "mean largest-component fraction" in out
