"""Tests for runner module"""
# pylint: disable=no-self-use, redefined-outer-name

import json
import os
from pathlib import Path

import pytest

from mmslab.config import COMMANDS, load_config, validate_config
from mmslab.errors import ConfigError, ConvergenceError, NonFiniteError, OutputError
from mmslab.runner import Runner, write_report

FIXTURES = Path(__file__).parent / "fixtures"

# Small configurations for every subcommand
SMOKE_CONFIGS = {
    "space-gen": {},
    "bvy": {"space": {"n_points": 12}},
    "seminorm": {"space": {"n_points": 12}, "s": 0.3},
    "orlicz": {"space": {"n_points": 12}, "phi": {"kind": "power_log", "p": 2.0}},
    "varexp": {"space": {"n_points": 12}},
    "anisotropic": {"space": {"n_points": 6, "dimension": 2}, "p": 1.0},
    "covering": {"space": {"generator": "cloud", "n_points": 20, "dimension": 2}, "seed": 3},
    "nonlocal-apply": {"space": {"n_points": 12}},
    "nonlocal-solve": {"space": {"n_points": 12}},
    "poincare": {"space": {"n_points": 12}},
    "equivalence": {"sizes": [8, 16]},
    "kfunc": {"space": {"n_points": 16}, "t_grid": [0.01, 0.1, 1.0, 10.0]},
    "interp": {"sizes": [8, 16]},
    "bbm": {
        "field": {"name": "bump", "params": {"width": 0.25}},
        "sweep": [[0.5, 32], [0.7, 64]],
    },
    "sharpness": {"bump_deltas": [0.25, 0.125]},
    "stability": {"space": {"n_points": 12}, "seed": 5, "epsilons": [0.1, 0.01]},
}


@pytest.fixture
def two_point():
    "Two points at distance 1 with f = (0, 1)"
    return load_config(FIXTURES / "two_point.json")


class TestRun:
    "Tests of Runner.run()"

    def test_two_point(self, two_point):
        "p = 1 on two points gives 2"
        report = Runner(two_point).run("bvy")
        assert report.command == "bvy"
        assert report.scalars["value"] == pytest.approx(2.0)
        assert report.scalars["maximizing_ratio"] == pytest.approx(1.0)
        assert report.provenance["seed"] is None
        assert len(report.provenance["config_sha256"]) == 64

    @pytest.mark.parametrize("command", COMMANDS)
    def test_smoke(self, command):
        "every subcommand produces a finite, serializable report"
        report = Runner(validate_config(SMOKE_CONFIGS[command])).run(command)
        assert report.command == command
        document = json.loads(report.to_json())
        assert document["runtime"]["threads"] == 1
        assert set(document["tables"]) == set(report.tables)

    def test_unknown_command(self):
        "commands outside the catalog"
        with pytest.raises(ConfigError):
            Runner(validate_config({})).run("solve")

    def test_command_mismatch(self, two_point):
        "configuration names a different command"
        with pytest.raises(ConfigError):
            Runner(two_point).run("seminorm")

    def test_seed_required(self):
        "randomized runs need a seed"
        config = validate_config({"field": {"name": "random"}})
        with pytest.raises(ConfigError):
            Runner(config).run("bvy")

        config = validate_config({"field": {"name": "random"}, "seed": 9})
        assert Runner(config).run("bvy").provenance["seed"] == 9

    def test_not_converged(self):
        "solver failures are numerical errors"
        config = validate_config(
            {"space": {"n_points": 12}, "solver": {"max_iter": 1, "check_gradient": False}}
        )
        with pytest.raises(ConvergenceError) as excinfo:
            Runner(config).run("nonlocal-solve")
        assert excinfo.value.exit_code == 3

    def test_non_finite(self, monkeypatch):
        "inf and nan never reach a report"
        monkeypatch.setattr(
            "mmslab.runner.Runner._seminorm", lambda _: ({"value": float("inf")}, {})
        )
        with pytest.raises(NonFiniteError) as excinfo:
            Runner(validate_config({})).run("seminorm")
        assert "value" in excinfo.value.message

    def test_bbm_limitation(self):
        "the BBM report states its tolerance and its bias"
        report = Runner(validate_config(SMOKE_CONFIGS["bbm"])).run("bbm")
        assert report.scalars["tolerance"] == pytest.approx(0.1)
        assert report.scalars["relative_error"] == report.tables["diagonal"][-1]["relative_error"]
        assert report.scalars["pass"] == (report.scalars["relative_error"] <= 0.1)
        assert "bias" in report.scalars["limitation"]

    def test_covering_configured_balls(self):
        "explicit balls replace the random collection"
        config = validate_config(
            {
                "space": {"n_points": 10, "spacing": 1.0, "weight": "unit"},
                "balls": [[2, 1.5], [3, 2.5], [8, 1.0]],
            }
        )
        report = Runner(config).run("covering")
        assert report.scalars["covering"]["selected"] == [1, 2]
        assert [row["selected"] for row in report.tables["certificate"]] == [False, True, True]


class TestDeterminism:
    "Repeated runs of one configuration"

    @pytest.mark.parametrize("command", ["covering", "stability", "equivalence"])
    def test_repeat(self, command):
        "identical reports apart from the runtime block"
        config = validate_config(SMOKE_CONFIGS[command])
        first = Runner(config).run(command)
        second = Runner(config).run(command)
        assert first.to_json(include_runtime=False) == second.to_json(include_runtime=False)
        assert first.tables == second.tables

    @pytest.mark.parametrize("threads", [2, 4, 8])
    @pytest.mark.parametrize("command", ["equivalence", "sharpness", "bbm"])
    def test_threads(self, command, threads):
        "worker count changes nothing but the runtime block"
        document = {**SMOKE_CONFIGS[command], "sizes": [8, 16, 32]}
        serial = Runner(validate_config(document)).run(command)
        parallel = Runner(validate_config({**document, "threads": threads})).run(command)
        assert serial.to_json(include_runtime=False) == parallel.to_json(include_runtime=False)
        assert parallel.runtime["threads"] == threads


class TestWriteReport:
    "Tests of write_report() function"

    def test_files(self, tmp_path):
        "summary JSON and one CSV per table"
        report = Runner(validate_config(SMOKE_CONFIGS["nonlocal-apply"])).run("nonlocal-apply")
        paths = write_report(report, tmp_path / "out")

        assert sorted(path.name for path in paths) == [
            "nonlocal_apply.json",
            "nonlocal_apply_operator.csv",
        ]
        document = json.loads((tmp_path / "out" / "nonlocal_apply.json").read_text(encoding="utf-8"))
        assert document["command"] == "nonlocal-apply"
        assert document["tables"] == {"operator": 12}

        lines = (tmp_path / "out" / "nonlocal_apply_operator.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "point,f,Lf"
        assert len(lines) == 13
        assert not list((tmp_path / "out").glob("*.partial"))

    def test_unwritable(self, tmp_path):
        "an existing file in place of the directory"
        target = tmp_path / "taken"
        target.write_text("", encoding="utf-8")
        report = Runner(validate_config({})).run("seminorm")
        with pytest.raises(OutputError) as excinfo:
            write_report(report, target)
        assert excinfo.value.exit_code == 4

    def test_replace_failure(self, tmp_path, monkeypatch):
        "partial files are removed when a rename fails"

        def fail(*_):
            raise PermissionError(13, "Permission denied")

        monkeypatch.setattr("mmslab.runner.os.replace", fail)
        report = Runner(validate_config({})).run("seminorm")
        with pytest.raises(OutputError):
            write_report(report, tmp_path)
        assert not list(tmp_path.iterdir())

    def test_second_replace_failure(self, tmp_path, monkeypatch):
        "reports already renamed are removed when a later rename fails"
        calls = []
        original = os.replace

        def replace_once(source, target):
            calls.append(target)
            if len(calls) > 1:
                raise PermissionError(13, "Permission denied")
            original(source, target)

        monkeypatch.setattr("mmslab.runner.os.replace", replace_once)
        report = Runner(validate_config(SMOKE_CONFIGS["nonlocal-apply"])).run("nonlocal-apply")
        with pytest.raises(OutputError):
            write_report(report, tmp_path)
        assert len(calls) == 2
        assert not list(tmp_path.iterdir())
