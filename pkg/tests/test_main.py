"""Tests for __main__.py"""
# pylint: disable=no-self-use, redefined-outer-name

from argparse import Namespace
import json
from pathlib import Path

import pytest

from mmslab.__main__ import main, parse_args, run

FIXTURE = str(Path(__file__).parent / "fixtures" / "two_point.json")


def _args(subcommand, **kwargs) -> Namespace:
    "Namespace with the parse_args() defaults"
    values = dict(config=None, out=None, seed=None, threads=None, verbose=0)
    values.update(kwargs)
    return Namespace(subcommand=subcommand, **values)


@pytest.fixture
def write_config(tmp_path):
    "Write a configuration document and return its path"

    def write(document, name="config.json"):
        path = tmp_path / name
        if isinstance(document, str):
            path.write_text(document, encoding="utf-8")
        else:
            path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return write


class TestParseArgs:
    "Tests of parse_args() function"

    def test_options(self):
        "options and defaults"
        args = parse_args(["bvy", "--config", "run.json", "--seed", "3", "-vv"])
        assert args.subcommand == "bvy"
        assert args.config == "run.json"
        assert args.seed == 3
        assert args.threads is None
        assert args.out is None
        assert args.verbose == 2

    def test_unknown_subcommand(self, capsys):
        "argparse rejects unknown subcommands with exit code 2"
        with pytest.raises(SystemExit) as excinfo:
            parse_args(["solve"])
        assert excinfo.value.code == 2
        assert "invalid choice" in capsys.readouterr().err


class TestMain:
    "Tests of main() function"

    def test_schema(self, capsys):
        "schema needs no configuration"
        assert main(_args("schema")) == 0
        schema = json.loads(capsys.readouterr().out)
        assert "properties" in schema

    def test_run(self, capsys):
        "summary goes to stdout"
        assert main(_args("bvy", config=FIXTURE)) == 0
        captured = capsys.readouterr()
        assert "bvy" in captured.out
        assert "value" in captured.out
        assert "config_sha256" in captured.out

    def test_out(self, capsys, tmp_path):
        "reports are written to --out"
        out = tmp_path / "results"
        assert main(_args("bvy", config=FIXTURE, out=str(out))) == 0
        capsys.readouterr()
        document = json.loads((out / "bvy.json").read_text(encoding="utf-8"))
        assert document["scalars"]["value"] == pytest.approx(2.0)

    def test_missing_config_option(self, capsys):
        "--config is required"
        assert main(_args("bvy")) == 2
        err = capsys.readouterr().err
        assert err.startswith("mms-lab: error: kind=ConfigError code=2 op=bvy")

    def test_missing_file(self, capsys, tmp_path):
        "unreadable configuration"
        assert main(_args("bvy", config=str(tmp_path / "absent.json"))) == 4
        assert "kind=OutputError code=4 op=config" in capsys.readouterr().err

    def test_malformed(self, capsys, tmp_path, write_config):
        "malformed JSON writes nothing"
        out = tmp_path / "results"
        path = write_config('{"command": "bvy",')
        assert main(_args("bvy", config=path, out=str(out))) == 2
        err = capsys.readouterr().err
        assert len(err.strip().splitlines()) == 1
        assert "kind=ConfigError" in err
        assert not out.exists()

    def test_seed_override(self, capsys, write_config):
        "--seed enables randomized runs"
        path = write_config({"field": {"name": "random"}, "space": {"n_points": 8}})
        assert main(_args("bvy", config=path)) == 2
        assert "seed" in capsys.readouterr().err
        assert main(_args("bvy", config=path, seed=4)) == 0

    def test_invalid_override(self, capsys):
        "overrides are validated"
        assert main(_args("bvy", config=FIXTURE, threads=0)) == 2
        assert "threads" in capsys.readouterr().err

    def test_numerical_failure(self, capsys, write_config):
        "non-convergence exits with 3"
        path = write_config(
            {"space": {"n_points": 12}, "solver": {"max_iter": 1, "check_gradient": False}}
        )
        assert main(_args("nonlocal-solve", config=path)) == 3
        assert "kind=ConvergenceError code=3" in capsys.readouterr().err


class TestRun:
    "Tests of run() entry point"

    def test_exit_code(self, monkeypatch, capsys):
        "exit code comes from main()"
        monkeypatch.setattr("sys.argv", ["mms-lab", "schema"])
        with pytest.raises(SystemExit) as excinfo:
            run()
        assert excinfo.value.code == 0
        assert "properties" in capsys.readouterr().out


class TestInvalidInputs:
    "Bad values inside an otherwise valid configuration"

    @pytest.mark.parametrize(
        "command, document, kind",
        [
            ("poincare", {"space": {"n_points": 12}, "center": 99}, "ParameterError"),
            ("interp", {"sizes": []}, "ConfigError"),
            ("bvy", {"field": {"name": "constant", "params": {"value": "abc"}}}, "FieldError"),
            ("bvy", {"field": {"name": "bump", "params": {"width": 0}}}, "FieldError"),
            ("anisotropic", {"space": {"n_points": 6, "dimension": 2}, "n_a": 2.5}, "ConfigError"),
        ],
    )
    def test_exit_code(self, capsys, write_config, command, document, kind):
        "validation failures exit with 2 and a single error line"
        path = write_config(document)
        assert main(_args(command, config=path)) == 2
        err = capsys.readouterr().err
        assert len(err.strip().splitlines()) == 1
        assert f"kind={kind} code=2" in err
