import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from jetcalc.acceptance import CLI_FIXTURES, run_cli_capture, write_fixture_files
from jetcalc.cli import RunConfig, parse_args, run

GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("JETCALC_UPDATE_GOLDEN") == "1"


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    write_fixture_files(str(tmp_path))
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _slug(argv):
    parts = (a[2:] if a.startswith("--") else a for a in argv)
    return "_".join(p.replace(",", "+").replace(".json", "").replace("/", "over") for p in parts)


# -- argument parsing ----------------------------------------------------------------------


def test_parse_args_neigh():
    cfg = parse_args(["neigh", "--ideal", "c.json", "--point", "0,0", "--order", "2"])
    assert cfg == RunConfig(command="neigh", ideal_path="c.json", point="0,0", order=2)


def test_parse_args_negative_order(capsys):
    with pytest.raises(SystemExit) as info:
        parse_args(["neigh", "--ideal", "c.json", "--point", "0,0", "--order", "-1"])
    assert info.value.code == 2
    assert "--order" in capsys.readouterr().err


def test_parse_args_missing_flag_is_named(capsys):
    with pytest.raises(SystemExit) as info:
        parse_args(["separate", "--family", "f.json", "--s", "1", "--point", "0,0", "--max-order", "3"])
    assert info.value.code == 2
    assert "--s2" in capsys.readouterr().err


def test_parse_args_unknown_flag(capsys):
    with pytest.raises(SystemExit):
        parse_args(["neigh", "--ideal", "c.json", "--point", "0,0", "--order", "1", "--bogus"])
    assert "--bogus" in capsys.readouterr().err


def test_parse_args_requires_subcommand():
    with pytest.raises(SystemExit):
        parse_args([])


# -- golden outputs -------------------------------------------------------------------------


@pytest.mark.parametrize("argv", CLI_FIXTURES, ids=_slug)
def test_golden_output(workdir, argv):
    code, out = run_cli_capture(argv)
    path = GOLDEN / f"{_slug(argv)}.txt"
    record = f"exit {code}\n".encode() + out
    if UPDATE:
        GOLDEN.mkdir(exist_ok=True)
        path.write_bytes(record)
    assert path.read_bytes() == record


def test_text_output_examples(workdir):
    code, out = run_cli_capture(["neigh", "--ideal", "cusp.json", "--point", "0,0", "--order", "2"])
    text = out.decode()
    assert code == 0 and "dim 5" in text.splitlines()
    assert "basis 1 u1 u2 u1^2 u1*u2" in text
    code, out = run_cli_capture(
        ["separate", "--family", "parabolas.json", "--s", "1", "--s2", "2", "--point", "0,0", "--max-order", "6"]
    )
    assert code == 0 and "Separated at order 2" in out.decode()
    code, out = run_cli_capture(["jetmod", "--ideal", "zero2.json", "--order", "2"])
    assert code == 0 and "free module rank 6" in out.decode()


# -- exit codes ------------------------------------------------------------------------------


def _write(path, data):
    Path(path).write_text(data if isinstance(data, str) else json.dumps(data))


def test_exit_agree_up_to(workdir):
    code, out = run_cli_capture(
        ["separate", "--family", "lines.json", "--s", "1", "--s2", "1", "--point", "0,0", "--max-order", "3"]
    )
    assert code == 10 and b"AgreeUpTo 3" in out


def test_exit_not_on_fibers(workdir):
    code, out = run_cli_capture(
        ["separate", "--family", "lines.json", "--s", "1", "--s2", "2", "--point", "1,0", "--max-order", "3"]
    )
    assert code == 3 and b"NotOnBothFibers 1,2" in out
    code, out = run_cli_capture(["neigh", "--ideal", "cusp.json", "--point", "1,2", "--order", "1"])
    assert code == 3 and out.startswith(b"error:")


def test_exit_resource_limit(workdir):
    _write(workdir / "hard.json", {"vars": 3, "gens": ["x1^3 - x2*x3", "x2^2 - x1*x3 + 1", "x1*x2*x3 - 1"]})
    code, out = run_cli_capture(["diffops", "--ideal", "hard.json", "--order", "1", "--coeff-deg", "0", "--max-pairs", "1"])
    assert code == 4 and b"resource limit" in out
    assert "JETCALC_MAX_PAIRS" not in os.environ


def test_exit_resource_limit_from_environment(workdir, monkeypatch):
    _write(workdir / "hard.json", {"vars": 3, "gens": ["x1^3 - x2*x3", "x2^2 - x1*x3 + 1", "x1*x2*x3 - 1"]})
    monkeypatch.setenv("JETCALC_MAX_PAIRS", "1")
    code, _ = run_cli_capture(["diffops", "--ideal", "hard.json", "--order", "1", "--coeff-deg", "0"])
    assert code == 4
    assert os.environ["JETCALC_MAX_PAIRS"] == "1"


def test_exit_failed_acceptance(monkeypatch):
    from jetcalc import acceptance

    failing = lambda: acceptance.CriterionResult(99, "always fails", False, "forced")
    monkeypatch.setattr(acceptance, "CRITERIA", [failing])
    code, out = run(RunConfig(command="acceptance"))
    assert code == 1
    assert "[FAIL] 99 always fails: forced" in out
    assert "0/1 criteria passed" in out


@pytest.mark.parametrize(
    "content, fragment",
    [
        ("{not json", "invalid JSON"),
        ({"vars": 2, "gens": ["x1 + * x2"]}, "gens[0]: "),
        ({"vars": 2, "gens": ["x1 + x3"]}, "at position 5"),
        ({"vars": -1, "gens": ["x1"]}, "'vars' must be a non-negative integer"),
        ({"vars": 2, "gens": []}, "'gens' must be a nonempty list"),
        ({"vars": 2, "gens": [3]}, "gens[0] is not a string"),
    ],
)
def test_input_errors(workdir, content, fragment):
    _write(workdir / "bad.json", content)
    code, out = run_cli_capture(["neigh", "--ideal", "bad.json", "--point", "0,0", "--order", "1"])
    assert code == 2
    text = out.decode()
    assert text.startswith("error:") and fragment in text
    assert text.count("\n") == 1


def test_bad_point_and_missing_file(workdir):
    code, out = run_cli_capture(["neigh", "--ideal", "cusp.json", "--point", "0,0,0", "--order", "1"])
    assert code == 2 and b"--point" in out
    code, out = run_cli_capture(["neigh", "--ideal", "nope.json", "--point", "0,0", "--order", "1"])
    assert code == 2 and b"cannot read nope.json" in out


def test_family_ambient_key(workdir):
    _write(workdir / "amb.json", {"params": 1, "vars": 2, "gens": ["x2 - s1*x1^2"], "ambient": ["x2 - x1^2"]})
    code, out = run_cli_capture(["grass", "--family", "amb.json", "--s", "1", "--point", "0,0", "--order", "2"])
    assert code == 0
    assert b"codimension r_n 0" in out


# -- JSON mode and determinism -------------------------------------------------------------


@pytest.mark.parametrize("argv", [a for a in CLI_FIXTURES if "--json" in a], ids=_slug)
def test_json_schema(workdir, argv):
    _, out = run_cli_capture(argv)
    data = json.loads(out)
    assert data["schema"] == "jetcalc/1"
    assert data["command"] == argv[0]

    def no_floats(v):
        if isinstance(v, float):
            return False
        if isinstance(v, dict):
            return all(no_floats(x) for x in v.values())
        if isinstance(v, list):
            return all(no_floats(x) for x in v)
        return True

    assert no_floats(data)


def test_json_rationals_are_strings(workdir):
    code, out = run_cli_capture(
        ["grass", "--family", "parabolas.json", "--s", "1/2", "--point", "0,0", "--order", "2", "--plucker", "--json"]
    )
    data = json.loads(out)
    assert code == 0
    assert all(isinstance(x, str) for row in data["annihilator"] for x in row)
    assert data["s"] == ["1/2"]


@pytest.mark.parametrize("argv", CLI_FIXTURES[:6], ids=_slug)
def test_thread_count_does_not_change_output(workdir, argv):
    assert run_cli_capture(argv) == run_cli_capture(argv + ["--threads", "3"])


def test_console_entry_point(workdir):
    proc = subprocess.run(
        [sys.executable, "-m", "jetcalc.cli", "jetmod", "--ideal", "zero2.json", "--order", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "free module rank 3" in proc.stdout
