import io
import json
import subprocess
import sys

import pytest

from torsionph.cli import run


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("examples")
    paths = {}
    for name in ("rp2", "rp2x2", "s2", "fig2-left", "fig2-right"):
        path = str(d / f"{name}.json")
        code, _, _ = call(["examples", name, "--output", path])
        assert code == 0
        paths[name] = path
    broken = d / "broken.json"
    broken.write_text(json.dumps({"n": 1, "simplices": [
        {"v": [0], "g": ["1"]}, {"v": [1], "g": ["0"]}, {"v": [0, 1], "g": ["0"]}]}))
    paths["broken"] = str(broken)
    zero_den = d / "zero.json"
    zero_den.write_text(json.dumps({"n": 1, "simplices": [{"v": [0], "g": ["1/0"]}]}))
    paths["zero"] = str(zero_den)
    garbage = d / "garbage.json"
    garbage.write_text("[1, 2,")
    paths["garbage"] = str(garbage)
    return paths


def test_examples_round_trip_validate(files):
    for name in ("rp2", "rp2x2", "s2", "fig2-left", "fig2-right"):
        code, out, _ = call(["validate", "--input", files[name]])
        assert code == 0 and json.loads(out)["ok"] is True


def test_dt_reference_value(files):
    code, out, _ = call(["dt", "--input", files["rp2"], "--input", files["rp2x2"], "--degree", "1", "--coeffs", "z"])
    assert code == 0
    obj = json.loads(out)
    assert obj["value"] == "1" and obj["attained"] is True


def test_dt_infinite_has_witness(files):
    code, out, _ = call(["dt", "--input", files["rp2"], "--input", files["s2"]])
    obj = json.loads(out)
    assert code == 0 and obj["value"] == "inf"
    assert obj["witness"]["target"] == {"rank": 0, "torsion": [2]}


def test_dt_epsilon_probe(files):
    code, out, _ = call(["dt", "--input", files["rp2"], "--input", files["rp2x2"], "--epsilon", "1/2"])
    assert code == 0 and json.loads(out)["holds"] is False
    code, out, _ = call(["dt", "--input", files["rp2"], "--input", files["rp2x2"], "--epsilon", "1"])
    assert json.loads(out) == {"epsilon": "1", "holds": True, "witness": None}


def test_match_fig2(files):
    code, out, _ = call(["match", "--input", files["fig2-left"], "--input", files["fig2-right"],
                         "--degree", "1", "--coeffs", "q"])
    assert code == 0 and json.loads(out)["value"] == "2"


def test_diagram_output(files):
    code, out, _ = call(["diagram", "--input", files["fig2-left"], "--coeffs", "zp:3"])
    assert code == 0
    assert json.loads(out)[0] == {"b": "0", "d": "4", "mult": 1}
    code, out, _ = call(["diagram", "--input", files["fig2-left"], "--format", "text"])
    assert out.splitlines()[0].split() == ["birth", "death", "mult"]


def test_groups_output(files):
    code, out, _ = call(["groups", "--input", files["rp2"]])
    obj = json.loads(out)
    assert code == 0 and obj["grid"] == [["0", "1"]]
    code, out, _ = call(["groups", "--input", files["rp2"], "--format", "text"])
    assert "Z/2" in out


def test_bound_commands(files):
    code, out, _ = call(["bound", "--input", files["s2"], "--input", files["rp2"],
                         "--u", "3/2", "--v", "2", "--u2", "1", "--v2", "3"])
    assert code == 0 and json.loads(out) == {"bound": "1/2"}
    code, out, _ = call(["bound", "--input", files["rp2"], "--input", files["rp2x2"]])
    obj = json.loads(out)
    assert obj["dt"] == "1" and obj["witness_bound"] is not None


def test_stability_command(files):
    code, out, _ = call(["stability", "--input", files["rp2"], "--eta", "1/4", "--seed", "3"])
    assert code == 0 and json.loads(out)["passed"] is True


def test_output_is_deterministic(files):
    argv = ["stability", "--input", files["fig2-left"], "--eta", "1/2", "--seed", "9"]
    assert call(argv) == call(argv)


# --- error handling ----------------------------------------------------------------


def test_validate_broken_exits_1(files):
    code, out, _ = call(["validate", "--input", files["broken"]])
    obj = json.loads(out)
    assert code == 1 and obj["kind"] == "monotonicity"


def test_domain_errors_exit_1(files):
    for argv, fragment in [
        (["groups", "--input", files["zero"]], "zero denominator"),
        (["groups", "--input", files["garbage"]], "invalid JSON"),
        (["groups", "--input", files["broken"]], "enters at"),
        (["dt", "--input", files["rp2"], "--input", "/nonexistent.json"], "No such file"),
    ]:
        code, out, err = call(argv)
        assert code == 1 and out == ""
        assert err.startswith(f"torsionph {argv[0]}: error:") and fragment in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["dt", "--input", "a.json"],
        ["groups"],
        ["groups", "--input", "a.json", "--coeffs", "zp:4"],
        ["diagram", "--input", "a.json", "--coeffs", "z"],
        ["dt", "--input", "a", "--input", "b", "--epsilon", "1/0"],
        ["dt", "--input", "a", "--input", "b", "--epsilon", "-1"],
        ["stability", "--input", "a.json"],
        ["bound", "--input", "a", "--input", "b", "--u", "1"],
        ["groups", "--input", "a.json", "--format", "xml"],
        ["examples", "nosuch"],
    ],
)
def test_usage_errors_exit_2(argv):
    code, out, _ = call(argv)
    assert code == 2 and out == ""


def test_tp_threads_validated(files, monkeypatch):
    monkeypatch.setenv("TP_THREADS", "zero")
    assert call(["groups", "--input", files["rp2"]])[0] == 2
    monkeypatch.setenv("TP_THREADS", "2")
    assert call(["groups", "--input", files["rp2"]])[0] == 0


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "torsionph", "dt", "--input", files["rp2"], "--input", files["rp2x2"]],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == "1"
    proc = subprocess.run([sys.executable, "-m", "torsionph", "dt"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2 and "Traceback" not in proc.stderr
