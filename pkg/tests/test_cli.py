import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from gorlab.cli import run

SCHEMA = json.loads(resources.files("gorlab").joinpath("report.schema.json").read_text())
DIMS = SCHEMA["$defs"]["dims"]


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv, "--json")
    data = json.loads(text)
    jsonschema.validate(data, SCHEMA)
    return code, data


def test_gorenstein_sphere():
    code, data = call_json("gorenstein", "@sphere3")
    assert code == 0
    assert data["result"]["gorenstein"] is True
    assert data["result"]["gorenstein_degree"] == 3
    jsonschema.validate(data["result"]["t"], DIMS)


def test_convolution_command_on_product():
    code, data = call_json("theorem4", "@product-s3-s3")
    assert code == 0
    r = data["result"]
    assert (r["base_gorenstein"], r["fiber_gorenstein"], r["total_gorenstein"]) == (True, True, True)
    assert r["convolution_checked"]


def test_pd_check_example():
    code, data = call_json("pd-check", "@example")
    assert code == 0
    assert data["result"]["verdict"] is True and data["result"]["formal_dimension"] == 6


def test_text_output_marks_uncertified():
    code, text = call("tcal", "@sphere3")
    assert code == 0
    assert "degree -3: 1" in text
    assert "uncertified" in text


def test_json_is_deterministic():
    a = call("gcal", "@example", "--json")
    b = call("gcal", "@example", "--json")
    assert a == b


def test_dims_serialise_as_sorted_pairs():
    _, data = call_json("cohomology", "@example", "--show-bases")
    dims = data["result"]["dims"]
    jsonschema.validate(dims, DIMS)
    assert [p["degree"] for p in dims["dims"]] == [0, 1, 3, 5, 6]
    assert data["result"]["bases"]["6"] == ["x*y"]


def test_file_input(tmp_path):
    p = tmp_path / "s2.alg"
    p.write_text("gen a : 2\ngen b : 3\nd b = a^2\n")
    code, data = call_json("theorem2", str(p))
    assert code == 0 and data["result"]["agree"]
    assert len(data["input_sha256"]) == 64


@pytest.mark.parametrize(
    "argv, kind",
    [
        (("cohomology", "/nonexistent.alg"), "InputError"),
        (("cohomology", "@nope"), "InputError"),
        (("theorem4", "@sphere3"), "InputError"),
        (("tcal", "@product-s3-s3"), "InputError"),
        (("cohomology",), "InputError"),
    ],
)
def test_input_errors_exit_1(argv, kind):
    code, data = call_json(*argv)
    assert code == 1
    assert data["error"]["kind"] == kind


def test_parse_error_exit_1(tmp_path):
    p = tmp_path / "bad.alg"
    p.write_text("gen a : 2\nd a = a +\n")
    code, data = call_json("cohomology", str(p))
    assert code == 1
    assert data["error"]["kind"] == "ParseError"
    assert "line 2" in data["error"]["message"]


def test_unverifiable_window_exit_1(tmp_path):
    p = tmp_path / "poly.alg"
    p.write_text("gen a : 2\n")
    code, data = call_json("gorenstein", str(p))
    assert code == 1 and data["error"]["kind"] == "HypothesisUnverifiable"


def test_assertion_failure_exit_2(monkeypatch):
    import gorlab.cli as cli
    from gorlab.invariants import RouteMismatch

    def broken(*a, **k):
        raise RouteMismatch("T in degree -3: closure route 1, resolution route 2")

    monkeypatch.setattr(cli, "t_invariant", broken)
    code, data = call_json("tcal", "@sphere3")
    assert code == 2 and data["error"]["kind"] == "RouteMismatch"


def test_env_overrides_window(monkeypatch):
    monkeypatch.setenv("GORLAB_MAX_DEGREE", "9")
    _, data = call_json("cohomology", "@sphere3")
    assert data["window"]["max_degree"] == 9
    assert data["result"]["dims"]["window"] == [0, 8]
    _, data = call_json("cohomology", "@sphere3", "--max-degree", "14")
    assert data["window"]["max_degree"] == 14


def test_example_fiber_warns():
    code, data = call_json("example-fiber", "--word-cap", "2")
    assert code == 0
    assert {"degree": 3, "dim": 6} in data["result"]["dims"]["dims"]
    assert data["warnings"]


@pytest.mark.parametrize("cmd", ["check", "minimal-model", "acyclic-closure", "tor"])
def test_remaining_commands_run(cmd):
    target = "@truncated-poly" if cmd != "check" else "@twisted-cp2"
    code, data = call_json(cmd, target)
    assert code == 0, data


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "gorlab.cli", "gorenstein", "@circle"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "gorenstein degree: 1" in out.stdout
