import io
import json
import subprocess
import sys

import pytest

from padicfs.cli import main, reemit
from padicfs.suites import SUITES


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_transform_chi3():
    code, text = run("transform", "--spec", "chi:3", "--index", "1", "--tmax", "2")
    assert code == 0
    doc = json.loads(text)
    assert len(doc["table"]) == 4
    assert doc["table"][0] == {"t": "0", "value": "0"}
    assert doc["manifest"][-1]["branch"] == "alpha0=1"


def test_transform_zero_index():
    code, text = run("transform", "--spec", "chi:3", "--index", "0", "--format", "csv")
    assert code == 0 and text == "t,value\n0,1\n"


def test_transform_symbolic_strings():
    code, text = run("transform", "--spec", "chi:q", "--index", "2", "--tmax", "1")
    assert code == 0
    values = [r["value"] for r in json.loads(text)["table"]]
    assert all("q" in v for v in values)


@pytest.mark.parametrize("argv", [
    ("transform", "--spec", "chi:q", "--index", "2", "--tmax", "1"),
    ("product", "--spec", "chi:3", "--spec", "chi:5", "--index", "1,1"),
    ("breakdown", "--spec", "chi:q", "--nmax", "3"),
    ("converge", "--spec", "chi:3", "--point", "7", "--place", "inf", "--nmax", "6"),
    ("hydra", "poles", "--eval", "q=5"),
])
def test_json_round_trip_is_byte_identical(argv):
    code, text = run(*argv)
    assert code == 0
    assert reemit(text) == text


def test_file_inputs(tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"series": [{"p": 2, "a": ["1/4", "5/4"], "b": ["1", "1"]}]}))
    frame = tmp_path / "f.json"
    frame.write_text(json.dumps({"p": 2, "classes": {"D0": "inf", "D1": "prime:5"}}))
    code, text = run("converge", "--spec", str(spec), "--frame", str(frame),
                     "--point", "pre:;per:10", "--nmax", "4")
    assert code == 0
    doc = json.loads(text)
    assert doc["certified"] and doc["place"] == "prime:5"


def test_verify_suites_pass():
    code, text = run("verify", "inversion")
    assert code == 0 and json.loads(text)["passed"]
    code, text = run("verify", "formal-vs-closed", "--format", "csv")
    assert code == 0 and "pass-as-expected" in text


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_every_suite_is_deterministic(suite):
    a = run("verify", suite, "--seed", "3")
    b = run("verify", suite, "--seed", "3")
    assert a == b and a[0] == 0


def test_breakdown_numeric_q3():
    code, text = run("breakdown", "--spec", "chi:q", "--eval", "q=3", "--nmax", "4")
    assert code == 0
    assert json.loads(text)["on_variety"] == [[1]]


def test_converge_prime_place_valuations():
    code, text = run("converge", "--spec", "chi:3", "--point", "pre:;per:10",
                     "--place", "prime:3", "--nmax", "12")
    assert code == 0
    doc = json.loads(text)
    tail = doc["trend"]["tail_min"]
    assert tail == sorted(tail)


def test_converge_csv_labels_intervals():
    code, text = run("converge", "--spec", "chi:3", "--point", "7", "--place", "inf",
                     "--nmax", "3", "--format", "csv", "--precision", "64")
    assert code == 0
    assert text.splitlines()[0] == "N,delta,direct_agrees,abs_interval_lo,abs_interval_hi"


def test_hydra_commands():
    code, text = run("hydra", "orbit", "--spec", "T:3", "--point", "27")
    doc = json.loads(text)
    assert code == 0 and doc["status"] == "cycle" and sorted(doc["cycle"]) == ["1", "2"]
    code, text = run("hydra", "orbit", "--spec", "sqrt7", "--point", "2,1")
    assert json.loads(text)["cycle"] == ["2+sqrt7", "4+sqrt7", "4+2*sqrt7"]
    code, text = run("hydra", "numen", "--spec", "T:3", "--point", "pre:;per:10", "--nmax", "4")
    assert code == 0 and json.loads(text)["correspondence"]["value"] == "2"
    code, text = run("hydra", "poles", "--eval", "q=3")
    assert json.loads(text)["class"] == "breakdown"


def test_exit_codes(tmp_path):
    assert run("transform")[0] == 2
    assert run("transform", "--spec", "missing-file.json")[0] == 2
    assert run("transform", "--spec", "chi:3", "--index", "1,1")[0] == 2
    assert run("converge", "--spec", "chi:3", "--point", "7", "--place", "prime:2")[0] == 2
    assert run("bogus")[0] == 2
    assert run("product", "--spec", "chi:3", "--nmax", "3")[0] == 3
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"p": 2, "a": ["s", "3/2"], "b": ["0", "1/2"]}))
    assert run("converge", "--spec", str(spec), "--eval", "s=1", "--point", "7",
               "--place", "inf")[0] == 4


def test_failing_check_exits_one():
    # swap in a suite that reports a counterexample
    from padicfs import suites
    original = suites.SUITES["eigen"]
    suites.SUITES["eigen"] = lambda rng, specs=None: [{"identity": "broken", "status": "counterexample"}]
    try:
        assert run("verify", "eigen")[0] == 1
    finally:
        suites.SUITES["eigen"] = original


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "padicfs", "transform", "--spec", "chi:3",
                          "--index", "0"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["table"] == [{"t": "0", "value": "1"}]
