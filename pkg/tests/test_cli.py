import io
import json
import subprocess
import sys

import pytest

from jetspace.cli import INCONCLUSIVE, OK, USAGE, VIOLATION, main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    text = buf.getvalue()
    return code, text


def run_json(*argv):
    code, text = run(*argv, "--json")
    return code, json.loads(text)


@pytest.fixture
def problems(tmp_path):
    files = {
        "cusp": "ring x y\nX: x^2 - y^3\n",
        "node": "ring x y z\nX: x*y - z^2\n",
        "xy": "ring x y\nY[1/2]: x*y\n",
        "xy_bad": "ring x y\nY[3/2]: x*y\n",
        "cone": "ring x y z\nD: x^2 + y^2 + z^2\n",
        "odp": "ring x y z w\nX: x^2 + y^2 + z^2 + w^2\n",
        "line": "ring x y\nD: x\n",
        "broken": "ring x y\nX: x*q\n",
        "opts": "ring x y z\nX: x*y - z^2\noptions: max_level=4, max_jac=2, tau=3/2\n",
    }
    out = {}
    for name, text in files.items():
        p = tmp_path / f"{name}.jet"
        p.write_text(text)
        out[name] = str(p)
    return out


def test_identity(problems):
    code, rep = run_json("identity", "--size", "4", "--trials", "50", "--seed", "3")
    assert code == OK and rep["zero_residuals"] == rep["trials"] == 50


def test_lift_certified_negative(problems):
    code, rep = run_json("lift", problems["cusp"], "-p", "2", "--jet", "0; t")
    assert code == OK
    assert rep["denef"]["status"] == "NOT_LIFTABLE" and rep["agree"] is True


def test_lift_exact_arc(problems):
    code, rep = run_json("lift", problems["cusp"], "-p", "3", "--jet", "t^3; t^2")
    assert code == OK and rep["agree"] is True


def test_lift_off_scheme_is_usage_error(problems):
    code, _ = run("lift", problems["node"], "-p", "2", "--jet", "t; t^2; t")
    assert code == USAGE


def test_lift_reduced(problems):
    code, rep = run_json("lift-reduced", problems["cusp"], "-p", "2", "--profile", "2", "--cols", "1,0")
    assert code == OK and len(rep["equations"]) == 2


def test_jet_ideal_and_dim(problems):
    code, rep = run_json("jet-ideal", problems["node"], "-m", "1")
    assert code == OK and rep["generators"][0] == "x_0*y_0 - z_0^2"
    code, rep = run_json("dim", problems["node"])
    assert code == OK and rep["dim"] == 2


def test_classify(problems):
    code, rep = run_json("classify", problems["node"], "--max-level", "3", "--crosscheck")
    assert code == OK
    assert rep["verdicts"]["canonical"] == "HOLDS_UP_TO_SWEEP"
    assert rep["verdicts"]["terminal"].startswith("REFUTED")
    assert all(rep["agreement"].values())


def test_mld_exit_codes(problems):
    assert run("mld", problems["xy"], "--tau", "1")[0] == OK
    code, rep = run_json("mld", problems["xy"], "--tau", "1", "--tau", "5/4")
    assert code == VIOLATION
    statuses = [v["status"] for v in rep["results"]]
    assert statuses == ["PASSED_SWEEP", "CERTIFIED_VIOLATION"]
    assert rep["oracle"]["value"] == "1"


def test_mld_options_block(problems):
    code, rep = run_json("mld", problems["opts"])
    assert code == VIOLATION
    assert rep["results"][0]["sweep"] == {"m_max": 4, "e_max": 2, "contact_max": 4}


def test_mld_sweep_misses_distant_witness(problems):
    code, rep = run_json("mld", problems["xy_bad"], "--tau", "-5", "--max-contact", "4")
    # the witness lies beyond the sweep, and the oracle reports minus infinity
    assert code == OK and rep["oracle"]["kind"] == "MINUS_INFINITY"


def test_invadj(problems):
    code, rep = run_json("invadj", problems["cone"], "--tau", "1", "--tau", "3/2")
    assert code == OK and all(row["agree"] for row in rep["rows"])
    code, rep = run_json("invadj", problems["line"], "--tau", "1", "--tau", "3/2")
    assert code == OK and all(row["agree"] for row in rep["rows"])
    code, rep = run_json("invadj", problems["odp"], "--corollary", "--tau", "2", "--tau", "5/2",
                         "--max-level", "4")
    assert code == OK and all(row["agree"] for row in rep["rows"])


def test_semicont(problems):
    code, rep = run_json("semicont", problems["xy"], "--points", "0,0; 0,1; 1,1")
    assert code == OK and rep["consistent"]
    assert [v["value"] for v in rep["values"]] == ["1", "3/2", "2"]


def test_greenberg(problems):
    code, rep = run_json("greenberg", problems["cusp"], "-m", "2", "--p-max", "8", "--seed", "1")
    assert code == OK and rep["stabilized_at"] <= 8


def test_greenberg_budget_exhausted(problems):
    code, _ = run("greenberg", problems["cusp"], "-m", "2", "--p-max", "3", "--seed", "1")
    assert code == INCONCLUSIVE


@pytest.mark.parametrize("argv", [
    ["mld"],
    ["lift", "/nonexistent/file.jet", "-p", "1", "--jet", "0"],
    ["frobnicate"],
    ["identity", "--size", "zero"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == USAGE


def test_parse_error_reports_position(problems, capsys):
    assert run("dim", problems["broken"])[0] == USAGE
    assert "line 2, col 6" in capsys.readouterr().err


def test_json_is_byte_stable(problems):
    first = run("classify", problems["node"], "--max-level", "2", "--json")[1]
    second = run("classify", problems["node"], "--max-level", "2", "--json")[1]
    assert first == second
    assert json.dumps(json.loads(first), sort_keys=True, indent=2) + "\n" == first


def test_console_entry_point(problems):
    proc = subprocess.run([sys.executable, "-m", "jetspace.cli", "mld", problems["xy"], "--tau", "5/4"],
                          capture_output=True, text=True)
    assert proc.returncode == VIOLATION
