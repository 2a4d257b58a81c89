import json
import math
import subprocess
import sys

import pytest

from leaky_aquifer import cli
from leaky_aquifer.cli import main
from leaky_aquifer.table1 import ROWS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def json_lines(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


@pytest.fixture
def csv_file(tmp_path):
    def write(text, name="points.csv"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write


# eval

def test_eval_row1_text(capsys):
    code, out, _ = run(capsys, "eval", "--x", "4.95", "--y", "5", "--nu", "2")
    assert code == 0
    assert "0.1224998798e-4" in out
    assert "converged=yes" in out


def test_eval_y0_matches_e1(capsys, constants):
    code, out, _ = run(capsys, "eval", "--x", "1", "--y", "0", "--nu", "0",
                       "--format", "json")
    assert code == 0
    rec = json_lines(out)[0]
    assert rec["ln_value"] == pytest.approx(math.log(constants["E1_1"]),
                                            rel=1e-10)
    assert rec["regime"] == "endpoint"


def test_eval_json_schema(capsys):
    code, out, _ = run(capsys, "eval", "--x", "2", "--y", "9", "--nu", "1",
                       "--format", "json")
    assert code == 0
    rec = json_lines(out)[0]
    assert list(rec)[:10] == list(cli.RECORD_FIELDS)
    assert rec["regime"] == "interior"
    assert isinstance(rec["converged"], bool)
    assert 0.1 <= rec["mantissa"] < 1.0
    assert isinstance(rec["exponent10"], int)


def test_eval_csv_has_one_header(capsys):
    code, out, _ = run(capsys, "eval", "--x", "4.95", "--y", "5", "--nu", "2",
                       "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("x,y,nu,ln_value")
    assert len(lines) == 2
    assert lines[1].split(",")[9] == "true"


def test_eval_negative_x_is_domain_error(capsys):
    code, out, err = run(capsys, "eval", "--x", "-1", "--y", "1", "--nu", "0")
    assert code == 1
    assert "x must be > 0" in err
    assert out == ""


@pytest.mark.parametrize("argv", [
    ["eval", "--x", "abc", "--y", "1", "--nu", "0"],
    ["eval", "--x", "nan", "--y", "1", "--nu", "0"],
    ["eval", "--x", "1", "--y", "1"],
    ["eval", "--x", "1", "--y", "1", "--nu", "0", "--rel-tol", "2"],
    ["eval", "--x", "1", "--y", "1", "--nu", "0", "--format", "xml"],
    ["frobnicate"],
    [],
])
def test_malformed_flags_exit_64(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 64
    assert "usage" in capsys.readouterr().err


def test_nonconverged_exit_2(capsys):
    # the reflection formula loses most digits here and says so
    code, out, _ = run(capsys, "eval", "--x", "0.2", "--y", "1", "--nu", "10")
    assert code == 2
    assert "converged=no" in out


def test_env_reltol(capsys, monkeypatch):
    monkeypatch.setenv("AQUIFER_RELTOL", "1e-4")
    _, out, _ = run(capsys, "eval", "--x", "4.95", "--y", "5", "--nu", "2",
                    "--format", "json")
    loose = json_lines(out)[0]
    monkeypatch.setenv("AQUIFER_RELTOL", "1e-12")
    _, out, _ = run(capsys, "eval", "--x", "4.95", "--y", "5", "--nu", "2",
                    "--format", "json")
    tight = json_lines(out)[0]
    assert loose["n_evals"] < tight["n_evals"]
    # an explicit flag still wins over the environment
    _, out, _ = run(capsys, "eval", "--x", "4.95", "--y", "5", "--nu", "2",
                    "--format", "json", "--rel-tol", "1e-4")
    assert json_lines(out)[0]["n_evals"] == loose["n_evals"]


def test_env_reltol_malformed(capsys, monkeypatch):
    monkeypatch.setenv("AQUIFER_RELTOL", "lots")
    code, _, err = run(capsys, "eval", "--x", "1", "--y", "1", "--nu", "0")
    assert code == 64
    assert "AQUIFER_RELTOL" in err


# table1

def test_table1_passes_gate(capsys):
    code, out, _ = run(capsys, "table1", "--format", "json")
    assert code == 0
    recs = json_lines(out)
    assert [r["row"] for r in recs] == list(range(1, 13))
    for r in recs:
        assert r["n_evals"] > 0
        if r["row"] not in (7, 8, 9):
            assert r["delta"] <= 1e-8


def test_table1_rows_7_to_9_use_h80_references(capsys):
    _, out, _ = run(capsys, "table1", "--format", "json")
    recs = {r["row"]: r for r in json_lines(out)}
    for a, b in ((7, 10), (8, 11), (9, 12)):
        assert recs[a]["reference"] == recs[b]["reference"]
        assert recs[a]["delta"] <= 1e-8
    assert recs[12]["reference"] == "0.5140057464e-250"
    assert recs[8]["reference"] != ROWS[7].value.format()


def test_table1_text(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 12
    assert lines[0].startswith("row=1 ")
    assert "delta=" in lines[11]


def test_table1_gate_failure_exit_2(capsys, monkeypatch):
    bumped = ROWS[0].__class__(**{**ROWS[0].__dict__, "mantissa": 0.1225})
    monkeypatch.setattr(cli, "ROWS", (bumped,) + ROWS[1:])
    monkeypatch.setattr(cli, "reference_for", lambda r: r)
    code, _, _ = run(capsys, "table1")
    assert code == 2


# batch

def test_batch_three_table_rows(capsys, csv_file):
    path = csv_file("x,y,nu\n4.95,5,2\n10,2,6\n3.1,2.6,5\n")
    code, out, _ = run(capsys, "batch", "--input", path, "--format", "json")
    assert code == 0
    recs = json_lines(out)
    assert len(recs) == 4
    for r in recs[:3]:
        assert r["delta"] <= 1e-8
    assert recs[3] == {"summary": {"ok": 3, "nonconverged": 0, "error": 0}}


def test_batch_header_only(capsys, csv_file):
    code, out, _ = run(capsys, "batch", "--input", csv_file("x,y,nu\n"),
                       "--format", "json")
    assert code == 0
    assert json_lines(out) == [{"summary": {"ok": 0, "nonconverged": 0, "error": 0}}]


def test_batch_negative_y_row(capsys, csv_file):
    path = csv_file("x,y,nu\n4.95,5,2\n2,-1,0\n3.1,2.6,5\n")
    code, out, _ = run(capsys, "batch", "--input", path, "--format", "json")
    assert code == 1
    recs = json_lines(out)
    assert recs[1]["row"] == 2
    assert recs[1]["error"] == "y must be ≥ 0"
    assert "ln_value" in recs[2]
    assert recs[3]["summary"] == {"ok": 2, "nonconverged": 0, "error": 1}


def test_batch_malformed_cell_continues(capsys, csv_file):
    path = csv_file("x,y,nu\nfoo,1,0\n1,1,\n4.95,5,2\n")
    code, out, _ = run(capsys, "batch", "--input", path)
    assert code == 1
    lines = out.splitlines()
    assert lines[0].startswith("row 1: error: x is not a number")
    assert lines[1] == "row 2: error: missing nu"
    assert "0.1224998798e-4" in lines[2]
    assert lines[3] == "# summary ok=1 nonconverged=0 error=2"


def test_batch_unreadable(capsys, tmp_path):
    code, _, err = run(capsys, "batch", "--input", str(tmp_path / "missing.csv"))
    assert code == 66
    assert "cannot read" in err


def test_batch_bad_header(capsys, csv_file):
    code, _, _ = run(capsys, "batch", "--input", csv_file("a,b,c\n1,2,3\n"))
    assert code == 66


def test_batch_parallel_preserves_order(capsys, csv_file):
    rows = [(4.95, 5, 2), (1000, 200, 600), (2, -1, 0), (3.1, 2.6, 5),
            (10, 2, 6), (31, 26, 50), (1, 0, 0), (49, 50, 20)]
    path = csv_file("x,y,nu\n" + "".join(f"{a},{b},{c}\n" for a, b, c in rows))
    _, serial, _ = run(capsys, "batch", "--input", path, "--format", "json")
    code, par, _ = run(capsys, "batch", "--input", path, "--format", "json",
                       "--parallel", "3")
    assert code == 1
    assert par == serial
    assert [r.get("row") for r in json_lines(par)[:-1]] == list(range(1, 9))


def test_batch_parallel_must_be_positive(capsys, csv_file):
    code, _, _ = run(capsys, "batch", "--input", csv_file("x,y,nu\n"),
                     "--parallel", "0")
    assert code == 64


def test_batch_csv_output(capsys, csv_file):
    path = csv_file("x,y,nu\n4.95,5,2\n2,-1,0\n")
    code, out, _ = run(capsys, "batch", "--input", path, "--format", "csv")
    lines = out.splitlines()
    assert lines[0].split(",")[:4] == ["row", "x", "y", "nu"]
    assert len(lines) == 4
    assert lines[2].endswith("y must be ≥ 0")
    assert lines[3].startswith("# summary")


def test_json_round_trip_is_byte_identical(capsys, csv_file):
    path = csv_file("x,y,nu\n4.95,5,2\n2,-1,0\n1000,200,600\n0.25,4,0\n")
    run(capsys, "batch", "--input", path, "--format", "json")
    _, out, _ = run(capsys, "batch", "--input", path, "--format", "json")
    for line in out.splitlines():
        assert cli.render_json(json.loads(line)) == line


# bessel, gamma3

def test_bessel_subcommand(capsys, constants):
    code, out, _ = run(capsys, "bessel", "--nu", "0", "--z", "1", "--format", "json")
    assert code == 0
    rec = json_lines(out)[0]
    assert rec["ln_value"] == pytest.approx(math.log(constants["K0_1"]),
                                            rel=1e-10)


def test_bessel_domain(capsys):
    code, _, err = run(capsys, "bessel", "--nu", "0", "--z", "0")
    assert code == 1
    assert "z > 0" in err


def test_gamma3_subcommand(capsys):
    # Gamma(alpha, x; b) = x^alpha K_{-alpha}(x, b/x); row 1 has x = 4.95, y = 5
    code, out, _ = run(capsys, "gamma3", "--alpha", "-2", "--x", "4.95",
                       "--b", "24.75", "--format", "json")
    assert code == 0
    expected = ROWS[0].value.ln_value - 2 * math.log(4.95)
    assert json_lines(out)[0]["ln_value"] == pytest.approx(expected, abs=1e-9)


def test_exit_codes_are_the_documented_set():
    assert {cli.EXIT_OK, cli.EXIT_DOMAIN, cli.EXIT_NONCONVERGED,
            cli.EXIT_USAGE, cli.EXIT_NOINPUT} == {0, 1, 2, 64, 66}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "leaky_aquifer", "eval",
                           "--x", "4.95", "--y", "5", "--nu", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "0.1224998798e-4" in proc.stdout
