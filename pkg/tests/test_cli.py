import csv
import io
import json
import subprocess
import sys

import pytest

from cayleywalk import cli
from cayleywalk.ldp import ReportRow
from cayleywalk.walk import WalkReport


def call(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["limits", "coxeter", "--type", "B3"], "9/2"),
        (["limits", "coxeter", "--type", "I2(5)"], "even=12/5 odd=13/5"),
        (["limits", "cyclic", "--m", "5"], "6/5"),
        (["limits", "cyclic-product", "--moduli", "2,4"], "3/2"),
        (["limits", "components", "--n", "3"], "even=5/3 odd=2"),
        (["limits", "degrees", "--type", "E8"], "2 8 12 14 18 20 24 30"),
        (["braid", "closure", "--word", "[1,2]", "--strands", "3"], "1"),
        (["braid", "reduce", "--word", "[1,-2,2,1]", "--strands", "3"], "[1, 1]"),
        (["ldp", "kappa", "--n", "2", "--j", "2", "--k", "3"], "3"),
        (["ldp", "rate", "--n", "3", "--x", "0"], "-0.0376820724518"),
    ],
)
def test_scalar_outputs(capsys, argv, expected):
    code, out, err = call(capsys, *argv)
    assert code == 0, err
    assert out.strip() == expected


def test_compose_reproduces_block_word(capsys):
    code, out, _ = call(
        capsys, "braid", "compose",
        "--word", "[1,-2]", "--strands", "3",
        "--word", "[1,1]", "--strands", "2",
        "--word", "[1]", "--strands", "2",
    )
    assert code == 0 and out.strip() == "[1, -2, 4, 4, 6]"


def test_lift(capsys):
    code, out, _ = call(capsys, "braid", "lift", "--group", '{"family": "coxeter_a", "rank": 2}', "--word", "[2,1,2]")
    assert code == 0 and out.strip() == "[1, 2, 1]"


def test_global_flags_either_side(capsys):
    a = call(capsys, "--format", "json", "limits", "cyclic", "--m", "6")
    b = call(capsys, "limits", "cyclic", "--m", "6", "--format", "json")
    assert a == b
    assert json.loads(a[1])


@pytest.mark.parametrize(
    "argv",
    [
        ["limits", "coxeter", "--type", "Z3"],
        ["limits", "cyclic-product", "--moduli", "1,4"],
        ["braid", "closure", "--word", "[3]", "--strands", "3"],
        ["braid", "closure", "--word", "nope", "--strands", "3"],
        ["walk", "--group", '{"family": "cyclic", "m": 5, "bogus": 1}'],
        ["walk", "--group", '{"family": "cyclic", "m": 5}', "--trials", "0"],
        ["ldp", "logprob", "--model", "true_length", "--n", "3", "--N", "2", "--target", "3"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2 and out == "" and "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.run(["limits", "cyclic"])
    assert exc.value.code == 2


def test_verify_failure_exits_1(capsys, monkeypatch):
    from cayleywalk import verify

    monkeypatch.setattr(verify, "CHECKS", [("C0", "always fails", lambda: (False, "forced"))])
    code, out, _ = call(capsys, "verify")
    assert code == 1 and "FAIL" in out


def test_verify_subset(capsys):
    code, out, _ = call(capsys, "verify", "--only", "C1,C5")
    assert code == 0
    lines = out.strip().splitlines()
    assert [line.split()[0] for line in lines] == ["C1", "C5"]
    assert all(" PASS " in line for line in lines)


def test_walk_csv(capsys):
    code, out, _ = call(
        capsys, "walk", "--group", '{"family": "coxeter_a", "rank": 2}', "--steps", "64", "--trials", "2000", "--seed", "5"
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == WalkReport.CSV_HEADER
    assert [r[0] for r in rows[1:]] == ["63", "64", "65"]
    assert rows[2][3] == "4/3"


def test_ldp_report_csv(capsys):
    code, out, _ = call(capsys, "ldp", "report", "--n", "3", "--x", "1", "--N", "10,100")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert tuple(rows[0].keys()) == ReportRow.CSV_HEADER
    assert {r["model"] for r in rows} == {"composition", "true_length"}


def test_byte_identical_outputs(tmp_path):
    outputs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        code = cli.run(
            ["walk", "--group", '{"family": "cyclic", "m": 6}', "--steps", "30", "--trials", "3000",
             "--seed", "77", "--output", str(path), "--threads", "2"]
        )
        assert code == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]
    again = tmp_path / "c.csv"
    cli.run(["walk", "--group", '{"family": "cyclic", "m": 6}', "--steps", "30", "--trials", "3000",
             "--seed", "77", "--output", str(again)])
    assert again.read_bytes() == outputs[0]


def test_graph_dump(capsys):
    code, out, _ = call(capsys, "graph", "--group", '{"family": "cyclic", "m": 4}')
    assert code == 0 and "# distances" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cayleywalk", "limits", "coxeter", "--type", "B3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "9/2"
