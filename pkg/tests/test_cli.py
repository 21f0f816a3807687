from __future__ import annotations

import json

import pytest

from sl2sheaf.cli import main, parse_xi
from sl2sheaf.fieldcore import gf


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


@pytest.mark.parametrize(
    "argv,expected",
    [
        (("jtype", "--p", "5", "--family", "weyl", "--lambda", "2"), "constant [3]"),
        (("jtype", "--p", "5", "--family", "phi", "--lambda", "7", "--xi", "1,1"),
         "generic [5]; exceptional [1:1] -> [3][2]"),
        (("kernel", "--p", "5", "--family", "dual-weyl", "--lambda", "7"), "O(-2)^2"),
        (("kernel", "--p", "5", "--family", "weyl", "--lambda", "7"), "O(-1) + O(-7)"),
        (("fi", "--p", "5", "--family", "weyl", "--lambda", "7", "--i", "3"), "O(-7)"),
        (("heller", "--p", "5", "--lambda", "4"), "0 (projective)"),
        (("heller", "--p", "5", "--lambda", "2"), "V(6)"),
    ],
)
def test_text_outputs(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == expected


def test_usage_errors(capsys):
    assert run(capsys, "jtype", "--p", "2", "--lambda", "1")[0] == 2
    assert run(capsys, "verify-all", "--p", "2")[0] == 2
    assert run(capsys, "jtype", "--p", "5", "--family", "phi", "--lambda", "7")[0] == 2
    assert run(capsys, "jtype", "--p", "5", "--family", "phi", "--lambda", "9", "--xi", "1,0")[0] == 2
    assert run(capsys, "fi", "--p", "5", "--lambda", "3", "--i", "9")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["jtype"])
    assert info.value.code == 2


def test_incomplete_kernel_exit_code(capsys):
    code, _, err = run(capsys, "kernel", "--p", "5", "--lambda", "7", "--max-degree", "2")
    assert code == 1 and "max-degree" in err


def test_json_and_csv(capsys):
    code, out, _ = run(capsys, "kernel", "--p", "5", "--family", "dual-weyl", "--lambda", "7", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["splitting"] == [-2, -2] and data["certified"]
    code, out, _ = run(capsys, "jtype", "--p", "3", "--family", "phi", "--lambda", "4", "--xi", "0,1", "--format", "csv")
    assert out.splitlines() == ["point,type", "generic,[3]", "[0:1],[2][1]"]


def test_extension_point():
    pt = parse_xi("ext:2:0,1", 5)
    assert pt.field == gf(5, 2)
    assert pt.t == gf(5, 2).gen


def test_verify_all_deterministic(capsys):
    argv = ("verify-all", "--p", "3", "--lambda-max", "5", "--format", "json")
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["status"] == "pass"


def test_verify_all_parallel_matches_serial(capsys):
    base = ("verify-all", "--p", "3", "--lambda-max", "4", "--format", "csv")
    _, serial, _ = run(capsys, *base)
    _, parallel, _ = run(capsys, *base, "--jobs", "2")
    assert serial == parallel
