import json

import pytest

from basscensus import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_pass_and_fail(capsys):
    code, out, _ = run(capsys, "verify", "--case", "3,6", "--p", "2", "--expect", "8")
    assert code == 0 and out.startswith("PASS")
    code, out, _ = run(capsys, "verify", "--case", "3,6", "--p", "2", "--expect", "7")
    assert code == 1 and out.startswith("FAIL")


def test_json_schema_and_order(capsys):
    code, out, _ = run(capsys, "--format", "json", "count", "(2,6)", "--p", "3")
    doc = json.loads(out)
    assert code == 0
    assert list(doc)[:2] == ["schema_version", "command"]
    assert doc["schema_version"] == "1"
    assert doc["result"]["value"] == 3
    # deterministic output
    _, again, _ = run(capsys, "--format", "json", "count", "(2,6)", "--p", "3")
    assert again == out


def test_table_markdown(capsys):
    code, out, _ = run(capsys, "table", "--p", "2")
    assert code == 0
    assert "| 2 | 3* | 2 | 2* | 1 | 3 | 3 | 2* | 2 | 4* | 2 | 8 | 49 |" in out


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", "--format", "json")
    rows = json.loads(out)["rows"]
    assert [r["total"] for r in rows] == [49, 45, 47]


def test_units_and_hilbert(capsys):
    code, out, _ = run(capsys, "units", "--p", "2", "--format", "json")
    doc = json.loads(out)
    assert doc["units"]["global_units"] == 24 and doc["gamma_double_cosets"] == 1
    code, out, _ = run(capsys, "hilbert", "-1", "-3", "3")
    assert out.strip() == "(-1, -3)_3 = -1"


@pytest.mark.parametrize("argv", [["count", "3"], ["count", "3", "--p", "7"],
                                  ["count", "1,2,3", "--p", "2"], ["nonsense"],
                                  ["--precision", "1", "count", "3", "--p", "2"]])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_runtime_usage_error(capsys):
    code, _, err = run(capsys, "count", "7", "--p", "2")
    assert code == 2 and "phi(7)" in err
