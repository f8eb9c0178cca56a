import csv
import io
import json

import pytest

from taulab import cli
from taulab.factor import DEFAULT_BUDGET
from taulab.report import Report
from taulab.tau import build_tau_table, load_table


def invoke(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tau_csv(capsys):
    code, out, _ = invoke(capsys, "tau", "--max", "100", "--format", "csv")
    assert code == 0
    lines = out.split("\n")
    assert lines[:3] == ["n,tau", "1,1", "2,-24"]
    assert len(lines) == 102 and lines[-1] == ""
    assert "\r" not in out


def test_sunit_p3(capsys):
    code, out, _ = invoke(capsys, "sunit", "-p", "3")
    doc = json.loads(out)
    assert code == 0
    assert (doc["D"], doc["E"], doc["F"]) == (392, -1403, -1795)
    assert all(doc["checks"].values())


def test_sunit_rejects_composite(capsys):
    code, _, err = invoke(capsys, "sunit", "-p", "4")
    assert code == 2 and "not prime" in err


def test_verify_all_1000(capsys):
    code, out, _ = invoke(capsys, "verify", "all", "--bound", "1000")
    assert code == 0
    assert json.loads(out)["summary"]["violations"] == 0


def test_verify_exit_1_on_corrupt_cache(capsys, tmp_path):
    path = tmp_path / "tau.txt"
    cli.save_table(build_tau_table(50), path)
    lines = path.read_text().split("\n")
    lines[6] = "6\t-6047"  # tau(6) is -6048
    path.write_text("\n".join(lines))
    code, out, _ = invoke(capsys, "verify", "table", "--bound", "50", "--cache", str(path))
    assert code == 1
    assert json.loads(out)["summary"]["violations"] > 0


@pytest.mark.parametrize(
    "argv",
    [[], ["tau"], ["nope"], ["tau", "--max", "0"], ["report", "thm99", "--bound", "5"], ["factor", "0"]],
)
def test_usage_errors_exit_2(capsys, argv):
    assert invoke(capsys, *argv)[0] == 2


def test_bad_cache_exits_3(capsys, tmp_path):
    path = tmp_path / "tau.txt"
    path.write_text("garbage\n")
    code, _, err = invoke(capsys, "tau", "--max", "5", "--cache", str(path))
    assert code == 3 and "CacheFormatError" in err


def test_budget_precedence(monkeypatch):
    monkeypatch.delenv(cli.BUDGET_ENV, raising=False)
    assert cli._budget(None) == DEFAULT_BUDGET
    monkeypatch.setenv(cli.BUDGET_ENV, "1234")
    assert cli._budget(None) == 1234
    assert cli._budget(99) == 99
    monkeypatch.setenv(cli.BUDGET_ENV, "lots")
    with pytest.raises(cli.UsageError):
        cli._budget(None)
    with pytest.raises(cli.UsageError):
        cli._budget(0)


def test_budget_flag_reaches_factor(capsys, monkeypatch):
    n = str((10**9 + 7) * (10**9 + 9))
    monkeypatch.setenv(cli.BUDGET_ENV, "1000")
    code, out, _ = invoke(capsys, "factor", n)
    assert code == 0 and json.loads(out)["complete"] is False
    code, out, _ = invoke(capsys, "factor", n, "--budget", str(10**7))
    doc = json.loads(out)
    assert doc["complete"] is True
    assert doc["factors"] == [[10**9 + 7, 1], [10**9 + 9, 1]]


def test_json_big_ints_are_strings():
    rep = Report("x", {}, [{"a": 2**63 - 1, "b": 2**63, "c": -(2**63) - 1, "d": True}])
    row = json.loads(cli.report_to_json(rep))["rows"][0]
    assert row == {"a": 2**63 - 1, "b": str(2**63), "c": str(-(2**63) - 1), "d": True}


def test_csv_cells():
    rep = Report("x", {}, [{"a": None, "b": False, "c": [1, 2], "d": -5}])
    rows = list(csv.reader(io.StringIO(cli.report_to_csv(rep))))
    assert rows == [["a", "b", "c", "d"], ["", "false", "1;2", "-5"]]


def test_tau_at(capsys):
    code, out, _ = invoke(capsys, "tau-at", str(2**10 * 3))
    table = build_tau_table(3072)
    assert code == 0 and int(json.loads(out)["tau"]) == table[3072]


def test_search_factorial_modes(capsys):
    _, out, _ = invoke(capsys, "search-factorial", "--max", "8")
    doc = json.loads(out)
    assert doc["summary"]["matches"] == [[1, 1]]
    assert doc["summary"]["unsigned"] == [[1, 1], [2, 4]]
    _, out, _ = invoke(capsys, "search-factorial", "--max", "8", "--unsigned")
    assert json.loads(out)["summary"]["matches"] == [[1, 1], [2, 4]]


def test_report_thm22_and_zeros(capsys):
    _, out, _ = invoke(capsys, "report", "thm22", "--bound", "27000", "--jobs", "1")
    assert json.loads(out)["summary"]["s"] == 45
    _, out, _ = invoke(capsys, "report", "zeros", "--bound", "1000")
    assert json.loads(out)["summary"]["zero_count"] == 0


def test_lucas_and_cyclo(capsys):
    code, out, _ = invoke(capsys, "lucas", "--max", "10", "--format", "csv")
    assert code == 0 and out.startswith("r,")
    code, out, _ = invoke(capsys, "cyclo", "--max", "12")
    assert code == 0 and json.loads(out)["rows"][1]["B_n"] == 23


def test_cache_round_trip_is_bit_exact(capsys, tmp_path):
    first, second = tmp_path / "a.txt", tmp_path / "b.txt"
    invoke(capsys, "tau", "--max", "500", "--cache", str(first))
    invoke(capsys, "tau", "--max", "500", "--cache", str(second))
    assert first.read_bytes() == second.read_bytes()
    assert load_table(first) == build_tau_table(500)
    # A smaller request is served from the larger cache without rewriting it.
    before = first.read_bytes()
    code, out, _ = invoke(capsys, "tau", "--max", "20", "--cache", str(first), "--format", "csv")
    assert code == 0 and out.count("\n") == 21
    assert first.read_bytes() == before


def test_out_file_matches_stdout(capsys, tmp_path):
    target = tmp_path / "r.json"
    _, out, _ = invoke(capsys, "report", "thm21", "--bound", "100", "--jobs", "1")
    assert invoke(capsys, "report", "thm21", "--bound", "100", "--jobs", "1", "--out", str(target))[1] == ""
    assert target.read_text() == out
    assert invoke(capsys, "report", "thm21", "--bound", "100", "--jobs", "2")[1] == out
