import json

import pytest

from gaussmeans.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_w_json(capsys):
    code, out, _ = run(capsys, "compute-w", "--g", "2", "--s", "1")
    assert code == 0
    terms = json.loads(out)["terms"]
    assert {(tuple(t["white"]), t["coeff"]) for t in terms} == {((5,), "105"), ((4,), "21")}


def test_compute_w_csv_and_text(capsys):
    _, csv_out, _ = run(capsys, "compute-w", "--g", "1", "--s", "1", "--format", "csv")
    assert csv_out.splitlines()[0] == "white,grey,coeff"
    _, text, _ = run(capsys, "compute-w", "--g", "1", "--s", "1", "--format", "text")
    assert "white=[2]" in text


def test_hz_table_csv(capsys):
    code, out, _ = run(capsys, "hz-table", "--gmax", "2")
    assert code == 0
    assert out.splitlines() == ["g,k,b", "1,0,1", "2,0,21", "2,1,105"]


def test_kappa_table(capsys):
    code, out, _ = run(capsys, "kappa-table", "--gmax", "1", "--format", "json")
    assert code == 0
    assert json.loads(out)["1"][0] == "1/24"


def test_volumes_table(capsys):
    code, out, _ = run(capsys, "volumes", "--g", "1", "--s", "1", "--pmax", "4")
    assert code == 0
    assert out.splitlines()[-1] == "1,1,4,1,4"
    _, text, _ = run(capsys, "volumes", "--g", "0", "--s", "3", "--pmax", "1", "--format", "text")
    assert "N(1,1,0) = 1" in text


def test_moments(capsys):
    code, out, _ = run(capsys, "moments", "--k", "4")
    assert code == 0
    assert json.loads(out) == {"0": 2, "1": 1}
    _, out, _ = run(capsys, "moments", "--k", "3,3", "--format", "csv")
    assert out.splitlines() == ["genus,count", "0,12", "1,3"]


def test_census(capsys):
    code, out, _ = run(capsys, "census", "--g", "1", "--s", "1")
    assert code == 0
    assert [g["aut"] for g in json.loads(out)] == [4, 6]
    _, text, _ = run(capsys, "census", "--g", "0", "--s", "3", "--format", "text")
    assert text == "3 shapes of genus 0 with 3 faces\n"


@pytest.mark.parametrize("argv", [
    ["compute-w", "--g", "0", "--s", "2"],
    ["compute-w", "--g", "3", "--s", "2"],
    ["hz-table", "--gmax", "41"],
    ["moments", "--k", "3"],
    ["moments", "--k", "x"],
    ["moments", "--k", "20"],
    ["census", "--g", "2", "--s", "2"],
    ["verify", "--bogus"],
    ["hz-table", "--gmax", "2", "--format", "xml"],
    ["frobnicate"],
])
def test_usage_errors_exit_two(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_budget_override(capsys):
    code, out, _ = run(capsys, "hz-table", "--gmax", "41", "--budget", "41", "--format", "text")
    assert code == 0
    assert out.splitlines()[-1].startswith("41: ")


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "hz")
    assert code == 0
    assert all(line.startswith("PASS") for line in out.splitlines()[:-1])
    assert out.splitlines()[-1] == "6/6 checks passed"


def test_verify_failure_exit_one(capsys, monkeypatch):
    from gaussmeans import verify

    monkeypatch.setitem(verify.SUITES, "hz", [verify.Check("always fails", lambda: False)])
    code, out, _ = run(capsys, "verify", "--suite", "hz", "--format", "json")
    assert code == 1
    assert json.loads(out) == {"passed": False, "checks": [{"name": "hz: always fails", "passed": False}]}


def test_out_writes_file_atomically(tmp_path, capsys):
    target = tmp_path / "table.csv"
    target.write_text("old")
    code, out, _ = run(capsys, "hz-table", "--gmax", "2", "--out", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text().splitlines()[-1] == "2,1,105"
    assert [p.name for p in tmp_path.iterdir()] == ["table.csv"]


def test_output_is_deterministic(capsys):
    _, first, _ = run(capsys, "compute-w", "--g", "0", "--s", "4")
    _, second, _ = run(capsys, "compute-w", "--g", "0", "--s", "4")
    assert first == second
