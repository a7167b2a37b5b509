import json

import pytest

from nhcurv import cli
from nhcurv.prolong import ProlongError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    assert "vle(4|3)" in out
    assert "ck(9|11)" in out and "catalog stub" in out


def test_prolong_dims(capsys):
    code, out, _ = run(capsys, "prolong", "--algebra", "vect(2|0)", "--max-degree", "3")
    assert code == 0
    assert [line.split()[1] for line in out.splitlines()] == ["(2|0)", "(4|0)", "(6|0)", "(8|0)", "(10|0)"]


def test_prolong_cache_is_reused(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    first = run(capsys, "prolong", "--algebra", "vle(4|3)", "--max-degree", "0")
    files = sorted(p.name for p in tmp_path.iterdir())
    second = run(capsys, "prolong", "--algebra", "vle(4|3)", "--max-degree", "0")
    assert files and first == second
    assert first[1].splitlines()[0].split()[1] == "(4|3)"


def test_cohomology_json_roundtrip(capsys):
    code, out, _ = run(capsys, "cohomology", "--algebra", "vle(4|3)", "--i", "2", "--degrees", "1..1",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 1
    rep = data[0]
    assert (rep["algebra"], rep["i"], rep["degree"], rep["dim_even"], rep["dim_odd"]) == ("vle(4|3)", 2, 1, 24, 24)
    assert {"weight", "dim_even", "dim_odd", "mult_closed", "mult_exact", "highest", "representative"} \
        == set(rep["blocks"][0])
    assert sum(1 for b in rep["blocks"] if b["highest"]) == 6
    assert json.dumps(data, indent=2, ensure_ascii=False) + "\n" == out


def test_cohomology_csv(capsys):
    code, out, _ = run(capsys, "cohomology", "--algebra", "vle(4|3)", "--degrees", "1", "--format", "csv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].startswith("algebra,i,degree,weight")
    assert len(lines) == 1 + 34


def test_contact_k5_zero(capsys):
    code, out, _ = run(capsys, "cohomology", "--algebra", "k(5)", "--i", "2", "--degrees", "0..3")
    assert code == 0
    heads = [line for line in out.splitlines() if "H^2" in line]
    assert len(heads) == 4 and all(h.endswith("dim (0|0)") for h in heads)
    assert "total over listed degrees: (0|0)" in out


def test_engel_reports_a_total(capsys):
    code, out, _ = run(capsys, "cohomology", "--algebra", "engel")
    assert code == 0
    # degrees 2 - d = -1 up to the depth-3 default 1
    assert len([line for line in out.splitlines() if "H^2" in line]) == 3
    assert "total over listed degrees:" in out


def test_output_independent_of_threads(capsys):
    args = ["cohomology", "--algebra", "kas(;3eta)", "--degrees", "1..2"]
    a = run(capsys, *args, "--threads", "1")
    b = run(capsys, *args, "--threads", "3")
    assert a[0] == 0 and a[1] == b[1]


@pytest.mark.parametrize("argv", [
    ["cohomology", "--algebra", "nonsense"],
    ["cohomology", "--algebra", "vle(4|3)", "--degrees", "3..1"],
    ["cohomology", "--algebra", "vle(4|3)", "--degrees", "x"],
    ["cohomology", "--algebra", "vle(4|3)", "--i", "3"],
    ["cohomology", "--algebra", "vle(4|3)", "--degrees", "3", "--dmax", "0"],
    ["cohomology", "--algebra", "vle(4|3)", "--threads", "0"],
    ["prolong", "--algebra", "vle(4|3)", "--max-degree", "-1"],
    ["cohomology"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_stub_is_reported(capsys):
    code, out, err = run(capsys, "cohomology", "--algebra", "ck(9|11)")
    assert code == 2 and out == ""
    assert "catalog stub" in err
    code, _, err = run(capsys, "prolong", "--algebra", "ck(9|11)", "--max-degree", "0")
    assert code == 2 and "catalog stub" in err


def test_internal_errors_exit_3(capsys, monkeypatch):
    def broken(*a, **k):
        raise ProlongError("bracket does not close")

    monkeypatch.setattr(cli, "prolonged", broken)
    code, _, err = run(capsys, "prolong", "--algebra", "vect(2|0)", "--max-degree", "1")
    assert code == 3 and "bracket does not close" in err


GOOD = """
version: 1
entries:
  - algebra: "vle(4|3)"
    location: "test entry"
    i: 2
    degrees:
      - degree: 1
        dims: [24, 24]
        rows:
          - {n: "1", weight: [2, 0, 0], dims: [6, 0], mult: [3, 2]}
          - {n: "2", weight: [1, 0, 0], dims: [0, 3], mult: [5, 4]}
          - {n: "3", weight: [2, 0, -1], dims: [0, 15], mult: [2, 1]}
          - {n: "4", weight: [1, 0, -1], dims: [8, 0], mult: [3, 2]}
          - {n: "5", weight: [2, -1, -1], dims: [10, 0], mult: [1, 0]}
          - {n: "6", weight: [1, -1, -1], dims: [0, 6], mult: [1, 0]}
"""


def fixture(tmp_path, text):
    p = tmp_path / "fx.yaml"
    p.write_text(text)
    return str(p)


def test_verify_custom_fixture_passes(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--fixtures", fixture(tmp_path, GOOD))
    assert code == 0
    assert out.count("PASS") == 7
    assert "summary: 7 pass, 0 fail" in out


def test_verify_wrong_dim_fails_with_diff(capsys, tmp_path):
    bad = GOOD.replace("dims: [24, 24]", "dims: [24, 25]").replace("dims: [6, 0]", "dims: [7, 0]")
    code, out, _ = run(capsys, "verify", "--fixtures", fixture(tmp_path, bad))
    assert code == 1
    fails = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert len(fails) == 2
    assert all("expected" in f and "computed" in f for f in fails)
    assert any("(24|25)" in f and "(24|24)" in f for f in fails)


def test_verify_disputed_cell_does_not_fail(capsys, tmp_path):
    text = GOOD.replace('{n: "1", weight: [2, 0, 0], dims: [6, 0], mult: [3, 2]}',
                        '{n: "1", weight: [2, 0, 0], dims: [6, 0], mult: [3, 1], disputed: {mult: "test"}}')
    code, out, _ = run(capsys, "verify", "--fixtures", fixture(tmp_path, text))
    assert code == 0
    assert "DISPUTED" in out and "FAIL" not in out.replace("0 fail", "")


@pytest.mark.parametrize("text", [
    "version: 1\nentries:\n  - algebra: 'vle(4|3)'\n    i: 2\n    degrees: [{degree: 1}]\n",
    "version: 7\nentries: []\n",
    "entries: [",
    "version: 1\nentries:\n  - algebra: 'nonsense'\n    location: x\n    i: 2\n    zero_degrees: [1]\n",
])
def test_verify_malformed_fixture_exit_2(capsys, tmp_path, text):
    code, _, err = run(capsys, "verify", "--fixtures", fixture(tmp_path, text))
    assert code == 2 and err


def test_verify_missing_file_exit_2(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", "--fixtures", str(tmp_path / "absent.yaml"))
    assert code == 2


def test_verify_stub_entry(capsys, tmp_path):
    text = "version: 1\nentries:\n  - algebra: 'ck(9|11)'\n    location: 'list entry'\n    i: 2\n    stub: true\n"
    code, out, _ = run(capsys, "verify", "--fixtures", fixture(tmp_path, text), "--scope", "all")
    assert code == 0
    assert out.startswith("STUB") and "catalog stub" in out


def test_verify_builtin_small_scope(capsys):
    code, out, _ = run(capsys, "verify", "--scope", "small")
    lines = out.splitlines()
    assert code == 0
    assert not [line for line in lines if line.startswith("FAIL")]
    assert any(line.startswith("PASS") and "vle(4|3)" in line for line in lines)
    assert lines[-1].startswith("summary:")
