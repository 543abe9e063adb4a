import json
import shutil

import pytest

from e8good.cli import main
from e8good.comptables import Cyc
from e8good.signsolver import _parse_value, find_case, build_case_table


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def jrun(capsys, *argv):
    code, out = run(capsys, "--format", "json", *argv)
    return code, [json.loads(line) for line in out.splitlines() if line.strip()]


def test_roots(capsys):
    code, out = run(capsys, "roots", "E8")
    assert code == 0 and "240 roots (120 positive)" in out
    code, objs = jrun(capsys, "roots", "A2", "--list")
    assert objs[0]["positive"] == [[1, 0], [0, 1], [1, 1]]


def test_weyl(capsys):
    code, objs = jrun(capsys, "weyl", "reduce", "1", "1", "2")
    assert code == 0 and objs[0]["length"] == 1
    code, objs = jrun(capsys, "weyl", "classify", "1,3,4,2,5,6,7,8")
    assert objs[0]["min_length"] == 8 and objs[0]["lusztig"]["2"] == "E8"


def test_lusztig_and_hooks(capsys):
    code, objs = jrun(capsys, "lusztig-map", "E8", "--p", "2")
    assert code == 0 and objs[0]["unipotent"] == "E8"
    code, objs = jrun(capsys, "hooks", "1423435678", "E8(a1)", "--p", "2")
    assert code == 0 and objs[0]["hooks"]
    code, _ = run(capsys, "hooks", "1423435678", "E8", "--p", "2")
    assert code == 1


def test_solve_2a4(capsys):
    code, objs = jrun(capsys, "solve", "2A4", "--p", "7")
    rep = objs[0]
    assert code == 0 and rep["unique"] and rep["verdict"] == "UNIQUE_GOOD"
    assert rep["prefactor"] == "q^40"
    assert all(v == "1" for v in rep["solutions"][0].values())
    assert [a for a, v in rep["row_values"][0].items() if v != "0"] == ["(11111)"]
    assert rep["row_values"][0]["(11111)"] == "120"
    code, out = run(capsys, "solve", "2A4", "--p", "7")
    assert "120*q^40" in out


def test_json_report_revalidates(capsys):
    """Solutions printed as JSON parse back and satisfy the constraints again."""
    for cls, p in [("E7(a2)+A1", "2"), ("E8", "3"), ("D8(a1)", "2")]:
        _, objs = jrun(capsys, "solve", cls, "--p", p)
        rec, bucket = find_case(cls, p)
        t = build_case_table(rec, cls, bucket)
        for sol, rows in zip(objs[0]["solutions"], objs[0]["row_values"]):
            values = {k: _parse_value(v) for k, v in sol.items()}
            for a, form in t.rows:
                assert str(form.evaluate(values)) == rows[a]


def test_verify_cert_single(capsys):
    code, objs = jrun(capsys, "verify-cert", "certs/table6.dat", "--only", "z_85")
    assert code == 0
    assert [o["GOOD"] for o in objs] == [True]
    assert all(objs[0][k] for k in ("CONJ", "REDUCED", "HOOKS", "GOOD"))


def test_verify_cert_reports_open_rows(capsys):
    code, objs = jrun(capsys, "verify-cert", "certs/table6.dat", "--only", "z_39")
    assert code == 0 and objs == [{"name": "z_39", "class": "E7(a1)+A1", "status": "UNPROVEN",
                                   "note": objs[0]["note"]}]


def test_verify_cert_failure_exit(capsys, tmp_path):
    bad = tmp_path / "bad.dat"
    bad.write_text("kind: cert\nclass: E8\nname: z_1\nword: u(1) u(3) u(4) u(2) u(5) u(6) u(7) u(8)\n"
                   "target: 1 3 4 2 5 6 8 7\np: 2\n")
    code, _ = run(capsys, "verify-cert", str(bad))
    assert code == 1


def test_solve_all_p2(capsys):
    code, objs = jrun(capsys, "solve-all", "--p", "2")
    assert code == 0
    summary = objs[-1]
    assert summary["match"] and summary["exceptions"] == ["D8(a3) (q = -1 mod 3)"]
    non_unique = [o["class"] for o in objs[:-1] if o["verdict"] != "UNIQUE_GOOD"]
    assert non_unique == ["D8(a3)"]


def test_deterministic_output(capsys):
    a = run(capsys, "--format", "json", "solve-all", "--p", "3")
    b = run(capsys, "--format", "json", "solve-all", "--p", "3")
    assert a == b


def test_search_good(capsys):
    code, objs = jrun(capsys, "search-good", "z_1", "--class", "E8", "--budget", "100")
    assert code == 0 and objs[0]["target"] == [1, 3, 4, 2, 5, 6, 7, 8]
    code, _ = run(capsys, "search-good", "z_17", "--class", "E8(a2)", "--budget", "3")
    assert code == 1


def test_ree_check(capsys):
    code, objs = jrun(capsys, "ree-check", "--type", "A1", "--q", "3")
    assert code == 0 and objs[-1]["all_equal"] and objs[-1]["order"] == 24


def test_usage_errors(capsys):
    assert main(["bogus"]) == 2
    assert main([]) == 2
    assert main(["verify-cert", "nothere.dat"]) == 2
    assert main(["solve", "nothere", "--p", "7"]) == 2
    assert main(["ree-check", "--type", "A2", "--q", "3"]) == 2
    assert main(["search-good", "z_1", "--class", "E8", "--budget", "0"]) == 2
    capsys.readouterr()


def test_data_override(capsys, monkeypatch, tmp_path):
    from e8good.weyl import data_dir
    copy = tmp_path / "d"
    shutil.copytree(data_dir(), copy)
    (copy / "certs" / "table6.dat").write_text("kind: lookup\nclass: A2\nname: z_190\np: 2\n")
    monkeypatch.setenv("E8GOOD_DATA", str(copy))
    code, objs = jrun(capsys, "verify-cert", "certs/table6.dat")
    assert code == 0 and [o["status"] for o in objs] == ["LOOKUP"]


def test_version(capsys):
    assert main(["--version"]) == 0
    capsys.readouterr()
