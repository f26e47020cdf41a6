import json
import subprocess
import sys

import pytest

from bcpadic.basechange import label_key
from bcpadic.cli import EXIT_NONCONVERGENCE, EXIT_OK, EXIT_PRECISION, EXIT_PRECONDITION, main

SMALL = ["--M", "12", "--N", "8"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_lp_output_is_sorted_and_carries_precision(capsys):
    code, out, _ = run(capsys, "lp", "--form", "11a", "--p", "5", *SMALL)
    assert code == EXIT_OK
    data = json.loads(out)
    labels = [v["character"] for v in data["values"]]
    assert labels == sorted(labels, key=label_key)
    assert len(labels) == 3 + 16  # primitive characters of conductor 5 and 25
    for v in data["values"]:
        assert v["oracle_agrees"]
        assert v["precision"] >= 1
        assert all(c["precision"] == v["precision"] for c in v["value"]["coeffs"])
    for d in data["discs"]:
        assert all("precision" in c for m in d["moments"] for c in m["coeffs"])
    assert out == json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def test_reruns_are_byte_identical(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"run{i}.json"
        subprocess.run([sys.executable, "-m", "bcpadic.cli", "factor-check", "--form", "11a", "--p", "5",
                        "--disc", "4", "--chars", "5,25.1,25.3", *SMALL, "--out", str(path)], check=True)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    report = json.loads(outs[0])["report"]
    assert report["constant_ratio"]


def test_p_equal_two_is_a_clean_precondition_error(capsys):
    code, out, err = run(capsys, "lp", "--form", "11a", "--p", "2")
    assert code == EXIT_PRECONDITION
    assert out == ""
    msg = json.loads(err)
    assert msg["exit_code"] == 2 and "p = 2" in msg["error"]


@pytest.mark.parametrize("argv", [
    ["lp", "--form", "11a", "--p", "11"],          # p divides the level
    ["lp", "--form", "nope", "--p", "5"],          # no data
    ["lp", "--p", "5"],                            # missing form
    ["lp", "--form", "11a", "--p", "9"],           # not prime
    ["lp", "--form", "11a", "--p", "5", "--chars", "7"],  # conductor not a power of p
    ["bc", "lp-cyc", "--form", "11a", "--p", "5", "--disc", "5"],  # not a supported field
])
def test_preconditions_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_PRECONDITION
    assert json.loads(err)["exit_code"] == EXIT_PRECONDITION


def test_empty_battery_succeeds(capsys):
    code, out, _ = run(capsys, "factor-check", "--form", "11a", "--p", "5", "--disc", "4", "--chars", ",", *SMALL)
    assert code == EXIT_OK
    rep = json.loads(out)["report"]
    assert rep["rows"] == [] and rep["nonzero_rows"] == 0


def test_exit_codes_for_budget_and_convergence(capsys, monkeypatch):
    from bcpadic import cli
    from bcpadic.overconvergent import NonConvergence
    from bcpadic.padic import PrecisionError

    def boom(exc):
        def f(args):
            with cli.stage("lift"):
                raise exc
        return f

    monkeypatch.setitem(cli.COMMANDS, ("lp", None), boom(PrecisionError("budget")))
    assert run(capsys, "lp", "--form", "11a", "--p", "5")[0] == EXIT_PRECISION
    monkeypatch.setitem(cli.COMMANDS, ("lp", None), boom(NonConvergence("stuck")))
    code, _, err = run(capsys, "lp", "--form", "11a", "--p", "5")
    assert code == EXIT_NONCONVERGENCE
    assert json.loads(err)["stage"] == "lift"


def test_bc_transfer(capsys):
    code, out, _ = run(capsys, "bc", "transfer", "--form", "17a", "--disc", "4")
    rows = json.loads(out)["transfer"]
    assert code == 0
    row3 = next(r for r in rows if r["p"] == 3)
    assert row3["splitting"] == "inert" and row3["critical"] and row3["slopes_over_K"] == ["1"]


def test_bc_lp_cyc(capsys):
    code, out, _ = run(capsys, "bc", "lp-cyc", "--form", "11a", "--p", "5", "--disc", "4", "--chars", "5", *SMALL)
    data = json.loads(out)
    assert code == 0
    assert [a["h"] for a in data["admissibility"]] == ["0"]
    assert data["admissibility"][0]["admissible"]


def test_gauss_single_prime(capsys):
    code, out, _ = run(capsys, "gauss", "--p", "3", "--disc", "4")
    data = json.loads(out)
    assert code == 0
    assert all(r["holds"] for r in data["norm_identity"])
    assert all(r["holds"]["sqrt(-d)"] for r in data["hasse_davenport"])
    assert all(r["holds"] for r in data["constant_matching"])


def test_lp_family_block(capsys):
    code, out, _ = run(capsys, "lp", "--form", "11a", "--p", "5", "--M", "8", "--N", "6", "--Mw", "3", "--chars", "5")
    fam = json.loads(out)["family"]
    assert code == 0 and fam["Mw"] == 3
    for d in fam["discs"]:
        for mom in d["moments"]:
            assert len(mom) == 3 and all("precision" in c for c in mom)
