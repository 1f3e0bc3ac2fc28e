import json
import subprocess
import sys

import pytest

from tnnfibers.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_demazure_text(capsys):
    assert run(capsys, "demazure", "--type", "A3", "--word", "1,2,1,2") == (0, "s1s2s1 (length 3)\n", "")


def test_strata_poset_json(capsys):
    code, out, _ = run(capsys, "strata-poset", "--type", "A3", "--word", "1,3,2,1,3,2", "--w", "1,3,2")
    data = json.loads(out)
    assert code == 0 and len(data["elements"]) == 11 and data["pure"] is False
    assert data["maximalDims"] == [1, 2]


def test_w_is_ordinary_product(capsys):
    # 1,1 multiplies to e, so the target is the identity, not s1
    code, out, _ = run(capsys, "strata-poset", "--type", "A1", "--word", "1,1", "--w", "1,1")
    assert code == 0 and json.loads(out)["elements"] == [[]]


def test_other_commands(capsys):
    code, out, _ = run(capsys, "group", "--type", "I2:5")
    assert code == 0 and "order 10" in out
    code, out, _ = run(capsys, "braid-path", "--word", "1,2,1", "--to", "2,1,2", "--format", "json")
    assert json.loads(out)["moves"] == [{"pos": 1, "kind": "long"}]
    code, out, _ = run(capsys, "homology", "--word", "1,2,1,2", "--w", "1,2,1")
    assert code == 0 and json.loads(out)["subwordComplex"] == {"-1": [0], "0": [1]}
    code, out, _ = run(capsys, "subword-complex", "--word", "1,2,1", "--w", "1,2,1")
    assert code == 0 and json.loads(out)["facets"] == [[]]
    code, out, _ = run(capsys, "fiber-probe", "--word", "1,2,1,2", "--params", "1,1/2,2,1/3")
    data = json.loads(out)
    assert code == 0 and data["posetIsomorphicToCombinatorial"] and len(data["strata"]) == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["demazure", "--word", "1,x"],
        ["demazure", "--word", "4"],
        ["demazure"],
        ["group", "--type", "Z9"],
        ["subword-complex", "--word", "1,1", "--w", "2"],
        ["fiber-probe", "--type", "B3", "--word", "1", "--params", "1"],
        ["fiber-probe", "--word", "1,2", "--params", "1"],
        ["fiber-probe", "--word", "1,2", "--params", "1,0"],
        ["braid-path", "--word", "1,2", "--to", "2,1"],
        ["sweep", "--max-len", "-1"],
        ["nonsense"],
    ],
)
def test_bad_input_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""


def test_sweep_jobs_byte_identical():
    outs = []
    for jobs in ("1", "2"):
        proc = subprocess.run(
            [sys.executable, "-m", "tnnfibers.cli", "sweep", "--type", "A3", "--max-len", "4", "--jobs", jobs],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        outs.append(proc.stdout)
    assert outs[0] == outs[1] and "failures: 0" in outs[0]


def test_verification_failure_exit_1(capsys, monkeypatch):
    import tnnfibers.cli as cli
    from tnnfibers.homology import HomologyReport

    monkeypatch.setattr(cli, "reduced_homology", lambda cx: HomologyReport({0: (1, ())}))
    code, _, err = run(capsys, "homology", "--word", "1,1", "--w", "1")
    assert code == 1 and "verification failed" in err
