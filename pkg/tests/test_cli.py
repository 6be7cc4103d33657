import json
import subprocess
import sys

import pytest

from modvar.cli import main, run
from modvar.io import dumps


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def family(values, space=None, names=("f",)):
    grid = [{"t": str(k), "class": "rational"} for k in range(len(values[0]))]
    return {"space": space or {"kind": "real"}, "grid": grid,
            "functions": dict(zip(names, values))}


def ok(argv):
    status, text = run(argv)
    assert status == 0, text
    return text


def test_nu_profile_csv(tmp_path):
    f = write(tmp_path, "f.json", family([[0.0, 1.0, 0.0, 1.0]]))
    g = write(tmp_path, "g.json", family([[0.0, 0.0, 0.0, 0.0]]))
    text = ok(["nu", "--f", f, "--g", g, "--n-max", "3", "--mode", "norm"])
    assert text.splitlines() == ["n,nu,nu_over_n,witness", "1,1,1,0-1", "2,2,1,0-1;1-2",
                                 "3,3,1,0-1;1-2;2-3"]
    doc = json.loads(ok(["nu", "--f", f, "--n-max", "2", "--format", "json"]))
    assert doc["nu"] == [1.0, 2.0] and doc["witnesses"][1] == [[0, 1], [1, 2]]


def test_named_functions_and_var(tmp_path):
    path = write(tmp_path, "fg.json", family([[0.0, 2.0, 1.0], [0.0, 1.0, 1.0]], names=("a", "b")))
    doc = json.loads(ok(["var", "--f", path, "--f-name", "a", "--g", path, "--g-name", "b"]))
    assert doc["jordan"] == 3.0 and doc["joint"] == 2.0 and doc["uniform_distance"] == 1.0
    status, text = run(["var", "--f", path, "--f-name", "zzz"])
    assert status == 1 and "zzz" in text


def test_validate(tmp_path):
    bad = write(tmp_path, "s.json", {"kind": "finite", "points": ["x", "y", "z"],
                                     "dist": [[0, 1, 3], [1, 0, 1], [3, 1, 0]]})
    doc = json.loads(ok(["validate", "--space", bad]))
    assert not doc["valid"] and doc["violations"][0]["axiom"] == "triangle"


def test_evar_and_kvar(tmp_path):
    f = write(tmp_path, "f.json", family([[0.0, 1.0, 0.0, 1.0]]))
    rows = ok(["evar", "--f", f, "--eps", "0.2,0.5"]).splitlines()
    assert rows[1].split(",")[1].startswith("1.8000000000")
    assert rows[2] == "0.5,0,taut-string"
    j = write(tmp_path, "f3.json", family([[0.0, 1.0, 1.0]]))
    doc = json.loads(ok(["kvar", "--f", j, "--kappa", '{"family": "power", "alpha": 0.5}',
                         "--bound-n-max", "1"]))
    assert doc["value"] == pytest.approx(1.0) and doc["partition"] == [0, 2]
    assert doc["bound"]["holds"]


def test_corpus_gen_piped_into_classify(tmp_path):
    out = tmp_path / "d.json"
    assert main(["corpus", "gen", "dirichlet", "--params", "m=21", "d=0.5", "--out", str(out)]) == 0
    doc = json.loads(ok(["classify", "--f", str(out), "--n-max", "10"]))
    assert doc["verdict"] == "not-equivalent"
    proc = subprocess.run(
        f"{sys.executable} -m modvar.cli corpus gen dirichlet | {sys.executable} -m modvar.cli classify --f -",
        shell=True, capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["verdict"] == "not-equivalent"


def test_select_experiment(tmp_path):
    grid = [{"t": "0", "class": "rational"}, {"t": "1/2", "class": "irrational"},
            {"t": "1", "class": "rational"}]
    r = [1 / (j + 3) if j < 6 else 0.0 for j in range(12)]
    exp = {"space": {"kind": "real"}, "grid": grid,
           "sequences": {"f": [[x, 1 - x, x] for x in r], "g": [[0.0, 1.0, 0.0]] * 12},
           "n_max": 2, "J0": 6, "delta": 1e-3}
    doc = json.loads(ok(["select", "--experiment", write(tmp_path, "exp.json", exp)]))
    assert doc["extraction"]["indices"] == list(range(6, 12))
    assert doc["extraction"]["limit"] == [0.0, 1.0, 0.0]
    assert doc["postcondition"]["holds"]
    status, text = run(["select", "--experiment", write(tmp_path, "e2.json", {"grid": grid})])
    assert status == 1 and "missing key" in text


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"space": {"kind": "real"},\n "grid": [}')
    status, text = run(["nu", "--f", str(bad)])
    assert status == 1
    assert json.loads(text)["message"].startswith(f"{bad}:2:")
    assert main(["corpus", "gen", "factorial-step", "--param", "j=9"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "refusal" and err["details"] == {"j": 9}
    with pytest.raises(SystemExit) as exc:
        main(["nu"])
    assert exc.value.code == 1
    status, _ = run(["nu", "--f", str(tmp_path / "missing.json")])
    assert status == 1
    big = write(tmp_path, "big.json", family([[0.0, 1.0]], {"kind": "euclidean", "dim": 2}))
    status, text = run(["evar", "--f", big, "--eps", "0.1"])
    assert status == 1  # coordinates do not match the declared dimension


def test_deterministic_output(tmp_path):
    f = write(tmp_path, "f.json", family([[0.1, 0.7, 0.3, 0.9, 0.2]]))
    a = ok(["classify", "--f", f, "--format", "csv"])
    b = ok(["classify", "--f", f, "--format", "csv"])
    assert a == b
    doc = ok(["nu", "--f", f, "--format", "json"])
    assert json.loads(doc) == json.loads(ok(["nu", "--f", f, "--format", "json"]))


def test_dumps_round_trips_floats():
    values = [0.1, 1 / 3, 1e-300, 2.0, 123456789.123456789]
    text = dumps({"v": values, "flag": True, "none": None, "n": 3})
    back = json.loads(text)
    assert back["v"] == values and back["flag"] is True and back["none"] is None
    assert "2.0" in text and "0.10000000000000001" in text
