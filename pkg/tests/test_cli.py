import json
import subprocess
import sys

import numpy as np
import pytest

from paravector import acceptance, cli
from paravector.clifford import Multivector, Signature, random_multivector
from paravector.jsonio import clmat_from_json, complex_to_json, dumps, mv_from_json, mv_to_json


def run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def mv(p, q, coeffs):
    return {"p": p, "q": q, "coeffs": coeffs}


def test_mv_mul(tmp_path, capsys):
    a = write(tmp_path, "a.json", mv(3, 0, {"e1": 1.0}))
    b = write(tmp_path, "b.json", mv(3, 0, {"e2": 1.0}))
    code, out, _ = run(capsys, "mv", "mul", a, b)
    assert code == 0
    assert json.loads(out) == mv(3, 0, {"e12": 1.0})


@pytest.mark.parametrize("op,expected", [
    ("rev", {"e12": -1.0, "e1": 2.0}),
    ("hat", {"e12": 1.0, "e1": -2.0}),
    ("bar", {"e12": -1.0, "e1": -2.0}),
])
def test_mv_unary(tmp_path, capsys, op, expected):
    a = write(tmp_path, "a.json", mv(3, 0, {"e12": 1.0, "e1": 2.0}))
    code, out, _ = run(capsys, "mv", op, a)
    assert code == 0 and json.loads(out)["coeffs"] == expected


def test_mv_grade_and_inverse(tmp_path, capsys):
    a = write(tmp_path, "a.json", mv(3, 0, {"1": 3.0, "e12": 1.0}))
    code, out, _ = run(capsys, "mv", "grade", a, "--k", "2")
    assert code == 0 and json.loads(out)["coeffs"] == {"e12": 1.0}
    z = write(tmp_path, "z.json", mv(3, 0, {"1": 1.0, "e1": 1.0}))
    code, _, _ = run(capsys, "mv", "inverse", z)
    assert code == 3


def test_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "mv", "rev", str(bad))[0] == 1
    assert run(capsys, "mv", "rev", str(tmp_path / "missing.json"))[0] == 1
    assert run(capsys, "nosuch")[0] == 1
    assert run(capsys, "mv", "mul", str(bad))[0] == 1
    wrong = write(tmp_path, "w.json", mv(3, 0, {"e9": 1.0}))
    assert run(capsys, "mv", "rev", wrong)[0] == 1


def test_periodicity_verify(capsys):
    code, out, _ = run(capsys, "periodicity", "verify", "--p", "3", "--q", "0", "--variant", "per1")
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["source"] == [4, 1]
    assert rep["relations"]["anticommutators"] == 10
    assert len(rep["transport"]) == 2
    assert run(capsys, "periodicity", "verify", "--p", "0", "--q", "0")[0] == 1


def test_conf_roundtrip(tmp_path, capsys):
    code, out, _ = run(capsys, "conf", "make", "--kind", "translation", "--h", "0,1,0,0")
    assert code == 0
    m = clmat_from_json(json.loads(out))
    assert m.c.isclose(Multivector.blade(Signature(3, 0), 1))
    t = tmp_path / "t.json"
    t.write_text(out)
    code, out, _ = run(capsys, "conf", "apply", "--map", str(t), "--x", "0,0,1,0")
    assert code == 0 and json.loads(out) == {"x'": [0.0, 1.0, 1.0, 0.0], "delta": 1.0}
    code, out, _ = run(capsys, "conf", "compose", str(t), str(t))
    assert code == 0 and clmat_from_json(json.loads(out)).c.coeffs[1] == 2.0
    code, out, _ = run(capsys, "conf", "verify", str(t))
    assert code == 0 and json.loads(out)["ok"]


def test_conf_at_infinity(tmp_path, capsys):
    code, out, _ = run(capsys, "conf", "make", "--kind", "inversion")
    inv = tmp_path / "inv.json"
    inv.write_text(out)
    code, out, _ = run(capsys, "conf", "apply", "--map", str(inv), "--x", "1,1,0,0")
    assert code == 3 and json.loads(out) == {"at_infinity": True}


def test_conf_verify_failure(tmp_path, capsys):
    s = lambda v: mv(3, 0, {"1": v})
    bad = write(tmp_path, "bad.json", {"a": s(1.0), "b": s(0.0), "c": s(0.0), "d": s(2.0)})
    code, out, _ = run(capsys, "conf", "verify", bad)
    rep = json.loads(out)
    assert code == 2 and not rep["conditions"]["vi"]
    assert run(capsys, "conf", "apply", "--map", bad, "--x", "0,0,0,0")[0] == 2


def test_conf_dilation_and_mobius(capsys):
    code, out, _ = run(capsys, "conf", "make", "--kind", "dilation", "--rho", "4")
    m = clmat_from_json(json.loads(out))
    assert m.a.scalar_part == 2.0 and m.d.scalar_part == 0.5
    code, out, _ = run(capsys, "conf", "mobius", "--A", "0,-1,1,0", "--z", "2i")
    assert code == 0 and json.loads(out) == {"z'": [0.0, 0.5], "omega": 4.0}
    assert run(capsys, "conf", "make", "--kind", "dilation", "--rho", "-1")[0] == 1


def test_lie_table(capsys):
    code, out, _ = run(capsys, "lie", "table")
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["max_residual"] < 1e-9
    assert len(rep["commutators"]) == 225
    pk = next(r for r in rep["commutators"] if r["pair"] == ["P0", "K0"])
    assert list(pk["coefficients"]) == ["D"] and pk["coefficients"]["D"] == pytest.approx(2.0)


def test_lie_gen(capsys):
    code, out, _ = run(capsys, "lie", "gen", "D", "--variant", "keller")
    m = np.array(json.loads(out)["matrix"])
    assert code == 0 and m.shape == (4, 4, 2)
    assert np.allclose(m[..., 0] + 1j * m[..., 1], np.diag([-0.5, -0.5, 0.5, 0.5]))
    assert run(capsys, "lie", "gen", "Q7")[0] == 1


def test_twistor_build(capsys):
    code, out, _ = run(capsys, "twistor", "build", "--x", "1,0,0,0", "--xi", "1,0", "--rep", "keller")
    t = json.loads(out)
    assert code == 0
    assert t["components"] == [[0.0, 1.0], [0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]
    code, out, _ = run(capsys, "twistor", "build", "--x", "0.5,1,-2,0.3", "--xi", "1+2i,-i")
    assert code == 0 and json.loads(out)["ideal_agreement"] < 1e-12


def test_twistor_incidence_and_scan(tmp_path, capsys):
    rng = np.random.default_rng(0)
    x, y = acceptance.random_null(rng), acceptance.random_null(rng)
    px = write(tmp_path, "x.json", x.to_dict())
    py = write(tmp_path, "y.json", y.to_dict())
    U = write(tmp_path, "U.json", complex_to_json(np.eye(4)))
    code, out, _ = run(capsys, "twistor", "incidence", "--x", px, "--xp", px, "--U", U)
    assert code == 0 and json.loads(out)["incident"]
    code, out, _ = run(capsys, "twistor", "incidence", "--x", px, "--xp", py, "--U", U)
    assert code == 0 and not json.loads(out)["incident"]
    samples = tmp_path / "s.jsonl"
    lines = [x.to_dict(), x.scaled(3.0).to_dict(), y.to_dict(), {"scalar": 1.0, "E": [0, 0, 0, 0, 0]},
             {"minkowski": [1.0, 0.0, 0.0, 0.0]}]
    samples.write_text("\n".join(json.dumps(s) for s in lines) + "\n")
    code, out, _ = run(capsys, "twistor", "scan", "--x", px, "--samples", str(samples))
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and [r["index"] for r in recs] == [0, 1, 2, 3, 4]
    assert [r.get("incident") for r in recs[:3]] == [True, True, False]
    assert "error" in recs[3]
    nn = write(tmp_path, "nn.json", {"scalar": 1.0, "E": [0, 0, 0, 0, 0]})
    assert run(capsys, "twistor", "incidence", "--x", nn, "--xp", px, "--U", U)[0] == 3


def test_selftest_dispatch(capsys, monkeypatch):
    monkeypatch.setattr(acceptance, "CRITERIA", (acceptance.center_check, acceptance.mobius_check))
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert "2/2 criteria passed" in out and out.count("[PASS]") == 2


def test_global_flags(capsys):
    code, out, _ = run(capsys, "--tolerance", "1e-30", "lie", "table")
    assert code == 2 and not json.loads(out)["ok"]


def test_json_roundtrip_and_determinism(rng):
    for sig in (Signature(3, 0), Signature(4, 1), Signature(6, 5)):
        a = random_multivector(sig, rng)
        text = dumps(mv_to_json(a))
        b = mv_from_json(json.loads(text))
        assert np.max(np.abs(a.coeffs - b.coeffs)) < 1e-15
        assert dumps(mv_to_json(b)) == text


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "paravector.cli", "lie", "gen", "P0"],
                         capture_output=True, text=True, check=True)
    again = subprocess.run([sys.executable, "-m", "paravector.cli", "lie", "gen", "P0"],
                           capture_output=True, text=True, check=True)
    assert out.stdout == again.stdout
    assert json.loads(out.stdout)["label"] == "P0"
