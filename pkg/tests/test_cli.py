import json

import pytest

from matinv.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_delta_q5(capsys):
    code, out = run(capsys, "delta", "--q", "5")
    data = json.loads(out)
    assert code == 0 and data["agree"]
    assert abs(data["delta"]["approx"] - 6.8541019662) < 1e-9
    assert data["delta"]["method"] == "closed-form"
    assert data["spectral_radius"]["method"] == "picard"
    assert data["config"]["q"] == 5


def test_delta_q3_text(capsys):
    code, out = run(capsys, "delta", "--q", "3", "--format", "text")
    assert code == 0 and "delta = 1.0" in out


def test_delta_scope(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["delta", "--q", "2"])
    assert exc.value.code == 2
    assert "q >= 3" in capsys.readouterr().err


def test_degseq_both(capsys, tmp_path):
    code, out = run(capsys, "degseq", "--q", "3", "--n", "4", "--method", "both", "--cache-dir", str(tmp_path))
    data = json.loads(out)
    assert code == 0 and data["agreement"]
    assert [r["probe"] for r in data["table"]] == [1, 7, 16, 19, 25]
    assert all(r["method"] == "probe" for r in data["records"]["probe"])


def test_degseq_picard_and_csv(capsys):
    code, out = run(capsys, "degseq", "--q", "5", "--n", "2", "--method", "picard", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["q,n,picard", "5,0,1", "5,1,21", "5,2,206"]
    code, out = run(capsys, "degseq", "--q", "4", "--n", "0", "--method", "picard", "--format", "csv")
    assert out.splitlines()[1] == "4,0,1"


def test_degseq_symbolic(capsys):
    code, out = run(capsys, "degseq", "--q", "3", "--n", "1", "--method", "symbolic")
    assert [r["symbolic"] for r in json.loads(out)["table"]] == [1, 7]
    with pytest.raises(SystemExit):
        main(["degseq", "--q", "4", "--n", "1", "--method", "symbolic"])


def test_degseq_is_deterministic(capsys, tmp_path):
    args = ("degseq", "--q", "3", "--n", "3", "--method", "probe", "--seed", "11", "--no-cache")
    _, a = run(capsys, *args)
    _, b = run(capsys, *args)
    assert a == b


def test_env_overrides(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MATINV_CACHE_DIR", str(tmp_path / "env"))
    monkeypatch.setenv("MATINV_PRIME_BITS", "63")
    code, out = run(capsys, "degseq", "--q", "3", "--n", "1", "--method", "probe")
    data = json.loads(out)
    assert data["config"]["prime-bits"] == 63
    assert all(p >= 2**62 for p in data["records"]["probe"][1]["primes"])
    assert (tmp_path / "env" / "degrees.jsonl").exists()
    code, out = run(capsys, "degseq", "--q", "3", "--n", "1", "--method", "probe", "--prime-bits", "61", "--cache-dir", str(tmp_path / "flag"))
    data = json.loads(out)
    assert data["config"]["prime-bits"] == 61
    assert (tmp_path / "flag" / "degrees.jsonl").exists()


def test_picard_emits(capsys):
    code, out = run(capsys, "picard", "--q", "3", "--emit", "charpoly")
    cp = json.loads(out)["charpoly"]
    assert code == 0 and len(cp) == 21 and cp[-1] == 1
    code, out = run(capsys, "picard", "--q", "6", "--emit", "matrix")
    data = json.loads(out)
    assert data["dimension"] == 74 and len(data["matrix"]) == 74
    code, out = run(capsys, "picard", "--q", "3", "--emit", "factors", "--convention", "paper-literal")
    data = json.loads(out)
    assert code == 1 and not data["success"] and abs(data["s1_determinant"]) == 71
    code, out = run(capsys, "picard", "--q", "3", "--emit", "factors")
    assert code == 0 and json.loads(out)["success"]
    code, out = run(capsys, "picard", "--q", "4", "--emit", "invariants")
    assert code == 0 and json.loads(out)["success"]


def test_verify(capsys):
    code, out = run(capsys, "verify", "--q", "3", "--props", "all", "--trials", "5", "--seed", "7")
    data = json.loads(out)
    assert code == 0 and data["hard_failures"] == 0
    assert [r["proposition"] for r in data["reports"]] == ["1.1", "2.1", "2.2", "3.1", "4.4", "5.1", "6.1"]
    code, out = run(capsys, "verify", "--q", "4", "--props", "3.1", "--trials", "2")
    rep = json.loads(out)["reports"][0]
    assert code == 0 and rep["trials"] == 32


def test_verify_unknown_prop(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--q", "3", "--props", "9.9"])
    assert exc.value.code == 2


def test_cache_verbs(capsys, tmp_path):
    run(capsys, "degseq", "--q", "2", "--n", "2", "--method", "probe", "--cache-dir", str(tmp_path))
    code, out = run(capsys, "cache", "inspect", "--cache-dir", str(tmp_path))
    assert json.loads(out)["records"] == 6
    code, out = run(capsys, "cache", "clear", "--cache-dir", str(tmp_path))
    assert json.loads(out)["removed"] == 6
