import io
import json
import random
import subprocess
import sys

import pytest

from conicres.cli import main

COMPONENT_KEYS = {"place": str, "tau": int, "role": str, "alpha_trivial": bool, "cover": str,
                  "residue_trivial": bool, "residue_rep": str, "match": bool}
TOP_KEYS = {"p": int, "d": int, "a": str, "b": str, "components": list, "reciprocity_ok": bool,
            "remark13_ok": bool, "seed": int}


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def check_bundle_schema(doc):
    assert set(doc) == set(TOP_KEYS)
    for key, typ in TOP_KEYS.items():
        assert type(doc[key]) is typ, key
    for comp in doc["components"]:
        assert set(comp) == set(COMPONENT_KEYS)
        for key, typ in COMPONENT_KEYS.items():
            assert type(comp[key]) is typ, key
        assert comp["role"] in ("a-vanishing", "b-vanishing")
        assert comp["tau"] > 0


def test_symbol_examples():
    code, text = run("symbol", "--p", "3", "--place", "t", "--a", "2", "--b", "t")
    assert code == 0
    assert "symbol (tame formula): -1" in text and "symbol (conic search): -1, no point" in text
    assert "residue: nontrivial (class of 2)" in text and "equal to residue: yes" in text
    code, text = run("symbol", "--p", "5", "--place", "t", "--a", "4", "--b", "t", "--format", "json")
    doc = json.loads(text)
    assert code == 0 and doc["tame"] == 1 and doc["conic"] == 1 and doc["agree"]
    assert doc["residue_trivial"] and doc["witness"][1:] == ["1", "0"]


def test_symbol_at_infinity_and_quadratic_place():
    code, text = run("symbol", "--p", "3", "--place", "inf", "--a", "2", "--b", "t", "--format", "json")
    assert code == 0 and json.loads(text)["tame"] == -1
    code, text = run("symbol", "--p", "3", "--place", "t^2+1", "--a", "t", "--b", "t^2+1")
    assert code == 0 and "residue field F_3^2" in text


def test_bundle_examples():
    code, text = run("bundle", "--p", "3", "--a", "2", "--b", "t*(t-1)^2")
    assert code == 0
    lines = text.splitlines()
    assert lines[1].split()[:3] == ["place", "tau", "role"]
    assert lines[2].split()[:3] == ["t", "1", "b-vanishing"] and lines[2].endswith("yes")
    assert lines[3].split()[:3] == ["t+2", "2", "b-vanishing"] and lines[3].endswith("yes")
    assert "[independent cross-check]: ok" in text
    code, text = run("bundle", "--p", "5", "--a", "4", "--b", "t", "--format", "json")
    doc = json.loads(text)
    check_bundle_schema(doc)
    assert code == 0 and doc["a"] == "4" and doc["b"] == "t" and doc["seed"] == 0
    assert doc["components"] == [{"place": "t", "tau": 1, "role": "b-vanishing", "alpha_trivial": True,
                                  "cover": "s^2-4", "residue_trivial": True, "residue_rep": "1", "match": True}]


def test_hypothesis_violation_exit(capsys):
    code, _ = run("bundle", "--p", "3", "--a", "t", "--b", "t+t^2")
    assert code == 1
    assert "offending factor: t" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["symbol", "--p", "2", "--place", "t", "--a", "1", "--b", "t"],
    ["symbol", "--p", "9", "--place", "t", "--a", "1", "--b", "t"],
    ["selftest", "--trials", "0"],
    ["symbol", "--p", "3", "--place", "t^2+2", "--a", "1", "--b", "t"],
    ["symbol", "--p", "3", "--place", "t", "--a", "1+", "--b", "t"],
    ["symbol", "--p", "3", "--place", "t", "--a", "0", "--b", "t"],
    ["bundle", "--p", "3", "--a", "0", "--b", "t"],
    ["bundle", "--p", "3", "--a", "1", "--b", "t", "--seed", "-1"],
])
def test_input_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        code = main(argv, io.StringIO())
        raise SystemExit(code)
    assert exc.value.code == 1


def test_p2_message(capsys):
    with pytest.raises(SystemExit):
        main(["symbol", "--p", "2", "--place", "t", "--a", "1", "--b", "t"])
    assert "characteristic != 2" in capsys.readouterr().err


def random_poly(rng, p, maxdeg):
    deg = rng.randint(0, maxdeg)
    terms = [f"{rng.randrange(p)}*t^{i}" for i in range(deg)] + [f"{rng.randrange(1, p)}*t^{deg}"]
    return "+".join(terms)


def test_json_schema_randomized():
    rng = random.Random(11)
    seen = 0
    while seen < 100:
        p = rng.choice([3, 5, 7])
        a, b = random_poly(rng, p, 3), random_poly(rng, p, 4)
        code, text = run("bundle", "--p", str(p), "--a", a, "--b", b, "--format", "json",
                         "--seed", str(rng.randrange(1 << 64)))
        if code == 1:
            assert text == ""
            continue
        assert code == 0
        check_bundle_schema(json.loads(text))
        seen += 1


def test_determinism_and_seed_env(monkeypatch):
    argv = ["selftest", "--p", "5", "--trials", "5", "--suite", "symbols", "--format", "json"]
    monkeypatch.setenv("RESIDUE_SEED", "17")
    _, first = run(*argv)
    _, again = run(*argv)
    assert first == again and json.loads(first)["seed"] == 17
    _, flagged = run(*argv, "--seed", "4")
    assert json.loads(flagged)["seed"] == 4
    monkeypatch.delenv("RESIDUE_SEED")
    _, default = run(*argv)
    assert json.loads(default)["seed"] == 0
    _, same = run(*argv, "--seed", "0")
    assert default == same


def test_bad_seed_env(monkeypatch, capsys):
    monkeypatch.setenv("RESIDUE_SEED", "banana")
    code, _ = run("bundle", "--p", "3", "--a", "2", "--b", "t")
    assert code == 1 and "RESIDUE_SEED" in capsys.readouterr().err


def test_selftest_text():
    code, text = run("selftest", "--p", "3", "--trials", "20", "--suite", "lemma")
    assert code == 0 and text.rstrip().endswith("all passed")
    assert "[pass] lemma/main-lemma: 20/20" in text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "conicres", "bundle", "--p", "3", "--a", "2", "--b", "t",
                           "--format", "json"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    check_bundle_schema(json.loads(proc.stdout))
