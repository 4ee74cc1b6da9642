import json

import pytest

from smlg import cli
from smlg.graph import chain, serialize_ldag


@pytest.fixture
def files(tmp_path):
    def write(name, content):
        p = tmp_path / name
        p.write_text(content)
        return str(p)
    return write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_match_text_engines_agree(files, capsys):
    t, p = files("t.txt", "0110110\n"), files("p.txt", "110\n")
    outs = {}
    for eng in ("naive", "shift-and"):
        code, out, _ = run(capsys, "match-text", "--text", t, "--pattern", p, "--engine", eng)
        assert code == 0
        outs[eng] = out
    assert outs["naive"] == outs["shift-and"] == "yes 3 6\n"
    code, out, _ = run(capsys, "match-text", "--text", t, "--pattern", p, "--engine", "quantum-sim")
    assert code == 0 and out.strip() in ("yes 3", "yes 6", "no")


def test_quantum_text_rejects_non_binary(files, capsys):
    t, p = files("t.txt", "abc\n"), files("p.txt", "b\n")
    code, _, err = run(capsys, "match-text", "--text", t, "--pattern", p, "--engine", "quantum-sim")
    assert code == 1 and "binary" in err


def test_match_dag_engines_agree(files, capsys):
    g = files("g.ldag", serialize_ldag(chain("abcab")))
    p = files("p.pat", "ab\nca\nba\nc\n")
    answers = set()
    for eng in ("dp", "shift-and", "quantum-sim"):
        code, out, _ = run(capsys, "match-dag", "--graph", g, "--pattern", p, "--engine", eng,
                           "--c", "30", "--seed", "4")
        assert code == 0
        answers.add(out)
    assert answers == {"yes\nyes\nno\nyes\n"}


def test_report_is_deterministic(files, capsys):
    g = files("g.ldag", serialize_ldag(chain("abcab")))
    p = files("p.pat", "ab\n")
    argv = ["match-dag", "--graph", g, "--pattern", p, "--engine", "quantum-sim", "--seed", "7",
            "--report", "json", "--check-invariants"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    rep = json.loads(a.split("\n", 1)[1])
    assert rep["seed"] == 7 and "wall_time_s" not in rep
    _, c, _ = run(capsys, *argv, "--timing")
    assert "wall_time_s" in json.loads(c.split("\n", 1)[1])


def test_seed_from_environment(files, capsys, monkeypatch):
    g = files("g.ldag", serialize_ldag(chain("ab")))
    p = files("p.pat", "ab\n")
    monkeypatch.setenv("SMLG_SEED", "31")
    _, out, _ = run(capsys, "match-dag", "--graph", g, "--pattern", p, "--report", "json")
    assert json.loads(out.split("\n", 1)[1])["seed"] == 31
    monkeypatch.setenv("SMLG_SEED", "x")
    code, _, _ = run(capsys, "match-dag", "--graph", g, "--pattern", p)
    assert code == 1


def test_exit_codes(files, capsys, tmp_path):
    p = files("p.pat", "ab\n")
    assert run(capsys, "match-dag", "--graph", str(tmp_path / "missing"), "--pattern", p)[0] == 2
    bad = files("bad.ldag", "this is not a graph\n")
    assert run(capsys, "match-dag", "--graph", bad, "--pattern", p)[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["match-dag", "--bogus"])
    assert exc.value.code == 1
    g = files("g.ldag", serialize_ldag(chain("ab")))
    assert run(capsys, "match-dag", "--graph", g, "--pattern", p, "--c", "0")[0] == 1


def test_trace_goes_to_stderr(files, capsys):
    g = files("g.ldag", serialize_ldag(chain("abc")))
    p = files("p.pat", "bc\n")
    code, out, err = run(capsys, "match-dag", "--graph", g, "--pattern", p, "--engine", "quantum-sim",
                         "--trace", "--check-invariants")
    assert code == 0 and out == "yes\n"
    assert "op=H" in err and "check=invariant1" in err


def test_gen_then_verify(tmp_path, capsys):
    out = tmp_path / "corpus"
    assert run(capsys, "gen", "--out", str(out), "--count", "25", "--seed", "3")[0] == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert len(manifest) == 25 and len(list(out.glob("*.ldag"))) == 25
    code, text, _ = run(capsys, "verify", "--corpus", str(out))
    assert code == 0 and "0 failing" in text


def test_gen_single_instance(tmp_path, capsys):
    out = tmp_path / "one"
    code, _, _ = run(capsys, "gen", "--out", str(out), "--nodes", "12", "--levels", "4",
                     "--pattern-length", "3", "--planted", "no", "--seed", "2")
    assert code == 0
    code, text, _ = run(capsys, "match-dag", "--graph", str(out / "inst00002.ldag"),
                        "--pattern", str(out / "inst00002.pat"), "--engine", "dp")
    assert text == "no\n"


def test_verify_disagreement_dumps_minimized(tmp_path, capsys, monkeypatch):
    out = tmp_path / "corpus"
    run(capsys, "gen", "--out", str(out), "--count", "3", "--seed", "1")

    def fake(g, pattern, **kw):
        return ["injected"] if g.n >= 2 else []

    monkeypatch.setattr(cli, "check_instance", fake)
    code, text, _ = run(capsys, "verify", "--corpus", str(out))
    assert code == 3 and "FAIL" in text
    dumps = sorted((out / "failures").glob("*.min.ldag"))
    assert len(dumps) == 3
    assert all(t.read_text().count("\n") < 20 for t in dumps)


def test_verify_missing_corpus(tmp_path, capsys):
    assert run(capsys, "verify", "--corpus", str(tmp_path / "nope"))[0] == 2


def test_bench_small(capsys):
    code, out, _ = run(capsys, "bench", "--min-exp", "6", "--max-exp", "8", "--m", "4")
    assert code == 0
    assert out.count("\n") == 5 and out.startswith(" exp")
    assert "fit:" in out
