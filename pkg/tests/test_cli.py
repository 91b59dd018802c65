import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from shadowlab.cli import main
from shadowlab.core import Family, format_fam

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "report.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    return code, data


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "timing"}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


@pytest.fixture
def files(tmp_path):
    def write(name, F):
        p = tmp_path / name
        p.write_text(format_fam(F) if isinstance(F, Family) else F)
        return str(p)
    return write


class TestShadow:
    def test_small(self, capsys, files):
        code, out, _ = run(capsys, "shadow", files("a.fam", "3 2\n1 2\n1 3\n"))
        assert code == 0 and out == "3 1\n1\n2\n3\n"

    def test_empty(self, capsys, files):
        code, out, _ = run(capsys, "shadow", files("a.fam", "4 2\n"))
        assert code == 0 and out == "4 1\n"

    def test_complete(self, capsys, files):
        code, out, _ = run(capsys, "shadow", files("a.fam", Family.complete(5, 3)))
        lines = out.splitlines()
        assert code == 0 and len(lines) == 11 and all(len(l.split()) == 2 for l in lines)

    def test_json(self, capsys, files):
        code, data = run_json(capsys, "shadow", files("a.fam", "3 2\n1 2\n1 3\n"))
        assert data["results"][0]["fam"] == "3 1\n1\n2\n3\n"
        assert data["inputs"][0]["sha256"]

    def test_parse_error(self, capsys, files):
        code, _, err = run(capsys, "shadow", files("a.fam", "3 2\n1 4\n"))
        assert code == 2 and "line 2" in err

    def test_missing_file(self, capsys):
        code, _, _ = run(capsys, "shadow", "/nonexistent.fam")
        assert code == 2


class TestCheck:
    def test_katona(self, capsys, files):
        code, out, _ = run(capsys, "check", "katona", files("s.fam", Family.star(5, 2)))
        assert code == 0 and "HOLDS" in out

    def test_local_not_intersecting(self, capsys, files):
        code, _, _ = run(capsys, "check", "local", files("k.fam", Family.complete(4, 2)))
        assert code == 2

    def test_local_fails_exit_1(self, capsys, files):
        code, data = run_json(capsys, "check", "local", files("c.fam", Family.complete(5, 3)))
        assert code == 1 and data["results"][0]["holds"] is False

    def test_union_antichain(self, capsys, files):
        code, _, _ = run(capsys, "check", "union-antichain", "--ell", "1", files("u.fam", Family.complete(5, 1)))
        assert code == 0

    def test_cross(self, capsys, files):
        s = files("s.fam", Family.star(5, 2))
        code, data = run_json(capsys, "check", "frankl-cross", s, s)
        assert code == 0 and data["results"][0]["claim"] == "frankl-cross"

    def test_arity(self, capsys, files):
        s = files("s.fam", Family.star(5, 2))
        with pytest.raises(SystemExit) as exc:
            main(["check", "katona", s, s])
        assert exc.value.code == 2

    def test_replay_from_chain_report(self, capsys, files, tmp_path):
        s = files("s.fam", Family.star(6, 2))
        code, out, _ = run(capsys, "chain", s, "--format", "json")
        rep = tmp_path / "chain.json"
        rep.write_text(out)
        code, data = run_json(capsys, "check", "replay", s, "--cert", str(rep))
        assert code == 0 and data["results"][0]["holds"]
        other = files("o.fam", Family.star(6, 2, center=2))
        code, data = run_json(capsys, "check", "replay", other, "--cert", str(rep))
        assert code == 1


class TestPseudo:
    def test_fails(self, capsys, files):
        code, data = run_json(capsys, "pseudo", files("k.fam", Family.complete(4, 2)))
        assert code == 1 and data["results"][0]["witness_X"] == []

    def test_anchor(self, capsys, files):
        s = files("s.fam", Family.star(5, 2))
        assert run(capsys, "pseudo", s, "--anchor", "2")[0] == 0
        assert run(capsys, "pseudo", s, "--anchor", "1")[0] == 1

    def test_floor(self, capsys, files):
        s = files("s.fam", Family.star(5, 2))
        code, data = run_json(capsys, "pseudo", s, "--anchor", "3", "--exclude", "4 5", "--floor", "3,4,5")
        assert code == 0

    def test_overlap_is_usage_error(self, capsys, files):
        s = files("s.fam", Family.star(5, 2))
        assert run(capsys, "pseudo", s, "--anchor", "1", "--exclude", "1")[0] == 2


class TestChain:
    def test_star(self, capsys, files):
        code, data = run_json(capsys, "chain", files("s.fam", Family.star(6, 2)), "--audit")
        cert, replay = data["results"]
        assert code == 0 and cert["outcome"] == "F_CHAIN" and len(cert["chain"][0]) >= 3
        assert replay["holds"]

    def test_text(self, capsys, files):
        code, out, _ = run(capsys, "chain", files("s.fam", Family.complete(5, 3)))
        assert code == 0 and "removed {4,5}" in out

    def test_cross_empty_g(self, capsys, files):
        code, data = run_json(capsys, "chain", "--cross", files("f.fam", Family.star(5, 2)), files("g.fam", "5 2\n"))
        assert code == 0 and data["results"][0]["chain"] == [[1, 2, 3, 4, 5]] * 2

    def test_not_intersecting(self, capsys, files):
        assert run(capsys, "chain", files("k.fam", Family.complete(4, 2)))[0] == 2


class TestHunt:
    def test_exhaustive(self, capsys):
        code, data = run_json(capsys, "hunt", "--n", "4", "--k", "2", "--claims", "katona,local")
        assert code == 0 and data["results"][0]["families_examined"] == 27

    def test_budget(self, capsys):
        code, _, err = run(capsys, "hunt", "--n", "5", "--k", "2", "--budget", "1")
        assert code == 3 and "budget" in err

    def test_budget_env(self, capsys, monkeypatch):
        monkeypatch.setenv("SHADOWLAB_BUDGET", "3")
        code, data = run_json(capsys, "hunt", "--n", "5", "--k", "2")
        assert code == 3 and data["results"][0]["complete"] is False

    def test_random_deterministic(self, capsys):
        argv = ("hunt", "--mode", "random", "--seed", "7", "--samples", "100", "--n", "7", "--k", "3",
                "--claims", "local")
        _, a = run_json(capsys, *argv)
        _, b = run_json(capsys, *argv)
        assert strip_timing(a) == strip_timing(b)

    def test_bad_claim(self, capsys):
        assert run(capsys, "hunt", "--n", "4", "--k", "2", "--claims", "union-antichain")[0] == 2


def test_bad_jobs(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["hunt", "--n", "4", "--k", "2", "--jobs", "0"])
    assert exc.value.code == 2


def test_module_entry_point(tmp_path):
    p = tmp_path / "a.fam"
    p.write_text("3 2\n1 2\n1 3\n")
    out = subprocess.run([sys.executable, "-m", "shadowlab", "shadow", str(p)], capture_output=True, text=True,
                         env={**os.environ})
    assert out.returncode == 0 and out.stdout == "3 1\n1\n2\n3\n"
