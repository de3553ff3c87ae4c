import json
import subprocess
import sys

import pytest

from reedyfib.corpus import generate


def cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "reedyfib.cli", *args], capture_output=True, text=True, cwd=cwd)


@pytest.fixture(scope="module")
def work(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    assert cli("corpus", "generate", "--seed", "0", "--size", "30", "-o", str(d / "corpus")).returncode == 0
    assert cli("build", "F", "2", "--trunc", "3,3", "-o", str(d / "F2.json")).returncode == 0
    return d


def test_build_writes_json(work):
    data = json.loads((work / "F2.json").read_text())
    assert data["format"] == "presheaf/1" and data["truncation"] == [3, 3]


def test_check_constant_complete_segal(work):
    name = next(i for i, it in enumerate(generate(0, 30)) if it.category == "[1]" and it.fibers == ["F1", "F1"])
    g = work / "fib.json"
    assert cli("groth", str(work / "corpus" / f"diagram_{name:03d}.json"), "-o", str(g)).returncode == 0
    r = cli("check", "--kind", "cocart", str(g), "--bound", "3")
    assert r.returncode == 0, r.stdout + r.stderr
    assert "through truncation" in r.stdout


def test_exit_codes(work):
    assert cli("build", "delta", "2", "--trunc", "3", "-o", str(work / "d2.json")).returncode == 0
    assert cli("build", "horn", "2", "0", "--trunc", "3", "-o", str(work / "h.json")).returncode == 0
    assert cli("weq", str(work / "h.json")).returncode == 0
    assert cli("check", "--kind", "kan", str(work / "h.json")).returncode == 1
    assert cli("factor", str(work / "h.json"), "--budget", "5").returncode == 2
    assert cli("build", "nope").returncode == 3
    (work / "bad.json").write_text("{")
    assert cli("weq", str(work / "bad.json")).returncode == 3


def test_reports_are_deterministic_and_bounded(work):
    a = cli("--json", "check", "--kind", "kan", str(work / "h.json"))
    b = cli("--json", "check", "--kind", "kan", str(work / "h.json"))
    assert a.returncode == 1 and a.stdout == b.stdout
    assert cli("check", "--kind", "left", str(work / "F2.json")).returncode == 3
    r1 = cli("--json", "rlp", str(work / "h.json"), "--threads", "1")
    r2 = cli("--json", "rlp", str(work / "h.json"), "--threads", "3")
    assert r1.stdout == r2.stdout
    rep = json.loads(r1.stdout)
    assert rep["bounds"] == [2] and rep["version"] and len(rep["inputs"]) == 1


def test_timing_is_opt_in(work):
    rep = json.loads(cli("--json", "--timing", "homology", str(work / "d2.json")).stdout)
    assert "wall_clock_s" in rep
    assert "wall_clock_s" not in json.loads(cli("--json", "homology", str(work / "d2.json")).stdout)


def test_env_truncation(work, monkeypatch):
    monkeypatch.setenv("REEDYFIB_TRUNC", "2,2")
    r = cli("--json", "build", "F", "1")
    assert json.loads(r.stdout)["result"]["truncation"] == [2, 2]


def test_pp_and_pexp(work):
    assert cli("build", "boundary", "1", "--trunc", "3", "-o", str(work / "b1.json")).returncode == 0
    assert cli("homology", str(work / "b1.json")).returncode == 3
    assert cli("pp", str(work / "b1.json"), str(work / "b1.json"), "-o", str(work / "pp.json")).returncode == 0
    assert cli("build", "J", "1", "--trunc", "3", "-o", str(work / "J.json")).returncode == 0
    r = cli("map-space", str(work / "d2.json"), str(work / "J.json"), "--n", "1")
    assert r.returncode == 0


def test_verify_conditions():
    r = cli("verify", "--suite", "conditions")
    assert r.returncode == 0 and "pass" in r.stdout
