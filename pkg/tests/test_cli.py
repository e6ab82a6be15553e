import json
import subprocess
import sys

import pytest

from moufang.cli import main
from moufang.foundation import DATA


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_bundled(capsys):
    code, out, _ = run(capsys, "check", str(DATA / "a3_f2.json"))
    assert code == 0
    assert json.loads(out)["realisable"] is True


def test_check_by_name(capsys):
    code, out, _ = run(capsys, "check", "b3_f2")
    assert code == 0 and json.loads(out)["valid"]


def test_realize_line_count(capsys, tmp_path):
    code, out, _ = run(capsys, "realize", "a2_f2", "--max-len", "3")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 21
    assert json.loads(lines[0]) == {"type": [], "labels": []}
    dest = tmp_path / "c.jsonl"
    code, out, _ = run(capsys, "realize", "a2_f2", "--max-len", "3", "--out", str(dest))
    assert json.loads(out)["count"] == 21
    assert dest.read_text().splitlines() == lines


def test_realize_is_byte_identical(capsys):
    a = run(capsys, "realize", "b2_f2", "--max-len", "4")[1]
    b = run(capsys, "--threads", "3", "realize", "b2_f2", "--max-len", "4")[1]
    assert a == b


def test_act(capsys):
    code, out, _ = run(capsys, "act", "a2_f2", "--word", "n:s", "--chamber", '{"type":["s"],"labels":[0]}')
    assert code == 0 and json.loads(out) == {"type": [], "labels": []}
    code, out, _ = run(capsys, "act", "a2_f2", "--word", "u:s:1 n:s")
    assert json.loads(out) == {"type": ["s"], "labels": [1]}


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "a2_f2", "--suite", "braid")
    assert code == 0 and json.loads(out)["failures"] == []
    code, out, _ = run(capsys, "--threads", "2", "verify", "b2_f2", "--suite", "all")
    rep = json.loads(out)
    assert code == 0 and set(rep) == {"braid", "ps", "torus", "rgd", "orbit"}


def test_co_and_sco(capsys):
    code, out, _ = run(capsys, "co", "a2_f5", "--edge", "s,t")
    assert code == 0 and json.loads(out)["vertices"] == 125
    code, out, _ = run(capsys, "sco", "a3_f2", "--triple", "r,s,t")
    verdict = json.loads(out)["verdict"]
    assert code == {"SIMPLY_CONNECTED": 0, "NOT": 2, "INCONCLUSIVE": 3}[verdict]
    code, out, _ = run(capsys, "sco", "a3_f3", "--triple", "r,s,t", "--bound", "1000")
    assert code == 3 and json.loads(out)["verdict"] == "INCONCLUSIVE"


def test_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"generators": ["s"],\n "edges": [}')
    code, _, err = run(capsys, "check", str(bad))
    rep = json.loads(err)
    assert code == 1 and rep["error"] == "SCHEMA_ERROR" and rep["line"] == 2
    code, _, err = run(capsys, "check", str(tmp_path / "missing.json"))
    assert code == 1 and json.loads(err)["error"] == "IO_ERROR"
    mismatch = tmp_path / "m.json"
    mismatch.write_text(json.dumps({"generators": ["r", "s", "t"], "edges": [
        {"pair": ["r", "s"], "type": "A2", "q": 2}, {"pair": ["s", "t"], "type": "A2", "q": 3}]}))
    code, _, err = run(capsys, "check", str(mismatch))
    assert code == 1 and json.loads(err)["error"] == "PANEL_MISMATCH"
    code, _, err = run(capsys, "act", "a2_f2", "--word", "bogus")
    assert code == 1 and json.loads(err)["error"] == "UNSUPPORTED_LETTER"
    code, _, err = run(capsys, "co", "a2_f2", "--edge", "s")
    assert code == 1


def test_bad_arguments(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "a2_f2", "--suite", "nope"])


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "moufang", "realize", "a2_f2", "--max-len", "1"],
                         capture_output=True, text=True, check=True)
    assert len(out.stdout.splitlines()) == 5  # 1 + 2 + 2
