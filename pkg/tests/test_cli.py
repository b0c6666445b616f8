import hashlib
import json
import subprocess
import sys
from pathlib import Path

import pytest

from synchrokit import Dfa, build_am
from synchrokit.cli import main
from synchrokit.series import build_cycle


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, dfa in [("am1", build_am(1)), ("am2", build_am(2)), ("cycle3", build_cycle(3))]:
        path = tmp_path / f"{name}.json"
        dfa.save(path)
        paths[name] = str(path)
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "letters": ["a"], "delta": [[0]]}')
    paths["bad"] = str(bad)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out else None


class TestRt:
    def test_am1(self, capsys, files):
        code, data = run_json(capsys, "rt", files["am1"])
        assert code == 0
        assert data == {"threshold": 11, "word": "w1 a b w0 a b w1 a b a w0", "q0": 0,
                        "verified": None}

    def test_verify(self, capsys, files):
        code, data = run_json(capsys, "rt", files["am2"], "--verify")
        assert code == 0 and data["threshold"] == 39 and data["verified"] is True

    def test_not_synchronizing(self, capsys, files):
        code, out, err = run(capsys, "rt", files["cycle3"])
        assert code == 3 and out == "" and "not synchronizing" in err

    def test_bad_file(self, capsys, files):
        assert run(capsys, "rt", files["bad"])[0] == 2
        assert run(capsys, "rt", files["bad"] + ".missing")[0] == 2


class TestVerifyWord:
    def test_series_word(self, capsys, files):
        code, data = run_json(capsys, "verify-word", files["am1"], "w1 a b w0 a b w1 a b a w0")
        assert code == 0
        assert data["reset"] and data["length"] == 11 and data["q0"] == 0
        assert data["straight"] and data["greedy"]
        assert data["factors"] == {"aa": False, "bb": False, "w0b": False, "w1b": False,
                                   "ends_with": "w0"}

    @pytest.mark.parametrize("word", ["w0 w0", ""])
    def test_not_reset(self, capsys, files, word):
        code, data = run_json(capsys, "verify-word", files["am1"], word)
        assert code == 0 and data["reset"] is False
        assert data["straight"] is None and data["greedy"] is None

    def test_unknown_letter(self, capsys, files):
        assert run(capsys, "verify-word", files["am1"], "a z")[0] == 2

    def test_compact_on_other_alphabet(self, capsys, tmp_path):
        path = tmp_path / "c.json"
        Dfa([[1, 0], [2, 1], [0, 0]]).save(path)
        code, data = run_json(capsys, "verify-word", str(path), "bab", "--compact")
        assert code == 0 and data["factors"] is None


class TestSeries:
    def test_reset_word(self, capsys):
        assert run(capsys, "series", "am", "--m", "1", "--emit", "resetword")[1] == \
            "w1 a b w0 a b w1 a b a w0"

    def test_word(self, capsys):
        assert run(capsys, "series", "am", "--m", "1", "--emit", "word")[1] == \
            "w1 a b w0 a b w1 a b a"

    def test_dfa_round_trip(self, capsys):
        code, out, _ = run(capsys, "series", "am", "--m", "1")
        assert code == 0 and out == build_am(1).to_json()
        assert Dfa.from_json(out) == build_am(1)

    def test_cerny(self, capsys):
        code, data = run_json(capsys, "series", "cerny", "--n", "4")
        assert code == 0 and data["delta"][3] == [0, 0]

    def test_bad_parameter(self, capsys):
        assert run(capsys, "series", "am", "--m", "0")[0] == 2


class TestExtendTraceLevelsCheck:
    def test_extend(self, capsys, files):
        code, data = run_json(capsys, "extend", files["am1"], "--subset", "0,1")
        assert code == 0 and data == {"subset": [0, 1], "length": 4, "word": "w1 a b a"}

    @pytest.mark.parametrize("subset, code", [("", 3), ("0,1,2,3,4", 3), ("0,x", 2), ("7", 2)])
    def test_extend_errors(self, capsys, files, subset, code):
        assert run(capsys, "extend", files["am1"], "--subset", subset)[0] == code

    def test_extend_not_extensible(self, capsys, files):
        assert run(capsys, "extend", files["cycle3"], "--subset", "0")[0] == 3

    def test_trace(self, capsys, files):
        code, data = run_json(capsys, "trace", files["am1"], "a b a w0")
        assert code == 2  # not a reset word and no --q0
        code, data = run_json(capsys, "trace", files["am1"], "a b a w0", "--q0", "0")
        assert code == 0
        assert [r["subset"] for r in data["rows"]] == [[0], [0, 1], [3, 4], [2, 3], [1, 2]]
        assert data["rows"][-1]["extenders"] == ["w1"]

    def test_trace_infers_q0(self, capsys, files):
        code, data = run_json(capsys, "trace", files["am1"], "w1 a b w0 a b w1 a b a w0")
        assert code == 0 and data["q0"] == 0 and data["rows"][-1]["subset"] == [0, 1, 2, 3, 4]

    def test_levels(self, capsys, files):
        code, data = run_json(capsys, "levels", files["am1"], "--q0", "0")
        assert code == 0
        assert data["max_width"] == 3 and data["depth_to_full"] == 11
        assert data["widths"][0] == 1

    def test_check(self, capsys, files):
        code, data = run_json(capsys, "check", files["am1"])
        assert code == 0
        assert data["eulerian"] and data["synchronizing"]
        assert data["letters"]["w0"] == {"permutational": False, "involutory": False,
                                         "unitary": True, "moved_state": [1, 0]}
        assert data["letters"]["a"]["involutory"] is True


class TestReport:
    def test_envelope(self, capsys, files):
        code, data = run_json(capsys, "--report", "rt", files["am1"])
        raw = open(files["am1"], "rb").read()
        assert code == 0
        assert data["command"] == "rt"
        assert data["input_digest"] == hashlib.sha256(raw).hexdigest()
        assert data["result"]["threshold"] == 11
        assert data["elapsed_ms"] >= 0

    def test_plain_string_output_is_not_wrapped(self, capsys):
        assert run(capsys, "--report", "series", "am", "--m", "1", "--emit", "word")[1].startswith("w1")


class TestCensus:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, "census", "--n", "5", "--k", "2", "--eulerian", "--iso",
                           "--bound", "auto", "--out", "csv")
        assert code == 0
        assert out.splitlines() == ["n,k,total,synchronizing,max_rt,bound,bound_holds",
                                    "5,2,435,379,10,10,True"]

    def test_json_and_witnesses(self, capsys, tmp_path):
        wdir = tmp_path / "wit"
        code, data = run_json(capsys, "census", "--n", "4", "--k", "2", "--eulerian", "--iso",
                              "--witness-dir", str(wdir))
        assert code == 0 and data["max_rt"] == 5
        saved = sorted(wdir.iterdir())
        assert len(saved) == len(data["witnesses"])
        assert all(Dfa.load(p).n == 4 for p in saved)

    def test_bound_violation_exit_code(self, capsys):
        code, data = run_json(capsys, "census", "--n", "4", "--k", "2", "--eulerian", "--iso",
                              "--bound", "3")
        assert code == 1 and data["bound_holds"] is False

    def test_budget_refusal(self, capsys):
        code, out, err = run(capsys, "census", "--n", "7", "--k", "3", "--eulerian", "--iso")
        assert code == 3 and "budget" in err.lower()

    def test_bad_bound(self, capsys):
        assert run(capsys, "census", "--n", "3", "--k", "2", "--bound", "high")[0] == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "synchrokit", "rt", files["am1"]],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["threshold"] == 11


def test_argparse_error_exit():
    with pytest.raises(SystemExit) as info:
        main(["rt"])
    assert info.value.code == 2


DATA = Path(__file__).parent / "data"


@pytest.mark.parametrize("name, argv", [
    ("am1.json", ["series", "am", "--m", "1"]),
    ("am2.json", ["series", "am", "--m", "2"]),
])
def test_golden_files(capsys, name, argv):
    golden = (DATA / name).read_bytes()
    assert main(argv) == 0
    assert capsys.readouterr().out.encode() == golden
    assert (Dfa.load(DATA / name).to_json() + "\n").encode() == golden


@pytest.mark.parametrize("name, threshold, code", [("am1.json", 11, 0), ("am2.json", 39, 0),
                                                    ("cycle3.json", None, 3)])
def test_golden_thresholds(capsys, name, threshold, code):
    assert main(["rt", str(DATA / name), "--verify"]) == code
    out = capsys.readouterr().out
    if threshold is not None:
        data = json.loads(out)
        assert data["threshold"] == threshold and data["verified"] is True
