import io
import json
import subprocess
import sys

import pytest

from conftest import P1, SUM_LOOP
from osrlab.cli import UsageError, main, parse_store
from osrlab.cli.stepper import Stepper, interact, replay
from osrlab.ir import Store, parse_program
from osrlab.multiver import build_multiprogram
from osrlab.osr import OsrMapping


@pytest.fixture
def p1_file(tmp_path):
    path = tmp_path / "p1.osr"
    path.write_text(P1 + "\n")
    return str(path)


@pytest.fixture
def loop_file(tmp_path):
    path = tmp_path / "loop.osr"
    path.write_text(SUM_LOOP + "\n")
    return str(path)


def cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestBasics:
    def test_run(self, capsys, p1_file):
        assert cli(capsys, "run", p1_file, "--in", "X=5") == (0, "Completed {Y:8}\n", "")

    def test_run_out_of_fuel_exits_1(self, capsys, loop_file):
        code, out, _ = cli(capsys, "run", loop_file, "--in", "N=100", "--fuel", "5")
        assert code == 1 and out.startswith("FuelExhausted")

    def test_check_ok(self, capsys, p1_file):
        assert cli(capsys, "check", p1_file)[:2] == (0, "ok: 4 instructions, in X, out Y\n")

    def test_check_reports_line(self, capsys, tmp_path):
        bad = tmp_path / "bad.osr"
        bad.write_text("in X\nV := 3 +\nout V\n")
        code, _, err = cli(capsys, "check", str(bad))
        assert code == 2 and "line 2" in err

    def test_missing_file(self, capsys, tmp_path):
        assert cli(capsys, "check", str(tmp_path / "nope.osr"))[0] == 2

    def test_unknown_flag(self, capsys, p1_file):
        with pytest.raises(SystemExit) as err:
            main(["run", p1_file, "--bogus"])
        assert err.value.code == 2

    @pytest.mark.parametrize("pairs", [["X"], ["X=five"], ["X=1", "X=2"]])
    def test_bad_store(self, pairs):
        with pytest.raises(UsageError):
            parse_store(pairs)

    def test_parse_store(self):
        assert parse_store(["X=5", "Y=-2"]) == Store({"X": 5, "Y": -2})

    def test_console_script(self, p1_file):
        done = subprocess.run([sys.executable, "-m", "osrlab.cli", "run", p1_file, "--in", "X=2"],
                              capture_output=True, text=True)
        assert (done.returncode, done.stdout) == (0, "Completed {Y:5}\n")


class TestTransform:
    def test_nothing_matched_exits_1(self, capsys, p1_file):
        code, _, err = cli(capsys, "transform", p1_file, "--passes", "dce")
        assert code == 1 and "dce: no match" in err

    def test_cp_dce_json(self, capsys, p1_file):
        code, out, _ = cli(capsys, "transform", p1_file, "--passes", "cp,dce", "--dump-mapping")
        data = json.loads(out)
        assert code == 0
        assert data["program"] == ["in X", "skip", "Y := 3 + X", "out Y"]
        assert data["applied"] == ["cp", "dce"]
        bwd = data["mappings"][1]
        assert (bwd["src_version"], bwd["dst_version"]) == (2, 1)
        assert bwd["entries"][2]["comp"] == ["in X", "V := 3", "out V X"]

    def test_pad(self, capsys, loop_file):
        code, out, _ = cli(capsys, "pad", loop_file, "--at", "5")
        assert code == 0
        padded = parse_program(out)
        assert padded[9].target == 6 and len(padded) == 10

    def test_pad_out_of_range(self, capsys, p1_file):
        assert cli(capsys, "pad", p1_file, "--at", "1")[0] == 2


class TestAnalyze:
    def test_live(self, capsys, p1_file):
        assert cli(capsys, "analyze", p1_file, "live", "--point", "3")[1] == "3: {V, X}\n"

    def test_urdef(self, capsys, p1_file):
        assert cli(capsys, "analyze", p1_file, "urdef", "--point", "3", "--var", "V")[1] == "3: 2\n"

    def test_ctl_formula(self, capsys, p1_file):
        code, out, _ = cli(capsys, "analyze", p1_file, "sat", "--formula", "(fwd-EX (use Y))")
        assert code == 0 and "3" in out


class TestOsrPoints:
    def test_backward_classes(self, capsys, p1_file):
        code, out, _ = cli(capsys, "osr-points", p1_file, "--passes", "cp,dce",
                           "--direction", "bwd")
        data = json.loads(out)
        assert code == 0
        assert [p["class"] for p in data["points"]] == [
            "EmptyComp", "EmptyComp", "FeasibleLive", "EmptyComp"]

    def test_output_is_byte_stable(self, capsys, p1_file):
        first = cli(capsys, "osr-points", p1_file, "--passes", "cp,dce")[1]
        assert cli(capsys, "osr-points", p1_file, "--passes", "cp,dce")[1] == first


class TestMultiVersion:
    def test_mv_run_with_history(self, capsys, p1_file):
        code, out, _ = cli(capsys, "mv-run", p1_file, "--passes", "cp,dce", "--in", "X=5",
                           "--policy", "always@3>2", "--history", "-")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "Completed {Y:8}"
        assert json.loads(lines[1]) == {"step": 2, "kind": "osr", "from": 1, "to": 2, "point": 3}

    def test_determinism(self, capsys, p1_file):
        code, out, _ = cli(capsys, "determinism", p1_file, "--passes", "cp,dce", "--in", "X=5")
        assert code == 0 and out.startswith("{X:5}: Deterministic Completed {Y:8}")

    def test_debug_eval_json(self, capsys):
        code, out, _ = cli(capsys, "debug-eval", "--format", "json")
        data = json.loads(out)
        assert code == 0 and data["modes"] == ["live", "avail"]
        assert data["summary"]["functions"] == len(data["functions"])


class TestStepper:
    @pytest.fixture
    def mp(self, p1):
        return build_multiprogram(p1, ["cp,dce"])

    def test_session_and_log(self, mp):
        out = io.StringIO()
        s = replay(mp, {"X": 5}, ["s", "s", "osr 2", "s", "osr 1", "s", "s", "q"], out)
        assert s.state.store == Store({"Y": 8})
        assert s.log == ["s", "s", "osr 2", "s", "osr 1", "s"]
        assert "execution already completed" in out.getvalue()

    def test_log_replay_reaches_the_same_state(self, mp):
        first = replay(mp, {"X": 5}, ["s 2", "osr 2", "p", "s", "where"], io.StringIO())
        again = replay(mp, {"X": 5}, first.log, io.StringIO())
        assert again.state == first.state

    def test_osr_refused_at_entry(self, mp):
        out = io.StringIO()
        s = replay(mp, {"X": 5}, ["osr 2"], out)
        assert s.log == [] and "input header" in out.getvalue()

    def test_osr_to_a_missing_version(self, mp):
        out = io.StringIO()
        s = replay(mp, {"X": 5}, ["s", "osr 3"], out)
        assert s.log == ["s"] and "no OSR edge from version 1 to 3" in out.getvalue()

    def test_osr_outside_the_mapping_domain(self, mp):
        fwd = mp.labels[(1, 2)]
        entries = {l: v for l, v in fwd.entries.items() if l != 2}
        narrowed = mp.with_label((1, 2), OsrMapping(fwd.src, fwd.dst, entries, fwd.mode))
        out = io.StringIO()
        s = replay(narrowed, {"X": 5}, ["s", "osr 2"], out)
        assert s.log == ["s"] and "not in the mapping domain" in out.getvalue()

    def test_immediate_quit(self, mp):
        s = interact(Stepper(mp, {"X": 5}, io.StringIO()), io.StringIO("q\n"))
        assert s.log == [] and s.state.point == 1

    def test_step_command_writes_log(self, capsys, tmp_path, p1_file):
        script = tmp_path / "cmds"
        script.write_text("s\ns\nosr 2\ns\nq\n")
        log = tmp_path / "log.txt"
        code, out, _ = cli(capsys, "step", p1_file, "--passes", "cp,dce", "--in", "X=5",
                           "--script", str(script), "--log", str(log))
        assert code == 0
        assert log.read_text() == "s\ns\nosr 2\ns\n"
        assert "version 2, point 4: out Y" in out
