import json
import subprocess
import sys

import numpy as np
import pytest

from qpure import channels as chn
from qpure import fileformat as ff
from qpure.cli import main
from qpure.geometry import wcd
from qpure.purify import product_bound
from qpure.setanalysis import counter_example
from qpure.states import random_density, trace_distance


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def files(tmp_path):
    def make(name, obj):
        path = tmp_path / name
        ff.write(path, obj)
        return path

    return make


class TestGen:
    def test_pure_qubit(self, capsys, tmp_path):
        out = tmp_path / "s.json"
        assert run(capsys, "gen", "--dim", 2, "--rank", 1, "--seed", 1, "--out", out)[0] == 0
        rho = ff.read_state(out)
        assert rho.dim == 2 and rho.rank == 1

    def test_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "gen", "--dim", 4, "--rank", 2, "--seed", 9, "--out", a)
        run(capsys, "gen", "--dim", 4, "--rank", 2, "--seed", 9, "--out", b)
        assert a.read_bytes() == b.read_bytes()

    def test_matches_library(self, capsys):
        _, out = run(capsys, "gen", "--dim", 3, "--rank", 2, "--seed", 5)
        assert out == ff.dumps(random_density(3, 2, 5))

    def test_rank_too_large(self, capsys):
        assert run(capsys, "gen", "--dim", 2, "--rank", 3, "--seed", 0)[0] == 2

    def test_missing_argument(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["gen", "--dim", "2"])
        assert exc.value.code == 2


class TestAnalyze:
    def test_counter_example(self, capsys, files):
        rho1, rho2 = counter_example(0.25)
        code, report = run_json(capsys, "analyze", files("a.json", rho1), files("b.json", rho2))
        assert code == 0
        assert report["wcd"] == pytest.approx(0.7071067812, abs=1e-8)
        assert report["trace_distance"] == pytest.approx(0.75, abs=1e-10)
        assert report["two_state_criterion"] == "not"
        assert set(report) == {"trace_distance", "wcd", "jordan_angles", "p_med", "p_wcd", "two_state_criterion"}

    def test_identical(self, capsys, files):
        path = files("a.json", random_density(3, 2, 1))
        _, report = run_json(capsys, "analyze", path, path)
        assert report["trace_distance"] == 0 and report["wcd"] == 0
        assert report["two_state_criterion"] == "essentially_pure_or_orthogonal"

    def test_orthogonal_pure(self, capsys, files):
        _, report = run_json(
            capsys, "analyze", files("a.json", np.array([1.0, 0])), files("b.json", np.array([0, 1.0]))
        )
        assert report["trace_distance"] == pytest.approx(1.0)
        assert report["wcd"] == pytest.approx(1.0)

    def test_dimension_mismatch(self, capsys, files):
        code, _ = run(capsys, "analyze", files("a.json", random_density(2, 1, 1)), files("b.json", random_density(3, 1, 1)))
        assert code == 2

    def test_malformed(self, capsys, tmp_path, files):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        assert run(capsys, "analyze", bad, files("a.json", random_density(2, 1, 1)))[0] == 3


class TestPurify:
    def test_output_passes_check(self, capsys, files, tmp_path):
        rho1, rho2 = random_density(4, 2, 3), random_density(4, 1, 4)
        out = tmp_path / "ch.json"
        code, report = run_json(capsys, "purify", files("a.json", rho1), files("b.json", rho2), "--out", out)
        assert code == 0
        assert report["achieved_distance"] == pytest.approx(wcd(rho1, rho2), abs=1e-8)
        code, check = run_json(capsys, "check", out)
        assert code == 0 and check["ok"] and check["deviation"] <= 1e-8
        ch = ff.read_channel(out)
        o1, o2 = chn.apply(ch, rho1), chn.apply(ch, rho2)
        assert trace_distance(o1, o2) == pytest.approx(report["achieved_distance"], abs=1e-8)

    def test_pure_pair(self, capsys, files, tmp_path):
        a, b = random_density(3, 1, 1), random_density(3, 1, 2)
        _, report = run_json(capsys, "purify", files("a.json", a), files("b.json", b), "--out", tmp_path / "c.json")
        assert report["achieved_distance"] == pytest.approx(trace_distance(a, b), abs=1e-8)

    def test_overlapping_supports(self, capsys, files, tmp_path):
        a, b = random_density(3, 3, 1), random_density(3, 2, 2)
        out = tmp_path / "c.json"
        _, report = run_json(capsys, "purify", files("a.json", a), files("b.json", b), "--out", out)
        assert report["achieved_distance"] == 0
        assert chn.channels_equal(ff.read_channel(out), chn.constant_channel(np.eye(3)[0], 3))

    def test_counter_example(self, capsys, files, tmp_path):
        rho1, rho2 = counter_example(0.25)
        _, report = run_json(capsys, "purify", files("a.json", rho1), files("b.json", rho2), "--out", tmp_path / "c.json")
        assert report["achieved_distance"] == pytest.approx(np.sqrt(0.5), abs=1e-8)


class TestCheckApply:
    def test_invalid_channel(self, capsys, files):
        bad = chn.KrausChannel(2, 2, (np.eye(2) / 2,))
        code, report = run_json(capsys, "check", files("c.json", bad))
        assert code == 1 and not report["ok"]

    def test_apply(self, capsys, files):
        x = chn.unitary_channel(np.array([[0, 1], [1, 0]]))
        code, out = run(capsys, "apply", files("c.json", x), files("s.json", np.array([1.0, 0])))
        assert code == 0
        np.testing.assert_allclose(ff.loads(out).matrix, np.diag([0, 1]))

    def test_apply_dimension_mismatch(self, capsys, files):
        code, _ = run(capsys, "apply", files("c.json", chn.identity_channel(2)), files("s.json", random_density(3, 1, 1)))
        assert code == 2

    def test_apply_wrong_kind(self, capsys, files):
        state = files("s.json", random_density(2, 1, 1))
        assert run(capsys, "apply", state, state)[0] == 3


class TestBound:
    def test_equal_sigmas(self, capsys, files):
        rho1, rho2 = random_density(3, 1, 1), random_density(3, 2, 2)
        sigma = files("s.json", random_density(2, 2, 3))
        code, report = run_json(capsys, "bound", files("a.json", rho1), files("b.json", rho2), sigma, sigma)
        assert code == 0 and report["holds"]
        assert report["rhs"] == pytest.approx(wcd(rho1, rho2) ** 2, abs=1e-12)

    def test_matches_library(self, capsys, files):
        states = [random_density(3, 2, 1), random_density(3, 2, 2), random_density(2, 1, 3), random_density(2, 2, 4)]
        paths = [files(f"{i}.json", s) for i, s in enumerate(states)]
        _, report = run_json(capsys, "bound", *paths)
        lhs, rhs = product_bound(*states)
        assert report["lhs"] == pytest.approx(lhs, abs=1e-12) and report["rhs"] == pytest.approx(rhs, abs=1e-12)


class TestUsd:
    def test_identical(self, capsys, files):
        path = files("s.json", random_density(3, 2, 1))
        code, report = run_json(capsys, "usd", path, path)
        assert code == 1 and report["feasible"] is False

    def test_feasible(self, capsys, files):
        code, report = run_json(
            capsys, "usd", files("a.json", np.array([1.0, 0])), files("b.json", np.array([1.0, 1]) / np.sqrt(2))
        )
        assert code == 0 and report["feasible"] is True

    def test_single_state(self, capsys, files):
        assert run(capsys, "usd", files("a.json", np.array([1.0, 0])))[0] == 2


class TestCounterexample:
    def test_default(self, capsys, tmp_path):
        out1, out2 = tmp_path / "1.json", tmp_path / "2.json"
        code, report = run_json(capsys, "counterexample", "--out1", out1, "--out2", out2)
        assert code == 0
        assert report["wcd"] == pytest.approx(0.7071067812, abs=1e-8)
        assert report["two_state_criterion"] == "not"
        rho1, _ = counter_example(0.25)
        assert out1.read_text() == ff.dumps(rho1)

    def test_bad_p(self, capsys):
        assert run(capsys, "counterexample", "--p", 0.5)[0] == 2


def test_module_entry_point(tmp_path):
    out = tmp_path / "s.json"
    proc = subprocess.run(
        [sys.executable, "-m", "qpure", "gen", "--dim", "2", "--rank", "1", "--seed", "1", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert ff.read_state(out).rank == 1
