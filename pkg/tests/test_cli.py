from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from dgmonad.cli import replay, run

BUNDLES = [
    ["dual_numbers", "--field", "F2"],
    ["dual_numbers", "--field", "Q"],
    ["field_extension", "--field", "F9"],
    ["group_action", "--group", "Z3", "--field", "F2"],
    ["group_action", "--group", "Z2", "--field", "F2"],
    ["swap_action"],
    ["bousfield", "--field", "F3"],
]


def _run(argv):
    buf = io.StringIO()
    code = run(argv, out=buf)
    return code, buf.getvalue()


def _emit(tmp_path, args):
    d = tmp_path / "_".join(a.strip("-") for a in args)
    code, _ = _run(["example", *args, "--emit", str(d)])
    assert code == 0
    return d


@pytest.mark.parametrize("args", BUNDLES, ids=lambda a: "-".join(x.strip("-") for x in a))
def test_bundles_replay(tmp_path, args):
    d = _emit(tmp_path, args)
    results = replay(d)
    assert results and all(r["ok"] for r in results), results


def test_exit_codes(tmp_path):
    d = _emit(tmp_path, ["group_action", "--group", "Z2", "--field", "F2"])
    ws = str(d / "workspace.json")
    assert _run(["check-monad", ws, "--monad", "M"])[0] == 0
    code, out = _run(["separable", ws, "--monad", "M"])
    assert code == 1 and json.loads(out)["status"] == "infeasible"
    code, out = _run(["check-monad", ws, "--monad", "nope"])
    assert code == 2 and json.loads(out)["status"] == "error"
    assert _run(["check-monad", str(tmp_path / "missing.json"), "--monad", "M"])[0] == 2
    assert _run(["no-such-command"])[0] == 2
    assert _run(["--version"])[0] == 0


def test_report_shape_and_determinism(tmp_path):
    d = _emit(tmp_path, ["dual_numbers", "--field", "F3"])
    argv = ["em-hom", str(d / "workspace.json"), "--source", "B", "--target", "B"]
    reports = []
    for _ in range(2):
        code, out = _run(argv)
        assert code == 0
        rep = json.loads(out)
        assert {"status", "checks", "data", "elapsed_ms"} <= set(rep)
        assert all("witness" in c for c in rep["checks"])
        rep.pop("elapsed_ms")
        reports.append(rep)
    assert reports[0] == reports[1]


def test_bousfield_needs_functor_and_unit(tmp_path):
    d = _emit(tmp_path, ["bousfield", "--field", "F2"])
    code, out = _run(["bousfield", str(d / "workspace.json"), "--functor", "L"])
    assert code == 2


def test_human_output(tmp_path):
    d = _emit(tmp_path, ["swap_action"])
    code, out = _run(["check-monad", str(d / "workspace.json"), "--monad", "M", "--human"])
    assert code == 0
    assert out.splitlines()[0].endswith("pass")
    assert "elapsed" in out
    code, out = _run(["check-monad", str(d / "nothing.json"), "--monad", "M", "--human"])
    assert code == 2 and out.startswith("error [io]")


@pytest.mark.parametrize("argv", [
    ["complexes-commute", "--algebra", "k", "--field", "F3"],
    ["complexes-commute", "--algebra", "dual", "--field", "F2", "--bound", "1"],
    ["complexes-commute", "--algebra", "extension", "--field", "F2", "--degree", "2"],
])
def test_complexes_commute_command(argv):
    code, out = _run(argv)
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "dgmonad.cli", "complexes-commute", "--bound", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "pass"
    proc = subprocess.run([sys.executable, "-m", "dgmonad.cli", "complexes-commute", "--bound", "9"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
