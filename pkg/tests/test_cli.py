import io
import json
from pathlib import Path

import pytest

from gogkit import fixtures as fx
from gogkit.cli import main
from gogkit.isomorphisms import iso_equal
from gogkit.serialize import dump_gog, load_gog, load_iso, loads

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", DATA / "FIX-A.gog.json")
    assert code == 0 and json.loads(out)["valid"] is True
    assert run(capsys, "validate", DATA / "FIX-B.iso.json")[0] == 0


def test_validate_reports_bad_dart(capsys, tmp_path):
    doc = json.loads(dump_gog(fx.fix_a()))
    for d in doc["payload"]["darts"]:
        if d["name"] == "e":
            d["bar"] = "e"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "--format", "text", "validate", bad)
    assert code == 1 and "FAIL" in out and "'e'" in out


def test_malformed_input_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "gog",\n "payload": ')
    code, _, err = run(capsys, "validate", bad)
    assert code == 2 and "line" in err
    assert run(capsys, "validate", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "reduce", DATA / "FIX-A.gog.json", "--word", "a t[")[0] == 2


def test_stdin_and_text_format(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO((DATA / "FIX-A.gog.json").read_text()))
    code, out, _ = run(capsys, "--format", "text", "reduce", "-", "--word", "a t[e] a^2 t[~e]")
    assert code == 0 and out.strip() == "a t[e] a^2 t[~e]"
    code, out, _ = run(capsys, "--format", "text", "reduce", DATA / "FIX-B.gog.json", "--word", "t[e] c t[~e]")
    assert code == 0 and out.strip() == "a"


def test_eq(capsys):
    f = DATA / "FIX-B.gog.json"
    assert run(capsys, "eq", f, "--word", "t[e] c t[~e] b", "--other", "a b")[0] == 0
    assert run(capsys, "eq", f, "--word", "a", "--other", "b")[0] == 1


def test_apply_and_inverse(capsys):
    code, out, _ = run(capsys, "--format", "text", "apply", DATA / "FIX-A.iso.json", "--word", "t[e]")
    assert code == 0 and out.strip() == "t[e] a^-1"
    code, out, _ = run(capsys, "--format", "text", "apply", DATA / "FIX-A.iso.json", "--word", "t[e]", "--inverse")
    assert out.strip() == "t[e] a"


def test_compose_and_invert(capsys):
    f = DATA / "FIX-A.iso.json"
    code, out, _ = run(capsys, "compose", f, f)
    assert code == 0
    H = load_iso(out)
    assert H.corrections["e"] == H.domain.group("v").parse("a^2")
    code, out, _ = run(capsys, "invert", f)
    assert code == 0 and load_iso(out).corrections["e"] == H.domain.group("v").parse("a^-1")


def test_dehn_actions(capsys):
    fb = DATA / "FIX-B.iso.json"
    code, out, _ = run(capsys, "dehn", "classify", fb)
    assert code == 0 and json.loads(out)["kind"] == "classical"
    code, out, _ = run(capsys, "dehn", "twistors", fb)
    assert json.loads(out)["z"] == {"e": 1, "~e": -1}
    assert run(capsys, "dehn", "efficient", fb)[0] == 0
    code, out, _ = run(capsys, "dehn", "subdivide", DATA / "FIX-A.iso.json")
    assert code == 0 and "v0@e" in load_iso(out).domain.graph.vertices


def test_hzero(capsys):
    fd = DATA / "FIX-D.iso.json"
    code, out, _ = run(capsys, "hzero", fd, "--word", "x^2", "--inverse")
    assert code == 0 and json.loads(out)["h_zero"] is True
    code, out, _ = run(capsys, "hzero", fd, "--word", "x y", "--inverse")
    assert code == 1 and json.loads(out)["h_zero"] is False
    code, out, _ = run(capsys, "hzero", DATA / "FIX-A.iso.json", "--word", "t[e] a t[~e]")
    assert code == 0 and json.loads(out)["vertex"] == "v"


def test_quotient(capsys):
    code, out, _ = run(capsys, "quotient", DATA / "FIX-C.gog.json", "--subgraph", "v")
    assert code == 0 and load_gog(out).graph.vertices == ("V0", "u")
    code, out, _ = run(capsys, "quotient", "--iso", DATA / "FIX-C.iso.json", "--subgraph", "v")
    assert code == 0 and load_iso(out).domain.graph.vertices == ("V0", "u")
    assert run(capsys, "quotient", DATA / "FIX-C.gog.json", "--subgraph", "nowhere")[0] == 2
    assert run(capsys, "quotient", "--subgraph", "v")[0] == 2


def test_plan_and_blowup(capsys, tmp_path):
    fd = DATA / "FIX-D.iso.json"
    code, out, _ = run(capsys, "plan", fd)
    assert code == 0 and loads(out)["kind"] == "plan"
    plan = tmp_path / "plan.json"
    plan.write_text(out)
    code, out, _ = run(capsys, "blowup", fd, "--plan", plan)
    assert code == 0
    H = load_iso(out)
    code2, out2, _ = run(capsys, "blowup", fd)
    assert code2 == 0 and iso_equal(load_iso(out2), H)
    code, out, _ = run(capsys, "plan", DATA / "FIX-D-xy.iso.json")
    assert code == 1 and json.loads(out)["error"] == "NotLocallyZero"
    assert run(capsys, "blowup", DATA / "FIX-A.iso.json")[0] == 2


def test_partial_blowup(capsys):
    code, out, _ = run(capsys, "--format", "text", "partial-blowup", DATA / "FIX-D.iso.json")
    assert code == 0 and out.startswith("ok:")
    assert run(capsys, "partial-blowup", DATA / "FIX-D-xy.iso.json")[0] == 1


def test_roundtrip(capsys):
    code, out, _ = run(capsys, "roundtrip", DATA / "FIX-C.gog.json", DATA / "FIX-C.iso.json", "--subgraph", "v")
    assert code == 0 and json.loads(out)["roundtrip"] is True
    assert run(capsys, "roundtrip", DATA / "FIX-A.gog.json", DATA / "FIX-C.iso.json", "--subgraph", "v")[0] == 2


@pytest.mark.parametrize("argv", [["--help"], ["validate", "--help"]])
def test_help_exits_zero(capsys, argv):
    assert run(capsys, *argv)[0] == 0


def test_console_script():
    import shutil
    import subprocess

    exe = shutil.which("gog")
    if exe is None:
        pytest.skip("package not installed")
    res = subprocess.run([exe, "--format", "text", "validate", str(DATA / "FIX-C.iso.json")],
                         capture_output=True, text=True, env={"GOG_COLOR": "0", "PATH": ""})
    assert res.returncode == 0 and res.stdout.startswith("ok:")
