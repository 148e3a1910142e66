import json
import subprocess
import sys

import pytest

from exactlab.cli import CliError, parse_spec, run

A2 = "algebra dynkin\nvertices 2\narrow a 1 2\n"
A3 = "algebra dynkin\nvertices 3\narrow a 1 2\narrow b 2 3\n"
KRON = "algebra kronecker\nlabels 0 1 inf\nbound 6\n"


@pytest.fixture
def spec(tmp_path):
    def write(text, name="alg.spec"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def call(*argv):
    code, out = run(list(argv))
    return code, (json.loads(out) if out.lstrip().startswith(("{", "[")) else out)


def test_parse_spec():
    s = parse_spec(A2)
    assert s.kind == "dynkin" and s.vertices == 2 and s.arrows == [("a", 1, 2)]
    k = parse_spec("# comment\n" + KRON)
    assert k.kind == "kronecker" and k.labels == ("0", "1", "inf") and k.bound == 6


@pytest.mark.parametrize("text,line", [
    ("vertices 3\n", 1),
    ("algebra dynkin\nvertices 2\narrow a 1 5\n", 3),
    ("algebra dynkin\nvertices x\n", 2),
    ("algebra kronecker\nbound 0\n", 2),
    ("algebra dynkin\nvertices 2\nlabels 0\n", 3),
    ("algebra weird\n", 1),
])
def test_parse_errors_carry_lines(text, line):
    with pytest.raises(CliError) as exc:
        parse_spec(text)
    assert exc.value.line == line


def test_non_dynkin_named():
    with pytest.raises(CliError, match="not a Dynkin quiver"):
        parse_spec("algebra dynkin\nvertices 3\narrow a 1 2\narrow b 2 3\narrow c 3 1\n")


def test_indecs(spec):
    code, out = call("--spec", spec(A2), "indecs")
    assert code == 0 and len(out) == 3
    assert out[1] == {"id": "m1", "dims": [0, 1], "projective": True, "injective": False,
                      "tau": None, "tau_inv": "m2"}


def test_ar_dot_and_json(spec):
    code, out = call("--spec", spec(A3), "ar", "--dot")
    assert code == 0 and out.startswith("digraph AR")
    code, out = call("--spec", spec(A3), "ar")
    assert [s["start"] for s in out["sequences"]] == ["m1", "m2", "m3"]


def test_enumerate(spec):
    code, out = call("--spec", spec(A3), "enumerate")
    assert code == 0 and out["count"] == 8 and out["oracle_agrees"]
    assert out["structures"][0] == ["m0", "m4", "m5"]


def test_generate(spec, tmp_path):
    conf = {"left": {"dims": [0, 0, 1]}, "middle": {"dims": [0, 1, 1], "maps": {"b": [[1]]}},
            "right": {"dims": [0, 1, 0]}, "mono": [[], [[]], [[1]]], "epi": [[], [[1]], []]}
    (tmp_path / "c.json").write_text(json.dumps(conf))
    code, out = call("--spec", spec(A3), "generate", "--conflation", str(tmp_path / "c.json"))
    assert code == 0 and out["missing"] == ["m2"]
    conf["epi"] = [[], [[0]], []]
    (tmp_path / "c.json").write_text(json.dumps(conf))
    code, out = call("--spec", spec(A3), "generate", "--conflation", str(tmp_path / "c.json"))
    assert code == 2 and "not a kernel-cokernel pair" in out["error"]


def test_relext(spec):
    code, out = call("--spec", spec(A3), "relext", "--structure", "top")
    assert code == 0 and len(out["rows"]) == 36
    assert all(r["status"] == "ok" for r in out["rows"])
    code, out = call("--spec", spec(A3), "relext", "--structure", "m0,m1,m3,m4,m5", "--csv")
    lines = out.splitlines()
    assert lines[0] == "x,y,rel_ext,ext,hom_tau_mod_I,hom_tauinv_mod_P,status" and len(lines) == 37
    assert "m3,m2,1,1,1,1,ok" in lines
    code, out = call("--spec", spec(A3), "relext", "--structure", "m1")
    assert code == 2


def test_ideal_expressions(spec, tmp_path):
    path = spec(A3)
    code, out = call("--spec", path, "ideal", "rad^2")
    assert code == 0 and out["total_dim"] == 3 and not out["fp_idempotent"]
    assert call("--spec", path, "ideal", "rad^w")[1]["total_dim"] == 0
    assert call("--spec", path, "ideal", "rad^(w+1)")[1]["total_dim"] == 0
    out = call("--spec", path, "ideal", "add{m0,m5}")[1]
    assert out["fp_idempotent"] and out["U"] == ["m0", "m5"]
    out = call("--spec", path, "ideal", "(add{m1} + add{m3}) & all")[1]
    assert out["U"] == ["m1", "m3"]
    assert call("--spec", path, "ideal", "rad*rad")[1]["total_dim"] == 3
    (tmp_path / "g.json").write_text(json.dumps([{"source": "m2", "target": "m0", "coords": [1]}]))
    out = call("--spec", path, "ideal", "gen(g.json)")[1]
    assert out["total_dim"] == 1
    assert call("--spec", path, "ideal", "rad^")[0] == 2
    assert call("--spec", path, "ideal", "add{m9}")[0] == 2


def test_verify(spec):
    code, out = call("--spec", spec(A3), "verify", "theoremD")
    assert code == 0 and out["passed"] and out["details"]["fp_idempotent_ideals"] == 64
    code, out = call("--spec", spec(A3), "verify", "arformula")
    assert code == 0 and out["checks"] == 576
    assert call("--spec", spec(A3), "verify", "kronecker56")[0] == 2
    assert call("--spec", spec(A3), "verify", "nosuch")[0] == 2


def test_kron(spec):
    path = spec(KRON)
    code, out = call("--spec", path, "kron", "closedset", "radP")
    assert code == 0 and out == {"adic": ["0", "1", "inf"], "finite": [], "generic": True, "prufer": []}
    assert call("--spec", path, "kron", "closedset", "ist::")[0] == 2
    code, out = call("--spec", path, "kron", "tau", "Q(1)")
    assert code == 2
    code, out = call("--spec", path, "kron", "tau", "Q1")
    assert code == 0 and out["tau"] == "Q3"
    code, out = call("--spec", path, "kron", "radc", "P1", "Q2", "--through", "R(0,1);R(0,2);R(0,3)", "--depth", "6")
    assert out["verdict"] == "out"
    code, out = call("--spec", path, "kron", "almostexact", "inf")
    assert code == 0 and out["passed"] and not out["splits"]
    assert call("--spec", path, "indecs")[0] == 2


def test_determinism(spec):
    path = spec(A3)
    assert run(["--spec", path, "enumerate"]) == run(["--spec", path, "enumerate"])
    assert run(["--spec", path, "ar", "--dot"]) == run(["--spec", path, "ar", "--dot"])


def test_usage_errors(spec):
    assert call("--spec", spec(A2), "frob")[0] == 2
    assert call("--spec", "/nonexistent/file", "indecs")[0] == 2
    code, out = call("--spec", spec("vertices 3\n"), "indecs")
    assert code == 2 and out["line"] == 1


def test_console_entry(spec):
    proc = subprocess.run([sys.executable, "-m", "exactlab.cli", "--spec", spec(A2), "indecs"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and len(json.loads(proc.stdout)) == 3
