import json
import subprocess
import sys

import pytest

from biparcel_tv.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None), out


@pytest.fixture
def files(tmp_path, capsys):
    paths = {}
    for name, argv in {
        "s4": ["generate", "boundary_4_simplex"],
        "s4s4": ["generate", "boundary_4_simplex+boundary_4_simplex"],
        "disk": ["generate", "sphere_join_unknot_disk"],
        "triv": ["construct", "trivial"],
        "z2": ["construct", "vec", "--group", "z2"],
        "fib": ["construct", "fibonacci"],
        "defect": ["construct", "pointed", "--group", "z2", "--cocycle", "nontrivial", "--base", "chain3"],
    }.items():
        p = tmp_path / f"{name}.json"
        assert main(argv + ["--out", str(p)]) == 0
        paths[name] = p
    capsys.readouterr()
    return paths


def test_validate(files, capsys, tmp_path):
    code, out, _ = run(capsys, "validate", files["triv"])
    assert code == 0 and out["ok"]
    data = json.loads(files["z2"].read_text())
    for s in data["simples"]:
        if s["id"] == "1":
            s["dim_re"] = 2
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(data))
    code, out, _ = run(capsys, "validate", broken)
    assert code == 1
    assert "completeness" in [c["name"] for c in out["validate"]["checks"] if not c["passed"]]
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out, _ = run(capsys, "validate", bad)
    assert code == 2 and out["error"] == "invalid-argument"


def test_invariant(files, capsys):
    code, out, _ = run(capsys, "invariant", files["triv"], files["s4"])
    assert code == 0 and (out["re"], out["im"]) == (1, 0)
    _, out, _ = run(capsys, "invariant", files["z2"], files["s4"])
    assert (out["re"], out["im"], out["colorings_counted"]) == (0.5, 0, 16)
    _, out, _ = run(capsys, "invariant", files["z2"], files["s4s4"])
    assert out["re"] == 0.25


def test_invariant_delta_inconsistent(files, capsys, tmp_path):
    p = tmp_path / "chain2.json"
    assert main(["construct", "pointed", "--base", "chain2", "--out", str(p)]) == 0
    code, out, _ = run(capsys, "invariant", p, files["disk"])
    assert code == 1 and out["error"] == "delta-inconsistent"


def test_moves_check(files, capsys):
    code, out, _ = run(capsys, "moves-check", files["triv"], files["s4"], "--moves", 5, "--seed", 1)
    assert code == 0 and out["max_deviation"] == 0 and len(out["trace"]) == 6
    code, out, _ = run(capsys, "moves-check", files["fib"], files["s4"], "--moves", 3, "--move-set", "bulk")
    assert code == 0 and out["ok"]
    code, out, _ = run(capsys, "moves-check", files["defect"], files["disk"], "--sequence", "2-6,6-2")
    assert code == 0 and out["ok"]


def test_moves_check_seeded_is_reproducible(files, capsys):
    a = run(capsys, "moves-check", files["z2"], files["s4"], "--moves", 3, "--seed", 9)[2]
    b = run(capsys, "moves-check", files["z2"], files["s4"], "--moves", 3, "--seed", 9)[2]
    assert a == b


def test_moves_check_inapplicable(files, capsys):
    code, out, _ = run(capsys, "moves-check", files["z2"], files["s4"], "--sequence", "2-3")
    assert code == 3 and out["error"] == "inapplicable-site"


def test_generate(capsys):
    code, out, _ = run(capsys, "generate", "boundary_4_simplex")
    assert code == 0 and len(out["tets"]) == 5
    code, out, _ = run(capsys, "generate", "lens_space")
    assert code == 2


def test_generate_roundtrip_is_byte_identical(files, capsys):
    for name in ("s4", "disk"):
        code, _, text = run(capsys, "subdivide", files[name])
        assert code == 0
    from biparcel_tv.complex import DirectedTriangulation
    from biparcel_tv.io import dumps, load

    for name in ("s4", "s4s4", "disk"):
        text = files[name].read_text()
        assert dumps(DirectedTriangulation.from_json(load(files[name])).to_json()) == text


def test_construct(files, capsys):
    code, out, _ = run(capsys, "validate", files["defect"])
    assert code == 0
    code, out, _ = run(capsys, "construct", "pointed", "--group", "z2", "--cocycle", "nontrivial", "--base", "chain2")
    assert code == 0 and len(out["simples"]) == 3
    code, out, _ = run(capsys, "construct", "sharp", "--c", "trivial", "--groupoid", "z2")
    assert code == 0 and out["kind"] == "bicategory"
    assert sorted(s["id"] for s in out["simples"]) == ["1.0", "1.1"]
    assert {(f["a"], f["b"], f["c"]) for f in out["fusion"]} == {
        ("1.0", "1.0", "1.0"), ("1.0", "1.1", "1.1"), ("1.1", "1.0", "1.1"), ("1.1", "1.1", "1.0")}
    code, out, _ = run(capsys, "construct", "vec", "--group", "q8")
    assert code == 2


def test_construct_rejects_non_cocycle(capsys, tmp_path):
    from biparcel_tv import constructions as cons

    c = cons.standard_cocycle(2).to_json()
    for row in c["values"]:
        if (row["g"], row["h"], row["k"]) == ("1", "0", "1"):
            row["re"] = -1
    p = tmp_path / "cochain.json"
    p.write_text(json.dumps(c))
    code, out, _ = run(capsys, "construct", "pointed", "--cocycle", p)
    assert code == 1 and out["error"] == "invalid-cocycle"


def test_oracle(files, capsys):
    code, out, _ = run(capsys, "oracle-dw", files["s4"], "--group", "z3")
    assert code == 0 and out["agree"] and abs(out["oracle"]["re"] - 1 / 3) < 1e-12
    code, out, _ = run(capsys, "oracle-dw", files["disk"])
    assert code == 3 and out["error"] == "unsupported"


def test_tolerance_flag_and_env(files, capsys, monkeypatch):
    _, out, _ = run(capsys, "invariant", files["z2"], files["s4"], "--tolerance", "1e-6")
    assert out["tolerance"] == 1e-6
    monkeypatch.setenv("BIPARCEL_TV_TOLERANCE", "1e-5")
    _, out, _ = run(capsys, "invariant", files["z2"], files["s4"])
    assert out["tolerance"] == 1e-5
    code, _, _ = run(capsys, "invariant", files["z2"], files["s4"], "--threads", "0")
    assert code == 2


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "biparcel_tv.cli", "invariant", str(files["triv"]), str(files["s4"])],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["re"] == 1
