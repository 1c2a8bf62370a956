"""CLI contract: subcommands, exit codes, artifacts, and round-trips.

Oracle key: [TRIVIAL] exit codes, usage errors, and file emission;
[DERIVED] extend/peel byte-identities against the shipped fixtures and the
per-step extend chain that rebuilds a peeled lattice from its tower file.
"""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from nilflat import __version__, catalog, fileio
from nilflat.cli import main
from nilflat.tower import NilLattice, peel_tower

DATA = Path(__file__).resolve().parent.parent / "data"


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# [TRIVIAL] version banner and usage failures (argparse exits through
# SystemExit; usage problems are exit 1, never 2).
def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["--version"])
    assert exit_info.value.code == 0
    assert capsys.readouterr().out.strip() == f"nilflat {__version__}"


@pytest.mark.parametrize("argv", [[], ["validate"], ["frobnicate", "x"],
                                  ["validate", "--nope", "x"],
                                  ["certify", str(DATA / "z3.json")]],
                         ids=["empty", "no-path", "bad-command", "bad-flag",
                              "missing-eps"])
def test_usage_exits_one(argv, capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(argv)
    assert exit_info.value.code == 1
    assert "error" in capsys.readouterr().err


# [TRIVIAL] validate: clean lattices pass the whole gate.
def test_validate_h3(capsys):
    code, out, err = run_cli(["validate", str(DATA / "h3.json")], capsys)
    assert code == 0 and err == ""
    for line in ["jacobi: ok", "class: ok", "adapted: ok",
                 "integer_constants: ok", "lattice_closed: ok"]:
        assert line in out
    assert "valid: " in out and "dim 3" in out


# [DERIVED] n4 passes the gate; the strict closure certificate honestly
# fails at class 3 and is reported informationally, not as a failure.
def test_validate_n4_informational(capsys):
    code, out, err = run_cli(["validate", str(DATA / "n4.json")], capsys)
    assert code == 0 and err == ""
    assert "lattice_closed: strict certificate fails" in out
    assert "informational" in out
    assert "valid: " in out


# [PAPER] negative controls: Jacobi violation, non-nilpotency, and
# fractional structure constants are invalid mathematics (exit 2).
@pytest.mark.parametrize("name,fail_line", [
    ("jacobi_bad.json", "jacobi: FAIL"),
    ("so3.json", "class: FAIL"),
    ("h3_scaled.json", "integer_constants: FAIL"),
])
def test_validate_rejects(name, fail_line, capsys):
    code, out, err = run_cli(["validate", str(DATA / name)], capsys)
    assert code == 2
    assert fail_line in out
    assert f"invalid: {DATA / name}" in err


def test_validate_jacobi_witness_names_triple(capsys):
    code, out, _ = run_cli(["validate", str(DATA / "jacobi_bad.json")], capsys)
    assert code == 2
    assert "Jacobi fails on (e" in out


# [TRIVIAL] I/O problems are exit 1 with a one-line diagnostic.
def test_validate_missing_file(tmp_path, capsys):
    code, _, err = run_cli(["validate", str(tmp_path / "nope.json")], capsys)
    assert code == 1 and err.startswith("nilflat: error:")


def test_validate_malformed_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{\"dim\": 3,", encoding="utf-8")
    code, _, err = run_cli(["validate", str(path)], capsys)
    assert code == 1 and "invalid JSON" in err


# [DERIVED] peel writes the canonical tower file (checked against the
# library) and prints a human note when --out is used.
def test_peel_h3(tmp_path, capsys):
    out = tmp_path / "tower.json"
    code, stdout, err = run_cli(
        ["peel", str(DATA / "h3.json"), "--out", str(out)], capsys)
    assert code == 0 and err == "" and "peeled" in stdout
    expected = fileio.dump_tower(
        peel_tower(NilLattice(algebra=catalog.heisenberg3())))
    assert out.read_text(encoding="utf-8") == expected
    steps = json.loads(expected)["steps"]
    assert [s["base_dim"] for s in steps] == [2, 1, 0]
    assert steps[0]["cocycle"] == [{"i": 1, "j": 2, "num": 1, "den": 1}]


def test_peel_stdout(capsys):
    code, stdout, _ = run_cli(["peel", str(DATA / "z3.json")], capsys)
    assert code == 0
    assert stdout == fileio.dump_tower(
        peel_tower(NilLattice(algebra=catalog.abelian(3))))


# [DERIVED] extend is inverse to peel on the shipped fixtures: the Euler
# cocycles 0/1 over Z^2 rebuild exactly Z^3 / h3, byte for byte.
@pytest.mark.parametrize("cocycle,expected", [
    ("euler_zero_z2.json", "z3.json"),
    ("euler_one_z2.json", "h3.json"),
])
def test_extend_euler_classes(cocycle, expected, tmp_path, capsys):
    out = tmp_path / "ext.json"
    code, stdout, _ = run_cli(
        ["extend", str(DATA / "z2.json"), str(DATA / cocycle),
         "--out", str(out)], capsys)
    assert code == 0 and "extended" in stdout
    assert out.read_text(encoding="utf-8") == \
        (DATA / expected).read_text(encoding="utf-8")


def test_extend_euler_two(capsys):
    code, stdout, _ = run_cli(
        ["extend", str(DATA / "z2.json"), str(DATA / "euler_two_z2.json")],
        capsys)
    assert code == 0
    obj = json.loads(stdout)
    assert obj["dim"] == 3
    assert obj["brackets"] == [
        {"i": 1, "j": 2, "terms": [{"k": 3, "num": 2, "den": 1}]}]


# [PAPER] a non-closed 2-form is rejected with the lexicographically first
# violated orientation named in the witness.
def test_extend_bad_cocycle(capsys):
    code, _, err = run_cli(
        ["extend", str(DATA / "n4.json"), str(DATA / "bad_cocycle_n4.json")],
        capsys)
    assert code == 2
    assert "cocycle condition fails on (e1,e3,e2)" in err


def test_extend_dim_mismatch(capsys):
    code, _, err = run_cli(
        ["extend", str(DATA / "z3.json"), str(DATA / "euler_one_z2.json")],
        capsys)
    assert code == 2 and "does not match" in err


# [DERIVED] full file-level round-trip: peel to a tower file, then rebuild
# the lattice from the point by chaining extend over the stored cocycles.
@pytest.mark.parametrize("name", ["z3.json", "h3.json", "n4.json", "h5.json"])
def test_round_trip_peel_then_extend_chain(name, tmp_path, capsys):
    tower_path = tmp_path / "tower.json"
    assert main(["peel", str(DATA / name), "--out", str(tower_path)]) == 0
    steps = json.loads(tower_path.read_text(encoding="utf-8"))["steps"]

    current = tmp_path / "stage0.json"
    fileio.write_text(current, fileio.dump_algebra(catalog.point()))
    for level, step in enumerate(reversed(steps), start=1):
        cocycle_path = tmp_path / f"cocycle{level}.json"
        fileio.write_text(cocycle_path, fileio.canonical_json(
            {"dim": step["base_dim"], "entries": step["cocycle"]}))
        next_path = tmp_path / f"stage{level}.json"
        assert main(["extend", str(current), str(cocycle_path),
                     "--out", str(next_path)]) == 0
        current = next_path
    capsys.readouterr()
    assert current.read_text(encoding="utf-8") == \
        (DATA / name).read_text(encoding="utf-8")


# [TRIVIAL] curvature: CSV artifact plus sibling JSON summary, with the
# reproducibility envelope carrying version and full config.
def test_curvature_csv_and_summary(tmp_path, capsys):
    out = tmp_path / "run.csv"
    code, stdout, err = run_cli(
        ["curvature", str(DATA / "h3.json"), "--t-max", "1", "--t-min",
         "1e-4", "--t-points", "3", "--samples", "256", "--out", str(out)],
        capsys)
    assert code == 0 and err == ""
    assert "scanned" in stdout and "exponent_fit" in stdout

    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t,sup_abs_K,base_sup_K,bound,diam_bound"
    assert len(lines) == 4
    first = lines[1].split(",")
    assert float(first[0]) == 1.0
    assert float(first[1]) == pytest.approx(0.75, abs=1e-9)

    summary_path = tmp_path / "run.summary.json"
    envelope = json.loads(summary_path.read_text(encoding="utf-8"))
    assert set(envelope) == {"tool", "version", "command", "config", "report"}
    assert envelope["tool"] == "nilflat"
    assert envelope["version"] == __version__
    assert envelope["command"] == "curvature"
    assert envelope["config"]["t_points"] == 3
    assert envelope["config"]["samples"] == 256
    assert envelope["config"]["seed"] == 0
    assert set(envelope["report"]) == {"C", "exponent_fit", "sample_count",
                                       "seed"}


# [DERIVED] h3 JSON summary: excess decays linearly in t, so the fitted
# exponent is 1 within the scan tolerance.
def test_curvature_json_stdout(capsys):
    code, stdout, _ = run_cli(
        ["curvature", str(DATA / "h3.json"), "--t-min", "1e-4",
         "--t-points", "5", "--samples", "256", "--format", "json"], capsys)
    assert code == 0
    envelope = json.loads(stdout)
    assert envelope["report"]["exponent_fit"] == pytest.approx(1.0, abs=0.02)
    assert envelope["config"]["format"] == "json"


# [DERIVED] a tilted metric scans cleanly (its quotient base is still flat).
def test_curvature_tilted_metric(capsys):
    code, stdout, _ = run_cli(
        ["curvature", str(DATA / "h3.json"), "--metric",
         str(DATA / "metric3_tilted.json"), "--t-points", "2", "--t-min",
         "1e-2", "--samples", "256", "--format", "json"], capsys)
    assert code == 0
    envelope = json.loads(stdout)
    assert envelope["config"]["metric"].endswith("metric3_tilted.json")


def test_curvature_metric_dim_mismatch(capsys):
    code, _, err = run_cli(
        ["curvature", str(DATA / "n4.json"), "--metric",
         str(DATA / "metric3_tilted.json"), "--samples", "16",
         "--t-points", "1"], capsys)
    assert code == 2 and "does not match" in err


# [TRIVIAL] run-config invariants are usage errors (exit 1), not math.
@pytest.mark.parametrize("flags", [
    ["--t-min", "0"],
    ["--t-min", "2", "--t-max", "1"],
    ["--t-points", "0"],
    ["--samples", "0"],
], ids=["tmin-zero", "tmax-lt-tmin", "no-points", "no-samples"])
def test_curvature_flag_errors(flags, capsys):
    code, _, err = run_cli(
        ["curvature", str(DATA / "h3.json")] + flags, capsys)
    assert code == 1 and err.startswith("nilflat: error:")


def test_curvature_needs_dim_two(tmp_path, capsys):
    path = tmp_path / "z1.json"
    fileio.write_text(path, fileio.dump_algebra(catalog.abelian(1)))
    code, _, err = run_cli(["curvature", str(path), "--samples", "16",
                            "--t-points", "1"], capsys)
    assert code == 2 and "dim >= 2" in err


# [DERIVED] outside the C-constant's validity window (t <= 1) the bound can
# honestly fail: h3 at t = 100 has sup|K^t| = 75 above the sqrt bound.
def test_curvature_bound_violated_exit_three(capsys):
    code, _, err = run_cli(
        ["curvature", str(DATA / "h3.json"), "--t-max", "100", "--t-min",
         "100", "--t-points", "1", "--samples", "128"], capsys)
    assert code == 3
    assert "exceeds bound" in err


# [TRIVIAL] certify: abelian tower certifies at once with unit fibers.
def test_certify_z3(tmp_path, capsys):
    out = tmp_path / "cert.json"
    code, stdout, err = run_cli(
        ["certify", str(DATA / "z3.json"), "--eps", "1e-6",
         "--out", str(out)], capsys)
    assert code == 0 and err == "" and "certified" in stdout
    envelope = json.loads(out.read_text(encoding="utf-8"))
    assert envelope["command"] == "certify"
    report = envelope["report"]
    assert report["ts"] == [1.0, 1.0, 1.0]
    assert report["sup_abs_K"] == 0.0
    assert report["diam_bound"] == pytest.approx(1.5, abs=1e-12)


# [DERIVED] certify h3: accepted top collapse lands near 4*eps/3.
def test_certify_h3(capsys):
    code, stdout, _ = run_cli(
        ["certify", str(DATA / "h3.json"), "--eps", "0.01",
         "--samples", "512"], capsys)
    assert code == 0
    report = json.loads(stdout)["report"]
    target = 4.0 * 0.01 / 3.0
    assert abs(report["ts"][0] - target) <= 0.1 * target
    assert report["sup_abs_K"] <= 0.01
    assert report["curved_levels"] == [3]


# [TRIVIAL] certify flag validation.
@pytest.mark.parametrize("flags", [["--eps", "-1"], ["--eps", "0"],
                                   ["--eps", "0.1", "--samples", "0"]],
                         ids=["neg-eps", "zero-eps", "no-samples"])
def test_certify_flag_errors(flags, capsys):
    code, _, err = run_cli(["certify", str(DATA / "z3.json")] + flags, capsys)
    assert code == 1 and err.startswith("nilflat: error:")


def test_certify_missing_metric(tmp_path, capsys):
    code, _, err = run_cli(
        ["certify", str(DATA / "z3.json"), "--eps", "0.1",
         "--metric", str(tmp_path / "nope.json")], capsys)
    assert code == 1


# [DERIVED] identical invocations from different directories produce
# byte-identical artifacts (the embedded config only sees the flags).
def test_curvature_determinism_across_cwd(tmp_path, monkeypatch, capsys):
    results = []
    for sub in ("a", "b"):
        workdir = tmp_path / sub
        workdir.mkdir()
        monkeypatch.chdir(workdir)
        code = main(["curvature", str(DATA / "n4.json"), "--t-points", "3",
                     "--t-min", "1e-3", "--samples", "256",
                     "--out", "run.csv"])
        assert code == 0
        results.append((workdir / "run.csv").read_bytes()
                       + (workdir / "run.summary.json").read_bytes())
    capsys.readouterr()
    assert results[0] == results[1]


# [TRIVIAL] the module entry point is wired up.
def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nilflat", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == f"nilflat {__version__}"
