"""Command-line interface: records on stdout, diagnostics on stderr."""

import subprocess
import sys

import pytest

from amalgam.cli import main
from amalgam.formats import serialize_family, serialize_language

from conftest import tri


@pytest.fixture()
def files(tmp_path, lang4, f1):
    d = {}
    d["lang"] = tmp_path / "lang4.txt"
    d["lang"].write_text(serialize_language(lang4))
    d["f1"] = tmp_path / "f1.txt"
    d["f1"].write_text(serialize_family(f1))
    d["bad"] = tmp_path / "f1_minus.txt"
    d["bad"].write_text(serialize_family(f1.without(tri(0, 2, 3, 0, 0, 0))))
    d["junk"] = tmp_path / "junk.txt"
    d["junk"].write_text("[01; a]\n[012; a a a]\n")
    d["dir"] = tmp_path
    return d


def run(capsys, argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_ok(capsys, files):
    code, out, err = run(capsys, ["validate", "--language", files["lang"], "--family", files["f1"]])
    assert code == 0
    assert "language_ok=true" in out
    assert "family_ok=true" in out and "members=6" in out


def test_validate_rejects_small_monic(capsys, files):
    code, out, err = run(capsys, ["validate", "--language", files["lang"], "--family", files["junk"]])
    assert code == 2
    assert "fewer than 3 parts" in out + err


def test_check_pass_records_census(capsys, files):
    code, out, err = run(capsys, ["check", "--language", files["lang"], "--family", files["f1"]])
    assert code == 0
    assert "status=pass" in out
    assert 'census_code="(0,1,2,3; a,a,a,a)"' in out
    assert "matched=true" in out


def test_check_failure_names_the_code(capsys, files):
    code, out, err = run(capsys, ["check", "--language", files["lang"], "--family", files["bad"]])
    assert code == 1
    assert "status=fail" in out
    assert "condition=correspondence" in out
    assert 'code="(0,1,2,3; a,a,a,a)"' in out


def test_check_missing_file_is_usage_error(capsys, files):
    code, out, err = run(capsys, ["check", "--language", files["lang"], "--family", files["dir"] / "nope.txt"])
    assert code == 2
    assert "cannot read" in err


def test_oracle_pass(capsys, files):
    code, out, err = run(
        capsys,
        ["oracle", "--language", files["lang"], "--family", files["f1"], "--max-base", "3"],
    )
    assert code == 0
    assert "status=pass" in out
    assert "completeness_bound=12" in out


def test_oracle_fail_prints_witness(capsys, files):
    code, out, err = run(
        capsys,
        ["oracle", "--language", files["lang"], "--family", files["bad"], "--max-base", "3"],
    )
    assert code == 1
    assert "status=fail" in out
    assert "witness" in out
    assert "blocked_colour" in out


def test_oracle_budget_exit_three(capsys, files):
    code, out, err = run(
        capsys,
        ["oracle", "--language", files["lang"], "--family", files["f1"],
         "--max-base", "4", "--budget", "40"],
    )
    assert code == 3
    assert "status=inconclusive" in out
    assert "budget" in out


def test_witness_found(capsys, files):
    code, out, err = run(
        capsys,
        ["witness", "--language", files["lang"], "--family", files["bad"], "--pair", "0", "1"],
    )
    assert code == 1
    assert "witness=true" in out
    assert out.count("blocked_colour") == 3


def test_witness_absent(capsys, files):
    code, out, err = run(
        capsys,
        ["witness", "--language", files["lang"], "--family", files["f1"], "--pair", "0", "1"],
    )
    assert code == 0
    assert "witness=false" in out


def test_gcssa_good_run(capsys, files):
    code, out, err = run(
        capsys,
        ["gcssa", "--language", files["lang"], "--family", files["f1"],
         "--pair", "0", "1",
         "--cover", "a=[012; a a a]", "--cover", "b=[012; b a a]",
         "--cover", "c=[013; c a a]"],
    )
    assert code == 0
    assert "outcome=good" in out
    assert "key=a" in out
    assert "step=0" in out


def test_gcssa_bad_cover_is_usage_error(capsys, files):
    code, out, err = run(
        capsys,
        ["gcssa", "--language", files["lang"], "--family", files["f1"],
         "--pair", "0", "1", "--cover", "a=[012; a a a]"],
    )
    assert code == 2


def test_build_audit_homogeneity_pipeline(capsys, files, monkeypatch):
    gpath = files["dir"] / "g.txt"
    code, out, err = run(
        capsys,
        ["build", "--language", files["lang"], "--family", files["f1"],
         "--n", "24", "--s", "1", "--graph-out", gpath],
    )
    assert code == 0
    assert "n=24" in out and "seed=0" in out
    assert gpath.exists()
    text = gpath.read_text()
    assert text.startswith("graph 4 24")

    code, out, err = run(
        capsys,
        ["audit", "--language", files["lang"], "--family", files["f1"],
         "--graph", gpath, "--parts-bound", "2"],
    )
    # all two-part types fit easily by n=24
    assert code == 0
    assert "omission_ok=true" in out and "realization_ok=true" in out

    outputs = {}
    for threads in ("1", "4"):
        monkeypatch.setenv("HOMOG_THREADS", threads)
        code, out, err = run(
            capsys,
            ["sample-homogeneity", "--language", files["lang"], "--graph", gpath,
             "--k", "2", "--trials", "48", "--seed", "5"],
        )
        assert code == 0
        outputs[threads] = out.replace("threads=4", "threads=1")
    # a fixed chunk layout keeps records identical whatever the pool size
    assert outputs["1"] == outputs["4"]


def test_build_without_graph_out_streams_export(capsys, files):
    code, out, err = run(
        capsys,
        ["build", "--language", files["lang"], "--family", files["f1"], "--n", "8", "--s", "1"],
    )
    assert code == 0
    assert out.startswith("graph 4 8")
    assert "demands_issued" in err


def test_build_rejects_tiny_n(capsys, files):
    code, out, err = run(
        capsys,
        ["build", "--language", files["lang"], "--family", files["f1"], "--n", "2"],
    )
    assert code == 2


def test_audit_flags_planted_violation(capsys, files):
    gpath = files["dir"] / "g.txt"
    run(capsys, ["build", "--language", files["lang"], "--family", files["f1"],
                 "--n", "12", "--s", "1", "--graph-out", gpath])
    lines = gpath.read_text().splitlines()
    doctored = []
    # force the first three cross edges of vertex 0 to colour a so the
    # triangle on parts (0,1,2) through vertex 0 becomes [012; a a a]
    for ln in lines:
        if ln.startswith("e 0 ") or ln.startswith("e 1 2 ") or ln.startswith("e 1 1"):
            parts = ln.split()
            if parts[1] == "0" and parts[2] in ("1", "2"):
                ln = f"e 0 {parts[2]} a"
        doctored.append(ln)
    doctored = [
        "e 1 2 a" if ln.startswith("e 1 2 ") else ln for ln in doctored
    ]
    gpath.write_text("\n".join(doctored) + "\n")
    code, out, err = run(
        capsys,
        ["audit", "--language", files["lang"], "--family", files["f1"],
         "--graph", gpath, "--parts-bound", "3"],
    )
    assert code == 1
    assert "forbidden" in out
    assert "omission_ok=false" in out


def test_enumerate_streams_and_budget(capsys, files, tmp_path, lang3):
    lpath = tmp_path / "lang3.txt"
    lpath.write_text(serialize_language(lang3))
    code, out, err = run(capsys, ["enumerate", "--language", lpath, "--budget", "60"])
    assert code == 3
    assert "partial=true" in out
    assert "family=" in out

    code, out, err = run(capsys, ["enumerate", "--language", lpath])
    assert code == 0
    assert out.count("family=") == 22


def test_canon_modes(capsys, files):
    code, out, err = run(capsys, ["canon", "--language", files["lang"], "--family", files["f1"]])
    assert code == 0
    assert "canonical_sha256=" in out
    code2, out2, err2 = run(capsys, ["canon", "--language", files["lang"], "--family", files["f1"]])
    assert out2 == out  # stable fingerprint
    code, out, err = run(capsys, ["canon", "--language", files["lang"]])
    assert code == 2


def test_console_script_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "amalgam.cli", "check",
         "--language", str(files["lang"]), "--family", str(files["f1"])],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "status=pass" in proc.stdout
