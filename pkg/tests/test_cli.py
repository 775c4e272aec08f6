import io

import pytest

from fanostab.cli import main
from fanostab.resources import FACTS_ENV, facts_dir, scripts_dir
from fanostab.special import load_certificate
from fanostab.tables import ingest_facts


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


# ---------------------------------------------------------------- cohomology


def test_cohomology_hodge_class_of_g15():
    code, text = run("cohomology", "--space", "G(1,5)", "--q", "2", "--t-range", "0:0")
    assert code == 0
    assert "p=2: 2" in text


def test_cohomology_projective_space():
    code, text = run("cohomology", "--space", "P(3)", "--q", "1", "--t-range", "0:0")
    assert code == 0 and "p=1: 1" in text


def test_cohomology_h0_cell_is_blank():
    code, text = run("cohomology", "--space", "G(1,4)", "--q", "3", "--t-range", "2:2", "--p", "0")
    assert code == 0
    assert text.splitlines()[-1] == "t=2"


def test_cohomology_default_window_in_header():
    code, text = run("cohomology", "--space", "P(2)", "--q", "0")
    assert "t in -10:10 (default)" in text.splitlines()[0]
    assert len(text.splitlines()) == 22


def test_records_reingest_as_facts():
    code, text = run("cohomology", "--space", "P(3)", "--q", "1", "--t-range", "-4:4", "--format", "records")
    store = ingest_facts(text)
    assert store.lookup_cell("P(3)", 1, 1, 0).value == 1
    assert store.lookup_cell("P(3)", 0, 1, 2).value == 6
    assert all(f.value for f in store.cells.values())


def test_negative_window_without_equals():
    code, text = run("cohomology", "--space", "P(2)", "--q", "0", "--t-range", "-3:-3")
    assert code == 0 and "p=2: 1" in text


@pytest.mark.parametrize(
    "argv",
    [
        ["cohomology", "--space", "Q(3)", "--q", "1"],
        ["cohomology", "--space", "P(3)", "--q", "7"],
        ["cohomology", "--space", "P(3)", "--q", "1", "--t-range", "3:1"],
        ["cohomology", "--space", "P(3)"],
        ["frobnicate"],
    ],
)
def test_bad_flags_exit_2(argv, capsys):
    assert run(*argv)[0] == 2


def test_output_is_deterministic():
    argv = ("cohomology", "--space", "G(1,4)", "--q", "2", "--format", "records")
    assert run(*argv) == run(*argv)


# ---------------------------------------------------------------- special


def test_special_cubic_fourfold(tmp_path):
    out = tmp_path / "cubic.cert"
    code, text = run("special", "--from", "P(5)", "--section", "3", "--window", "-8:8", "--out", str(out))
    assert code == 0
    assert "special: yes" in text
    cert = load_certificate(out.read_text())
    assert cert.space.id == "P(5).H3" and cert.window == (-8, 8)


def test_special_double_solid():
    code, text = run("special", "--from", "P(3)", "--cover", "2", "3", "--window", "-6:6")
    assert code == 0 and "special: yes" in text


def test_special_grassmannian_violation():
    code, text = run("special", "--from", "G(1,4)", "--window", "-4:4")
    assert code == 1
    assert "special: no" in text
    assert "violation c (2, 2, 0)" in text


def test_special_steps_keep_order():
    code, text = run("special", "--from", "P(6)", "--section", "2", "--cover", "2", "1", "--window", "-4:4")
    assert code == 0
    assert "space P(6).H2.C2x1 " in text


def test_special_rejects_surfaces():
    code, text = run("special", "--from", "P(3)", "--section", "2")
    assert code == 2


# ---------------------------------------------------------------- chase


def test_chase_genus_eight():
    code, text = run("chase", "--script", str(scripts_dir() / "g8_section.chase"))
    assert code == 0
    assert "g8_section: proved" in text and "checker: g8_section" in text


def test_chase_spinor_with_facts(tmp_path):
    trace = tmp_path / "trace.txt"
    code, text = run(
        "chase", "--script", str(scripts_dir() / "spinor_8fold.chase"),
        "--facts", str(facts_dir() / "spinor10.facts"), "--trace-out", str(trace), "--quiet",
    )
    assert code == 0
    assert trace.read_text().startswith("trace spinor_8fold")


def test_chase_truncated_facts_names_missing_vanishing(tmp_path):
    lines = (facts_dir() / "spinor10.facts").read_text().splitlines()
    cut = tmp_path / "cut.facts"
    cut.write_text("\n".join(x for x in lines if x != "vanish S10 p 1 q 6 t 4") + "\n")
    code, text = run("chase", "--script", str(scripts_dir() / "spinor_8fold.chase"), "--facts", str(cut))
    assert code == 1
    assert "missing fact: H1(Omega(S10,6,4)) = 0" in text


def test_chase_parse_error_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.chase"
    bad.write_text("space G grassmannian 1 4\nfrobnicate\n")
    assert run("chase", "--script", str(bad))[0] == 2
    assert "bad:2" in capsys.readouterr().err


def test_chase_missing_script_exits_2(tmp_path):
    assert run("chase", "--script", str(tmp_path / "nope.chase"))[0] == 2


def test_facts_dir_override(tmp_path, monkeypatch):
    # an empty override directory leaves the spinor inputs unavailable
    monkeypatch.setenv(FACTS_ENV, str(tmp_path))
    code, text = run("chase", "--script", str(scripts_dir() / "spinor_8fold.chase"))
    assert code == 1 and "stuck" in text


# ---------------------------------------------------------------- stability


def test_stability_del_pezzo():
    code, text = run("stability", "--n", "4", "--index", "3")
    assert code == 0
    assert text.startswith("Fano n=4 r=3: Stable")
    assert "STEP 1:" in text


def test_stability_genus_eight_sixfold():
    code, text = run("stability", "--n", "6", "--index", "4", "--genus", "8", "--assume-es")
    assert code == 0 and "trace g8_section" in text


def test_stability_genus_six_fivefold():
    code, text = run("stability", "--n", "5", "--index", "3", "--genus", "6", "--assume-es")
    assert code == 0 and ": Stable" in text.splitlines()[0]


def test_stability_without_slices_exits_1():
    code, text = run("stability", "--n", "5", "--index", "3", "--genus", "6")
    assert code == 1 and "Unknown" in text


@pytest.mark.parametrize(
    "argv",
    [
        ["--n", "4", "--index", "2", "--genus", "11"],
        ["--n", "5", "--index", "2", "--genus", "6", "--assume-es"],
        ["--n", "4", "--index", "7"],
    ],
)
def test_stability_invalid_profile(argv, capsys):
    assert run("stability", *argv)[0] == 2
    assert "invalid profile" in capsys.readouterr().err


def test_selftest_names_corrupted_fixture(tmp_path, monkeypatch):
    from fanostab import acceptance

    bad = tmp_path / "corrupt.facts"
    bad.write_text("space S10 dim 10 index 8\nvanish S10 p one q 6 t 4\n")
    monkeypatch.setenv(FACTS_ENV, str(tmp_path))
    monkeypatch.setattr(acceptance, "check_closed_form", lambda: "skipped")
    monkeypatch.setattr(acceptance, "check_thresholds", lambda: "skipped")
    out = io.StringIO()
    results = acceptance.run_all(out)
    failed = [r for r in results if not r.passed]
    assert failed and all("corrupt.facts:2" in r.detail for r in failed)
    assert main(["selftest"], io.StringIO()) == 1
