"""End-to-end CLI behavior, driven in process through main()."""

from __future__ import annotations

import json

import pytest

from conftest import FIXTURES
from semdiff.cli import load_json_lines, main

CD1 = str(FIXTURES / "cd_v1.cd")
CD2 = str(FIXTURES / "cd_v2.cd")
AD1 = str(FIXTURES / "ad_v1.ad")
AD2 = str(FIXTURES / "ad_v2.ad")
AD3 = str(FIXTURES / "ad_v3.ad")
OM1 = str(FIXTURES / "om1.od")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- cddiff ------------------------------------------------------------


def test_cddiff_text_report(capsys):
    code, out, err = run(capsys, "cddiff", CD2, CD1, "--scope", "6")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "cddiff cd_v2 vs cd_v1 (scope 6): 4 difference class(es) [class-set]"
    assert "  [1] {Employee, Manager}" in lines
    assert "  [3] {Manager}" in lines
    assert any(ln.startswith("      witness: objectdiagram") for ln in lines)
    assert any("object(s))" in ln for ln in lines)
    assert err == ""


def test_cddiff_self_is_quiet(capsys):
    code, out, _ = run(capsys, "cddiff", CD1, CD1)
    assert code == 1
    assert out == "cddiff cd_v1 vs cd_v1 (scope 10): no differences\n"


def test_cddiff_output_is_reproducible(capsys):
    first = run(capsys, "cddiff", CD2, CD1, "--scope", "6")
    second = run(capsys, "cddiff", CD2, CD1, "--scope", "6")
    assert first == second


def test_cddiff_json_lines_roundtrip(capsys):
    code, out, _ = run(capsys, "cddiff", CD2, CD1, "--scope", "6",
                       "--format", "json-lines")
    assert code == 0
    lines = out.rstrip("\n").splitlines()
    assert len(lines) == 4
    for ln in lines:
        obj = json.loads(ln)
        assert list(obj) == ["annotation", "key", "representative"]
        assert obj["key"]["kind"] == "class-set"
        assert obj["representative"].startswith("objectdiagram")
    report = load_json_lines(out)
    assert [e.key.names for e in report.entries] == [
        ("Employee", "Manager"),
        ("Employee", "Manager", "Task"),
        ("Manager",),
        ("Manager", "Task"),
    ]


def test_cddiff_raw_enumeration_reports_truncation(capsys):
    code, out, _ = run(capsys, "cddiff", CD2, CD1, "--scope", "6",
                       "--no-summary", "--limit", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].endswith("5 witness(es) (limit reached; more may exist)")
    assert sum(ln.lstrip().startswith("[") for ln in lines) == 5


def test_cddiff_raw_json_lines(capsys):
    code, out, _ = run(capsys, "cddiff", CD2, CD1, "--no-summary",
                       "--limit", "3", "--format", "json-lines")
    assert code == 0
    rows = [json.loads(ln) for ln in out.rstrip("\n").splitlines()]
    assert len(rows) == 3
    assert all(list(r) == ["witness"] for r in rows)


@pytest.mark.parametrize("left,right,n", [(CD1, CD2, 3), (CD2, CD1, 4)])
def test_cddiff_oracle_agreement(capsys, left, right, n):
    code, out, err = run(capsys, "cddiff", left, right, "--scope", "3", "--oracle")
    assert code == 0
    assert f"oracle agreement: {n} class(es) at scope 3" in err


def test_cddiff_oracle_scope_cap(capsys):
    code, _, err = run(capsys, "cddiff", CD2, CD1, "--scope", "6", "--oracle")
    assert code == 2
    assert "error: oracle scope capped at 4, got 6" in err


def test_cddiff_oracle_mismatch_exits_3(capsys, monkeypatch):
    class Disagreeing:
        def keys(self):
            return []

    monkeypatch.setattr("semdiff.cli.cd_enumerate_all",
                        lambda cd1, cd2, scope: Disagreeing())
    code, _, err = run(capsys, "cddiff", CD2, CD1, "--scope", "3", "--oracle")
    assert code == 3
    assert "oracle mismatch" in err


def test_cddiff_rejects_nonpositive_scope(capsys):
    code, _, err = run(capsys, "cddiff", CD1, CD2, "--scope", "0")
    assert code == 2
    assert "must be at least 1, got 0" in err


# -- addiff ------------------------------------------------------------


def test_addiff_text_report(capsys):
    code, out, _ = run(capsys, "addiff", AD2, AD1)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ("addiff ad_v2 vs ad_v1 (trace semantics): "
                        "3 difference class(es) [action-list]")
    assert "  [1] register -> welcome_msg" in lines
    assert "      (tickets ∈ [8..11])" in lines
    assert "      trace: tickets=8: register -> welcome_msg" in lines


def test_addiff_quiet_direction(capsys):
    code, out, _ = run(capsys, "addiff", AD1, AD3)
    assert code == 1
    assert out == "addiff ad_v1 vs ad_v3 (trace semantics): no differences\n"


def test_addiff_both_prints_counts(capsys):
    code, out, _ = run(capsys, "addiff", AD3, AD2, "--both")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "counts: 6/1"
    assert sum("difference class(es)" in ln for ln in lines) == 2
    assert "[action-list]" in lines[0]


def test_addiff_raw_traces(capsys):
    code, out, _ = run(capsys, "addiff", AD2, AD1, "--no-summary")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].endswith("3 symbolic trace(s)")
    assert lines[1] == "  [1] register -> welcome_msg  (tickets ∈ [8..11])"


def test_addiff_action_set_json(capsys):
    code, out, _ = run(capsys, "addiff", AD3, AD2,
                       "--summarize", "action-set", "--format", "json-lines")
    assert code == 0
    rows = [json.loads(ln) for ln in out.rstrip("\n").splitlines()]
    assert len(rows) == 1
    assert rows[0]["key"]["kind"] == "action-set"
    assert rows[0]["annotation"] == "tickets ∈ [0..11]"


def test_addiff_oracle_agreement(capsys):
    code, _, err = run(capsys, "addiff", AD2, AD1, "--oracle")
    assert code == 0
    assert "oracle agreement: 3/3 class(es)" in err


def test_addiff_oracle_skips_simulation_directions(capsys, tmp_path):
    plain = tmp_path / "plain.ad"
    plain.write_text("activitydiagram plain {\n"
                     "  initial i; action a; final f;\n"
                     "  edge i -> a; edge a -> f; }")
    gated = tmp_path / "gated.ad"  # private input makes the pair game lossy
    gated.write_text("activitydiagram gated { input x : 0..1;\n"
                     "  initial i; action a; final f;\n"
                     "  edge i -> a; edge a -> f; }")
    code, _, err = run(capsys, "addiff", str(plain), str(gated), "--oracle")
    assert code == 1
    assert "oracle cross-check skipped: simulation semantics" in err


# -- check ----------------------------------------------------------------


def test_check_accepts_instance(capsys):
    code, out, _ = run(capsys, "check", OM1, CD2)
    assert code == 0
    assert out == "om1 is an instance of cd_v2\n"


def test_check_lists_violations(capsys):
    code, out, _ = run(capsys, "check", OM1, CD1)
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "om1 is not an instance of cd_v1:"
    assert ("  - e1 has 3 Task partner(s) via handles, multiplicity is [0..2]"
            in lines)


# -- input handling ----------------------------------------------------------


def test_parse_errors_carry_location(capsys, tmp_path):
    bad = tmp_path / "bad.cd"
    bad.write_text("classdiagram x {\n  клас A;\n}")
    code, _, err = run(capsys, "cddiff", str(bad), CD1)
    assert code == 2
    assert f"error: {bad}:2:" in err


def test_kind_mismatch_is_a_usage_error(capsys):
    code, _, err = run(capsys, "check", CD1, CD1)
    assert code == 2
    assert "expected object model, found class diagram" in err


def test_validation_runs_before_diffing(capsys, tmp_path):
    bad = tmp_path / "dangling.cd"
    bad.write_text("classdiagram x { class A; association r [1] A -- Ghost [1]; }")
    code, _, err = run(capsys, "cddiff", str(bad), CD1)
    assert code == 2
    assert "unknown class Ghost" in err


def test_missing_file(capsys, tmp_path):
    gone = tmp_path / "gone.cd"
    code, _, err = run(capsys, "cddiff", str(gone), CD1)
    assert code == 2
    assert str(gone) in err


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "--help")[0] == 0
