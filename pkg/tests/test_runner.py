"""Command dispatch and report rendering outside the click layer."""

from __future__ import annotations

import json

import pytest

from shleibniz import fixtures as shipped
from shleibniz.errors import PreconditionError
from shleibniz.report import WITNESS_LIMIT, render_structured, render_text
from shleibniz.runner import RunOptions, run_command


def broken_endo2_text() -> str:
    # dropping the E11 component of delta_0 E01 breaks the derivation rule
    # and the ladder in many places at once
    base = shipped.fixture_text("endo2")
    text = base.replace("[delta 0]\nE01: E00 + E11\n", "[delta 0]\nE01: E00\n")
    assert text != base
    return text


def test_unknown_command_raises():
    with pytest.raises(PreconditionError):
        run_command("frobnicate", shipped.fixture_text("heisab"))


def test_witness_list_is_capped_in_text_output():
    report = run_command("check-sh", broken_endo2_text(), RunOptions(max_const=4))
    assert not report.passed
    worst = max(len(r.violations) for r in report.results)
    assert worst > WITNESS_LIMIT
    text = render_text(report)
    assert "... and" in text
    assert text.count("witness") <= WITNESS_LIMIT * len(report.results)


def test_structured_sites_are_json_safe():
    report = run_command("check-sh", broken_endo2_text(), RunOptions(max_const=4))
    payload = json.loads(render_structured(report))
    for check in payload["checks"]:
        for violation in check["violations"]:
            assert all(isinstance(s, (int, str)) for s in violation["site"])


def test_structured_and_text_agree_on_verdict():
    for name in ("heisab", "quartic"):
        report = run_command("report-all", shipped.fixture_text(name),
                             RunOptions(max_const=4, max_word_len=3))
        text = render_text(report)
        payload = json.loads(render_structured(report))
        assert ("verdict: pass" in text) == (payload["verdict"] == "pass")


def test_informational_results_do_not_affect_verdict():
    report = run_command("derive", shipped.fixture_text("heisab"))
    infos = [r for r in report.results if r.passed is None]
    assert infos
    assert report.passed


def test_first_violation_stops_early():
    slow = run_command("check-sh", broken_endo2_text(), RunOptions(max_const=4))
    fast = run_command(
        "check-sh", broken_endo2_text(), RunOptions(max_const=4, first_violation=True)
    )
    count = lambda rep: sum(len(r.violations) for r in rep.results)
    assert count(fast) == 1
    assert count(slow) > 1
