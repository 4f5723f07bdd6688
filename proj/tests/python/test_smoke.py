"""Smoke tests for the _maat extension module."""

import os

import pytest

import _maat

FIXTURES = os.environ.get("MAAT_FIXTURES", os.path.join(os.path.dirname(__file__), "..", "..", "fixtures"))


def fixture(rel):
    return os.path.join(FIXTURES, rel)


def test_parse_returns_nested_ast():
    ast = _maat.parse("<allocate, ip_multicast, (ttl=32,essential), <discover, GoogleDocs, NULL>>")
    assert ast["verb"] == "allocate"
    assert ast["modifiers"][0][0]["key"] == "ttl"
    assert ast["subject"]["verb"] == "discover"
    assert ast["subject"]["subject"] is None


def test_parse_error_raises():
    with pytest.raises(ValueError):
        _maat.parse("<push, broken")


def test_render_is_canonical_and_stable():
    text = "<PUSH, thing,(rtt<50ms) , NULL>"
    once = _maat.render(text)
    assert once == _maat.render(once)
    assert once.startswith("<push, thing, (rtt<50ms,essential), ")


def test_validate_flags_unknown_verbs():
    assert _maat.validate("<discover, svc, NULL>") == []
    assert _maat.validate("<teleport, svc, NULL>") != []


def test_compile_produces_subject_first_plan():
    plan = _maat.compile("<push, data, <discover, hadoop, NULL>>")
    assert len(plan["actions"]) == 2
    assert plan["actions"][0]["kind"] == "discover"
    assert plan["root"] == 1


def test_classify_covers_the_four_forms():
    assert _maat.classify("https://a.example/path")["kind"] == "url"
    assert _maat.classify("a.example/movies/Title")["kind"] == "ccn"
    assert _maat.classify("831FD96B07EAD2F2A29277D6FB9A5D24A1FDD4EC")["kind"] == "info_hash"
    assert _maat.classify("ABeautifulMind")["kind"] == "opaque"


def test_scenario_and_scoring_round_trip(tmp_path):
    report = _maat.run_scenario(fixture("scenarios/uc1.scenario.json"))
    assert report["steps"][0]["outcome"]["kind"] == "reified"
    scores = _maat.score_log(report["audit_log"])
    assert scores
    for agent_score in scores.values():
        assert 0.0 <= agent_score["mean"] <= 1.0
