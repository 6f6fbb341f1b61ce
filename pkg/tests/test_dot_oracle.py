import re

import pytest

import ecta.oracle as oracle_mod
from ecta.automaton import BOTTOM, fvar, mk_edge, mk_node, mu
from ecta.dot import export_dot
from ecta.examples import equal_pair, typed_applications
from ecta.oracle import oracle_check


def test_dot_is_deterministic_and_labelled():
    text = export_dot(equal_pair())
    assert text == export_dot(equal_pair())
    assert text.startswith('digraph "ecta" {')
    assert "0.0=1.0" in text
    assert re.search(r'\[label="1"\]', text)
    assert "\n" not in re.findall(r'label="([^"]*)"', text)[0]


def test_dot_bottom_and_recursion():
    assert 'label="⊥"' in export_dot(BOTTOM)
    nat = mu("N", mk_node([mk_edge("z"), mk_edge("s", [fvar("N")])]))
    text = export_dot(nat)
    assert "style=dashed" in text and 'label="μ"' in text


def test_dot_quotes_odd_symbols():
    n = mk_node([mk_edge('say "hi"\\')])
    assert r'say \"hi\"\\' in export_dot(n)


def test_oracle_passes_on_examples():
    for n in (equal_pair(), typed_applications()):
        report = oracle_check(n, 4)
        assert report.passed
        assert report.lines()[0] == "result=pass"
        assert report.enumerated == report.denoted > 0


def test_oracle_on_bottom():
    report = oracle_check(BOTTOM, 3)
    assert report.passed and report.denoted == 0


def test_oracle_reports_missing_terms(monkeypatch):
    real = oracle_mod.expand_bounded

    def lossy(state, depth):
        return set(sorted(real(state, depth))[1:])

    monkeypatch.setattr(oracle_mod, "expand_bounded", lossy)
    report = oracle_check(equal_pair(), 4)
    assert not report.passed
    assert report.lines()[0] == "result=fail"
    assert any(line.startswith("- ") for line in report.lines())


def test_oracle_rejects_constraints_under_recursion():
    a = mk_node([mk_edge("a")])
    n = mu("N", mk_node([mk_edge("z"), mk_edge("h", [fvar("N"), a], "{0=1}")]))
    with pytest.raises(ValueError):
        oracle_check(n, 3)
