import pytest

from siegel.suites import SUITES, run_suite


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes(name):
    rep = run_suite(name, seed=3, corpus_size=6)
    assert rep.passed, [c for c in rep.checks if not c["passed"]]


def test_reports_are_deterministic():
    a = run_suite("minimization", seed=5, corpus_size=4).to_json()
    b = run_suite("minimization", seed=5, corpus_size=4).to_json()
    assert a == b


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")
