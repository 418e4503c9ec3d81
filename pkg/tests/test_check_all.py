import pytest

from check_all import BUDGETS, CheckFailed, CheckRunner, render, run_all


@pytest.fixture
def runner(config_path, isolated_env):
    return CheckRunner(config_path, quick=True, workers=1)


def test_every_check_has_a_budget(runner):
    assert [name for name, _ in runner.checks()] == list(BUDGETS)


def test_cheap_checks(runner):
    assert "g(3)=48" in runner.check_counts()
    assert "catalog weights match multiplicities" in runner.check_decompositions()
    assert "d=4: formula 64 dimension sum 80 (disagree)" in runner.check_r7()


def test_failures_are_recorded_and_the_run_continues(runner, monkeypatch):
    def broken():
        raise CheckFailed("h7 is empty")

    def crashing():
        raise ZeroDivisionError("division by zero")

    checks = [('counts', runner.check_counts), ('hilbert series', broken), ('r7 discrepancy', crashing)]
    monkeypatch.setattr(runner, "checks", lambda: checks)
    results = runner.run()
    assert [r['passed'] for r in results] == [True, False, False]
    assert results[1]['detail'] == "h7 is empty"
    assert results[2]['detail'].startswith("ZeroDivisionError")
    assert not runner.passed
    text = render(results, quick=True)
    assert "RESULT: FAILED: hilbert series, r7 discrepancy" in text
    assert "(quick)" in text


def test_render_all_pass():
    rows = [{'check': 'counts', 'passed': True, 'detail': 'ok', 'budget_s': 1, 'wall_ms': 5,
             'over_budget': False}]
    assert "RESULT: ALL CHECKS PASS" in render(rows)
    assert "(no checks run)" in render([])


@pytest.mark.slow
def test_quick_run_passes(config_path, isolated_env):
    passed, text, results = run_all(config_path, quick=True, json_path=str(isolated_env / "all.json"),
                                    timing=False)
    assert passed, text
    assert (isolated_env / "reports" / "check_all.txt").exists()
    assert (isolated_env / "all.json").exists()
