"""Acceptance gate: each criterion must pass within its time budget.

Every test prints one line `[PASS]` or `[FAIL]` with the elapsed time.
"""
import pytest

from fibkan.suite import CRITERIA, RunConfig, run_criterion

KEYS = list(CRITERIA)


@pytest.fixture(scope="module")
def config():
    return RunConfig()


@pytest.mark.parametrize("key", KEYS)
def test_criterion(key, config, capsys):
    name, _, budget = CRITERIA[key]
    rep = run_criterion(key, config)
    in_time = rep.elapsed < budget
    ok = rep.verdict and in_time
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        print(f"\n{key:>4} [{status}] {name}: {rep.elapsed:.2f}s (budget {budget:g}s) counts={rep.counts}")
    assert rep.verdict, rep.render()
    assert in_time, f"{key} took {rep.elapsed:.2f}s, budget {budget}s"


def test_f2_example_details(config):
    rep = run_criterion("c1", config)
    colim, defect, hull = rep.children
    assert colim.counts["elements"] == 8
    # the non-idempotency must come with a concrete non-invertible counit component
    inner = defect.children[0]
    assert not inner.verdict
    assert inner.witnesses[0]["component"] == "counit at L(F2^2) = F2^3"
    assert not hull.children[0].verdict
    assert hull.children[0].witnesses
