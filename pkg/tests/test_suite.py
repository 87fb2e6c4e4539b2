"""The bundled verification checks run clean and reproducibly."""

import pytest

import bsmg.suite as suite_mod
from bsmg.suite import BUNDLES, CheckResult, run_suite

REGISTRY_ORDER = [name for name, _, _ in BUNDLES["all"]]


def test_all_bundle_passes():
    rows = run_suite("all", seed=1, max_cases=2)
    assert [r.name for r in rows] == REGISTRY_ORDER
    for r in rows:
        assert r.passed, f"{r.name}: {r.detail}"
        assert r.cases >= 1


def test_lemma_bundle_is_deterministic():
    one = run_suite("lemmas", seed=3, max_cases=1)
    two = run_suite("lemmas", seed=3, max_cases=1)
    assert one == two
    assert all(isinstance(r, CheckResult) for r in one)


def test_unknown_bundle():
    with pytest.raises(KeyError):
        run_suite("everything")


def test_failures_become_rows(monkeypatch):
    def boom(rng, cases):
        raise AssertionError("forced failure")

    monkeypatch.setitem(suite_mod.BUNDLES, "boom", (("boom-check", boom, 1),))
    rows = run_suite("boom")
    assert len(rows) == 1
    assert rows[0].passed is False
    assert "forced failure" in rows[0].detail
