"""Tests for the verification suites and the self test."""

import pytest

from tracecalc.verify import (
    SUITES,
    CheckResult,
    SuiteReport,
    concentration_suite,
    laplacian_suite,
    magic_suite,
    oracle_suite,
    run_suite,
    selftest,
)
from tracecalc.verify import suites
from tracecalc.verify.suites import (
    DECAY_PATHS,
    _cayley_hamilton,
    _finite_u_squared,
    _generating_roundtrip,
    _transform_u_fourth,
    _transform_u_squared,
    laplacian_monomials,
    run_check,
)


# ── Reports ─────────────────────────────────────────────────────────


class TestRunCheck:
    def test_pass(self):
        result = run_check("ok", lambda: (True, "fine"))
        assert result.passed
        assert result.detail == "fine"
        assert result.seconds >= 0

    def test_exception_becomes_failure(self):
        result = run_check("boom", lambda: (1 / 0, ""))
        assert not result.passed
        assert result.detail.startswith("ZeroDivisionError")

    def test_report_failures(self):
        report = SuiteReport("demo", [CheckResult("a", True), CheckResult("b", False)])
        assert not report.passed
        assert [c.name for c in report.failures] == ["b"]
        assert SuiteReport("empty").passed


# ── Suites ──────────────────────────────────────────────────────────


class TestSuites:
    def test_magic(self):
        report = magic_suite(Ns=(1, 2, 4), pairs=3)
        assert report.passed, report.failures
        assert len(report.checks) == 3

    def test_laplacian(self):
        report = laplacian_suite(Ns=(2,))
        assert report.passed, report.failures

    def test_laplacian_monomials_are_random_per_n(self):
        picked = laplacian_monomials(3, seed=0)
        assert len(set(picked)) == 10
        assert all(1 <= m.trace_degree <= 5 for m in picked)
        assert laplacian_monomials(3, seed=0) == picked
        assert laplacian_monomials(4, seed=0) != picked

    def test_laplacian_flags_wrong_convergence_order(self):
        # At a step this small the error is rounding noise, so no ratio near 4 is seen.
        report = laplacian_suite(Ns=(2,), count=3, coarse=2e-5)
        assert not report.passed

    def test_oracle(self):
        report = oracle_suite(kmax=5)
        assert report.passed, report.failures
        assert len(report.checks) == 5

    def test_concentration(self):
        report = concentration_suite(kmax=2)
        assert report.passed, report.failures

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run_suite("speed")

    def test_names(self):
        assert SUITES == ("magic", "laplacian", "oracle", "concentration")


class TestSelfTestChecks:
    @pytest.mark.parametrize(
        "check",
        [_transform_u_squared, _transform_u_fourth, _finite_u_squared, _generating_roundtrip, _cayley_hamilton],
    )
    def test_check_passes(self, check):
        passed, detail = check()
        assert passed, detail

    @pytest.mark.slow
    def test_selftest_without_monte_carlo(self):
        report = selftest(skip_mc=True)
        assert report.passed, report.failures

    @pytest.mark.slow
    def test_selftest_with_monte_carlo(self):
        report = selftest(paths=2000, workers=2)
        assert report.passed, report.failures


class TestDecayPaths:
    @pytest.fixture
    def decay_calls(self, monkeypatch):
        """Stub every check and record the path count the decay run receives."""
        calls = []
        monkeypatch.setattr(suites, "run_suite", lambda name, seed=0: SuiteReport(name))
        for name in (
            "_transform_u_squared",
            "_transform_u_fourth",
            "_finite_u_squared",
            "_generating_roundtrip",
            "_cayley_hamilton",
        ):
            monkeypatch.setattr(suites, name, lambda: (True, ""))
        monkeypatch.setattr(
            suites, "_large_n_decay", lambda paths, seed, workers: (calls.append(paths) is None, "")
        )
        return calls

    def test_full_path_count_by_default(self, decay_calls):
        report = selftest()
        assert decay_calls == [DECAY_PATHS] == [100_000]
        assert report.checks[-1].name == "large-N Monte Carlo decay (100000 paths)"

    def test_explicit_override(self, decay_calls):
        report = selftest(paths=500)
        assert decay_calls == [500]
        assert report.checks[-1].name.endswith("(500 paths)")

    def test_skip(self, decay_calls):
        selftest(skip_mc=True)
        assert decay_calls == []
