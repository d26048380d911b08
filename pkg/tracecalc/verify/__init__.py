"""Verification suites: magic formulas, Laplacian, exact oracles, concentration, self test."""

from tracecalc.verify.suites import (
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

__all__ = [
    "SUITES",
    "CheckResult",
    "SuiteReport",
    "concentration_suite",
    "laplacian_suite",
    "magic_suite",
    "oracle_suite",
    "run_suite",
    "selftest",
]
