"""Verification suites and the end-to-end self test.

Each check returns a CheckResult; a check that raises is recorded as a
failure with the exception text, so one broken check never hides the rest.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np
from loguru import logger

from tracecalc.algebra.evaluate import evaluate_matrix, pi_zero
from tracecalc.algebra.monomial import TraceMonomial, grade_basis, u, v
from tracecalc.algebra.polynomial import TracePolynomial, cayley_hamilton_polynomial
from tracecalc.algebra.rings import EXPTPOLY, TPOLY, ExpTPoly, TPoly
from tracecalc.algebra.univariate import SingleVarPoly
from tracecalc.heat.finite import expect_finite, heat_finite_N, u_squared_closed_form, variance_finite
from tracecalc.heat.hall import free_hall_transform
from tracecalc.heat.moments import biane_moment, biane_moment_closed_form
from tracecalc.heat.oracle import nilpotent_exp_oracle
from tracecalc.heat.semigroup import heat_limit
from tracecalc.lab.brownian import random_unitary
from tracecalc.lab.estimators import mc_estimate, mc_l2_distance, trace_deviation
from tracecalc.lab.laplacian import (
    convergence_ratio,
    laplacian_exact,
    laplacian_fd,
    relative_error,
    richardson,
)
from tracecalc.lab.magic import verify_magic
from tracecalc.lab.types import BrownianConfig
from tracecalc.operators.intertwining import apply_DN
from tracecalc.series.generating import expand_phi_st, expand_phi_tt, pde_residual

SUITES = ("magic", "laplacian", "oracle", "concentration")

# Coarse step for the second-order convergence check of the finite-difference Laplacian.
RICHARDSON_STEP = 8e-3

# Paths per N for the large-N decay run.
DECAY_PATHS = 100_000


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]


def run_check(name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    start = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as e:
        passed, detail = False, f"{type(e).__name__}: {e}"
    result = CheckResult(name, passed, detail, time.perf_counter() - start)
    if passed:
        logger.debug(f"check passed: {name} ({detail}) in {result.seconds:.2f}s")
    else:
        logger.error(f"check failed: {name}: {detail}")
    return result


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _ginibre(rng: np.random.Generator, N: int) -> np.ndarray:
    return (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / math.sqrt(2)


def _slope(Ns: Iterable[int], values: Iterable[float]) -> float:
    return float(np.polyfit(np.log(list(Ns)), np.log(list(values)), 1)[0])


# ── magic formulas ──────────────────────────────────────────────────


def magic_suite(
    Ns: Iterable[int] = (1, 2, 3, 5, 8), pairs: int = 10, seed: int = 0, tol: float = 1e-12
) -> SuiteReport:
    report = SuiteReport("magic")
    rng = _rng(seed)
    for N in Ns:
        samples = [(_ginibre(rng, N), _ginibre(rng, N)) for _ in range(pairs)]

        def check(N: int = N, samples: list = samples) -> tuple[bool, str]:
            worst = max(verify_magic(N, A, B).worst for A, B in samples)
            return worst < tol, f"max residual {worst:.2e}"

        report.checks.append(run_check(f"magic N={N}", check))
    return report


# ── Laplacian ───────────────────────────────────────────────────────


def laplacian_monomials(N: int, seed: int = 0, count: int = 10, max_grade: int = 5) -> list[TraceMonomial]:
    """``count`` distinct monomials of grade 1..max_grade, drawn per (seed, N)."""
    pool = [m for k in range(1, max_grade + 1) for m in grade_basis(k)]
    rng = np.random.default_rng(np.random.SeedSequence([seed, N]))
    picks = rng.choice(len(pool), size=min(count, len(pool)), replace=False)
    return [pool[i] for i in sorted(picks)]


def laplacian_suite(
    Ns: Iterable[int] = (2, 3, 4),
    seed: int = 0,
    h: float = 1e-3,
    tol: float = 1e-4,
    count: int = 10,
    coarse: float = RICHARDSON_STEP,
) -> SuiteReport:
    """Finite-difference Delta_N against (D_N p)_N on generic unitaries.

    Accuracy is checked at h, both raw and Richardson-extrapolated from
    (h, h/2). Second order is confirmed at the coarser pair (coarse,
    coarse/2), where truncation error dominates rounding: the error must
    drop by a factor in [3, 5].
    """
    report = SuiteReport("laplacian")
    for N in Ns:
        U = random_unitary(N, seed=seed + N)
        monomials = laplacian_monomials(N, seed, count)

        def check(U: np.ndarray = U, monomials: list[TraceMonomial] = monomials) -> tuple[bool, str]:
            worst = worst_extrapolated = 0.0
            for m in monomials:
                p = TracePolynomial.monomial(m, 1)
                exact = laplacian_exact(p, U)
                fd_h = laplacian_fd(p, U, h)
                worst = max(worst, relative_error(fd_h, exact))
                extrapolated = richardson(fd_h, laplacian_fd(p, U, h / 2))
                worst_extrapolated = max(worst_extrapolated, relative_error(extrapolated, exact))

                ratio = convergence_ratio(p, U, coarse)
                if ratio is not None and not 3 <= ratio <= 5:
                    return False, f"{m}: error ratio {ratio:.2f} from h={coarse:g} to h/2, expected ~4"
            passed = worst <= tol and worst_extrapolated <= tol
            return passed, f"max relative error {worst:.2e}, extrapolated {worst_extrapolated:.2e}"

        report.checks.append(run_check(f"laplacian N={N}", check))
    return report


# ── exact oracles ───────────────────────────────────────────────────


def oracle_suite(kmax: int = 10) -> SuiteReport:
    """Recursion against the nilpotent exponential and the moment closed form."""
    report = SuiteReport("oracle")
    for k in range(1, kmax + 1):

        def check(k: int = k) -> tuple[bool, str]:
            oracle = nilpotent_exp_oracle(k)
            for m in (u(k), v(k)):
                p = TracePolynomial.monomial(m, 1)
                via_recursion = heat_limit(p).body(k)
                via_oracle = oracle.apply_polynomial(p.change_ring(TPOLY))
                if via_recursion != via_oracle:
                    return False, f"E_t({m}) differs: {via_recursion - via_oracle}"
            if biane_moment(k) != biane_moment_closed_form(k):
                return False, f"nu_{k} differs from the closed form"
            return True, f"grade {k}: {oracle.dim}x{oracle.dim} exact"

        report.checks.append(run_check(f"oracle k={k}", check))
    return report


# ── concentration ───────────────────────────────────────────────────


def concentration_suite(
    t: float = 1.0, kmax: int = 4, Ns: Iterable[int] = (8, 16, 32, 64)
) -> SuiteReport:
    """Moments at t = 0, the nu_2 formula, the 1/N^2 rates of mean and variance."""
    report = SuiteReport("concentration")
    Ns = list(Ns)

    def moments_at_zero() -> tuple[bool, str]:
        for k in range(1, 11):
            value = sum((b(Fraction(0)) for b in biane_moment(k).terms.values()), Fraction(0))
            if value != 1:
                return False, f"nu_{k}(0) = {value}"
        return True, "nu_k(0) = 1 for k <= 10"

    def nu_two() -> tuple[bool, str]:
        expected = ExpTPoly.exp(-1, TPoly([1, -1]))
        return biane_moment(2) == expected, f"nu_2 = {biane_moment(2)}"

    report.checks.append(run_check("moments at t=0", moments_at_zero))
    report.checks.append(run_check("nu_2 closed form", nu_two))

    for k in range(1, kmax + 1):

        def mean_rate(k: int = k) -> tuple[bool, str]:
            target = biane_moment(k).at(t)
            single = TracePolynomial.monomial(v(k), 1)
            errors = [abs(expect_finite(single, t, N) - target) for N in Ns]
            if max(errors) < 1e-13:
                return True, "exact for every N"
            slope = _slope(Ns, errors)
            return abs(slope + 2) <= 0.1, f"log-log slope {slope:.3f}"

        def variance_rate(k: int = k) -> tuple[bool, str]:
            ratios = [
                variance_finite(k, t, N) / variance_finite(k, t, 2 * N) for N in Ns[:-1]
            ]
            ok = all(3.5 <= r <= 4.5 for r in ratios)
            return ok, "ratios " + ", ".join(f"{r:.3f}" for r in ratios)

        report.checks.append(run_check(f"mean rate k={k}", mean_rate))
        report.checks.append(run_check(f"variance rate k={k}", variance_rate))
    return report


def run_suite(name: str, seed: int = 0) -> SuiteReport:
    if name == "magic":
        return magic_suite(seed=seed)
    if name == "laplacian":
        return laplacian_suite(seed=seed)
    if name == "oracle":
        return oracle_suite()
    if name == "concentration":
        return concentration_suite()
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")


# ── self test ───────────────────────────────────────────────────────


def _transform_u_squared() -> tuple[bool, str]:
    q = free_hall_transform(SingleVarPoly.monomial(2))
    expected = SingleVarPoly(
        [0, ExpTPoly.exp(-1, TPoly([0, -1])), ExpTPoly.exp(-1)], EXPTPOLY, "z"
    )
    return q == expected, f"q_t = {q}"


def _transform_u_fourth() -> tuple[bool, str]:
    q = free_hall_transform(SingleVarPoly.monomial(4))
    expected = {
        4: TPoly([1]),
        3: TPoly([0, -3]),
        2: TPoly([0, -2, 4]),
        1: TPoly([0, -1, 4, Fraction(-8, 3)]),
    }
    for j, body in expected.items():
        if q.coefficient(j) != ExpTPoly.exp(-2, body):
            return False, f"z^{j} coefficient is {q.coefficient(j)}"
    oracle = nilpotent_exp_oracle(4).apply_polynomial(TracePolynomial.monomial(u(4), 1, TPOLY))
    if pi_zero(oracle).coefficient(3) != TPoly([0, -3]):
        return False, "z^3 coefficient disagrees with the nilpotent exponential"
    return True, f"q_t = {q}"


def _finite_u_squared() -> tuple[bool, str]:
    p = TracePolynomial.monomial(u(2), 1)
    worst = 0.0
    for t in (0.25, 1.0, 4.0):
        for N in (2, 8, 32):
            value = heat_finite_N(p, t, N)
            a, b = u_squared_closed_form(t, N)
            worst = max(
                worst,
                abs(value.coefficient(u(2)) - a),
                abs(value.coefficient(u(1) * v(1)) - b),
            )
    return worst < 1e-12, f"max deviation {worst:.2e}"


def _generating_roundtrip(K: int = 8) -> tuple[bool, str]:
    worst = 0.0
    for t in (0.5, 1.0):
        for k, p in enumerate(expand_phi_tt(t, K), start=1):
            q = free_hall_transform(p, t)
            target = SingleVarPoly.monomial(k, 1, q.ring, "z")
            diff = q - target
            worst = max(worst, max((abs(c) for c in diff.coeffs), default=0.0))
        st = expand_phi_st(t, t, K)
        tt = expand_phi_tt(t, K)
        for a, b in zip(st, tt):
            gap = max((abs(c) for c in (a - b).coeffs), default=0.0)
            if gap > 1e-10:
                return False, f"phi^(s,t) at s=t differs from phi^(t,t) by {gap:.2e}"
        initial = pde_residual("phi", t, t, K).max_initial_residual
        if initial > 1e-8:
            return False, f"phi initial residual {initial:.2e}"
    return worst < 1e-9, f"max roundtrip error {worst:.2e}"


def _cayley_hamilton(samples: int = 20, seed: int = 0) -> tuple[bool, str]:
    p = cayley_hamilton_polynomial()
    images = [p, apply_DN(p, 2), heat_finite_N(p, 1.0, 2)]
    tolerances = [1e-12, 1e-10, 1e-10]
    for i in range(samples):
        U = random_unitary(2, seed=seed + i)
        for image, tol in zip(images, tolerances):
            size = float(np.linalg.norm(evaluate_matrix(image, U)))
            if size >= tol:
                return False, f"{size:.2e} on U(2) sample {i}"
    generic = max(
        float(np.linalg.norm(evaluate_matrix(p, random_unitary(3, seed=seed + i))))
        for i in range(4)
    )
    return generic > 1e-3, f"vanishes on U(2); {generic:.2e} on U(3)"


def _large_n_decay(
    paths: int, seed: int, workers: int, Ns: Iterable[int] = (4, 8, 16, 32), t: float = 1.0
) -> tuple[bool, str]:
    """Distance between the finite-N transform of u^2 and q_t shrinks with N."""
    p = TracePolynomial.monomial(u(2), 1)
    q = free_hall_transform(SingleVarPoly.monomial(2), t).to_trace_polynomial()
    distances, deviations = [], []
    for N in Ns:
        cfg = BrownianConfig("gl", N, t, paths=paths, seed=seed, workers=workers)
        distances.append(mc_l2_distance(heat_finite_N(p, t, N), q, cfg).mean.real)
        deviations.append(mc_estimate(cfg, trace_deviation(2)).mean.real)
    decreasing = all(a > b for a, b in zip(distances, distances[1:]))
    concentrating = all(a > b for a, b in zip(deviations, deviations[1:]))
    factor = distances[0] / distances[-1]
    detail = (
        "distances " + ", ".join(f"{d:.3e}" for d in distances)
        + f"; factor {factor:.1f}; |tr Z^2 - 1|^2 " + ", ".join(f"{d:.3e}" for d in deviations)
    )
    return decreasing and concentrating and factor >= 10, detail


def selftest(
    skip_mc: bool = False, paths: int | None = None, seed: int = 0, workers: int = 1
) -> SuiteReport:
    """Every deterministic check, then the Monte Carlo decay run unless skipped.

    The decay run uses DECAY_PATHS paths per N unless ``paths`` overrides it.
    """
    report = SuiteReport("selftest")
    checks: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
        ("transform of u^2", _transform_u_squared),
        ("transform of u^4", _transform_u_fourth),
        ("finite-N transform of u^2", _finite_u_squared),
        ("generating-function roundtrip", _generating_roundtrip),
        ("Cayley-Hamilton kernel", _cayley_hamilton),
    ]
    for name, fn in checks:
        report.checks.append(run_check(name, fn))
    for suite in SUITES:
        report.checks.extend(run_suite(suite, seed).checks)
    if not skip_mc:
        n_paths = DECAY_PATHS if paths is None else paths
        if n_paths < DECAY_PATHS:
            logger.warning(f"selftest: decay run reduced to {n_paths} paths per N (full run uses {DECAY_PATHS})")
        report.checks.append(
            run_check(
                f"large-N Monte Carlo decay ({n_paths} paths)",
                lambda: _large_n_decay(n_paths, seed, workers),
            )
        )
    logger.info(
        f"selftest: {len(report.checks) - len(report.failures)}/{len(report.checks)} checks passed"
    )
    return report

