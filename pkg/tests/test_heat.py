"""Tests for the exact heat semigroup, its oracle, the free Hall transform and moments."""

import math
from fractions import Fraction

import numpy as np
import pytest

from tracecalc.algebra.monomial import u, v
from tracecalc.algebra.polynomial import TracePolynomial, cayley_hamilton_polynomial, trace_of
from tracecalc.algebra.rings import COMPLEX, EXPTPOLY, TPOLY, ExpTPoly, TPoly
from tracecalc.algebra.univariate import SingleVarPoly
from tracecalc.errors import BlockSizeError, NonScalarError, RingMismatchError
from tracecalc.heat import (
    HeatSemigroup,
    SemigroupValue,
    biane_moment,
    biane_moment_closed_form,
    concentration_target,
    expect_finite,
    free_hall_transform,
    heat_finite_N,
    heat_limit,
    inverse_free_hall,
    moment_table,
    nilpotent_exp_oracle,
    u_squared_closed_form,
    variance_finite,
)
from tracecalc.heat.finite import check_block
from tracecalc.heat.hall import inverse_power, transform_power

from tests.helpers import random_polynomial


def tpoly_terms(terms: dict) -> TracePolynomial:
    """Labels mapped to t-coefficient lists."""
    return TracePolynomial.parse_terms({k: TPoly(c) for k, c in terms.items()}, TPOLY)


def power(k: int) -> TracePolynomial:
    return TracePolynomial.monomial(u(k), 1)


def trace(k: int) -> TracePolynomial:
    return TracePolynomial.monomial(v(k), 1)


# ── Large-N semigroup ───────────────────────────────────────────────


class TestHeatLimit:
    def test_u_is_an_eigenvector(self):
        value = heat_limit(power(1))
        assert value.grades == [1]
        assert value.body(1) == tpoly_terms({"u": [1]})

    def test_u_squared(self):
        assert heat_limit(power(2)).body(2) == tpoly_terms({"u^2": [1], "u*v1": [0, -1]})

    def test_u_cubed(self):
        expected = tpoly_terms({
            "u^3": [1],
            "u^2*v1": [0, -2],
            "u*v2": [0, -1],
            "u*v1^2": [0, 0, Fraction(3, 2)],
        })
        assert heat_limit(power(3)).body(3) == expected

    def test_trace_square(self):
        assert heat_limit(trace(2)).body(2) == tpoly_terms({"v2": [1], "v1^2": [0, -1]})

    def test_multiplicative_on_traces(self):
        value = heat_limit(TracePolynomial.monomial(v(1, 2), 1))
        assert value.body(2) == tpoly_terms({"v1^2": [1]})

    def test_initial_value_is_identity(self):
        p = cayley_hamilton_polynomial()
        assert heat_limit(p).initial() == p

    def test_trace_commutes(self):
        for k in range(1, 7):
            assert trace_of(heat_limit(power(k)).body(k)) == heat_limit(trace(k)).body(k)

    def test_numeric_value(self):
        value = heat_limit(power(2)).at(1.0)
        assert value.coefficient(u(2)) == pytest.approx(math.exp(-1))
        assert value.coefficient(u(1) * v(1)) == pytest.approx(-math.exp(-1))

    def test_complex_coefficients_refused(self):
        with pytest.raises(RingMismatchError):
            heat_limit(power(2).change_ring(COMPLEX))

    def test_mixed_grades(self):
        p = TracePolynomial.parse_terms({"u^2": 1, "v1": 3, "1": 2})
        assert heat_limit(p).grades == [0, 1, 2]


class TestHeatSemigroup:
    def test_warm_fills_both_kinds(self):
        semigroup = HeatSemigroup()
        semigroup.warm(4)
        assert len(semigroup) == 8
        assert ("u", 4) in semigroup.keys()

    def test_export_load_roundtrip(self):
        source = HeatSemigroup()
        source.warm(5)
        fresh = HeatSemigroup()
        assert fresh.load(source.export()) == len(source)
        assert fresh.u_power(5) == source.u_power(5)
        assert fresh.trace_power(4) == source.trace_power(4)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            HeatSemigroup().load({("w", 1): tpoly_terms({"v1": [1]})})

    def test_power_must_be_positive(self):
        with pytest.raises(ValueError):
            HeatSemigroup().u_power(0)

    def test_private_semigroup(self):
        semigroup = HeatSemigroup()
        assert heat_limit(power(3), semigroup) == heat_limit(power(3))
        assert len(semigroup) > 0


class TestSemigroupValue:
    def test_json_roundtrip(self):
        value = heat_limit(TracePolynomial.parse_terms({"u^3": 1, "v2": -2}))
        assert SemigroupValue.from_json(value.to_json()) == value

    def test_decay_checked(self):
        data = heat_limit(power(2)).to_json()
        data["grades"][0]["decay"] = "3/2"
        with pytest.raises(ValueError):
            SemigroupValue.from_json(data)

    def test_wrong_grade_rejected(self):
        with pytest.raises(ValueError):
            SemigroupValue(((3, tpoly_terms({"u^2": [1]})),))

    def test_addition(self):
        a = heat_limit(power(1))
        b = heat_limit(power(2))
        assert (a + b).grades == [1, 2]
        assert (a + a.scale(-1)).grades == []

    def test_exp_polynomial(self):
        value = heat_limit(power(2)).to_exp_polynomial()
        assert value.coefficient(u(2)) == ExpTPoly.exp(-1)
        assert value.coefficient(u(1) * v(1)) == ExpTPoly.exp(-1, TPoly([0, -1]))


# ── Nilpotent oracle ────────────────────────────────────────────────


class TestOracle:
    @pytest.mark.parametrize("k", range(1, 8))
    def test_agrees_with_recursion_on_powers(self, k):
        oracle = nilpotent_exp_oracle(k)
        p = power(k).change_ring(TPOLY)
        assert oracle.apply_polynomial(p) == heat_limit(power(k)).body(k)

    @pytest.mark.parametrize("k", range(1, 8))
    def test_agrees_with_recursion_on_traces(self, k):
        oracle = nilpotent_exp_oracle(k)
        p = trace(k).change_ring(TPOLY)
        assert oracle.apply_polynomial(p) == heat_limit(trace(k)).body(k)

    def test_mixed_monomial(self):
        m = TracePolynomial.parse_terms({"u^2*v1*v2": 1})
        oracle = nilpotent_exp_oracle(5)
        assert oracle.apply_polynomial(m.change_ring(TPOLY)) == heat_limit(m).body(5)

    def test_negative_grade(self):
        with pytest.raises(ValueError):
            nilpotent_exp_oracle(-1)


# ── Free Hall transform ─────────────────────────────────────────────


class TestFreeHall:
    def test_transform_of_u_squared(self):
        expected = SingleVarPoly(
            [0, ExpTPoly.exp(-1, TPoly([0, -1])), ExpTPoly.exp(-1)], EXPTPOLY, "z"
        )
        assert transform_power(2) == expected

    def test_transform_of_u_fourth(self):
        q = transform_power(4)
        assert q.coefficient(4) == ExpTPoly.exp(-2)
        assert q.coefficient(3) == ExpTPoly.exp(-2, TPoly([0, -3]))
        assert q.coefficient(2) == ExpTPoly.exp(-2, TPoly([0, -2, 4]))
        assert q.coefficient(1) == ExpTPoly.exp(-2, TPoly([0, -1, 4, Fraction(-8, 3)]))

    def test_inverse_of_z_squared(self):
        expected = SingleVarPoly(
            [0, ExpTPoly.exp(Fraction(1, 2), TPoly([0, 1])), ExpTPoly.exp(1)], EXPTPOLY, "u"
        )
        assert inverse_power(2) == expected

    @pytest.mark.parametrize("k", range(0, 6))
    def test_symbolic_roundtrip(self, k):
        q = SingleVarPoly.monomial(k, 1, EXPTPOLY, "z")
        assert free_hall_transform(inverse_free_hall(q)) == q

    def test_numeric_transform(self):
        q = free_hall_transform(SingleVarPoly([0, 0, 1]), t=1.0)
        assert q.ring is COMPLEX
        assert q.coefficient(2) == pytest.approx(math.exp(-1))
        assert q.coefficient(1) == pytest.approx(-math.exp(-1))

    def test_complex_input_needs_t(self):
        p = SingleVarPoly([1, 2], COMPLEX)
        with pytest.raises(ValueError):
            free_hall_transform(p)
        assert free_hall_transform(p, t=0.5).coefficient(1) == pytest.approx(2 * math.exp(-0.25))

    def test_negative_time(self):
        with pytest.raises(ValueError):
            inverse_free_hall(SingleVarPoly([0, 1]), t=-1.0)


# ── Moments ─────────────────────────────────────────────────────────


class TestMoments:
    def test_first_moments(self):
        assert biane_moment(1) == ExpTPoly.exp(Fraction(-1, 2))
        assert biane_moment(2) == ExpTPoly.exp(-1, TPoly([1, -1]))
        assert biane_moment(3) == ExpTPoly.exp(Fraction(-3, 2), TPoly([1, -3, Fraction(3, 2)]))

    def test_fourth_moment_at_one(self):
        assert biane_moment(4).at(1.0) == pytest.approx(math.exp(-2) / 3)

    @pytest.mark.parametrize("k", range(1, 11))
    def test_closed_form(self, k):
        assert biane_moment(k) == biane_moment_closed_form(k)

    def test_moment_zero_rejected(self):
        with pytest.raises(ValueError):
            biane_moment_closed_form(0)

    def test_table(self):
        table = moment_table(3)
        rows = table.rows(1.0)
        assert [r["k"] for r in rows] == [1, 2, 3]
        assert rows[1]["value"] == pytest.approx(0.0, abs=1e-15)
        assert table.numeric(0.0) == {1: 1.0, 2: 1.0, 3: 1.0}
        assert "value" not in table.rows()[0]


class TestConcentrationTarget:
    def test_u_times_trace(self):
        p = TracePolynomial.parse_terms({"u*v1": 1})
        expected = SingleVarPoly([0, ExpTPoly.exp(Fraction(-1, 2))], EXPTPOLY, "u")
        assert concentration_target(p) == expected

    def test_scalar(self):
        p = TracePolynomial.monomial(v(1, 2), 1)
        assert concentration_target(p) == SingleVarPoly([ExpTPoly.exp(-1)], EXPTPOLY)

    def test_numeric(self):
        p = TracePolynomial.parse_terms({"u^2*v2": 1})
        q = concentration_target(p, t=2.0)
        assert q.coefficient(2) == pytest.approx(math.exp(-2) * (1 - 2))


# ── Finite N ────────────────────────────────────────────────────────


class TestHeatFiniteN:
    @pytest.mark.parametrize("t", [0.25, 1.0, 4.0])
    @pytest.mark.parametrize("N", [2, 8, 32])
    def test_u_squared_closed_form(self, t, N):
        value = heat_finite_N(power(2), t, N)
        a, b = u_squared_closed_form(t, N)
        assert value.coefficient(u(2)) == pytest.approx(a, abs=1e-12)
        assert value.coefficient(u(1) * v(1)) == pytest.approx(b, abs=1e-12)

    def test_time_zero_is_identity(self):
        p = cayley_hamilton_polynomial()
        assert heat_finite_N(p, 0.0, 3) == p.change_ring(COMPLEX)

    def test_negative_time(self):
        with pytest.raises(ValueError):
            heat_finite_N(power(1), -0.5, 2)

    @pytest.mark.parametrize("ring", [TPOLY, EXPTPOLY])
    def test_symbolic_coefficients_refused(self, ring):
        with pytest.raises(RingMismatchError, match=ring.name):
            heat_finite_N(power(2).change_ring(ring), 1.0, 3)

    def test_large_n_approaches_limit(self):
        finite = heat_finite_N(power(3), 1.0, 10_000)
        limit = heat_limit(power(3)).at(1.0)
        for m, c in limit:
            assert finite.coefficient(m) == pytest.approx(c, abs=1e-6)

    def test_block_cap(self):
        assert check_block(12) == 272
        with pytest.raises(BlockSizeError):
            heat_finite_N(power(12), 1.0, 4, block_cap=100)


class TestSemigroupLaw:
    @pytest.mark.parametrize("k", range(1, 7))
    def test_exact_limit_composes(self, k):
        rng = np.random.default_rng(k)
        p = random_polynomial(rng, [k], density=0.6) + power(k)
        t, s = Fraction(1, 3), Fraction(3, 4)
        first = heat_limit(p)
        # Both steps carry the same e^{-kt/2} prefactor, so the bodies compose on their own.
        then = heat_limit(first.body_at(k, t))
        assert then.body_at(k, s) == first.body_at(k, t + s)

    @pytest.mark.parametrize("N", [1, 3, 8])
    def test_finite_n_composes(self, N):
        rng = np.random.default_rng(N)
        p = random_polynomial(rng, range(5))
        two_steps = heat_finite_N(heat_finite_N(p, 0.4, N), 0.7, N)
        one_step = heat_finite_N(p, 1.1, N)
        for m in {m for m, _ in one_step} | {m for m, _ in two_steps}:
            a, b = one_step.coefficient(m), two_steps.coefficient(m)
            assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


class TestExpectations:
    @pytest.mark.parametrize("N", [1, 2, 5])
    def test_trace_mean_exact(self, N):
        assert expect_finite(trace(1), 0.7, N) == pytest.approx(math.exp(-0.35), abs=1e-14)

    def test_trace_square_on_u2(self):
        expected = math.exp(-1) * (math.cosh(0.5) - 2 * math.sinh(0.5))
        assert expect_finite(trace(2), 1.0, 2) == pytest.approx(expected, rel=1e-12)

    def test_non_scalar(self):
        with pytest.raises(NonScalarError):
            expect_finite(power(1), 1.0, 2)

    def test_variance_shrinks_like_inverse_square(self):
        ratio = variance_finite(1, 1.0, 8) / variance_finite(1, 1.0, 16)
        assert 3.5 <= ratio <= 4.5

    def test_variance_positive(self):
        assert variance_finite(2, 0.5, 4) > 0
