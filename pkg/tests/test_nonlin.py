"""Tests for the nonlinearity catalog and its validators."""

import math

import numpy as np
import pytest

from sonine_rd import nonlin
from sonine_rd.errors import DomainError

CATALOG = [
    ("fisher_kpp", {}),
    ("power_fisher", {"p": 2.0, "q": 3.0}),
    ("logarithmic", {}),
    ("exp_exp", {}),
    ("exp_shift", {}),
    ("sinh_shift", {}),
    ("tanh_shift", {}),
]


def _sources():
    return [(name, nonlin.make_source(name, **params)) for name, params in CATALOG]


class TestEval:
    def test_fisher_values(self):
        f = nonlin.fisher_kpp()
        assert nonlin.eval_f(f, 0.5) == pytest.approx(-0.25)
        assert nonlin.eval_f(f, 2.0) == pytest.approx(2.0)

    def test_sinh_shift_zero_at_one(self):
        f = nonlin.sinh_shift()
        assert nonlin.eval_f(f, 1.0) == 0.0

    @pytest.mark.parametrize("name,params", CATALOG)
    def test_roots_at_zero_and_one(self, name, params):
        f = nonlin.make_source(name, **params)
        assert abs(nonlin.eval_f(f, 0.0)) < 1e-14
        assert abs(nonlin.eval_f(f, 1.0)) < 1e-12

    def test_vectorized_evaluation(self):
        f = nonlin.fisher_kpp()
        y = np.array([0.0, 0.5, 1.0, 2.0])
        assert np.allclose(f(y), y * (y - 1.0))

    def test_unknown_variant(self):
        with pytest.raises(DomainError):
            nonlin.make_source("quadratic")


class TestHypothesisC:
    @pytest.mark.parametrize("name,params", CATALOG)
    def test_catalog_passes(self, name, params):
        f = nonlin.make_source(name, **params)
        report = nonlin.check_hypothesis_c(f, n_samples=10_000, y_range=(-5.0, 5.0))
        assert report.passed, report

    def test_counterexample_fails(self):
        f = nonlin.custom(lambda y: np.asarray(y, dtype=float), "identity")
        report = nonlin.check_hypothesis_c(f)
        assert not report.zero_at_one
        assert not report.passed

    def test_range_must_cover_core(self):
        f = nonlin.fisher_kpp()
        with pytest.raises(DomainError):
            nonlin.check_hypothesis_c(f, y_range=(-1.0, 3.0))
        with pytest.raises(DomainError):
            nonlin.check_hypothesis_c(f, n_samples=10)


class TestConvexity:
    def test_fisher_convex(self):
        assert nonlin.convexity_check(nonlin.fisher_kpp(), y_max=10.0).passed

    def test_power_fisher_convex_beyond_one(self):
        # v^{p+q-1} - v^q dips concave near 0 (second derivative
        # ~ -q(q-1)v^{q-2} there) but is convex past the positive root of f''
        f = nonlin.make_source("power_fisher", p=2.0, q=3.0)
        assert not nonlin.convexity_check(f, y_max=50.0).passed
        y = np.linspace(1.0, 50.0, 2000)
        v = f(y)
        assert np.all(v[2:] - 2 * v[1:-1] + v[:-2] >= -1e-8)

    def test_concave_fails(self):
        f = nonlin.custom(lambda y: -np.asarray(y, dtype=float) ** 2, "neg_square")
        assert not nonlin.convexity_check(f, y_max=10.0).passed

    def test_tanh_shift_reported(self):
        # not asserted convex a priori; the report itself must be well formed
        rep = nonlin.convexity_check(nonlin.tanh_shift(), y_max=10.0)
        assert math.isfinite(rep.min_second_difference)


class TestOsgoodTail:
    def test_fisher_partial_fractions(self):
        # int_m^inf dy / (y(y-1)) = ln(m / (m-1))
        for m in (1.5, 2.0, 3.0):
            rep = nonlin.osgood_tail(nonlin.fisher_kpp(), m)
            assert rep.converged
            assert rep.integral_estimate == pytest.approx(
                math.log(m / (m - 1.0)), abs=1e-6
            )

    def test_fisher_at_two_is_ln2(self):
        rep = nonlin.osgood_tail(nonlin.fisher_kpp(), 2.0)
        assert rep.integral_estimate == pytest.approx(0.693147, abs=1e-6)

    def test_linear_growth_diverges(self):
        f = nonlin.custom(lambda y: np.asarray(y, dtype=float), "linear")
        rep = nonlin.osgood_tail(f, 2.0, y_max=1e9)
        assert not rep.converged

    def test_exp_exp_converges(self):
        rep = nonlin.osgood_tail(nonlin.exp_exp(), 2.0)
        assert rep.converged

    def test_precondition_on_sign(self):
        f = nonlin.custom(lambda y: -np.ones_like(np.asarray(y, dtype=float)), "neg")
        with pytest.raises(DomainError):
            nonlin.osgood_tail(f, 2.0)
        with pytest.raises(DomainError):
            nonlin.osgood_tail(nonlin.fisher_kpp(), 0.9)
