"""Acceptance gate: one test (and one printed pass/fail line) per criterion.

Each criterion is exercised through the public verification suites so the
numbers reported here are the same ones the ``sonine-rd verify`` command
produces.  Criterion 6 is split into its four sub-items so each gets its own
verdict line.
"""

import math

import numpy as np
import pytest

from sonine_rd import specfun, verify


def _verdict(label: str, ok: bool) -> None:
    print(f"acceptance {label}: {'PASS' if ok else 'FAIL'}")


def _cases(result, claim_id=None, prefix=None, asserted=True):
    return [
        c
        for c in result.cases
        if (claim_id is None or c.claim_id == claim_id)
        and (prefix is None or c.name.startswith(prefix))
        and c.asserted == asserted
    ]


@pytest.fixture(scope="module")
def sonine_result():
    return verify.run_sonine_suite()


@pytest.fixture(scope="module")
def invariance_result():
    return verify.run_invariance_suite(jobs=4)


@pytest.fixture(scope="module")
def decay_result():
    return verify.run_decay_suite()


@pytest.fixture(scope="module")
def blowup_result():
    return verify.run_blowup_suite()


@pytest.fixture(scope="module")
def quasilinear_result():
    return verify.run_quasilinear_scalar_suite()


def test_criterion_1_sonine_identity(sonine_result):
    ok = sonine_result.passed
    _verdict("criterion 1 (Sonine identity, all catalog pairs)", ok)
    assert ok, [c.name for c in sonine_result.cases if not c.passed]


def test_criterion_2_exact_solution_convergence():
    errors = [
        verify._relaxation_error(0.5, n, 1.0) for n in (256, 512, 1024, 2048, 4096)
    ]
    ok = errors[-1] <= 1e-3 and all(a > b for a, b in zip(errors, errors[1:]))
    _verdict("criterion 2 (exact-solution convergence)", ok)
    assert ok, errors


def test_criterion_3_range_invariance(invariance_result):
    ok = invariance_result.passed and len(invariance_result.cases) == 30
    _verdict("criterion 3 (range invariance, 30 cases)", ok)
    assert ok, invariance_result.counts


def test_criterion_4_decay_bound_and_regimes(decay_result):
    bound_cases = _cases(decay_result, claim_id="decay-estimate")
    regime_cases = [
        c
        for c in decay_result.cases
        if c.claim_id.startswith("decay-regime") and c.asserted
    ]
    ok = all(c.passed for c in bound_cases + regime_cases)
    _verdict("criterion 4 (decay bound and kernel regimes)", ok)
    assert ok, [c.name for c in bound_cases + regime_cases if not c.passed]


def test_criterion_5_majorant_domination(decay_result):
    cases = _cases(decay_result, claim_id="majorant-domination")
    ok = bool(cases) and all(c.passed for c in cases)
    _verdict("criterion 5 (majorant domination)", ok)
    assert ok, [c.name for c in cases if not c.passed]


def test_criterion_6a_dirac_sanity_bracket(blowup_result):
    cases = _cases(blowup_result, prefix="dirac_sanity")
    ok = bool(cases) and all(c.passed for c in cases)
    _verdict("criterion 6a (classical-limit blow-up bracket)", ok)
    assert ok, [c.measured for c in cases if not c.passed]


def test_criterion_6b_closed_form_bracket(blowup_result):
    cases = _cases(blowup_result, claim_id="blowup-bracket")
    ok = bool(cases) and all(c.passed for c in cases)
    _verdict("criterion 6b (blow-up time within closed-form bracket)", ok)
    assert ok, [c.measured for c in cases if not c.passed]


def test_criterion_6c_pde_blowup_at_c0_8(blowup_result):
    (case,) = [c for c in blowup_result.cases if c.name == "pde_c0_8"]
    _verdict("criterion 6c (PDE blow-up at c0 = 8)", case.passed)
    assert case.passed, case.measured


def test_criterion_6d_threshold_bisection(blowup_result):
    (case,) = [c for c in blowup_result.cases if c.name == "threshold_bisection"]
    _verdict("criterion 6d (monotone, refinement-stable threshold)", case.passed)
    assert case.passed, case.measured


def test_criterion_7_quasilinear_decay(quasilinear_result):
    cases = _cases(quasilinear_result, claim_id="quasilinear-decay")
    slope_cases = [c for c in cases if c.name.startswith("alpha_")]
    ok = len(slope_cases) == 9 and all(c.passed for c in cases)
    _verdict("criterion 7 (quasilinear scalar decay, 9 exponent pairs)", ok)
    assert ok, [c.name for c in cases if not c.passed]


def test_criterion_8_special_functions():
    checks = [
        abs(specfun.gamma(1.0) - 1.0) < 1e-14,
        abs(specfun.gamma(4.0) - 6.0) < 1e-12,
        abs(specfun.gamma(0.5) - 1.77245385090552) < 1e-12,
        all(
            abs(specfun.gamma(x + 1.0) - x * specfun.gamma(x))
            <= 1e-12 * abs(x * specfun.gamma(x))
            for x in np.linspace(0.1, 10.0, 34)
        ),
        abs(specfun.mittag_leffler(1.0, 1.0, 1.0) - 2.71828182845905) < 1e-12,
        abs(specfun.mittag_leffler(2.0, 1.0, -((math.pi / 2) ** 2))) < 1e-12,
        all(
            abs(specfun.mittag_leffler(a, 1.0, 0.0) - 1.0) < 1e-14
            for a in (0.3, 1.0, 2.0)
        ),
        all(
            abs(specfun.mittag_leffler(1.0, 2.0, z) - (math.exp(z) - 1.0) / z)
            < 1e-10
            for z in (0.5, -0.5, 2.0, -2.0)
        ),
        abs(specfun.bessel_j(0.0, 0.0) - 1.0) < 1e-15,
        abs(specfun.bessel_i(0.0, 0.0) - 1.0) < 1e-15,
        abs(specfun.bessel_j(0.5, math.pi)) < 1e-12,
        0.9 <= specfun.exp_integral_e1(30.0) * 30.0 * math.exp(30.0) <= 1.0,
    ]
    ok = all(checks)
    _verdict("criterion 8 (special-function identities)", ok)
    assert ok, checks
