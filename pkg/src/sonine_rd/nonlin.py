"""Reaction nonlinearities with f(0) = f(1) = 0 and their numerical validators.

Catalog: Fisher-KPP f(v) = v(v-1) and its power generalization, plus the
logarithmic, exponential and hyperbolic variants.  Validators check the sign
pattern (negative on (0,1), positive outside [0,1]), local Lipschitz bounds,
convexity on the positive half-line, and the Osgood tail integral
int_m^inf dy/f(y) that drives finite-time blow-up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import DomainError

_OVERFLOW_Y = 350.0  # exp-based sources saturate rather than overflow


def _safe_exp(y: np.ndarray) -> np.ndarray:
    return np.exp(np.clip(y, -_OVERFLOW_Y, _OVERFLOW_Y))


@dataclass(frozen=True)
class NonlinearSource:
    name: str
    f: Callable[[np.ndarray], np.ndarray]
    df: Callable[[np.ndarray], np.ndarray] | None = None

    def __call__(self, y):
        return self.f(np.asarray(y, dtype=float))

    def deriv(self, y):
        y = np.asarray(y, dtype=float)
        if self.df is not None:
            return self.df(y)
        h = 1e-6 * np.maximum(1.0, np.abs(y))
        return (self.f(y + h) - self.f(y - h)) / (2 * h)


def fisher_kpp() -> NonlinearSource:
    return NonlinearSource("fisher_kpp", lambda v: v * (v - 1.0), lambda v: 2 * v - 1.0)


def power_fisher(p: float, q: float) -> NonlinearSource:
    if p <= 1 or q <= 1:
        raise DomainError("power_fisher requires p > 1 and q > 1")

    def f(v):
        return np.abs(v) ** (q - 1) * v * (np.abs(v) ** (p - 1) * v - 1.0)

    return NonlinearSource(f"power_fisher(p={p}, q={q})", f)


def logarithmic() -> NonlinearSource:
    return NonlinearSource(
        "logarithmic", lambda v: v * (v - 1.0) * np.log1p(np.abs(v))
    )


def exp_exp() -> NonlinearSource:
    return NonlinearSource(
        "exp_exp", lambda v: (_safe_exp(v) - 1.0) * (_safe_exp(v) - math.e)
    )


def exp_shift() -> NonlinearSource:
    return NonlinearSource("exp_shift", lambda v: v * (_safe_exp(v - 1.0) - 1.0))


def sinh_shift() -> NonlinearSource:
    return NonlinearSource("sinh_shift", lambda v: (v - 1.0) * np.sinh(np.clip(v, -_OVERFLOW_Y, _OVERFLOW_Y)))


def tanh_shift() -> NonlinearSource:
    return NonlinearSource(
        "tanh_shift", lambda v: v * np.tanh(v - 1.0), lambda v: np.tanh(v - 1.0) + v / np.cosh(v - 1.0) ** 2
    )


def custom(f: Callable, name: str = "custom") -> NonlinearSource:
    return NonlinearSource(name, lambda v: np.asarray(f(v), dtype=float))


CATALOG: dict[str, Callable[..., NonlinearSource]] = {
    "fisher_kpp": fisher_kpp,
    "power_fisher": power_fisher,
    "logarithmic": logarithmic,
    "exp_exp": exp_exp,
    "exp_shift": exp_shift,
    "sinh_shift": sinh_shift,
    "tanh_shift": tanh_shift,
}


def make_source(variant: str, **params) -> NonlinearSource:
    if variant not in CATALOG:
        raise DomainError(f"unknown nonlinearity {variant!r}")
    return CATALOG[variant](**params)


# ---------------------------------------------------------------------------
# Validators

@dataclass(frozen=True)
class HypothesisCReport:
    zero_at_zero: bool
    zero_at_one: bool
    negative_inside: bool
    positive_outside: bool
    lipschitz_bound: float
    passed: bool


def eval_f(source: NonlinearSource, y: float) -> float:
    return float(source(y))


def check_hypothesis_c(
    source: NonlinearSource, n_samples: int = 10_000, y_range=(-2.0, 3.0)
) -> HypothesisCReport:
    """Sign-pattern and local-Lipschitz check on a dense sample grid."""
    lo, hi = y_range
    if lo > -2.0 or hi < 3.0:
        raise DomainError("sample range must cover at least [-2, 3]")
    if n_samples < 100:
        raise DomainError("need at least 100 samples")
    y = np.linspace(lo, hi, n_samples)
    v = source(y)
    eps = 1e-9
    inside = (y > eps) & (y < 1.0 - eps)
    outside = (y < -eps) | (y > 1.0 + eps)
    zero_at_zero = abs(float(source(0.0))) <= 1e-14
    zero_at_one = abs(float(source(1.0))) <= 1e-12
    negative_inside = bool(np.all(v[inside] < 0))
    positive_outside = bool(np.all(v[outside] > 0))
    dq = np.abs(np.diff(v) / np.diff(y))
    lipschitz_bound = float(dq.max())
    passed = (
        zero_at_zero
        and zero_at_one
        and negative_inside
        and positive_outside
        and math.isfinite(lipschitz_bound)
    )
    return HypothesisCReport(
        zero_at_zero, zero_at_one, negative_inside, positive_outside,
        lipschitz_bound, passed,
    )


@dataclass(frozen=True)
class ConvexityReport:
    min_second_difference: float
    passed: bool


def convexity_check(
    source: NonlinearSource, y_max: float = 10.0, n_samples: int = 2_000
) -> ConvexityReport:
    """Central second differences on [0, y_max]; convex iff all >= -1e-8."""
    if y_max < 3:
        raise DomainError("convexity range must extend to at least y_max = 3")
    y = np.linspace(0.0, y_max, n_samples)
    v = source(y)
    d2 = v[2:] - 2 * v[1:-1] + v[:-2]
    m = float(d2.min())
    return ConvexityReport(m, m >= -1e-8)


@dataclass(frozen=True)
class OsgoodReport:
    integral_estimate: float
    converged: bool


def osgood_tail(source: NonlinearSource, m: float, y_max: float = 1e12) -> OsgoodReport:
    """Estimate int_m^inf dy / f(y) by geometric extension of the upper limit."""
    if m <= 1:
        raise DomainError("osgood_tail requires m > 1")
    probe = np.geomspace(m, y_max, 200)
    if np.any(source(probe) <= 0):
        raise DomainError("f must be positive on the integration range")

    def inv_f(y: float) -> float:
        return 1.0 / float(source(y))

    total = 0.0
    lo = m
    converged = False
    hi = min(10.0 * m, y_max)
    while True:
        seg, _ = integrate.quad(inv_f, lo, hi, limit=200)
        total += seg
        if abs(seg) < 1e-6 and lo > 100 * m:
            converged = True
            break
        if hi >= y_max:
            break
        lo, hi = hi, min(hi * 10.0, y_max)
    return OsgoodReport(total, converged)
