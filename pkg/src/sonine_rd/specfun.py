"""Special functions underlying the kernel catalog.

Gamma, the two-parameter Mittag-Leffler function, Bessel functions of real
(possibly negative, non-integer) order and the exponential integral E1.  All
evaluations are pure and deterministic.  Each function has a ``*_result``
variant that additionally reports an estimated absolute error.

The Mittag-Leffler function is evaluated from the power series whenever the
internal cancellation can be absorbed by (adaptive) working precision, and
from the algebraic asymptotic expansion for large negative arguments
otherwise.  The Bessel functions use the ascending series, again with
adaptive precision once the alternating terms start to cancel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy import special as sc

from .errors import DomainError, RangeError

__all__ = [
    "EvalResult",
    "gamma",
    "gamma_result",
    "mittag_leffler",
    "mittag_leffler_result",
    "bessel_j",
    "bessel_i",
    "bessel_j_result",
    "bessel_i_result",
    "exp_integral_e1",
    "exp_integral_e1_result",
]


@dataclass(frozen=True)
class EvalResult:
    value: float
    est_abs_error: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.est_abs_error) or self.est_abs_error < 0:
            raise ValueError("error estimate must be finite and nonnegative")


# ---------------------------------------------------------------------------
# Gamma

def gamma(x: float) -> float:
    """Gamma function for real x away from the poles at 0, -1, -2, ..."""
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"gamma pole at x={x}")
    return float(sc.gamma(x))


def gamma_result(x: float) -> EvalResult:
    v = gamma(x)
    return EvalResult(v, abs(v) * 1e-14)


def _rgamma(x: float) -> float:
    """1/Gamma(x); finite (zero) at the poles."""
    return float(sc.rgamma(x))


# ---------------------------------------------------------------------------
# Mittag-Leffler

# Series evaluation switches to mpmath once more than _FLOAT_CANCEL_DIGITS
# decimal digits cancel; beyond _MAX_DPS digits the series is abandoned in
# favor of the asymptotic expansion (or a RangeError).
_FLOAT_CANCEL_DIGITS = 6.0
_MAX_DPS = 3000
_ML_TOL = 1e-12


def _ml_series_peak_digits(alpha: float, beta: float, z: float) -> float:
    """Decimal magnitude of the largest term of sum |z|^k / Gamma(alpha k + beta)."""
    if z == 0.0:
        return 0.0
    logz = math.log10(abs(z))
    peak = 0.0
    k = 0
    decreasing = 0
    while k < 200_000:
        a = alpha * k + beta
        if a > 0:
            t = k * logz - math.lgamma(a) / math.log(10)
            if t > peak:
                peak = t
                decreasing = 0
            else:
                decreasing += 1
                if decreasing > 50 and t < peak - 40:
                    break
        k += 1
    return peak


def _ml_series_float(alpha: float, beta: float, z: float) -> tuple[float, float]:
    total = 0.0
    term_scale = 0.0
    zk = 1.0
    for k in range(10_000):
        t = zk * _rgamma(alpha * k + beta)
        total += t
        term_scale = max(term_scale, abs(t))
        if abs(t) <= _ML_TOL * 1e-3 * max(1.0, abs(total)) and k > 4:
            return total, term_scale * 1e-16 + abs(t)
        zk *= z
    raise RangeError("Mittag-Leffler series did not converge in float precision")


def _ml_series_mp(alpha: float, beta: float, z: float, dps: int) -> tuple[float, float]:
    with mp.workdps(dps):
        za = mp.mpf(z)
        total = mp.mpf(0)
        zk = mp.mpf(1)
        tol = mp.mpf(10) ** (-(dps - 5))
        alpha_mp = mp.mpf(alpha)
        beta_mp = mp.mpf(beta)
        for k in range(2_000_000):
            a = alpha_mp * k + beta_mp
            if a > 0 or a != mp.floor(a):
                t = zk / mp.gamma(a)
                total += t
            else:
                t = mp.mpf(0)
            if abs(t) < tol * max(mp.mpf(1), abs(total)) and k > 4:
                break
            zk *= za
        return float(total), abs(float(total)) * 1e-14 + 1e-14


def _ml_asymptotic(alpha: float, beta: float, z: float) -> tuple[float, float]:
    """Algebraic expansion -sum_{k>=1} z^{-k}/Gamma(beta - alpha k) for z -> -inf."""
    terms = []
    zk = 1.0
    for k in range(1, 120):
        zk *= z
        terms.append(-_rgamma(beta - alpha * k) / zk)
    # optimal truncation: stop just before the smallest-magnitude term
    # (pole-killed zero terms are not truncation points)
    mags = [abs(t) if t != 0.0 else math.inf for t in terms]
    if all(m == math.inf for m in mags):
        # every algebraic term vanishes; remainder is exponentially small here
        return 0.0, 1e-15
    k_min = int(np.argmin(mags))
    value = float(sum(terms[: k_min + 1]))
    err = mags[k_min]
    if k_min + 1 < len(mags) and math.isfinite(mags[k_min + 1]):
        err += mags[k_min + 1]
    return value, err


def mittag_leffler_result(alpha: float, beta: float, z: float) -> EvalResult:
    if not (0 < alpha <= 2):
        raise DomainError(f"alpha={alpha} outside (0, 2]")
    if not math.isfinite(beta) or not math.isfinite(z):
        raise DomainError("beta and z must be finite")

    peak = _ml_series_peak_digits(alpha, beta, z)
    if peak <= _FLOAT_CANCEL_DIGITS or z >= 0:
        # no destructive cancellation: float series suffices
        if peak > 250:
            raise RangeError(
                f"mittag_leffler(alpha={alpha}, beta={beta}, z={z}): result magnitude "
                "exceeds the declared double-precision range"
            )
        v, err = _ml_series_float(alpha, beta, z)
        return EvalResult(v, err)

    dps = int(peak) + 25
    if dps <= _MAX_DPS:
        v, err = _ml_series_mp(alpha, beta, z, dps)
        return EvalResult(v, err)

    # large negative z with strong cancellation: asymptotic expansion
    if z < 0 and (alpha <= 0.95 or 1.05 <= alpha <= 1.9):
        v, err = _ml_asymptotic(alpha, beta, z)
        if err <= 1e-11:
            return EvalResult(v, err)
    raise RangeError(
        f"mittag_leffler(alpha={alpha}, beta={beta}, z={z}) is outside the declared range"
    )


@lru_cache(maxsize=200_000)
def _ml_cached(alpha: float, beta: float, z: float) -> float:
    return mittag_leffler_result(alpha, beta, z).value


def mittag_leffler(alpha: float, beta: float, z: float) -> float:
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z."""
    return _ml_cached(float(alpha), float(beta), float(z))


# ---------------------------------------------------------------------------
# Bessel functions of real order (ascending series)

_BESSEL_FLOAT_Y = 15.0


def _bessel_series(nu: float, y: float, signed: bool) -> tuple[float, float]:
    """Ascending series for J_nu (signed) or I_nu; valid for non-integer or
    nonnegative nu with nu > -2 and y >= 0."""
    if y < 0:
        raise DomainError("bessel argument must be nonnegative")
    if y == 0.0:
        if nu == 0.0:
            return 1.0, 0.0
        if nu > 0:
            return 0.0, 0.0
        raise DomainError(f"bessel of negative order {nu} diverges at 0")
    half = y / 2.0
    if y <= _BESSEL_FLOAT_Y:
        total = 0.0
        scale = 0.0
        for k in range(0, 400):
            lt = (2 * k + nu) * math.log(half) - math.lgamma(k + 1)
            rg = _rgamma(k + nu + 1)
            t = math.exp(lt) * rg
            if signed and k % 2:
                t = -t
            total += t
            scale = max(scale, abs(t))
            if abs(t) <= 1e-18 * max(1.0, abs(total)) and k > 3:
                break
        return total, scale * 1e-16 + 1e-15
    # adaptive precision: cancellation grows like e^y for the oscillatory series
    dps = 25 + int(y)
    with mp.workdps(dps):
        h = mp.mpf(y) / 2
        nu_mp = mp.mpf(nu)
        h2 = h * h
        # term recursion keeps the alternating sum exactly consistent in mp
        t = h**nu_mp / mp.gamma(nu_mp + 1)
        total = mp.mpf(0)
        tol = mp.mpf(10) ** (-(dps - 5))
        for k in range(1, 10_000):
            total += t
            if abs(t) < tol * max(mp.mpf(1), abs(total)) and k > 4:
                break
            t = t * h2 / (k * (k + nu_mp))
            if signed:
                t = -t
        v = float(total)
    return v, abs(v) * 1e-13 + 1e-14


def _check_bessel_args(nu: float, y: float) -> None:
    if nu <= -1:
        raise DomainError(f"bessel order nu={nu} <= -1 is outside the public domain")
    if y < 0:
        raise DomainError("bessel argument must be nonnegative")
    if y > 50:
        raise RangeError(f"bessel argument y={y} exceeds the declared range (y <= 50)")


def bessel_j(nu: float, y: float) -> float:
    """Bessel function J_nu(y) for real order nu > -1 and 0 <= y <= 50."""
    _check_bessel_args(nu, y)
    return _bessel_series(nu, y, signed=True)[0]


def bessel_i(nu: float, y: float) -> float:
    """Modified Bessel function I_nu(y) for real order nu > -1 and 0 <= y <= 50."""
    _check_bessel_args(nu, y)
    return _bessel_series(nu, y, signed=False)[0]


def bessel_j_result(nu: float, y: float) -> EvalResult:
    _check_bessel_args(nu, y)
    v, err = _bessel_series(nu, y, signed=True)
    return EvalResult(v, err)


def bessel_i_result(nu: float, y: float) -> EvalResult:
    _check_bessel_args(nu, y)
    v, err = _bessel_series(nu, y, signed=False)
    return EvalResult(v, err)


# ---------------------------------------------------------------------------
# Exponential integral

def exp_integral_e1(t: float) -> float:
    """Exponential integral E1(t) = int_t^inf e^{-u}/u du for t > 0."""
    if t <= 0:
        raise DomainError(f"exp_integral_e1 requires t > 0, got {t}")
    return float(sc.exp1(t))


def exp_integral_e1_result(t: float) -> EvalResult:
    v = exp_integral_e1(t)
    return EvalResult(v, abs(v) * 1e-12)


def exp_scaled_e1(t: float | np.ndarray) -> float | np.ndarray:
    """e^t * E1(t), stable for large t (used by the distributed-order kernel)."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("exp_scaled_e1 requires t > 0")
    out = np.empty_like(t)
    small = t <= 500.0
    out[small] = np.exp(t[small]) * sc.exp1(t[small])
    if np.any(~small):
        out[~small] = np.array(
            [float(mp.exp(x) * mp.e1(x)) for x in np.atleast_1d(t[~small])]
        )
    if out.ndim == 0:
        return float(out)
    return out
