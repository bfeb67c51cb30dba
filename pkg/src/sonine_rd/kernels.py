"""Catalog of Sonine kernel pairs (k, l) with (k*l)(t) = 1.

Each variant carries pointwise evaluators for k and l, their cumulative
integrals K = 1*k and Lambda = 1*l, and one-sided derivatives k', l' used by
the convolution-identity verifier.  Cumulative integrals use closed forms:

* power pair          Lambda(t) = t^a / Gamma(a+1)
* tempered pair       Lambda(t) = mu^-a P(a, mu t)
                                 + mu^(1-a) [t P(a, mu t) - (a/mu) P(a+1, mu t)]
* Bessel pair         Lambda(t) = t^((1-a)/2) I_{1-a}(2 sqrt t)
* Mittag-Leffler pair Lambda(t) = t^b E_{a,b+1}(-t^a)
* distributed order   Lambda(t) = e^t E1(t) + log t + euler_gamma

(P is the regularized lower incomplete gamma function.)  The multi-term
variant has no closed-form associate; its l is reconstructed numerically by
first-kind Volterra product integration against the exact cumulative of k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy import integrate
from scipy import special as sc

from . import specfun
from .errors import DomainError, NumericalError

EULER_GAMMA = float(np.euler_gamma)

ArrayLike = Union[float, np.ndarray]


def g_power(mu: float, t: ArrayLike) -> ArrayLike:
    """Riemann-Liouville power kernel g_mu(t) = t^(mu-1)/Gamma(mu).

    Defined by Gamma continuation for negative non-integer mu (needed for
    kernel derivatives)."""
    t = np.asarray(t, dtype=float)
    out = t ** (mu - 1.0) * sc.rgamma(mu)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Variant specs

@dataclass(frozen=True)
class Dirac:
    pass


@dataclass(frozen=True)
class RiemannLiouville:
    alpha: float

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise DomainError(f"RiemannLiouville alpha={self.alpha} outside (0, 1)")


@dataclass(frozen=True)
class DistributedOrder:
    pass


@dataclass(frozen=True)
class Tempered:
    alpha: float
    mu: float

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise DomainError(f"Tempered alpha={self.alpha} outside (0, 1)")
        if self.mu <= 0:
            raise DomainError(f"Tempered mu={self.mu} must be positive")


@dataclass(frozen=True)
class BesselPair:
    alpha: float

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise DomainError(f"BesselPair alpha={self.alpha} outside (0, 1)")


@dataclass(frozen=True)
class MittagLefflerPair:
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not 0 < self.alpha < self.beta < 1:
            raise DomainError(
                f"MittagLefflerPair requires 0 < alpha < beta < 1, "
                f"got alpha={self.alpha}, beta={self.beta}"
            )


@dataclass(frozen=True)
class MultiTerm:
    alphas: tuple[float, ...]

    def __init__(self, *alphas: float) -> None:
        if len(alphas) == 1 and isinstance(alphas[0], (tuple, list)):
            alphas = tuple(alphas[0])
        object.__setattr__(self, "alphas", tuple(float(a) for a in alphas))
        if not self.alphas:
            raise DomainError("MultiTerm needs at least one exponent")
        for a in self.alphas:
            if not 0 < a < 1:
                raise DomainError(f"MultiTerm exponent {a} outside (0, 1)")
        if any(a <= b for a, b in zip(self.alphas, self.alphas[1:])):
            raise DomainError("MultiTerm exponents must be strictly decreasing")


SonineSpec = Union[
    Dirac, RiemannLiouville, DistributedOrder, Tempered,
    BesselPair, MittagLefflerPair, MultiTerm,
]


# ---------------------------------------------------------------------------
# Kernel pair

@dataclass
class KernelPair:
    """A Sonine pair with evaluators; immutable after construction.

    ``k_eval`` is None for the Dirac variant (k is a distribution there).
    ``dk_eval``/``dl_eval`` are one-sided derivatives used internally by
    :func:`verify_sonine`.
    """

    spec: SonineSpec
    k_eval: Callable[[ArrayLike], ArrayLike] | None
    l_eval: Callable[[ArrayLike], ArrayLike]
    cum_l: Callable[[ArrayLike], ArrayLike]
    cum_k: Callable[[ArrayLike], ArrayLike]
    dk_eval: Callable[[float], float] | None = None
    dl_eval: Callable[[float], float] | None = None
    l_integrable_on_halfline: bool = False

    @property
    def name(self) -> str:
        s = self.spec
        if isinstance(s, Dirac):
            return "dirac"
        if isinstance(s, RiemannLiouville):
            return f"riemann_liouville(alpha={s.alpha})"
        if isinstance(s, DistributedOrder):
            return "distributed_order"
        if isinstance(s, Tempered):
            return f"tempered(alpha={s.alpha}, mu={s.mu})"
        if isinstance(s, BesselPair):
            return f"bessel(alpha={s.alpha})"
        if isinstance(s, MittagLefflerPair):
            return f"mittag_leffler(alpha={s.alpha}, beta={s.beta})"
        if isinstance(s, MultiTerm):
            return f"multi_term{s.alphas}"
        return type(s).__name__


def _vectorize_scalar(f: Callable[[float], float]) -> Callable[[ArrayLike], ArrayLike]:
    def wrapped(t: ArrayLike) -> ArrayLike:
        arr = np.asarray(t, dtype=float)
        if arr.ndim == 0:
            return f(float(arr))
        return np.array([f(float(x)) for x in arr.ravel()]).reshape(arr.shape)
    return wrapped


# distributed-order k(t) = int_0^1 g_a(t) da; Gauss-Legendre on [0, 0.1] u [0.1, 1]
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def _gl_panel(lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    return mid + half * _GL_NODES, half * _GL_WEIGHTS


_DO_NODES_A, _DO_W_A = _gl_panel(0.0, 0.1)
_DO_NODES_B, _DO_W_B = _gl_panel(0.1, 1.0)
_DO_NODES = np.concatenate([_DO_NODES_A, _DO_NODES_B])
_DO_WEIGHTS = np.concatenate([_DO_W_A, _DO_W_B])


def _distributed_k(t: ArrayLike, shift: float = 0.0) -> ArrayLike:
    """int_0^1 g_(a+shift)(t) da evaluated by the split Gauss rule."""
    t = np.asarray(t, dtype=float)
    tt = t[..., None]
    vals = tt ** (_DO_NODES + shift - 1.0) * sc.rgamma(_DO_NODES + shift)
    out = vals @ _DO_WEIGHTS
    return float(out) if out.ndim == 0 else out


def make_pair(spec: SonineSpec) -> KernelPair:
    """Build the evaluator bundle for a catalog Sonine pair."""
    if isinstance(spec, Dirac):
        return KernelPair(
            spec=spec,
            k_eval=None,
            l_eval=lambda t: np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else 1.0,
            cum_l=lambda t: np.asarray(t, dtype=float) if np.ndim(t) else float(t),
            cum_k=lambda t: np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else 1.0,
        )

    if isinstance(spec, RiemannLiouville):
        a = spec.alpha
        return KernelPair(
            spec=spec,
            k_eval=lambda t: g_power(1 - a, t),
            l_eval=lambda t: g_power(a, t),
            cum_l=lambda t: g_power(a + 1, t),
            cum_k=lambda t: g_power(2 - a, t),
            dk_eval=lambda t: g_power(-a, t),
            dl_eval=lambda t: g_power(a - 1, t),
        )

    if isinstance(spec, Tempered):
        a, mu = spec.alpha, spec.mu

        def l_eval(t: ArrayLike) -> ArrayLike:
            t_arr = np.asarray(t, dtype=float)
            out = g_power(a, t_arr) * np.exp(-mu * t_arr) \
                + mu ** (1 - a) * sc.gammainc(a, mu * t_arr)
            return float(out) if out.ndim == 0 else out

        def cum_l(t: ArrayLike) -> ArrayLike:
            t_arr = np.asarray(t, dtype=float)
            p_a = sc.gammainc(a, mu * t_arr)
            p_a1 = sc.gammainc(a + 1, mu * t_arr)
            out = mu ** (-a) * p_a + mu ** (1 - a) * (t_arr * p_a - (a / mu) * p_a1)
            return float(out) if out.ndim == 0 else out

        def cum_k(t: ArrayLike) -> ArrayLike:
            t_arr = np.asarray(t, dtype=float)
            out = mu ** (a - 1) * sc.gammainc(1 - a, mu * t_arr)
            return float(out) if out.ndim == 0 else out

        return KernelPair(
            spec=spec,
            k_eval=lambda t: g_power(1 - a, t) * np.exp(-mu * np.asarray(t, dtype=float))
            if np.ndim(t) else g_power(1 - a, t) * math.exp(-mu * t),
            l_eval=l_eval,
            cum_l=cum_l,
            cum_k=cum_k,
            dk_eval=lambda t: (g_power(-a, t) - mu * g_power(1 - a, t)) * math.exp(-mu * t),
            dl_eval=lambda t: g_power(a - 1, t) * math.exp(-mu * t),
        )

    if isinstance(spec, BesselPair):
        a = spec.alpha

        def k_scalar(t: float) -> float:
            return t ** ((a - 1) / 2) * specfun._bessel_series(a - 1, 2 * math.sqrt(t), True)[0]

        def l_scalar(t: float) -> float:
            return t ** (-a / 2) * specfun._bessel_series(-a, 2 * math.sqrt(t), False)[0]

        def cum_l_scalar(t: float) -> float:
            if t == 0.0:
                return 0.0
            return t ** ((1 - a) / 2) * specfun._bessel_series(1 - a, 2 * math.sqrt(t), False)[0]

        def cum_k_scalar(t: float) -> float:
            if t == 0.0:
                return 0.0
            return t ** (a / 2) * specfun._bessel_series(a, 2 * math.sqrt(t), True)[0]

        return KernelPair(
            spec=spec,
            k_eval=_vectorize_scalar(k_scalar),
            l_eval=_vectorize_scalar(l_scalar),
            cum_l=_vectorize_scalar(cum_l_scalar),
            cum_k=_vectorize_scalar(cum_k_scalar),
            dk_eval=lambda t: t ** ((a - 2) / 2)
            * specfun._bessel_series(a - 2, 2 * math.sqrt(t), True)[0],
            dl_eval=lambda t: t ** (-(a + 1) / 2)
            * specfun._bessel_series(-a - 1, 2 * math.sqrt(t), False)[0],
        )

    if isinstance(spec, MittagLefflerPair):
        a, b = spec.alpha, spec.beta

        def l_scalar(t: float) -> float:
            return t ** (b - 1) * specfun.mittag_leffler(a, b, -(t ** a))

        def cum_l_scalar(t: float) -> float:
            if t == 0.0:
                return 0.0
            return t ** b * specfun.mittag_leffler(a, b + 1, -(t ** a))

        return KernelPair(
            spec=spec,
            k_eval=lambda t: g_power(1 - b + a, t) + g_power(1 - b, t),
            l_eval=_vectorize_scalar(l_scalar),
            cum_l=_vectorize_scalar(cum_l_scalar),
            cum_k=lambda t: g_power(2 - b + a, t) + g_power(2 - b, t),
            dk_eval=lambda t: g_power(a - b, t) + g_power(-b, t),
            dl_eval=lambda t: t ** (b - 2) * specfun.mittag_leffler(a, b - 1, -(t ** a)),
        )

    if isinstance(spec, DistributedOrder):
        def cum_l(t: ArrayLike) -> ArrayLike:
            t_arr = np.asarray(t, dtype=float)
            if t_arr.ndim == 0:
                if float(t_arr) == 0.0:
                    return 0.0
                return float(specfun.exp_scaled_e1(float(t_arr)) + math.log(float(t_arr)) + EULER_GAMMA)
            out = np.zeros_like(t_arr)
            pos = t_arr > 0
            out[pos] = specfun.exp_scaled_e1(t_arr[pos]) + np.log(t_arr[pos]) + EULER_GAMMA
            return out

        def l_eval(t: ArrayLike) -> ArrayLike:
            return specfun.exp_scaled_e1(t)

        def cum_k_val(t: ArrayLike) -> ArrayLike:
            t_arr = np.asarray(t, dtype=float)
            if t_arr.ndim == 0 and float(t_arr) == 0.0:
                return 0.0
            out = _distributed_k(t_arr, shift=1.0)
            return out

        return KernelPair(
            spec=spec,
            k_eval=lambda t: _distributed_k(t),
            l_eval=l_eval,
            cum_l=cum_l,
            cum_k=cum_k_val,
            dk_eval=lambda t: float(_distributed_k(np.asarray(t), shift=-1.0)),
            dl_eval=lambda t: float(specfun.exp_scaled_e1(t)) - 1.0 / t,
        )

    if isinstance(spec, MultiTerm):
        return _make_multi_term_pair(spec)

    raise DomainError(f"unknown kernel spec {spec!r}")


# ---------------------------------------------------------------------------
# Multi-term pair: numerical Sonine associate

@dataclass
class _AssociateTable:
    nodes: np.ndarray          # grid nodes, nodes[0] == 0
    l_cells: np.ndarray        # piecewise-constant l on (nodes[j], nodes[j+1]]
    cum_nodes: np.ndarray      # Lambda at nodes (piecewise-linear between)


def _multi_cum_k(alphas: tuple[float, ...], t: ArrayLike) -> ArrayLike:
    t_arr = np.asarray(t, dtype=float)
    out = np.zeros_like(t_arr)
    for a in alphas:
        out = out + t_arr ** (1 - a) * sc.rgamma(2 - a)
    return float(out) if out.ndim == 0 else out


def solve_first_kind_volterra(
    cum_k: Callable[[np.ndarray], np.ndarray], nodes: np.ndarray
) -> np.ndarray:
    """Piecewise-constant product-integration solve of (k*l)(t_n) = 1.

    ``cum_k`` must be the exact cumulative integral of k.  Returns the cell
    values of l on (nodes[j], nodes[j+1]].
    """
    nodes = np.asarray(nodes, dtype=float)
    n_cells = len(nodes) - 1
    l_cells = np.zeros(n_cells)
    for n in range(1, n_cells + 1):
        tn = nodes[n]
        cumk = cum_k(tn - nodes[: n + 1])
        a_row = cumk[:-1] - cumk[1:]  # A_{n,j} = K(tn-t_j) - K(tn-t_{j+1})
        diag = a_row[n - 1]
        if diag <= 0 or not math.isfinite(diag):
            raise NumericalError(
                f"ill-conditioned leading weight {diag} at step {n}; "
                "kernel must have an integrable singularity at 0"
            )
        l_cells[n - 1] = (1.0 - float(a_row[: n - 1] @ l_cells[: n - 1])) / diag
    return l_cells


def associate_residual(
    cum_k: Callable[[np.ndarray], np.ndarray],
    nodes: np.ndarray,
    l_cells: np.ndarray,
) -> float:
    """Max |(k * l_pc)(t_n) - 1| over the grid nodes, recomputed independently
    of the triangular solve (catches accumulated roundoff)."""
    nodes = np.asarray(nodes, dtype=float)
    worst = 0.0
    for n in range(1, len(nodes)):
        tn = nodes[n]
        cumk = cum_k(tn - nodes[: n + 1])
        a_row = cumk[:-1] - cumk[1:]
        val = float(a_row @ l_cells[:n])
        worst = max(worst, abs(val - 1.0))
    return worst


def _make_multi_term_pair(spec: MultiTerm) -> KernelPair:
    alphas = spec.alphas
    state: dict = {"table": None}

    def _ensure(t_max: float) -> _AssociateTable:
        table = state["table"]
        if table is None or table.nodes[-1] < t_max:
            horizon = max(1.0, 2.0 * t_max)
            n = 4096
            nodes = horizon * (np.arange(n + 1) / n) ** 2  # graded at the origin
            l_cells = solve_first_kind_volterra(
                lambda s: _multi_cum_k(alphas, s), nodes
            )
            cum_nodes = np.concatenate([[0.0], np.cumsum(l_cells * np.diff(nodes))])
            table = _AssociateTable(nodes, l_cells, cum_nodes)
            state["table"] = table
        return table

    def l_scalar(t: float) -> float:
        table = _ensure(t)
        j = int(np.searchsorted(table.nodes, t, side="left"))
        j = min(max(j, 1), len(table.l_cells))
        return float(table.l_cells[j - 1])

    def cum_l_scalar(t: float) -> float:
        if t == 0.0:
            return 0.0
        table = _ensure(t)
        return float(np.interp(t, table.nodes, table.cum_nodes))

    def k_eval(t: ArrayLike) -> ArrayLike:
        t_arr = np.asarray(t, dtype=float)
        out = np.zeros_like(t_arr)
        for a in alphas:
            out = out + t_arr ** (-a) * sc.rgamma(1 - a)
        return float(out) if out.ndim == 0 else out

    return KernelPair(
        spec=spec,
        k_eval=k_eval,
        l_eval=_vectorize_scalar(l_scalar),
        cum_l=_vectorize_scalar(cum_l_scalar),
        cum_k=lambda t: _multi_cum_k(alphas, t),
        dk_eval=lambda t: float(sum(g_power(-a, t) for a in alphas)),
    )


def numeric_associate(spec: SonineSpec, nodes: np.ndarray) -> np.ndarray:
    """Recover the Sonine associate l of k on cell midpoints of ``nodes``.

    Solves the first-kind Volterra equation (k*l)(t_n) = 1 by product
    integration with exact cell integrals of k; raises NumericalError if the
    a-posteriori residual exceeds 1e-6.
    """
    nodes = np.asarray(nodes, dtype=float)
    if nodes[0] != 0.0 or np.any(np.diff(nodes) <= 0):
        raise DomainError("grid must be strictly increasing from 0")
    pair = make_pair(spec)
    l_cells = solve_first_kind_volterra(pair.cum_k, nodes)
    resid = associate_residual(pair.cum_k, nodes, l_cells)
    if resid > 1e-6:
        raise NumericalError(f"associate residual {resid:.3e} exceeds 1e-6")
    return l_cells


# ---------------------------------------------------------------------------
# Operations

def cumulative_l(pair: KernelPair, t: float) -> float:
    """(1*l)(t) for t >= 0."""
    if t < 0:
        raise DomainError(f"cumulative_l requires t >= 0, got {t}")
    if t == 0:
        return 0.0
    return float(pair.cum_l(t))


@dataclass(frozen=True)
class SonineReport:
    deviations: dict[float, float]
    max_deviation: float
    passed: bool


def convolve_pair_at(pair: KernelPair, t: float) -> float:
    """(k*l)(t) by singularity-aware quadrature (integration by parts at
    both endpoints, leaving smooth integrands)."""
    if isinstance(pair.spec, Dirac):
        return 1.0
    if pair.dk_eval is None or pair.dl_eval is None:
        # fall back to direct quadrature with substitution at both endpoints
        return _convolve_direct(pair, t)
    half = t / 2.0
    boundary = float(pair.cum_k(half)) * float(pair.l_eval(half)) \
        + float(pair.cum_l(half)) * (float(pair.k_eval(half)))
    i1, e1 = integrate.quad(
        lambda tau: float(pair.cum_k(tau)) * pair.dl_eval(t - tau),
        0.0, half, limit=200, epsabs=1e-11, epsrel=1e-11,
    )
    i2, e2 = integrate.quad(
        lambda s: float(pair.cum_l(s)) * pair.dk_eval(t - s),
        0.0, half, limit=200, epsabs=1e-11, epsrel=1e-11,
    )
    if e1 + e2 > 1e-7:
        raise NumericalError(f"convolution quadrature did not converge at t={t}")
    return boundary + i1 + i2


def _convolve_direct(pair: KernelPair, t: float) -> float:
    half = t / 2.0
    m = 4  # substitution s = half * v^m tames integrable endpoint singularities

    def piece(outer, inner):
        def f(v: float) -> float:
            s = half * v ** m
            return float(outer(t - s)) * float(inner(s)) * half * m * v ** (m - 1)
        val, err = integrate.quad(f, 0.0, 1.0, limit=400, epsabs=1e-10, epsrel=1e-10)
        if err > 1e-7:
            raise NumericalError(f"convolution quadrature did not converge at t={t}")
        return val

    return piece(pair.k_eval, pair.l_eval) + piece(pair.l_eval, pair.k_eval)


def verify_sonine(pair: KernelPair, t_samples, tol: float) -> SonineReport:
    """Check |(k*l)(t) - 1| <= tol at the given sample times."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    deviations: dict[float, float] = {}
    for t in t_samples:
        if t <= 0:
            raise DomainError("sample times must be positive")
        deviations[float(t)] = abs(convolve_pair_at(pair, float(t)) - 1.0)
    max_dev = max(deviations.values()) if deviations else 0.0
    return SonineReport(deviations, max_dev, max_dev <= tol)
