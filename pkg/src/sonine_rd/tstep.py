"""Time discretization: grids, product-integration weights for l, and the
scalar Volterra solvers.

Everything is built on the Volterra form u = u0 + l * (f(u) - lambda u); the
convolution weights are exact cell integrals of l obtained as differences of
the cumulative (1*l), so weight row sums telescope to (1*l)(t_n) by
construction.  The unknown is collocated at the right endpoint of each cell
(piecewise-constant product integration), which keeps the scheme positive
and order-comparison friendly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericalError
from .kernels import KernelPair, RiemannLiouville, make_pair
from .nonlin import NonlinearSource

__all__ = [
    "TimeGrid",
    "ConvolutionWeights",
    "ScalarTrace",
    "build_weights",
    "solve_linear_majorant",
    "solve_scalar_nonlinear",
    "solve_power_decay",
    "bracket_blowup_closed_form_bounds",
]


@dataclass(frozen=True)
class TimeGrid:
    horizon: float
    n_steps: int
    grading: float = 1.0  # 1.0 -> uniform; r > 1 -> nodes T (j/N)^r

    def __post_init__(self) -> None:
        if self.horizon <= 0:
            raise DomainError("horizon must be positive")
        if self.n_steps < 1:
            raise DomainError("need at least one step")
        if self.grading < 1:
            raise DomainError("grading exponent must be >= 1")

    @property
    def nodes(self) -> np.ndarray:
        j = np.arange(self.n_steps + 1, dtype=float) / self.n_steps
        return self.horizon * j**self.grading

    @property
    def is_uniform(self) -> bool:
        return self.grading == 1.0

    @classmethod
    def uniform(cls, horizon: float, n_steps: int) -> "TimeGrid":
        return cls(horizon, n_steps, 1.0)

    @classmethod
    def graded(cls, horizon: float, n_steps: int, r: float) -> "TimeGrid":
        return cls(horizon, n_steps, r)


class ConvolutionWeights:
    """Product-integration weights w_{n,j} = int_{t_j}^{t_{j+1}} l(t_n - s) ds.

    Rows are differences of the cumulative (1*l); on uniform grids they are
    Toeplitz and cached."""

    def __init__(self, pair: KernelPair, nodes: np.ndarray, uniform: bool | None = None):
        self.pair = pair
        self.nodes = np.asarray(nodes, dtype=float)
        if self.nodes[0] != 0.0 or np.any(np.diff(self.nodes) <= 0):
            raise DomainError("nodes must increase strictly from 0")
        if uniform is None:
            d = np.diff(self.nodes)
            uniform = bool(np.allclose(d, d[0], rtol=1e-12, atol=0.0))
        self._toeplitz: np.ndarray | None = None
        if uniform:
            cum = np.asarray(pair.cum_l(self.nodes), dtype=float)
            self._toeplitz = np.diff(cum)  # W[m-1] = Lambda(t_m) - Lambda(t_{m-1})

    @classmethod
    def from_grid(cls, pair: KernelPair, grid: TimeGrid) -> "ConvolutionWeights":
        return cls(pair, grid.nodes, uniform=grid.is_uniform)

    def row(self, n: int) -> np.ndarray:
        """Weights w_{n,j}, j = 0..n-1 (the last entry is the current cell)."""
        if not 1 <= n <= len(self.nodes) - 1:
            raise DomainError(f"step index {n} out of range")
        if self._toeplitz is not None:
            return self._toeplitz[n - 1 :: -1].copy()
        cum = np.asarray(
            self.pair.cum_l(self.nodes[n] - self.nodes[: n + 1]), dtype=float
        )
        return cum[:-1] - cum[1:]

    def row_sum(self, n: int) -> float:
        return float(self.row(n).sum())


def build_weights(pair: KernelPair, grid: TimeGrid) -> ConvolutionWeights:
    return ConvolutionWeights.from_grid(pair, grid)


# ---------------------------------------------------------------------------
# Traces

COMPLETED = "completed"
BLOWUP = "blowup"
FAILED = "failed"


@dataclass
class ScalarTrace:
    nodes: np.ndarray
    values: np.ndarray
    status: str = COMPLETED
    bracket: tuple[float, float] | None = None
    reason: str | None = None

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "t", "value", "status"])
            for i, (t, v) in enumerate(zip(self.nodes, self.values)):
                w.writerow([i, f"{t:.17g}", f"{v:.17g}", self.status])


# ---------------------------------------------------------------------------
# Linear majorant  W + C (l*W) = 1

def solve_linear_majorant(
    c: float, pair: KernelPair, grid: TimeGrid | np.ndarray
) -> ScalarTrace:
    if c <= 0:
        raise DomainError("majorant constant must be positive")
    if isinstance(grid, TimeGrid):
        weights = ConvolutionWeights.from_grid(pair, grid)
    else:
        weights = ConvolutionWeights(pair, np.asarray(grid, dtype=float))
    nodes = weights.nodes
    n_steps = len(nodes) - 1
    w_vals = np.empty(n_steps + 1)
    w_vals[0] = 1.0
    for n in range(1, n_steps + 1):
        row = weights.row(n)
        hist = float(row[:-1] @ w_vals[1:n]) if n > 1 else 0.0
        w_vals[n] = (1.0 - c * hist) / (1.0 + c * row[-1])
    return ScalarTrace(nodes, w_vals)


# ---------------------------------------------------------------------------
# Nonlinear scalar Volterra solver with blow-up bracketing

_MAX_NEWTON = 60
_MAX_HALVINGS = 40


def _newton_cell(
    g_fun: Callable[[float], float],
    dg_fun: Callable[[float], float],
    start: float,
    threshold: float,
) -> tuple[float | None, bool]:
    """Solve g(phi) = 0 by damped Newton.  Returns (root, grew_beyond) where
    grew_beyond notes iterates escaping past the blow-up threshold."""
    phi = start
    g = g_fun(phi)
    grew = False
    for _ in range(_MAX_NEWTON):
        if abs(g) <= 1e-13 * max(1.0, abs(phi)):
            return phi, grew
        dg = dg_fun(phi)
        if dg == 0.0 or not math.isfinite(dg):
            return None, grew
        step = -g / dg
        lam = 1.0
        for _ in range(_MAX_HALVINGS):
            cand = phi + lam * step
            g_cand = g_fun(cand)
            if math.isfinite(g_cand) and abs(g_cand) < abs(g):
                break
            lam *= 0.5
        else:
            return None, grew
        phi, g = cand, g_cand
        if abs(phi) > threshold:
            grew = True
            return None, grew
        if abs(lam * step) <= 1e-14 * max(1.0, abs(phi)):
            if abs(g) <= 1e-9 * max(1.0, abs(phi)):
                return phi, grew
            return None, grew
    if abs(g) <= 1e-9 * max(1.0, abs(phi)):
        return phi, grew
    return None, grew


def _escape_time_bound(
    source: NonlinearSource, lambda1: float, threshold: float
) -> float:
    """Upper bound on the residual time from `threshold` to infinity for the
    local-rate equation phi' = f(phi) - lambda1 phi (diagnostic margin added
    to the reported bracket)."""
    def rate(y: float) -> float:
        return float(source(y)) - lambda1 * y

    if rate(threshold) <= 0:
        return 0.0
    try:
        val, _ = integrate.quad(
            lambda y: 1.0 / rate(y), threshold, 1e9 * threshold, limit=100
        )
    except Exception:
        return 0.0
    return max(val, 0.0)


def _explicit_crossing(
    pair: KernelPair,
    lambda1: float,
    source: NonlinearSource,
    phi0: float,
    base_nodes: np.ndarray,
    threshold: float,
    rel_width: float,
    max_refinements: int,
) -> float | None:
    """Threshold-crossing time of the left-endpoint (fully explicit) trace.

    For nondecreasing traces with nondecreasing f - lambda1 id, the explicit
    trace minorizes the solution, so its crossing time is an upper bound for
    the crossing time of the solution itself."""
    nodes = list(base_nodes)
    values = [phi0]
    g_hist = [float(source(phi0)) - lambda1 * phi0]
    refinements = 0
    n = 1
    while n < len(nodes):
        t = np.array(nodes[: n + 1])
        cum = np.asarray(pair.cum_l(nodes[n] - t), dtype=float)
        row = cum[:-1] - cum[1:]
        val = phi0 + float(row @ np.array(g_hist[:n]))
        if not math.isfinite(val):
            return nodes[n]
        if val >= threshold:
            t_low, t_high = nodes[n - 1], nodes[n]
            midpoint = 0.5 * (t_low + t_high)
            if (
                t_high - t_low <= rel_width * max(t_high, 1e-300)
                or refinements >= max_refinements
                or not t_low < midpoint < t_high
            ):
                return t_high
            nodes.insert(n, midpoint)
            refinements += 1
            continue
        values.append(val)
        g_hist.append(float(source(val)) - lambda1 * val)
        n += 1
    return None


def solve_scalar_nonlinear(
    pair: KernelPair,
    lambda1: float,
    source: NonlinearSource,
    phi0: float,
    grid: TimeGrid,
    blowup_threshold: float = 1e6,
    bracket_rel_width: float = 1e-3,
    max_refinements: int = 400,
) -> ScalarTrace:
    """Step the projected Volterra equation
    Phi = Phi0 + l * (f(Phi) - lambda1 Phi), declaring blow-up when the trace
    escapes past ``blowup_threshold``; the blow-up cell is then bisected in
    time (re-stepping only the tail) until its relative width reaches
    ``bracket_rel_width``."""
    if phi0 < 0:
        raise DomainError("phi0 must be nonnegative")
    if blowup_threshold < 1e3:
        raise DomainError("blow-up threshold must be at least 1e3")

    nodes = list(grid.nodes)
    values = [phi0]
    g_hist: list[float] = []  # f(Phi_j) - lambda1 Phi_j at nodes j >= 1
    refinements = 0
    n = 1

    def weight_row(n: int) -> np.ndarray:
        t = np.array(nodes[: n + 1])
        cum = np.asarray(pair.cum_l(nodes[n] - t), dtype=float)
        return cum[:-1] - cum[1:]

    while n < len(nodes):
        row = weight_row(n)
        hist = float(row[:-1] @ np.array(g_hist[: n - 1])) if n > 1 else 0.0
        h_val = phi0 + hist
        wc = float(row[-1])
        prev = values[n - 1]

        def g_fun(phi: float) -> float:
            return phi - wc * (float(source(phi)) - lambda1 * phi) - h_val

        def dg_fun(phi: float) -> float:
            return 1.0 - wc * (float(source.deriv(phi)) - lambda1)

        root, _ = _newton_cell(g_fun, dg_fun, prev, 1e8 * blowup_threshold)
        crossed = root is not None and root >= blowup_threshold

        if crossed or root is None:
            # either the trace escaped past the threshold inside this cell, or
            # the implicit cell equation lost its root (the step outran the
            # growth); both call for bisecting the current cell in time
            t_low, t_high = nodes[n - 1], nodes[n]
            if (
                crossed
                and (t_high - t_low) <= bracket_rel_width * max(t_high, 1e-300)
            ):
                # two-sided bracket: the implicit (right-endpoint) trace
                # majorizes the solution, so its crossing cell bounds the
                # escape time from below; the explicit (left-endpoint) trace
                # minorizes it and bounds the escape time from above
                margin = _escape_time_bound(source, lambda1, blowup_threshold)
                upper = _explicit_crossing(
                    pair, lambda1, source, phi0, grid.nodes,
                    blowup_threshold, bracket_rel_width,
                    max_refinements,
                )
                if upper is None:
                    upper = t_high
                values.append(root)
                return ScalarTrace(
                    np.array(nodes[: n + 1]),
                    np.array(values),
                    status=BLOWUP,
                    bracket=(t_low, max(upper, t_high) + margin),
                )
            midpoint = 0.5 * (t_low + t_high)
            if refinements >= max_refinements or not t_low < midpoint < t_high:
                return ScalarTrace(
                    np.array(nodes[:n]),
                    np.array(values),
                    status=FAILED,
                    reason="cell refinement budget exhausted at "
                    f"t={nodes[n]:.6g}",
                )
            nodes.insert(n, midpoint)
            refinements += 1
            continue  # re-step the same index on the refined node list

        values.append(root)
        g_hist.append(float(source(root)) - lambda1 * root)
        n += 1

    return ScalarTrace(np.array(nodes), np.array(values))


# ---------------------------------------------------------------------------
# Quasilinear scalar decay  d/dt (g_{1-a} * (U - U0)) + C U^gamma = 0

def solve_power_decay(
    alpha: float,
    c: float,
    gamma_exp: float,
    u0: float,
    grid: TimeGrid,
) -> ScalarTrace:
    if not 0 < alpha < 1:
        raise DomainError("alpha must be in (0, 1)")
    if c <= 0 or gamma_exp <= 0:
        raise DomainError("c and gamma must be positive")
    if u0 < 0:
        raise DomainError("u0 must be nonnegative")
    if u0 == 0.0:
        return ScalarTrace(grid.nodes, np.zeros(grid.n_steps + 1))

    pair = make_pair(RiemannLiouville(alpha))
    weights = ConvolutionWeights.from_grid(pair, grid)
    n_steps = grid.n_steps
    u_vals = np.empty(n_steps + 1)
    u_vals[0] = u0
    g_hist = np.empty(n_steps + 1)  # U_j^gamma at nodes j >= 1
    for n in range(1, n_steps + 1):
        row = weights.row(n)
        hist = float(row[:-1] @ g_hist[1:n]) if n > 1 else 0.0
        h_val = u0 - c * hist
        wc = float(row[-1])

        def g_fun(u: float) -> float:
            return u + wc * c * u**gamma_exp - h_val

        def dg_fun(u: float) -> float:
            return 1.0 + wc * c * gamma_exp * u ** (gamma_exp - 1.0)

        u = max(u_vals[n - 1], 1e-300)
        for _ in range(_MAX_NEWTON):
            g = g_fun(u)
            if abs(g) <= 1e-15 * max(1.0, abs(u)):
                break
            u_new = u - g / dg_fun(u)
            if u_new <= 0:
                u_new = 0.5 * u
            if abs(u_new - u) <= 1e-16 * max(1.0, u):
                u = u_new
                break
            u = u_new
        else:
            return ScalarTrace(
                grid.nodes[:n], u_vals[:n], status=FAILED,
                reason=f"Newton failed at step {n}",
            )
        u_vals[n] = u
        g_hist[n] = u**gamma_exp
    return ScalarTrace(grid.nodes, u_vals)


# ---------------------------------------------------------------------------
# Closed-form blow-up bracket for the power-kernel Fisher-KPP projection

def bracket_blowup_closed_form_bounds(alpha: float, c0: float) -> tuple[float, float]:
    """[ (G(a+1)/(4 c0 + 2))^(1/a), (G(a+1)/c0)^(1/a) ]."""
    if not 0 < alpha <= 1:
        raise DomainError("alpha must be in (0, 1]")
    if c0 <= 0:
        raise DomainError("c0 must be positive")
    ga = math.gamma(alpha + 1.0)
    lower = (ga / (4.0 * (c0 + 0.5))) ** (1.0 / alpha)
    upper = (ga / c0) ** (1.0 / alpha)
    return lower, upper
