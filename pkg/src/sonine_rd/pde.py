"""Solver for the nonlocal-in-time reaction-diffusion problem

    d/dt (k * (u - u0)) + L[u] = f(u),   u = 0 on the boundary,

discretized spectrally in space and by product integration in time via the
equivalent Volterra form u = u0 + l * (f(u) - L u).  The linear part is
implicit per mode; the nonlinearity is handled pseudospectrally with a Picard
iteration on the current cell.  The report carries, per step, the L2 norm,
the nodal range, the coercivity decay bound ||u0|| / (1 + C_L (1*l)(t)) and
the scalar majorant W solving W + C_L (l*W) = 1.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .kernels import KernelPair
from .nonlin import NonlinearSource
from .spatial import Field, SpectralOperator, to_modal
from .tstep import BLOWUP, COMPLETED, FAILED, TimeGrid, solve_linear_majorant

__all__ = [
    "ProblemSpec",
    "SolveReport",
    "DecayCheck",
    "MajorantCheck",
    "solve",
    "decay_check",
    "majorant_check",
    "eigen_projection",
    "write_report_csv",
    "write_report_summary",
]

SCHEMA_VERSION = 1


@dataclass
class ProblemSpec:
    pair: KernelPair
    op: SpectralOperator
    source: NonlinearSource
    u0: Field
    grid: TimeGrid
    fixed_point_tol: float = 1e-10
    max_iters: int = 100
    blowup_threshold: float = 1e6
    keep_fields: bool = False
    n_nodal: int | None = None  # quadrature points for the nonlinearity

    def __post_init__(self) -> None:
        if self.u0.modal is None:
            self.u0 = to_modal(self.u0, self.op)
        if len(self.u0.modal) != self.op.n_modes:
            raise DomainError("initial field and operator mode counts disagree")
        if not np.all(np.isfinite(self.u0.modal)):
            raise DomainError("initial field must be finite")
        if self.n_nodal is None:
            self.n_nodal = 4 * self.op.n_modes
        if self.n_nodal < self.op.n_modes:
            raise DomainError("need at least n_modes quadrature points")
        if self.blowup_threshold < 1e3:
            raise DomainError("blow-up threshold must be at least 1e3")


@dataclass
class SolveReport:
    times: np.ndarray
    l2_norms: np.ndarray
    range_min: np.ndarray
    range_max: np.ndarray
    decay_bound: np.ndarray
    majorant_w: np.ndarray
    status: str = COMPLETED
    bracket: tuple[float, float] | None = None
    reason: str | None = None
    u0_norm: float = 0.0
    coercivity: float = 0.0
    fields: np.ndarray | None = None  # (n_times, n_modes) modal snapshots


def _newton_step(
    spec: ProblemSpec,
    s_mat: np.ndarray,
    h: float,
    lam: np.ndarray,
    wc: float,
    h_modal: np.ndarray,
    u_prev: np.ndarray,
    denom: np.ndarray,
) -> np.ndarray | None:
    """Damped Newton for the implicit cell system
    (1 + wc lam) v - wc F(v) = H in modal space; None when no root is found."""
    cap = 1e8 * spec.blowup_threshold

    def residual(v: np.ndarray) -> np.ndarray:
        nodal = s_mat @ v
        fm = h * (s_mat.T @ np.asarray(spec.source(nodal)))
        return denom * v - wc * fm - h_modal

    v = u_prev.copy()
    g = residual(v)
    for _ in range(80):
        gn = float(np.linalg.norm(g))
        if gn <= 1e-12 * max(1.0, float(np.linalg.norm(v))):
            return v
        nodal = s_mat @ v
        dfn = np.asarray(spec.source.deriv(nodal))
        jac = np.diag(denom) - wc * h * (s_mat.T * dfn) @ s_mat
        try:
            step = np.linalg.solve(jac, -g)
        except np.linalg.LinAlgError:
            return None
        scale = 1.0
        for _ in range(40):
            cand = v + scale * step
            g_cand = residual(cand)
            if np.all(np.isfinite(g_cand)) and float(
                np.linalg.norm(g_cand)
            ) < gn:
                break
            scale *= 0.5
        else:
            return None
        v, g = cand, g_cand
        if float(np.abs(s_mat @ v).max()) > cap:
            return None
    if float(np.linalg.norm(g)) <= 1e-8 * max(1.0, float(np.linalg.norm(v))):
        return v
    return None


def solve(spec: ProblemSpec, max_refinements: int = 400) -> SolveReport:
    op, pair = spec.op, spec.pair
    lam = op.eigenvalues
    s_mat = op.sine_matrix(spec.n_nodal)  # (M, K)
    h = op.length / (spec.n_nodal + 1)
    u0 = spec.u0.modal
    u0_norm = float(np.linalg.norm(u0))
    c_l = op.coercivity_constant

    def f_modal(v_modal: np.ndarray) -> tuple[np.ndarray, float]:
        nodal = s_mat @ v_modal
        return h * (s_mat.T @ np.asarray(spec.source(nodal))), float(
            np.abs(nodal).max()
        )

    nodes = list(spec.grid.nodes)
    fields = [u0.copy()]
    g_hist: list[np.ndarray] = []  # f(u_j) - lam u_j at nodes j >= 1
    refinements = 0
    status, bracket, reason = COMPLETED, None, None
    # Toeplitz weights for the uniform, not-yet-refined part of the grid
    # (cumulative evaluations can be expensive for series-based kernels)
    toeplitz = np.diff(np.asarray(pair.cum_l(spec.grid.nodes), dtype=float)) \
        if spec.grid.is_uniform else None
    n = 1
    while n < len(nodes):
        if toeplitz is not None and refinements == 0:
            row = toeplitz[n - 1 :: -1]
        else:
            t = np.array(nodes[: n + 1])
            cum = np.asarray(pair.cum_l(nodes[n] - t), dtype=float)
            row = cum[:-1] - cum[1:]
        hist = row[:-1] @ np.array(g_hist[: n - 1]) if n > 1 else 0.0
        h_modal = u0 + hist
        wc = float(row[-1])
        denom = 1.0 + wc * lam
        u = fields[n - 1]

        v = u
        converged = False
        for _ in range(spec.max_iters):
            fm, nodal_max = f_modal(v)
            v_new = (h_modal + wc * fm) / denom
            if not np.all(np.isfinite(v_new)) or nodal_max > 10.0 * max(
                spec.blowup_threshold, float(np.abs(s_mat @ u).max())
            ):
                break  # Picard left the contraction region; Newton decides
            delta = float(np.linalg.norm(v_new - v))
            v = v_new
            if delta <= spec.fixed_point_tol * max(1.0, float(np.linalg.norm(v))):
                converged = True
                break

        if not converged:
            # Picard contraction failed (wc * Lip(f) too large, typical near
            # blow-up); fall back to damped Newton on the modal system
            v = _newton_step(spec, s_mat, h, lam, wc, h_modal, u, denom)

        crossed = v is not None and float(np.abs(s_mat @ v).max()) > spec.blowup_threshold
        if crossed or v is None:
            # escaped past the threshold, or the implicit cell system lost
            # its root; bisect the current cell in time and retry
            if crossed:
                fields.append(v)
                status = BLOWUP
                bracket = (float(nodes[n - 1]), float(nodes[n]))
                n += 1
                break
            midpoint = 0.5 * (nodes[n - 1] + nodes[n])
            if (
                refinements >= max_refinements
                or not nodes[n - 1] < midpoint < nodes[n]
            ):
                fm_prev, _ = f_modal(u)
                v_expl = (h_modal + wc * fm_prev) / denom
                if float(np.abs(s_mat @ v_expl).max()) > spec.blowup_threshold:
                    status = BLOWUP
                    bracket = (float(nodes[n - 1]), float(nodes[n]))
                else:
                    status = FAILED
                    reason = (
                        f"implicit step unsolved at t={nodes[n]:.6g} "
                        "after exhausting cell refinements"
                    )
                break
            nodes.insert(n, midpoint)
            refinements += 1
            continue

        fields.append(v)
        g_hist.append(f_modal(v)[0] - lam * v)
        n += 1

    n_done = len(fields)
    times = np.array(nodes[:n_done])
    modal = np.array(fields)
    nodal = modal @ s_mat.T
    l2 = np.linalg.norm(modal, axis=1)
    cum = np.asarray(pair.cum_l(times), dtype=float)
    decay_bound = u0_norm / (1.0 + c_l * cum)
    majorant = solve_linear_majorant(c_l, pair, times).values
    return SolveReport(
        times=times,
        l2_norms=l2,
        range_min=nodal.min(axis=1),
        range_max=nodal.max(axis=1),
        decay_bound=decay_bound,
        majorant_w=majorant,
        status=status,
        bracket=bracket,
        reason=reason,
        u0_norm=u0_norm,
        coercivity=c_l,
        fields=modal if spec.keep_fields else None,
    )


# ---------------------------------------------------------------------------
# Solution-quality checks

@dataclass(frozen=True)
class DecayCheck:
    violations: int
    max_excess: float


def decay_check(report: SolveReport, tol_abs: float = 1e-3) -> DecayCheck:
    """Count steps where ||u|| exceeds ||u0|| / (1 + C_L (1*l)(t)) + tol."""
    if report.status != COMPLETED:
        raise DomainError("decay_check requires a completed report")
    excess = report.l2_norms - report.decay_bound
    violations = int(np.sum(excess > tol_abs))
    return DecayCheck(violations, float(excess.max()))


@dataclass(frozen=True)
class MajorantCheck:
    passed: bool
    max_gap_violation: float


def majorant_check(report: SolveReport, tol_abs: float = 1e-3) -> MajorantCheck:
    """Check the normalized norm against the scalar majorant W pathwise."""
    if report.u0_norm == 0.0:
        raise DomainError("majorant_check requires a nonzero initial norm")
    u_rel = report.l2_norms / report.u0_norm
    mask = np.isfinite(u_rel)
    gap = float((u_rel[mask] - report.majorant_w[mask]).max())
    return MajorantCheck(gap <= tol_abs, gap)


def eigen_projection(
    report: SolveReport, op: SpectralOperator, normalization: str = "integral"
) -> np.ndarray:
    """Scalar series Phi(t_n) = integral of u(t_n) against phi_1.

    ``normalization='integral'`` rescales phi_1 so its integral over the
    domain is 1; ``'orthonormal'`` keeps the unit-L2 eigenfunction."""
    if report.fields is None:
        raise DomainError("solution fields were not retained (set keep_fields)")
    coeff = report.fields[:, 0]
    if normalization == "orthonormal":
        return coeff.copy()
    if normalization != "integral":
        raise DomainError(f"unknown normalization {normalization!r}")
    length = op.length
    # integral of sqrt(2/L) sin(pi x / L) over (0, L)
    phi1_integral = np.sqrt(2.0 / length) * (2.0 * length / np.pi)
    return coeff / phi1_integral


# ---------------------------------------------------------------------------
# Serialization

CSV_HEADER = ["step", "t", "l2_norm", "range_min", "range_max",
              "decay_bound", "majorant_W"]


def write_report_csv(report: SolveReport, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for i, t in enumerate(report.times):
            w.writerow(
                [i, f"{t:.17g}", f"{report.l2_norms[i]:.17g}",
                 f"{report.range_min[i]:.17g}", f"{report.range_max[i]:.17g}",
                 f"{report.decay_bound[i]:.17g}", f"{report.majorant_w[i]:.17g}"]
            )


def write_report_summary(report: SolveReport, path, extra: dict | None = None) -> None:
    finite = report.l2_norms[np.isfinite(report.l2_norms)]
    summary = {
        "schema_version": SCHEMA_VERSION,
        "status": report.status,
        "bracket": list(report.bracket) if report.bracket else None,
        "reason": report.reason,
        "steps_completed": int(finite.size - 1),
        "u0_norm": report.u0_norm,
        "coercivity_constant": report.coercivity,
        "final_l2_norm": float(finite[-1]) if finite.size else None,
        "range_min": float(np.nanmin(report.range_min)),
        "range_max": float(np.nanmax(report.range_max)),
        "decay_violations": (
            decay_check(report).violations if report.status == COMPLETED else None
        ),
    }
    if extra:
        summary.update(extra)
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
