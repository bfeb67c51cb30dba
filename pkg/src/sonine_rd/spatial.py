"""Spectral representation of the elliptic operators on an interval.

All three operators (Dirichlet Laplacian, its spectral fractional power, and
the second-derivative operator with involution) share the Dirichlet sine
eigenbasis phi_k(x) = sqrt(2/L) sin(k pi x / L); only the eigenvalues differ.

Nodal values live on a uniform interior grid of M points, x_i = i L/(M+1);
the discrete sine modes are exactly orthogonal under the trapezoid rule on
that grid, so modal <-> nodal round trips are exact to rounding for K <= M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError

__all__ = [
    "DirichletLaplacian",
    "SpectralFractionalLaplacian",
    "Involution",
    "SpectralOperator",
    "Field",
    "build_operator",
    "to_modal",
    "to_nodal",
    "apply_operator",
    "coercivity_check",
]


@dataclass(frozen=True)
class DirichletLaplacian:
    length: float = 1.0

    def __post_init__(self) -> None:
        if self.length <= 0:
            raise DomainError("interval length must be positive")


@dataclass(frozen=True)
class SpectralFractionalLaplacian:
    length: float = 1.0
    s: float = 0.5

    def __post_init__(self) -> None:
        if self.length <= 0:
            raise DomainError("interval length must be positive")
        if not 0 < self.s < 1:
            raise DomainError(f"fractional power s={self.s} outside (0, 1)")


@dataclass(frozen=True)
class Involution:
    """L[v] = -v'' + epsilon v''(1-x) on (0, 1); coercive only for |epsilon| < 1."""

    epsilon: float

    def __post_init__(self) -> None:
        if abs(self.epsilon) >= 1:
            raise DomainError(
                f"|epsilon| = {abs(self.epsilon)} >= 1 breaks coercivity"
            )

    @property
    def length(self) -> float:
        return 1.0


OperatorKind = Union[DirichletLaplacian, SpectralFractionalLaplacian, Involution]


@dataclass(frozen=True)
class SpectralOperator:
    kind: OperatorKind
    n_modes: int
    eigenvalues: np.ndarray  # in mode order k = 1..N (not sorted for Involution)

    @property
    def length(self) -> float:
        return self.kind.length

    @property
    def coercivity_constant(self) -> float:
        """Best Poincare constant: the smallest eigenvalue.

        For the involution operator the eigenvalues (k pi)^2 (1 + eps (-1)^k)
        are not monotone in k, so the minimum is taken over the spectrum."""
        return float(self.eigenvalues.min())

    def eigenfunction(self, k: int, x: np.ndarray) -> np.ndarray:
        if not 1 <= k <= self.n_modes:
            raise DomainError(f"mode index {k} outside 1..{self.n_modes}")
        L = self.length
        return math.sqrt(2.0 / L) * np.sin(k * math.pi * np.asarray(x) / L)

    def nodal_grid(self, m: int) -> np.ndarray:
        """Uniform interior grid of m points (Dirichlet endpoints excluded)."""
        L = self.length
        return L * np.arange(1, m + 1) / (m + 1)

    def sine_matrix(self, m: int) -> np.ndarray:
        """(m, n_modes) matrix of eigenfunction samples on the interior grid."""
        x = self.nodal_grid(m)
        k = np.arange(1, self.n_modes + 1)
        return math.sqrt(2.0 / self.length) * np.sin(
            np.outer(x, k) * math.pi / self.length
        )


def build_operator(kind: OperatorKind, n_modes: int) -> SpectralOperator:
    if n_modes < 1:
        raise DomainError("n_modes must be >= 1")
    k = np.arange(1, n_modes + 1, dtype=float)
    if isinstance(kind, DirichletLaplacian):
        lam = (k * math.pi / kind.length) ** 2
    elif isinstance(kind, SpectralFractionalLaplacian):
        lam = ((k * math.pi / kind.length) ** 2) ** kind.s
    elif isinstance(kind, Involution):
        lam = (k * math.pi) ** 2 * (1.0 + kind.epsilon * (-1.0) ** k)
    else:
        raise DomainError(f"unknown operator kind {kind!r}")
    if np.any(lam <= 0):
        raise DomainError("operator spectrum must be strictly positive")
    return SpectralOperator(kind=kind, n_modes=n_modes, eigenvalues=lam)


# ---------------------------------------------------------------------------
# Fields

@dataclass
class Field:
    """A function on the interval, in modal and/or nodal representation."""

    modal: np.ndarray | None = None
    nodal: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.modal is None and self.nodal is None:
            raise DomainError("field needs at least one representation")
        if self.modal is not None:
            self.modal = np.asarray(self.modal, dtype=float)
        if self.nodal is not None:
            self.nodal = np.asarray(self.nodal, dtype=float)

    def l2_norm(self) -> float:
        if self.modal is None:
            raise DomainError("l2_norm needs the modal representation (Parseval)")
        return float(np.linalg.norm(self.modal))


def to_nodal(field: Field, op: SpectralOperator, m: int | None = None) -> Field:
    if field.modal is None:
        raise DomainError("to_nodal requires a modal representation")
    if len(field.modal) != op.n_modes:
        raise DomainError(
            f"field has {len(field.modal)} modes, operator {op.n_modes}"
        )
    if m is None:
        m = 4 * op.n_modes
    if m < op.n_modes:
        raise DomainError("nodal grid must have at least n_modes points")
    s = op.sine_matrix(m)
    return Field(modal=field.modal, nodal=s @ field.modal)


def to_modal(field: Field, op: SpectralOperator) -> Field:
    if field.nodal is None:
        raise DomainError("to_modal requires a nodal representation")
    m = len(field.nodal)
    if m < op.n_modes:
        raise DomainError("nodal grid must have at least n_modes points")
    s = op.sine_matrix(m)
    h = op.length / (m + 1)
    return Field(modal=h * (s.T @ field.nodal), nodal=field.nodal)


def apply_operator(op: SpectralOperator, field: Field) -> Field:
    if field.modal is None:
        raise DomainError("apply_operator requires a modal representation")
    if len(field.modal) != op.n_modes:
        raise DomainError("mode count mismatch")
    return Field(modal=op.eigenvalues * field.modal)


@dataclass(frozen=True)
class CoercivityReport:
    lhs: float
    rhs: float
    passed: bool


def coercivity_check(op: SpectralOperator, field: Field) -> CoercivityReport:
    """Check int u L[u] dx >= C_L ||u||^2 through the eigen expansion."""
    if field.modal is None:
        raise DomainError("coercivity_check requires a modal representation")
    sq = field.modal**2
    total = float(sq.sum())
    if total == 0.0:
        raise DomainError("coercivity check is degenerate on the zero field")
    lhs = float(op.eigenvalues @ sq)
    rhs = op.coercivity_constant * total
    return CoercivityReport(lhs, rhs, lhs >= rhs * (1.0 - 1e-12))
