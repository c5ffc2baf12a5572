"""Repeated-eigenvalue detection for 3x3 symmetric matrices.

A real symmetric matrix has a multiple eigenvalue exactly when it commutes
with a nonzero antisymmetric matrix.  Writing the antisymmetric unknown as
(xi, eta, zeta), the commutation [B, R] = 0 is a linear system with a 6x3
coefficient matrix built from the entries of B; degeneracy means that
matrix drops below rank 3.  The smallest singular value of that matrix is
the degeneracy functional used throughout: it is far better behaved
numerically than the characteristic-polynomial discriminant and doubles as
the constraint driven to zero by the continuation module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .massspace import MassSystem
from .shape import SquaredDistances, Sym3, inertia_matrix

__all__ = [
    "CommutantMatrix",
    "DegeneracyCertificate",
    "commutant_matrix",
    "degeneracy_gap",
    "check_c1",
    "check_c2",
    "c2_polynomials",
    "tetra_inertia_degenerate",
]


@dataclass(frozen=True)
class CommutantMatrix:
    """The 6x3 coefficient matrix of the commutation equations.

    Rows correspond to the entries (u, v, w, x, y, z) of the commutator;
    the sum of the first three rows vanishes (the trace of a commutator
    is zero), so the rank is never more than 3 out of an a-priori 6.
    """

    rows: np.ndarray

    def rank(self, tol: float | None = None) -> int:
        return int(np.linalg.matrix_rank(self.rows, tol=tol))

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.rows, compute_uv=False)


@dataclass(frozen=True)
class DegeneracyCertificate:
    """Outcome of the commutant-rank test on one symmetric matrix.

    gap is the smallest singular value of the commutant matrix (zero iff a
    repeated eigenvalue); second is the next one up, which also vanishes
    only at a triple eigenvalue.  (xi, eta, zeta) is the unit vector of the
    best commuting antisymmetric matrix and residual the Frobenius norm of
    the resulting commutator.
    """

    xi: float
    eta: float
    zeta: float
    gap: float
    second: float
    residual: float

    def rotation(self) -> np.ndarray:
        """The antisymmetric matrix built on (xi, eta, zeta)."""
        return np.array(
            [
                [0.0, self.zeta, -self.eta],
                [-self.zeta, 0.0, self.xi],
                [self.eta, -self.xi, 0.0],
            ]
        )


def commutant_matrix(m: Sym3) -> CommutantMatrix:
    u, v, w, x, y, z = m.entries()
    rows = np.array(
        [
            [0.0, 2.0 * y, -2.0 * z],
            [-2.0 * x, 0.0, 2.0 * z],
            [2.0 * x, -2.0 * y, 0.0],
            [v - w, -z, y],
            [z, w - u, -x],
            [-y, x, u - v],
        ]
    )
    return CommutantMatrix(rows)


def degeneracy_gap(m: Sym3) -> DegeneracyCertificate:
    """Smallest singular value of the commutant matrix plus its certificate.

    gap < tol * frobenius(m) is the degeneracy test; compare second to
    distinguish a double eigenvalue (second > 0) from a triple (second ~ 0,
    where the matrix is near-scalar and every rotation commutes).
    """
    n = commutant_matrix(m)
    _, sv, vt = np.linalg.svd(n.rows)
    xi, eta, zeta = vt[-1]
    r = np.array(
        [[0.0, zeta, -eta], [-zeta, 0.0, xi], [eta, -xi, 0.0]]
    )
    b = m.matrix()
    residual = float(np.linalg.norm(b @ r - r @ b))
    return DegeneracyCertificate(
        xi=float(xi), eta=float(eta), zeta=float(zeta),
        gap=float(sv[-1]), second=float(sv[-2]), residual=residual,
    )


def check_c1(m: Sym3, tol: float = 1e-9) -> tuple[bool, str, float]:
    """Degeneracy test for matrices whose (2,3) and (1,3) entries vanish.

    Returns (degenerate, branch, residual) where branch is "diagonal" when
    z is also (near) zero and the test is the product of diagonal gaps, or
    "coupled" when z != 0 and the test is z^2 + (v-w)(w-u) = 0.
    """
    scale = max(m.frobenius(), 1e-300)
    if abs(m.x) > tol * scale or abs(m.y) > tol * scale:
        raise ValueError(
            "entries (2,3) and (1,3) are not negligible; use check_c2 instead"
        )
    u, v, w, _, _, z = m.entries()
    if abs(m.z) <= tol * scale:
        residual = (u - v) * (v - w) * (w - u)
        return abs(residual) <= tol * scale**3, "diagonal", float(residual)
    residual = z**2 + (v - w) * (w - u)
    return abs(residual) <= tol * scale**2, "coupled", float(residual)


def c2_polynomials(m: Sym3) -> tuple[float, float, float]:
    """Raw values of the three cubic degeneracy polynomials (no validity check).

    They satisfy x*c2a + y*c2b + z*c2c = 0 identically, and all three vanish
    on degenerate matrices; the converse needs at least two nonzero
    off-diagonal entries (see check_c2).
    """
    u, v, w, x, y, z = m.entries()
    c2a = x * (y**2 - z**2) + (v - w) * y * z
    c2b = y * (z**2 - x**2) + (w - u) * z * x
    c2c = z * (x**2 - y**2) + (u - v) * x * y
    return float(c2a), float(c2b), float(c2c)


def check_c2(m: Sym3, tol: float = 1e-9) -> tuple[float, float, float]:
    """The three cubic degeneracy polynomials for matrices with at most one
    (near-)vanishing off-diagonal entry.

    Degeneracy is the simultaneous vanishing of all three.
    """
    scale = max(m.frobenius(), 1e-300)
    small = sum(1 for t in (m.x, m.y, m.z) if abs(t) <= tol * scale)
    if small >= 2:
        raise ValueError(
            "two or more off-diagonal entries vanish; use check_c1 instead"
        )
    return c2_polynomials(m)


def tetra_inertia_degenerate(ms: MassSystem, tol: float = 1e-9) -> bool:
    """Whether the inertia matrix of the unit regular tetrahedron with these
    masses has a repeated eigenvalue (equivalently, three masses are equal)."""
    b = inertia_matrix(ms, SquaredDistances(1, 1, 1, 1, 1, 1))
    cert = degeneracy_gap(b)
    return cert.gap < tol * max(b.frobenius(), 1e-300)
