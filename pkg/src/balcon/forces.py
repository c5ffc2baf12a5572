"""The attraction law and the force (Wintner-Conley) matrix in the u-basis.

The entries of the force matrix A are linear in the six values phi(s_ij)
with constant mass coefficients, so the shape -> force map factors as

    s  ->  phi(s) (componentwise)  ->  L @ phi(s)

with L an invertible 6x6 constant matrix per mass system.  Inverting the
map is therefore one linear solve plus the scalar inverse of phi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .massspace import MassSystem, build_basis
from .shape import SquaredDistances, Sym3

__all__ = [
    "PotentialLaw",
    "NEWTON",
    "WcMatrix",
    "SymmetricCoords",
    "phi_to_entries_matrix",
    "wc_matrix",
    "wc_to_distances",
    "wc_symmetric_block",
    "symmetric_coords",
    "symmetric_coords_to_wc",
    "symmetric_phi_values",
    "symmetric_degeneracy_residuals",
]


@dataclass(frozen=True)
class PotentialLaw:
    """Newtonian attraction in squared-distance form.

    The pair potential is G * s^(-1/2) as a function of s = r^2, so its
    derivative phi(s) = -(G/2) s^(-3/2) is negative and strictly increasing
    on (0, inf).  Only the exponent -3/2 is supported; G rescales time.
    """

    G: float = 1.0

    def phi(self, s):
        return -(0.5 * self.G) * np.asarray(s, dtype=float) ** -1.5

    def phi_prime(self, s):
        return (0.75 * self.G) * np.asarray(s, dtype=float) ** -2.5

    def phi_inverse(self, w):
        w = np.asarray(w, dtype=float)
        if np.any(w >= 0.0):
            raise ValueError("phi only takes negative values")
        return (-2.0 * w / self.G) ** (-2.0 / 3.0)

    def pair_potential(self, s):
        return self.G * np.asarray(s, dtype=float) ** -0.5


NEWTON = PotentialLaw()


@dataclass(frozen=True)
class WcMatrix:
    """Force matrix in the u-basis: diagonal (alpha, beta, gamma),
    off-diagonal delta = (2,3), eps = (1,3), phi_e = (1,2)."""

    alpha: float
    beta: float
    gamma: float
    delta: float
    eps: float
    phi_e: float

    def sym3(self) -> Sym3:
        return Sym3(
            u=self.alpha, v=self.beta, w=self.gamma,
            x=self.delta, y=self.eps, z=self.phi_e,
        )

    def matrix(self) -> np.ndarray:
        return self.sym3().matrix()

    def entries(self) -> np.ndarray:
        """(alpha, beta, gamma, delta, eps, phi_e) as a vector."""
        return np.array(
            [self.alpha, self.beta, self.gamma, self.delta, self.eps, self.phi_e]
        )

    @staticmethod
    def from_entries(v) -> "WcMatrix":
        v = np.asarray(v, dtype=float)
        return WcMatrix(*v)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix())

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.matrix()))


@dataclass(frozen=True)
class SymmetricCoords:
    """Coordinates (alpha, theta, psi, phi_e) for block-form force matrices.

    theta = gamma - (alpha+beta)/2 and psi = (alpha-beta)/2, so that
    beta = alpha - 2 psi and gamma = alpha + theta - psi.  The block matrix
    is degenerate exactly on {psi = phi_e = 0} union {phi_e^2+psi^2 = theta^2}.
    """

    alpha: float
    theta: float
    psi: float
    phi_e: float


def phi_to_entries_matrix(ms: MassSystem) -> np.ndarray:
    """The constant 6x6 matrix sending (phi(a),...,phi(f)) to the A entries.

    Input order (a, b1, b2, d1, d2, f); output order
    (alpha, beta, gamma, delta, eps, phi_e).
    """
    ms.require_four()
    m1, m2, m3, m4 = ms.m
    basis = build_basis(ms)
    X, Y, Z, T, U, V = basis.X, basis.Y, basis.Z, basis.T, basis.U, basis.V
    return np.array(
        [
            [0.0, X * m1 * m4, X * m1 * m2, X * m3 * m4, X * m2 * m3, 0.0],
            [m1 + m3, Y * m3 * m4, Y * m2 * m3, Y * m1 * m4, Y * m1 * m2, 0.0],
            [0.0, Z * m1 * m2, Z * m1 * m4, Z * m2 * m3, Z * m3 * m4, m2 + m4],
            [0.0, V, -V, -V, V, 0.0],
            [0.0, U * m1, -U * m1, U * m3, -U * m3, 0.0],
            [0.0, T * m4, T * m2, -T * m4, -T * m2, 0.0],
        ]
    )


def wc_matrix(ms: MassSystem, s: SquaredDistances, law: PotentialLaw = NEWTON) -> WcMatrix:
    """Force matrix A of the shape in the u-basis.

    For the regular tetrahedron with unit sides this is -(M/2) * Id.
    """
    ms.require_four()
    m1, m2, m3, m4 = ms.m
    basis = build_basis(ms)
    X, Y, Z, T, U, V = basis.X, basis.Y, basis.Z, basis.T, basis.U, basis.V
    pa, pb1, pb2, pd1, pd2, pf = law.phi(s.vec())

    alpha = X * (m2 * (m1 * pb2 + m3 * pd2) + m4 * (m1 * pb1 + m3 * pd1))
    beta = (m1 + m3) * pa + Y * (m2 * (m3 * pb2 + m1 * pd2) + m4 * (m3 * pb1 + m1 * pd1))
    gamma = (m2 + m4) * pf + Z * (m1 * (m2 * pb1 + m4 * pb2) + m3 * (m2 * pd1 + m4 * pd2))
    delta = V * (pd2 - pd1 + pb1 - pb2)
    eps = U * (m1 * (pb1 - pb2) + m3 * (pd1 - pd2))
    phi_e = T * (m2 * (pb2 - pd2) + m4 * (pb1 - pd1))
    return WcMatrix(alpha, beta, gamma, delta, eps, phi_e)


def wc_to_distances(
    A: WcMatrix, ms: MassSystem, law: PotentialLaw = NEWTON
) -> SquaredDistances:
    """Invert the shape -> force map: recover squared distances from A.

    Raises ValueError when A is not in the image (a recovered phi-value is
    nonnegative) and LinAlgError if the constant linear system is singular,
    which does not happen for positive masses.
    """
    L = phi_to_entries_matrix(ms)
    phis = np.linalg.solve(L, A.entries())
    if np.any(phis >= 0.0):
        raise ValueError("not in image of force map: recovered phi-value >= 0")
    return SquaredDistances.from_vec(law.phi_inverse(phis))


def wc_symmetric_block(
    m1: float, m2: float, m3: float, a: float, b: float, d: float, f: float,
    law: PotentialLaw = NEWTON,
) -> WcMatrix:
    """Closed-form block A for the mirror-symmetric case m4 = m2, b1 = b2 = b,
    d1 = d2 = d.  The (2,3) and (1,3) entries vanish identically."""
    s13 = m1 + m3
    M = m1 + m3 + 2.0 * m2
    pa, pb, pd, pf = law.phi(np.array([a, b, d, f]))
    alpha = M / s13 * (m1 * pb + m3 * pd)
    beta = 2.0 * m2 / s13 * (m3 * pb + m1 * pd) + s13 * pa
    gamma = m1 * pb + m3 * pd + 2.0 * m2 * pf
    phi_e = np.sqrt(2.0 * m1 * m2 * m3 * M) / s13 * (pb - pd)
    return WcMatrix(alpha, beta, gamma, 0.0, 0.0, phi_e)


def symmetric_coords(A: WcMatrix, tol: float = 1e-9) -> SymmetricCoords:
    """Block coordinates of a force matrix with vanishing delta and eps."""
    scale = max(A.frobenius(), 1e-300)
    if abs(A.delta) > tol * scale or abs(A.eps) > tol * scale:
        raise ValueError("matrix is not in block form (delta or eps nonzero)")
    return SymmetricCoords(
        alpha=A.alpha,
        theta=A.gamma - 0.5 * (A.alpha + A.beta),
        psi=0.5 * (A.alpha - A.beta),
        phi_e=A.phi_e,
    )


def symmetric_coords_to_wc(c: SymmetricCoords) -> WcMatrix:
    return WcMatrix(
        alpha=c.alpha,
        beta=c.alpha - 2.0 * c.psi,
        gamma=c.alpha + c.theta - c.psi,
        delta=0.0,
        eps=0.0,
        phi_e=c.phi_e,
    )


def symmetric_degeneracy_residuals(c: SymmetricCoords) -> tuple[float, float]:
    """The two defining quantities of the block degeneracy locus.

    Returns (hypot(psi, phi_e), phi_e^2 + psi^2 - theta^2): the first
    vanishes on the scalar-upper-block component, the second on the cone
    where the lower-right entry meets an upper-block eigenvalue.
    """
    return (
        float(np.hypot(c.psi, c.phi_e)),
        float(c.phi_e**2 + c.psi**2 - c.theta**2),
    )


def symmetric_phi_values(
    m1: float, m2: float, m3: float, c: SymmetricCoords
) -> tuple[float, float, float, float]:
    """Closed-form inverse of the block force map: (phi(a), phi(b), phi(d), phi(f))
    from the block coordinates, for masses (m1, m2, m3, m2)."""
    s13 = m1 + m3
    M = m1 + m3 + 2.0 * m2
    T = np.sqrt(M * m1 * m3 / (2.0 * m2)) / s13
    pa = c.alpha / M - 2.0 * c.psi / s13 - (m3 - m1) * c.phi_e / (s13**2 * T)
    pb = c.alpha / M + m3 * c.phi_e / (2.0 * m2 * s13 * T)
    pd = c.alpha / M - m1 * c.phi_e / (2.0 * m2 * s13 * T)
    pf = c.alpha / M + (c.theta - c.psi) / (2.0 * m2)
    return (float(pa), float(pb), float(pd), float(pf))
