"""Mass systems and the mass-weighted orthonormal basis of codisposition space.

For four bodies with masses (m1, m2, m3, m4) there is a convenient basis
{u1, u2, u3} of the space of zero-sum coefficient vectors, orthonormal for
the inner product <x, y> = sum_k x[k] y[k] / m_k.  All 3x3 matrices built
downstream (inertia, force) are expressed in this basis, so its orientation
conventions are fixed here once and for all: every kappa_k is the positive
square root.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MassSystem",
    "OrthonormalBasis",
    "build_basis",
    "verify_orthonormal",
]


@dataclass(frozen=True)
class MassSystem:
    """Positive masses in input order plus their total.

    Masses are never reordered internally: all basis and matrix formulas are
    index-sensitive.  The total is accumulated left to right so that it is
    bit-reproducible for a given input order.
    """

    m: tuple[float, ...]
    M: float = field(init=False)

    def __post_init__(self):
        m = tuple(float(v) for v in self.m)
        if len(m) < 2:
            raise ValueError("need at least two masses")
        if any(not np.isfinite(v) or v <= 0.0 for v in m):
            raise ValueError("all masses must be positive and finite")
        total = 0.0
        for v in m:
            total += v
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "M", total)

    @property
    def n(self) -> int:
        return len(self.m)

    def require_four(self):
        if self.n != 4:
            raise ValueError(f"operation requires exactly 4 masses, got {self.n}")

    def as_array(self) -> np.ndarray:
        return np.array(self.m, dtype=float)


@dataclass(frozen=True)
class OrthonormalBasis:
    """Basis {u1, u2, u3} of the dual disposition space plus derived constants.

    Attributes
    ----------
    u1, u2, u3 : ndarray, shape (4,)
        Zero-sum vectors, orthonormal for the 1/m-weighted inner product.
    kappa1, kappa2, kappa3 : float
        The positive normalization roots.
    X, Y, Z, T, U, V : float
        Mass constants reused by the inertia and force matrices.  They
        satisfy X = M*Y*Z = T*U/V.
    """

    u1: np.ndarray
    u2: np.ndarray
    u3: np.ndarray
    kappa1: float
    kappa2: float
    kappa3: float
    X: float
    Y: float
    Z: float
    T: float
    U: float
    V: float

    def matrix(self) -> np.ndarray:
        """Rows u1, u2, u3 as a 3x4 array."""
        return np.vstack([self.u1, self.u2, self.u3])


def build_basis(ms: MassSystem) -> OrthonormalBasis:
    """Construct the mass-weighted orthonormal basis and constants for 4 bodies.

    kappa1^2 = 1/(M (m1+m3)(m2+m4)), kappa2^2 = m1 m3/(m1+m3),
    kappa3^2 = m2 m4/(m2+m4); u2 and u3 are the body-pair difference
    directions (1,0,-1,0) and (0,1,0,-1), u1 the pair-vs-pair direction.
    """
    ms.require_four()
    m1, m2, m3, m4 = ms.m
    M = ms.M
    s13 = m1 + m3
    s24 = m2 + m4

    kappa1 = np.sqrt(1.0 / (M * s13 * s24))
    kappa2 = np.sqrt(m1 * m3 / s13)
    kappa3 = np.sqrt(m2 * m4 / s24)

    u1 = kappa1 * np.array([m1 * s24, -m2 * s13, m3 * s24, -m4 * s13])
    u2 = kappa2 * np.array([1.0, 0.0, -1.0, 0.0])
    u3 = kappa3 * np.array([0.0, 1.0, 0.0, -1.0])

    X = M / (s13 * s24)
    Y = 1.0 / s13
    Z = 1.0 / s24
    T = np.sqrt(M * m1 * m3 / s24) / s13
    U = np.sqrt(M * m2 * m4 / s13) / s24
    V = np.sqrt(m1 * m2 * m3 * m4 / (s13 * s24))

    return OrthonormalBasis(u1, u2, u3, kappa1, kappa2, kappa3, X, Y, Z, T, U, V)


def verify_orthonormal(ms: MassSystem, basis: OrthonormalBasis) -> float:
    """Max deviation of the 1/m-weighted Gram matrix of {u1,u2,u3} from identity."""
    ms.require_four()
    B = basis.matrix()
    if B.shape[1] != ms.n:
        raise ValueError("basis/mass dimension mismatch")
    w = 1.0 / ms.as_array()
    gram = (B * w) @ B.T
    return float(np.max(np.abs(gram - np.eye(3))))
