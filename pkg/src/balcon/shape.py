"""Squared-distance data, point configurations, Cayley-Menger test, inertia matrix.

Distance labels for four bodies follow a fixed convention:

    a = r13^2,  b1 = r14^2,  b2 = r12^2,  d1 = r34^2,  d2 = r32^2,  f = r24^2

chosen so that the mirror-symmetric case (bodies 2 and 4 reflected through
the plane of bodies 1 and 3) is simply b1 = b2, d1 = d2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .massspace import MassSystem, build_basis

__all__ = [
    "SquaredDistances",
    "PointConfiguration",
    "Sym3",
    "distances_from_points",
    "cayley_menger",
    "inertia_matrix",
    "inertia_trace",
]

# order of the six components everywhere a flat vector is used
DIST_KEYS = ("a", "b1", "b2", "d1", "d2", "f")


@dataclass(frozen=True)
class SquaredDistances:
    """The six squared mutual distances of a 4-body shape (collision-free)."""

    a: float
    b1: float
    b2: float
    d1: float
    d2: float
    f: float

    def __post_init__(self):
        for k in DIST_KEYS:
            v = float(getattr(self, k))
            if not np.isfinite(v) or v <= 0.0:
                raise ValueError(f"squared distance {k} must be positive, got {v}")
            object.__setattr__(self, k, v)

    def vec(self) -> np.ndarray:
        """Components in the fixed order (a, b1, b2, d1, d2, f)."""
        return np.array([self.a, self.b1, self.b2, self.d1, self.d2, self.f])

    @staticmethod
    def from_vec(v) -> "SquaredDistances":
        v = np.asarray(v, dtype=float)
        if v.shape != (6,):
            raise ValueError("expected 6 squared distances")
        return SquaredDistances(*v)

    def pair_table(self) -> dict[tuple[int, int], float]:
        """Squared distance by body-index pair (i < j, zero-based)."""
        return {
            (0, 1): self.b2,
            (0, 2): self.a,
            (0, 3): self.b1,
            (1, 2): self.d2,
            (1, 3): self.f,
            (2, 3): self.d1,
        }

    @staticmethod
    def from_pair_table(table) -> "SquaredDistances":
        return SquaredDistances(
            a=table[(0, 2)],
            b1=table[(0, 3)],
            b2=table[(0, 1)],
            d1=table[(2, 3)],
            d2=table[(1, 2)],
            f=table[(1, 3)],
        )


@dataclass(frozen=True)
class PointConfiguration:
    """Positions (n x dim array) together with their masses."""

    points: np.ndarray
    masses: MassSystem

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.shape[0] != self.masses.n:
            raise ValueError("number of points must match number of masses")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class Sym3:
    """A 3x3 symmetric matrix stored as six entries.

    (u, v, w) is the diagonal; x, y, z are the (2,3), (1,3), (1,2) entries.
    """

    u: float
    v: float
    w: float
    x: float
    y: float
    z: float

    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.u, self.z, self.y],
                [self.z, self.v, self.x],
                [self.y, self.x, self.w],
            ]
        )

    @staticmethod
    def from_matrix(m) -> "Sym3":
        m = np.asarray(m, dtype=float)
        if m.shape != (3, 3):
            raise ValueError("expected a 3x3 matrix")
        if np.max(np.abs(m - m.T)) > 1e-12 * max(1.0, np.max(np.abs(m))):
            raise ValueError("matrix is not symmetric")
        return Sym3(u=m[0, 0], v=m[1, 1], w=m[2, 2], x=m[1, 2], y=m[0, 2], z=m[0, 1])

    def entries(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w, self.x, self.y, self.z])

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.matrix()))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix())


def distances_from_points(cfg: PointConfiguration) -> SquaredDistances:
    """Squared mutual distances of a 4-point configuration, in the fixed labeling."""
    pts = cfg.points
    if pts.shape[0] != 4:
        raise ValueError("distance labeling is defined for 4 points")
    table = {}
    for i in range(4):
        for j in range(i + 1, 4):
            d2 = float(np.sum((pts[i] - pts[j]) ** 2))
            if d2 == 0.0:
                raise ValueError(f"points {i} and {j} coincide")
            table[(i, j)] = d2
    return SquaredDistances.from_pair_table(table)


def cayley_menger(s: SquaredDistances) -> float:
    """Bordered squared-distance determinant; equals 288 V^2 for a tetrahedron.

    Zero (to a caller-chosen tolerance) exactly when the four points are
    coplanar; negative values signal distance data not embeddable in R^3
    with positive volume.
    """
    t = s.pair_table()
    m = np.ones((5, 5))
    m[0, 0] = 0.0
    for i in range(4):
        m[i + 1, i + 1] = 0.0
        for j in range(i + 1, 4):
            m[i + 1, j + 1] = m[j + 1, i + 1] = t[(i, j)]
    return float(np.linalg.det(m))


def inertia_matrix(ms: MassSystem, s: SquaredDistances) -> Sym3:
    """Intrinsic inertia matrix B of the shape, in the {u1,u2,u3} basis."""
    ms.require_four()
    m1, m2, m3, m4 = ms.m
    M = ms.M
    basis = build_basis(ms)
    T, U, V = basis.T, basis.U, basis.V
    s13 = m1 + m3
    s24 = m2 + m4
    a, b1, b2, d1, d2, f = s.vec()

    u = (m2 * (m1 * b2 + m3 * d2) + m4 * (m1 * b1 + m3 * d1)) / M - (
        m1 * m3 * (s24 / s13) * a + m2 * m4 * (s13 / s24) * f
    ) / M
    v = m1 * m3 / s13 * a
    w = m2 * m4 / s24 * f
    x = 0.5 * V * (d2 - d1 + b1 - b2)
    y = U * s24 / (2.0 * M) * (m1 * (b1 - b2) + m3 * (d1 - d2)) + U * (m4 - m2) * s13 / (
        2.0 * M
    ) * f
    z = T * s13 / (2.0 * M) * (m2 * (b2 - d2) + m4 * (b1 - d1)) + T * (m1 - m3) * s24 / (
        2.0 * M
    ) * a
    return Sym3(u=u, v=v, w=w, x=x, y=y, z=z)


def inertia_trace(ms: MassSystem, s: SquaredDistances) -> float:
    """Moment of inertia about the center of mass: (1/M) sum m_i m_j r_ij^2."""
    ms.require_four()
    m = ms.m
    t = s.pair_table()
    acc = 0.0
    for (i, j), sij in sorted(t.items()):
        acc += m[i] * m[j] * sij
    return acc / ms.M
