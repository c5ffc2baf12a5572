"""Residuals of the balance equations for n-body shapes.

A shape is balanced exactly when one residual per body triple (i, j, k)
vanishes.  Two independent evaluation routes are provided: 3x3 determinants
valid for any n, and fully expanded polynomials for n = 4.  Both are
normalized to the same convention (the expanded form), so they agree to
rounding, not merely up to a factor.

For 4 bodies the four residuals satisfy p123 - p124 + p134 - p234 = 0
identically, so only three are independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forces import NEWTON, PotentialLaw
from .massspace import MassSystem
from .shape import SquaredDistances

__all__ = [
    "BalanceResidual",
    "balance_residuals_general",
    "balance_residuals_4body",
    "symmetric_balance_residual",
    "residual_scale",
    "is_balanced",
]


@dataclass(frozen=True)
class BalanceResidual:
    """Residuals keyed by body triple (zero-based, i < j < k)."""

    triples: tuple[tuple[int, int, int], ...]
    values: np.ndarray

    @property
    def p123(self) -> float:
        return self[(0, 1, 2)]

    @property
    def p124(self) -> float:
        return self[(0, 1, 3)]

    @property
    def p134(self) -> float:
        return self[(0, 2, 3)]

    @property
    def p234(self) -> float:
        return self[(1, 2, 3)]

    def __getitem__(self, triple) -> float:
        return float(self.values[self.triples.index(tuple(triple))])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def alternating_sum(self) -> float:
        """p123 - p124 + p134 - p234 (4-body dependency; identically zero)."""
        return self.p123 - self.p124 + self.p134 - self.p234


def _distance_table(n: int, s) -> np.ndarray:
    """Normalize distance input to a full symmetric (n, n) array."""
    if isinstance(s, SquaredDistances):
        if n != 4:
            raise ValueError("labeled squared distances describe 4 bodies")
        tab = np.zeros((4, 4))
        for (i, j), v in s.pair_table().items():
            tab[i, j] = tab[j, i] = v
        return tab
    if isinstance(s, dict):
        tab = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                key = (i, j) if (i, j) in s else (j, i)
                if key not in s:
                    raise ValueError(f"missing squared distance for pair {(i, j)}")
                tab[i, j] = tab[j, i] = float(s[key])
        return tab
    tab = np.asarray(s, dtype=float)
    if tab.shape != (n, n):
        raise ValueError(f"expected an ({n},{n}) distance table")
    return tab


def _det3_rows(p, q):
    """det [[1,1,1],[p1,p2,p3],[q1,q2,q3]]."""
    return (
        p[0] * (q[1] - q[2]) + p[1] * (q[2] - q[0]) + p[2] * (q[0] - q[1])
    )


def balance_residuals_general(masses, s, law: PotentialLaw = NEWTON) -> BalanceResidual:
    """Balance residuals for any n >= 3, one per triple, via 3x3 determinants.

    Parameters
    ----------
    masses : sequence of positive floats
    s : (n, n) array, pair dict, or SquaredDistances (n = 4 only)
    """
    m = [float(v) for v in masses]
    n = len(m)
    if n < 3:
        raise ValueError("need at least three bodies")
    tab = _distance_table(n, s)
    if np.any(tab[~np.eye(n, dtype=bool)] <= 0.0):
        raise ValueError("all pairwise squared distances must be positive")
    phi = law.phi

    triples = []
    values = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                sjk, ski, sij = tab[j, k], tab[k, i], tab[i, j]
                grad = _det3_rows(
                    (
                        m[i] * (sjk - ski - sij),
                        m[j] * (ski - sij - sjk),
                        m[k] * (sij - sjk - ski),
                    ),
                    (phi(sjk), phi(ski), phi(sij)),
                )
                outer = 0.0
                for l in range(n):
                    if l in (i, j, k):
                        continue
                    outer += m[l] * _det3_rows(
                        (sjk + tab[i, l], ski + tab[j, l], sij + tab[k, l]),
                        (phi(tab[i, l]), phi(tab[j, l]), phi(tab[k, l])),
                    )
                # grad - outer matches the expanded 4-body convention below
                triples.append((i, j, k))
                values.append(grad - outer)
    return BalanceResidual(tuple(triples), np.array(values))


def balance_residuals_4body(
    ms: MassSystem, s: SquaredDistances, law: PotentialLaw = NEWTON
) -> BalanceResidual:
    """The four expanded balance residuals of a 4-body shape."""
    ms.require_four()
    m1, m2, m3, m4 = ms.m
    a, b1, b2, d1, d2, f = s.vec()
    pa, pb1, pb2, pd1, pd2, pf = law.phi(s.vec())

    p123 = (
        m1 * (d2 - a - b2) * (pa - pb2)
        - m4 * (d2 + b1) * (pf - pd1)
        + m2 * (a - b2 - d2) * (pb2 - pd2)
        - m4 * (a + f) * (pd1 - pb1)
        + m3 * (b2 - d2 - a) * (pd2 - pa)
        - m4 * (b2 + d1) * (pb1 - pf)
    )
    p124 = (
        m1 * (f - b1 - b2) * (pb1 - pb2)
        - m3 * (f + a) * (pd2 - pd1)
        + m2 * (b1 - b2 - f) * (pb2 - pf)
        - m3 * (b1 + d2) * (pd1 - pa)
        + m4 * (b2 - f - b1) * (pf - pb1)
        - m3 * (b2 + d1) * (pa - pd2)
    )
    p134 = (
        m1 * (d1 - b1 - a) * (pb1 - pa)
        - m2 * (d1 + b2) * (pd2 - pf)
        + m3 * (b1 - a - d1) * (pa - pd1)
        - m2 * (b1 + d2) * (pf - pb2)
        + m4 * (a - d1 - b1) * (pd1 - pb1)
        - m2 * (a + f) * (pb2 - pd2)
    )
    p234 = (
        m2 * (d1 - f - d2) * (pf - pd2)
        - m1 * (d1 + b2) * (pa - pb1)
        + m3 * (f - d2 - d1) * (pd2 - pd1)
        - m1 * (f + a) * (pb1 - pb2)
        + m4 * (d2 - d1 - f) * (pd1 - pf)
        - m1 * (d2 + b1) * (pb2 - pa)
    )
    return BalanceResidual(
        ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)),
        np.array([p123, p124, p134, p234]),
    )


def symmetric_balance_residual(
    m1: float, m2: float, m3: float,
    a: float, b: float, d: float, f: float,
    law: PotentialLaw = NEWTON,
) -> float:
    """Single balance equation of the mirror-symmetric case
    (masses m1, m2, m3, m2 with b1 = b2 = b, d1 = d2 = d).

    Equals the p123 residual of the full 4-body form under that substitution;
    the companion p134 is its negative and p124 = p234 = 0.
    """
    pa, pb, pd, pf = law.phi(np.array([a, b, d, f]))
    return float(
        m1 * (d - a - b) * (pa - pb)
        - m2 * (d + b) * (pf - pd)
        + m2 * (a - b - d) * (pb - pd)
        - m2 * (a + f) * (pd - pb)
        + m3 * (b - d - a) * (pd - pa)
        - m2 * (b + d) * (pb - pf)
    )


def residual_scale(masses, s, law: PotentialLaw = NEWTON) -> float:
    """Homogeneity normalizer for balance residuals.

    M^2 * max|phi'(s)| * (max s)^2 carries the same scaling degree in the
    distances as the residuals themselves (both scale as lambda^(-1/2) for
    the Newtonian law), so residual/scale is invariant under s -> lambda*s.
    """
    m = np.asarray([float(v) for v in masses])
    n = len(m)
    tab = _distance_table(n, s)
    vals = tab[np.triu_indices(n, k=1)]
    smax = float(np.max(vals))
    return float(np.sum(m)) ** 2 * float(np.max(np.abs(law.phi_prime(vals)))) * smax**2


def is_balanced(
    ms: MassSystem, s, law: PotentialLaw = NEWTON, tol: float = 1e-9
) -> tuple[bool, float]:
    """Whether all normalized balance residuals are below tol.

    Returns (verdict, max normalized residual).
    """
    if ms.n == 4 and isinstance(s, SquaredDistances):
        res = balance_residuals_4body(ms, s, law)
    else:
        res = balance_residuals_general(ms.m, s, law)
    norm = res.max_abs() / residual_scale(ms.m, s, law)
    return norm <= tol, float(norm)
