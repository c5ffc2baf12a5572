"""Linearized analysis at the regular tetrahedron.

The balance equations, linearized at the unit regular tetrahedron, reduce
to a constant 4x6 matrix K acting on distance perturbations; its kernel is
spanned by three explicit mass vectors E1, E2, E3.  Pushing a kernel
direction E2 + x*E3 through the linearized force map L and evaluating the
three cubic degeneracy polynomials yields, for every mass choice, the SAME
cubic E(x) times three mass prefactors.  The real negative roots of E(x)
are therefore the tangent directions of the curves of degenerate balanced
shapes through the tetrahedron.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .degeneracy import c2_polynomials
from .forces import phi_to_entries_matrix
from .massspace import MassSystem
from .shape import Sym3

__all__ = [
    "MassCubic",
    "TangentDirection",
    "k_matrix",
    "kernel_vectors",
    "l_matrix",
    "mass_cubic",
    "proportionality_prefactors",
    "verify_proportionality",
    "tangent_directions",
    "three_masses_equal",
]

E1 = np.ones(6)


def three_masses_equal(ms: MassSystem, rtol: float = 1e-12) -> bool:
    """True when at least three of the four masses coincide (relatively)."""
    m = sorted(ms.m)
    scale = m[-1]
    for i in (0, 1):
        if abs(m[i + 2] - m[i]) <= rtol * scale:
            return True
    return False


def k_matrix(ms: MassSystem) -> np.ndarray:
    """Linearization of the four balance residuals at the unit tetrahedron,
    divided by phi'(1).  Columns follow the distance order (a,b1,b2,d1,d2,f);
    rows follow the triples (123), (124), (134), (234).

    Rank is 0 when all four masses are equal, 2 when exactly three are, and
    3 otherwise.
    """
    ms.require_four()
    m1, m2, m3, m4 = ms.m
    return np.array(
        [
            [m3 - m1, 0.0, m1 - m2, 0.0, m2 - m3, 0.0],
            [0.0, m4 - m1, m1 - m2, 0.0, 0.0, m2 - m4],
            [m1 - m3, m4 - m1, 0.0, m3 - m4, 0.0, 0.0],
            [0.0, 0.0, 0.0, m3 - m4, m2 - m3, m4 - m2],
        ]
    )


def kernel_vectors(ms: MassSystem) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three kernel generators of K (valid when no three masses are equal).

    Each component pairs a distance r_ij with the complementary mass pair
    {k, l}: E2 carries the products m_k m_l, E3 the sums m_k + m_l.
    """
    ms.require_four()
    if three_masses_equal(ms):
        raise ValueError(
            "kernel basis undefined when three masses are equal; use the "
            "symmetric closed-form families instead (continuation module)"
        )
    m1, m2, m3, m4 = ms.m
    e2 = np.array([m2 * m4, m2 * m3, m3 * m4, m1 * m2, m1 * m4, m1 * m3])
    e3 = np.array([m2 + m4, m2 + m3, m3 + m4, m1 + m2, m1 + m4, m1 + m3])
    return E1.copy(), e2, e3


def l_matrix(ms: MassSystem) -> np.ndarray:
    """Linearization of the force-matrix entries at the unit tetrahedron,
    divided by phi'(1).

    Identical to the constant matrix of the (exactly linear) map from
    phi-values to entries; rows ordered (alpha, beta, gamma, delta, eps,
    phi_e), columns (a, b1, b2, d1, d2, f).
    """
    return phi_to_entries_matrix(ms)


@dataclass(frozen=True)
class MassCubic:
    """The bifurcation-direction cubic E(x) and its three real negative roots.

    E(x) = c3 x^3 + c2 x^2 + c1 x + c0 with c3 = sum(m), c2 = 2 e2(m),
    c1 = 3 e3(m), c0 = 4 e4(m) in elementary symmetric functions; it equals
    x^3 F'(1/x) for F(y) = prod(1 + m_i y), whence the three roots interlace
    the -m_i and are real and negative.
    """

    c3: float
    c2: float
    c1: float
    c0: float
    roots: tuple[float, float, float]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        return (3.0 * self.c3 * x + 2.0 * self.c2) * x + self.c1

    def coefficient_scale(self) -> float:
        return max(abs(self.c3), abs(self.c2), abs(self.c1), abs(self.c0))


def _cubic_roots_real(c3, c2, c1, c0):
    """Roots of a cubic known to have three real roots, by the trigonometric
    formula; falls back to the companion matrix if the discriminant is
    numerically negative."""
    b, c, d = c2 / c3, c1 / c3, c0 / c3
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    disc = -4.0 * p**3 - 27.0 * q * q
    if disc < 0.0 or p >= 0.0:
        roots = np.roots([c3, c2, c1, c0])
        return np.sort(roots.real)
    r = np.sqrt(-p / 3.0)
    arg = np.clip(3.0 * q / (2.0 * p * r), -1.0, 1.0)
    theta = np.arccos(arg) / 3.0
    ks = np.array([0.0, 1.0, 2.0])
    roots = 2.0 * r * np.cos(theta - 2.0 * np.pi * ks / 3.0) - b / 3.0
    return np.sort(roots)


def mass_cubic(ms: MassSystem) -> MassCubic:
    ms.require_four()
    m1, m2, m3, m4 = ms.m
    c3 = m1 + m2 + m3 + m4
    c2 = 2.0 * (m1 * m2 + m1 * m3 + m1 * m4 + m2 * m3 + m2 * m4 + m3 * m4)
    c1 = 3.0 * (m1 * m2 * m3 + m1 * m2 * m4 + m1 * m3 * m4 + m2 * m3 * m4)
    c0 = 4.0 * m1 * m2 * m3 * m4
    roots = _cubic_roots_real(c3, c2, c1, c0)
    # Newton polish; the derivative vanishes at repeated roots, so clamp
    for _ in range(2):
        val = ((c3 * roots + c2) * roots + c1) * roots + c0
        der = (3.0 * c3 * roots + 2.0 * c2) * roots + c1
        safe = np.abs(der) > 1e-300
        upd = np.where(safe, val / np.where(safe, der, 1.0), 0.0)
        roots = roots - np.clip(upd, -0.1, 0.1)
    return MassCubic(c3, c2, c1, c0, tuple(float(r) for r in np.sort(roots)[::-1]))


def proportionality_prefactors(ms: MassSystem) -> tuple[float, float, float]:
    """Mass prefactors relating the three degeneracy polynomials along kernel
    directions to the cubic E(x)."""
    m1, m2, m3, m4 = ms.m
    M = ms.M
    s13, s24 = m1 + m3, m2 + m4
    v = np.sqrt(m1 * m2 * m3 * m4 / (s13 * s24))
    pre1 = (
        (m1 - m3) * (m2 - m4) / (s13 * s24) * v
        * 2.0 * M * (m1 * m2 * m3 + m1 * m3 * m4 - m2 * m3 * m4 - m1 * m2 * m4)
    )
    pre2 = ((m1 - m3) ** 2) * (m2 - m4) / s13 * m1 * m3 * np.sqrt(M * m2 * m4 / s13)
    pre3 = (m1 - m3) * ((m2 - m4) ** 2) / s24 * m2 * m4 * np.sqrt(M * m1 * m3 / s24)
    return float(pre1), float(pre2), float(pre3)


def _entries_to_sym3(entries) -> Sym3:
    alpha, beta, gamma, delta, eps, phi_e = entries
    return Sym3(u=alpha, v=beta, w=gamma, x=delta, y=eps, z=phi_e)


def verify_proportionality(ms: MassSystem, x: float):
    """Evaluate the three degeneracy polynomials at the entry vector
    L(E2) + x L(E3) and compare with prefactor * E(x).

    Returns (q, predicted): two 3-vectors that agree to rounding for every
    mass system with no three masses equal.
    """
    _, e2, e3 = kernel_vectors(ms)
    lm = l_matrix(ms)
    entries = lm @ (e2 + x * e3)
    q = np.array(c2_polynomials(_entries_to_sym3(entries)))
    cubic = mass_cubic(ms)
    pre = np.array(proportionality_prefactors(ms))
    return q, pre * cubic(x)


@dataclass(frozen=True)
class TangentDirection:
    """One tangent direction of the degenerate-balanced curves at the
    tetrahedron: the seeding root of E(x), the unit direction in distance
    space (component sum zero), the first-order coalescing eigenvalue pair
    of the force matrix, and a flag for repeated roots of E."""

    root: float
    direction: np.ndarray
    pair: str
    multiplicity: int


def tangent_directions(
    ms: MassSystem, root_rtol: float = 1e-7
) -> list[TangentDirection]:
    """Tangents of the three curves of degenerate balanced shapes.

    Directions are E2 + x_k E3 projected to zero component sum (the quotient
    by the uniform dilation E1, which does not affect degeneracy) and
    normalized.  The coalescing pair is read off the eigenvalues of the
    first-order force perturbation along each direction.
    """
    _, e2, e3 = kernel_vectors(ms)
    cubic = mass_cubic(ms)
    lm = l_matrix(ms)
    roots = np.array(cubic.roots)
    scale = max(abs(r) for r in cubic.roots)
    out = []
    for k, xk in enumerate(cubic.roots):
        mult = int(np.sum(np.abs(roots - xk) <= root_rtol * scale))
        d = e2 + xk * e3
        d = d - (np.sum(d) / 6.0) * E1
        norm = np.linalg.norm(d)
        if norm == 0.0:
            raise ValueError("degenerate direction (masses too symmetric)")
        d = d / norm
        pert = _entries_to_sym3(lm @ d)
        ev = np.sort(np.linalg.eigvalsh(pert.matrix()))
        pair = "12" if (ev[1] - ev[0]) <= (ev[2] - ev[1]) else "23"
        out.append(TangentDirection(root=xk, direction=d, pair=pair, multiplicity=mult))
    return out
