"""Planar rhombus central configurations and their inertia degeneracy.

For two mass pairs (m1, m2, m1, m2) a planar rhombus has squared diagonals
a and f and squared side b = (a + f)/4 (coplanarity).  The restricted
spectrum map (a, f) -> (lambda_a, lambda_f) of the force matrix has a
strictly positive Jacobian determinant everywhere, so these balanced
shapes are parametrized by the force eigenvalues; the rhombus is central
when lambda_a = lambda_f.  The central rhombus has a round inertia ellipse
exactly when m1 a = m2 f, which happens only at three mass ratios: 1 and a
reciprocal pair (gamma, 1/gamma) with gamma about 0.575.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forces import NEWTON, PotentialLaw

__all__ = [
    "PlanarRhombus",
    "planar_K",
    "planar_wc_restricted",
    "planar_wc_jacobian_det",
    "planar_degenerate_ratio",
    "degenerate_ratio_equation",
    "planar_inertia_round",
    "central_planar_rhombus",
    "mass_ratio_scan",
]


@dataclass(frozen=True)
class PlanarRhombus:
    """Planar rhombus data: masses (m1, m2, m1, m2), squared diagonals a, f."""

    m1: float
    m2: float
    a: float
    f: float

    def __post_init__(self):
        for name in ("m1", "m2", "a", "f"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def b(self) -> float:
        """Squared side; the coplanarity constraint is 4b - a - f = 0."""
        return (self.a + self.f) / 4.0


def planar_K(
    m1: float, m2: float, a0: float, b0: float, law: PotentialLaw = NEWTON
) -> float:
    """Transversality constant of the planar rhombus.

    Equals the derivative of the single symmetric balance equation with
    respect to one of the two symmetric side variables at (a0, b0, b0, f0)
    with 4 b0 = a0 + f0; the other side carries -K and the two diagonals 0.
    When K != 0 the planar symmetric balanced shapes near the rhombus are
    exactly the rhombi.
    """
    return float(
        2.0 * m1 * (law.phi(a0) - law.phi(b0)) - (m1 + m2) * a0 * law.phi_prime(b0)
    )


def planar_wc_restricted(
    m1: float, m2: float, a: float, f: float, law: PotentialLaw = NEWTON
) -> tuple[float, float]:
    """Nonzero force-matrix eigenvalues of the planar rhombus as functions of
    the squared diagonals."""
    b = (a + f) / 4.0
    lam_a = 2.0 * m1 * law.phi(a) + 2.0 * m2 * law.phi(b)
    lam_f = 2.0 * m2 * law.phi(f) + 2.0 * m1 * law.phi(b)
    return float(lam_a), float(lam_f)


def planar_wc_jacobian_det(
    m1: float, m2: float, a: float, f: float, law: PotentialLaw = NEWTON
) -> float:
    """Jacobian determinant of (a, f) -> (lambda_a, lambda_f); strictly
    positive, which makes the eigenvalue parametrization a local
    diffeomorphism everywhere."""
    b = (a + f) / 4.0
    pa, pb, pf = law.phi_prime(a), law.phi_prime(b), law.phi_prime(f)
    return float(4.0 * m1 * m2 * pa * pf + (m1**2 * pa + m2**2 * pf) * pb)


def degenerate_ratio_equation(m1, law: PotentialLaw = NEWTON):
    """Value of the normalized degeneracy condition at mass ratio m1 (m2 = 1):
    m1 - m1^(-3/2) + 8 (1 - m1) (1 + m1)^(-3/2)."""
    m1 = np.asarray(m1, dtype=float)
    return m1 - m1**-1.5 + 8.0 * (1.0 - m1) * (1.0 + m1) ** -1.5


def planar_degenerate_ratio(law: PotentialLaw = NEWTON, tol: float = 1e-14) -> float:
    """The mass ratio gamma in (0, 1) at which the central planar rhombus has
    a round inertia ellipse.  Bisection bracket plus Newton polish; the
    other roots of the defining equation are 1 and 1/gamma."""
    lo, hi = 0.1, 0.9
    flo = float(degenerate_ratio_equation(lo, law))
    fhi = float(degenerate_ratio_equation(hi, law))
    if flo * fhi > 0:
        raise RuntimeError("bisection bracket does not straddle the root")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = float(degenerate_ratio_equation(mid, law))
        if flo * fm <= 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
        if hi - lo < 1e-13:
            break
    x = 0.5 * (lo + hi)
    for _ in range(8):
        fx = float(degenerate_ratio_equation(x, law))
        h = 1e-7
        d = (degenerate_ratio_equation(x + h, law) - degenerate_ratio_equation(x - h, law)) / (2 * h)
        x -= fx / float(d)
        if abs(fx) < tol:
            break
    return float(x)


def planar_inertia_round(
    m1: float, m2: float, a: float, f: float, tol: float = 1e-9
) -> bool:
    """Whether the planar rhombus inertia ellipse is round: m1 a = m2 f.

    The nonzero inertia eigenvalues are m1 a / 2 and m2 f / 2.
    """
    scale = max(m1 * a, m2 * f)
    return abs(m1 * a - m2 * f) <= tol * scale


def central_planar_rhombus(
    m1: float, m2: float, law: PotentialLaw = NEWTON, tol: float = 1e-13
) -> PlanarRhombus:
    """The central planar rhombus for given masses, normalized to f = 1.

    Solves lambda_a(a, 1) = lambda_f(a, 1) by 1-d Newton from a = 1.
    """
    a = 1.0
    for _ in range(100):
        la, lf = planar_wc_restricted(m1, m2, a, 1.0, law)
        g = la - lf
        if abs(g) < tol * max(abs(la), abs(lf)):
            break
        h = 1e-7 * max(1.0, a)
        la2, lf2 = planar_wc_restricted(m1, m2, a + h, 1.0, law)
        d = ((la2 - lf2) - g) / h
        if d == 0.0:
            break
        step = -g / d
        while a + step <= 0:
            step *= 0.5
        a += step
    else:
        raise RuntimeError("central rhombus iteration did not converge")
    return PlanarRhombus(m1=m1, m2=m2, a=a, f=1.0)


def mass_ratio_scan(
    ratios, law: PotentialLaw = NEWTON
) -> list[tuple[float, float]]:
    """For each mass ratio r = m1/m2, the roundness defect m1 a - m2 f of the
    central planar rhombus (m2 = 1).  Sign changes locate the degenerate
    ratios gamma, 1, 1/gamma."""
    out = []
    for r in ratios:
        rh = central_planar_rhombus(float(r), 1.0, law)
        out.append((float(r), float(rh.m1 * rh.a - rh.m2 * rh.f)))
    return out
