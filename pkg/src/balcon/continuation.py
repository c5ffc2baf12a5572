"""Numerical continuation of the curves of degenerate balanced shapes.

Each curve stems from the unit regular tetrahedron along a tangent
direction supplied by the mass cubic.  Points on a curve satisfy, in the
six squared distances (normalized to component sum 6):

    * three independent balance residuals = 0,
    * smallest singular value of the force-matrix commutant = 0,
    * component sum = 6,
    * a pseudo-arclength pin.

The corrector is never run at the tetrahedron itself, where the
degeneracy constraint is singular (all three eigenvalues cross there);
the first point sits one predictor step along the analytic tangent.

Closed-form families in the symmetric mass cases serve as independent
oracles for the continued curves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .balance import balance_residuals_4body, residual_scale, symmetric_balance_residual
from .degeneracy import commutant_matrix
from .forces import (
    NEWTON,
    PotentialLaw,
    SymmetricCoords,
    phi_to_entries_matrix,
    symmetric_phi_values,
    wc_matrix,
)
from .massspace import MassSystem
from .shape import SquaredDistances, Sym3, cayley_menger
from .tetra import tangent_directions

__all__ = [
    "BranchPoint",
    "Branch",
    "continue_branch",
    "polish_point",
    "z2_branch_oracle",
    "z3_branch_oracle",
    "z3_basis",
    "z2_cone_tangent",
]

SUM_NORMALIZATION = 6.0  # component sum of the unit tetrahedron

_TETRA = np.ones(6)


@dataclass(frozen=True)
class BranchPoint:
    """One accepted point of a continued curve.

    s is normalized to component sum 6; pair labels the coalescing
    eigenvalue pair of the force matrix among its sorted eigenvalues.
    """

    s: SquaredDistances
    pair: str
    arclength: float
    balance_residual: float
    gap: float
    eigenvalues: tuple[float, float, float]
    cayley_menger: float
    embeddable: bool


@dataclass
class Branch:
    """An ordered run of branch points seeded by one root of the mass cubic."""

    root: float
    root_index: int
    points: list[BranchPoint] = field(default_factory=list)
    truncated: str | None = None

    def distances(self) -> np.ndarray:
        return np.array([p.s.vec() for p in self.points])

    def arclengths(self) -> np.ndarray:
        return np.array([p.arclength for p in self.points])


def _newton(f, x0, tol=1e-12, max_iter=25, fd_step=1e-7):
    """Damped Newton with forward-difference Jacobian; returns (x, ok, res).

    Used for the smooth oracle systems; the continuation corrector has its
    own iteration because of the nonsmooth degeneracy constraint.
    """
    x = x0.copy()
    fx = f(x)
    for _ in range(max_iter):
        res = np.max(np.abs(fx))
        if res < tol:
            return x, True, res
        n = len(x)
        jac = np.empty((len(fx), n))
        for j in range(n):
            xj = x.copy()
            step = fd_step * max(1.0, abs(x[j]))
            xj[j] += step
            jac[:, j] = (f(xj) - fx) / step
        try:
            dx = np.linalg.solve(jac, -fx)
        except np.linalg.LinAlgError:
            dx = np.linalg.lstsq(jac, -fx, rcond=None)[0]
        lam = 1.0
        for _ in range(8):
            xn = x + lam * dx
            try:
                fn = f(xn)
            except ValueError:
                lam *= 0.5
                continue
            if np.max(np.abs(fn)) < np.max(np.abs(fx)):
                x, fx = xn, fn
                break
            lam *= 0.5
        else:
            return x, False, np.max(np.abs(fx))
    return x, np.max(np.abs(fx)) < tol, float(np.max(np.abs(fx)))


def _correct(
    ms: MassSystem,
    law: PotentialLaw,
    pred: np.ndarray,
    tangent: np.ndarray,
    tol: float,
    max_iter: int,
):
    """Newton corrector for {balance = 0, commutant gap = 0, sum = 6, pin = 0}.

    The gap residual is sigma_min of the commutant matrix, which is
    V-shaped across the curve; a plain finite-difference Jacobian loses its
    gradient sign there.  Instead the gap row is assembled analytically as
    w3^T (dN/ds_j) v3 with (w3, v3) the current smallest singular pair:
    this equals the one-sided derivative of sigma_min, with the side
    encoded in the orientation of the pair, so the step lands on the kink
    from either side.
    """
    scale_ref = residual_scale(ms.m, SquaredDistances(1, 1, 1, 1, 1, 1), law)
    L = phi_to_entries_matrix(ms)

    def balance_part(x):
        sd = SquaredDistances.from_vec(x)
        return balance_residuals_4body(ms, sd, law).values[:3] / scale_ref

    def gap_part(x):
        sd = SquaredDistances.from_vec(x)
        A = wc_matrix(ms, sd, law)
        n = commutant_matrix(A.sym3())
        uu, sv, vt = np.linalg.svd(n.rows, full_matrices=False)
        return sv[-1], uu[:, -1], vt[-1], max(np.linalg.norm(A.matrix()), 1e-300)

    def full_residual(x):
        gap, _, _, anorm = gap_part(x)
        bal = balance_part(x)
        return np.array(
            [bal[0], bal[1], bal[2], gap / anorm,
             np.sum(x) - SUM_NORMALIZATION, tangent @ (x - pred)]
        )

    x = pred.copy()
    fx = full_residual(x)
    res = float(np.max(np.abs(fx)))
    for _ in range(max_iter):
        if res < tol:
            return x, True, res
        jac = np.zeros((6, 6))
        bal0 = fx[:3]
        for j in range(6):
            xj = x.copy()
            step = 1e-7 * max(1.0, abs(x[j]))
            xj[j] += step
            jac[:3, j] = (balance_part(xj) - bal0) / step
        _, w3, v3, anorm = gap_part(x)
        phip = law.phi_prime(x)
        for j in range(6):
            # dA/ds_j in Sym3 field order (the entry vector order matches)
            nj = commutant_matrix(Sym3(*(L[:, j] * phip[j])))
            jac[3, j] = (w3 @ nj.rows @ v3) / anorm
        jac[4, :] = 1.0
        jac[5, :] = tangent
        try:
            dx = np.linalg.solve(jac, -fx)
        except np.linalg.LinAlgError:
            dx = np.linalg.lstsq(jac, -fx, rcond=None)[0]
        lam = 1.0
        improved = False
        for _ in range(10):
            xn = x + lam * dx
            if np.all(xn > 0.0):
                fn = full_residual(xn)
                rn = float(np.max(np.abs(fn)))
                if rn < res:
                    x, fx, res = xn, fn, rn
                    improved = True
                    break
            lam *= 0.5
        if not improved:
            return x, res < tol, res
    return x, res < tol, res


def _eigen_info(ms: MassSystem, sd: SquaredDistances, law: PotentialLaw):
    A = wc_matrix(ms, sd, law)
    ev = np.sort(np.linalg.eigvalsh(A.matrix()))
    pair = "12" if (ev[1] - ev[0]) <= (ev[2] - ev[1]) else "23"
    return ev, pair


def _make_point(ms, svec, arclength, law) -> BranchPoint:
    sd = SquaredDistances.from_vec(svec)
    bal = balance_residuals_4body(ms, sd, law).max_abs() / residual_scale(ms.m, sd, law)
    A = wc_matrix(ms, sd, law)
    gap = np.linalg.svd(commutant_matrix(A.sym3()).rows, compute_uv=False)[-1]
    gap_rel = gap / max(A.frobenius(), 1e-300)
    cm = cayley_menger(sd)
    ev, pair = _eigen_info(ms, sd, law)
    return BranchPoint(
        s=sd,
        pair=pair,
        arclength=float(arclength),
        balance_residual=float(bal),
        gap=float(gap_rel),
        eigenvalues=tuple(float(v) for v in ev),
        cayley_menger=float(cm),
        embeddable=bool(cm >= -1e-9),
    )


def polish_point(
    ms: MassSystem,
    s: SquaredDistances,
    law: PotentialLaw = NEWTON,
    tol: float = 1e-14,
) -> SquaredDistances:
    """Drive a near-branch point onto the curve to (near) machine precision.

    The pin keeps the corrector in the hyperplane through the input point
    orthogonal to the local tangent estimate, so the point does not slide
    along the curve.
    """
    s0 = s.vec()
    tangent = s0 - _TETRA * (np.sum(s0) / SUM_NORMALIZATION)
    nt = np.linalg.norm(tangent)
    tangent = tangent / nt if nt > 0 else np.array([1.0, 0, 0, 0, 0, -1.0]) / np.sqrt(2)
    x, ok, res = _correct(ms, law, s0, tangent, tol=tol, max_iter=40)
    if not ok and res > 1e-10:
        raise RuntimeError(f"polish failed to converge (residual {res:.2e})")
    return SquaredDistances.from_vec(x)


def continue_branch(
    ms: MassSystem,
    root_index: int,
    steps: int = 50,
    h: float = 1e-3,
    law: PotentialLaw = NEWTON,
    adapt: bool = False,
    sign: float = 1.0,
    newton_tol: float = 1e-11,
    max_iter: int = 25,
    h_min: float = 1e-6,
    h_max: float = 1e-2,
) -> Branch:
    """Predictor-corrector continuation of one degenerate-balanced curve.

    Parameters
    ----------
    root_index : which tangent direction (0..2, roots sorted descending)
    steps : number of points to attempt
    h : (initial) arclength step
    adapt : halve h on corrector failure and double after 4 successes,
        keeping h in [h_min, h_max]; with adapt=False failures still halve
        the step but it recovers to the nominal h.
    sign : continue along +direction or -direction from the tetrahedron
    """
    if root_index not in (0, 1, 2):
        raise ValueError("root_index must be 0, 1 or 2")
    tds = tangent_directions(ms)
    td = tds[root_index]

    branch = Branch(root=td.root, root_index=root_index)
    s_prev = _TETRA.copy()
    tangent = sign * td.direction
    arclength = 0.0
    h_nominal = h
    h_cur = h
    successes = 0
    attempts = 0

    while len(branch.points) < steps and attempts < 8 * steps:
        attempts += 1
        pred = s_prev + h_cur * tangent
        x, ok, res = _correct(ms, law, pred, tangent, tol=newton_tol, max_iter=max_iter)
        if not ok:
            h_cur *= 0.5
            successes = 0
            if h_cur < h_min:
                branch.truncated = (
                    f"corrector failed at arclength {arclength:.4g} (residual {res:.2e})"
                )
                break
            continue
        step_len = float(np.linalg.norm(x - s_prev))
        arclength += step_len
        branch.points.append(_make_point(ms, x, arclength, law))
        tangent_new = (x - s_prev) / step_len
        # keep orientation
        if tangent_new @ tangent > 0:
            tangent = tangent_new
        s_prev = x
        successes += 1
        if adapt and successes >= 4 and h_cur < h_max:
            h_cur = min(2.0 * h_cur, h_max)
            successes = 0
        elif not adapt and h_cur < h_nominal:
            h_cur = min(2.0 * h_cur, h_nominal)
    if len(branch.points) < steps and branch.truncated is None:
        branch.truncated = f"attempt budget exhausted at arclength {arclength:.4g}"
    return branch


def z2_cone_tangent(m1: float, m2: float, m3: float) -> np.ndarray:
    """Unit kernel direction, in the (psi, phi_e) plane, of the linearized
    balance constraint at the tetrahedron for masses (m1, m2, m3, m2)."""
    s13 = m1 + m3
    M = s13 + 2.0 * m2
    T = np.sqrt(M * m1 * m3 / (2.0 * m2)) / s13
    c_psi = -2.0 * (m1 - m3) / s13
    c_phi = (3.0 * m2 * (m1**2 + m3**2) - 2.0 * m1 * m3 * (m1 + m2 + m3)) / (
        2.0 * m2 * s13**2 * T
    )
    v = np.array([c_phi, -c_psi])
    return v / np.linalg.norm(v)


def z2_branch_oracle(
    m1: float,
    m2: float,
    m3: float,
    family: str,
    t: float,
    f: float | None = None,
    branch: float = 1.0,
    law: PotentialLaw = NEWTON,
) -> SquaredDistances:
    """Closed-form/semi-closed-form degenerate balanced shapes for masses
    (m1, m2, m3, m2).

    family "a_eq_b_eq_d": the shape (t, t, t, t, t, f); balanced and
    degenerate for every f > 0 (default f = 2 - t, a transversal slice of
    the two-parameter family that passes through the tetrahedron at t = 1
    and stays positive for t < 2).

    family "cone": the curve where the isolated force eigenvalue meets an
    eigenvalue of the symmetric block.  Parametrized by the signed offset t
    of (psi, phi_e) along the analytic tangent; branch = +-1 picks the
    nappe of the cone.  Solved by a 2-unknown Newton iteration (overall
    scale and the transverse offset) at fixed degeneracy, which holds
    exactly by construction.
    """
    if family == "a_eq_b_eq_d":
        if f is None:
            f = 2.0 - t
        if t <= 0 or f <= 0:
            raise ValueError("family parameter leaves the positive cone")
        return SquaredDistances(t, t, t, t, t, f)
    if family != "cone":
        raise ValueError(f"unknown family {family!r}")

    M = m1 + 2.0 * m2 + m3
    v0 = z2_cone_tangent(m1, m2, m3)
    v_perp = np.array([-v0[1], v0[0]])

    def shape_of(alpha: float, w: float) -> SquaredDistances:
        psi, phi_e = t * v0 + w * v_perp
        theta = branch * np.hypot(psi, phi_e)
        coords = SymmetricCoords(alpha=alpha, theta=theta, psi=psi, phi_e=phi_e)
        pa, pb, pd, pf = symmetric_phi_values(m1, m2, m3, coords)
        if max(pa, pb, pd, pf) >= 0:
            raise ValueError("left the image of the force map")
        a, b, d, f_ = law.phi_inverse(np.array([pa, pb, pd, pf]))
        return SquaredDistances(a, b, b, d, d, f_)

    def residual(x):
        sd = shape_of(x[0], x[1])
        bal = symmetric_balance_residual(m1, m2, m3, sd.a, sd.b1, sd.d1, sd.f, law)
        bal /= residual_scale((m1, m2, m3, m2), sd, law)
        return np.array([bal, np.sum(sd.vec()) - SUM_NORMALIZATION])

    x0 = np.array([-M / 2.0, 0.0])
    x, ok, res = _newton(residual, x0, tol=1e-13, max_iter=50)
    if not ok and res > 1e-10:
        raise RuntimeError(f"cone-family Newton failed (residual {res:.2e})")
    return shape_of(x[0], x[1])


def z3_branch_oracle(
    m1: float, m: float, t: float, f: float | None = None
) -> SquaredDistances:
    """The three-equal-mass family (masses m1, m, m, m): shapes (t, t, t, u,
    u, u) with body 1 over the centroid of an equilateral triangle.

    Balanced for every u > 0; the force matrix always carries a double
    eigenvalue m1*phi(t) + 3*m*phi(u).  Default u = 2 - t normalizes the
    component sum to 6 with the tetrahedron at t = 1.
    """
    u = (2.0 - t) if f is None else f
    if t <= 0 or u <= 0:
        raise ValueError("family parameter leaves the positive cone")
    return SquaredDistances(t, t, t, u, u, u)


def z3_basis(m1: float, m: float) -> np.ndarray:
    """Mass-weighted orthonormal basis adapted to the (m1, m, m, m) family,
    rows v1, v2, v3."""
    v1 = np.sqrt(m1 * m / (3.0 * (m1 + 3.0 * m))) * np.array([-3.0, 1.0, 1.0, 1.0])
    v2 = np.sqrt(m / 6.0) * np.array([0.0, -1.0, 2.0, -1.0])
    v3 = np.sqrt(m / 2.0) * np.array([0.0, 1.0, 0.0, -1.0])
    return np.vstack([v1, v2, v3])
