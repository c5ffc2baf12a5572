"""Relative equilibria: construction, verification, and full Newtonian flow.

A balanced shape admits a motion x(t) = exp(Omega t) x0 with constant
mutual distances when Omega^2 X = 2 X A.  In a joint eigenbasis of the
(commuting) inertia and force matrices this pairs each configuration
direction either with a fresh ambient dimension (one rotation plane per
frequency) or with another configuration direction carrying the same force
eigenvalue (which is what lowers the ambient dimension to 4).

The fixed-step RK4 integrator exists as an independent check: it knows
nothing about the construction and simply integrates pairwise gravity, so
constancy of the mutual distances along the numerical flow certifies the
equilibrium.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .balance import is_balanced
from .forces import NEWTON, PotentialLaw, wc_matrix
from .massspace import MassSystem, build_basis
from .shape import PointConfiguration, SquaredDistances, inertia_matrix

__all__ = [
    "ConfigMatrix",
    "RelativeEquilibrium",
    "AngularMomentum",
    "DriftReport",
    "points_from_distances",
    "config_matrix",
    "x_to_points",
    "simultaneous_eigen",
    "build_relative_equilibrium",
    "integrate_newton",
    "angular_momentum",
    "re_angular_momentum",
    "nu_from_momentum",
    "theta_family",
    "rho_bivector",
    "rhombus_embedding",
]


@dataclass(frozen=True)
class ConfigMatrix:
    """Configuration matrix: ambient rows, u-basis columns."""

    X: np.ndarray

    def gram(self) -> np.ndarray:
        return self.X.T @ self.X

    def ambient_inertia(self) -> np.ndarray:
        return self.X @ self.X.T


@dataclass(frozen=True)
class RelativeEquilibrium:
    """A verified relative equilibrium motion exp(Omega t) X0.

    X0 has shape (dim, 3) with columns over the u-basis; Omega is (dim, dim)
    antisymmetric.  freqs lists the rotation rate of each u-basis column
    (columns in an internal pair share one rate); groups records the pairing
    as tuples of column indices.  lam are the per-column force eigenvalues
    -2 eig(A) and sigmas the matching inertia eigenvalues, both in the joint
    eigencolumn order of basis_change.
    """

    X0: np.ndarray
    Omega: np.ndarray
    freqs: tuple[float, ...]
    dim: int
    groups: tuple[tuple[int, ...], ...]
    lam: tuple[float, ...]
    sigmas: tuple[float, ...]
    basis_change: np.ndarray
    residual: float


@dataclass(frozen=True)
class AngularMomentum:
    """Angular momentum matrix and its frequency spectrum {±i nu_k}."""

    C: np.ndarray
    nu: tuple[float, ...]
    cross_residual: float = 0.0


@dataclass
class DriftReport:
    """Diagnostics of one fixed-step integration."""

    distance_drift: float
    energy_drift: float
    momentum_drift: float
    steps: int
    dt: float
    aborted: bool = False
    abort_reason: str | None = None
    times: np.ndarray = field(default_factory=lambda: np.empty(0))
    distances: np.ndarray = field(default_factory=lambda: np.empty((0, 6)))
    final_positions: np.ndarray | None = None
    final_velocities: np.ndarray | None = None


def points_from_distances(s: SquaredDistances, rank_tol: float = 1e-9) -> np.ndarray:
    """Embed a squared-distance set as 4 points in R^3 (body 1 at the origin).

    Raises ValueError when the data is not embeddable (the one-point Gram
    matrix has an eigenvalue below -rank_tol * scale).
    """
    t = s.pair_table()
    g = np.empty((3, 3))
    for i in range(1, 4):
        for j in range(1, 4):
            sij = 0.0 if i == j else t[(min(i, j), max(i, j))]
            g[i - 1, j - 1] = 0.5 * (t[(0, i)] + t[(0, j)] - sij)
    w, v = np.linalg.eigh(g)
    scale = max(abs(w[-1]), 1e-300)
    if w[0] < -rank_tol * scale:
        raise ValueError(f"distance data not embeddable in R^3 (Gram eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    coords = v @ np.diag(np.sqrt(w))
    return np.vstack([np.zeros(3), coords])


def config_matrix(ms: MassSystem, points, dim: int | None = None) -> ConfigMatrix:
    """Configuration matrix X of 4 points: column k is sum_i u_k[i] p_i.

    The center of mass drops out automatically (the u_k have zero component
    sum).  If dim exceeds the ambient dimension of the points, rows of
    zeros are appended.
    """
    if isinstance(points, PointConfiguration):
        points = points.points
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    ms.require_four()
    if pts.shape[0] != 4:
        raise ValueError("expected 4 points")
    basis = build_basis(ms)
    X = pts.T @ basis.matrix().T  # (ambient, 3)
    if dim is not None:
        if dim < X.shape[0]:
            extra = X[dim:, :]
            if np.max(np.abs(extra)) > 1e-12 * max(1.0, np.max(np.abs(X))):
                raise ValueError("points do not fit in the requested dimension")
            X = X[:dim, :]
        elif dim > X.shape[0]:
            X = np.vstack([X, np.zeros((dim - X.shape[0], 3))])
    return ConfigMatrix(X)


def x_to_points(ms: MassSystem, X: np.ndarray) -> np.ndarray:
    """Body positions (about the center of mass) from a configuration matrix."""
    basis = build_basis(ms)
    u = basis.matrix()  # (3, 4)
    minv = 1.0 / ms.as_array()
    return (u * minv).T @ X.T  # (4, ambient)


def simultaneous_eigen(
    A: np.ndarray, B: np.ndarray, cluster_rtol: float = 1e-7
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Joint eigenbasis of two commuting symmetric matrices.

    Eigenvectors of A are rotated inside near-degenerate clusters (relative
    width cluster_rtol) to diagonalize B there.  Returns (Q, eig_a, eig_b).
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    wa, q = np.linalg.eigh(A)
    scale = max(np.max(np.abs(wa)), 1e-300)
    i = 0
    n = len(wa)
    while i < n:
        j = i + 1
        while j < n and abs(wa[j] - wa[j - 1]) <= cluster_rtol * scale:
            j += 1
        if j - i > 1:
            block = q[:, i:j]
            _, r = np.linalg.eigh(block.T @ B @ block)
            q[:, i:j] = block @ r
        i = j
    eig_a = np.diag(q.T @ A @ q).copy()
    eig_b = np.diag(q.T @ B @ q).copy()
    off = q.T @ B @ q - np.diag(eig_b)
    if np.max(np.abs(off)) > 1e-6 * max(np.max(np.abs(eig_b)), 1e-300):
        raise ValueError("matrices do not commute to working precision")
    return q, eig_a, eig_b


def _parse_pairing(pairing, lam: np.ndarray, rtol: float) -> tuple[tuple[int, ...], ...]:
    """Normalize a pairing request into groups of column indices."""
    scale = np.max(np.abs(lam))
    if pairing == "external":
        return ((0,), (1,), (2,))
    if pairing == "auto":
        gaps = [
            (abs(lam[i] - lam[j]), i, j) for i in range(3) for j in range(i + 1, 3)
        ]
        g, i, j = min(gaps)
        if g <= rtol * scale:
            k = ({0, 1, 2} - {i, j}).pop()
            return ((i, j), (k,))
        return ((0,), (1,), (2,))
    groups = tuple(tuple(g) for g in pairing)
    seen = sorted(i for g in groups for i in g)
    if seen != [0, 1, 2]:
        raise ValueError("pairing must partition columns {0, 1, 2}")
    return groups


def build_relative_equilibrium(
    ms: MassSystem,
    s: SquaredDistances,
    pairing="auto",
    dim: int = 6,
    law: PotentialLaw = NEWTON,
    balance_tol: float = 1e-8,
    pairing_rtol: float = 1e-7,
) -> RelativeEquilibrium:
    """Assemble a relative equilibrium of a balanced shape in R^dim.

    pairing: "auto" (pair the closest force eigenvalues when they agree to
    pairing_rtol), "external" (every column gets its own plane; needs
    dim >= 2 * rank), or explicit groups like ((0, 1), (2,)) over joint
    eigencolumns.  Internal pairs require their force eigenvalues to agree
    to pairing_rtol.
    """
    ok, resid = is_balanced(ms, s, law, tol=balance_tol)
    if not ok:
        raise ValueError(f"shape is not balanced (residual {resid:.2e} > {balance_tol})")
    pts = points_from_distances(s)
    X3 = config_matrix(ms, pts).X
    A = wc_matrix(ms, s, law).matrix()
    B3 = X3.T @ X3
    binternal = inertia_matrix(ms, s).matrix()
    if np.max(np.abs(B3 - binternal)) > 1e-8 * max(1.0, np.max(np.abs(binternal))):
        raise RuntimeError("embedding inconsistent with inertia matrix")

    q, eig_a, sig = simultaneous_eigen(A, B3, cluster_rtol=pairing_rtol)
    lam = -2.0 * eig_a
    if np.any(lam <= 0.0):
        raise ValueError("force matrix must be negative definite")
    groups = _parse_pairing(pairing, lam, pairing_rtol)

    scale = np.max(np.abs(lam))
    rank_tol = 1e-9 * max(np.max(sig), 1e-300)
    Xt = X3 @ q  # columns along joint eigendirections

    # ambient frame: normalized nonzero columns first
    frame = {}
    for k in range(3):
        if sig[k] > rank_tol:
            frame[k] = Xt[:, k] / np.sqrt(sig[k])
    d = len(frame)
    singles = [g[0] for g in groups if len(g) == 1 and g[0] in frame]
    needed = d + len(singles)
    if dim < needed:
        raise ValueError(f"dimension too small: need at least {needed}, got {dim}")

    def pad(v):
        out = np.zeros(dim)
        out[: len(v)] = v
        return out

    used = [pad(v) for v in frame.values()]
    # fresh orthonormal directions for the external partners
    basis_pool = []
    candidates = np.eye(dim)
    for c in candidates.T:
        v = c.copy()
        for u in used + basis_pool:
            v -= (v @ u) * u
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            basis_pool.append(v / nv)

    omega_cols = np.zeros(3)
    Omega = np.zeros((dim, dim))
    fresh_iter = iter(basis_pool)
    for g in groups:
        if len(g) == 2:
            i, j = g
            if abs(lam[i] - lam[j]) > pairing_rtol * scale:
                raise ValueError(
                    f"eigenvalue pairing unavailable: lambda gap "
                    f"{abs(lam[i] - lam[j]):.2e} exceeds {pairing_rtol:.0e} * {scale:.2e}"
                )
            w = np.sqrt(0.5 * (lam[i] + lam[j]))
            omega_cols[i] = omega_cols[j] = w
            if i in frame and j in frame:
                pi, pj = pad(frame[i]), pad(frame[j])
                Omega += w * (np.outer(pj, pi) - np.outer(pi, pj))
        else:
            (k,) = g
            w = np.sqrt(lam[k])
            omega_cols[k] = w
            if k in frame:
                pk = pad(frame[k])
                try:
                    v = next(fresh_iter)
                except StopIteration:
                    raise ValueError("dimension too small for external pairing") from None
                Omega += w * (np.outer(v, pk) - np.outer(pk, v))

    X0 = np.vstack([X3, np.zeros((dim - X3.shape[0], 3))]) @ q  # eigencolumn order
    X_out = X0 @ q.T  # original u-basis columns
    residual = float(
        np.max(np.abs(Omega @ Omega @ X_out - 2.0 * X_out @ A))
        / max(1.0, np.max(np.abs(X_out)) * np.max(np.abs(A)))
    )
    if residual > 1e-9:
        raise RuntimeError(f"equilibrium verification failed (residual {residual:.2e})")
    return RelativeEquilibrium(
        X0=X_out,
        Omega=Omega,
        freqs=tuple(float(w) for w in omega_cols),
        dim=dim,
        groups=groups,
        lam=tuple(float(v) for v in lam),
        sigmas=tuple(float(v) for v in sig),
        basis_change=q,
        residual=residual,
    )


def _accelerations(r: np.ndarray, masses: np.ndarray, law: PotentialLaw) -> np.ndarray:
    diff = r[:, None, :] - r[None, :, :]
    s = np.sum(diff * diff, axis=2)
    np.fill_diagonal(s, np.inf)
    w = law.phi(s) * masses[None, :]
    return 2.0 * np.einsum("ij,ijk->ik", w, diff)


def _pair_distances2(r: np.ndarray) -> np.ndarray:
    """Squared distances in the fixed label order (a, b1, b2, d1, d2, f)."""
    diff = r[_PAIR_I] - r[_PAIR_J]
    return np.einsum("ij,ij->i", diff, diff)


# pair indices in the fixed label order (a, b1, b2, d1, d2, f)
_PAIR_I = np.array([0, 0, 0, 2, 2, 1])
_PAIR_J = np.array([2, 3, 1, 3, 1, 3])


def _energy(r, v, masses, law):
    ke = 0.5 * float(np.sum(masses * np.sum(v * v, axis=1)))
    diff = r[_PAIR_I] - r[_PAIR_J]
    s = np.einsum("ij,ij->i", diff, diff)
    pot = float(np.sum(masses[_PAIR_I] * masses[_PAIR_J] * law.pair_potential(s)))
    return ke - pot


def _momentum_matrix(r, v, masses):
    rw = masses[:, None] * r
    return v.T @ rw - rw.T @ v


def integrate_newton(
    ms: MassSystem,
    X0: np.ndarray,
    V0: np.ndarray,
    T: float,
    dt: float,
    law: PotentialLaw = NEWTON,
    record_every: int | None = None,
    collision_factor: float = 1e-6,
) -> DriftReport:
    """Fixed-step RK4 integration of the full pairwise attraction.

    X0, V0 are configuration matrices (ambient rows, u-basis columns); the
    integration runs on body positions.  Reports the worst relative drift
    of the six squared distances, the relative energy drift, and the
    relative angular-momentum drift (Frobenius).  Aborts when any squared
    distance falls below collision_factor times its initial minimum.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    masses = ms.as_array()
    r = x_to_points(ms, X0)
    v = x_to_points(ms, V0)
    n_steps = int(round(T / dt))
    if record_every is None:
        record_every = max(1, n_steps // 2000)

    s0 = _pair_distances2(r)
    e0 = _energy(r, v, masses, law)
    c0 = _momentum_matrix(r, v, masses)
    c_scale = max(np.linalg.norm(c0), 1e-300)
    s_floor = collision_factor * np.min(s0)

    dist_drift = 0.0
    energy_drift = 0.0
    mom_drift = 0.0
    times = [0.0]
    dists = [s0]
    aborted = False
    reason = None

    def rhs(r, v):
        return v, _accelerations(r, masses, law)

    t = 0.0
    for step in range(1, n_steps + 1):
        k1r, k1v = rhs(r, v)
        k2r, k2v = rhs(r + 0.5 * dt * k1r, v + 0.5 * dt * k1v)
        k3r, k3v = rhs(r + 0.5 * dt * k2r, v + 0.5 * dt * k2v)
        k4r, k4v = rhs(r + dt * k3r, v + dt * k3v)
        r = r + (dt / 6.0) * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
        v = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        t += dt

        s = _pair_distances2(r)
        if np.min(s) < s_floor:
            aborted = True
            reason = f"collision approach at t = {t:.6g} (min s = {np.min(s):.3e})"
            break
        dist_drift = max(dist_drift, float(np.max(np.abs(s - s0) / s0)))
        energy_drift = max(
            energy_drift, abs(_energy(r, v, masses, law) - e0) / max(abs(e0), 1e-300)
        )
        mom_drift = max(
            mom_drift,
            float(np.linalg.norm(_momentum_matrix(r, v, masses) - c0)) / c_scale,
        )
        if step % record_every == 0:
            times.append(t)
            dists.append(s)

    return DriftReport(
        distance_drift=dist_drift,
        energy_drift=energy_drift,
        momentum_drift=mom_drift,
        steps=n_steps,
        dt=dt,
        aborted=aborted,
        abort_reason=reason,
        times=np.array(times),
        distances=np.array(dists),
        final_positions=r,
        final_velocities=v,
    )


def nu_from_momentum(C: np.ndarray) -> tuple[float, ...]:
    """Rotation frequencies nu_k >= 0 of a real antisymmetric matrix.

    Computed from the Hermitian matrix i*C, whose spectrum is {+-nu_k}:
    full precision even at nu = 0, where going through C^2 would lose half
    the digits.  The C^2 route is kept in the tests as a cross-check.
    """
    w = np.linalg.eigvalsh(1j * C)
    nus = np.sort(w)[::-1]
    p = C.shape[0] // 2
    return tuple(float(max(x, 0.0)) for x in nus[:p])


def angular_momentum(X: np.ndarray, Y: np.ndarray) -> AngularMomentum:
    """Angular momentum of the phase point (X, Y): C = -X Y^T + Y X^T."""
    C = -X @ Y.T + Y @ X.T
    return AngularMomentum(C=C, nu=nu_from_momentum(C))


def re_angular_momentum(re: RelativeEquilibrium) -> AngularMomentum:
    """Angular momentum of a relative equilibrium, cross-checked between the
    phase-point formula and S Omega + Omega S."""
    Y = re.Omega @ re.X0
    c1 = -re.X0 @ Y.T + Y @ re.X0.T
    S = re.X0 @ re.X0.T
    c2 = S @ re.Omega + re.Omega @ S
    scale = max(np.linalg.norm(c2), 1e-300)
    resid = float(np.linalg.norm(c1 - c2) / scale)
    if resid > 1e-10:
        raise RuntimeError(f"angular momentum formulas disagree ({resid:.2e})")
    return AngularMomentum(C=c2, nu=nu_from_momentum(c2), cross_residual=resid)


def rho_bivector(X: np.ndarray, Omega: np.ndarray) -> np.ndarray:
    """Pull-back of the rotation bivector to the u-basis: -X^T Omega X.

    Vanishes when every rotation plane mixes the configuration span with
    its orthogonal complement; nonzero (rank 2) when a plane lies inside
    the configuration span.  Always commutes with the force matrix of the
    underlying balanced shape.
    """
    return -X.T @ Omega @ X


def rhombus_embedding(
    m1: float, m2: float, a: float, b: float, f: float
) -> PointConfiguration:
    """Rhombus configuration (masses m1, m2, m1, m2) with r13^2 = a,
    r24^2 = f and the four equal sides b; the mass-weighted center sits at
    the origin."""
    g2 = b - (a + f) / 4.0  # (gamma1+gamma2)^2
    if g2 < -1e-12 * max(a, b, f):
        raise ValueError("rhombus data not embeddable (4b < a + f)")
    g = np.sqrt(max(g2, 0.0))
    al = 0.5 * np.sqrt(a)
    be = 0.5 * np.sqrt(f)
    g1 = m2 * g / (m1 + m2)
    gg2 = m1 * g / (m1 + m2)
    pts = np.array(
        [
            [al, 0.0, g1],
            [0.0, be, -gg2],
            [-al, 0.0, g1],
            [0.0, -be, -gg2],
        ]
    )
    return PointConfiguration(pts, MassSystem((m1, m2, m1, m2)))


def theta_family(
    m1: float, m2: float, f: float, theta: float, law: PotentialLaw = NEWTON
):
    """Angular-momentum spectrum of the one-parameter rotation family that
    carries the a = b = 1 rhombus along the boundary edge of its frequency
    polytope.

    Masses are rescaled so m1 + m2 = 1, which normalizes the in-plane
    rotation rate to 1.  Returns (nu, sigmas, omega3): nu the three
    frequencies sorted descending, sigmas the inertia eigenvalues
    (sigma1, sigma2, sigma3), omega3 the rate of the third plane.

    At theta = pi/2 the spectrum is (sigma1, sigma2, sigma3 * omega3); at
    theta = 0 it degenerates to (sigma1 + sigma2, 0, sigma3 * omega3).  The
    family consists of genuine relative equilibria exactly at f = 1 (the
    regular tetrahedron), where omega3 = 1 as well; for other f only the
    momentum geometry is meaningful.
    """
    scale = m1 + m2
    m1, m2 = m1 / scale, m2 / scale
    if not 0.0 < f < 3.0:
        raise ValueError("need 0 < f < 3 for an embeddable unit-sided rhombus")
    cfg = rhombus_embedding(m1, m2, 1.0, 1.0, f)
    ms = cfg.masses
    X3 = config_matrix(ms, cfg).X

    # interleaved embedding (q1, q2, q3) -> (q1, 0, q2, 0, q3, 0)
    X6 = np.zeros((6, 3))
    X6[0] = X3[0]
    X6[2] = X3[1]
    X6[4] = X3[2]

    omega = 1.0
    omega3 = np.sqrt(m1 + m2 * f ** -1.5)
    ct, st = np.cos(theta), np.sin(theta)
    Om = np.zeros((6, 6))
    Om[0, 2] = -omega * ct
    Om[0, 3] = -omega * st
    Om[1, 2] = omega * st
    Om[1, 3] = -omega * ct
    Om[2, 0] = omega * ct
    Om[2, 1] = -omega * st
    Om[3, 0] = omega * st
    Om[3, 1] = omega * ct
    Om[4, 5] = -omega3
    Om[5, 4] = omega3

    S0 = X6 @ X6.T
    C = S0 @ Om + Om @ S0
    nu = nu_from_momentum(C)
    sigmas = (m1 / 2.0, m2 * f / 2.0, m1 * m2 * (3.0 - f) / (2.0 * (m1 + m2)))
    return nu, sigmas, float(omega3)
