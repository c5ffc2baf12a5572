"""Frequency polytopes of central configurations.

Scaling a central configuration so its rotation frequency is 1, every
complex structure J on the ambient R^{2p} directs a periodic relative
equilibrium whose angular-momentum frequencies are the halved spectrum of
J^{-1} S0 J + S0.  Over all J the ordered frequency tuples fill a Horn
polytope: the spectra of sums a + b where a and b carry the interlacing
halves of the inertia spectrum.  Vertices of specific subpolytopes are
where bifurcations to quasi-periodic families can happen; they are realized
here by explicit structures and checked against the hardcoded Horn
inequality lists for p = 2 and p = 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ComplexStructure",
    "FrequencyPoint",
    "HornSpec",
    "standard_structure",
    "pairing_structure",
    "haar_orthogonal",
    "random_structure",
    "frequency_map",
    "sample_polytope",
    "horn_membership",
    "bifurcation_vertices",
    "VertexReport",
]


@dataclass(frozen=True)
class ComplexStructure:
    """Orthogonal J with J^2 = -Id."""

    J: np.ndarray

    def __post_init__(self):
        j = np.asarray(self.J, dtype=float)
        n = j.shape[0]
        if j.shape != (n, n) or n % 2:
            raise ValueError("J must be square of even dimension")
        if np.max(np.abs(j.T @ j - np.eye(n))) > 1e-10:
            raise ValueError("J is not orthogonal")
        if np.max(np.abs(j @ j + np.eye(n))) > 1e-10:
            raise ValueError("J^2 is not -Id")
        object.__setattr__(self, "J", j)

    @property
    def p(self) -> int:
        return self.J.shape[0] // 2


@dataclass(frozen=True)
class FrequencyPoint:
    """Ordered nonnegative frequencies nu_1 >= ... >= nu_p."""

    nu: tuple[float, ...]

    def __post_init__(self):
        v = tuple(float(x) for x in self.nu)
        if any(v[i] < v[i + 1] - 1e-12 for i in range(len(v) - 1)):
            raise ValueError("frequencies must be sorted descending")
        object.__setattr__(self, "nu", v)

    def as_array(self) -> np.ndarray:
        return np.array(self.nu)


@dataclass(frozen=True)
class HornSpec:
    """A partition of the inertia spectrum into two p-tuples (descending)."""

    spectrum_a: tuple[float, ...]
    spectrum_b: tuple[float, ...]

    def __post_init__(self):
        a = tuple(sorted((float(x) for x in self.spectrum_a), reverse=True))
        b = tuple(sorted((float(x) for x in self.spectrum_b), reverse=True))
        if len(a) != len(b):
            raise ValueError("both parts must have p entries")
        object.__setattr__(self, "spectrum_a", a)
        object.__setattr__(self, "spectrum_b", b)

    @property
    def p(self) -> int:
        return len(self.spectrum_a)

    @staticmethod
    def canonical(sigma) -> "HornSpec":
        """Interlacing partition of a descending 2p-spectrum:
        odd-position entries vs even-position entries."""
        s = sorted((float(x) for x in sigma), reverse=True)
        return HornSpec(tuple(s[0::2]), tuple(s[1::2]))


def standard_structure(p: int) -> ComplexStructure:
    """Block-diagonal J pairing coordinates (2k, 2k+1)."""
    j = np.zeros((2 * p, 2 * p))
    for k in range(p):
        j[2 * k, 2 * k + 1] = -1.0
        j[2 * k + 1, 2 * k] = 1.0
    return ComplexStructure(j)


def pairing_structure(dim: int, pairs) -> ComplexStructure:
    """J whose complex lines are the given coordinate pairs (i -> j)."""
    j = np.zeros((dim, dim))
    for i, k in pairs:
        j[k, i] = 1.0
        j[i, k] = -1.0
    return ComplexStructure(j)


def haar_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed orthogonal matrix via QR with sign-fixed R diagonal."""
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * np.sign(np.diag(r))


def random_structure(rng: np.random.Generator, p: int) -> ComplexStructure:
    q = haar_orthogonal(rng, 2 * p)
    j0 = standard_structure(p).J
    return ComplexStructure(q @ j0 @ q.T)


def frequency_map(S0: np.ndarray, J: ComplexStructure) -> FrequencyPoint:
    """Ordered halved spectrum of J^{-1} S0 J + S0.

    Cross-checked against the rotation frequencies of the antisymmetric
    S0 J + J S0; the two differ by more than 1e-10 only on invalid input.
    """
    S0 = np.asarray(S0, dtype=float)
    j = J.J
    h = j.T @ S0 @ j + S0
    w = np.sort(np.linalg.eigvalsh(h))[::-1]
    nu = w[0::2]
    c = S0 @ j + j @ S0
    w2 = np.sort(np.linalg.eigvalsh(1j * c).real)[::-1][: J.p]
    if np.max(np.abs(nu - w2)) > 1e-10 * max(1.0, abs(w[0])):
        raise RuntimeError("hermitian and antisymmetric spectra disagree")
    return FrequencyPoint(tuple(max(float(x), 0.0) for x in nu))


def sample_polytope(S0: np.ndarray, n: int, seed: int = 0) -> list[FrequencyPoint]:
    """n frequency points at independent Haar-random complex structures."""
    if n < 1:
        raise ValueError("need n >= 1 samples")
    S0 = np.asarray(S0, dtype=float)
    p = S0.shape[0] // 2
    rng = np.random.default_rng(seed)
    j0 = standard_structure(p).J
    out = []
    for _ in range(n):
        q = haar_orthogonal(rng, 2 * p)
        out.append(frequency_map(S0, ComplexStructure(q @ j0 @ q.T)))
    return out


# Horn inequality index triples (I, J, K) for c_K <= a_I + b_J, p = 3.
# 1-based positions into descending spectra.
_HORN3 = [
    ((1,), (1,), (1,)),
    ((1,), (2,), (2,)),
    ((2,), (1,), (2,)),
    ((1,), (3,), (3,)),
    ((3,), (1,), (3,)),
    ((2,), (2,), (3,)),
    ((1, 2), (1, 2), (1, 2)),
    ((1, 2), (1, 3), (1, 3)),
    ((1, 3), (1, 2), (1, 3)),
    ((1, 2), (2, 3), (2, 3)),
    ((2, 3), (1, 2), (2, 3)),
    ((1, 3), (1, 3), (2, 3)),
]

_HORN2 = [
    ((1,), (1,), (1,)),
    ((1,), (2,), (2,)),
    ((2,), (1,), (2,)),
]


def horn_membership(
    spec: HornSpec, point: FrequencyPoint, tol: float = 1e-9
) -> tuple[bool, list[str]]:
    """Whether the ordered tuple lies in the Horn polytope of spec.

    Checks the trace equality plus the classical inequality list (Weyl for
    p = 2; the full 12-item list for p = 3).  Returns (member, violations).
    """
    p = spec.p
    if p not in (2, 3):
        raise ValueError("membership test implemented for p = 2 and p = 3 only")
    if len(point.nu) != p:
        raise ValueError("dimension mismatch")
    a = np.array(spec.spectrum_a)
    b = np.array(spec.spectrum_b)
    c = point.as_array()
    scale = max(np.max(np.abs(a)) + np.max(np.abs(b)), 1e-300)
    violations = []
    tr = float(c.sum() - a.sum() - b.sum())
    if abs(tr) > tol * scale:
        violations.append(f"trace: sum(nu) - sum(a) - sum(b) = {tr:.3e}")
    rules = _HORN2 if p == 2 else _HORN3
    for I, Jx, K in rules:
        lhs = sum(c[k - 1] for k in K)
        rhs = sum(a[i - 1] for i in I) + sum(b[j - 1] for j in Jx)
        if lhs > rhs + tol * scale:
            violations.append(
                f"c{K} <= a{I} + b{Jx}: {lhs:.6g} > {rhs:.6g}"
            )
    return not violations, violations


@dataclass(frozen=True)
class VertexReport:
    """A labeled polytope vertex realized by an explicit complex structure."""

    label: str
    nu: FrequencyPoint
    structure: ComplexStructure
    residual: float


def bifurcation_vertices(S0: np.ndarray, tol: float = 1e-10):
    """The four marked vertices of the frequency polytope of a spatial
    central configuration, each realized by an explicit structure.

    S0 must be 6x6 symmetric PSD of rank <= 3 (three zero directions).  In
    its eigenbasis with inertia values s1 >= s2 >= s3 paired against the
    three zero directions v1, v2, v3:

        A: each rho_k with v_k            -> (s1, s2, s3)
        B: {rho1, rho2}, {rho3, v1}       -> sorted(s1 + s2, s3, 0)
        C: {rho2, rho3}, {rho1, v1}       -> sorted(s2 + s3, s1, 0)
        D: {rho1, rho3}, {rho2, v1}       -> sorted(s1 + s3, s2, 0)

    Returns (vertices dict, case) where case is 1 when s1 > s2 + s3 and 2
    when s2 + s3 > s1.  A planar spectrum (s3 = 0) gives the reduced output
    {A, B} with case None: C and D collapse onto A-type points there.
    """
    S0 = np.asarray(S0, dtype=float)
    if S0.shape != (6, 6):
        raise ValueError("expected a 6x6 ambient inertia matrix")
    w, q = np.linalg.eigh(S0)
    order = np.argsort(w)[::-1]
    w, q = w[order], q[:, order]
    s1, s2, s3 = w[:3]
    if s2 <= 1e-12 * max(s1, 1e-300):
        raise ValueError("inertia rank below 2: no vertex structure to report")
    if np.max(np.abs(w[3:])) > 1e-9 * max(s1, 1e-300):
        raise ValueError("expected three (near-)zero inertia directions")

    # index convention in the eigenbasis: rho_k = column k, v_k = column 3+k
    planar = s3 <= 1e-12 * max(s1, 1e-300)
    if planar:
        # rank 2: only the extrinsic vertex and the single paired vertex
        # remain distinct
        pairings = {
            "A": [(0, 3), (1, 4), (2, 5)],
            "B": [(0, 1), (2, 3), (4, 5)],
        }
        predicted = {"A": (s1, s2, 0.0), "B": (s1 + s2, 0.0, 0.0)}
    else:
        pairings = {
            "A": [(0, 3), (1, 4), (2, 5)],
            "B": [(0, 1), (2, 3), (4, 5)],
            "C": [(1, 2), (0, 3), (4, 5)],
            "D": [(0, 2), (1, 3), (4, 5)],
        }
        predicted = {
            "A": (s1, s2, s3),
            "B": (s1 + s2, s3, 0.0),
            "C": (s2 + s3, s1, 0.0),
            "D": (s1 + s3, s2, 0.0),
        }
    out = {}
    for label, pairs in pairings.items():
        j_eig = pairing_structure(6, pairs).J
        J = ComplexStructure(q @ j_eig @ q.T)
        nu = frequency_map(S0, J)
        pred = np.sort(np.array(predicted[label]))[::-1]
        residual = float(np.max(np.abs(nu.as_array() - pred)))
        if residual > tol * max(s1, 1.0):
            raise RuntimeError(f"vertex {label} verification failed ({residual:.2e})")
        out[label] = VertexReport(label=label, nu=nu, structure=J, residual=residual)
    case = None if planar else (1 if s1 > s2 + s3 else 2)
    return out, case
