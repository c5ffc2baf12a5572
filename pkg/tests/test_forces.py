import numpy as np
import pytest

from balcon.forces import (
    NEWTON,
    PotentialLaw,
    SymmetricCoords,
    phi_to_entries_matrix,
    symmetric_coords,
    symmetric_coords_to_wc,
    symmetric_degeneracy_residuals,
    symmetric_phi_values,
    wc_matrix,
    wc_symmetric_block,
    wc_to_distances,
)
from balcon.massspace import MassSystem
from balcon.shape import SquaredDistances

TETRA = SquaredDistances(1, 1, 1, 1, 1, 1)


def rand_masses(rng, lo=0.1, hi=10.0):
    return MassSystem(tuple(np.exp(rng.uniform(np.log(lo), np.log(hi), 4))))


def rand_shape(rng, spread=0.5):
    return SquaredDistances.from_vec(np.exp(rng.uniform(-spread, spread, 6)))


def test_phi_inverse_roundtrip():
    law = NEWTON
    s = np.array([0.3, 1.0, 4.7])
    assert np.max(np.abs(law.phi_inverse(law.phi(s)) - s) / s) < 1e-12
    with pytest.raises(ValueError):
        law.phi_inverse(0.5)


def test_law_G_scaling():
    law = PotentialLaw(G=2.0)
    assert law.phi(1.0) == pytest.approx(-1.0)
    assert law.phi_prime(1.0) == pytest.approx(1.5)


def test_tetra_force_matrix_scalar():
    rng = np.random.default_rng(23)
    for _ in range(100):
        ms = rand_masses(rng)
        A = wc_matrix(ms, TETRA).matrix()
        assert np.max(np.abs(A + 0.5 * ms.M * np.eye(3))) < 1e-12 * ms.M


def test_entries_are_linear_in_phi():
    rng = np.random.default_rng(29)
    ms = rand_masses(rng)
    L = phi_to_entries_matrix(ms)
    for _ in range(20):
        sd = rand_shape(rng)
        assert np.allclose(
            wc_matrix(ms, sd).entries(), L @ NEWTON.phi(sd.vec()), atol=1e-13
        )


def test_block_case_matches_general():
    rng = np.random.default_rng(31)
    for _ in range(50):
        m1, m2, m3 = np.exp(rng.uniform(-1, 1, 3))
        a, b, d, f = np.exp(rng.uniform(-0.5, 0.5, 4))
        ms = MassSystem((m1, m2, m3, m2))
        sd = SquaredDistances(a, b, b, d, d, f)
        got = wc_matrix(ms, sd)
        assert got.delta == pytest.approx(0.0, abs=1e-14)
        assert got.eps == pytest.approx(0.0, abs=1e-14)
        blk = wc_symmetric_block(m1, m2, m3, a, b, d, f)
        assert np.max(np.abs(got.entries() - blk.entries())) < 1e-12 * got.frobenius()


def test_rhombus_diagonal_entries():
    # diagonal, with entries twice the (m1+m2)phi(b)-style closed forms;
    # the ratios between entries match those closed forms exactly
    m1, m2 = 1.3, 0.6
    a, b, f = 1.2, 1.05, 0.8
    phi = NEWTON.phi
    ms = MassSystem((m1, m2, m1, m2))
    sd = SquaredDistances(a, b, b, b, b, f)
    A = wc_matrix(ms, sd)
    off = np.array([A.delta, A.eps, A.phi_e])
    assert np.max(np.abs(off)) < 1e-13 * A.frobenius()
    closed = np.array(
        [
            (m1 + m2) * phi(b),
            m1 * phi(a) + m2 * phi(b),
            m1 * phi(b) + m2 * phi(f),
        ]
    )
    diag = np.array([A.alpha, A.beta, A.gamma])
    assert np.max(np.abs(diag - 2.0 * closed)) < 1e-12 * A.frobenius()
    assert np.allclose(diag / diag[0], closed / closed[0], rtol=1e-12)


def test_wc_to_distances_roundtrip():
    rng = np.random.default_rng(37)
    worst = 0.0
    for _ in range(500):
        ms = rand_masses(rng)
        sd = rand_shape(rng)
        back = wc_to_distances(wc_matrix(ms, sd), ms)
        worst = max(worst, np.max(np.abs(back.vec() - sd.vec()) / sd.vec()))
    assert worst < 1e-10


def test_scalar_force_matrix_inverts_to_tetra():
    ms = MassSystem((1.1, 2.3, 0.7, 1.9))
    from balcon.forces import WcMatrix

    A = WcMatrix(-ms.M / 2, -ms.M / 2, -ms.M / 2, 0.0, 0.0, 0.0)
    sd = wc_to_distances(A, ms)
    assert np.max(np.abs(sd.vec() - 1.0)) < 1e-12


def test_wc_to_distances_rejects_out_of_image():
    ms = MassSystem((1, 1, 1, 1))
    from balcon.forces import WcMatrix

    with pytest.raises(ValueError):
        wc_to_distances(WcMatrix(1.0, 1.0, 1.0, 0.0, 0.0, 0.0), ms)


def test_symmetric_coords_roundtrip_and_errors():
    c = SymmetricCoords(alpha=-2.0, theta=0.3, psi=-0.1, phi_e=0.25)
    A = symmetric_coords_to_wc(c)
    back = symmetric_coords(A)
    assert back == pytest.approx(
        (c.alpha, c.theta, c.psi, c.phi_e), abs=1e-14
    ) or np.allclose(
        [back.alpha, back.theta, back.psi, back.phi_e],
        [c.alpha, c.theta, c.psi, c.phi_e],
        atol=1e-14,
    )
    # beta = alpha - 2 psi, gamma = alpha + theta - psi
    assert A.beta == pytest.approx(c.alpha - 2 * c.psi, abs=1e-14)
    assert A.gamma == pytest.approx(c.alpha + c.theta - c.psi, abs=1e-14)
    bad = wc_matrix(
        MassSystem((1, 2, 3, 4)), SquaredDistances(1.2, 0.9, 1.1, 0.8, 1.3, 1.0)
    )
    with pytest.raises(ValueError):
        symmetric_coords(bad)


def test_symmetric_coords_of_scalar_matrix():
    ms = MassSystem((1.0, 2.0, 3.0, 2.0))
    c = symmetric_coords(wc_matrix(ms, TETRA))
    assert (c.theta, c.psi, c.phi_e) == pytest.approx((0, 0, 0), abs=1e-13)


def test_block_degeneracy_locus_vs_eigenvalues():
    # (gamma - e1)(gamma - e2) = theta^2 - psi^2 - phi^2 for the block form
    rng = np.random.default_rng(41)
    for _ in range(200):
        c = SymmetricCoords(*rng.uniform(-2, 2, 4))
        A = symmetric_coords_to_wc(c).matrix()
        upper = np.linalg.eigvalsh(A[:2, :2])
        lhs = (A[2, 2] - upper[0]) * (A[2, 2] - upper[1])
        _, cone = symmetric_degeneracy_residuals(c)
        scale = max(1.0, np.max(np.abs(A)) ** 2)
        assert abs(lhs - (-cone)) < 1e-12 * scale


def test_symmetric_inverse_phi_values():
    rng = np.random.default_rng(43)
    for _ in range(50):
        m1, m2, m3 = np.exp(rng.uniform(-0.7, 0.7, 3))
        a, b, d, f = np.exp(rng.uniform(-0.3, 0.3, 4))
        A = wc_symmetric_block(m1, m2, m3, a, b, d, f)
        c = symmetric_coords(A)
        pa, pb, pd, pf = symmetric_phi_values(m1, m2, m3, c)
        want = NEWTON.phi(np.array([a, b, d, f]))
        assert np.max(np.abs(np.array([pa, pb, pd, pf]) - want)) < 1e-12


def test_homogeneity_of_force_matrix():
    rng = np.random.default_rng(47)
    for _ in range(50):
        ms = rand_masses(rng)
        sd = rand_shape(rng)
        lam = float(np.exp(rng.uniform(-1, 1)))
        scaled = SquaredDistances.from_vec(lam * sd.vec())
        want = lam**-1.5 * wc_matrix(ms, sd).entries()
        got = wc_matrix(ms, scaled).entries()
        assert np.max(np.abs(got - want)) < 1e-12 * np.max(np.abs(want))


def test_force_matrix_negative_definite():
    rng = np.random.default_rng(53)
    for _ in range(1000):
        ms = rand_masses(rng)
        sd = rand_shape(rng)
        assert wc_matrix(ms, sd).eigenvalues().max() < 0.0


def force_endomorphism(ms, sd, law=NEWTON):
    """Independent oracle: the force endomorphism on zero-sum vectors,
    straight from the pairwise accelerations.

    (A xi)_k = sum_j m_j phi(s_kj) xi_k - m_k sum_j phi(s_kj) xi_j, expressed
    in the u-basis via the 1/m-weighted inner product.
    """
    from balcon.massspace import build_basis

    tab = np.zeros((4, 4))
    for (i, j), v in sd.pair_table().items():
        tab[i, j] = tab[j, i] = v
    phi = law.phi(np.where(tab > 0, tab, 1.0))
    np.fill_diagonal(phi, 0.0)
    m = ms.as_array()

    def apply(xi):
        out = np.empty(4)
        for k in range(4):
            out[k] = xi[k] * float(phi[k] @ m) - m[k] * float(phi[k] @ xi)
        return out

    u = build_basis(ms).matrix()
    a = np.empty((3, 3))
    for j in range(3):
        img = apply(u[j])
        for i in range(3):
            a[i, j] = float(np.sum(u[i] * img / m))
    return a


def test_force_matrix_against_endomorphism_oracle():
    rng = np.random.default_rng(59)
    for _ in range(100):
        ms = rand_masses(rng)
        sd = rand_shape(rng)
        direct = force_endomorphism(ms, sd)
        assert np.max(np.abs(direct - wc_matrix(ms, sd).matrix())) < 1e-11 * max(
            1.0, np.max(np.abs(direct))
        )
