import numpy as np
import pytest

from balcon.dynamics import theta_family
from balcon.massspace import MassSystem
from balcon.polytope import (
    ComplexStructure,
    FrequencyPoint,
    HornSpec,
    bifurcation_vertices,
    frequency_map,
    haar_orthogonal,
    horn_membership,
    pairing_structure,
    random_structure,
    sample_polytope,
    standard_structure,
)
from balcon.shape import SquaredDistances, inertia_matrix

S0_EQUAL = np.diag([0.5, 0.5, 0.5, 0.0, 0.0, 0.0])


def test_complex_structure_validation():
    j = standard_structure(3)
    assert j.p == 3
    with pytest.raises(ValueError):
        ComplexStructure(np.eye(6))
    with pytest.raises(ValueError):
        ComplexStructure(np.zeros((5, 5)))
    rng = np.random.default_rng(3)
    jr = random_structure(rng, 3)
    assert np.max(np.abs(jr.J @ jr.J + np.eye(6))) < 1e-12


def test_haar_orthogonal_properties():
    rng = np.random.default_rng(5)
    q = haar_orthogonal(rng, 6)
    assert np.max(np.abs(q.T @ q - np.eye(6))) < 1e-12


def test_frequency_map_basic_extrinsic():
    sig = np.array([0.9, 0.5, 0.2])
    S0 = np.diag(np.concatenate([sig, np.zeros(3)]))
    j = pairing_structure(6, [(0, 3), (1, 4), (2, 5)])
    nu = frequency_map(S0, j)
    assert np.allclose(nu.as_array(), sig, atol=1e-12)


def test_frequency_map_internal_pairing():
    sig = np.array([0.9, 0.5, 0.2])
    S0 = np.diag(np.concatenate([sig, np.zeros(3)]))
    j = pairing_structure(6, [(0, 1), (2, 3), (4, 5)])
    nu = frequency_map(S0, j)
    assert np.allclose(nu.as_array(), [sig[0] + sig[1], sig[2], 0.0], atol=1e-12)


def test_frequency_map_trace_and_invariance():
    rng = np.random.default_rng(7)
    sig = np.array([0.9, 0.5, 0.2])
    S0 = np.diag(np.concatenate([sig, np.zeros(3)]))
    for _ in range(50):
        j = random_structure(rng, 3)
        nu = frequency_map(S0, j)
        assert sum(nu.nu) == pytest.approx(sig.sum(), abs=1e-9)
    # conjugating J by a rotation commuting with S0 leaves nu unchanged
    j = random_structure(rng, 3)
    nu0 = frequency_map(S0, j)
    qblock = np.eye(6)
    th = 0.7
    qblock[3:5, 3:5] = [[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]]
    j2 = ComplexStructure(qblock @ j.J @ qblock.T)
    nu1 = frequency_map(S0, j2)
    assert np.allclose(nu0.as_array(), nu1.as_array(), atol=1e-10)


def test_sample_polytope_membership_and_sum():
    spec = HornSpec.canonical([0.5, 0.5, 0.5, 0, 0, 0])
    pts = sample_polytope(S0_EQUAL, 2000, seed=11)
    for pt in pts:
        ok, viol = horn_membership(spec, pt, tol=1e-9)
        assert ok, viol
        assert sum(pt.nu) == pytest.approx(1.5, abs=1e-9)


def test_sampling_is_deterministic():
    a = sample_polytope(S0_EQUAL, 10, seed=42)
    b = sample_polytope(S0_EQUAL, 10, seed=42)
    assert all(tuple(x.nu) == tuple(y.nu) for x, y in zip(a, b))


def test_extreme_point_reachable():
    verts, _ = bifurcation_vertices(S0_EQUAL)
    b = verts["B"]
    assert np.allclose(b.nu.as_array(), [1.0, 0.5, 0.0], atol=1e-3)


def test_horn_membership_commuting_cases():
    spec = HornSpec((0.5, 0.5, 0.0), (0.5, 0.0, 0.0))
    a = np.array(spec.spectrum_a)
    b = np.array(spec.spectrum_b)
    aligned = FrequencyPoint(tuple(np.sort(a + b)[::-1]))
    anti = FrequencyPoint(tuple(np.sort(a + b[::-1])[::-1]))
    assert horn_membership(spec, aligned)[0]
    assert horn_membership(spec, anti)[0]


def test_horn_membership_rejects_outside():
    spec = HornSpec.canonical([0.5, 0.5, 0.5, 0, 0, 0])
    ok, viol = horn_membership(spec, FrequencyPoint((1.4, 0.05, 0.05)))
    assert not ok
    assert any("c(1,)" in v for v in viol)


def test_horn_membership_p2():
    spec = HornSpec((1.0, 0.2), (0.5, 0.1))
    assert horn_membership(spec, FrequencyPoint((1.5, 0.3)))[0]
    assert not horn_membership(spec, FrequencyPoint((1.6, 0.2)))[0]
    with pytest.raises(ValueError):
        horn_membership(
            HornSpec((1, 0, 0, 0), (1, 0, 0, 0)), FrequencyPoint((1, 1, 0, 0))
        )


def test_horn_membership_sampling_oracle():
    # random sums diag(a) + Q diag(b) Q^T must always be members
    rng = np.random.default_rng(13)
    spec = HornSpec((0.9, 0.5, 0.0), (0.45, 0.2, 0.0))
    a = np.diag(spec.spectrum_a)
    b = np.diag(spec.spectrum_b)
    for _ in range(2000):
        q = haar_orthogonal(rng, 3)
        c = np.sort(np.linalg.eigvalsh(a + q @ b @ q.T))[::-1]
        ok, viol = horn_membership(spec, FrequencyPoint(tuple(c)), tol=1e-9)
        assert ok, viol


def test_subpolytope_contains_one_point_polytope():
    s1, s2, s3 = 0.5, 0.5, 0.49
    spec2 = HornSpec((s2, 0.0, 0.0), (s1, s3, 0.0))
    assert horn_membership(spec2, FrequencyPoint((s1, s2, s3)))[0]


def test_bifurcation_vertices_equal_masses():
    verts, case = bifurcation_vertices(S0_EQUAL)
    assert case == 2
    assert np.allclose(verts["A"].nu.as_array(), [0.5, 0.5, 0.5], atol=1e-12)
    for label in "BCD":
        assert np.allclose(verts[label].nu.as_array(), [1.0, 0.5, 0.0], atol=1e-12)


def test_bifurcation_vertices_case_one_and_partitions():
    sig = np.array([1.0, 0.3, 0.2])
    verts, case = bifurcation_vertices(np.diag(np.concatenate([sig, np.zeros(3)])))
    assert case == 1
    # each vertex lies in the Horn polytope of the partition that isolates
    # one of its PAIRED inertia eigenvalues (B pairs s1,s2; C pairs s2,s3;
    # D pairs s1,s3)
    partitions = {
        "B": HornSpec((sig[0], 0, 0), (sig[1], sig[2], 0)),
        "C": HornSpec((sig[2], 0, 0), (sig[0], sig[1], 0)),
        "D": HornSpec((sig[2], 0, 0), (sig[0], sig[1], 0)),
    }
    for label, spec in partitions.items():
        ok, viol = horn_membership(spec, verts[label].nu, tol=1e-9)
        assert ok, (label, viol)
    # and the full polytope (i = 2) contains every vertex
    spec2 = HornSpec((sig[1], 0, 0), (sig[0], sig[2], 0))
    for label in "ABCD":
        ok, viol = horn_membership(spec2, verts[label].nu, tol=1e-9)
        assert ok, (label, viol)


def test_bifurcation_vertices_planar_reduced_output():
    verts, case = bifurcation_vertices(np.diag([1.0, 0.5, 0.0, 0.0, 0.0, 0.0]))
    assert case is None
    assert set(verts) == {"A", "B"}
    assert np.allclose(verts["A"].nu.as_array(), [1.0, 0.5, 0.0], atol=1e-12)
    assert np.allclose(verts["B"].nu.as_array(), [1.5, 0.0, 0.0], atol=1e-12)


def test_bifurcation_vertices_input_validation():
    with pytest.raises(ValueError):
        bifurcation_vertices(np.diag([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        bifurcation_vertices(np.eye(4))
    with pytest.raises(ValueError):
        bifurcation_vertices(np.eye(6))  # no zero directions


def test_theta_family_travels_polytope_edge():
    m1, m2 = 0.6, 0.4
    b = inertia_matrix(
        MassSystem((m1, m2, m1, m2)), SquaredDistances(1, 1, 1, 1, 1, 1)
    )
    for theta in np.linspace(0.0, np.pi / 2, 9):
        nu, sig, w3 = theta_family(m1, m2, 1.0, float(theta))
        spec = HornSpec((sig[1], 0, 0), (sig[0], sig[2], 0))
        ok, viol = horn_membership(
            spec, FrequencyPoint(tuple(sorted(nu, reverse=True))), tol=1e-8
        )
        assert ok, viol
        # boundary face: the two in-plane frequencies sum to sigma1 + sigma2
        nu3 = sig[2] * w3
        pair = sorted(nu, key=lambda x: abs(x - nu3))[1:]
        assert sum(pair) == pytest.approx(sig[0] + sig[1], abs=1e-8)
