import numpy as np
import pytest

from balcon.massspace import MassSystem, build_basis, verify_orthonormal


def test_equal_masses_u2():
    basis = build_basis(MassSystem((1, 1, 1, 1)))
    want = np.array([1.0, 0.0, -1.0, 0.0]) / np.sqrt(2.0)
    assert np.allclose(basis.u2, want, atol=1e-15)
    assert verify_orthonormal(MassSystem((1, 1, 1, 1)), basis) < 1e-12


def test_kappa_values_2121():
    basis = build_basis(MassSystem((2, 1, 2, 1)))
    assert basis.kappa2 == pytest.approx(1.0, abs=1e-15)
    assert basis.kappa3**2 == pytest.approx(0.5, abs=1e-15)


def test_orthonormality_random_and_constants_identity():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        ms = MassSystem(tuple(np.exp(rng.uniform(np.log(0.1), np.log(10), 4))))
        b = build_basis(ms)
        assert verify_orthonormal(ms, b) < 1e-12
        assert abs(b.X - ms.M * b.Y * b.Z) < 1e-12 * b.X
        assert abs(b.X - b.T * b.U / b.V) < 1e-12 * b.X


def test_specific_masses_orthonormal():
    ms = MassSystem((3, 1, 2, 5))
    assert verify_orthonormal(ms, build_basis(ms)) < 1e-12


def test_perturbed_basis_detected():
    ms = MassSystem((3, 1, 2, 5))
    b = build_basis(ms)
    u1 = b.u1.copy()
    u1[0] += 1e-3
    import dataclasses

    bad = dataclasses.replace(b, u1=u1)
    assert verify_orthonormal(ms, bad) >= 1e-4


def test_total_mass_summation_order():
    ms = MassSystem((0.1, 0.2, 0.3, 0.4))
    assert ms.M == ((0.1 + 0.2) + 0.3) + 0.4


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        MassSystem((1.0, -1.0, 2.0, 3.0))
    with pytest.raises(ValueError):
        MassSystem((1.0, 0.0, 2.0, 3.0))
    with pytest.raises(ValueError):
        build_basis(MassSystem((1.0, 2.0, 3.0)))
