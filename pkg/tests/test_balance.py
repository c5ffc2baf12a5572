import numpy as np
import pytest

from balcon.balance import (
    balance_residuals_4body,
    balance_residuals_general,
    is_balanced,
    residual_scale,
    symmetric_balance_residual,
)
from balcon.massspace import MassSystem
from balcon.shape import SquaredDistances

TETRA = SquaredDistances(1, 1, 1, 1, 1, 1)


def rand_masses(rng):
    return MassSystem(tuple(np.exp(rng.uniform(np.log(0.1), np.log(10), 4))))


def rand_shape(rng):
    return SquaredDistances.from_vec(np.exp(rng.uniform(-0.5, 0.5, 6)))


def test_tetra_is_balanced_any_masses():
    rng = np.random.default_rng(59)
    for _ in range(20):
        ms = rand_masses(rng)
        res = balance_residuals_4body(ms, TETRA)
        assert res.max_abs() < 1e-12 * residual_scale(ms.m, TETRA)
        ok, norm = is_balanced(ms, TETRA, tol=1e-9)
        assert ok


def test_equilateral_triangle_balanced():
    tri = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=float)
    res = balance_residuals_general([1.0, 2.5, 0.3], tri)
    assert res.max_abs() < 1e-14


def test_determinant_vs_expanded_transcriptions():
    rng = np.random.default_rng(61)
    for _ in range(1000):
        ms = rand_masses(rng)
        sd = rand_shape(rng)
        rg = balance_residuals_general(ms.m, sd).values
        re = balance_residuals_4body(ms, sd).values
        scale = max(np.max(np.abs(re)), residual_scale(ms.m, sd))
        assert np.max(np.abs(rg - re)) < 1e-10 * scale


def test_symmetric_data_residual_structure():
    rng = np.random.default_rng(67)
    for _ in range(100):
        m1, m2, m3 = np.exp(rng.uniform(-1, 1, 3))
        a, b, d, f = np.exp(rng.uniform(-0.4, 0.4, 4))
        ms = MassSystem((m1, m2, m3, m2))
        sd = SquaredDistances(a, b, b, d, d, f)
        res = balance_residuals_4body(ms, sd)
        scale = residual_scale(ms.m, sd)
        assert abs(res.p124) < 1e-12 * scale
        assert abs(res.p234) < 1e-12 * scale
        assert abs(res.p123 + res.p134) < 1e-12 * scale
        assert abs(
            symmetric_balance_residual(m1, m2, m3, a, b, d, f) - res.p123
        ) < 1e-10 * scale


def test_alternating_sum_identity():
    rng = np.random.default_rng(71)
    for _ in range(200):
        ms = rand_masses(rng)
        sd = rand_shape(rng)
        res = balance_residuals_4body(ms, sd)
        assert abs(res.alternating_sum()) < 1e-9 * max(
            res.max_abs(), residual_scale(ms.m, sd)
        )


def test_symmetric_equation_special_families():
    # a = b = d is balanced for any f
    for f in (0.5, 1.0, 2.3):
        assert abs(symmetric_balance_residual(1.4, 0.8, 2.1, 1.1, 1.1, 1.1, f)) < 1e-14


def test_symmetric_linearization_gradient():
    m1, m2, m3 = 1.0, 2.0, 3.0
    h = 1e-6
    grad = []
    for i in range(3):
        args_p = [1.0, 1.0, 1.0, 1.0]
        args_m = [1.0, 1.0, 1.0, 1.0]
        args_p[i] += h
        args_m[i] -= h
        grad.append(
            (
                symmetric_balance_residual(m1, m2, m3, *args_p)
                - symmetric_balance_residual(m1, m2, m3, *args_m)
            )
            / (2 * h)
        )
    grad = np.array(grad)
    want = np.array([m1 - m3, m2 - m1, m3 - m2])
    cross = np.cross(grad, want)
    assert np.linalg.norm(cross) < 1e-5 * np.linalg.norm(grad) * np.linalg.norm(want)


def test_rhombus_family_always_balanced():
    m1, m2 = 1.0, 2.0
    ms = MassSystem((m1, m2, m1, m2))
    for a in (0.7, 1.0, 1.6):
        for f in (0.5, 1.0, 2.0):
            sd = SquaredDistances(a, 1.1, 1.1, 1.1, 1.1, f)
            ok, _ = is_balanced(ms, sd, tol=1e-10)
            assert ok


def test_is_balanced_negative_control():
    ms = MassSystem((1.0, 2.0, 3.0, 4.0))
    ok, norm = is_balanced(
        ms, SquaredDistances(1.1, 1, 1, 1, 1, 1), tol=1e-9
    )
    assert not ok and norm > 1e-5


def test_scale_equivariance():
    rng = np.random.default_rng(73)
    ms = rand_masses(rng)
    sd = rand_shape(rng)
    lam = 3.7
    r1 = balance_residuals_4body(ms, sd).values
    r2 = balance_residuals_4body(
        ms, SquaredDistances.from_vec(lam * sd.vec())
    ).values
    factors = r2 / r1
    assert np.max(np.abs(factors - factors[0])) < 1e-9 * abs(factors[0])
    # normalized verdicts are scale-free
    _, n1 = is_balanced(ms, sd)
    _, n2 = is_balanced(ms, SquaredDistances.from_vec(lam * sd.vec()))
    assert n2 == pytest.approx(n1, rel=1e-9)


def test_general_input_forms():
    ms = MassSystem((1, 2, 3, 4))
    sd = SquaredDistances(1.2, 0.9, 1.1, 0.8, 1.3, 1.0)
    tab = {}
    for (i, j), v in sd.pair_table().items():
        tab[(i, j)] = v
    r1 = balance_residuals_general(ms.m, sd).values
    r2 = balance_residuals_general(ms.m, tab).values
    assert np.allclose(r1, r2, rtol=0, atol=0)
    with pytest.raises(ValueError):
        del tab[(0, 1)]
        balance_residuals_general(ms.m, tab)
    with pytest.raises(ValueError):
        balance_residuals_general([1.0, 2.0], np.zeros((2, 2)))
