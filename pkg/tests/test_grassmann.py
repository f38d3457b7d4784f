import numpy as np
import pytest

from setcomplete.grassmann import (
    RankDeficientError,
    check_orthonormal,
    eval_general,
    eval_rank1,
    make_general_geodesic,
    make_rank1_geodesic,
    orthonormalize,
    random_basis,
    transported_direction,
)


def projector(U):
    return U @ U.T


def random_geodesic(rng, m=6, r=3):
    U = random_basis(m, r, rng)
    h = rng.standard_normal(m)
    h -= U @ (U.T @ h)
    h /= np.linalg.norm(h)
    v = rng.standard_normal(r)
    v /= np.linalg.norm(v)
    return make_rank1_geodesic(U, h, v)


def test_orthonormalize_identity_unchanged():
    I = np.eye(4)[:, :2]
    assert np.allclose(orthonormalize(I), I)


def test_orthonormalize_scaling():
    assert np.allclose(orthonormalize(np.array([[2.0], [0.0]])), [[1.0], [0.0]])


def test_orthonormalize_random():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((6, 2))
    Q = orthonormalize(A)
    assert np.linalg.norm(Q.T @ Q - np.eye(2)) <= 1e-12
    # same span: projectors agree
    P_A = A @ np.linalg.pinv(A)
    assert np.allclose(projector(Q), P_A, atol=1e-10)


def test_orthonormalize_rank_deficient():
    A = np.ones((5, 2))
    with pytest.raises(RankDeficientError):
        orthonormalize(A)


def test_random_basis_orthonormal():
    rng = np.random.default_rng(1)
    U = random_basis(4, 4, rng)
    assert check_orthonormal(U)
    u = random_basis(3, 1, rng)
    assert abs(np.linalg.norm(u) - 1.0) < 1e-12


def test_random_basis_r_too_large():
    with pytest.raises(ValueError):
        random_basis(3, 4, np.random.default_rng(0))


def test_random_basis_isotropy_monte_carlo():
    # coordinate means of random unit vectors should vanish like 1/sqrt(m*N)
    rng = np.random.default_rng(2)
    draws = np.array([random_basis(4, 1, rng)[:, 0] for _ in range(10_000)])
    sigma = 1.0 / np.sqrt(4 * 10_000)
    assert np.all(np.abs(draws.mean(axis=0)) < 3 * sigma)


def test_make_rank1_geodesic_r1():
    rng = np.random.default_rng(3)
    g = random_geodesic(rng, m=5, r=1)
    U = g.rotated_basis
    assert check_orthonormal(U)
    assert abs(U[:, 0] @ g.direction) < 1e-10


def test_make_rank1_geodesic_identity_axis():
    rng = np.random.default_rng(4)
    U = random_basis(6, 3, rng)
    h = rng.standard_normal(6)
    h -= U @ (U.T @ h)
    h /= np.linalg.norm(h)
    e1 = np.zeros(3)
    e1[0] = 1.0
    g = make_rank1_geodesic(U, h, e1)
    assert np.allclose(g.rotated_basis, U)


def test_make_rank1_geodesic_preserves_span():
    rng = np.random.default_rng(5)
    for _ in range(5):
        U = random_basis(6, 3, rng)
        h = rng.standard_normal(6)
        h -= U @ (U.T @ h)
        h /= np.linalg.norm(h)
        v = rng.standard_normal(3)
        v /= np.linalg.norm(v)
        g = make_rank1_geodesic(U, h, v)
        assert np.allclose(projector(g.rotated_basis), projector(U), atol=1e-10)
        assert np.allclose(g.rotated_basis[:, 0], U @ v, atol=1e-12)


def test_make_rank1_geodesic_rejects_nonorthogonal_direction():
    rng = np.random.default_rng(6)
    U = random_basis(5, 2, rng)
    with pytest.raises(ValueError):
        make_rank1_geodesic(U, U[:, 0], np.array([1.0, 0.0]))


def test_eval_rank1_endpoints():
    rng = np.random.default_rng(7)
    g = random_geodesic(rng)
    assert np.allclose(eval_rank1(g, 0.0), g.rotated_basis, atol=1e-12)
    at_half = eval_rank1(g, np.pi / 2)
    assert np.allclose(at_half[:, 0], g.direction, atol=1e-12)
    assert np.allclose(at_half[:, 1:], g.rotated_basis[:, 1:], atol=1e-12)


def test_eval_rank1_projector_periodicity():
    rng = np.random.default_rng(8)
    g = random_geodesic(rng)
    for t in rng.uniform(0, np.pi, size=20):
        P1 = projector(eval_rank1(g, t))
        P2 = projector(eval_rank1(g, t + np.pi))
        assert np.linalg.norm(P1 - P2) <= 1e-10


def test_eval_rank1_invariants_along_curve():
    rng = np.random.default_rng(9)
    g = random_geodesic(rng)
    for t in rng.uniform(-2 * np.pi, 2 * np.pi, size=10):
        U = eval_rank1(g, t)
        assert np.linalg.norm(U.T @ U - np.eye(3)) <= 1e-10
        assert np.allclose(U[:, 1:], g.rotated_basis[:, 1:], atol=1e-10)


def test_transported_direction():
    rng = np.random.default_rng(10)
    g = random_geodesic(rng)
    H0 = transported_direction(g, 0.0)
    assert np.allclose(H0[:, 0], g.direction)
    assert np.allclose(H0[:, 1:], 0.0)
    Hq = transported_direction(g, np.pi / 2)
    assert np.allclose(Hq[:, 0], -g.rotated_basis[:, 0], atol=1e-12)
    for t in rng.uniform(0, np.pi, size=5):
        assert abs(np.linalg.norm(transported_direction(g, t)) - 1.0) < 1e-12


def test_eval_general_at_zero():
    rng = np.random.default_rng(11)
    U = random_basis(6, 3, rng)
    H = rng.standard_normal((6, 3))
    H -= U @ (U.T @ H)
    g = make_general_geodesic(U, H)
    assert np.allclose(projector(eval_general(g, 0.0)), projector(U), atol=1e-10)


def test_eval_general_matches_rank1():
    rng = np.random.default_rng(12)
    for _ in range(5):
        g1 = random_geodesic(rng)
        H = np.zeros_like(g1.rotated_basis)
        H[:, 0] = g1.direction
        g2 = make_general_geodesic(g1.rotated_basis, H)
        for t in rng.uniform(0, np.pi, size=5):
            P1 = projector(eval_rank1(g1, t))
            P2 = projector(eval_general(g2, t))
            assert np.linalg.norm(P1 - P2) <= 1e-8


def test_eval_general_zero_direction_constant():
    rng = np.random.default_rng(13)
    U = random_basis(5, 2, rng)
    g = make_general_geodesic(U, np.zeros((5, 2)))
    for t in (0.3, 1.1, 2.9):
        assert np.allclose(projector(eval_general(g, t)), projector(U), atol=1e-10)
