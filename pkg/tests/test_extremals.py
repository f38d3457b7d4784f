import numpy as np

from setcomplete.extremals import (
    ReducedColumn,
    atan_pi,
    atomic_along,
    column_extremals,
    reduce_column,
)
from setcomplete.grassmann import make_rank1_geodesic, random_basis

from conftest import random_observed


def random_geodesic(rng, m, r):
    U = random_basis(m, r, rng)
    h = rng.standard_normal(m)
    h -= U @ (U.T @ h)
    h /= np.linalg.norm(h)
    v = rng.standard_normal(r)
    v /= np.linalg.norm(v)
    return make_rank1_geodesic(U, h, v)


def joint_residual_sq(x, g, col_mask, t):
    """Oracle: project the observed column onto the full restricted basis."""
    keep = col_mask.astype(float)
    xo = x * keep
    cols = g.rotated_basis * keep[:, None]
    moving = cols[:, 0] * np.cos(t) + (g.direction * keep) * np.sin(t)
    B = np.column_stack([moving, cols[:, 1:]])
    c, *_ = np.linalg.lstsq(B, xo, rcond=None)
    res = xo - B @ c
    return float(res @ res)


def test_atan_pi_branches():
    assert atan_pi(1.0, 0.0) == np.pi / 2
    assert atan_pi(0.0, 1.0) == 0.0
    assert abs(atan_pi(-1.0, 1.0) - 3 * np.pi / 4) < 1e-15
    assert atan_pi(0.0, 0.0) == np.pi / 2
    for x1, x2 in [(2.0, 3.0), (-2.0, 3.0), (2.0, -3.0), (-2.0, -3.0)]:
        t = atan_pi(x1, x2)
        assert 0.0 <= t < np.pi
        assert abs(np.tan(t) - x1 / x2) < 1e-12


def test_reduce_column_r1_identity():
    rng = np.random.default_rng(0)
    g = random_geodesic(rng, m=6, r=1)
    x = rng.standard_normal(6)
    mask = rng.random(6) < 0.7
    rc = reduce_column(x, g, mask)
    assert np.allclose(rc.x_r, x * mask)
    assert np.allclose(rc.u_r, g.rotated_basis[:, 0] * mask)
    assert np.allclose(rc.h_r, g.direction * mask)


def test_reduce_column_trailing_spans_observed():
    # trailing columns cover the whole observed coordinate subspace -> x_r = 0
    g = random_geodesic(np.random.default_rng(1), m=4, r=3)
    mask = np.array([True, True, False, False])
    span = g.rotated_basis[:, 1:] * mask[:, None]
    x = span @ np.array([1.3, -0.4])
    rc = reduce_column(x, g, mask)
    assert np.linalg.norm(rc.x_r) <= 1e-10


def test_reduce_column_orthogonal_to_trailing():
    rng = np.random.default_rng(2)
    g = random_geodesic(rng, m=8, r=3)
    mask = rng.random(8) < 0.75
    rc = reduce_column(rng.standard_normal(8), g, mask)
    trailing = g.rotated_basis[:, 1:] * mask[:, None].astype(float)
    for vec in (rc.x_r, rc.u_r, rc.h_r):
        assert np.linalg.norm(trailing.T @ vec) <= 1e-8


def test_sequential_reduction_equals_joint_projection():
    rng = np.random.default_rng(3)
    g = random_geodesic(rng, m=8, r=3)
    x = rng.standard_normal(8)
    mask = np.zeros(8, bool)
    mask[rng.permutation(8)[:6]] = True
    rc = reduce_column(x, g, mask)
    for t in rng.uniform(0, np.pi, size=20):
        joint = joint_residual_sq(x, g, mask, t)
        seq = atomic_along(rc, t)
        assert abs(joint - seq) <= 1e-10 * (1.0 + joint)


def test_sequential_reduction_property_random_shapes():
    rng = np.random.default_rng(4)
    for _ in range(40):
        m = int(rng.integers(4, 12))
        r = int(rng.integers(1, min(m, 5)))
        g = random_geodesic(rng, m, r)
        x = rng.standard_normal(m)
        mask = rng.random(m) < rng.uniform(0.3, 1.0)
        rc = reduce_column(x, g, mask)
        for t in rng.uniform(0, np.pi, size=5):
            joint = joint_residual_sq(x, g, mask, t)
            seq = atomic_along(rc, t)
            assert abs(joint - seq) <= 1e-10 * (1.0 + joint)


def test_extremals_in_plane_vector():
    e = np.eye(3)
    rc = ReducedColumn(x_r=e[0] + e[1], u_r=e[0], h_r=e[1])
    ext = column_extremals(rc)
    assert not ext.constant
    assert abs(ext.t_min - np.pi / 4) < 1e-12
    assert abs(ext.t_max - 3 * np.pi / 4) < 1e-12
    assert ext.f_min <= 1e-15
    assert abs(ext.f_max - 2.0) < 1e-12


def test_extremals_out_of_plane_vector():
    # x = [2,0,1]: in-plane part along e1 -> t_min=0 (f=1), t_max=pi/2 (f=5)
    e = np.eye(3)
    rc = ReducedColumn(x_r=np.array([2.0, 0.0, 1.0]), u_r=e[0], h_r=e[1])
    ext = column_extremals(rc)
    assert not ext.constant
    assert abs(ext.t_min - 0.0) < 1e-12
    assert abs(ext.t_max - np.pi / 2) < 1e-12
    assert abs(ext.f_min - 1.0) < 1e-12
    assert abs(ext.f_max - 5.0) < 1e-12


def test_extremals_dependent_directions_constant():
    u = np.array([1.0, 2.0, 0.0])
    rc = ReducedColumn(x_r=np.array([1.0, 0.0, 0.0]), u_r=u, h_r=-0.5 * u)
    ext = column_extremals(rc)
    assert ext.constant and ext.t_min == 0.0 and ext.t_max == 0.0
    assert ext.f_min == ext.f_max


def test_extremals_orthogonal_column_constant():
    rc = ReducedColumn(
        x_r=np.array([0.0, 0.0, 2.0]),
        u_r=np.array([1.0, 0.0, 0.0]),
        h_r=np.array([0.0, 1.0, 0.0]),
    )
    assert column_extremals(rc).constant


def test_extremals_zero_column_constant():
    rc = ReducedColumn(
        x_r=np.zeros(3), u_r=np.array([1.0, 0.0, 0.0]), h_r=np.array([0.0, 1.0, 0.0])
    )
    ext = column_extremals(rc)
    assert ext.constant and ext.f_min == 0.0


def test_atomic_periodicity():
    rng = np.random.default_rng(5)
    for _ in range(20):
        rc = ReducedColumn(
            x_r=rng.standard_normal(6),
            u_r=rng.standard_normal(6),
            h_r=rng.standard_normal(6),
        )
        for t in rng.uniform(0, np.pi, size=5):
            f1 = atomic_along(rc, t)
            f2 = atomic_along(rc, t + np.pi)
            assert abs(f1 - f2) <= 1e-10 * (1.0 + f1)


def test_extremals_grid_oracle():
    rng = np.random.default_rng(6)
    grid = np.arange(10_000) * (np.pi / 10_000)
    step = np.pi / 10_000
    checked = 0
    while checked < 100:
        rc = ReducedColumn(
            x_r=rng.standard_normal(7),
            u_r=rng.standard_normal(7),
            h_r=rng.standard_normal(7),
        )
        ext = column_extremals(rc)
        if ext.constant:
            continue
        checked += 1
        f_grid = np.array([atomic_along(rc, t) for t in grid])
        gap_min = abs(grid[f_grid.argmin()] - ext.t_min)
        gap_max = abs(grid[f_grid.argmax()] - ext.t_max)
        assert min(gap_min, np.pi - gap_min) <= step + 1e-12
        assert min(gap_max, np.pi - gap_max) <= step + 1e-12
        assert np.all(f_grid >= ext.f_min - 1e-10 * (1 + ext.f_min))
        assert np.all(f_grid <= ext.f_max + 1e-10 * (1 + ext.f_max))


def test_extremals_from_real_instance():
    # reduced data coming from an actual observed matrix, not synthetic vectors
    rng = np.random.default_rng(7)
    obs = random_observed(rng, m=8, n=6, r=3, rate=0.75)
    g = random_geodesic(rng, m=8, r=3)
    for j in range(obs.n):
        rc = reduce_column(obs.values[:, j], g, obs.mask[:, j])
        ext = column_extremals(rc)
        if ext.constant:
            continue
        assert 0.0 <= ext.t_min < np.pi and 0.0 <= ext.t_max < np.pi
        assert ext.t_min != ext.t_max
        assert ext.f_max <= float(rc.x_r @ rc.x_r) + 1e-10
