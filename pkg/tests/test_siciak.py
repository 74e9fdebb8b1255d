import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pshlab.errors import ArityError, PoolExhaustedError
from pshlab.functionals import exact_pool, set_estimator
from pshlab.geometry import CompactSetSpec, DomainSpec, build_grid, random_compact_set, rasterize_set
from pshlab.siciak import (ball_siciak, circle_sup, leja_from_points, leja_points, product_siciak,
                           robin_from_field, siciak_estimate, siciak_estimator, sum_log_dist,
                           transfinite_diameter)

GRID = build_grid(DomainSpec.disk(0, 2), 256)
JOUKOWSKI_2 = math.log(2 + math.sqrt(3))


@pytest.fixture(scope="module")
def disk_est():
    return siciak_estimator(rasterize_set(CompactSetSpec.disk(0, 0.5), GRID), 128)


@pytest.fixture(scope="module")
def seg_est():
    # exact boundary samples in the norm make thin masks conservative, so refine
    fine = build_grid(DomainSpec.disk(0, 2), 512)
    return siciak_estimator(rasterize_set(CompactSetSpec.segment(-1, 1), fine), 128)


def test_leja_greedy_rescan():
    mask = rasterize_set(CompactSetSpec.union([CompactSetSpec.disk(-0.4, 0.3),
                                               CompactSetSpec.segment(0.2, 0.9 + 0.5j)]), GRID)
    leja = leja_points(mask, 40)
    pool = leja.pool
    for m in range(1, leja.k):
        prod = sum_log_dist(pool, leja.points[:m])
        assert prod.max() <= leja.increments[m] + 1e-9
    assert len(np.unique(leja.points)) == leja.k


def test_two_points_span_diameter():
    mask = rasterize_set(CompactSetSpec.disk(0.1j, 0.7), build_grid(DomainSpec.disk(0, 2), 48))
    pts = leja_points(mask, 2).points
    nodes = mask.points
    assert abs(pts[0] - pts[1]) == pytest.approx(np.abs(nodes[:, None] - nodes[None, :]).max())


def test_three_points_on_circle():
    # greedy Leja from a diameter cannot be equilateral: the third point sits at a right angle
    circle = np.exp(2j * np.pi * np.arange(720) / 720)
    pts = leja_from_points(circle, 3).points
    d = sorted(abs(pts[i] - pts[j]) for i, j in ((0, 1), (0, 2), (1, 2)))
    assert d == pytest.approx([math.sqrt(2), math.sqrt(2), 2.0], rel=1e-6)


def test_leja_deterministic_and_exhaustion():
    mask = rasterize_set(CompactSetSpec.disk(0.3, 0.05), build_grid(DomainSpec.disk(0, 2), 64))
    a, b = leja_points(mask, 8), leja_points(mask, 8)
    assert np.array_equal(a.points, b.points)
    with pytest.raises(PoolExhaustedError):
        leja_points(mask, mask.node_count + 1)


def test_disk_estimate(disk_est):
    assert siciak_estimate(disk_est, 2.0) == pytest.approx(math.log(4), rel=0.05)
    assert disk_est(disk_est.leja.mask.points).max() <= 1e-2
    assert disk_est.raw(GRID.nodes[GRID.inside]).min() < 0 <= disk_est(GRID.nodes[GRID.inside]).min()


def test_segment_estimate(seg_est):
    assert siciak_estimate(seg_est, 2.0) == pytest.approx(JOUKOWSKI_2, rel=0.05)
    assert seg_est(seg_est.leja.mask.points).max() <= 1e-2
    # norm over the mask nodes alone
    nodes_only = siciak_estimator(rasterize_set(CompactSetSpec.segment(-1, 1), GRID), 128, norm_samples=0)
    assert siciak_estimate(nodes_only, 2.0) == pytest.approx(JOUKOWSKI_2, rel=0.05)
    assert siciak_estimate(nodes_only, 2.0) >= siciak_estimate(
        siciak_estimator(nodes_only.leja.mask, 128), 2.0)


def test_capacity_exact_pools():
    for spec, k, gamma, tol in ((CompactSetSpec.disk(0, 0.5), 128, 0.5, 0.005),
                                (CompactSetSpec.segment(-1, 1), 200, 0.5, 0.01),
                                (CompactSetSpec.annulus(0.2, 0.1, 0.3), 128, 0.3, 0.01)):
        est = leja_from_points(exact_pool(spec), k)
        cap = transfinite_diameter(est)
        assert cap.gamma == pytest.approx(gamma, rel=tol)
        assert cap.robin == pytest.approx(-math.log(cap.gamma))
        assert np.all(cap.diameters > 0)
        assert cap.converged and cap.spread < 1e-2


def test_capacity_needs_enough_points():
    with pytest.raises(ValueError):
        transfinite_diameter(leja_from_points(exact_pool(CompactSetSpec.disk(0, 1)), 16))


def test_robin_disk(disk_est):
    rob = robin_from_field(disk_est, [4.0, 8.0, 16.0, 32.0])
    assert np.allclose(rob.sequence, -math.log(0.5), rtol=0.02)
    assert rob.monotone
    assert rob.robin == pytest.approx(-math.log(0.5), rel=0.02)
    with pytest.raises(ValueError):
        robin_from_field(disk_est, [1.5, 4.0])


def test_lelong_growth(seg_est):
    rob = robin_from_field(seg_est, [8.0, 16.0, 32.0])
    for s in (4.0, 8.0, 16.0):
        assert circle_sup(seg_est.raw, 0j, s) - math.log(s) <= rob.robin + 0.05


def test_ball_siciak():
    assert ball_siciak(0j, 1.0, 2.0) == pytest.approx(math.log(2))
    assert ball_siciak(0.5, 0.25, 0.6) == 0.0
    assert ball_siciak(0j, 0.25, 1j) == pytest.approx(math.log(4))
    # vector argument: Euclidean norm in C^2
    assert ball_siciak([0j, 0j], 1.0, np.array([3.0, 4.0])) == pytest.approx(math.log(5))


def test_product_siciak(seg_est):
    t = 0.3
    comps = [lambda z: ball_siciak(0j, t, z)] * 2
    z1, z2 = np.array([0.1, 2.0, 0.5j]), np.array([0.9, 0.2, 0.7])
    expect = np.maximum(np.log(np.maximum(np.abs(z1) / t, 1)), np.log(np.maximum(np.abs(z2) / t, 1)))
    assert np.allclose(product_siciak(comps, [z1, z2]), expect)
    assert product_siciak(comps, [0.1, 0.2j]) == 0.0
    mixed = [seg_est, lambda z: ball_siciak(0j, 0.5, z)]
    assert product_siciak(mixed, [2.0, 0.0]) == pytest.approx(JOUKOWSKI_2, rel=0.05)
    with pytest.raises(ArityError):
        product_siciak(comps, [0.1])


@settings(max_examples=20)
@given(st.integers(0, 2 ** 31), st.floats(0.3, 3.0))
def test_scaling_covariance(seed, s):
    spec = random_compact_set(np.random.default_rng(seed))
    e1, e2 = set_estimator(spec, 128), set_estimator(spec.scaled(s), 128)
    g1, g2 = transfinite_diameter(e1.leja).gamma, transfinite_diameter(e2.leja).gamma
    assert g2 == pytest.approx(s * g1, rel=0.01)
    z = 1.5 * np.exp(2j * np.pi * np.arange(32) / 32)
    assert np.allclose(e2(s * z), e1(z), rtol=0.05, atol=1e-3)


@settings(max_examples=20)
@given(st.integers(0, 2 ** 31), st.complex_numbers(max_magnitude=3))
def test_translation_invariance(seed, c):
    spec = random_compact_set(np.random.default_rng(seed))
    g1 = transfinite_diameter(set_estimator(spec, 128).leja).gamma
    g2 = transfinite_diameter(set_estimator(spec.translated(c), 128).leja).gamma
    assert g2 == pytest.approx(g1, rel=0.01)
