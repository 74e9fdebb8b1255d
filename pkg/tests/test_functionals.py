import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pshlab.errors import NeedsScanError, SandwichUnavailableError
from pshlab.functionals import (InequalityReport, alexander_taylor_check, capacity_bracket_check,
                                capacity_pair, capacity_sup_check, conjecture_quantity,
                                fit_alexander_taylor, klimek_check, product_compose,
                                relative_sup_check, sandwich_bounds, small_ball_condition,
                                submultiplicativity_check, tau)
from pshlab.geometry import CompactSetSpec, DomainSpec, random_compact_set

A = DomainSpec.disk(0, 1.0)
OMEGA = DomainSpec.disk(0, 2.0)
LOG2 = math.log(2)


def test_report_semantics():
    ok = InequalityReport.build("x", 1.0, 1.02, 0.03)
    assert ok.passed and ok.residual == pytest.approx(0.02) and ok.tol == pytest.approx(0.0306)
    edge = InequalityReport.build("x", 1.03, 1.0, 0.03)
    assert edge.passed
    assert not InequalityReport.build("x", 1.05, 1.0, 0.03).passed
    skip = InequalityReport.skipped("x", "why")
    assert skip.passed is None and skip.as_row()["note"] == "why"


def test_concentric_sandwich_is_tight():
    b = sandwich_bounds(CompactSetSpec.disk(0, 0.25), A, OMEGA, 128)
    r = np.abs(b.grid.nodes)
    sel = b.grid.inside & (r >= 0.25) & (r <= 1.0)
    exact = np.log(r[sel] / 0.25) / LOG2
    for field in (b.lower, b.upper):
        assert np.abs(field[sel] - exact).max() <= 0.03 * exact.max()
    assert b.sup_Omega_V_A == pytest.approx(LOG2)
    assert 1 / abs(b.sup_A_u) * (1 + b.sup_A_u) * 0 + (b.upper[sel][np.argmax(r[sel])]) == pytest.approx(2, rel=0.03)
    assert b.sandwich_holds()


@settings(max_examples=6)
@given(st.integers(0, 2 ** 31))
def test_sandwich_order_random_sets(seed):
    E = random_compact_set(np.random.default_rng(seed))
    b = sandwich_bounds(E, A, OMEGA, 96)
    inside = b.grid.inside
    assert b.lower[inside].min() >= 0
    assert b.upper[inside].min() >= -1e-12
    assert b.sandwich_holds()


@pytest.mark.parametrize("t", [0.1, 0.5])
def test_conjecture_disks(t):
    rec = conjecture_quantity(CompactSetSpec.disk(0, t), A, OMEGA, 128)
    assert rec.product == pytest.approx(LOG2, rel=0.03)
    assert rec.gamma == pytest.approx(t, rel=0.01)


def test_conjecture_segment_stable():
    seg = CompactSetSpec.segment(-0.5, 0.5)
    p1 = conjecture_quantity(seg, A, OMEGA, 128).product
    p2 = conjecture_quantity(seg, A, OMEGA, 256).product
    assert p1 > 0 and abs(p2 / p1 - 1) < 0.05


def test_capacity_sup_disk_tight():
    lo, hi = capacity_sup_check(CompactSetSpec.disk(0, 0.5))
    assert lo.passed and hi.passed
    assert abs(lo.residual) <= 0.02 * LOG2
    assert hi.rhs == pytest.approx(2 * math.e ** 2 * math.log(1 / 0.5), rel=0.01)


def test_capacity_sup_segment_and_skip():
    lo, hi = capacity_sup_check(CompactSetSpec.segment(-0.9, 0.9))
    assert lo.passed and hi.passed and hi.residual > 5
    skipped = capacity_sup_check(CompactSetSpec.disk(0, 0.5), gamma=1.2)
    assert all(r.passed is None for r in skipped)


@pytest.mark.parametrize("t", [0.1, 0.4])
def test_relative_sup_concentric(t):
    rep = relative_sup_check(CompactSetSpec.disk(0, t), OMEGA, A, 128)
    exact = math.log(1 / t) / math.log(2 / t)
    assert rep.lhs == pytest.approx(exact, rel=0.02)
    assert rep.rhs == pytest.approx(2 * exact, rel=0.02)
    assert rep.passed


def test_klimek_concentric_chain():
    t = 0.2
    E = CompactSetSpec.disk(0, t)
    probes = [DomainSpec.disk(0, s * t) for s in (1.0, 2.0, 4.0)]
    reps = klimek_check(E, OMEGA, probes, 128)
    assert reps[0].lhs == pytest.approx(0.0, abs=1e-12) and reps[0].rhs >= 0
    for s, rep in zip((2.0, 4.0), reps[1:]):
        exact = math.log(s) / math.log(2 / t)
        assert rep.lhs == pytest.approx(exact, rel=0.05)
        assert rep.rhs == pytest.approx(exact, rel=0.05)
        assert rep.passed


def test_alexander_taylor_disks():
    pairs = [capacity_pair(CompactSetSpec.disk(0, t), OMEGA, A, 96) for t in (0.05, 0.25, 0.8)]
    for t, p in zip((0.05, 0.25, 0.8), pairs):
        assert p.sup_A_V == pytest.approx(math.log(1 / t), rel=0.02)
        assert p.cap == pytest.approx(2 * math.pi / math.log(2 / t), rel=0.05)
    c = fit_alexander_taylor(pairs)
    assert 0 < c[0] <= c[1] < 2 * math.pi
    for t in (0.1, 0.5):
        assert all(r.passed for r in alexander_taylor_check(CompactSetSpec.disk(0, t), OMEGA, A, c, 96, 0.05))


def test_capacity_bracket():
    with pytest.raises(NeedsScanError):
        capacity_bracket_check(CompactSetSpec.disk(0, 0.3))
    reps = capacity_bracket_check(CompactSetSpec.disk(0, 0.3), 2.0, 128, c_conj=LOG2)
    assert all(r.passed for r in reps)
    assert all("conditional" in r.note for r in reps)


def test_small_ball():
    assert tau(1) == pytest.approx(0.98308, abs=1e-5)
    res = small_ball_condition(CompactSetSpec.disk(0, 0.01), 0j, 1, 0.01)
    assert res.covered and res.radius == pytest.approx(0.01081, abs=1e-5)
    pair = CompactSetSpec.union([CompactSetSpec.disk(-0.5, 0.01), CompactSetSpec.disk(0.5, 0.01)])
    assert not small_ball_condition(pair, 0j, 1, 0.1).covered
    margins = [small_ball_condition(CompactSetSpec.disk(0, r), 0j, 1, r).margin for r in (0.01, 0.005, 0.001)]
    assert all(m > 0 for m in margins)


@pytest.mark.parametrize("E", [CompactSetSpec.disk(0.3, 0.1), CompactSetSpec.segment(-0.4j, 0.6)])
def test_submultiplicativity(E):
    rep = submultiplicativity_check(E, 2.0, 96)
    assert rep.passed


def test_product_records():
    rec = product_compose([CompactSetSpec.disk(0, 0.3)] * 2, DomainSpec.polydisk([2, 2]), DomainSpec.ball(1.0, 2))
    assert rec.product == pytest.approx(LOG2, rel=1e-9)
    mixed = product_compose([CompactSetSpec.disk(0, 0.2), CompactSetSpec.disk(0, 0.5)],
                            DomainSpec.polydisk([2, 2]), DomainSpec.polydisk([1, 1]))
    assert mixed.gamma == 0.2 and mixed.product > 0
    with pytest.raises(SandwichUnavailableError):
        product_compose([CompactSetSpec.disk(0, 0.3)] * 2, DomainSpec.ball(1.2, 2), DomainSpec.ball(1.0, 2))


def test_product_with_lattice_factor():
    rec = product_compose([CompactSetSpec.segment(-0.5, 0.5), CompactSetSpec.disk(0, 0.3)],
                          DomainSpec.ball(3.0, 2), DomainSpec.ball(1.0, 2), 96)
    assert rec.product > 0 and not rec.extra["polydisk_capacity"]
    assert rec.extra["B_radii"] == pytest.approx((3 / math.sqrt(2),) * 2)
