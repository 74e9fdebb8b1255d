"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Tolerances are the stated ones; the slow ones (full scans at 256 and 512)
are marked ``slow`` but run by default.
"""
import csv
import math
import time

import numpy as np
import pytest

from pshlab import functionals as fn
from pshlab.cli import main
from pshlab.config import ExperimentConfig
from pshlab.corpus import CorpusConfig, empirical_h, leja_recipe, normalized_corpus
from pshlab.envelope import relative_extremal, sample_field
from pshlab.geometry import CompactSetSpec, DomainSpec, build_grid, random_compact_set, rasterize_set
from pshlab.scenarios import run_scenario
from pshlab.siciak import transfinite_diameter

A = DomainSpec.disk(0, 1.0)
OMEGA = DomainSpec.disk(0, 2.0)
LOG2 = math.log(2.0)


def test_concentric_tightness(criterion):
    fn.solve_case.cache_clear()
    t0 = time.perf_counter()
    b = fn.sandwich_bounds(CompactSetSpec.disk(0, 0.25), A, OMEGA, 256)
    elapsed = time.perf_counter() - t0
    r = np.abs(b.grid.nodes)
    sel = b.grid.inside & (r >= 0.25) & (r <= 1.0)
    exact = np.log(r[sel] / 0.25) / LOG2
    err_lo = np.abs(b.lower[sel] - exact).max() / exact.max()
    err_hi = np.abs(b.upper[sel] - exact).max() / exact.max()
    ok = err_lo <= 0.03 and err_hi <= 0.03 and elapsed < 60
    criterion(1, "concentric tightness of both fields", ok,
              f"lower {err_lo:.4f}, upper {err_hi:.4f}, {elapsed:.1f} s")


def test_disk_conjecture_constant(criterion):
    errs = {t: abs(fn.conjecture_quantity(CompactSetSpec.disk(0, t), A, OMEGA, 256).product / LOG2 - 1)
            for t in (0.05, 0.1, 0.25, 0.5, 0.8)}
    worst = max(errs.values())
    criterion(2, "disk product equals log a", worst <= 0.03,
              "worst rel err " + f"{worst:.4f} at t={max(errs, key=errs.get)}")


def test_capacity_oracles(criterion):
    g_disk = transfinite_diameter(fn.set_estimator(CompactSetSpec.disk(0, 0.5), 128).leja).gamma
    g_seg = transfinite_diameter(fn.set_estimator(CompactSetSpec.segment(-1, 1), 200).leja).gamma
    res = run_scenario(ExperimentConfig("capacity", seed=2024, k=256, sets=_random_sets(2024, 20)))
    diffs = [r["field_rel_diff"] for r in res.rows]
    ok = (abs(g_disk / 0.5 - 1) <= 0.005 and abs(g_seg / 0.5 - 1) <= 0.01
          and len(diffs) == 20 and max(diffs) <= 0.03)
    criterion(3, "capacity oracles and Robin agreement", ok,
              f"disk {g_disk:.5f}, segment {g_seg:.5f}, max field diff {max(diffs):.4f} over {len(diffs)} sets")


def _random_sets(seed, count):
    rng = np.random.default_rng(seed)
    return tuple(random_compact_set(rng) for _ in range(count))


@pytest.fixture(scope="module")
def claims_run():
    return run_scenario(ExperimentConfig("claims", seed=2024, params={"count": 20, "probe_regions": 10}))


def test_claims_suite(criterion, claims_run):
    rows = [r for r in claims_run.rows if "check" in r]
    wanted = ("capacity-sup-lower", "capacity-sup-upper", "relative-sup")
    picked = [r for r in rows if r["check"] in wanted]
    by_check = {c: sum(1 for r in picked if r["check"] == c and r["pass"]) for c in wanted}
    tight = []
    for t in (0.1, 0.25, 0.5):
        lower = fn.capacity_sup_check(CompactSetSpec.disk(0, t), rel_tol=0.03)[0]
        tight.append(abs(lower.residual) / abs(lower.rhs))
    ok = all(v == 20 for v in by_check.values()) and max(tight) <= 0.02
    criterion(4, "capacity-sup and relative-sup checks", ok,
              f"passing per check {by_check}, disk residual {max(tight):.4f}")


def test_klimek_bound(criterion, claims_run):
    labels = list(dict.fromkeys(r["set"] for r in claims_run.rows if "check" in r))[:10]
    rows = [r for r in claims_run.rows if r.get("check", "").startswith("klimek") and r["set"] in labels]
    passed = sum(bool(r["pass"]) for r in rows)
    criterion(5, "pointwise bound on probe disks", len(rows) == 100 and passed == 100,
              f"{passed}/{len(rows)} within 5%")


def _nested_pair(seed):
    rng = np.random.default_rng(seed)
    e1 = random_compact_set(rng, reach=0.9)
    c = complex(*rng.uniform(-0.6, 0.6, 2))
    e2 = CompactSetSpec.union([e1, CompactSetSpec.disk(c, rng.uniform(0.05, 0.3))])
    return rng, e1, e2


def _dist_to(spec, z):
    pts = spec.sample_points(2048)
    return np.abs(z[:, None] - pts[None, :]).min(axis=1)


# Leja points for the V and gamma properties; at 256 one pocket between a
# disk and a segment (V about 0.03) still carries a 7% truncation error
K_PROPS = 384


def test_monotonicity_properties(criterion):
    g64 = build_grid(OMEGA, 64)
    small_omega = DomainSpec.disk(0, 1.5)
    g_small = build_grid(small_omega, 64)
    fails = {"u_E": 0, "u_Omega": 0, "V_set": 0, "gamma_set": 0, "scaling": 0, "translation": 0}
    worst_v = 0.0
    for seed in range(100):
        rng, e1, e2 = _nested_pair(seed)
        u1 = relative_extremal(rasterize_set(e1, g64))
        u2 = relative_extremal(rasterize_set(e2, g64))
        fails["u_E"] += not np.all(u1.values >= u2.values - 10 * u1.tol)
        us = relative_extremal(rasterize_set(e1, g_small), small_omega)
        z = g_small.nodes[g_small.inside]
        fails["u_Omega"] += not np.all(us.values[g_small.inside] >= sample_field(u1, z) - 10 * u1.tol)

        est1, est2 = fn.set_estimator(e1, K_PROPS), fn.set_estimator(e2, K_PROPS)
        probes = 1.8 * np.sqrt(rng.random(400)) * np.exp(2j * np.pi * rng.random(400))
        probes = probes[_dist_to(e2, probes) > 0.05]
        v1, v2 = est1(probes), est2(probes)
        rel = float(((v1 - v2) / np.maximum(v2, 1e-12)).min())
        worst_v = min(worst_v, rel)
        fails["V_set"] += rel < -0.05
        g1, g2 = transfinite_diameter(est1.leja).gamma, transfinite_diameter(est2.leja).gamma
        fails["gamma_set"] += g1 > g2 * 1.01

        s = rng.uniform(0.3, 3.0)
        est_s = fn.set_estimator(e1.scaled(s), K_PROPS)
        ring = 1.5 * np.exp(2j * np.pi * np.arange(32) / 32)
        gs = transfinite_diameter(est_s.leja).gamma
        fails["scaling"] += not (abs(gs / (s * g1) - 1) <= 0.01
                                 and np.allclose(est_s(s * ring), est1(ring), rtol=0.05, atol=1e-3))
        shift = complex(*rng.uniform(-3, 3, 2))
        gt = transfinite_diameter(fn.set_estimator(e1.translated(shift), K_PROPS).leja).gamma
        fails["translation"] += abs(gt / g1 - 1) > 0.01
    criterion(6, "monotonicity, scaling and translation on 100 nested pairs", not any(fails.values()),
              f"failures {fails}, worst V ratio {worst_v:.4f}")


def test_sandwich_consistency(criterion):
    rng = np.random.default_rng(7)
    sets = (CompactSetSpec.disk(0, 0.25), CompactSetSpec.segment(-0.5, 0.5),
            *(random_compact_set(rng) for _ in range(4)))
    res = run_scenario(ExperimentConfig("h-bounds", resolution=256, seed=7, sets=sets,
                                        corpus={"count": 64}))
    # cumulative h over growing prefixes of one corpus never decreases
    spec = CompactSetSpec.disk(0, 0.25)
    case = fn.solve_case(spec, OMEGA, 256)
    funcs = normalized_corpus(CorpusConfig(seed=7, param=2.0, E=spec, count=64),
                              extra=[leja_recipe(case.est)])
    probes = np.linspace(0.3, 1.0, 24) * np.exp(1j * np.linspace(0, 6, 24))
    hs = [empirical_h(funcs[:m], case.mask, probes) for m in (8, 16, 32, len(funcs))]
    monotone = all(np.all(b >= a - 1e-12) for a, b in zip(hs, hs[1:]))
    ok = not res.failures and all(r.get("pass") for r in res.rows) and monotone
    worst = max(max(r["h_minus_upper"], r["lower_minus_h"]) for r in res.rows)
    criterion(7, "sampled h between the fields, monotone in corpus size", ok,
              f"{len(res.rows)} sets, worst excursion {worst:.4f}, monotone {monotone}")


def test_bernstein_campaign(criterion):
    res = run_scenario(ExperimentConfig("bernstein"))
    s = res.summary
    ok = not res.failures and s["stable"] and math.isfinite(s["c_hat_large"]) and len(res.rows) == 6
    criterion(8, "doubling constant finite and stable", ok,
              f"c_hat {s['c_hat_small']:.4g} -> {s['c_hat_large']:.4g}, change {s['rel_change']:.4f}, "
              f"random members alone {s['c_hat_random']:.4g}")


def test_brudnyi_campaign(criterion):
    res = run_scenario(ExperimentConfig("brudnyi"))
    s = res.summary
    ok = (s["violations"] == 0 and s["held_out_functions"] == 32 and s["held_out_patterns"] == 16
          and s["d"] == 4)
    criterion(9, "held-out remez-type inequality", ok,
              f"c_hat {s['c_hat']:.4g}, violations {s['violations']}, max ratio {s['max_held_ratio']:.4g}")


@pytest.mark.slow
def test_conjecture_scan_stability(criterion):
    res = run_scenario(ExperimentConfig("conjecture-scan", resolution=256, refine=512, seed=0,
                                        params={"count": 200}))
    s = res.summary
    fn.solve_case.cache_clear()
    argmin = CompactSetSpec.from_dict(s["argmin"])
    again = fn.conjecture_quantity(argmin, A, OMEGA, 256).product
    ok = (s["solved"] == 200 and s["min_product"] > 0 and abs(s["min_product_rel_change"]) < 0.05
          and again == pytest.approx(s["min_product"], rel=1e-9))
    criterion(10, "scan minimum positive and resolution-stable", ok,
              f"min {s['min_product']:.5g} ({s['argmin_label']}), change {s['min_product_rel_change']:.4f}, "
              f"re-run {again:.5g}")


def test_product_toric_cross_check(criterion):
    res = run_scenario(ExperimentConfig("product-case"))
    row = res.rows[0]
    odd = fn.product_compose([CompactSetSpec.disk(0, 0.2), CompactSetSpec.disk(0, 0.5)],
                             DomainSpec.polydisk([2.0, 2.0]), DomainSpec.ball(1.0, 2), 64)
    ok = bool(row["toric_pass"]) and bool(row["case_gamma_exact"]) and odd.gamma == 0.2
    criterion(11, "toric solver and polydisk capacity", ok,
              f"toric max err {row['toric_max_err']:.4g}, gamma {odd.gamma}")


def test_reproducible_reports(criterion, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text('scenario = "claims"\nresolution = 64\nseed = 11\n[params]\ncount = 3\nprobe_regions = 3\n')
    outs = []
    for i in range(2):
        fn.solve_case.cache_clear()
        prefix = tmp_path / f"run{i}"
        code = main(["run", "--config", str(cfg), "--out", str(prefix)])
        with open(f"{prefix}.csv") as fh:
            outs.append((code, list(csv.reader(fh))))
    ok = outs[0][0] in (0, 1) and outs[0] == outs[1] and len(outs[0][1]) > 1
    criterion(12, "identical CSV content across two runs", ok, f"{len(outs[0][1]) - 1} rows compared")
