"""End-to-end acceptance checks, one test per criterion."""

import math
import time

import numpy as np
import pytest

from cgeur import bounds, coarsegrain as cg, majorization as mj, prolate

from oracles import bin_masses


def test_crossing_point(criterion):
    t0 = time.perf_counter()
    g = bounds.find_crossing("MAJ:4", "B", 1, 4, (3, 6), 1e-10)
    dt = time.perf_counter() - t0
    ok = abs(g - 4.8231) <= 5e-3 and dt < 10
    assert criterion(1, "MAJ(n=4) meets B_1", ok, f"gamma*={g:.7f}, {dt:.2f}s")


def test_ratio_at_seven(criterion):
    t0 = time.perf_counter()
    r = bounds.bound_majorization(7, 1, 3) / bounds.bound_B(7, 1)
    dt = time.perf_counter() - t0
    ok = abs(r - 1.609) <= 5e-3 and dt < 1
    assert criterion(2, "MAJ_3(7)/B_1(7)", ok, f"ratio={r:.6f}, {dt:.3f}s")


def test_zero_of_b(criterion):
    v = bounds.bound_B(math.e * math.pi, 1)
    assert criterion(3, "B_1 vanishes at e*pi", abs(v) <= 1e-10, f"B={v:.2e}")


def test_prolate_cross_validation(criterion):
    t0 = time.perf_counter()
    cs = (0.1, 0.5, 1, 2, 4, 8, 16)
    cross = max(abs(prolate.lambda0(c).lambda0 - prolate.lambda0_nystrom(c, 512).lambda0) for c in cs)
    self_conv = max(
        abs(prolate.lambda0_nystrom(c, 256).lambda0 - prolate.lambda0_nystrom(c, 512).lambda0) for c in cs
    )
    dt = time.perf_counter() - t0
    ok = cross <= 1e-9 and self_conv <= 1e-10 and dt < 30
    assert criterion(4, "series vs Nystrom", ok, f"max diff {cross:.1e}, 256 vs 512 {self_conv:.1e}, {dt:.1f}s")


def test_asymptotics(criterion):
    gs = np.linspace(25, 40, 31)
    r = np.array([bounds.bound_R(g) / (2 * math.sqrt(math.pi * g) * math.exp(-g / 2)) for g in gs])
    m = np.array([bounds.bound_majorization(g, 1, 3) / (math.sqrt(math.pi) / 2 * g**1.5 * math.exp(-g / 2)) for g in gs])

    def good(x):
        return bool(np.all((x >= 0.7) & (x <= 1.3)) and np.all(np.diff(np.abs(x - 1)) < 0))

    ok = good(r) and good(m)
    detail = f"R ratio {r[0]:.3f}->{r[-1]:.3f}, MAJ_3 ratio {m[0]:.3f}->{m[-1]:.3f}"
    assert criterion(5, "large-gamma asymptotics", ok, detail)


def test_small_gamma_dominance(criterion):
    gs = np.concatenate([np.geomspace(1e-4, 0.1, 40), np.linspace(0.1, 4, 200)])
    worst = min(bounds.bound_B(g, 1) - bounds.bound_majorization(g, 1, n) for g in gs for n in (2, 3, 4))
    assert criterion(6, "B_1 above MAJ_n for gamma <= 4", worst > 0, f"min B - MAJ = {worst:.4f}")


@pytest.mark.xfail(strict=True, reason="|MAJ_3 - MAJ_4| is 3.2e-4 at gamma=6 and falls below 1e-6 only near 9.21")
def test_n_insensitivity(criterion):
    gs = np.linspace(6, 40, 341)
    gap = np.array([abs(bounds.bound_majorization(g, 1, 3) - bounds.bound_majorization(g, 1, 4)) for g in gs])
    detail = f"max gap {gap.max():.2e} at gamma={gs[gap.argmax()]:.2f}"
    assert criterion(7, "MAJ_3 = MAJ_4 for gamma >= 6", bool(gap.max() < 1e-6), detail)


def test_property_suite(criterion):
    t0 = time.perf_counter()
    states = cg.random_states(200, seed=42, levels=10)
    failures = 0
    checks = 0
    min_margin = math.inf
    for dx, dp in ((1, 1), (2, 2), (0.5, 4)):
        for s in states:
            for alpha in (0.5, 1.0):
                rep = cg.verify_eur(s, dx, dp, alpha, 6)
                min_margin = min(min_margin, rep.margin)
                failures += not rep.passed
            failures += not cg.verify_direct_sum_majorization(s, dx, dp, 6)
            checks += 3
    dt = time.perf_counter() - t0
    ok = failures == 0 and dt < 300
    detail = f"{checks} checks, {failures} failures, min margin {min_margin:.3e}, {dt:.1f}s"
    assert criterion(8, "random-state property suite", ok, detail)


def test_chain(criterion):
    gs = (0.5, 2, 4.9279, 7, 12)
    results = [mj.check_chain(g, 8) for g in gs]
    assert criterion(9, "majorization chain up to n=8", all(results), f"{sum(results)}/{len(gs)} gammas")


def test_small_gamma_growth(criterion):
    vals = [bounds.bound_majorization(g, 1, None) + 0.5 * math.log(g) for g in (1e-4, 1e-3, 1e-2)]
    spread = max(vals) - min(vals)
    assert criterion(10, "MAJ_inf + ln(gamma)/2 stays flat", spread < 0.3, f"values {', '.join(f'{v:.3f}' for v in vals)}")


def test_coarse_graining_oracle(criterion):
    exact = cg.StateSpec.gaussian(1.0)
    sampled = cg.sample_state(exact)
    ks = range(-8, 9)
    closed = np.array([cg.position_probs(exact, 1.0).prob(k) for k in ks])
    fft_q = np.array([cg.position_probs(sampled, 1.0).prob(k) for k in ks])
    fft_p = np.array([cg.momentum_probs(sampled, 1.0).prob(k) for k in ks])
    closed_p = np.array([cg.momentum_probs(exact, 1.0).prob(k) for k in ks])
    quad = bin_masses(lambda x: math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi), 1.0, ks)
    err = max(np.abs(closed - fft_q).max(), np.abs(closed - quad).max(), np.abs(closed_p - fft_p).max())
    assert criterion(11, "Gaussian closed form vs FFT and quadrature", err <= 1e-8, f"max diff {err:.1e}")
