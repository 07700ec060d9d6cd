import math

import numpy as np
import pytest

import creditcycles as cc
from creditcycles.dynamics import BAD, GOOD, NONE, apply_shock


def _solve_uniform(spec):
    f = cc.WealthShares.uniform(spec.grid)
    return f, cc.solve_equilibrium(f, spec)


# ------------------------------------------------------------------ apply_shock

def test_reference_growth_factors(rn_spec, sqrt_half_revenue):
    f, eq = _solve_uniform(rn_spec)
    f_good, growth_good = apply_shock(f, eq, GOOD, sqrt_half_revenue)
    assert growth_good == pytest.approx(1.2141, abs=5e-4)
    assert growth_good == pytest.approx((1 - eq.b) + float(sqrt_half_revenue.h(eq.b)), abs=1e-12)
    f_bad, growth_bad = apply_shock(f, eq, BAD, sqrt_half_revenue)
    assert growth_bad == pytest.approx(0.7624, abs=5e-4)
    assert growth_bad == pytest.approx((1 - eq.b) + float(sqrt_half_revenue.l(eq.b)), abs=1e-12)


def test_optimist_share_after_shocks(rn_spec, sqrt_half_revenue, grid101):
    # independent arithmetic: invested mass omega earns 1/p (good) or
    # (1/p) * l/q (bad) per unit, everyone else holds cash
    f, eq = _solve_uniform(rn_spec)
    omega = 48 / 101
    inv_p = 1.0 / eq.p
    recov = float(sqrt_half_revenue.l(eq.b)) / eq.q

    f_good, growth_good = apply_shock(f, eq, GOOD, sqrt_half_revenue)
    share_good = 1.0 - f_good.cdf(0.52)
    assert share_good == pytest.approx(omega * inv_p / growth_good, abs=1e-12)
    assert share_good == pytest.approx(0.5678, abs=1e-4)
    assert share_good > omega  # wealth moved toward the lenders

    f_bad, growth_bad = apply_shock(f, eq, BAD, sqrt_half_revenue)
    share_bad = 1.0 - f_bad.cdf(0.52)
    assert share_bad == pytest.approx(omega * inv_p * recov / growth_bad, abs=1e-12)
    assert share_bad == pytest.approx(0.3117, abs=1e-4)
    assert share_bad < omega


def test_no_exposure_means_no_change(grid101, sqrt_half_revenue):
    f = cc.WealthShares.uniform(grid101)
    eq = cc.Equilibrium(b=0.3, q=float(sqrt_half_revenue.h(0.3)),
                        p=0.3 / float(sqrt_half_revenue.h(0.3)),
                        sigmas=np.zeros(grid101.n), marginal_index=None,
                        degenerate=False)
    f2, growth = apply_shock(f, eq, BAD, sqrt_half_revenue)
    assert growth == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(f2.shares, f.shares, atol=1e-15)


def test_full_concentration_at_top(grid101, rn_spec, sqrt_half_revenue):
    f = cc.WealthShares.point_mass(grid101, 1.0)
    eq = cc.solve_equilibrium(f, rn_spec)
    f2, growth = apply_shock(f, eq, GOOD, sqrt_half_revenue)
    # h(1) = 1: full investment returns exactly total wealth
    assert growth == pytest.approx(1.0, abs=1e-12)
    assert np.array_equal(f2.shares, f.shares)


def test_apply_shock_rejects_degenerate(grid101, rn_spec, sqrt_half_revenue):
    eq = cc.solve_equilibrium(cc.WealthShares.point_mass(grid101, 0.0), rn_spec)
    with pytest.raises(ValueError):
        apply_shock(cc.WealthShares.uniform(grid101), eq, GOOD, sqrt_half_revenue)


def test_fosd_shift(rn_spec, sqrt_half_revenue):
    f, eq = _solve_uniform(rn_spec)
    f_good, _ = apply_shock(f, eq, GOOD, sqrt_half_revenue)
    f_bad, _ = apply_shock(f, eq, BAD, sqrt_half_revenue)
    assert np.all(f_good.cdf_values() <= f.cdf_values() + 1e-12)
    assert np.all(f_bad.cdf_values() >= f.cdf_values() - 1e-12)


# ------------------------------------------------------------- path dependence

def test_mixed_shock_orderings_cross(rn_spec, sqrt_half_revenue):
    """After good-bad versus bad-good, neither distribution dominates."""
    f0, eq0 = _solve_uniform(rn_spec)
    paths = {}
    for s1 in (GOOD, BAD):
        f1, _ = apply_shock(f0, eq0, s1, sqrt_half_revenue)
        eq1 = cc.solve_equilibrium(f1, rn_spec)
        for s2 in (GOOD, BAD):
            f2, _ = apply_shock(f1, eq1, s2, sqrt_half_revenue)
            paths[s1 + s2] = f2.cdf_values()
    diff = paths[GOOD + BAD] - paths[BAD + GOOD]
    assert np.any(diff > 1e-12) and np.any(diff < -1e-12)
    for mixed in (GOOD + BAD, BAD + GOOD):
        assert np.all(paths[GOOD + GOOD] <= paths[mixed] + 1e-12)
        assert np.all(paths[mixed] <= paths[BAD + BAD] + 1e-12)


# ------------------------------------------------------------------------ step

def test_step_matches_manual_composition(log_spec, sqrt_half_revenue):
    f = cc.WealthShares.uniform(log_spec.grid)
    rng = np.random.Generator(np.random.PCG64(42))
    f_next, rec = cc.step(f, log_spec, rng, t=7)

    # replay the same draw by hand
    u = np.random.Generator(np.random.PCG64(42)).random()
    eq = cc.solve_equilibrium(f, log_spec)
    pi = cc.eval_shock_prob(log_spec.shock_prob, eq.b)
    state = GOOD if u < pi else BAD
    f_manual, growth = apply_shock(f, eq, state, sqrt_half_revenue)

    assert rec.t == 7
    assert rec.state == state
    assert rec.b == pytest.approx(eq.b, abs=1e-15)
    assert rec.pi == pytest.approx(pi, abs=1e-15)
    assert rec.growth == pytest.approx(growth, abs=1e-12)
    assert np.allclose(f_next.shares, f_manual.shares, atol=1e-12)
    assert math.isnan(rec.marginal_theta)  # not a risk-neutral period


def test_step_consumes_one_draw_even_when_degenerate(grid101, sqrt_half_revenue):
    spec = cc.EconomySpec(grid=grid101, revenue=sqrt_half_revenue, gamma=1.0,
                          shock_prob=cc.ConstantShockProb(0.8))
    f = cc.WealthShares.point_mass(grid101, 0.0)
    rng = np.random.Generator(np.random.PCG64(1))
    f_next, rec = cc.step(f, spec, rng, t=0)
    assert rec.state == NONE
    assert rec.b == 0.0 and rec.growth == 1.0 and rec.realized_y == 0.0
    assert math.isnan(rec.p) and math.isnan(rec.pi)
    assert np.array_equal(f_next.shares, f.shares)
    # one variate was consumed
    fresh = np.random.Generator(np.random.PCG64(1))
    fresh.random()
    assert rng.random() == fresh.random()


def test_step_marginal_theta_risk_neutral(rn_spec):
    f = cc.WealthShares.uniform(rn_spec.grid)
    _, rec = cc.step(f, rn_spec, np.random.Generator(np.random.PCG64(0)))
    assert rec.marginal_theta == 0.53


# -------------------------------------------------------------------- simulate

def test_simulate_validates_arguments(log_spec):
    with pytest.raises(ValueError):
        cc.simulate(log_spec, T=0, seed=1)
    with pytest.raises(ValueError):
        cc.simulate(log_spec, T=10, seed=1, thin=0)


def test_simulate_equals_repeated_steps(log_spec):
    T = 37
    run = cc.simulate(log_spec, T=T, seed=9, thin=5)
    rng = np.random.Generator(np.random.PCG64(9))
    f = cc.WealthShares.uniform(log_spec.grid)
    for t in range(T):
        f, rec = cc.step(f, log_spec, rng, t=t)
        got = run.periods[t]
        assert (got.b, got.p, got.q, got.pi, got.state) == (rec.b, rec.p, rec.q, rec.pi, rec.state)
        assert (got.growth, got.realized_y, got.mean_belief) == (rec.growth, rec.realized_y, rec.mean_belief)
    assert np.array_equal(run.final.shares, f.shares)


def _same_scalar(x, y):
    if isinstance(x, float) and math.isnan(x):
        return isinstance(y, float) and math.isnan(y)
    return x == y


def test_simulate_deterministic_replay(log_spec):
    a = cc.simulate(log_spec, T=200, seed=123)
    b = cc.simulate(log_spec, T=200, seed=123)
    for ra, rb in zip(a.periods, b.periods):
        for field in ("t", "b", "p", "q", "pi", "state", "growth",
                      "realized_y", "mean_belief", "marginal_theta"):
            assert _same_scalar(getattr(ra, field), getattr(rb, field)), field
        if ra.f_after is not None:
            assert np.array_equal(ra.f_after.shares, rb.f_after.shares)
    assert np.array_equal(a.final.shares, b.final.shares)


def test_growth_identity_and_sign(log_spec, sqrt_half_revenue):
    run = cc.simulate(log_spec, T=300, seed=5)
    for rec in run.periods:
        assert rec.growth == pytest.approx((1.0 - rec.b) + rec.realized_y, abs=1e-12)
        if rec.state == GOOD and 0.0 < rec.b < 1.0:
            assert rec.growth > 1.0
        elif rec.state == BAD:
            assert rec.growth < 1.0


def test_fosd_along_sample_path(log_spec):
    run = cc.simulate(log_spec, T=120, seed=31, thin=1)
    prev = None
    for rec in run.periods:
        cur = rec.f_after.cdf_values()
        if prev is not None:
            if rec.state == GOOD:
                assert np.all(cur <= prev + 1e-12)
            elif rec.state == BAD:
                assert np.all(cur >= prev - 1e-12)
        prev = cur


def test_simplex_preserved_every_period(log_spec):
    run = cc.simulate(log_spec, T=200, seed=77, thin=1)
    for rec in run.periods:
        s = rec.f_after.shares
        assert abs(float(s.sum()) - 1.0) <= 1e-12
        assert np.all(s >= 0.0)


def test_support_never_grows_without_noise(grid101, sqrt_half_revenue):
    spec = cc.EconomySpec(grid=grid101, revenue=sqrt_half_revenue, gamma=1.0,
                          shock_prob=cc.ConstantShockProb(0.6), noise_eps=0.0)
    w = np.zeros(grid101.n)
    for theta in (0.2, 0.5, 0.9):
        w[grid101.index_of(theta)] = 1 / 3
    run = cc.simulate(spec, T=150, seed=2, thin=1,
                      initial=cc.WealthShares(grid101, w))
    alive = set(np.flatnonzero(w).tolist())
    for rec in run.periods:
        cur = set(rec.f_after.support().tolist())
        assert cur <= alive
        alive = cur


def test_thinning_keeps_every_kth_and_final(log_spec):
    run = cc.simulate(log_spec, T=25, seed=0, thin=10)
    kept = [rec.t for rec in run.periods if rec.f_after is not None]
    assert kept == [9, 19, 24]
    assert np.array_equal(run.periods[-1].f_after.shares, run.final.shares)


def test_noise_mixing_resurrects_types(grid101, sqrt_half_revenue):
    spec = cc.EconomySpec(grid=grid101, revenue=sqrt_half_revenue, gamma=1.0,
                          shock_prob=cc.ConstantShockProb(0.6), noise_eps=0.01)
    run = cc.simulate(spec, T=5, seed=4, thin=1,
                      initial=cc.WealthShares.point_mass(grid101, 0.8))
    assert run.periods[0].f_after.support().size == grid101.n


def test_mix_order_flag_changes_path(grid101, sqrt_half_revenue):
    spec = cc.EconomySpec(grid=grid101, revenue=sqrt_half_revenue, gamma=1.0,
                          shock_prob=cc.ConstantShockProb(0.6), noise_eps=0.05)
    init = cc.WealthShares.point_mass(grid101, 0.8)
    before = cc.simulate(spec, T=10, seed=6, initial=init, mix_before=True)
    after = cc.simulate(spec, T=10, seed=6, initial=init, mix_before=False)
    # mixing first means period 0 already lends on the perturbed distribution
    assert before.periods[0].b != after.periods[0].b
    # without noise the flag is irrelevant
    clean = cc.EconomySpec(grid=grid101, revenue=sqrt_half_revenue, gamma=1.0,
                           shock_prob=cc.ConstantShockProb(0.6), noise_eps=0.0)
    x = cc.simulate(clean, T=10, seed=6, initial=init, mix_before=True)
    y = cc.simulate(clean, T=10, seed=6, initial=init, mix_before=False)
    assert x.periods[-1].b == y.periods[-1].b


# ----------------------------------------------------------------------- sweep

def test_sweep_single_cell_matches_simulate(grid101, sqrt_half_revenue):
    base = cc.EconomySpec(grid=grid101, revenue=sqrt_half_revenue, gamma=0.0,
                          shock_prob=cc.ConstantShockProb(0.5))
    cells = cc.sweep(base, gammas=[1.0], pi_stars=[0.7], T=150, seed=11)
    assert len(cells) == 1
    spec = cc.EconomySpec(grid=grid101, revenue=sqrt_half_revenue, gamma=1.0,
                          shock_prob=cc.ConstantShockProb(0.7))
    direct = cc.simulate(spec, T=150, seed=11)
    assert cells[0].mean_belief == direct.final.mean_belief()
    assert cells[0].gamma == 1.0 and cells[0].pi_star == 0.7


def test_single_period_run_records_reference_equilibrium(rn_spec):
    run = cc.simulate(rn_spec, T=1, seed=0)
    rec = run.periods[0]
    assert rec.b == pytest.approx(0.4752, abs=5e-4)
    assert rec.p == pytest.approx(0.6894, abs=5e-4)
    assert rec.marginal_theta == 0.53


def test_sweep_process_pool_matches_serial(grid101, sqrt_half_revenue):
    base = cc.EconomySpec(grid=grid101, revenue=sqrt_half_revenue, gamma=0.0,
                          shock_prob=cc.ConstantShockProb(0.5))
    serial = cc.sweep(base, gammas=[0.0, 1.0], pi_stars=[0.6], T=60, seed=5, jobs=1)
    pooled = cc.sweep(base, gammas=[0.0, 1.0], pi_stars=[0.6], T=60, seed=5, jobs=2)
    assert [(c.gamma, c.pi_star, c.mean_belief) for c in serial] == \
           [(c.gamma, c.pi_star, c.mean_belief) for c in pooled]


def test_sweep_grid_layout(grid101, sqrt_half_revenue):
    base = cc.EconomySpec(grid=grid101, revenue=sqrt_half_revenue, gamma=0.0,
                          shock_prob=cc.ConstantShockProb(0.5))
    cells = cc.sweep(base, gammas=[0.0, 1.0], pi_stars=[0.4, 0.6], T=40, seed=3)
    assert [(c.gamma, c.pi_star) for c in cells] == [
        (0.0, 0.4), (0.0, 0.6), (1.0, 0.4), (1.0, 0.6)]
