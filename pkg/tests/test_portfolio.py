import math

import numpy as np
import pytest

import creditcycles as cc

B_REF = 48 / 101  # reference borrowing level: uniform wealth, h = sqrt, l = b/2


@pytest.fixture(scope="module")
def ref_terms(sqrt_half_revenue):
    return cc.MarketTerms.from_borrowing(B_REF, sqrt_half_revenue)


@pytest.fixture(scope="module")
def ref_gl(ref_terms):
    return cc.gain_loss(ref_terms)


# ---------------------------------------------------------------- MarketTerms

def test_terms_identities(ref_terms):
    assert ref_terms.q == ref_terms.h_val
    assert ref_terms.p * ref_terms.q == pytest.approx(ref_terms.b, abs=1e-10)
    assert ref_terms.p == pytest.approx(0.6894, abs=5e-4)


def test_terms_reject_inconsistent_values(sqrt_half_revenue):
    with pytest.raises(ValueError):
        cc.MarketTerms(b=0.5, p=0.9, q=0.8, l_val=0.25, h_val=0.8)  # p*q != b
    with pytest.raises(ValueError):
        cc.MarketTerms.from_borrowing(0.0, sqrt_half_revenue)


# ------------------------------------------------------------------ gain_loss

def test_gain_matches_bond_count(ref_gl):
    # 1/p bonds per unit wealth invested, so the good-state gain is 1/p - 1
    assert 1.0 + ref_gl.H == pytest.approx(1.4506, abs=5e-4)
    assert ref_gl.H == pytest.approx(0.4506, abs=5e-4)


def test_loss_is_half_with_linear_half_recovery(ref_gl):
    # with l = b/2 the bad state returns exactly half of invested wealth
    assert ref_gl.L == pytest.approx(0.5, abs=1e-12)


def test_gain_loss_rejects_boundaries(sqrt_half_revenue):
    full = cc.MarketTerms(b=1.0, p=1.0, q=1.0, l_val=0.5, h_val=1.0)
    with pytest.raises(ValueError):
        cc.gain_loss(full)  # H = 0, no spread between bonds and cash


# ----------------------------------------------------------- share_thresholds

def test_thresholds_reference_values(ref_gl):
    tmin, tmax = cc.share_thresholds(ref_gl)
    assert tmin == pytest.approx(0.5260, abs=5e-4)
    assert tmax == pytest.approx(0.7630, abs=5e-4)


def test_thresholds_ordering_random():
    rng = np.random.default_rng(5)
    for _ in range(200):
        gl = cc.GainLoss(H=float(rng.uniform(0.01, 5.0)), L=float(rng.uniform(0.01, 0.99)))
        tmin, tmax = cc.share_thresholds(gl)
        assert 0.0 < tmin < tmax < 1.0


def test_thresholds_limits():
    tmin, _ = cc.share_thresholds(cc.GainLoss(H=0.7, L=0.7))
    assert tmin == pytest.approx(0.5, abs=1e-15)
    tmin, tmax = cc.share_thresholds(cc.GainLoss(H=0.7, L=1e-9))
    assert tmin < 1e-8 and tmax < 1e-8


# -------------------------------------------------------------- optimal_share

def test_log_utility_cutoffs(ref_gl):
    tmin, tmax = cc.share_thresholds(ref_gl)
    assert cc.optimal_share(tmin - 1e-9, 1.0, ref_gl) == 0.0
    assert cc.optimal_share(tmax + 1e-9, 1.0, ref_gl) == 1.0
    assert cc.optimal_share(0.3, 1.0, ref_gl) == 0.0
    assert cc.optimal_share(0.9, 1.0, ref_gl) == 1.0


def test_log_utility_interior_value(ref_gl):
    # sigma = (theta*H - (1-theta)*L) / (H*L) at theta = 0.65
    H, L = ref_gl.H, ref_gl.L
    expected = (0.65 * H - 0.35 * L) / (H * L)
    got = cc.optimal_share(0.65, 1.0, ref_gl)
    assert got == pytest.approx(expected, abs=1e-12)
    assert got == pytest.approx(0.5231, abs=5e-4)


def test_general_form_reduces_to_log_solution():
    rng = np.random.default_rng(9)
    for _ in range(300):
        gl = cc.GainLoss(H=float(rng.uniform(0.05, 3.0)), L=float(rng.uniform(0.05, 0.95)))
        theta = float(rng.uniform(0.0, 1.0))
        direct = min(max((theta * gl.H - (1 - theta) * gl.L) / (gl.H * gl.L), 0.0), 1.0)
        assert cc.optimal_share(theta, 1.0, gl) == pytest.approx(direct, abs=1e-12)


def test_risk_neutral_bang_bang(ref_gl):
    tmin, _ = cc.share_thresholds(ref_gl)
    assert cc.optimal_share(tmin + 1e-6, 0.0, ref_gl) == 1.0
    assert cc.optimal_share(tmin - 1e-6, 0.0, ref_gl) == 0.0
    # exact tie returns the indeterminate marker
    tie = cc.optimal_share(0.5, 0.0, cc.GainLoss(H=0.5, L=0.5))
    assert math.isnan(tie)


@pytest.mark.parametrize("gamma", [0.3, 0.5, 1.0, 1.5, 2.0, 5.0])
def test_belief_endpoints(gamma, ref_gl):
    assert cc.optimal_share(0.0, gamma, ref_gl) == 0.0
    assert cc.optimal_share(1.0, gamma, ref_gl) == 1.0


@pytest.mark.parametrize("gamma", [0.0, 0.5, 1.0, 1.5, 2.0])
def test_share_increases_with_belief(gamma, ref_gl):
    thetas = np.linspace(0.0, 1.0, 501)
    shares = [cc.optimal_share(float(t), gamma, ref_gl) for t in thetas]
    shares = [s for s in shares if not math.isnan(s)]
    assert all(s2 >= s1 - 1e-12 for s1, s2 in zip(shares, shares[1:]))


@pytest.mark.parametrize("gamma", [0.5, 1.0])
def test_share_decreases_with_borrowing(gamma, sqrt_half_revenue):
    # larger issuance worsens both the price and the recovery rate; for
    # gamma <= 1 that always lowers the optimal share
    thetas = np.linspace(0.0, 1.0, 101)
    bs = np.linspace(0.05, 0.95, 19)
    prev = None
    for b in bs:
        gl = cc.gain_loss(cc.MarketTerms.from_borrowing(float(b), sqrt_half_revenue))
        cur = np.array([cc.optimal_share(float(t), gamma, gl) for t in thetas])
        if prev is not None:
            assert np.all(cur <= prev + 1e-12)
        prev = cur


def test_share_not_monotone_in_borrowing_above_log():
    # known boundary of the monotonicity property: with gamma > 1 the share
    # rises as an extreme gain shrinks toward moderate levels, then falls
    L = 0.5
    shares = [cc.optimal_share(0.6, 2.0, cc.GainLoss(H=H, L=L))
              for H in (10.0, 2.0, 0.5)]
    assert shares[1] > shares[0]
    assert shares[2] < shares[1]


def _interior_problems(count, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        gl = cc.GainLoss(H=float(rng.uniform(0.05, 3.0)), L=float(rng.uniform(0.05, 0.95)))
        gamma = float(rng.uniform(0.05, 2.0))
        theta = float(rng.uniform(0.01, 0.99))
        sigma = cc.optimal_share(theta, gamma, gl)
        if 1e-6 < sigma < 1.0 - 1e-6:
            out.append((theta, gamma, gl, sigma))
    return out


def test_first_order_condition_at_interior_optimum():
    for theta, gamma, gl, sigma in _interior_problems(100, seed=21):
        foc = (theta * gl.H * (1.0 + sigma * gl.H) ** (-gamma)
               - (1.0 - theta) * gl.L * (1.0 - sigma * gl.L) ** (-gamma))
        assert abs(foc) < 1e-10
        h = 1e-6
        fd = (cc.expected_utility(sigma + h, theta, gamma, gl)
              - cc.expected_utility(sigma - h, theta, gamma, gl)) / (2 * h)
        assert abs(fd) < 1e-6


def test_share_beats_grid_search():
    grid = np.linspace(0.0, 1.0, 201)
    rng = np.random.default_rng(33)
    for _ in range(100):
        gl = cc.GainLoss(H=float(rng.uniform(0.05, 3.0)), L=float(rng.uniform(0.05, 0.95)))
        gamma = float(rng.uniform(0.05, 2.0))
        theta = float(rng.uniform(0.0, 1.0))
        sigma = cc.optimal_share(theta, gamma, gl)
        best = max(cc.expected_utility(float(s), theta, gamma, gl) for s in grid)
        assert cc.expected_utility(sigma, theta, gamma, gl) >= best - 1e-12


# ------------------------------------------------------- indifference_borrowing

def test_indifference_closed_form(sqrt_half_revenue):
    # theta = 0.5: 0.5 / sqrt(alpha) + 0.25 = 1  =>  alpha = (0.5 / 0.75)**2
    alpha = cc.indifference_borrowing(0.5, sqrt_half_revenue)
    assert alpha == pytest.approx((0.5 / 0.75) ** 2, abs=1e-12)
    assert alpha == pytest.approx(0.4444, abs=5e-5)


def test_indifference_endpoints(sqrt_half_revenue):
    assert cc.indifference_borrowing(0.0, sqrt_half_revenue) == 0.0
    assert cc.indifference_borrowing(1.0, sqrt_half_revenue) == 1.0


def test_indifference_monotone_in_belief(sqrt_half_revenue):
    thetas = np.linspace(0.01, 0.99, 99)
    alphas = [cc.indifference_borrowing(float(t), sqrt_half_revenue) for t in thetas]
    assert all(a2 > a1 for a1, a2 in zip(alphas, alphas[1:]))


def test_indifference_satisfies_defining_equation():
    rng = np.random.default_rng(2)
    for _ in range(100):
        rev = cc.RevenueSpec(A=1.0, a=float(rng.uniform(0.2, 0.9)),
                             c=float(rng.uniform(0.1, 0.9)))
        theta = float(rng.uniform(0.05, 1.0))
        alpha = cc.indifference_borrowing(theta, rev)
        resid = theta * rev.h(alpha) / alpha + (1 - theta) * rev.l(alpha) / alpha - 1.0
        assert abs(resid) < 1e-12
