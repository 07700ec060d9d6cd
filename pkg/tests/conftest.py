import numpy as np
import pytest

import creditcycles as cc


@pytest.fixture(scope="session")
def grid101():
    return cc.BeliefGrid.regular(101)


@pytest.fixture(scope="session")
def sqrt_half_revenue():
    # h(b) = sqrt(b), l(b) = b / 2
    return cc.RevenueSpec(A=1.0, a=0.5, c=0.5)


@pytest.fixture(scope="session")
def rn_spec(grid101, sqrt_half_revenue):
    return cc.EconomySpec(grid=grid101, revenue=sqrt_half_revenue, gamma=0.0,
                          shock_prob=cc.ConstantShockProb(0.8))


@pytest.fixture(scope="session")
def log_spec(grid101, sqrt_half_revenue):
    return cc.EconomySpec(grid=grid101, revenue=sqrt_half_revenue, gamma=1.0,
                          shock_prob=cc.ConstantShockProb(0.8))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels(log_spec, rn_spec):
    """Trigger numba compilation once so timed tests measure computation only."""
    f = cc.WealthShares.uniform(log_spec.grid)
    cc.solve_equilibrium(f, log_spec)
    cc.solve_equilibrium(f, rn_spec)
    cc.excess_demand(0.5, f, 1.0, log_spec.revenue)
    cc.simulate(log_spec, T=2, seed=0)
    rn_eps = cc.EconomySpec(grid=rn_spec.grid, revenue=rn_spec.revenue, gamma=0.0,
                            shock_prob=cc.ConstantShockProb(0.8), noise_eps=0.01)
    cc.simulate(rn_eps, T=2, seed=0)
    from creditcycles import _kernels as k
    k.scan_sign_changes_kernel(log_spec.grid.thetas, f.shares,
                               k.make_ratio(log_spec.grid.thetas, 0.5),
                               1.0, 1.0, 0.5, 0.5, 100)
