"""Within-period equilibrium walkthrough.

Builds the reference economy (101 belief types, uniform wealth, h(b) = sqrt(b),
l(b) = b/2) and solves the borrowing equilibrium under risk neutrality and
log utility, showing who lends, at what terms, and what a good or bad state
does to the wealth distribution.

Run with::

    python demos/01_single_period_equilibrium.py
"""

import numpy as np

import creditcycles as cc
from creditcycles.dynamics import BAD, GOOD, apply_shock

grid = cc.BeliefGrid.regular(101)
revenue = cc.RevenueSpec(A=1.0, a=0.5, c=0.5)
f = cc.WealthShares.uniform(grid)

print("=" * 64)
print("Risk-neutral investors (gamma = 0)")
print("=" * 64)

spec = cc.EconomySpec(grid=grid, revenue=revenue, gamma=0.0,
                      shock_prob=cc.ConstantShockProb(0.8))
eq = cc.solve_equilibrium(f, spec)
marginal = grid.thetas[eq.marginal_index]

print(f"borrowing per unit wealth  b = {eq.b:.4f}")
print(f"bond issue per unit wealth q = {eq.q:.4f}")
print(f"bond price                 p = {eq.p:.4f}")
print(f"bonds per invested unit  1/p = {1 / eq.p:.4f}")
print(f"marginal belief type         = {marginal:.2f}")
print(f"fully invested types         = {int(np.sum(eq.sigmas == 1.0))} of {grid.n}")
print()
print("Everyone at least as optimistic as the marginal type lends everything;")
print("everyone below keeps cash. The marginal type is pinned down by how much")
print("optimistic wealth is needed to fund the borrowing.")
print()

f_good, growth_good = apply_shock(f, eq, GOOD, revenue)
f_bad, growth_bad = apply_shock(f, eq, BAD, revenue)
lenders_before = 1.0 - f.cdf(marginal - 0.01)
print(f"good state: total wealth x{growth_good:.4f}, "
      f"lender share {lenders_before:.2%} -> {1 - f_good.cdf(marginal - 0.01):.2%}")
print(f"bad state:  total wealth x{growth_bad:.4f}, "
      f"lender share {lenders_before:.2%} -> {1 - f_bad.cdf(marginal - 0.01):.2%}")
print()

print("=" * 64)
print("Log-utility investors (gamma = 1)")
print("=" * 64)

spec1 = cc.EconomySpec(grid=grid, revenue=revenue, gamma=1.0,
                       shock_prob=cc.ConstantShockProb(0.8))
eq1 = cc.solve_equilibrium(f, spec1)
print(f"borrowing b = {eq1.b:.4f}, price p = {eq1.p:.4f}")

terms = cc.MarketTerms.from_borrowing(eq1.b, revenue)
gl = cc.gain_loss(terms)
tmin, tmax = cc.share_thresholds(gl)
print(f"gain per unit invested (good)  H = {gl.H:.4f}")
print(f"loss per unit invested (bad)   L = {gl.L:.4f}")
print(f"all-cash below theta = {tmin:.4f}, all-bonds above theta = {tmax:.4f}")
print()
print("portfolio shares by belief:")
for theta in (0.3, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8):
    sigma = cc.optimal_share(theta, 1.0, gl)
    bar = "#" * int(round(40 * sigma))
    print(f"  theta {theta:.2f}  sigma {sigma:5.3f}  {bar}")
print()
print("Risk aversion smooths the all-or-nothing profile into a band of")
print("interior positions between the two thresholds.")
