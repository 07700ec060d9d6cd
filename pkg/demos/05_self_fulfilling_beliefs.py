"""The single-type borrowing curve and its rational-expectations fixed points.

beta(theta) is the leverage that emerges when all wealth is held by belief
type theta; it rises from 0 to 1 as optimism grows.  Plotted against the
feedback curve pi(b), every crossing is a belief that produces exactly the
default risk it expects.  With a constant pi the crossing is unique; with
the logistic feedback there are several, including two stable ones.

Writes the plot-ready curve to stdout as CSV-like columns.

Run with::

    python demos/05_self_fulfilling_beliefs.py
"""

import creditcycles as cc

grid = cc.BeliefGrid.regular(101)

print("=" * 60)
print("constant default risk: one fixed point, at the truth")
print("=" * 60)
const = cc.EconomySpec(grid=grid, revenue=cc.RevenueSpec(), gamma=1.0,
                       shock_prob=cc.ConstantShockProb(0.6))
for fp in cc.find_re_equilibria(const):
    print(f"  theta* = {fp.theta:.6f} ({'stable' if fp.stable else 'unstable'})")
print()

print("=" * 60)
print("leverage-dependent default risk: multiple self-fulfilling beliefs")
print("=" * 60)
spec = cc.EconomySpec(grid=grid, revenue=cc.RevenueSpec(), gamma=1.0,
                      shock_prob=cc.LogisticShockProb())

points = cc.emit_re_curve(spec, grid_size=21)
print(f"{'theta':>8} {'beta(theta)':>12} {'pi(beta)':>10}")
for pt in points:
    marker = "  <- beta crosses pi feedback" if abs(pt.pi_at_beta - pt.theta) < 0.02 else ""
    print(f"{pt.theta:8.2f} {pt.beta:12.4f} {pt.pi_at_beta:10.4f}{marker}")
print()

fixed = cc.find_re_equilibria(spec)
print(f"{len(fixed)} fixed points of theta -> pi(beta(theta)):")
for fp in fixed:
    kind = "stable" if fp.stable else "unstable"
    print(f"  theta* = {fp.theta:.6f}  ({kind})")
print()
print("The outer two are the anchors of the high- and low-leverage regimes")
print("seen in the stochastic dynamics; the middle one is the watershed.")
