"""Self-fulfilling beliefs when default risk responds to leverage.

If all wealth sits at a single belief type, market clearing collapses to that
type's own portfolio rule, giving an equilibrium borrowing curve beta(theta).
When the objective good-state probability pi depends on borrowing, a belief
theta* with pi(beta(theta*)) = theta* is self-fulfilling: holding it produces
exactly the leverage that makes it correct.  Multiple such fixed points are
what allow the economy to alternate between high- and low-leverage regimes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .equilibrium import solve_equilibrium
from .model import BeliefGrid, EconomySpec, WealthShares, eval_shock_prob

__all__ = [
    "RECurvePoint",
    "REFixedPoint",
    "beta_of_theta",
    "find_re_equilibria",
    "emit_re_curve",
]

_ROOT_TOL = 1e-10
_SLOPE_H = 1e-5
_MONOTONE_SLACK = 1e-9


@dataclass(frozen=True)
class RECurvePoint:
    """One point of the single-type borrowing curve and the probability it induces."""

    theta: float
    beta: float
    pi_at_beta: float


@dataclass(frozen=True)
class REFixedPoint:
    """Self-fulfilling belief; stable means the map theta -> pi(beta(theta)) contracts locally."""

    theta: float
    stable: bool


def _point_mass_spec(theta: float, spec: EconomySpec) -> tuple[WealthShares, EconomySpec]:
    values = np.unique(np.array([0.0, float(theta), 1.0]))
    grid = BeliefGrid(values)
    sub = replace(spec, grid=grid)
    return WealthShares.point_mass(grid, float(theta)), sub


def beta_of_theta(theta: float, spec: EconomySpec) -> float:
    """Equilibrium borrowing when all wealth is held by belief type ``theta``.

    Exactly the general equilibrium solver applied to a point mass, so it
    inherits the degenerate floor at theta near 0 and the full-investment
    corner at theta = 1.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    f, sub = _point_mass_spec(theta, spec)
    return solve_equilibrium(f, sub).b


def find_re_equilibria(spec: EconomySpec, grid_size: int = 1000) -> list[REFixedPoint]:
    """All fixed points of theta -> pi(beta(theta)), with a stability tag.

    Scans the gap g(theta) = pi(beta(theta)) - theta on a uniform grid,
    brackets every sign change, and refines each by bisection to 1e-10.
    g(0) > 0 and g(1) < 0, so at least one fixed point always exists; an
    empty list can only come from tangencies the scan cannot see.  Stability
    is classified by the local slope of g (negative = stable) and is
    advisory: it describes the belief map, not the stochastic dynamics.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")

    def g(theta: float) -> float:
        return float(eval_shock_prob(spec.shock_prob, beta_of_theta(theta, spec))) - theta

    thetas = np.linspace(0.0, 1.0, grid_size)
    gaps = np.array([g(t) for t in thetas])

    roots: list[float] = []
    for i in range(grid_size - 1):
        g0, g1 = gaps[i], gaps[i + 1]
        if g0 == 0.0:
            roots.append(float(thetas[i]))
            continue
        if g0 * g1 < 0.0:
            lo, hi = float(thetas[i]), float(thetas[i + 1])
            glo = g0
            while hi - lo > _ROOT_TOL:
                mid = 0.5 * (lo + hi)
                gm = g(mid)
                if (glo < 0.0) == (gm < 0.0):
                    lo, glo = mid, gm
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
    if gaps[-1] == 0.0:
        roots.append(float(thetas[-1]))

    out = []
    for r in roots:
        lo = max(r - _SLOPE_H, 0.0)
        hi = min(r + _SLOPE_H, 1.0)
        slope = (g(hi) - g(lo)) / (hi - lo)
        out.append(REFixedPoint(theta=r, stable=slope < 0.0))
    return out


def emit_re_curve(spec: EconomySpec, grid_size: int = 101) -> list[RECurvePoint]:
    """Tabulate (theta, beta(theta), pi(beta(theta))) for plotting.

    The borrowing column must be weakly increasing in theta; a violation
    beyond bisection noise indicates a solver defect and raises.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    thetas = np.linspace(0.0, 1.0, grid_size)
    points = []
    prev_beta = 0.0
    for t in thetas:
        beta = beta_of_theta(float(t), spec)
        if beta < prev_beta - _MONOTONE_SLACK:
            raise RuntimeError(
                f"borrowing curve not monotone: beta({t:.6f}) = {beta!r} < {prev_beta!r}")
        prev_beta = beta
        points.append(RECurvePoint(theta=float(t), beta=beta,
                                   pi_at_beta=float(eval_shock_prob(spec.shock_prob, beta))))
    return points
