"""Within-period borrowing equilibrium given a belief distribution of wealth.

Risk-neutral economies are solved by direct construction: sort types by
optimism, find where cumulative optimistic wealth crosses the per-type
indifference levels.  For gamma > 0 the wealth-weighted bond demand falls
strictly in the borrowing level while borrowing itself rises, so the excess
demand for funds has a unique zero and bisection is safe regardless of the
kinks where belief types hit their all-cash / all-bond corners.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as k
from .model import EconomySpec, RevenueSpec, WealthShares
from .portfolio import indifference_borrowing

__all__ = [
    "Equilibrium",
    "InvalidSpecError",
    "compute_alphas",
    "solve_risk_neutral",
    "excess_demand",
    "solve_equilibrium",
]

# re-exported numerical knobs
B_FLOOR = k.B_FLOOR
B_LO = k.B_LO


class InvalidSpecError(ValueError):
    """Raised when a solver is handed a configuration that fails validation."""

    def __init__(self, report):
        self.report = report
        lines = "; ".join(f"{c.name}" for c in report.failures)
        super().__init__(f"economy spec failed validation: {lines}")


@dataclass(frozen=True)
class Equilibrium:
    """Within-period outcome: borrowing, bond terms, and the portfolio profile.

    ``marginal_index`` identifies the critical belief type in the risk-neutral
    case (None otherwise); ``degenerate`` marks a no-lending period in which
    b is reported as 0 and the price is undefined.
    """

    b: float
    q: float
    p: float
    sigmas: np.ndarray
    marginal_index: int | None
    degenerate: bool

    @property
    def bonds_per_unit_wealth(self) -> float:
        """Bonds bought per unit of wealth fully invested (1/p)."""
        return 1.0 / self.p


def compute_alphas(grid, revenue: RevenueSpec) -> np.ndarray:
    """Indifference borrowing level for every belief type on the grid."""
    return np.array([indifference_borrowing(t, revenue) for t in grid.thetas])


def _degenerate(n: int) -> Equilibrium:
    return Equilibrium(b=0.0, q=0.0, p=float("nan"), sigmas=np.zeros(n),
                       marginal_index=None, degenerate=True)


def solve_risk_neutral(f: WealthShares, revenue: RevenueSpec,
                       alphas: np.ndarray | None = None) -> Equilibrium:
    """Equilibrium under risk neutrality (gamma = 0).

    Every type is all-in or all-out except possibly one partially invested
    marginal type; the construction pins borrowing to either the wealth of
    the fully invested set or the marginal type's indifference level.
    """
    if alphas is None:
        alphas = compute_alphas(f.grid, revenue)
    sigmas = np.empty(f.grid.n)
    b, marginal, flag = k.solve_risk_neutral_kernel(alphas, f.shares, sigmas)
    if flag == k.FLAG_DEGENERATE:
        return _degenerate(f.grid.n)
    q = float(revenue.h(b))
    sigmas.flags.writeable = False
    return Equilibrium(b=float(b), q=q, p=float(b) / q, sigmas=sigmas,
                       marginal_index=int(marginal), degenerate=False)


def excess_demand(b: float, f: WealthShares, gamma: float,
                  revenue: RevenueSpec) -> float:
    """Borrowing minus wealth-weighted bond demand at candidate b (gamma > 0)."""
    if not 0.0 < b < 1.0:
        raise ValueError("b must lie in (0, 1)")
    if gamma <= 0.0:
        raise ValueError("excess demand is defined for gamma > 0")
    ratio = k.make_ratio(f.grid.thetas, revenue.c)
    return float(k.excess_demand_kernel(b, f.grid.thetas, f.shares, ratio,
                                        gamma, revenue.A, revenue.a, revenue.c))


def solve_equilibrium(f: WealthShares, spec: EconomySpec) -> Equilibrium:
    """Unique within-period equilibrium for the given wealth distribution.

    Dispatches to the risk-neutral construction at gamma = 0, otherwise
    bisects excess demand over [1e-9, 1 - 1e-9] to tolerance 1e-12 on b.
    Solved borrowing below 1e-6 is reported as a degenerate (no-lending)
    period.  Refuses configurations that fail validation.
    """
    report = spec.validation()
    if not report.ok:
        raise InvalidSpecError(report)
    if f.grid is not spec.grid and not np.array_equal(f.grid.thetas, spec.grid.thetas):
        raise ValueError("wealth shares are not aligned with the spec's belief grid")

    rev = spec.revenue
    if spec.gamma == 0.0:
        alphas = spec.cached("alphas", lambda: compute_alphas(spec.grid, rev))
        return solve_risk_neutral(f, rev, alphas)

    thetas = spec.grid.thetas
    ratio = spec.cached("ratio", lambda: k.make_ratio(thetas, rev.c))
    b, flag = k.solve_borrowing_kernel(thetas, f.shares, ratio, spec.gamma,
                                       rev.A, rev.a, rev.c)
    if flag == k.FLAG_DEGENERATE:
        return _degenerate(spec.grid.n)
    sigmas = np.empty(spec.grid.n)
    k.sigma_profile_kernel(b, thetas, spec.gamma, rev.A, rev.a, rev.c, sigmas)
    if flag == k.FLAG_CORNER_TOP:
        sigmas[-1] = 1.0
    q = float(rev.h(b))
    sigmas.flags.writeable = False
    return Equilibrium(b=float(b), q=q, p=float(b) / q, sigmas=sigmas,
                       marginal_index=None, degenerate=False)
