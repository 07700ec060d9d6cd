"""Single-investor portfolio rules: bond share under CRRA preferences.

Bonds pay their unit face value in the good state and a prorated recovery in
the bad state.  Per unit of wealth, an investor placing share ``sigma`` in
bonds gains ``H`` in the good state and loses ``L`` in the bad state, where
both are pinned down by the bond price and the revenue functions.  Everything
here is a pure function of ``(theta, gamma, H, L)``; market clearing lives in
:mod:`creditcycles.equilibrium`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import RevenueSpec

__all__ = [
    "MarketTerms",
    "GainLoss",
    "gain_loss",
    "share_thresholds",
    "optimal_share",
    "expected_utility",
    "indifference_borrowing",
]

INDIFFERENCE_MAX_ITER = 200


@dataclass(frozen=True)
class MarketTerms:
    """Within-period market conditions faced by every investor.

    ``b`` is borrowing per unit wealth, ``q`` the bond issue per unit wealth,
    ``p`` the bond price.  ``q`` equals good-state revenue (full repayment
    exhausts it) and ``p * q`` equals ``b`` (the issue must fund the
    borrowing), so only ``b`` is a free coordinate.
    """

    b: float
    p: float
    q: float
    l_val: float
    h_val: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.b <= 1.0:
            raise ValueError("b must lie in [0, 1]")
        if not 0.0 < self.p <= 1.0 + 1e-12:
            raise ValueError("bond price must lie in (0, 1]")
        if abs(self.q - self.h_val) > 1e-12:
            raise ValueError("bond issue must equal good-state revenue")
        if abs(self.p * self.q - self.b) > 1e-10:
            raise ValueError("p * q must equal b")

    @classmethod
    def from_borrowing(cls, b: float, revenue: RevenueSpec) -> "MarketTerms":
        if not 0.0 < b <= 1.0:
            raise ValueError("b must lie in (0, 1] to imply a bond price")
        h = float(revenue.h(b))
        return cls(b=b, p=b / h, q=h, l_val=float(revenue.l(b)), h_val=h)


@dataclass(frozen=True)
class GainLoss:
    """Per-unit-wealth bond gain in the good state and loss in the bad state."""

    H: float
    L: float

    def __post_init__(self) -> None:
        if not self.H > 0.0:
            raise ValueError("gain H must be positive")
        if not 0.0 < self.L < 1.0:
            raise ValueError("loss L must lie in (0, 1)")


def gain_loss(terms: MarketTerms) -> GainLoss:
    """Gain/loss pair implied by market terms; rejects degenerate boundaries.

    H = 1/p - 1 and L = 1 - (1/p) * (l/q).  At b = 0 or b = 1 the spread
    between bond and cash payoffs collapses, so those terms are refused and
    boundary equilibria are handled by the caller.
    """
    if not 0.0 < terms.b < 1.0:
        raise ValueError("degenerate market terms: b must be interior")
    inv_p = 1.0 / terms.p
    H = inv_p - 1.0
    L = 1.0 - inv_p * (terms.l_val / terms.q)
    if H <= 0.0 or not 0.0 < L < 1.0:
        raise ValueError(f"degenerate market terms: H={H!r}, L={L!r}")
    return GainLoss(H=H, L=L)


def share_thresholds(gl: GainLoss) -> tuple[float, float]:
    """Belief cutoffs for log utility: all-cash below the first, all-bonds above the second."""
    H, L = gl.H, gl.L
    theta_min = L / (H + L)
    theta_max = (H * L + L) / (H + L)
    return theta_min, theta_max


def optimal_share(theta: float, gamma: float, gl: GainLoss) -> float:
    """Wealth share placed in bonds by an investor with belief ``theta``.

    Risk neutral (gamma = 0) investors go all-in or all-out on the sign of
    the perceived edge ``theta*H - (1-theta)*L``; an exact tie returns ``nan``
    as an explicit indeterminate marker for the equilibrium solver to resolve.

    For gamma > 0 the first-order condition gives the closed form

        sigma = (r - 1) / (H + r*L),   r = (theta*H / ((1-theta)*L))**(1/gamma)

    clipped to [0, 1]; theta = 0 and theta = 1 are taken as the limits 0 and 1.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    if gamma < 0.0:
        raise ValueError("gamma must be >= 0")
    H, L = gl.H, gl.L
    if gamma == 0.0:
        edge = theta * H - (1.0 - theta) * L
        if edge > 0.0:
            return 1.0
        if edge < 0.0:
            return 0.0
        return math.nan
    if theta <= 0.0:
        return 0.0
    if theta >= 1.0:
        return 1.0
    x = theta * H / ((1.0 - theta) * L)
    if x <= 1.0:
        return 0.0
    # r >= (1+H)/(1-L) already means a corner at 1; skip the power to avoid overflow
    if x >= ((1.0 + H) / (1.0 - L)) ** gamma:
        return 1.0
    r = x ** (1.0 / gamma)
    sigma = (r - 1.0) / (H + r * L)
    return min(max(sigma, 0.0), 1.0)


def expected_utility(sigma: float, theta: float, gamma: float, gl: GainLoss) -> float:
    """Expected CRRA utility of terminal wealth for bond share ``sigma``."""
    w_good = 1.0 + sigma * gl.H
    w_bad = 1.0 - sigma * gl.L
    if gamma == 1.0:
        return theta * math.log(w_good) + (1.0 - theta) * math.log(w_bad)
    if gamma == 0.0:
        return theta * w_good + (1.0 - theta) * w_bad
    g = 1.0 - gamma
    return theta * w_good ** g / g + (1.0 - theta) * w_bad ** g / g


def indifference_borrowing(theta: float, revenue: RevenueSpec) -> float:
    """Borrowing level at which belief ``theta`` is indifferent between cash and bonds.

    Solves ``theta*h(alpha)/alpha + (1-theta)*l(alpha)/alpha = 1`` by bisection
    on (0, 1], run to float granularity (at most 200 halvings) so the defining
    equation holds to 1e-12 even where it is steep.  The left side falls
    strictly in ``alpha`` and diverges as ``alpha -> 0``, so the root is
    unique; endpoints use the conventions ``alpha(0) = 0`` and ``alpha(1) = 1``.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    if theta == 0.0:
        return 0.0
    if theta == 1.0:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(INDIFFERENCE_MAX_ITER):
        mid = 0.5 * (lo + hi)
        # past float granularity: where the slope is steep, stopping at the
        # 1e-14 interval would leave the defining equation short of 1e-12
        if mid == lo or mid == hi:
            break
        ret = theta * revenue.h(mid) / mid + (1.0 - theta) * revenue.l(mid) / mid
        if ret > 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
