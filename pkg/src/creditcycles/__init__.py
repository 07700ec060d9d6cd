"""Credit-market dynamics driven by the belief distribution of wealth.

A numpy/numba library for an economy where investors with heterogeneous prior
beliefs split wealth between risk-free cash and defaultable bonds.  Within a
period the scale and terms of borrowing clear the market given the current
distribution of wealth across belief types; across periods that distribution
drifts toward whichever beliefs happened to be profitable.  The package
solves the within-period equilibrium, simulates the long-run selection
dynamics, and locates self-fulfilling beliefs when default risk feeds back
from leverage.
"""

__version__ = "0.1.0"

from .model import (BeliefGrid, ConstantShockProb, EconomySpec,
                    LogisticShockProb, RevenueSpec, ShockProbSpec,
                    ValidationReport, WealthShares, eval_shock_prob,
                    validate_spec)
from .portfolio import (GainLoss, MarketTerms, expected_utility, gain_loss,
                        indifference_borrowing, optimal_share,
                        share_thresholds)
from .equilibrium import (Equilibrium, InvalidSpecError, compute_alphas,
                          excess_demand, solve_equilibrium,
                          solve_risk_neutral)
from .dynamics import (PeriodRecord, RunRecord, SweepCell, apply_shock,
                       simulate, step, sweep)
from .selffulfilling import (RECurvePoint, REFixedPoint, beta_of_theta,
                             emit_re_curve, find_re_equilibria)

__all__ = [
    "__version__",
    "BeliefGrid", "WealthShares", "RevenueSpec", "ConstantShockProb",
    "LogisticShockProb", "ShockProbSpec", "EconomySpec", "ValidationReport",
    "validate_spec", "eval_shock_prob",
    "MarketTerms", "GainLoss", "gain_loss", "share_thresholds",
    "optimal_share", "expected_utility", "indifference_borrowing",
    "Equilibrium", "InvalidSpecError", "compute_alphas", "solve_risk_neutral",
    "excess_demand", "solve_equilibrium",
    "PeriodRecord", "RunRecord", "SweepCell", "apply_shock", "step",
    "simulate", "sweep",
    "RECurvePoint", "REFixedPoint", "beta_of_theta", "find_re_equilibria",
    "emit_re_curve",
]
