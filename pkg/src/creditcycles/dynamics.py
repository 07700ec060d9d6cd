"""Evolution of the belief distribution of wealth across periods.

Each period: optional noise mixing toward the uniform distribution, solve the
borrowing equilibrium, evaluate the good-state probability at the resulting
leverage, draw the state, and scale each type's wealth by its realized
portfolio payoff.  Good states shift wealth toward optimists (who lent), bad
states toward pessimists (who held cash).

Runs are deterministic given a seed.  The generator is numpy's PCG64; exactly
one uniform variate is consumed per period, including degenerate no-lending
periods, so runs that share a seed see the same draw sequence regardless of
preferences.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels as k
from .equilibrium import Equilibrium, InvalidSpecError, compute_alphas
from .model import (ConstantShockProb, EconomySpec, LogisticShockProb,
                    RevenueSpec, WealthShares)

__all__ = [
    "PeriodRecord",
    "RunRecord",
    "SweepCell",
    "apply_shock",
    "step",
    "simulate",
    "sweep",
    "GOOD",
    "BAD",
    "NONE",
]

GOOD = "good"
BAD = "bad"
NONE = "none"  # degenerate period: no lending, no shock exposure

_STATE_NAMES = {k.STATE_GOOD: GOOD, k.STATE_BAD: BAD, k.STATE_NONE: NONE}


@dataclass(frozen=True)
class PeriodRecord:
    """Realized outcome of one period.

    ``growth`` is the gross change in aggregate wealth, equal to cash held
    plus realized revenue, (1 - b) + y.  ``marginal_theta`` is the critical
    belief type in risk-neutral periods and nan otherwise.  ``f_after`` is the
    post-update distribution when the period was snapshotted, else None.
    """

    t: int
    b: float
    p: float
    q: float
    pi: float
    state: str
    growth: float
    realized_y: float
    mean_belief: float
    marginal_theta: float
    f_after: WealthShares | None = None


@dataclass(frozen=True)
class RunRecord:
    """Full trace of one simulation run."""

    spec: EconomySpec
    seed: int
    periods: list[PeriodRecord]
    final: WealthShares


@dataclass(frozen=True)
class SweepCell:
    gamma: float
    pi_star: float
    mean_belief: float


def apply_shock(f: WealthShares, eq: Equilibrium, state: str,
                revenue: RevenueSpec) -> tuple[WealthShares, float]:
    """Scale each type's wealth by its realized payoff and renormalize.

    Per unit of wealth, a type with bond share sigma receives
    ``1 - sigma + sigma/p`` in the good state and ``1 - sigma +
    (sigma/p) * (l/q)`` in the bad state.  Returns the new shares and the
    aggregate growth factor (the pre-normalization total).
    """
    if eq.degenerate:
        raise ValueError("cannot apply a shock to a degenerate (no-lending) period")
    if state not in (GOOD, BAD):
        raise ValueError(f"state must be {GOOD!r} or {BAD!r}")
    sig = eq.sigmas
    inv_p = 1.0 / eq.p
    if state == GOOD:
        payoff = 1.0 - sig + sig * inv_p
    else:
        payoff = 1.0 - sig + sig * inv_p * (float(revenue.l(eq.b)) / eq.q)
    w = f.shares * payoff
    growth = float(w.sum())
    if growth < 1e-300:
        raise RuntimeError("aggregate wealth underflowed to zero")
    return WealthShares(f.grid, w / growth), growth


def _shock_params(shock) -> tuple[int, float, float, float, float]:
    if isinstance(shock, ConstantShockProb):
        return 0, shock.pi_star, 0.0, 0.0, 0.0
    if isinstance(shock, LogisticShockProb):
        return 1, shock.base, shock.amplitude, shock.offset, shock.slope
    raise TypeError(f"unsupported shock-probability spec: {shock!r}")


def _checked(spec: EconomySpec) -> tuple[np.ndarray, np.ndarray]:
    report = spec.validation()
    if not report.ok:
        raise InvalidSpecError(report)
    rev = spec.revenue
    alphas = spec.cached("alphas", lambda: compute_alphas(spec.grid, rev))
    ratio = spec.cached("ratio", lambda: k.make_ratio(spec.grid.thetas, rev.c))
    return alphas, ratio


def step(f: WealthShares, spec: EconomySpec, rng: np.random.Generator,
         t: int = 0, mix_before: bool = True) -> tuple[WealthShares, PeriodRecord]:
    """Advance the wealth distribution by one period.

    Consumes exactly one uniform variate from ``rng``.  Degenerate periods
    pass the (mixed) distribution through unchanged with unit growth and no
    state realization.
    """
    alphas, ratio = _checked(spec)
    rev = spec.revenue
    pk, p0, p1, p2, p3 = _shock_params(spec.shock_prob)
    u = float(rng.random())
    shares = f.shares.copy()
    sigma_ws = np.empty(spec.grid.n)
    b, q, p, pi, state, growth, y, marginal, mean, flag = k.step_kernel(
        shares, spec.grid.thetas, alphas, ratio, spec.gamma,
        rev.A, rev.a, rev.c, pk, p0, p1, p2, p3,
        spec.noise_eps, mix_before, u, sigma_ws)
    if flag == 3:
        raise RuntimeError("aggregate wealth underflowed to zero")
    f_next = WealthShares(spec.grid, shares)
    marg_theta = float(spec.grid.thetas[marginal]) if marginal >= 0 else float("nan")
    rec = PeriodRecord(t=t, b=float(b), p=float(p), q=float(q), pi=float(pi),
                       state=_STATE_NAMES[state], growth=float(growth),
                       realized_y=float(y), mean_belief=float(mean),
                       marginal_theta=marg_theta, f_after=f_next)
    return f_next, rec


def simulate(spec: EconomySpec, T: int, seed: int,
             initial: WealthShares | None = None, thin: int = 10,
             mix_before: bool = True) -> RunRecord:
    """Run ``T`` periods from ``initial`` (uniform by default).

    Deterministic given (spec, T, seed).  Full distributions are kept every
    ``thin`` periods plus the final period; scalar per-period fields are
    always kept.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    if thin < 1:
        raise ValueError("thin must be >= 1")
    alphas, ratio = _checked(spec)
    rev = spec.revenue
    pk, p0, p1, p2, p3 = _shock_params(spec.shock_prob)

    if initial is None:
        initial = WealthShares.uniform(spec.grid)
    elif initial.grid is not spec.grid and not np.array_equal(
            initial.grid.thetas, spec.grid.thetas):
        raise ValueError("initial distribution is not on the spec's belief grid")

    rng = np.random.Generator(np.random.PCG64(seed))
    us = rng.random(T)

    snap_at = np.unique(np.append(np.arange(thin - 1, T, thin), T - 1))
    shares = initial.shares.copy()
    cols = {name: np.empty(T) for name in
            ("b", "q", "p", "pi", "growth", "y", "mean")}
    state_col = np.empty(T, dtype=np.int64)
    marginal_col = np.empty(T, dtype=np.int64)
    snaps = np.empty((snap_at.size, spec.grid.n))

    rc = k.simulate_kernel(
        shares, spec.grid.thetas, alphas, ratio, spec.gamma,
        rev.A, rev.a, rev.c, pk, p0, p1, p2, p3,
        spec.noise_eps, mix_before, us,
        cols["b"], cols["q"], cols["p"], cols["pi"], state_col,
        cols["growth"], cols["y"], marginal_col, cols["mean"],
        snap_at, snaps)
    if rc == 3:
        raise RuntimeError("aggregate wealth underflowed to zero")

    thetas = spec.grid.thetas
    snap_lookup = {int(t): i for i, t in enumerate(snap_at)}
    periods = []
    for t in range(T):
        row = snap_lookup.get(t)
        f_after = WealthShares(spec.grid, snaps[row]) if row is not None else None
        m = int(marginal_col[t])
        periods.append(PeriodRecord(
            t=t, b=float(cols["b"][t]), p=float(cols["p"][t]),
            q=float(cols["q"][t]), pi=float(cols["pi"][t]),
            state=_STATE_NAMES[int(state_col[t])],
            growth=float(cols["growth"][t]), realized_y=float(cols["y"][t]),
            mean_belief=float(cols["mean"][t]),
            marginal_theta=float(thetas[m]) if m >= 0 else float("nan"),
            f_after=f_after))
    final = WealthShares(spec.grid, shares)
    return RunRecord(spec=spec, seed=seed, periods=periods, final=final)


def sweep(base: EconomySpec, gammas, pi_stars, T: int, seed: int,
          thin: int = 10, jobs: int = 1) -> list[SweepCell]:
    """Terminal mean belief for every (gamma, pi_star) cell.

    Every cell reuses the same seed, hence the same state sequence for a
    given pi_star, which filters randomness out of comparisons across risk
    preferences.  Cells are independent; ``jobs`` > 1 runs them in a process
    pool.
    """
    specs = [replace(base, gamma=float(g), shock_prob=ConstantShockProb(float(p)))
             for g in gammas for p in pi_stars]
    args = [(s, T, seed, thin) for s in specs]
    if jobs > 1 and len(args) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            means = list(pool.map(_terminal_mean, args))
    else:
        means = [_terminal_mean(a) for a in args]
    return [SweepCell(gamma=s.gamma, pi_star=s.shock_prob.pi_star, mean_belief=m)
            for s, m in zip(specs, means)]


def _terminal_mean(packed) -> float:
    spec, T, seed, thin = packed
    return simulate(spec, T, seed, thin=thin).final.mean_belief()
