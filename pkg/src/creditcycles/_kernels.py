"""Compiled inner loops for equilibrium solving and period-by-period simulation.

Everything here works on plain float64 arrays so the hot path (tens of
millions of excess-demand evaluations in a long sweep) stays off the Python
interpreter.  Public wrappers in :mod:`creditcycles.equilibrium` and
:mod:`creditcycles.dynamics` build and unpack the typed objects.

Conventions shared by all kernels:

- revenue family is h(b) = A * b**a, l(b) = c * b
- ``ratio[i]`` caches thetas[i] / ((1 - thetas[i]) * (1 - c)), inf at theta = 1
- shock-probability kind: 0 = constant (p0), 1 = logistic
  p0 + p1 / (1 + exp(p2 - p3 * b))
- solver flags: 0 = interior, 1 = degenerate (no lending), 2 = full-investment
  corner (all wealth at theta = 1)
- period states: 1 = good, 0 = bad, -1 = none (degenerate period)
"""

from __future__ import annotations

import numpy as np
from numba import njit

# bisection bracket and fixed iteration count; 50 halvings of a unit bracket
# land well inside the 1e-12 tolerance on b
B_LO = 1e-9
N_BISECT = 50

# solved borrowing below this floor is recorded as a no-lending period
B_FLOOR = 1e-6

FLAG_INTERIOR = 0
FLAG_DEGENERATE = 1
FLAG_CORNER_TOP = 2

STATE_BAD = 0
STATE_GOOD = 1
STATE_NONE = -1


@njit(cache=True)
def sigma_one(theta, gamma, H, L, inv_g, xmax):
    """Optimal bond share for one belief type at gain H, loss L (gamma > 0)."""
    if theta <= 0.0 or H <= 0.0:
        return 0.0
    if theta >= 1.0:
        return 1.0
    x = theta * H / ((1.0 - theta) * L)
    if x <= 1.0:
        return 0.0
    if x >= xmax:
        return 1.0
    r = x ** inv_g
    if r > 1e290:  # only reachable when L = 1 (zero recovery); limit share is 1/L
        s = 1.0 / L
    else:
        s = (r - 1.0) / (H + r * L)
    if s < 0.0:
        return 0.0
    if s > 1.0:
        return 1.0
    return s


@njit(cache=True)
def _gain_xmax(b, gamma, A, a, c):
    """(H, L, xmax) at borrowing b; xmax is the sigma = 1 cutoff for x."""
    H = A * b ** (a - 1.0) - 1.0
    L = 1.0 - c
    if H <= 0.0:
        return H, L, np.inf
    if c > 0.0:
        xmax = ((1.0 + H) / c) ** gamma
    else:
        xmax = np.inf
    return H, L, xmax


@njit(cache=True)
def excess_demand_kernel(b, thetas, f, ratio, gamma, A, a, c):
    """b minus wealth-weighted bond demand at borrowing b (gamma > 0).

    Strictly increasing in b: negative when investors want to lend more than
    b, positive when they want to lend less.
    """
    H, L, xmax = _gain_xmax(b, gamma, A, a, c)
    if H <= 0.0:
        return b
    inv_g = 1.0 / gamma
    acc = 0.0
    for i in range(thetas.size):
        fi = f[i]
        if fi == 0.0:
            continue
        th = thetas[i]
        if th <= 0.0:
            continue
        if th >= 1.0:
            acc += fi
            continue
        x = ratio[i] * H
        if x <= 1.0:
            continue
        if x >= xmax:
            acc += fi
            continue
        r = x ** inv_g
        if r > 1e290:
            s = 1.0 / L
        else:
            s = (r - 1.0) / (H + r * L)
        if s > 1.0:
            s = 1.0
        acc += fi * s
    return b - acc


@njit(cache=True)
def make_ratio(thetas, c):
    """Cache theta / ((1 - theta) * L) per type, with L = 1 - c."""
    L = 1.0 - c
    out = np.empty(thetas.size)
    for i in range(thetas.size):
        th = thetas[i]
        if th >= 1.0:
            out[i] = np.inf
        elif L > 0.0:
            out[i] = th / ((1.0 - th) * L)
        else:
            out[i] = np.inf if th > 0.0 else 0.0
    return out


@njit(cache=True)
def solve_borrowing_kernel(thetas, f, ratio, gamma, A, a, c):
    """Market-clearing borrowing for gamma > 0 via bisection on excess demand.

    Returns (b, flag).  No sign change at the bottom of the bracket means no
    type wants to lend (degenerate); none at the top means all wealth sits at
    theta = 1 and the market clears only in the full-investment corner b = 1.
    """
    lo = B_LO
    hi = 1.0 - B_LO
    e_lo = excess_demand_kernel(lo, thetas, f, ratio, gamma, A, a, c)
    if e_lo >= 0.0:
        return 0.0, FLAG_DEGENERATE
    e_hi = excess_demand_kernel(hi, thetas, f, ratio, gamma, A, a, c)
    if e_hi <= 0.0:
        return 1.0, FLAG_CORNER_TOP
    for _ in range(N_BISECT):
        mid = 0.5 * (lo + hi)
        if excess_demand_kernel(mid, thetas, f, ratio, gamma, A, a, c) > 0.0:
            hi = mid
        else:
            lo = mid
    b = 0.5 * (lo + hi)
    if b < B_FLOOR:
        return 0.0, FLAG_DEGENERATE
    return b, FLAG_INTERIOR


@njit(cache=True)
def sigma_profile_kernel(b, thetas, gamma, A, a, c, out):
    """Fill per-type bond shares at borrowing b (gamma > 0)."""
    H, L, xmax = _gain_xmax(b, gamma, A, a, c)
    inv_g = 1.0 / gamma
    for i in range(thetas.size):
        out[i] = sigma_one(thetas[i], gamma, H, L, inv_g, xmax)


@njit(cache=True)
def solve_risk_neutral_kernel(alphas, f, out_sigma):
    """Risk-neutral equilibrium from per-type indifference levels.

    ``alphas`` is increasing with alphas[0] = 0 and alphas[-1] = 1; omega_j,
    the wealth share of types at least as optimistic as j, is decreasing.
    The crossing index i (last with alpha_i < omega_i) splits two cases:

    - alpha_i <= omega_{i+1}: everyone above i invests fully, b = omega_{i+1};
      the crossing type stays in cash even if indifferent.
    - otherwise the crossing type is marginal, partially invested, and b is
      its own indifference level alpha_i.

    Returns (b, marginal_index, flag) and fills ``out_sigma``; the marginal
    index follows the rule "most pessimistic type whose wealth is needed":
    smallest m with 1 - F(theta_m) < b.
    """
    n = f.size
    omega = np.empty(n + 1)
    omega[n] = 0.0
    for j in range(n - 1, -1, -1):
        omega[j] = omega[j + 1] + f[j]

    i = 0
    for j in range(n - 1, -1, -1):
        if alphas[j] < omega[j]:
            i = j
            break

    if alphas[i] <= omega[i + 1]:
        b = omega[i + 1]
        partial = -1.0
    else:
        b = alphas[i]
        partial = (b - omega[i + 1]) / f[i]

    for j in range(n):
        out_sigma[j] = 0.0
    for j in range(i + 1, n):
        out_sigma[j] = 1.0
    if partial >= 0.0:
        out_sigma[i] = partial

    if b < B_FLOOR:
        return 0.0, -1, FLAG_DEGENERATE

    marginal = n - 1
    for m in range(n):
        if omega[m + 1] < b:
            marginal = m
            break
    return b, marginal, FLAG_INTERIOR


@njit(cache=True)
def _mix_uniform_inplace(f, eps):
    n = f.size
    tot = 0.0
    for i in range(n):
        f[i] = (1.0 - eps) * f[i] + eps / n
        tot += f[i]
    for i in range(n):
        f[i] /= tot


@njit(cache=True)
def _pi_of(b, pi_kind, p0, p1, p2, p3):
    if pi_kind == 0:
        return p0
    return p0 + p1 / (1.0 + np.exp(p2 - p3 * b))


@njit(cache=True)
def step_kernel(f, thetas, alphas, ratio, gamma, A, a, c,
                pi_kind, p0, p1, p2, p3, eps, mix_before, u, sigma_ws):
    """Advance the wealth distribution by one period, in place.

    Sequence: noise mixing, equilibrium, shock probability, state draw
    (``u`` is this period's uniform variate, always consumed by the caller),
    wealth update.  Degenerate periods leave wealth untouched with unit
    growth.  Returns (b, q, p, pi, state, growth, realized_y, marginal_index,
    mean_belief, flag).
    """
    n = f.size
    if mix_before and eps > 0.0:
        _mix_uniform_inplace(f, eps)

    if gamma == 0.0:
        b, marginal, flag = solve_risk_neutral_kernel(alphas, f, sigma_ws)
    else:
        marginal = -1
        b, flag = solve_borrowing_kernel(thetas, f, ratio, gamma, A, a, c)
        if flag != FLAG_DEGENERATE:
            sigma_profile_kernel(b, thetas, gamma, A, a, c, sigma_ws)
            if flag == FLAG_CORNER_TOP:
                sigma_ws[n - 1] = 1.0

    if flag == FLAG_DEGENERATE:
        if not mix_before and eps > 0.0:
            _mix_uniform_inplace(f, eps)
        mean = 0.0
        for i in range(n):
            mean += thetas[i] * f[i]
        return 0.0, 0.0, np.nan, np.nan, STATE_NONE, 1.0, 0.0, -1, mean, flag

    hb = A * b ** a
    lb = c * b
    q = hb
    p = b / hb
    pi = _pi_of(b, pi_kind, p0, p1, p2, p3)
    good = u < pi
    inv_p = hb / b
    recovery = lb / q

    tot = 0.0
    for i in range(n):
        s = sigma_ws[i]
        if good:
            pay = 1.0 - s + s * inv_p
        else:
            pay = 1.0 - s + s * inv_p * recovery
        f[i] *= pay
        tot += f[i]
    if tot < 1e-300:
        return b, q, p, pi, STATE_NONE, tot, 0.0, marginal, np.nan, 3
    for i in range(n):
        f[i] /= tot

    if not mix_before and eps > 0.0:
        _mix_uniform_inplace(f, eps)

    mean = 0.0
    for i in range(n):
        mean += thetas[i] * f[i]
    y = hb if good else lb
    state = STATE_GOOD if good else STATE_BAD
    return b, q, p, pi, state, tot, y, marginal, mean, flag


@njit(cache=True)
def simulate_kernel(f, thetas, alphas, ratio, gamma, A, a, c,
                    pi_kind, p0, p1, p2, p3, eps, mix_before, us,
                    b_out, q_out, p_out, pi_out, state_out, growth_out,
                    y_out, marginal_out, mean_out, snap_at, snaps):
    """Run T sequential periods, filling per-period columns.

    ``us`` holds one pre-drawn uniform variate per period (consumed whether or
    not the period is degenerate, so runs sharing a seed share a state
    sequence).  Wealth snapshots are copied into ``snaps`` for the periods
    listed in ``snap_at``.  Returns 0, or 3 if aggregate wealth underflowed.
    """
    n = f.size
    sigma_ws = np.empty(n)
    snap_row = 0
    for t in range(us.size):
        b, q, p, pi, state, growth, y, marginal, mean, flag = step_kernel(
            f, thetas, alphas, ratio, gamma, A, a, c,
            pi_kind, p0, p1, p2, p3, eps, mix_before, us[t], sigma_ws)
        if flag == 3:
            return 3
        b_out[t] = b
        q_out[t] = q
        p_out[t] = p
        pi_out[t] = pi
        state_out[t] = state
        growth_out[t] = growth
        y_out[t] = y
        marginal_out[t] = marginal
        mean_out[t] = mean
        if snap_row < snap_at.size and snap_at[snap_row] == t:
            for i in range(n):
                snaps[snap_row, i] = f[i]
            snap_row += 1
    return 0


@njit(cache=True)
def scan_sign_changes_kernel(thetas, f, ratio, gamma, A, a, c, num):
    """Count sign changes of excess demand over ``num`` evenly spaced b values.

    Scans (0, 1) exclusive. Returns (changes, lo_bracket, hi_bracket) for the
    last negative-to-positive crossing found.
    """
    changes = 0
    lo_b = np.nan
    hi_b = np.nan
    prev_b = 1.0 / (num + 1.0)
    prev_e = excess_demand_kernel(prev_b, thetas, f, ratio, gamma, A, a, c)
    for k in range(2, num + 1):
        b = k / (num + 1.0)
        e = excess_demand_kernel(b, thetas, f, ratio, gamma, A, a, c)
        if (prev_e < 0.0 and e >= 0.0) or (prev_e >= 0.0 and e < 0.0):
            changes += 1
            lo_b = prev_b
            hi_b = b
        prev_b = b
        prev_e = e
    return changes, lo_b, hi_b
