"""Model primitives: belief grids, wealth distributions, revenue and shock-probability families.

The economy is populated by investors who differ only in the subjective
probability ``theta`` they assign to a good aggregate state.  The state of the
system is the *belief distribution of wealth*: the share of aggregate wealth
held by each belief type.  This module holds those primitives plus the
parametric revenue and shock-probability families, and a validator that checks
a configuration satisfies the regularity conditions the solvers rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "BeliefGrid",
    "WealthShares",
    "RevenueSpec",
    "ConstantShockProb",
    "LogisticShockProb",
    "ShockProbSpec",
    "EconomySpec",
    "CheckResult",
    "ValidationReport",
    "validate_spec",
    "eval_shock_prob",
]

# Max tolerated |sum - 1| before renormalizing a simplex that should already
# be normalized; larger drift indicates an internal error upstream.
SIMPLEX_DRIFT_TOL = 1e-9


def _read_only(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.float64, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class BeliefGrid:
    """Ordered finite set of belief types 0 = theta_1 < ... < theta_n = 1."""

    thetas: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.thetas, dtype=np.float64)
        if t.ndim != 1 or t.size < 2:
            raise ValueError("belief grid needs at least two types")
        if not np.all(np.diff(t) > 0.0):
            raise ValueError("belief grid must be strictly increasing")
        if t[0] != 0.0 or t[-1] != 1.0:
            raise ValueError("belief grid must run from 0 to 1 inclusive")
        object.__setattr__(self, "thetas", _read_only(t))

    @classmethod
    def regular(cls, n: int = 101) -> "BeliefGrid":
        """Evenly spaced grid of ``n`` belief types on [0, 1].

        Built as ``i / (n - 1)`` so round decimal beliefs (0.52, 0.8, ...)
        compare exactly against float literals.
        """
        if n < 2:
            raise ValueError("need at least two belief types")
        return cls(np.arange(n, dtype=np.float64) / (n - 1))

    @property
    def n(self) -> int:
        return int(self.thetas.size)

    def __len__(self) -> int:
        return self.n

    def index_of(self, theta: float) -> int:
        """Index of an exact grid value; raises if ``theta`` is not on the grid."""
        idx = int(np.searchsorted(self.thetas, theta))
        if idx >= self.n or self.thetas[idx] != theta:
            raise ValueError(f"theta={theta!r} is not a grid point")
        return idx


@dataclass(frozen=True, eq=False)
class WealthShares:
    """Probability vector over a belief grid: the belief distribution of wealth."""

    grid: BeliefGrid
    shares: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.shares, dtype=np.float64)
        if w.shape != (self.grid.n,):
            raise ValueError("shares must align with the belief grid")
        if np.any(w < 0.0) or not np.all(np.isfinite(w)):
            raise ValueError("shares must be finite and nonnegative")
        total = float(w.sum())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"shares must sum to 1 (got {total!r})")
        # cumulative sums are monotone by construction; pin the top at 1
        cum = np.minimum(np.cumsum(w), 1.0)
        object.__setattr__(self, "shares", _read_only(w))
        object.__setattr__(self, "_cum", _read_only(cum))

    @classmethod
    def uniform(cls, grid: BeliefGrid) -> "WealthShares":
        return cls(grid, np.full(grid.n, 1.0 / grid.n))

    @classmethod
    def point_mass(cls, grid: BeliefGrid, theta: float) -> "WealthShares":
        w = np.zeros(grid.n)
        w[grid.index_of(theta)] = 1.0
        return cls(grid, w)

    @classmethod
    def from_weights(cls, grid: BeliefGrid, weights: np.ndarray,
                     max_drift: float | None = None) -> "WealthShares":
        """Normalize nonnegative weights into shares.

        ``max_drift`` guards updates that should already preserve the simplex:
        if |sum - 1| exceeds it, something upstream went numerically wrong.
        """
        w = np.asarray(weights, dtype=np.float64)
        total = float(w.sum())
        if max_drift is not None and abs(total - 1.0) > max_drift:
            raise RuntimeError(f"simplex drift {total - 1.0:.3e} exceeds {max_drift:.0e}")
        if total <= 0.0 or not math.isfinite(total):
            raise ValueError("weights must have positive finite total")
        return cls(grid, w / total)

    def cdf(self, x: float) -> float:
        """Right-continuous cumulative wealth share at belief value ``x``.

        ``x`` outside [0, 1] is clamped; ``cdf(1)`` is exactly 1.
        """
        x = min(max(x, 0.0), 1.0)
        k = int(np.searchsorted(self.grid.thetas, x, side="right"))
        if k == 0:
            return 0.0
        if k == self.grid.n:
            return 1.0
        return float(self._cum[k - 1])

    def cdf_values(self) -> np.ndarray:
        """Cumulative shares at every grid point (last entry exactly 1)."""
        out = self._cum.copy()
        out[-1] = 1.0
        return out

    def mean_belief(self) -> float:
        """Wealth-weighted average belief."""
        return float(self.grid.thetas @ self.shares)

    def mix_with_uniform(self, eps: float) -> "WealthShares":
        """Convex combination with the uniform distribution, weight ``eps`` on uniform."""
        if not 0.0 <= eps < 1.0:
            raise ValueError("eps must be in [0, 1)")
        if eps == 0.0:
            return self
        w = (1.0 - eps) * self.shares + eps / self.grid.n
        return WealthShares.from_weights(self.grid, w, max_drift=SIMPLEX_DRIFT_TOL)

    def support(self) -> np.ndarray:
        """Indices of belief types holding strictly positive wealth."""
        return np.flatnonzero(self.shares > 0.0)


@dataclass(frozen=True)
class RevenueSpec:
    """Two-state revenue family: good state ``h(b) = A * b**a``, bad state ``l(b) = c * b``.

    ``b`` is borrowing per unit of aggregate investor wealth.  The good-state
    function is strictly concave for ``a < 1``; the bad-state recovery is
    linear with slope ``c``.  Degenerate members (``a = 1`` or ``c = 1``) can
    be constructed so the validator can report exactly which condition they
    break; solvers refuse them.
    """

    A: float = 1.0
    a: float = 0.5
    c: float = 0.5

    def __post_init__(self) -> None:
        if not (math.isfinite(self.A) and self.A >= 1.0):
            raise ValueError("A must be finite and >= 1")
        if not (0.0 < self.a <= 1.0):
            raise ValueError("a must be in (0, 1]")
        if not (0.0 <= self.c <= 1.0):
            raise ValueError("c must be in [0, 1]")

    def h(self, b):
        """Good-state revenue per unit wealth."""
        return self.A * np.power(b, self.a)

    def l(self, b):
        """Bad-state revenue per unit wealth."""
        return self.c * np.asarray(b, dtype=np.float64)


@dataclass(frozen=True)
class ConstantShockProb:
    """Good-state probability fixed regardless of borrowing."""

    pi_star: float

    def __post_init__(self) -> None:
        if not 0.0 < self.pi_star < 1.0:
            raise ValueError("pi_star must be in (0, 1)")

    def pi(self, b):
        if np.ndim(b):
            return np.full(np.shape(b), self.pi_star)
        return self.pi_star


@dataclass(frozen=True)
class LogisticShockProb:
    """Good-state probability responding smoothly to borrowing.

    pi(b) = base + amplitude / (1 + exp(offset - slope * b)).  With the
    defaults the probability rises from about 0.30 at zero borrowing toward
    0.80 at full borrowing, crossing the midpoint at b = offset / slope.
    """

    base: float = 0.3
    amplitude: float = 0.5
    offset: float = 4.75
    slope: float = 12.0

    def __post_init__(self) -> None:
        for b in (0.0, 1.0):
            p = self.pi(b)
            if not 0.0 < p < 1.0:
                raise ValueError(f"pi({b}) = {p!r} outside (0, 1)")

    def pi(self, b):
        z = self.offset - self.slope * np.asarray(b, dtype=np.float64)
        return self.base + self.amplitude / (1.0 + np.exp(z))

    @property
    def midpoint(self) -> float:
        """Borrowing level where the logistic term sits at half amplitude."""
        return self.offset / self.slope


ShockProbSpec = Union[ConstantShockProb, LogisticShockProb]


def eval_shock_prob(shock: ShockProbSpec, b):
    """Objective good-state probability at borrowing level ``b``."""
    return shock.pi(b)


@dataclass(frozen=True, eq=False)
class EconomySpec:
    """Full model configuration.

    ``gamma`` is the coefficient of relative risk aversion (0 = risk neutral,
    1 = log utility).  ``noise_eps`` is the per-period weight placed on a
    uniform belief distribution when the wealth distribution is perturbed.
    """

    grid: BeliefGrid
    revenue: RevenueSpec
    gamma: float
    shock_prob: ShockProbSpec
    noise_eps: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.gamma) and self.gamma >= 0.0):
            raise ValueError("gamma must be finite and >= 0")
        if not 0.0 <= self.noise_eps < 1.0:
            raise ValueError("noise_eps must be in [0, 1)")
        object.__setattr__(self, "_cache", {})

    def validation(self) -> "ValidationReport":
        """Validation report, computed once and cached (the spec is immutable)."""
        cache = self.__dict__["_cache"]
        if "report" not in cache:
            cache["report"] = validate_spec(self)
        return cache["report"]

    def cached(self, key: str, builder):
        """Memoize derived immutable data (solver tables) on this spec."""
        cache = self.__dict__["_cache"]
        if key not in cache:
            cache[key] = builder()
        return cache[key]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of every configuration check; data, not control flow."""

    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def __str__(self) -> str:
        return "\n".join(
            f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}" for c in self.checks
        )


def validate_spec(spec: EconomySpec) -> ValidationReport:
    """Check a configuration against the regularity conditions the solvers need.

    Returns a report with one entry per condition rather than raising, so a
    front end can show every violation at once.  Solver entry points refuse
    configurations whose report is not clean.
    """
    rev = spec.revenue
    checks: list[CheckResult] = []

    # concavity via second differences of h on a 1,000-point grid
    bs = np.linspace(0.0, 1.0, 1000)
    h = rev.h(bs)
    d2h = h[2:] - 2.0 * h[1:-1] + h[:-2]
    checks.append(CheckResult(
        "h_strictly_concave",
        bool(np.all(d2h < -1e-12)),
        f"max second difference of h = {float(d2h.max()):.3e} (needs < 0)",
    ))
    lo = rev.l(bs)
    d2l = lo[2:] - 2.0 * lo[1:-1] + lo[:-2]
    checks.append(CheckResult(
        "l_concave",
        bool(np.all(d2l <= 1e-12)),
        f"max second difference of l = {float(d2l.max()):.3e} (needs <= 0)",
    ))

    interior = bs[1:-1]
    ordered = bool(np.all(rev.l(interior) < interior) and np.all(interior < rev.h(interior)))
    checks.append(CheckResult(
        "revenue_ordering",
        ordered,
        "l(b) < b < h(b) on the interior of (0, 1)" if ordered
        else "l(b) < b < h(b) fails somewhere on (0, 1)",
    ))

    # interior-borrowing conditions, analytic for the built-in family
    checks.append(CheckResult(
        "h_over_b_unbounded_at_zero",
        rev.a < 1.0,
        f"h(b)/b = A*b**(a-1) diverges as b -> 0 iff a < 1 (a = {rev.a})",
    ))
    checks.append(CheckResult(
        "l_over_b_limit_below_one",
        rev.c < 1.0,
        f"l(b)/b = c must stay below 1 (c = {rev.c})",
    ))
    checks.append(CheckResult(
        "boundary_values",
        rev.c < 1.0 and rev.A == 1.0,
        f"needs l(1) < 1 = h(1); l(1) = {rev.c}, h(1) = {rev.A}",
    ))

    checks.append(CheckResult(
        "gamma_nonnegative",
        math.isfinite(spec.gamma) and spec.gamma >= 0.0,
        f"gamma = {spec.gamma}",
    ))
    checks.append(CheckResult(
        "noise_eps_range",
        0.0 <= spec.noise_eps < 1.0,
        f"noise_eps = {spec.noise_eps}",
    ))

    pis = eval_shock_prob(spec.shock_prob, np.linspace(0.0, 1.0, 1001))
    checks.append(CheckResult(
        "shock_prob_interior",
        bool(np.all((pis > 0.0) & (pis < 1.0))),
        f"pi(b) in ({float(pis.min()):.4f}, {float(pis.max()):.4f}) over b in [0, 1]",
    ))

    checks.append(CheckResult(
        "belief_grid",
        True,
        f"{spec.grid.n} types from 0 to 1, strictly increasing",
    ))

    return ValidationReport(tuple(checks))
