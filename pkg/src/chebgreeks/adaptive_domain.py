"""Time- and state-adaptive half-width of the interpolation domain.

The half-width grows with the diffusion scale to the next singular date and
with the clearance between the spot and the nearest singular level::

    a_tau = alpha * x0 * sigma * sqrt(tau)
    a_b   = min_i 0.5 * (|x0 - b_i| - a_tau)^+
    a     = min(max(a_b + a_tau, a_min), a_max)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date

from chebgreeks.payoffs import PayoffSpec

__all__ = [
    "SingularityMap",
    "DomainParams",
    "adaptive_half_width",
    "singularities_for",
    "year_fraction",
]


@dataclass(frozen=True)
class SingularityMap:
    tau: float
    levels: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.tau >= 0:
            raise ValueError(f"time to next singularity must be >= 0, got {self.tau}")
        levels = tuple(float(b) for b in self.levels)
        if not all(math.isfinite(b) for b in levels):
            raise ValueError("singularity levels must be finite")
        object.__setattr__(self, "levels", levels)


@dataclass(frozen=True)
class DomainParams:
    """Bounds are absolute, or fractions of the spot when ``relative`` is set."""

    alpha: float = 1.5
    a_min: float = 0.0075
    a_max: float = 0.05
    n: int = 7
    relative: bool = False

    def __post_init__(self):
        if not 1.0 <= self.alpha <= 2.0:
            raise ValueError(f"alpha must lie in [1, 2], got {self.alpha}")
        if not 0 < self.a_min <= self.a_max:
            raise ValueError(f"need 0 < a_min <= a_max, got {self.a_min}, {self.a_max}")
        if self.n < 3 or self.n % 2 == 0:
            raise ValueError(f"node count must be odd and >= 3, got {self.n}")

    @classmethod
    def from_bump(cls, bump: float, a_max: float, n: int = 7, alpha: float = 1.5,
                  relative: bool = False) -> "DomainParams":
        """Lower bound ``floor(n/2) * bump`` tied to the 3-point bump."""
        return cls(alpha=alpha, a_min=(n // 2) * bump, a_max=a_max, n=n, relative=relative)

    def bounds(self, x0: float) -> tuple[float, float]:
        scale = x0 if self.relative else 1.0
        return self.a_min * scale, self.a_max * scale


def adaptive_half_width(x0: float, sigma: float, sing: SingularityMap, params: DomainParams) -> float:
    if not x0 > 0:
        raise ValueError(f"spot must be positive, got {x0}")
    if not sigma >= 0:
        raise ValueError(f"volatility must be non-negative, got {sigma}")
    a_tau = params.alpha * x0 * sigma * math.sqrt(sing.tau)
    a_b = min((0.5 * max(abs(x0 - b) - a_tau, 0.0) for b in sing.levels), default=math.inf)
    lo, hi = params.bounds(x0)
    return min(max(a_b + a_tau, lo), hi)


def year_fraction(start: date, end: date) -> float:
    """ACT/365 fixed."""
    return (end - start).days / 365.0


def singularities_for(payoff: PayoffSpec, valuation_time: float = 0.0, asset: int = 0) -> SingularityMap:
    """Next singular date and the levels active on it, for the bumped ``asset``.

    ``valuation_time`` is in the same year-fraction units as the payoff's
    fixing schedule. A payoff with no fixing left maps to ``tau = 0`` and
    no levels.
    """
    times = payoff.fixing_times
    upcoming = [i for i, t in enumerate(times) if t > valuation_time]
    if not upcoming:
        return SingularityMap(0.0, ())
    nxt = upcoming[0]
    return SingularityMap(times[nxt] - valuation_time, payoff.levels(asset, nxt))
