"""Payoff definitions.

Every payoff is monitored only at its fixing times, given in year fractions
from the valuation date. ``cashflows`` receives simulated fixings of shape
``(paths, fixings, assets)`` and returns undiscounted amounts paid at each
fixing, shape ``(paths, fixings)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np
from numba import njit

__all__ = ["Call", "Put", "Digital", "Tarf", "Autocallable", "PayoffSpec"]


def _check_schedule(times) -> tuple[float, ...]:
    t = tuple(float(x) for x in times)
    if not t:
        raise ValueError("fixing schedule is empty")
    if t[0] <= 0 or any(b <= a for a, b in zip(t, t[1:])):
        raise ValueError("fixing times must be positive and strictly increasing")
    return t


def _check_notionals(notionals, n: int, default: float) -> tuple[float, ...]:
    if notionals is None:
        return (default,) * n
    out = tuple(float(x) for x in notionals)
    if len(out) != n:
        raise ValueError(f"expected {n} notionals, got {len(out)}")
    return out


@dataclass(frozen=True)
class _Vanilla:
    strike: float
    maturity: float

    n_assets = 1

    def __post_init__(self):
        if not self.strike > 0:
            raise ValueError("strike must be positive")
        if not self.maturity > 0:
            raise ValueError("maturity must be positive")

    @property
    def fixing_times(self) -> tuple[float, ...]:
        return (float(self.maturity),)

    def levels(self, asset: int = 0, next_index: int = 0) -> tuple[float, ...]:
        return (float(self.strike),)


@dataclass(frozen=True)
class Call(_Vanilla):
    def cashflows(self, s: np.ndarray) -> np.ndarray:
        return np.maximum(s[:, :, 0] - self.strike, 0.0)


@dataclass(frozen=True)
class Put(_Vanilla):
    def cashflows(self, s: np.ndarray) -> np.ndarray:
        return np.maximum(self.strike - s[:, :, 0], 0.0)


@dataclass(frozen=True)
class Digital(_Vanilla):
    """Pays 1 if the asset fixes strictly above the strike."""

    def cashflows(self, s: np.ndarray) -> np.ndarray:
        return (s[:, :, 0] > self.strike).astype(float)


@dataclass(frozen=True)
class Tarf:
    """Target redemption forward with put-like coupons.

    At each fixing the coupon ``(K - S) / (K S)`` is paid below the strike
    and, with a negative sign, above the knock-in barrier. Coupons stop once
    the running sum of ``(K - S)^+`` reaches the target (the breaching
    fixing pays nothing) or once the asset has fixed below the knock-out
    barrier.
    """

    strike: float
    ki_barrier: float
    ko_barrier: float
    target: float
    fixings: tuple[float, ...]
    notionals: tuple[float, ...] | None = None
    strike_is_singular: bool = True

    n_assets = 1

    def __post_init__(self):
        fix = _check_schedule(self.fixings)
        object.__setattr__(self, "fixings", fix)
        object.__setattr__(self, "notionals", _check_notionals(self.notionals, len(fix), 1.0))
        if min(self.strike, self.ki_barrier, self.ko_barrier) <= 0:
            raise ValueError("strike and barriers must be positive")
        if not self.target > 0:
            raise ValueError("target must be positive")

    @property
    def fixing_times(self) -> tuple[float, ...]:
        return self.fixings

    def levels(self, asset: int = 0, next_index: int = 0) -> tuple[float, ...]:
        lv = [self.ko_barrier, self.ki_barrier]
        if self.strike_is_singular:
            lv.append(self.strike)
        return tuple(sorted(float(x) for x in lv))

    def cashflows(self, s: np.ndarray) -> np.ndarray:
        k = self.strike
        x = s[:, :, 0]
        coupon = (k - x) / (k * x) * ((x <= k).astype(float) + (x > self.ki_barrier))
        below_target = np.cumsum(np.maximum(k - x, 0.0), axis=1) < self.target
        not_knocked = np.cumsum(x < self.ko_barrier, axis=1) == 0
        return coupon * below_target * not_knocked * np.asarray(self.notionals)

    def discounted_values(self, spots: np.ndarray, growth: np.ndarray, discount: np.ndarray) -> np.ndarray:
        """Per-path discounted sum of :meth:`cashflows`, stopping each path at knock-out or target."""
        out = np.empty(growth.shape[0])
        _tarf_values(np.ascontiguousarray(growth[:, :, 0]), float(spots[0]), self.strike,
                     self.ki_barrier, self.ko_barrier, self.target,
                     np.asarray(self.notionals), discount, out)
        return out


@njit(cache=True, nogil=True)
def _tarf_values(g, spot, k, ki, ko, target, notionals, discount, out):
    for p in range(g.shape[0]):
        accrued = 0.0
        total = 0.0
        for i in range(g.shape[1]):
            x = spot * g[p, i]
            if x < ko:
                break
            if x < k:
                accrued += k - x
            if accrued >= target:
                break
            factor = (1.0 if x <= k else 0.0) + (1.0 if x > ki else 0.0)
            if factor != 0.0:
                total += (k - x) / (k * x) * factor * notionals[i] * discount[i]
        out[p] = total


@dataclass(frozen=True)
class Autocallable:
    """Worst-of autocallable with memory coupons and a capital-guarantee leg.

    Performance is ``min_a S_a / ref_a``. At the first fixing where it is at
    or above ``call_barrier`` the note terminates paying ``rebate`` only.
    Before that, a fixing at or above ``coupon_barrier`` pays its own coupon
    plus every coupon missed so far. At the last fixing, if still alive, a
    performance below ``guarantee_barrier`` adds ``performance - 1``.
    """

    coupon_barrier: float
    call_barrier: float
    guarantee_barrier: float
    rebate: float
    fixings: tuple[float, ...]
    ref_fixings: tuple[float, ...]
    notionals: tuple[float, ...] | None = None
    n_assets: int = field(init=False, default=2)

    def __post_init__(self):
        fix = _check_schedule(self.fixings)
        object.__setattr__(self, "fixings", fix)
        object.__setattr__(self, "notionals", _check_notionals(self.notionals, len(fix), 0.05))
        refs = tuple(float(x) for x in self.ref_fixings)
        if not refs or min(refs) <= 0:
            raise ValueError("reference fixings must be positive")
        object.__setattr__(self, "ref_fixings", refs)
        object.__setattr__(self, "n_assets", len(refs))
        if min(self.coupon_barrier, self.call_barrier, self.guarantee_barrier) <= 0:
            raise ValueError("barriers must be positive")

    @property
    def fixing_times(self) -> tuple[float, ...]:
        return self.fixings

    def levels(self, asset: int = 0, next_index: int = 0) -> tuple[float, ...]:
        ref = self.ref_fixings[asset]
        lv = [self.coupon_barrier * ref, self.call_barrier * ref]
        if next_index == len(self.fixings) - 1:
            lv.append(self.guarantee_barrier * ref)
        return tuple(sorted(lv))

    def cashflows(self, s: np.ndarray) -> np.ndarray:
        perf = np.min(s / np.asarray(self.ref_fixings), axis=2)
        called = perf >= self.call_barrier
        ever_called = np.cumsum(called, axis=1) > 0
        alive = ~ever_called
        first_call = called & np.concatenate(
            [np.ones((perf.shape[0], 1), dtype=bool), alive[:, :-1]], axis=1
        )
        last = perf.shape[1] - 1
        out = np.zeros_like(perf)
        owed = np.zeros(perf.shape[0])
        for i, n_i in enumerate(self.notionals):
            owed = owed + n_i
            paid = owed * (perf[:, i] >= self.coupon_barrier)
            if i == last:
                p = perf[:, i]
                paid = paid + (p - 1.0) * (p < self.guarantee_barrier)
            flow = alive[:, i] * paid + first_call[:, i] * self.rebate
            out[:, i] = flow
            owed = owed - flow
        return out


PayoffSpec = Union[Call, Put, Digital, Tarf, Autocallable]
