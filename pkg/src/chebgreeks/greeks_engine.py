"""Spot delta and gamma by Chebyshev interpolation or central differences.

A Chebyshev estimate at ``x0`` samples the frozen-path pricer on ``n``
Chebyshev nodes of ``[x0 - a, x0 + a]`` and differentiates the interpolant.
With odd ``n`` the spot is itself a node, so the price needs no extra
revaluation. Each spot of a sweep builds its own interpolator.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from chebgreeks.adaptive_domain import DomainParams, adaptive_half_width, singularities_for
from chebgreeks.black import oracle_for
from chebgreeks.cheb_core import ChebInterpolator, chebyshev_points_around
from chebgreeks.errors import PricerError
from chebgreeks.payoffs import PayoffSpec
from chebgreeks.pricing import MarketState, McConfig, PathPricer, pricing_closure
from chebgreeks.stencils import FdScheme, fd_greeks

__all__ = [
    "METHODS",
    "GreeksRequest",
    "GreeksRecord",
    "GreeksReport",
    "ErrorStats",
    "chebyshev_greeks_at",
    "chebyshev_greeks",
    "fd_greeks_record",
    "greeks_sweep",
    "explanation_errors",
    "explanation_errors_from_arrays",
    "numerical_errors",
]

METHODS = ("fd3", "fd7", "chebyshev_adaptive", "chebyshev_fixed")

# largest half-width, as a fraction of the spot, that keeps every node positive
MAX_REL_HALF_WIDTH = 0.99


@dataclass(frozen=True)
class GreeksRequest:
    payoff: PayoffSpec
    market: MarketState
    method: str
    mc: McConfig
    spot_grid: tuple[float, ...]
    domain_params: DomainParams = field(default_factory=DomainParams)
    fd_scheme: FdScheme = field(default_factory=FdScheme)
    half_width: float | None = None
    half_width_relative: bool = False
    bump_asset: int = 0
    valuation_time: float = 0.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        grid = tuple(float(s) for s in np.atleast_1d(self.spot_grid))
        if not grid:
            raise ValueError("spot grid is empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("spot grid must be strictly increasing")
        object.__setattr__(self, "spot_grid", grid)
        if self.method == "chebyshev_fixed" and not (self.half_width and self.half_width > 0):
            raise ValueError("chebyshev_fixed needs a positive half_width")

    @property
    def is_chebyshev(self) -> bool:
        return self.method.startswith("chebyshev")

    @property
    def scheme(self) -> FdScheme:
        points = 7 if self.method == "fd7" else 3
        return FdScheme(points, self.fd_scheme.bump, self.fd_scheme.relative)

    @property
    def nodes(self) -> int:
        return self.domain_params.n if self.is_chebyshev else self.scheme.points


@dataclass
class GreeksRecord:
    spot: float
    price: float
    delta: float
    gamma: float
    method: str
    half_width: float
    nodes: int
    paths: int
    clipped: bool = False
    error: str | None = None


@dataclass
class GreeksReport:
    method: str
    records: list[GreeksRecord]
    summary: dict[str, float] = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    @property
    def spots(self) -> np.ndarray:
        return self.column("spot")

    @property
    def prices(self) -> np.ndarray:
        return self.column("price")

    @property
    def deltas(self) -> np.ndarray:
        return self.column("delta")

    @property
    def gammas(self) -> np.ndarray:
        return self.column("gamma")


def chebyshev_greeks_at(pricer: Callable[[float], float], x0: float, a: float, n: int = 7):
    """``(price, delta, gamma, interpolator)`` from ``n`` nodes around ``x0``.

    For odd ``n`` the price is the nodal value at ``x0``; for even ``n`` it is
    the interpolated value.
    """
    grid = chebyshev_points_around(x0, a, n)
    values = []
    for x in grid.points:
        try:
            values.append(float(pricer(float(x))))
        except Exception as exc:
            raise PricerError(f"pricer failed at node {x!r}: {exc}", float(x)) from exc
    interp = ChebInterpolator(grid, values, max_order=2)
    return interp(x0), interp.derivative(1, x0), interp.derivative(2, x0), interp


def _clip(x0: float, width: float) -> tuple[float, bool]:
    limit = MAX_REL_HALF_WIDTH * x0
    return (limit, True) if width >= limit else (width, False)


def _half_width(req: GreeksRequest, x0: float) -> float:
    if req.method == "chebyshev_fixed":
        return req.half_width * x0 if req.half_width_relative else req.half_width
    sing = singularities_for(req.payoff, req.valuation_time, req.bump_asset)
    return adaptive_half_width(x0, req.market.vols[req.bump_asset], sing, req.domain_params)


def _pricer_for(req: GreeksRequest, threads: int = 1) -> PathPricer:
    return pricing_closure(req.payoff, req.market, req.mc, req.bump_asset, threads)


def chebyshev_greeks(req: GreeksRequest, x0: float, pricer=None) -> GreeksRecord:
    if not req.is_chebyshev:
        raise ValueError(f"{req.method} is not a Chebyshev method")
    pricer = _pricer_for(req) if pricer is None else pricer
    a, clipped = _clip(x0, _half_width(req, x0))
    n = req.domain_params.n
    price, delta, gamma, _ = chebyshev_greeks_at(pricer, x0, a, n)
    return GreeksRecord(x0, price, delta, gamma, req.method, a, n, req.mc.paths, clipped)


def fd_greeks_record(req: GreeksRequest, x0: float, pricer=None) -> GreeksRecord:
    scheme = req.scheme
    pricer = _pricer_for(req) if pricer is None else pricer
    h = scheme.spacing(x0)
    clipped = False
    if scheme.half_points * h >= MAX_REL_HALF_WIDTH * x0:
        h = MAX_REL_HALF_WIDTH * x0 / scheme.half_points
        scheme = FdScheme(scheme.points, h)
        clipped = True
    price, delta, gamma = fd_greeks(pricer, x0, scheme)
    return GreeksRecord(x0, price, delta, gamma, req.method, h, scheme.points, req.mc.paths, clipped)


def greeks_sweep(req: GreeksRequest, threads: int = 1, pricer=None) -> GreeksReport:
    """Greeks at every spot of the request's grid.

    A failing spot is recorded with NaN Greeks and its error message; the
    sweep carries on. The result does not depend on ``threads``.
    """
    pricer = _pricer_for(req, threads) if pricer is None else pricer
    one = chebyshev_greeks if req.is_chebyshev else fd_greeks_record

    def run(x0):
        try:
            return one(req, x0, pricer)
        except (PricerError, ValueError, ArithmeticError) as exc:
            nan = math.nan
            return GreeksRecord(x0, nan, nan, nan, req.method, nan, req.nodes, req.mc.paths,
                                error=str(exc))

    if threads > 1 and len(req.spot_grid) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(run, req.spot_grid))
    else:
        records = [run(x0) for x0 in req.spot_grid]

    report = GreeksReport(req.method, records)
    widths = report.column("half_width")
    report.summary["nodes"] = req.nodes
    report.summary["paths"] = req.mc.paths
    report.summary["half_width_min"] = float(np.nanmin(widths)) if np.isfinite(widths).any() else math.nan
    report.summary["half_width_max"] = float(np.nanmax(widths)) if np.isfinite(widths).any() else math.nan
    report.summary["failures"] = sum(r.error is not None for r in records)
    if len(records) >= 2:
        eps_d, eps_g = explanation_errors(report)
        report.summary["expl_err_delta"] = eps_d
        report.summary["expl_err_gamma"] = eps_g
    return report


def explanation_errors_from_arrays(spots, prices, deltas, gammas) -> tuple[float, float]:
    """Max mismatch between a Greek times the spot step and the change it should explain.

    Differences are forward along the grid, so the last spot only enters as
    the end of the final step.
    """
    s = np.asarray(spots, dtype=float)
    if s.size < 2:
        raise ValueError("explanation errors need at least two spots")
    p, d, g = (np.asarray(v, dtype=float) for v in (prices, deltas, gammas))
    ds = np.diff(s)
    eps_d = np.abs(d[:-1] * ds - np.diff(p))
    eps_g = np.abs(g[:-1] * ds - np.diff(d))
    return _nanmax(eps_d), _nanmax(eps_g)


def _nanmax(a: np.ndarray) -> float:
    return float(np.nanmax(a)) if np.isfinite(a).any() else math.nan


def explanation_errors(report: GreeksReport) -> tuple[float, float]:
    return explanation_errors_from_arrays(report.spots, report.prices, report.deltas, report.gammas)


@dataclass(frozen=True)
class ErrorStats:
    eps_delta: np.ndarray
    eps_gamma: np.ndarray

    def stats(self) -> dict[str, float]:
        out = {}
        for name, e in (("delta", self.eps_delta), ("gamma", self.eps_gamma)):
            out[f"avg_eps_{name}"] = float(np.nanmean(e))
            out[f"std_eps_{name}"] = float(np.nanstd(e))
            out[f"max_eps_{name}"] = float(np.nanmax(e))
        return out


def numerical_errors(report: GreeksReport, oracle) -> ErrorStats:
    """Per-spot absolute delta and gamma errors against a closed-form oracle.

    ``oracle`` is a callable ``spots -> (price, delta, gamma)``, or a
    ``(payoff, market)`` pair for which :func:`oracle_for` finds one.
    """
    if isinstance(oracle, tuple):
        oracle = oracle_for(*oracle)
    _, delta, gamma = oracle(report.spots)
    return ErrorStats(np.abs(report.deltas - delta), np.abs(report.gammas - gamma))
