"""Monte Carlo pricing under (multi-asset) Black dynamics.

Gaussian draws are keyed to ``(master_seed, path index, fixing index)``
through a counter-based generator: paths are cut into fixed-size blocks and
block ``b`` reads its own Philox stream. The draws of a path therefore do
not depend on the spot, on the total path count or on how many threads
generated them, which gives common random numbers across revaluations for
free.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from chebgreeks.payoffs import PayoffSpec

__all__ = [
    "PATH_BLOCK",
    "MarketState",
    "McConfig",
    "McResult",
    "PathPricer",
    "block_normals",
    "pricing_closure",
    "mc_price",
]

PATH_BLOCK = 1 << 14
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class MarketState:
    spots: tuple[float, ...]
    vols: tuple[float, ...]
    rate: float = 0.0
    correlation: float = 0.0

    def __post_init__(self):
        spots = tuple(float(x) for x in np.atleast_1d(self.spots))
        vols = tuple(float(x) for x in np.atleast_1d(self.vols))
        if len(spots) != len(vols):
            raise ValueError("one volatility per spot is required")
        if min(spots) <= 0:
            raise ValueError("spots must be positive")
        if min(vols) < 0:
            raise ValueError("volatilities must be non-negative")
        if not -1.0 <= self.correlation <= 1.0:
            raise ValueError("correlation must lie in [-1, 1]")
        object.__setattr__(self, "spots", spots)
        object.__setattr__(self, "vols", vols)

    @classmethod
    def single(cls, spot: float, vol: float, rate: float = 0.0) -> "MarketState":
        return cls((spot,), (vol,), rate)

    @property
    def n_assets(self) -> int:
        return len(self.spots)

    def with_spot(self, asset: int, spot: float) -> "MarketState":
        spots = list(self.spots)
        spots[asset] = spot
        return MarketState(tuple(spots), self.vols, self.rate, self.correlation)

    def cholesky(self) -> np.ndarray:
        n = self.n_assets
        corr = np.full((n, n), self.correlation)
        np.fill_diagonal(corr, 1.0)
        if n == 1:
            return corr
        try:
            return np.linalg.cholesky(corr)
        except np.linalg.LinAlgError:
            pass
        # semidefinite at |rho| = 1
        vals, vecs = np.linalg.eigh(corr)
        if vals.min() < -1e-12:
            raise ValueError(f"correlation {self.correlation} is not admissible for {n} assets")
        return vecs * np.sqrt(np.clip(vals, 0.0, None))


@dataclass(frozen=True)
class McConfig:
    paths: int = 300_000
    master_seed: int = 1
    antithetic: bool = False

    def __post_init__(self):
        if self.paths < 1:
            raise ValueError("paths must be >= 1")


@dataclass(frozen=True)
class McResult:
    price: float
    stderr: float
    paths: int


def block_normals(seed: int, block: int, size: int, shape: tuple[int, ...], antithetic: bool = False):
    """Standard normals for ``size`` paths of block ``block``.

    With antithetic sampling the second half of the block mirrors the first.
    """
    bitgen = np.random.Philox(key=seed & _SEED_MASK, counter=[0, 0, block, 0])
    gen = np.random.Generator(bitgen)
    if not antithetic:
        return gen.standard_normal((size,) + shape)
    half = (size + 1) // 2
    z = gen.standard_normal((half,) + shape)
    return np.concatenate([z, -z])[:size]


def _blocks(paths: int) -> list[tuple[int, int, int]]:
    out = []
    for b, start in enumerate(range(0, paths, PATH_BLOCK)):
        out.append((b, start, min(PATH_BLOCK, paths - start)))
    return out


def _map(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


class PathPricer:
    """Spot-to-price map over a frozen set of simulated paths.

    Only the spot of ``bump_asset`` varies between calls; every call reuses
    the same normalised growth factors ``S_t / S_0``.
    """

    def __init__(self, payoff: PayoffSpec, market: MarketState, cfg: McConfig,
                 bump_asset: int = 0, threads: int = 1):
        if payoff.n_assets != market.n_assets:
            raise ValueError(
                f"payoff needs {payoff.n_assets} asset(s), market has {market.n_assets}"
            )
        if not 0 <= bump_asset < market.n_assets:
            raise ValueError(f"no asset with index {bump_asset}")
        self.payoff = payoff
        self.market = market
        self.cfg = cfg
        self.bump_asset = bump_asset
        self.threads = max(1, int(threads))

        times = np.asarray(payoff.fixing_times, dtype=float)
        dt = np.diff(times, prepend=0.0)
        self._discount = np.exp(-market.rate * times)
        vols = np.asarray(market.vols)
        drift = (market.rate - 0.5 * vols**2)[None, :] * dt[:, None]
        scale = vols[None, :] * np.sqrt(dt)[:, None]
        chol = market.cholesky()
        n_fix, n_assets = len(times), market.n_assets

        def growth(block):
            b, _, size = block
            z = block_normals(cfg.master_seed, b, size, (n_fix, n_assets), cfg.antithetic)
            if n_assets > 1:
                z = z @ chol.T
            return np.exp(np.cumsum(drift + scale * z, axis=1))

        self._blocks = _blocks(cfg.paths)
        self._growth = _map(growth, self._blocks, self.threads)

    @property
    def paths(self) -> int:
        return self.cfg.paths

    def discounted_payoffs(self, spot: float) -> np.ndarray:
        """Discounted payoff of every path when the bumped asset starts at ``spot``."""
        if not spot > 0:
            raise ValueError(f"spot must be positive, got {spot}")
        s0 = np.array(self.market.spots)
        s0[self.bump_asset] = spot

        fast = getattr(self.payoff, "discounted_values", None)

        def value(g):
            if fast is not None:
                return fast(s0, g, self._discount)
            return (self.payoff.cashflows(s0 * g) * self._discount).sum(axis=1)

        return np.concatenate(_map(value, self._growth, self.threads))

    def price_and_error(self, spot: float) -> McResult:
        v = self.discounted_payoffs(spot)
        stderr = float(v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0
        return McResult(float(v.mean()), stderr, int(v.size))

    def __call__(self, spot: float) -> float:
        return float(self.discounted_payoffs(spot).mean())


def pricing_closure(payoff: PayoffSpec, market: MarketState, cfg: McConfig,
                    bump_asset: int = 0, threads: int = 1) -> PathPricer:
    """Deterministic pricer in the spot of ``bump_asset`` (common random numbers)."""
    return PathPricer(payoff, market, cfg, bump_asset, threads)


def mc_price(payoff: PayoffSpec, market: MarketState, cfg: McConfig, threads: int = 1) -> McResult:
    """Discounted Monte Carlo price and its standard error."""
    pricer = PathPricer(payoff, market, cfg, 0, threads)
    return pricer.price_and_error(market.spots[0])
