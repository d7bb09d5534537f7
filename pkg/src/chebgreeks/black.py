"""Closed-form Black prices and spot Greeks for calls, puts and digitals."""

from __future__ import annotations

import numpy as np
from scipy.special import ndtr

from chebgreeks.errors import UnsupportedOracleError
from chebgreeks.payoffs import Call, Digital, Put
from chebgreeks.pricing import MarketState

__all__ = ["black_analytics", "oracle_for"]

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def _pdf(x):
    return _INV_SQRT_2PI * np.exp(-0.5 * x * x)


def black_analytics(kind: str, market: MarketState, strike: float, maturity: float,
                    spot=None, asset: int = 0):
    """Black ``(price, delta, gamma)`` of a call, put or cash-or-nothing digital.

    ``spot`` overrides the market spot and may be an array. Zero volatility
    returns the deterministic limits (gamma is 0 away from the kink).
    """
    if kind not in ("call", "put", "digital"):
        raise ValueError(f"unknown option kind {kind!r}")
    s = np.asarray(market.spots[asset] if spot is None else spot, dtype=float)
    vol, r = market.vols[asset], market.rate
    if np.any(s <= 0) or strike <= 0 or maturity <= 0:
        raise ValueError("spot, strike and maturity must be positive")
    df = np.exp(-r * maturity)

    if vol == 0.0:
        itm = (s * np.exp(r * maturity) > strike).astype(float)
        zero = np.zeros_like(s)
        if kind == "call":
            out = (np.maximum(s - strike * df, 0.0), itm, zero)
        elif kind == "put":
            out = (np.maximum(strike * df - s, 0.0), itm - 1.0, zero)
        else:
            out = (df * itm, zero, zero)
    else:
        sd = vol * np.sqrt(maturity)
        d1 = (np.log(s / strike) + (r + 0.5 * vol * vol) * maturity) / sd
        d2 = d1 - sd
        if kind == "call":
            out = (s * ndtr(d1) - strike * df * ndtr(d2), ndtr(d1), _pdf(d1) / (s * sd))
        elif kind == "put":
            out = (strike * df * ndtr(-d2) - s * ndtr(-d1), ndtr(d1) - 1.0, _pdf(d1) / (s * sd))
        else:
            out = (
                df * ndtr(d2),
                df * _pdf(d2) / (s * sd),
                -df * _pdf(d2) * d1 / (s * s * sd * sd),
            )
    if np.ndim(s) == 0:
        return tuple(float(v) for v in out)
    return out


def oracle_for(payoff, market: MarketState, asset: int = 0):
    """Return ``spot -> (price, delta, gamma)`` for payoffs with a closed form."""
    kinds = {Call: "call", Put: "put", Digital: "digital"}
    kind = kinds.get(type(payoff))
    if kind is None or market.n_assets != 1:
        raise UnsupportedOracleError(f"no closed-form Greeks for {type(payoff).__name__}")

    def oracle(spot):
        return black_analytics(kind, market, payoff.strike, payoff.maturity, spot=spot, asset=asset)

    return oracle
