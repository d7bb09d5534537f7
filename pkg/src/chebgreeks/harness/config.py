"""Experiment configuration files.

A config is an INI file with dotted section names, e.g.::

    [experiment]
    name = digital_errors

    [payoff]
    type = digital
    strike = 1.0
    maturity = 0.1

    [method.cheb7]
    kind = chebyshev_adaptive
    a_min = 0.0075

Fixing schedules are year fractions from the valuation date. They can be
listed (``fixings``), generated (``first_fixing_days``, ``period_days``,
``count``) or given as ISO dates with a ``valuation_date`` (ACT/365F).
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

import numpy as np

from chebgreeks.adaptive_domain import DomainParams, year_fraction
from chebgreeks.errors import ConfigError
from chebgreeks.payoffs import Autocallable, Call, Digital, PayoffSpec, Put, Tarf
from chebgreeks.pricing import MarketState, McConfig
from chebgreeks.stencils import FdScheme

__all__ = ["EXPERIMENTS", "MethodSpec", "ExperimentConfig", "load_config", "parse_config"]

EXPERIMENTS = ("convergence", "digital_errors", "sweep", "variance_scaling")

DAYS_PER_YEAR = 365.0


@dataclass(frozen=True)
class MethodSpec:
    label: str
    kind: str
    fd_scheme: FdScheme = field(default_factory=FdScheme)
    domain_params: DomainParams = field(default_factory=DomainParams)
    half_width: float | None = None
    relative: bool = True
    paths: int | None = None


@dataclass
class ExperimentConfig:
    name: str
    text: str
    parser: configparser.ConfigParser
    payoff_section: dict[str, str]
    market: MarketState
    mc: McConfig
    methods: list[MethodSpec]
    spot_grid: tuple[float, ...]
    output: str | None = None
    bump_asset: int = 0

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()[:16]

    def section(self, name: str) -> dict[str, str]:
        return dict(self.parser[name]) if self.parser.has_section(name) else {}

    def payoff(self, first_fixing_days: float | None = None) -> PayoffSpec:
        return build_payoff(self.payoff_section, first_fixing_days)


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.replace(",", " ").split()]


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _require(sec: dict[str, str], key: str, where: str) -> str:
    if key not in sec:
        raise ConfigError(f"[{where}] is missing '{key}'")
    return sec[key]


def _schedule(sec: dict[str, str], first_fixing_days: float | None) -> tuple[float, ...]:
    if "fixings" in sec:
        return tuple(_floats(sec["fixings"]))
    if "fixing_dates" in sec:
        val = date.fromisoformat(_require(sec, "valuation_date", "payoff"))
        return tuple(year_fraction(val, date.fromisoformat(d)) for d in sec["fixing_dates"].split())
    count = int(_require(sec, "count", "payoff"))
    first = float(first_fixing_days if first_fixing_days is not None
                  else _require(sec, "first_fixing_days", "payoff"))
    period = float(_require(sec, "period_days", "payoff"))
    return tuple((first + k * period) / DAYS_PER_YEAR for k in range(count))


def build_payoff(sec: dict[str, str], first_fixing_days: float | None = None) -> PayoffSpec:
    kind = _require(sec, "type", "payoff").lower()
    g = lambda key: float(_require(sec, key, "payoff"))  # noqa: E731
    notionals = tuple(_floats(sec["notionals"])) if "notionals" in sec else None
    if kind in ("call", "put", "digital"):
        cls = {"call": Call, "put": Put, "digital": Digital}[kind]
        return cls(g("strike"), g("maturity"))
    if kind == "tarf":
        fix = _schedule(sec, first_fixing_days)
        if notionals is None and "notional" in sec:
            notionals = (float(sec["notional"]),) * len(fix)
        return Tarf(g("strike"), g("ki_barrier"), g("ko_barrier"), g("target"), fix, notionals,
                    _bool(sec.get("strike_is_singular", "true")))
    if kind == "autocallable":
        fix = _schedule(sec, first_fixing_days)
        if notionals is None and "coupon" in sec:
            notionals = (float(sec["coupon"]),) * len(fix)
        return Autocallable(g("coupon_barrier"), g("call_barrier"), g("guarantee_barrier"),
                            g("rebate"), fix, tuple(_floats(_require(sec, "ref_fixings", "payoff"))),
                            notionals)
    raise ConfigError(f"unknown payoff type {kind!r}")


def _method(label: str, sec: dict[str, str]) -> MethodSpec:
    kind = _require(sec, "kind", f"method.{label}")
    relative = _bool(sec.get("relative", "true"))
    n = int(sec.get("n", 7))
    bump = float(sec.get("bump", 0.0025))
    points = 7 if kind == "fd7" else 3
    try:
        scheme = FdScheme(points, bump, relative)
        if "a_min" in sec:
            a_min = float(sec["a_min"])
        else:
            a_min = (n // 2) * bump
        params = DomainParams(float(sec.get("alpha", 1.5)), a_min,
                              float(sec.get("a_max", 0.05)), n, relative)
    except ValueError as exc:
        raise ConfigError(f"[method.{label}]: {exc}") from exc
    hw = float(sec["half_width"]) if "half_width" in sec else None
    paths = int(sec["paths"]) if "paths" in sec else None
    return MethodSpec(label, kind, scheme, params, hw, relative, paths)


def _spot_grid(sec: dict[str, str]) -> tuple[float, ...]:
    if "values" in sec:
        return tuple(_floats(sec["values"]))
    count = int(sec.get("count", 1))
    if "lo" in sec and "hi" in sec:
        lo, hi = float(sec["lo"]), float(sec["hi"])
    elif "center" in sec:
        c = float(sec["center"])
        band = float(sec.get("band", 0.0))
        lo, hi = c * (1 - band), c * (1 + band)
    else:
        return ()
    if count == 1:
        return (0.5 * (lo + hi),)
    return tuple(float(x) for x in np.linspace(lo, hi, count))


def parse_config(text: str, seed: int | None = None, source: str = "<string>") -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {source}: {exc}") from exc
    exp = dict(parser["experiment"]) if parser.has_section("experiment") else {}
    name = _require(exp, "name", "experiment")
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}; expected one of {EXPERIMENTS}")
    if not parser.has_section("payoff"):
        raise ConfigError("missing [payoff] section")
    mk = dict(parser["market"]) if parser.has_section("market") else {}
    mcs = dict(parser["mc"]) if parser.has_section("mc") else {}
    try:
        market = MarketState(tuple(_floats(_require(mk, "spots", "market"))),
                             tuple(_floats(_require(mk, "vols", "market"))),
                             float(mk.get("rate", 0.0)), float(mk.get("correlation", 0.0)))
        master = int(mcs.get("seed", 1)) if seed is None else int(seed)
        mc = McConfig(int(mcs.get("paths", 100_000)), master, _bool(mcs.get("antithetic", "false")))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    methods = [_method(s.split(".", 1)[1], dict(parser[s]))
               for s in parser.sections() if s.startswith("method.")]
    spots = _spot_grid(dict(parser["spots"])) if parser.has_section("spots") else ()
    cfg = ExperimentConfig(name, text, parser, dict(parser["payoff"]), market, mc, methods, spots,
                           exp.get("output"), int(exp.get("bump_asset", 0)))
    cfg.payoff()  # validate early
    return cfg


def load_config(path: str | Path, seed: int | None = None) -> ExperimentConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {p}: {exc}") from exc
    return parse_config(text, seed, str(p))
