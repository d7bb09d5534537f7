"""Experiment runners.

Each runner takes a parsed :class:`ExperimentConfig` and returns a dict of
:class:`ResultTable`, always with a ``"main"`` entry. Column sets are fixed
per experiment (see ``SCHEMAS``).
"""

from __future__ import annotations

import datetime as _dt
import math
import time

import numpy as np

from chebgreeks.black import oracle_for
from chebgreeks.cheb_core import ChebInterpolator, chebyshev_points, uniform_points
from chebgreeks.errors import ConfigError, UnsupportedOracleError
from chebgreeks.greeks_engine import GreeksRequest, greeks_sweep, numerical_errors
from chebgreeks.harness.config import ExperimentConfig, MethodSpec
from chebgreeks.harness.results import ResultTable, version_string
from chebgreeks.payoffs import Call, Digital, Put
from chebgreeks.pricing import McConfig, pricing_closure
from chebgreeks.stencils import FdScheme, fd_greeks

__all__ = [
    "SCHEMAS",
    "run_convergence",
    "run_digital_errors",
    "run_sweep",
    "run_variance_scaling",
    "run_experiment",
]

SCHEMAS = {
    "convergence": {
        "main": ("grid", "pricer", "n", "err_price", "err_delta", "err_gamma", "node_err"),
    },
    "digital_errors": {
        "main": ("method", "kind", "nodes", "bump", "size_min", "size_max", "paths",
                 "avg_eps_delta", "std_eps_delta", "max_eps_delta",
                 "avg_eps_gamma", "std_eps_gamma", "max_eps_gamma"),
        "detail": ("method", "spot", "price", "delta", "gamma", "delta_bs", "gamma_bs",
                   "eps_delta", "eps_gamma", "half_width"),
    },
    "sweep": {
        "main": ("scenario", "method", "spot", "price", "delta", "gamma", "half_width",
                 "nodes", "paths", "clipped", "error"),
        "summary": ("scenario", "method", "kind", "paths", "nodes", "bump_min", "bump_max",
                    "expl_err_delta", "expl_err_gamma", "failures"),
    },
    "variance_scaling": {
        "main": ("bump", "var_delta", "var_gamma", "mean_delta", "mean_gamma", "seeds"),
        "summary": ("quantity", "slope", "intercept"),
    },
}


def _tables(name: str) -> dict[str, ResultTable]:
    return {key: ResultTable(f"{name}.{key}", cols) for key, cols in SCHEMAS[name].items()}


def _request(cfg: ExperimentConfig, m: MethodSpec, payoff, paths: int) -> GreeksRequest:
    return GreeksRequest(
        payoff=payoff,
        market=cfg.market,
        method=m.kind,
        mc=McConfig(paths, cfg.mc.master_seed, cfg.mc.antithetic),
        spot_grid=cfg.spot_grid,
        domain_params=m.domain_params,
        fd_scheme=m.fd_scheme,
        half_width=m.half_width,
        half_width_relative=m.relative,
        bump_asset=cfg.bump_asset,
    )


def _need_methods(cfg: ExperimentConfig) -> None:
    if not cfg.methods:
        raise ConfigError("no [method.*] section configured")
    if not cfg.spot_grid:
        raise ConfigError("missing or empty [spots] section")


def run_convergence(cfg: ExperimentConfig, threads: int = 1) -> dict[str, ResultTable]:
    """L-infinity errors of price, delta and gamma interpolants against Black formulas."""
    payoff = cfg.payoff()
    if not isinstance(payoff, (Call, Put, Digital)):
        raise ConfigError("convergence needs a call, put or digital payoff")
    oracle = oracle_for(payoff, cfg.market)
    sec = cfg.section("convergence")
    lo, hi = (float(v) for v in sec.get("domain", "0.94 1.01").split())
    ladder = [int(v) for v in sec.get("ladder", "3 5 7 9 11 13 15 17 21 25 31 35 41").split()]
    test = np.linspace(lo, hi, int(sec.get("test_points", 1000)))
    grids = sec.get("grids", "chebyshev uniform").split()
    pricers = sec.get("pricers", "analytic mc").split()
    true_p, true_d, true_g = oracle(test)

    tables = _tables("convergence")
    for pricer_name in pricers:
        if pricer_name == "analytic":
            def price(x):
                return oracle(np.asarray(x))[0]
        elif pricer_name == "mc":
            closure = pricing_closure(payoff, cfg.market, cfg.mc, threads=threads)

            def price(x):
                return np.array([closure(float(v)) for v in x])
        else:
            raise ConfigError(f"unknown pricer {pricer_name!r}")
        for grid_name in grids:
            make = {"chebyshev": chebyshev_points, "uniform": uniform_points}.get(grid_name)
            if make is None:
                raise ConfigError(f"unknown grid {grid_name!r}")
            for n in ladder:
                grid = make(n, (lo, hi))
                values = np.asarray(price(grid.points), dtype=float)
                node_err = float(np.max(np.abs(values - oracle(grid.points)[0])))
                interp = ChebInterpolator(grid, values, max_order=min(2, n - 1))
                errs = [float(np.max(np.abs(interp(test) - true_p)))]
                for m, truth in ((1, true_d), (2, true_g)):
                    if m <= interp.max_order:
                        errs.append(float(np.max(np.abs(interp.derivative(m, test) - truth))))
                    else:
                        errs.append(math.nan)
                tables["main"].add(grid_name, pricer_name, n, *errs, node_err)
    return tables


def run_digital_errors(cfg: ExperimentConfig, threads: int = 1) -> dict[str, ResultTable]:
    """Per-method error statistics of delta and gamma against closed-form Greeks."""
    _need_methods(cfg)
    payoff = cfg.payoff()
    try:
        oracle = oracle_for(payoff, cfg.market)
    except UnsupportedOracleError as exc:
        raise ConfigError(str(exc)) from exc
    tables = _tables("digital_errors")
    closures = {}
    _, d_bs, g_bs = oracle(np.asarray(cfg.spot_grid))
    for m in cfg.methods:
        paths = m.paths or cfg.mc.paths
        req = _request(cfg, m, payoff, paths)
        if paths not in closures:
            closures[paths] = pricing_closure(payoff, cfg.market, req.mc, cfg.bump_asset, threads)
        report = greeks_sweep(req, threads=threads, pricer=closures[paths])
        errs = numerical_errors(report, oracle)
        st = errs.stats()
        rel = report.column("half_width") / report.spots
        is_fd = not req.is_chebyshev
        tables["main"].add(
            m.label, m.kind, req.nodes,
            m.fd_scheme.bump if is_fd else "",
            "" if is_fd else float(np.nanmin(rel)),
            "" if is_fd else float(np.nanmax(rel)),
            paths,
            st["avg_eps_delta"], st["std_eps_delta"], st["max_eps_delta"],
            st["avg_eps_gamma"], st["std_eps_gamma"], st["max_eps_gamma"],
        )
        for i, r in enumerate(report.records):
            tables["detail"].add(m.label, r.spot, r.price, r.delta, r.gamma, float(d_bs[i]),
                                 float(g_bs[i]), float(errs.eps_delta[i]), float(errs.eps_gamma[i]),
                                 r.half_width)
    return tables


def run_sweep(cfg: ExperimentConfig, threads: int = 1) -> dict[str, ResultTable]:
    """Greeks along a spot grid for every configured method and scenario.

    ``[sweep] first_fixing_days`` lists scenarios (days to the next fixing);
    without it the payoff's own schedule is the single scenario.
    """
    _need_methods(cfg)
    sec = cfg.section("sweep")
    scenarios = sec.get("first_fixing_days", "").split() or [None]
    tables = _tables("sweep")
    for sc in scenarios:
        payoff = cfg.payoff(float(sc) if sc is not None else None)
        label = sc if sc is not None else "base"
        closures = {}
        for m in cfg.methods:
            paths = m.paths or cfg.mc.paths
            req = _request(cfg, m, payoff, paths)
            if paths not in closures:
                closures[paths] = pricing_closure(payoff, cfg.market, req.mc, cfg.bump_asset, threads)
            report = greeks_sweep(req, threads=threads, pricer=closures[paths])
            for r in report.records:
                tables["main"].add(label, m.label, r.spot, r.price, r.delta, r.gamma, r.half_width,
                                   r.nodes, r.paths, r.clipped, r.error or "")
            s = report.summary
            rel = report.column("half_width") / report.spots
            tables["summary"].add(
                label, m.label, m.kind, paths, req.nodes,
                float(np.nanmin(rel)) if np.isfinite(rel).any() else math.nan,
                float(np.nanmax(rel)) if np.isfinite(rel).any() else math.nan,
                s.get("expl_err_delta", math.nan), s.get("expl_err_gamma", math.nan),
                s["failures"],
            )
        closures.clear()
    return tables


def _fit(h: np.ndarray, v: np.ndarray) -> tuple[float, float]:
    if np.any(v <= 0):
        return math.nan, math.nan
    slope, intercept = np.polyfit(np.log(h), np.log(v), 1)
    return float(slope), float(intercept)


def run_variance_scaling(cfg: ExperimentConfig, threads: int = 1) -> dict[str, ResultTable]:
    """Variance of 3-point delta and gamma across seeds, on a halving bump ladder."""
    payoff = cfg.payoff()
    if not isinstance(payoff, (Call, Put, Digital)):
        raise ConfigError("variance scaling needs a call, put or digital payoff")
    sec = cfg.section("variance")
    seeds = int(sec.get("seeds", 30))
    levels = int(sec.get("levels", 3))
    if levels < 2:
        raise ConfigError("variance scaling needs at least 2 bump levels")
    if seeds < 2:
        raise ConfigError("variance scaling needs at least 2 seeds")
    base = float(sec.get("bump", 0.01))
    relative = sec.get("relative", "true").lower() in ("1", "true", "yes")
    x0 = float(sec.get("spot", cfg.market.spots[cfg.bump_asset]))
    bumps = [base / 2**k for k in range(levels)]

    deltas = np.empty((seeds, levels))
    gammas = np.empty((seeds, levels))
    for i in range(seeds):
        mc = McConfig(cfg.mc.paths, cfg.mc.master_seed + i, cfg.mc.antithetic)
        pricer = pricing_closure(payoff, cfg.market, mc, cfg.bump_asset, threads)
        for j, h in enumerate(bumps):
            _, deltas[i, j], gammas[i, j] = fd_greeks(pricer, x0, FdScheme(3, h, relative))

    tables = _tables("variance_scaling")
    var_d = deltas.var(axis=0, ddof=1)
    var_g = gammas.var(axis=0, ddof=1)
    for j, h in enumerate(bumps):
        tables["main"].add(h, float(var_d[j]), float(var_g[j]), float(deltas[:, j].mean()),
                           float(gammas[:, j].mean()), seeds)
    hs = np.asarray(bumps)
    tables["summary"].add("delta", *_fit(hs, var_d))
    tables["summary"].add("gamma", *_fit(hs, var_g))
    return tables


RUNNERS = {
    "convergence": run_convergence,
    "digital_errors": run_digital_errors,
    "sweep": run_sweep,
    "variance_scaling": run_variance_scaling,
}


def run_experiment(cfg: ExperimentConfig, threads: int = 1) -> dict[str, ResultTable]:
    """Run the configured experiment and stamp every table with run metadata."""
    start = time.time()
    tables = RUNNERS[cfg.name](cfg, threads=threads)
    elapsed = time.time() - start
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    for t in tables.values():
        t.metadata.update({
            "experiment": cfg.name,
            "table": t.name,
            "version": version_string(),
            "config_hash": cfg.config_hash,
            "master_seed": str(cfg.mc.master_seed),
            "paths": str(cfg.mc.paths),
            "wall_clock": stamp,
            "elapsed_seconds": f"{elapsed:.2f}",
        })
    return tables
