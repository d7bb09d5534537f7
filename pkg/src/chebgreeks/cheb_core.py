"""Polynomial interpolation on Chebyshev and generic grids.

Interpolants are evaluated with the barycentric formula. Derivatives come
from differential matrices built with the Welfert recursion, which maps
nodal values to nodal values of the m-th derivative of the interpolant.
Off-node derivatives reuse the barycentric formula on those nodal
derivatives.

All grids are stored in ascending order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from chebgreeks.errors import DegenerateGridError, InsufficientNodesError, OutOfDomainError

__all__ = [
    "GridKind",
    "Grid",
    "ChebInterpolator",
    "chebyshev_points",
    "chebyshev_points_around",
    "uniform_points",
    "generic_grid",
    "barycentric_weights",
    "eval_barycentric",
    "diff_matrices",
    "eval_derivative",
]


class GridKind(str, enum.Enum):
    CHEBYSHEV = "chebyshev"
    UNIFORM = "uniform"
    GENERIC = "generic"


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Grid:
    """Ascending interpolation abscissas on a closed interval ``[lo, hi]``."""

    points: np.ndarray
    lo: float
    hi: float
    kind: GridKind = GridKind.GENERIC

    def __post_init__(self):
        pts = _frozen(self.points)
        if pts.ndim != 1 or pts.size < 1:
            raise ValueError("grid points must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(pts)):
            raise ValueError("grid points must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"degenerate domain [{self.lo}, {self.hi}]")
        steps = np.diff(pts)
        if np.any(steps == 0):
            raise DegenerateGridError("grid contains duplicate abscissas")
        if np.any(steps < 0):
            raise ValueError("grid points must be strictly increasing")
        if pts[0] < self.lo or pts[-1] > self.hi:
            raise ValueError("grid points must lie inside the domain")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        object.__setattr__(self, "kind", GridKind(self.kind))

    @property
    def n(self) -> int:
        return int(self.points.size)

    @property
    def domain(self) -> tuple[float, float]:
        return (self.lo, self.hi)

    def __len__(self) -> int:
        return self.n


def _check_domain(domain: Sequence[float]) -> tuple[float, float]:
    lo, hi = (float(v) for v in domain)
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise ValueError(f"invalid domain [{lo}, {hi}]")
    return lo, hi


def _unit_chebyshev(n: int) -> np.ndarray:
    if n < 2:
        raise ValueError(f"need at least 2 Chebyshev points, got {n}")
    # sin form of cos(k*pi/(n-1)), reversed: exactly symmetric, middle node exactly 0
    j = np.arange(n)
    return np.sin(np.pi * (2 * j - (n - 1)) / (2 * (n - 1)))


def chebyshev_points(n: int, domain: Sequence[float]) -> Grid:
    """Chebyshev points of the second kind mapped affinely onto ``domain``.

    The cosine nodes ``cos(k*pi/(n-1))`` are reordered ascending; both
    domain endpoints are nodes.
    """
    lo, hi = _check_domain(domain)
    t = _unit_chebyshev(n)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    pts = mid + half * t
    pts[0], pts[-1] = lo, hi
    return Grid(pts, lo, hi, GridKind.CHEBYSHEV)


def chebyshev_points_around(x0: float, a: float, n: int) -> Grid:
    """Chebyshev grid on ``[x0 - a, x0 + a]`` built from the center.

    For odd ``n`` the middle node is bit-for-bit ``x0``, which the midpoint
    of the rounded endpoints does not guarantee.
    """
    if not a > 0:
        raise ValueError(f"half-width must be positive, got {a}")
    t = _unit_chebyshev(n)
    pts = x0 + a * t
    return Grid(pts, x0 - a, x0 + a, GridKind.CHEBYSHEV)


def uniform_points(n: int, domain: Sequence[float]) -> Grid:
    """``n`` equispaced points including both endpoints."""
    if n < 2:
        raise ValueError(f"need at least 2 uniform points, got {n}")
    lo, hi = _check_domain(domain)
    return Grid(np.linspace(lo, hi, n), lo, hi, GridKind.UNIFORM)


def generic_grid(points: Sequence[float], domain: Sequence[float] | None = None) -> Grid:
    pts = np.asarray(points, dtype=float)
    if domain is None:
        domain = (pts.min(), pts.max())
    return Grid(pts, *domain, kind=GridKind.GENERIC)


def barycentric_weights(grid: Grid) -> np.ndarray:
    """Barycentric weights of ``grid``.

    Chebyshev grids use the closed form (alternating signs, halved
    endpoints), which equals the product formula up to a global factor.
    Other grids use ``w_k = 1 / prod_{j != k} (x_k - x_j)`` directly.
    """
    n = grid.n
    if grid.kind is GridKind.CHEBYSHEV:
        # sign chosen so that the pattern agrees with the product formula
        w = np.where((n - 1 - np.arange(n)) % 2 == 0, 1.0, -1.0)
        w[0] *= 0.5
        w[-1] *= 0.5
        return _frozen(w)
    x = grid.points
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    prod = np.prod(diff, axis=1)
    if np.any(prod == 0) or not np.all(np.isfinite(prod)):
        raise DegenerateGridError("barycentric weights are not representable on this grid")
    return _frozen(1.0 / prod)


def _barycentric(points, weights, values, x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    diff = x[:, None] - points[None, :]
    hit = diff == 0.0
    on_node = hit.any(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = weights[None, :] / diff
        out = (c @ values) / c.sum(axis=1)
    if on_node.any():
        out[on_node] = values[np.argmax(hit[on_node], axis=1)]
    return out


def _check_inside(lo: float, hi: float, x) -> None:
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any(xa < lo) or np.any(xa > hi):
        raise OutOfDomainError(f"evaluation point outside [{lo}, {hi}]")


def diff_matrices(grid: Grid, weights: np.ndarray, max_order: int) -> list[np.ndarray]:
    """Differential matrices ``D^(1) .. D^(max_order)``; entry ``m-1`` is order ``m``.

    Off-diagonal entries follow the Welfert recursion
    ``D^(m)_ik = m / (x_i - x_k) * (w_k / w_i * D^(m-1)_ii - D^(m-1)_ik)``,
    and each diagonal entry is minus the sum of its row's off-diagonals.
    """
    if max_order < 1:
        raise ValueError(f"max_order must be >= 1, got {max_order}")
    n = grid.n
    if n <= max_order:
        raise InsufficientNodesError(f"{n} nodes cannot support derivatives of order {max_order}")
    x = grid.points
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,):
        raise ValueError("one weight per grid point is required")
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    ratio = w[None, :] / w[:, None]
    off = ~np.eye(n, dtype=bool)

    mats = []
    prev = np.eye(n)
    for m in range(1, max_order + 1):
        d = m / dx * (ratio * np.diag(prev)[:, None] - prev)
        d[~off] = 0.0
        np.fill_diagonal(d, -d.sum(axis=1))
        d.setflags(write=False)
        mats.append(d)
        prev = d
    return mats


class ChebInterpolator:
    """Immutable polynomial interpolant with cached derivative data.

    Despite the name the class accepts any grid; Chebyshev grids are the
    intended use. Differential matrices and nodal derivatives up to
    ``max_order`` are computed once at construction.
    """

    __slots__ = ("_grid", "_weights", "_values", "_dmats", "_nodal")

    def __init__(self, grid: Grid, values, max_order: int = 2, weights=None):
        vals = _frozen(values)
        if vals.shape != (grid.n,):
            raise ValueError(f"expected {grid.n} nodal values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("nodal values must be finite")
        w = barycentric_weights(grid) if weights is None else _frozen(weights)
        if np.any(w == 0):
            raise DegenerateGridError("zero barycentric weight")
        dmats = diff_matrices(grid, w, max_order)
        nodal = []
        for d in dmats:
            v = d @ vals
            v.setflags(write=False)
            nodal.append(v)
        self._grid = grid
        self._weights = w
        self._values = vals
        self._dmats = tuple(dmats)
        self._nodal = tuple(nodal)

    @classmethod
    def from_function(
        cls,
        f: Callable[[float], float],
        grid: Grid,
        max_order: int = 2,
    ) -> "ChebInterpolator":
        """Sample ``f`` once per node, in ascending node order."""
        return cls(grid, [f(float(x)) for x in grid.points], max_order=max_order)

    def __setattr__(self, name, value):
        if hasattr(self, "_nodal"):
            raise AttributeError("ChebInterpolator is immutable")
        object.__setattr__(self, name, value)

    @property
    def grid(self) -> Grid:
        return self._grid

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def max_order(self) -> int:
        return len(self._dmats)

    def diff_matrix(self, m: int) -> np.ndarray:
        self._check_order(m)
        return self._dmats[m - 1]

    def nodal_derivative(self, m: int) -> np.ndarray:
        self._check_order(m)
        return self._nodal[m - 1]

    def _check_order(self, m: int) -> None:
        if not 1 <= m <= self.max_order:
            raise ValueError(f"derivative order must be in [1, {self.max_order}], got {m}")

    def __call__(self, x):
        return eval_barycentric(self, x)

    def derivative(self, m: int, x):
        return eval_derivative(self, m, x)


def _scalar_or_array(out: np.ndarray, x):
    return float(out[0]) if np.ndim(x) == 0 else out


def eval_barycentric(interp, x):
    """Evaluate the interpolant at ``x`` (scalar or array).

    ``interp`` is a :class:`ChebInterpolator` or a ``(grid, weights, values)``
    triple. Points equal to a node return the stored value exactly.
    """
    if isinstance(interp, ChebInterpolator):
        grid, w, vals = interp.grid, interp.weights, interp.values
    else:
        grid, w, vals = interp
        w = np.asarray(w, dtype=float)
        vals = np.asarray(vals, dtype=float)
    _check_inside(grid.lo, grid.hi, x)
    return _scalar_or_array(_barycentric(grid.points, w, vals, x), x)


def eval_derivative(interp: ChebInterpolator, m: int, x):
    """Evaluate the m-th derivative of the interpolant at ``x``."""
    nodal = interp.nodal_derivative(m)
    _check_inside(interp.grid.lo, interp.grid.hi, x)
    return _scalar_or_array(_barycentric(interp.grid.points, interp.weights, nodal, x), x)
