"""Central finite differences for first and second derivatives.

Coefficients are the derivatives at 0 of the Lagrange basis polynomials on
the unit-spaced grid ``-k..k``, computed with exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from chebgreeks.errors import PricerError

__all__ = ["FdScheme", "fd_coefficients", "fd_coefficients_exact", "fd_greeks"]


@dataclass(frozen=True)
class FdScheme:
    """Odd-point central stencil with spacing ``bump``.

    With ``relative=True`` the spacing is ``bump * x0``.
    """

    points: int = 3
    bump: float = 0.0025
    relative: bool = False

    def __post_init__(self):
        if self.points < 3 or self.points % 2 == 0:
            raise ValueError(f"stencil size must be odd and >= 3, got {self.points}")
        if not self.bump > 0:
            raise ValueError(f"bump must be positive, got {self.bump}")

    @property
    def half_points(self) -> int:
        return (self.points - 1) // 2

    def spacing(self, x0: float) -> float:
        return self.bump * abs(x0) if self.relative else self.bump


def _poly_mul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


@lru_cache(maxsize=None)
def fd_coefficients_exact(points: int, m: int) -> tuple[Fraction, ...]:
    if points < 3 or points % 2 == 0:
        raise ValueError(f"stencil size must be odd and >= 3, got {points}")
    if m not in (1, 2):
        raise ValueError(f"only first and second derivatives are supported, got m={m}")
    k = points // 2
    nodes = range(-k, k + 1)
    coeffs = []
    for xk in nodes:
        basis = [Fraction(1)]
        for xj in nodes:
            if xj != xk:
                basis = _poly_mul(basis, [Fraction(-xj, xk - xj), Fraction(1, xk - xj)])
        coeffs.append(math.factorial(m) * basis[m])
    return tuple(coeffs)


def fd_coefficients(points: int, m: int) -> list[float]:
    """Central-difference weights for the m-th derivative, to be divided by ``h**m``.

    >>> fd_coefficients(3, 2)
    [1.0, -2.0, 1.0]
    """
    return [float(c) for c in fd_coefficients_exact(points, m)]


def fd_greeks(
    pricer: Callable[[float], float],
    x0: float,
    scheme: FdScheme,
) -> tuple[float, float, float]:
    """Price, delta and gamma at ``x0`` from one pass over the stencil.

    Every stencil point is priced exactly once; the center value is the
    reported price. The pricer must be deterministic (fixed seed).
    """
    h = scheme.spacing(x0)
    k = scheme.half_points
    values = []
    for j in range(-k, k + 1):
        x = x0 + j * h
        try:
            values.append(float(pricer(x)))
        except Exception as exc:
            raise PricerError(f"pricer failed at bump point {x!r} ({j:+d}h): {exc}", x) from exc
    c1 = fd_coefficients(scheme.points, 1)
    c2 = fd_coefficients(scheme.points, 2)
    delta = math.fsum(c * v for c, v in zip(c1, values)) / h
    gamma = math.fsum(c * v for c, v in zip(c2, values)) / (h * h)
    return values[k], delta, gamma
