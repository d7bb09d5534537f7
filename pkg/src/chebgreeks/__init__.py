"""Monte Carlo spot Greeks from Chebyshev interpolants on adaptive domains."""

from chebgreeks.adaptive_domain import DomainParams, SingularityMap, adaptive_half_width, singularities_for
from chebgreeks.black import black_analytics, oracle_for
from chebgreeks.cheb_core import (
    ChebInterpolator,
    Grid,
    GridKind,
    barycentric_weights,
    chebyshev_points,
    diff_matrices,
    eval_barycentric,
    eval_derivative,
)
from chebgreeks.greeks_engine import (
    GreeksReport,
    GreeksRequest,
    chebyshev_greeks,
    explanation_errors,
    greeks_sweep,
    numerical_errors,
)
from chebgreeks.payoffs import Autocallable, Call, Digital, Put, Tarf
from chebgreeks.pricing import MarketState, McConfig, mc_price, pricing_closure
from chebgreeks.stencils import FdScheme, fd_coefficients, fd_greeks

__version__ = "0.1.0"
