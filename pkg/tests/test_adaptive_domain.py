import math
from datetime import date

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebgreeks.adaptive_domain import (
    DomainParams,
    SingularityMap,
    adaptive_half_width,
    singularities_for,
    year_fraction,
)
from chebgreeks.payoffs import Autocallable, Call, Tarf

PARAMS = DomainParams(alpha=1.0, a_min=0.0075, a_max=0.05)


def test_worked_example():
    a_tau = 1.0 * 1.0 * 0.07 * math.sqrt(0.1)
    a_b = 0.5 * (0.05 - a_tau)
    assert a_tau == pytest.approx(0.0221359436211787, abs=1e-15)
    assert a_b == pytest.approx(0.0139320281894107, abs=1e-15)
    a = adaptive_half_width(1.0, 0.07, SingularityMap(0.1, (1.05,)), PARAMS)
    assert a == pytest.approx(0.0360679718105893, abs=1e-15)
    assert round(a, 7) == 0.036068


def test_no_levels_gives_a_max():
    assert adaptive_half_width(1.0, 0.07, SingularityMap(0.3, ()), PARAMS) == 0.05


@pytest.mark.parametrize("d,expected", [(0.03, 0.015), (0.005, 0.0075), (0.5, 0.05)])
def test_zero_tau_clamps_half_distance(d, expected):
    a = adaptive_half_width(1.0, 0.07, SingularityMap(0.0, (1.0 + d,)), PARAMS)
    assert a == pytest.approx(expected, abs=1e-15)


def test_default_alpha_reproduces_digital_domain():
    a = adaptive_half_width(1.0, 0.07, SingularityMap(0.1, (1.0,)), DomainParams(1.5, 0.0075, 0.05, relative=True))
    assert a == pytest.approx(1.5 * 0.07 * math.sqrt(0.1))
    assert round(a, 4) == 0.0332


def test_at_a_level_only_diffusion_counts():
    sing = SingularityMap(0.02, (1.15,))
    a = adaptive_half_width(1.15, 0.07, sing, DomainParams(1.5, 0.001, 0.05))
    assert a == pytest.approx(1.5 * 1.15 * 0.07 * math.sqrt(0.02))


def test_relative_bounds():
    p = DomainParams(1.5, 0.03, 0.10, relative=True)
    assert p.bounds(0.5) == (0.015, 0.05)
    assert DomainParams.from_bump(0.0025, 0.05).a_min == pytest.approx(0.0075)


@pytest.mark.parametrize("kwargs", [dict(alpha=0.5), dict(a_min=0.0), dict(a_min=0.1, a_max=0.05), dict(n=6)])
def test_param_validation(kwargs):
    with pytest.raises(ValueError):
        DomainParams(**kwargs)


def test_negative_tau_rejected():
    with pytest.raises(ValueError):
        SingularityMap(-0.1, ())


@settings(max_examples=200, deadline=None)
@given(
    x0=st.floats(0.5, 2.0),
    tau=st.floats(0.0, 1.0),
    d1=st.floats(0.0, 0.5),
    extra=st.floats(0.0, 0.5),
    side=st.sampled_from([-1, 1]),
)
def test_monotone_in_distance(x0, tau, d1, extra, side):
    p = DomainParams(1.5, 1e-6, 10.0)
    near = adaptive_half_width(x0, 0.1, SingularityMap(tau, (x0 + side * d1,)), p)
    far = adaptive_half_width(x0, 0.1, SingularityMap(tau, (x0 + side * (d1 + extra),)), p)
    assert far >= near


@settings(max_examples=200, deadline=None)
@given(x0=st.floats(0.3, 3.0), tau=st.floats(0.0, 2.0), sigma=st.floats(0.0, 1.0),
       levels=st.lists(st.floats(0.1, 4.0), max_size=4))
def test_clamped(x0, tau, sigma, levels):
    a = adaptive_half_width(x0, sigma, SingularityMap(tau, tuple(levels)), PARAMS)
    assert PARAMS.a_min <= a <= PARAMS.a_max


def test_continuous_in_spot():
    sing = SingularityMap(7 / 365, (1.135, 1.15, 1.19))
    p = DomainParams(1.5, 0.0075, 0.05, relative=True)
    xs = np.linspace(1.10, 1.22, 200_001)
    a = np.array([adaptive_half_width(x, 0.07, sing, p) for x in xs])
    # Lipschitz: slope bounded by alpha*sigma*sqrt(tau) + 1/2 + relative-bound slope
    assert np.max(np.abs(np.diff(a))) <= 1.0 * (xs[1] - xs[0])


def test_year_fraction():
    assert year_fraction(date(2021, 1, 1), date(2022, 1, 1)) == 1.0
    assert year_fraction(date(2020, 1, 1), date(2021, 1, 1)) == 366 / 365


def test_tarf_levels():
    t = Tarf(1.15, 1.19, 1.135, 0.2, [1 / 365 + k * 7 / 365 for k in range(5)])
    s = singularities_for(t)
    assert s.levels == (1.135, 1.15, 1.19)
    assert s.tau == pytest.approx(1 / 365)
    s2 = singularities_for(t, valuation_time=2 / 365)
    assert s2.tau == pytest.approx(6 / 365)
    t2 = Tarf(1.15, 1.19, 1.135, 0.2, [0.1], strike_is_singular=False)
    assert singularities_for(t2).levels == (1.135, 1.19)


def test_autocallable_levels():
    ac = Autocallable(0.9, 1.0, 0.6, 1.0, [0.25, 0.5, 0.75], [0.48, 1.3])
    np.testing.assert_allclose(singularities_for(ac).levels, [0.432, 0.48])
    np.testing.assert_allclose(singularities_for(ac, valuation_time=0.6).levels, [0.288, 0.432, 0.48])
    np.testing.assert_allclose(singularities_for(ac, asset=1).levels, [1.17, 1.3])


def test_call_levels():
    s = singularities_for(Call(1.05, 0.5))
    assert s.levels == (1.05,) and s.tau == 0.5


def test_expired():
    s = singularities_for(Call(1.0, 0.5), valuation_time=1.0)
    assert s.tau == 0.0 and s.levels == ()
