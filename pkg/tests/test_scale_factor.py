import math

import numpy as np
import pytest
from scipy.integrate import quad

from flrwkit import scale_factor as sfm
from flrwkit.errors import (
    AnchorOutsideInterval,
    DomainError,
    FiniteLowerEndpoint,
    FiniteUpperEndpoint,
    InfiniteLowerEndpoint,
)

SF = sfm.ScaleFactor.from_text


def test_interval_enforced():
    sf = SF("t", 0.0, math.inf)
    with pytest.raises(DomainError):
        sf.value(0.0)
    with pytest.raises(DomainError):
        sf.value(-1.0)
    assert sf.value(2.0) == 2.0


def test_positivity_rejected():
    sf = SF("t - 1", 0.0, math.inf)
    with pytest.raises(DomainError):
        sf.value(0.5)


# --- limit_at_lower ------------------------------------------------------------

def test_limit_a_linear_is_zero():
    assert sfm.limit_at_lower(SF("t"), "a").kind == "zero"


def test_limit_aprime_sqrt_is_plus_infinity():
    assert sfm.limit_at_lower(SF("t^(1/2)"), "a_prime").kind == "plus_infinity"


def test_limit_aprime_quadratic_is_finite_one():
    diag = sfm.limit_at_lower(SF("t + t^2"), "a_prime")
    assert diag.kind == "finite"
    assert diag.value == pytest.approx(1.0, abs=1e-6)


def test_limit_finite_invariant_last_three_samples():
    diag = sfm.limit_at_lower(SF("t + t^2"), "a_prime")
    assert diag.kind == "finite"
    for _, v in diag.samples[-3:]:
        assert abs(v - diag.value) <= 1e-4 * max(abs(diag.value), 1e-12)


@pytest.mark.parametrize("p,expected", [
    (0.25, "plus_infinity"),
    (0.5, "plus_infinity"),
    (2.0 / 3.0, "plus_infinity"),
    (1.0, "finite"),
    (1.5, "zero"),
])
def test_limit_aprime_power_laws(p, expected):
    diag = sfm.limit_at_lower(SF(f"t^{p!r}"), "a_prime")
    assert diag.kind == expected
    if expected == "finite":
        assert diag.value == pytest.approx(1.0, abs=1e-9)


def test_limit_past_eternal_exponential_is_zero():
    sf = SF("exp(t)", -math.inf, math.inf)
    assert sfm.limit_at_lower(sf, "a").kind == "zero"


# --- particle horizon ------------------------------------------------------------

@pytest.mark.parametrize("p", [0.25, 0.5, 2.0 / 3.0])
def test_horizon_power_law_convergent(p):
    res = sfm.has_particle_horizon(SF(f"t^{p!r}"))
    assert res.kind == "has_horizon"
    # closed-form oracle: integral of t^-p over (0,1) equals 1/(1-p)
    assert res.diag.value == pytest.approx(1.0 / (1.0 - p), rel=1e-6)


@pytest.mark.parametrize("p", [1.0, 1.5])
def test_horizon_power_law_divergent(p):
    assert sfm.has_particle_horizon(SF(f"t^{p!r}")).kind == "no_horizon"


def test_horizon_constant():
    res = sfm.has_particle_horizon(SF("1"))
    assert res.kind == "has_horizon"
    assert res.diag.value == pytest.approx(1.0, rel=1e-9)


def test_horizon_partials_monotone():
    res = sfm.has_particle_horizon(SF("t^(1/2)"))
    values = [p for _, p in res.diag.partials]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_horizon_desitter_flat_divergent():
    sf = SF("exp(t)", -math.inf, math.inf)
    assert sfm.has_particle_horizon(sf).kind == "no_horizon"


def test_horizon_anchor_outside():
    with pytest.raises(AnchorOutsideInterval):
        sfm.has_particle_horizon(SF("t"), anchor=-3.0)


def test_horizon_shifted_anchor_interval_without_one():
    sf = SF("t - 4", 4.0, math.inf)
    res = sfm.has_particle_horizon(sf)
    assert res.kind == "no_horizon"
    assert "anchor shifted" in res.diag.note


def test_horizon_sech_past_eternal_value():
    # a = cosh(t) on the whole line: integral of sech from -inf to 1
    sf = SF("cosh(t)", -math.inf, math.inf)
    res = sfm.has_particle_horizon(sf)
    assert res.kind == "has_horizon"
    oracle = quad(lambda s: 1.0 / math.cosh(s), -60.0, 1.0)[0]
    assert res.diag.value == pytest.approx(oracle, rel=1e-7)


# --- future integral ---------------------------------------------------------------

def test_future_integral_linear_divergent():
    assert sfm.future_integral(SF("t")).kind == "divergent"


def test_future_integral_sqrt_divergent():
    assert sfm.future_integral(SF("t^(1/2)")).kind == "divergent"


def test_future_integral_decaying_convergent():
    diag = sfm.future_integral(SF("exp(-t)"))
    assert diag.kind == "convergent"
    oracle = quad(lambda s: math.exp(-s) / math.sqrt(math.exp(-2 * s) + 1.0),
                  1.0, 200.0)[0]
    assert diag.value == pytest.approx(oracle, rel=1e-6)


def test_future_integral_exponential_divergent_despite_overflow():
    sf = SF("exp(t)", -math.inf, math.inf)
    assert sfm.future_integral(sf).kind == "divergent"


def test_future_integral_requires_infinite_upper():
    with pytest.raises(FiniteUpperEndpoint):
        sfm.future_integral(SF("t", 0.0, 5.0))


# --- hyperbolic boundary limit ------------------------------------------------------

def test_sbierski_limit_milne_is_one():
    diag = sfm.sbierski_hyperbolic_limit(SF("t"))
    assert diag.kind == "finite"
    assert diag.value == pytest.approx(1.0, abs=1e-6)


def test_sbierski_limit_quadratic_is_half():
    diag = sfm.sbierski_hyperbolic_limit(SF("t + t^2"))
    assert diag.kind == "finite"
    assert diag.value == pytest.approx(0.5, abs=1e-4)


def test_sbierski_limit_sqrt_is_zero():
    # value sqrt(t) * e^(2 - 2 sqrt(t)) -> 0: regression for the slow-decay rule
    assert sfm.sbierski_hyperbolic_limit(SF("t^(1/2)")).kind == "zero"


def test_sbierski_limit_sinh_value():
    # oracle: a=sinh(t) gives 2*tanh(1/2) in the limit
    diag = sfm.sbierski_hyperbolic_limit(SF("sinh(t)"))
    assert diag.kind == "finite"
    assert diag.value == pytest.approx(2.0 * math.tanh(0.5), rel=1e-6)


def test_sbierski_limit_sinh_squared_diverges():
    assert sfm.sbierski_hyperbolic_limit(SF("sinh(t)^2")).kind == "plus_infinity"


def test_sbierski_requires_finite_lower():
    with pytest.raises(InfiniteLowerEndpoint):
        sfm.sbierski_hyperbolic_limit(SF("exp(t)", -math.inf, math.inf))


# --- past-eternal limit ---------------------------------------------------------------

def test_ling_limit_exponential_is_one():
    diag = sfm.ling_limit(SF("exp(t)", -math.inf, math.inf))
    assert diag.kind == "finite"
    assert diag.value == pytest.approx(1.0, abs=1e-4)


def test_ling_limit_two_exponentials_is_one():
    diag = sfm.ling_limit(SF("exp(t) + exp(2*t)", -math.inf, math.inf))
    assert diag.kind == "finite"
    assert diag.value == pytest.approx(1.0, abs=1e-4)


def test_ling_limit_constant_is_plus_infinity():
    diag = sfm.ling_limit(SF("1", -math.inf, math.inf))
    assert diag.kind == "plus_infinity"


def test_ling_requires_past_eternal():
    with pytest.raises(FiniteLowerEndpoint):
        sfm.ling_limit(SF("t"))
