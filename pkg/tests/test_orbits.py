from fractions import Fraction

import numpy as np
import pytest

from l0linf import (
    CounterexampleSpec,
    SingularFunction,
    counterexample,
    diag,
    k_at,
    k_curve,
    korbit_norm,
    log_grid,
    mu_of,
    orbit_necessary_check,
    pointwise_constant,
    singular_indicator,
)
from helpers import random_singular


# -- necessary condition -----------------------------------------------------------


def test_self_membership_at_radius_one():
    mu = singular_indicator(2.0, 3.0)
    assert orbit_necessary_check(mu, mu, 1.0).ok


def test_halved_element_dominates():
    mu = SingularFunction((1.0, 2.0), (2.0, 1.0))
    assert orbit_necessary_check(mu.scale(0.5), mu, 1.0).ok


def test_separating_pair_fails_at_radius_one():
    a = diag([1.0, 0.6])
    x = diag([1.0, 1.0])
    rep = orbit_necessary_check(x, a, 1.0)
    assert not rep.ok
    assert "t=1" in rep.items[0].detail


def test_radius_must_be_positive():
    mu = singular_indicator(1.0, 1.0)
    with pytest.raises(ValueError):
        orbit_necessary_check(mu, mu, 0.0)


# -- pointwise constant -------------------------------------------------------------


def test_pointwise_constant_identity():
    mu = singular_indicator(2.0, 1.0)
    assert pointwise_constant(mu, mu) == 1.0


def test_pointwise_constant_doubling_bounded_by_two():
    rng = np.random.default_rng(3)
    for _ in range(20):
        mu = random_singular(rng)
        c = pointwise_constant(mu.scale(2.0), mu)
        assert c is not None and c <= 2.0 * (1 + 1e-9)
        # grid oracle: the returned constant satisfies domination everywhere
        grid = [1e-9, *mu.breakpoints, *(c * b for b in mu.breakpoints)]
        for t in grid:
            assert 2.0 * mu.at(t) <= c * mu.at(t / c) + 1e-12


def test_pointwise_constant_block_profiles():
    mu_x = SingularFunction((2.0, 4.0), (4.0, 2.0))
    mu_a = SingularFunction((1.0, 2.0), (4.0, 2.0))
    c = pointwise_constant(mu_x, mu_a)
    # breakpoint check at t in {2, 4}: the dilation by two is exactly tight
    assert c == pytest.approx(2.0, rel=1e-9)


def test_pointwise_constant_absent_when_unreachable():
    mu_x = singular_indicator(1e14, 1.0)
    mu_a = singular_indicator(1e-14, 1.0)
    # needed constant ~1e28 exceeds the search cap
    assert pointwise_constant(mu_x, mu_a) is None


def test_pointwise_constant_zero_numerator():
    mu = singular_indicator(1.0, 1.0)
    assert pointwise_constant(SingularFunction((), ()), mu) == 1.0


# -- K-orbit norm --------------------------------------------------------------------


def test_korbit_identity_is_one():
    mu = SingularFunction((1.0, 2.5), (2.0, 0.5))
    assert korbit_norm(mu, mu) == 1.0


def test_korbit_doubled_block_attained_at_small_u():
    a = singular_indicator(1.0, 1.0)
    x = a.scale(2.0)
    # K_u(x) = min(2u, 1), K_u(a) = min(u, 1): the ratio peaks at u -> 0+
    assert korbit_norm(x, a) == 2.0


def test_korbit_zero_numerator():
    assert korbit_norm(SingularFunction((), ()), singular_indicator(1.0, 1.0)) == 0.0


def test_korbit_rejects_zero_reference():
    with pytest.raises(ValueError):
        korbit_norm(singular_indicator(1.0, 1.0), SingularFunction((), ()))


def test_korbit_diverges_when_only_numerator_has_tail():
    x = SingularFunction((1.0,), (2.0,), tail=0.5)
    a = singular_indicator(1.0, 1.0)
    assert korbit_norm(x, a) == float("inf")
    # and stays finite the other way round
    assert korbit_norm(a, x) < float("inf")


def test_korbit_supremum_matches_sampled_maximum():
    rng = np.random.default_rng(5)
    for _ in range(10):
        mx, ma = random_singular(rng), random_singular(rng)
        exact = korbit_norm(mx, ma)
        cx, ca = k_curve(mx), k_curve(ma)
        us = log_grid(1e-6, 1e6, 4000) + list(cx.knots) + list(ca.knots)
        sampled = max(cx.at(u) / ca.at(u) for u in us)
        assert sampled <= exact * (1 + 1e-12)
        assert exact <= sampled * (1 + 1e-9)


def test_korbit_reciprocity():
    rng = np.random.default_rng(7)
    for _ in range(50):
        mx, ma = random_singular(rng), random_singular(rng)
        assert korbit_norm(mx, ma) * korbit_norm(ma, mx) >= 1.0 - 1e-12


def test_korbit_bounded_by_pointwise_constant():
    rng = np.random.default_rng(11)
    for _ in range(50):
        ma = random_singular(rng)
        c = float(rng.choice([1.0, 1.5, 3.0]))
        theta = float(rng.uniform(0.3, 1.0))
        mx = ma.dilate(c).scale(c * theta)
        assert korbit_norm(mx, ma) <= c * (1 + 1e-12)


def test_pointwise_constant_within_three_times_korbit():
    rng = np.random.default_rng(13)
    for _ in range(50):
        ma = random_singular(rng)
        c = float(rng.choice([1.0, 2.0, 4.0]))
        mx = ma.dilate(c).scale(c * float(rng.uniform(0.3, 1.0)))
        ko = korbit_norm(mx, ma)
        pc = pointwise_constant(mx, ma)
        assert pc is not None
        assert pc <= 3.0 * ko * (1 + 1e-9)


# -- counterexample ------------------------------------------------------------------


def test_counterexample_unit_parameters():
    a, x, rep = counterexample(CounterexampleSpec(1, 1, 1.0, 0.6))
    assert rep.ok, str(rep)
    mua, mux = mu_of(a), mu_of(x)
    # K-curves equal min(t, 2) on a log grid
    for t in log_grid(1e-3, 1e3, 100):
        assert abs(k_at(mua, t) - min(t, 2.0)) <= 1e-12 * max(1.0, t)
        assert abs(k_at(mux, t) - min(t, 2.0)) <= 1e-12 * max(1.0, t)
    # profiles separate on [1, 2)
    for t in (1.0, 1.5, 1.999):
        assert mua.at(t) == 0.6 < 1.0 == mux.at(t)
    assert not orbit_necessary_check(x, a, 1.0).ok
    assert korbit_norm(x, a) == 1.0


def test_counterexample_rejects_violated_constraint():
    with pytest.raises(ValueError):
        CounterexampleSpec(1, 1, 1.0, 0.4)  # 0.4 < tau2*k1/(tau1+tau2) = 0.5


def test_counterexample_requires_positive_parameters():
    with pytest.raises(ValueError):
        CounterexampleSpec(0, 1, 1.0, 0.6)
    with pytest.raises(ValueError):
        CounterexampleSpec(1, 1, -1.0, 0.6)


def test_counterexample_half_weight_realisation():
    spec = CounterexampleSpec(1, 1, 1.0, 0.6, weight=Fraction(1, 2))
    w, n1, n2 = spec.realisation()
    assert (w, n1, n2) == (Fraction(1, 2), 2, 2)
    a, x, rep = counterexample(spec)
    assert a.n == 4 and a.weight == 0.5
    assert rep.ok
    # same curves as the weight-one realisation
    a1, x1, _ = counterexample(CounterexampleSpec(1, 1, 1.0, 0.6))
    for u in log_grid(1e-2, 1e2, 25):
        assert k_at(mu_of(a), u) == pytest.approx(k_at(mu_of(a1), u), rel=1e-12)
        assert k_at(mu_of(x), u) == pytest.approx(k_at(mu_of(x1), u), rel=1e-12)


def test_counterexample_rational_traces():
    spec = CounterexampleSpec("0.3", "0.2", 2.0, 1.5)
    w, n1, n2 = spec.realisation()
    assert w == Fraction(1, 10) and (n1, n2) == (3, 2)
    a, x, rep = counterexample(spec)
    assert rep.ok, str(rep)


def test_counterexample_weight_must_divide():
    with pytest.raises(ValueError):
        CounterexampleSpec(1, 1, 1.0, 0.6, weight=Fraction(3, 7))


def test_counterexample_dimension_cap():
    spec = CounterexampleSpec("1", "0.0001", 1.0, 0.9999)
    with pytest.raises(ValueError):
        spec.realisation()
