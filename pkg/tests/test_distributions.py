import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpplab.distributions import (
    DiracPlusUniform,
    Exponential,
    FiniteAtomic,
    Mixture,
    Pareto,
    TwoPoint,
    Uniform,
    check_assumptions,
    law_from_config,
)
from fpplab.rng import uniform01_array

ALL_LAWS = [
    TwoPoint(1.0, 2.0, 0.5),
    TwoPoint(0.0, 3.0, 0.25),
    Uniform(0.0, 1.0),
    Uniform(1.0, 2.5),
    Exponential(1.0),
    Exponential(0.3),
    Pareto(1.0, 3.0),
    FiniteAtomic([0.5, 1.5, 3.0], [0.25, 0.25, 0.5]),
    FiniteAtomic([0.0, 1.0], [0.4, 0.6]),
    DiracPlusUniform(0.0, 0.25, 0.5, 1.5),
    DiracPlusUniform(2.0, 0.5, 0.0, 1.0),
    Mixture([Uniform(0.0, 1.0), FiniteAtomic([2.0], [1.0])], [0.5, 0.5]),
    Mixture([Exponential(1.0), TwoPoint(1.0, 2.0, 0.5)], [0.3, 0.7]),
]


def test_cdf_examples():
    assert TwoPoint(1, 2, 0.5).cdf(1.0) == 0.5
    assert Uniform(0, 1).cdf(0.25) == 0.25
    mix = Mixture([Uniform(0, 1), FiniteAtomic([2], [1])], [0.5, 0.5])
    assert mix.cdf(2.0) == 1.0


def test_quantile_examples():
    assert Uniform(0, 1).quantile(0.5) == 0.5
    assert TwoPoint(1, 2, 0.5).quantile(0.5) == 1.0
    assert TwoPoint(1, 2, 0.5).quantile(0.75) == 2.0


def test_sample_examples():
    assert Uniform(0, 1).sample(0.3) == 0.3
    assert TwoPoint(1, 2, 0.5).sample(0.9) == 2.0
    # closed-form inverse of the exponential, cross-checked numerically
    assert abs(Exponential(1.0).sample(1 - math.exp(-1)) - 1.0) < 1e-12


def test_check_assumptions_examples():
    assert check_assumptions(Pareto(1, 3), 2).has_2log_moment
    assert not check_assumptions(Pareto(1, 2.0), 2).has_2log_moment
    rep = check_assumptions(FiniteAtomic([0, 1], [0.6, 0.4]), 2)
    assert rep.atom_at_zero_mass == 0.6
    assert not rep.satisfies_geodesic_condition
    rep = check_assumptions(Uniform(0, 1), 2)
    assert rep.atom_at_zero_mass == 0.0
    assert rep.satisfies_geodesic_condition
    assert check_assumptions(Uniform(0, 1), 3).pc_threshold == 0.2488
    with pytest.raises(ValueError):
        check_assumptions(Uniform(0, 1), 1)


def test_quantile_domain_errors():
    law = Uniform(0, 1)
    for bad in (0.0, -0.1, 1.0 + 1e-9):
        with pytest.raises(ValueError):
            law.quantile(bad)
    with pytest.raises(ValueError):
        law.sample(1.0)


def test_quantile_at_one():
    assert Uniform(0, 1).quantile(1.0) == 1.0
    assert TwoPoint(1, 2, 0.5).quantile(1.0) == 2.0
    assert Exponential(1.0).quantile(1.0) == math.inf
    assert Pareto(1, 3).quantile(1.0) == math.inf


@pytest.mark.parametrize("law", ALL_LAWS, ids=lambda l: type(l).__name__ + repr(l.to_config().get("family", "")))
def test_quantile_is_generalized_inverse(law):
    """q(u) = min{x : F(x) >= u} at float resolution, checked both ways."""
    us = np.linspace(0.001, 0.999, 247)
    qs = law.quantile_array(us)
    assert np.all(law.cdf_array(qs) >= us)
    below = np.nextafter(qs, -np.inf)
    ok = (law.cdf_array(below) < us) | (qs == 0.0)
    assert np.all(ok)


@pytest.mark.parametrize("law", ALL_LAWS, ids=lambda l: repr(l)[:40])
def test_quantile_monotone(law):
    us = np.sort(uniform01_array(3, np.arange(500, dtype=np.int64)))
    qs = law.quantile_array(us)
    assert np.all(np.diff(qs) >= 0)


@pytest.mark.parametrize("law", ALL_LAWS, ids=lambda l: repr(l)[:40])
def test_quantile_cdf_roundtrip(law):
    xs = np.linspace(law.infimum, law.quantile(0.99), 101)
    fx = law.cdf_array(xs)
    pos = fx > 0
    qs = law.quantile_array(np.maximum(fx[pos], 1e-300))
    assert np.all(qs <= xs[pos])
    assert np.all(law.cdf_array(qs) >= fx[pos])


@pytest.mark.parametrize("law", ALL_LAWS, ids=lambda l: repr(l)[:40])
def test_ks_band_on_inverse_sampling(law):
    """10^5 inverse-CDF samples sit within the 99% KS band of F."""
    from fpplab.encoding import ks_distance

    n = 100_000
    u = uniform01_array(0, np.arange(n, dtype=np.int64))
    xs = law.sample_array(u)
    assert ks_distance(law, xs) <= 1.63 / math.sqrt(n)


@given(st.floats(min_value=1e-6, max_value=1.0 - 1e-6))
@settings(max_examples=200, deadline=None)
def test_uniform_quantile_hypothesis(u):
    law = Uniform(0.25, 1.75)
    q = law.quantile(u)
    assert law.cdf(q) >= u
    assert law.cdf(np.nextafter(q, -np.inf)) < u


@given(
    st.lists(st.floats(min_value=0.0, max_value=50.0), min_size=1, max_size=6, unique=True),
    st.integers(min_value=1, max_value=10**6),
)
@settings(max_examples=100, deadline=None)
def test_atomic_quantile_hits_atoms(values, uintish):
    probs = [1.0 / len(values)] * len(values)
    law = FiniteAtomic(values, probs)
    u = uintish / (10**6 + 1)
    q = law.quantile(max(u, 1e-9))
    assert q in law.values
    assert law.cdf(q) >= u - 1e-15


@pytest.mark.parametrize("law", ALL_LAWS, ids=lambda l: repr(l)[:40])
def test_quantile_extreme_arguments(law):
    # near the ends of (0,1) the inverse stays consistent and finite below 1
    for u in (2.0**-54, 2.0**-30, 1.0 - 2.0**-53):
        q = law.quantile(u)
        assert law.cdf(q) >= u
        assert q >= law.infimum
        assert math.isfinite(q)


def test_validation_errors():
    with pytest.raises(ValueError):
        TwoPoint(2.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        Uniform(1.0, 1.0)
    with pytest.raises(ValueError):
        Pareto(0.0, 3.0)
    with pytest.raises(ValueError):
        Pareto(1.0, 1.0)
    with pytest.raises(ValueError):
        FiniteAtomic([1.0, 2.0], [0.6, 0.6])
    with pytest.raises(ValueError):
        FiniteAtomic([-1.0], [1.0])
    with pytest.raises(ValueError):
        Mixture([Uniform(0, 1)], [0.5])
    with pytest.raises(ValueError):
        DiracPlusUniform(0.0, 1.5, 0.0, 1.0)


def test_support_endpoints():
    assert Uniform(1, 2).infimum == 1.0
    assert Uniform(1, 2).supremum == 2.0
    assert Exponential(2.0).supremum == math.inf
    assert Pareto(1.5, 2.5).infimum == 1.5
    mix = Mixture([Uniform(0.5, 1.0), Exponential(1.0)], [0.5, 0.5])
    assert mix.infimum == 0.0
    assert mix.supremum == math.inf
    assert DiracPlusUniform(2.0, 0.5, 0.0, 1.0).supremum == 2.0


def test_atoms_and_zero_mass():
    law = FiniteAtomic([0.0, 1.0, 1.0], [0.25, 0.5, 0.25])
    values, probs = law.atoms()
    assert list(values) == [0.0, 1.0]
    assert list(probs) == [0.25, 0.75]
    assert law.zero_mass == 0.25
    mix = Mixture([TwoPoint(0.0, 1.0, 0.5), FiniteAtomic([1.0], [1.0])], [0.5, 0.5])
    assert mix.is_finitely_atomic
    values, probs = mix.atoms()
    assert list(values) == [0.0, 1.0]
    assert probs.sum() == pytest.approx(1.0)
    assert not Mixture([Uniform(0, 1), TwoPoint(1, 2, 0.5)], [0.5, 0.5]).is_finitely_atomic


def test_law_config_roundtrip():
    for law in ALL_LAWS:
        clone = law_from_config(law.to_config())
        xs = np.linspace(0.0, 5.0, 37)
        assert np.array_equal(clone.cdf_array(xs), law.cdf_array(xs))
    with pytest.raises(ValueError):
        law_from_config({"family": "cauchy"})
    with pytest.raises(ValueError):
        law_from_config({"a": 1.0})
