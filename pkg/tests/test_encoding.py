import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpplab.distributions import (
    Exponential,
    FiniteAtomic,
    Mixture,
    Pareto,
    TwoPoint,
    Uniform,
)
from fpplab import encoding as enc

FAMILIES = [
    TwoPoint(1.0, 2.0, 0.5),
    Uniform(0.0, 1.0),
    Exponential(1.0),
    Pareto(1.0, 3.0),
    FiniteAtomic([0.5, 1.5, 3.0], [0.25, 0.25, 0.5]),
    Mixture([Uniform(0.0, 1.0), FiniteAtomic([2.0], [1.0])], [0.5, 0.5]),
]


def test_partition_examples():
    assert list(enc.partition_level(Uniform(0, 1), 2).values) == [0.0, 0.25, 0.5, 0.75]
    assert list(enc.partition_level(TwoPoint(1, 2, 0.5), 2).values) == [1, 1, 1, 2]
    part = enc.partition_level(Exponential(1.0), 1).values
    assert part[0] == 0.0
    assert abs(part[1] - math.log(2)) < 1e-12


def test_partition_invariants():
    for law in FAMILIES:
        for j in (1, 3, 6):
            part = enc.partition_level(law, j)
            values = part.values
            assert values[0] == law.infimum
            assert np.all(np.diff(values) >= 0)
            grid = np.arange(2**j) / 2.0**j
            assert np.all(law.cdf_array(values)[1:] >= grid[1:])


def test_partition_level_guard():
    with pytest.raises(ValueError):
        enc.partition_level(Uniform(0, 1), 0)
    with pytest.raises(ValueError):
        enc.partition_level(Uniform(0, 1), 21)


def test_encode_examples():
    assert enc.encode_eval(Uniform(0, 1), [1, 0, 1]) == 0.625
    tp = TwoPoint(1, 2, 0.5)
    assert enc.encode_eval(tp, [1, 0, 1, 1]) == 2.0
    assert enc.encode_eval(tp, [1, 0, 1, 1, 0, 1]) == 2.0  # later 1 beyond position 1
    assert enc.encode_eval(tp, [1, 0, 0, 0]) == 1.0
    for law in FAMILIES:
        assert enc.encode_eval(law, [0] * 8) == law.infimum


def test_encode_guards():
    with pytest.raises(ValueError):
        enc.encode_eval(Uniform(0, 1), [0] * 31)
    with pytest.raises(ValueError):
        enc.encode_eval(Uniform(0, 1), [2])


def test_bit_flip_examples():
    assert enc.bit_flip_pair(Uniform(0, 1), [0, 1, 1, 0], 1) == (0.875, 0.375)
    assert enc.bit_flip_pair(TwoPoint(1, 2, 0.5), [1, 0, 0, 0], 2) == (2.0, 1.0)
    for law in FAMILIES:
        depth = 6
        up, down = enc.bit_flip_pair(law, [0] * depth, depth)
        assert down == law.infimum
        assert up == enc.partition_level(law, depth).values[1]
    with pytest.raises(ValueError):
        enc.bit_flip_pair(Uniform(0, 1), [0, 1], 3)


@pytest.mark.parametrize("law", FAMILIES, ids=lambda l: repr(l)[:30])
def test_bit_flip_monotone(law):
    rng = np.random.default_rng(0)
    for _ in range(50):
        depth = int(rng.integers(2, 12))
        bits = list(rng.integers(0, 2, depth))
        j = int(rng.integers(1, depth + 1))
        up, down = enc.bit_flip_pair(law, bits, j)
        assert up >= down


@pytest.mark.parametrize("law", FAMILIES, ids=lambda l: repr(l)[:30])
def test_exhaustive_properties_depth8(law):
    depth = 8
    assert enc.exhaustive_monotonicity_violations(law, depth) == 0
    assert enc.exhaustive_nesting_violations(law, depth) == 0
    assert enc.level_monotonicity_violations(law, depth) == 0
    assert enc.exhaustive_pushforward_distance(law, depth) <= 2.0**-depth + 1e-12


@pytest.mark.parametrize("law", FAMILIES, ids=lambda l: repr(l)[:30])
def test_finiteness_with_a_zero_bit(law):
    # one zero bit keeps the decoded value finite even for unbounded laws
    bits = [1] * 12
    for j in range(1, 13):
        flipped = list(bits)
        flipped[j - 1] = 0
        assert math.isfinite(enc.encode_eval(law, flipped))


def test_pushforward_examples():
    assert enc.verify_pushforward(FiniteAtomic([3.0], [1.0]), 12, 2000, 1) == 0.0
    ks = enc.verify_pushforward(Uniform(0, 1), 30, 100_000, 0)
    assert ks < 0.006
    ks = enc.verify_pushforward(TwoPoint(1, 2, 0.5), 30, 100_000, 0)
    assert ks < 0.006
    with pytest.raises(ValueError):
        enc.verify_pushforward(Uniform(0, 1), 30, 10, 0)


def test_truncation_tail_is_finite_quantile():
    # the all-ones address evaluates to a finite deep quantile
    law = Pareto(1.0, 3.0)
    top = enc.encode_index(law, 2**30 - 1, 30)
    assert math.isfinite(top)
    assert top == law.quantile((2**30 - 1) / 2**30)


@given(st.integers(min_value=0, max_value=2**10 - 1), st.integers(min_value=0, max_value=2**10 - 1))
@settings(max_examples=300, deadline=None)
def test_monotone_pairs_hypothesis(i, j):
    law = Mixture([Uniform(0.0, 1.0), FiniteAtomic([2.0], [1.0])], [0.5, 0.5])
    if (i & j) == i:  # i's bits are a subset: coordinatewise smaller address
        assert enc.encode_index(law, i, 10) <= enc.encode_index(law, j, 10)


@pytest.mark.parametrize("law", FAMILIES, ids=lambda l: repr(l)[:30])
def test_monotone_pairs_random_deep(law):
    # beyond the exhaustive depth: sampled comparable pairs at depth 30
    rng = np.random.default_rng(5)
    depth = 30
    for _ in range(300):
        j = int(rng.integers(0, 2**depth))
        # clearing a random subset of set bits gives a coordinatewise
        # smaller address
        mask = int(rng.integers(0, 2**depth)) & j
        i = j & ~mask
        assert enc.encode_index(law, i, depth) <= enc.encode_index(law, j, depth)


def test_level_monotone_explicit():
    law = TwoPoint(1.0, 2.0, 0.5)
    idx = 0b10110
    values = [enc.encode_index(law, idx >> (5 - j), j) for j in range(1, 6)]
    assert values == sorted(values)
