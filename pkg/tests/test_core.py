import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from mcgraph import RngStream, TieError, WeightVector, clocks_from_xi, parse_masses, sample_clocks
from mcgraph.core import as_generator


def test_weight_vector_validation():
    with pytest.raises(ValueError):
        WeightVector([1.0, 2.0])
    with pytest.raises(ValueError):
        WeightVector([1.0, 0.0])
    with pytest.raises(ValueError):
        WeightVector([])
    assert WeightVector.sorted([1, 3, 2]).masses.tolist() == [3, 2, 1]
    assert WeightVector.critical(8).masses[0] == pytest.approx(0.25)


def test_parse_masses():
    assert parse_masses("unit", 3).masses.tolist() == [1, 1, 1]
    assert parse_masses("1,3", 2).masses.tolist() == [3, 1]
    assert parse_masses("n^{-2/3}", 1000).masses[0] == pytest.approx(0.01)
    with pytest.raises(ValueError):
        parse_masses("1,2", 3)


def test_single_block():
    x = WeightVector([2.0])
    c = sample_clocks(x, RngStream(3))
    assert c.pi.tolist() == [0]
    assert c.order_stats.tolist() == c.xi.tolist()


def test_tie_rejected():
    with pytest.raises(TieError):
        clocks_from_xi([1.0, 1.0])


@given(st.lists(st.floats(0.01, 100), min_size=1, max_size=30), st.integers(0, 2**32))
@settings(max_examples=50, deadline=None)
def test_clock_invariants(masses, seed):
    x = WeightVector.sorted(masses)
    c = sample_clocks(x, RngStream(seed))
    assert sorted(c.pi.tolist()) == list(range(x.n))
    assert np.all(np.diff(c.order_stats) > 0)
    assert np.array_equal(c.order_stats, c.xi[c.pi])
    assert np.array_equal(c.position_of()[c.pi], np.arange(x.n))


def test_determinism():
    x = WeightVector.sorted([5, 2, 1, 1])
    a = sample_clocks(x, RngStream(11, 4))
    b = sample_clocks(x, RngStream(11, 4))
    c = sample_clocks(x, RngStream(11, 5))
    assert np.array_equal(a.xi, b.xi)
    assert not np.array_equal(a.xi, c.xi)


def test_generator_passthrough():
    g = np.random.default_rng(0)
    assert as_generator(g) is g


def test_first_pick_size_biased():
    # exponential race: block i is first with probability x_i / sum(x)
    x = WeightVector([2.0, 1.0])
    n = 30_000
    first = sum(sample_clocks(x, RngStream(1, r)).pi[0] == 0 for r in range(n))
    assert abs(first - n * 2 / 3) < 4 * np.sqrt(n * 2 / 9)


def test_uniform_permutation_for_equal_masses():
    x = WeightVector.unit(3)
    counts = Counter(tuple(sample_clocks(x, RngStream(2, r)).pi) for r in range(100_000))
    assert set(counts) == set(itertools.permutations(range(3)))
    obs = np.array(list(counts.values()))
    assert sps.chisquare(obs).pvalue > 0.01
