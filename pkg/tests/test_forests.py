import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from mcgraph import (RngStream, WeightVector, build_f0_snapshot, clocks_from_xi,
                     component_partition_at, decompose_excursions, evolve_f1, merge_schedule,
                     sample_clocks)
from mcgraph.forests import generations, ranges_to_blocks

from conftest import random_instance


def test_trivial_forest_before_first_merge(worked):
    x, c = worked
    f = build_f0_snapshot(x, c, 1.0)
    assert f.edges == () and f.roots == [0, 1]


def test_f0_worked(worked):
    x, c = worked
    f = build_f0_snapshot(x, c, 2.0)
    assert [(e.child, e.parent) for e in f.edges] == [(1, 0)]


@given(st.integers(0, 10**6), st.floats(0.05, 20))
@settings(max_examples=60, deadline=None)
def test_f0_structure(seed, q):
    x, c, _ = random_instance(seed, n_max=30)
    dec = decompose_excursions(x, c, q)
    f = build_f0_snapshot(x, c, q)
    f.check()
    assert f.components() == ranges_to_blocks(dec.ranges())
    parent = f.parent_map()
    for e in dec.excursions:
        assert sum(1 for h in e.carried if h in parent) == e.last - e.first
        # breadth-first listing: parents are nondecreasing along the excursion
        ps = [parent[h] for h in range(e.first + 1, e.last + 1)]
        assert ps == sorted(ps)
    depth = generations(f)
    for e in dec.excursions:
        assert list(depth[e.first:e.last + 1]) == sorted(depth[e.first:e.last + 1])


def test_f1_first_merge_is_forced():
    x = WeightVector.unit(2)
    c = sample_clocks(x, RngStream(0))
    f = evolve_f1(x, c, merge_schedule(x, c), RngStream(1))
    assert [(e.child, e.parent) for e in f.edges] == [(1, 0)]


def second_merge_setup():
    # positions carry masses (3, 1, 1); [0] and [1] merge first, then [2] joins [0, 1]
    x = WeightVector([3.0, 1.0, 1.0])
    c = clocks_from_xi([1.0, 1.2, 2.0])
    s = merge_schedule(x, c)
    assert [e.left for e in s.events] == [(0, 0), (0, 1)]
    return x, c, s


def test_f1_size_biased_parent():
    x, c, s = second_merge_setup()
    n = 100_000
    gen = np.random.default_rng(12)
    parents = Counter(evolve_f1(x, c, s, gen).edges[1].parent for _ in range(n))
    assert set(parents) == {0, 1}
    assert sps.chisquare([parents[0], parents[1]], [n * 0.75, n * 0.25]).pvalue > 0.01


def test_component_partition_examples(worked):
    x, c = worked
    s = merge_schedule(x, c)
    assert component_partition_at(s, 0.0) == [(0, 0), (1, 1)]
    assert component_partition_at(s, 1.6) == [(0, 1)]
    assert component_partition_at(s, 100.0) == [(0, 1)]
    with pytest.raises(ValueError):
        component_partition_at(s, -1.0)


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_three_partitions_agree(seed):
    x, c, gen = random_instance(seed, n_max=25)
    s = merge_schedule(x, c)
    f1 = evolve_f1(x, c, s, gen)
    f1.check()
    assert len(f1.edges) == x.n - 1
    assert [e.arrival_q for e in f1.edges] == s.times.tolist()
    top = s.events[-1].q_star * 1.3 if len(s) else 1.0
    for q in np.sort(gen.uniform(1e-9, top, size=12)):
        blocks = ranges_to_blocks(component_partition_at(s, q))
        assert build_f0_snapshot(x, c, q).components() == blocks
        assert f1.components(q) == blocks
    qs = np.sort(gen.uniform(0, top, size=2))
    early = {(e.child, e.parent) for e in f1.edges_until(qs[0])}
    late = {(e.child, e.parent) for e in f1.edges_until(qs[1])}
    assert early <= late


def find_f0_rewiring(max_seed=500):
    x = WeightVector.unit(6)
    for seed in range(max_seed):
        c = sample_clocks(x, RngStream(77, seed))
        s = merge_schedule(x, c)
        probes = np.concatenate((s.times, [s.times[-1] * 2]))
        snaps = [{(e.child, e.parent) for e in build_f0_snapshot(x, c, q).edges} for q in probes]
        for a, b in zip(snaps, snaps[1:]):
            if not a <= b:
                return seed
    return None


def test_f0_is_not_monotone():
    # prune and reconnect: some realization loses an F0 edge as q grows
    assert find_f0_rewiring() is not None


def test_forest_json(worked):
    x, c = worked
    s = merge_schedule(x, c)
    f = evolve_f1(x, c, s, RngStream(0))
    rows = json.loads(json.dumps(f.to_list()))
    assert rows == [{"child": 1, "parent": 0, "q": pytest.approx(1.6)}]
