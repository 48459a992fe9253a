import json
import math

import numpy as np
import pytest

from mcgraph import (RngStream, WeightVector, enumerate_exact_law, simulate_direct_graph,
                     simulate_direct_multigraph)
from mcgraph.experiments import LN2
from mcgraph.oracle import TooLarge, partition_key, sample_direct_graph
from mcgraph.stats import EmpiricalLaw, chi_square_gof, chi_square_homogeneity


def test_exact_law_n3_ln2():
    law = enumerate_exact_law(WeightVector.unit(3), LN2)
    law.check()
    assert law[((1, 0), (1, 0), (1, 0))] == pytest.approx(1 / 8)
    assert law[((2, 0), (1, 0))] == pytest.approx(3 / 8)
    assert law[((3, 0),)] == pytest.approx(3 / 8)
    assert law[((3, 1),)] == pytest.approx(1 / 8)
    sizes = law.marginal(lambda key: tuple(s for s, _ in key))
    assert sizes[(3,)] == pytest.approx(1 / 2)


def test_exact_law_trivial_cases():
    assert enumerate_exact_law(WeightVector.unit(4), 0.0).probabilities == {((1, 0),) * 4: 1.0}
    law = enumerate_exact_law([2.0, 0.5], 1.3)
    assert law[((2, 0),)] == pytest.approx(1 - math.exp(-1.3))
    with pytest.raises(TooLarge):
        enumerate_exact_law(WeightVector.unit(6), 1.0)
    json.dumps(law.to_dict())


def test_exact_law_n4_by_hand():
    # unit masses, every edge with probability p: P(no edges) and P(complete graph)
    q = 0.5
    p = 1 - math.exp(-q)
    law = enumerate_exact_law(WeightVector.unit(4), q)
    law.check()
    assert law[((1, 0),) * 4] == pytest.approx((1 - p) ** 6)
    assert law[((4, 3),)] == pytest.approx(p ** 6)
    # 16 spanning trees of K4
    assert law[((4, 0),)] == pytest.approx(16 * p ** 3 * (1 - p) ** 3)


def test_direct_graph_pair_law():
    x = WeightVector.unit(2)
    n = 20_000
    merged = sum(len(simulate_direct_graph(x, RngStream(0, r), [0.7])[0].components) == 1
                 for r in range(n))
    p = 1 - math.exp(-0.7)
    assert abs(merged - n * p) < 4 * math.sqrt(n * p * (1 - p))


def test_direct_graph_probes():
    obs = simulate_direct_graph(WeightVector.unit(5), RngStream(1), [0.0, 1.0, 50.0])
    assert obs[0].key() == ((1, 0),) * 5
    assert len(obs[2].components) == 1 and obs[2].surplus[0] == 6
    with pytest.raises(ValueError):
        simulate_direct_graph(WeightVector.unit(3), RngStream(1), [1.0, 0.5])


def test_oracle_self_consistency():
    x = WeightVector([1.5, 1.0, 1.0, 0.4])
    q = 1.1
    emp = EmpiricalLaw.from_keys(sample_direct_graph(x, RngStream(2, r)).observe(q).key()
                                 for r in range(20_000))
    assert chi_square_gof(emp, enumerate_exact_law(x, q)).p_value > 0.001


def test_multigraph_counts():
    n, q = 4, 1.5
    x = WeightVector.unit(n)
    reps = 5_000
    total = sum(len(simulate_direct_multigraph(x, RngStream(3, r), q).edges) for r in range(reps))
    mean = n * (n - 1) * q / 2 + n * q / 2
    assert abs(total - reps * mean) < 3 * math.sqrt(reps * mean)


def test_multigraph_single_block_has_only_loops():
    run = simulate_direct_multigraph(WeightVector([3.0]), RngStream(4), 2.0)
    assert run.edges and all(e.is_loop for e in run.edges)
    for line in run.to_jsonl().splitlines():
        assert json.loads(line)["kind"] == "self-loop"
    with pytest.raises(ValueError):
        simulate_direct_multigraph(WeightVector([3.0]), RngStream(4), 0.0)


def test_multigraph_connectivity_matches_simple_graph():
    x = WeightVector.unit(3)
    q = 0.8
    a = EmpiricalLaw.from_keys(partition_key(3, [(e.src, e.dst) for e in
                                                 simulate_direct_multigraph(x, RngStream(5, r), q).edges])
                               for r in range(20_000))
    b = EmpiricalLaw.from_keys(partition_key(3, sample_direct_graph(x, RngStream(6, r)).edges_at(q))
                               for r in range(20_000))
    assert chi_square_homogeneity(a, b).p_value > 0.001
