"""
Two spanning forests, one partition
===================================

F0 is rebuilt from scratch at each q and can rewire; F1 only ever adds edges.
Their components agree with the merge schedule at every q.
"""

from mcgraph import (RngStream, WeightVector, build_f0_snapshot, component_partition_at, evolve_f1,
                     merge_schedule, sample_clocks)
from mcgraph.forests import ranges_to_blocks

x = WeightVector.unit(6)
gen = RngStream(seed=3).generator()
clocks = sample_clocks(x, gen)
schedule = merge_schedule(x, clocks)
f1 = evolve_f1(x, clocks, schedule, gen)

for q in schedule.times:
    f0 = build_f0_snapshot(x, clocks, q)
    blocks = ranges_to_blocks(component_partition_at(schedule, q))
    print(f"q={q:.3f}")
    print("  F0 edges", sorted((e.child, e.parent) for e in f0.edges))
    print("  F1 edges", sorted((e.child, e.parent) for e in f1.edges_until(q)))
    assert f0.components() == f1.components(q) == blocks
print("partitions agree at every merge time")
