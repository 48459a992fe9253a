"""
Breadth-first walks and merge times
===================================

Two blocks of mass 3 and 1, with exponential clocks fixed at 0.2 and 5.0.
"""

import numpy as np

from mcgraph import WalkPath, WeightVector, clocks_from_xi, decompose_excursions, merge_schedule

x = WeightVector([3.0, 1.0])
clocks = clocks_from_xi([0.2, 5.0])

# jumps sit at clock / q, so raising q squeezes them to the left
for q in (1.0, 2.0):
    walk = WalkPath.build(x, clocks, q)
    dec = decompose_excursions(x, clocks, q)
    print(f"q={q}: jumps at {walk.jump_times}, excursion lengths",
          [e.length for e in dec.excursions])

schedule = merge_schedule(x, clocks)
print("merge time:", schedule.events[0].q_star)   # (5.0 - 0.2) / 3

# a bigger random example: n unit blocks merge n - 1 times
from mcgraph import RngStream, sample_clocks

x = WeightVector.unit(8)
clocks = sample_clocks(x, RngStream(seed=1))
schedule = merge_schedule(x, clocks)
for e in schedule.events:
    print(f"  q*={e.q_star:.3f}  {e.left} + {e.right}")

# reflected walk evaluated on a grid
walk = WalkPath.build(x, clocks, schedule.times[3])
s = np.linspace(0, walk.domain_end, 9)
print(np.round(walk.reflected(s), 3))
