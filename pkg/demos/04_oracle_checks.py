"""
Checking the constructions against a plain random graph
=======================================================
"""

from mcgraph import RngStream, WeightVector, enumerate_exact_law, sample_clocks, surplus_snapshot_f0
from mcgraph.experiments import LN2, process_law_check, oracle_self_check
from mcgraph.stats import EmpiricalLaw, chi_square_gof

x = WeightVector.unit(3)
law = enumerate_exact_law(x, LN2)
for key, p in sorted(law.probabilities.items()):
    print(key, round(p, 4))

# the oracle itself, then the breadth-first construction, against enumeration
print(oracle_self_check(3, LN2, replicates=20_000, seed=0).to_json())

emp = EmpiricalLaw()
for r in range(20_000):
    gen = RngStream(1, r).generator()
    emp.add(surplus_snapshot_f0(x, sample_clocks(x, gen), LN2, gen).observe().key())
print("snapshot vs exact:", chi_square_gof(emp, law))

# the monotone construction as a process: joint partitions at two times
for rep in process_law_check(3, 0.3, 0.8, replicates=10_000, seed=2):
    print(rep.to_json())
