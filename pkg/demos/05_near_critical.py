"""
Near the critical window
========================

Masses n^(-2/3) at time n^(1/3) + t against the largest excursion of
W(s) = BM(s) + t s - s^2 / 2 reflected at its minimum.
"""

import warnings

import numpy as np

from mcgraph import RngStream
from mcgraph.scaling import (ScalingParams, TruncationWarning, discrete_largest_component,
                             extract_excursions_and_marks, largest_excursion,
                             sample_continuum_paths)

warnings.simplefilter("ignore", TruncationWarning)

for t in (-1.0, 0.0, 1.0):
    params = ScalingParams(kappa=1.0, t=t, horizon=10.0, ds=1e-3)
    paths = [p[0] for p in sample_continuum_paths(params, RngStream(10), 300)]
    cont = np.mean([largest_excursion(p) for p in paths])
    disc = np.mean([discrete_largest_component(2000, t, RngStream(11, r)) for r in range(300)])
    print(f"t={t:+.0f}: continuum {cont:.3f}  discrete n=2000 {disc:.3f}")

# marks: a Poisson count under each excursion
state = extract_excursions_and_marks(paths[0], RngStream(12))
print("lengths", np.round(state.X[:5], 3))
print("marks  ", state.Y[:5])
