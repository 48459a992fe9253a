"""Ground truth for the coupled constructions.

Nothing here touches walks, forests or the mosaic: the simple graph gives
every pair an exponential arrival time, the multigraph runs independent
Poisson streams per ordered pair and per vertex, and tiny cases are solved by
summing over every edge subset.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import EPS, RngLike, WeightVector, as_generator
from .graphs import GraphObservation, UnionFind, observe_graph

MAX_ENUMERATION_N = 5


class TooLarge(ValueError):
    """Exact enumeration requested for too many vertices."""


@dataclass(frozen=True)
class DirectGraphRun:
    """One realization of the inhomogeneous random graph process."""

    n: int
    pairs: tuple[tuple[int, int], ...]
    arrival: np.ndarray

    def edges_at(self, q: float) -> list[tuple[int, int]]:
        return [p for p, t in zip(self.pairs, self.arrival) if t <= q]

    def observe(self, q: float) -> GraphObservation:
        return observe_graph(self.n, self.edges_at(q))


def sample_direct_graph(x: WeightVector, rng: RngLike) -> DirectGraphRun:
    """Edge ``{i, j}`` arrives after an ``Exponential(rate x_i x_j)`` time."""
    gen = as_generator(rng)
    m = x.masses
    pairs = tuple(combinations(range(x.n), 2))
    rates = np.array([m[i] * m[j] for i, j in pairs])
    arrival = gen.exponential(1.0 / rates) if pairs else np.empty(0)
    return DirectGraphRun(n=x.n, pairs=pairs, arrival=arrival)


def simulate_direct_graph(x: WeightVector, rng: RngLike, probe_qs) -> list[GraphObservation]:
    """Partition and per-component surplus at each probe time (one realization)."""
    qs = list(probe_qs)
    if any(b < a for a, b in zip(qs, qs[1:])):
        raise ValueError("probe times must be nondecreasing")
    run = sample_direct_graph(x, rng)
    return [run.observe(q) for q in qs]


@dataclass(frozen=True)
class MultiEdge:
    q: float
    src: int
    dst: int

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst


@dataclass(frozen=True)
class DirectMultigraphRun:
    n: int
    q_max: float
    edges: tuple[MultiEdge, ...]

    def until(self, q: float) -> list[MultiEdge]:
        return [e for e in self.edges if e.q <= q]

    def observe(self, q: float) -> GraphObservation:
        return observe_graph(self.n, [(e.src, e.dst) for e in self.until(q)])

    def to_jsonl(self) -> str:
        kinds = {True: "self-loop", False: "multi-surplus"}
        return "".join(json.dumps({"q": e.q, "src": e.src, "dst": e.dst, "kind": kinds[e.is_loop]}) + "\n"
                       for e in self.edges)


def simulate_direct_multigraph(x: WeightVector, rng: RngLike, q_max: float) -> DirectMultigraphRun:
    """Directed edge ``i -> j`` at rate ``x_i x_j / 2``, loop ``i -> i`` at ``x_i**2 / 2``."""
    if not q_max > 0:
        raise ValueError("q_max must be positive")
    gen = as_generator(rng)
    m = x.masses
    rates = np.outer(m, m) / 2.0
    counts = gen.poisson(rates * q_max)
    edges = []
    for i, j in zip(*np.nonzero(counts)):
        for q in gen.uniform(0.0, q_max, size=counts[i, j]).tolist():
            edges.append(MultiEdge(q, int(i), int(j)))
    edges.sort(key=lambda e: e.q)
    return DirectMultigraphRun(n=x.n, q_max=float(q_max), edges=tuple(edges))


@dataclass(frozen=True)
class ExactLaw:
    """Probability of every label-free outcome key."""

    probabilities: dict

    @property
    def support(self) -> list:
        return sorted(self.probabilities)

    def __getitem__(self, key) -> float:
        return self.probabilities.get(key, 0.0)

    def check(self) -> None:
        p = np.array(list(self.probabilities.values()))
        assert np.all(p >= 0) and abs(p.sum() - 1.0) < EPS

    def marginal(self, fn) -> dict:
        """Push the law forward through ``fn`` applied to the outcome key."""
        out: dict = {}
        for key, p in self.probabilities.items():
            k = fn(key)
            out[k] = out.get(k, 0.0) + p
        return out

    def to_dict(self) -> dict:
        return {"outcomes": [{"profile": [list(c) for c in key], "p": p}
                             for key, p in sorted(self.probabilities.items())]}


def enumerate_exact_law(masses, q: float) -> ExactLaw:
    """Law of the label-free ``(size, surplus)`` profile of the graph at ``q``.

    Edge ``{i, j}`` is present independently with ``1 - exp(-q x_i x_j)``;
    all ``2**C(n, 2)`` subsets are summed.
    """
    m = np.asarray(getattr(masses, "masses", masses), dtype=float)
    n = m.size
    if n > MAX_ENUMERATION_N:
        raise TooLarge(f"exact enumeration supports n <= {MAX_ENUMERATION_N}, got {n}")
    pairs = list(combinations(range(n), 2))
    p = [-math.expm1(-q * m[i] * m[j]) for i, j in pairs]
    law: dict = {}
    for mask in range(1 << len(pairs)):
        w = 1.0
        chosen = []
        for b, (pair, pe) in enumerate(zip(pairs, p)):
            if mask >> b & 1:
                w *= pe
                chosen.append(pair)
            else:
                w *= 1.0 - pe
        if w == 0.0:
            continue
        key = observe_graph(n, chosen).key()
        law[key] = law.get(key, 0.0) + w
    return ExactLaw(law)


def partition_key(n: int, edges) -> tuple[tuple[int, ...], ...]:
    """Labeled partition of ``0 .. n-1`` induced by the edges."""
    uf = UnionFind(n)
    for a, b in edges:
        uf.union(a, b)
    return tuple(uf.groups())
