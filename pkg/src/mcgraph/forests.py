"""Spanning forests coupled to the breadth-first walks.

``F0`` is rebuilt from scratch at every ``q``: it is the breadth-first tree
read off the walk, and it is not monotone in ``q``.  ``F1`` is an edge stream:
at every merge the right root attaches to a size-biased pick from the left
component, and edges are never removed.  Both have the same components as the
merge schedule at every ``q``.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .core import ClockAssignment, RngLike, WeightVector, as_generator
from .graphs import UnionFind
from .walks import (ExcursionDecomposition, MergeSchedule, decompose_excursions,
                    partition_from_boundaries)


@dataclass(frozen=True)
class ForestEdge:
    child: int
    parent: int
    arrival_q: float = float("nan")

    def to_dict(self) -> dict:
        return {"child": self.child, "parent": self.parent, "q": self.arrival_q}


@dataclass(frozen=True)
class ForestState:
    """Rooted forest on positions ``0 .. n-1``; edges point child -> parent."""

    n: int
    edges: tuple[ForestEdge, ...]

    @property
    def roots(self) -> list[int]:
        children = {e.child for e in self.edges}
        return [v for v in range(self.n) if v not in children]

    def parent_map(self) -> dict[int, int]:
        return {e.child: e.parent for e in self.edges}

    def edges_until(self, q: float) -> list[ForestEdge]:
        return [e for e in self.edges if e.arrival_q <= q]

    def components(self, q: float | None = None) -> list[tuple[int, ...]]:
        """Vertex sets of the trees, optionally using only edges arrived by ``q``."""
        uf = UnionFind(self.n)
        for e in self.edges if q is None else self.edges_until(q):
            uf.union(e.child, e.parent)
        return uf.groups()

    def check(self) -> None:
        """Raise ``AssertionError`` unless this is a forest with earlier parents."""
        seen = set()
        uf = UnionFind(self.n)
        for e in self.edges:
            assert e.parent < e.child, f"parent {e.parent} not before child {e.child}"
            assert e.child not in seen, f"vertex {e.child} has two parents"
            seen.add(e.child)
            assert uf.union(e.child, e.parent), "cycle"

    def to_list(self) -> list[dict]:
        return [e.to_dict() for e in self.edges]


def build_f0_snapshot(x: WeightVector, clocks: ClockAssignment, q: float,
                      decomposition: ExcursionDecomposition | None = None) -> ForestState:
    """Breadth-first forest at a single ``q``.

    Position ``l`` listens for children during ``I_l minus I_{l-1}``, i.e. the
    window ``(sup I_{l-1}, sup I_l]``; a non-root ``h`` is the child of the
    earliest ``l < h`` in its excursion with ``sup I_l >= order_stats[h] / q``.
    """
    dec = decomposition if decomposition is not None else decompose_excursions(x, clocks, q)
    times = (clocks.order_stats / q).tolist()
    sup = dec.interval_sup.tolist()
    edges = []
    for exc in dec.excursions:
        for h in range(exc.first + 1, exc.last + 1):
            parent = bisect_left(sup, times[h], exc.first, h)
            edges.append(ForestEdge(child=h, parent=parent, arrival_q=float(q)))
    return ForestState(n=clocks.n, edges=tuple(edges))


def evolve_f1(x: WeightVector, clocks: ClockAssignment, schedule: MergeSchedule,
              rng: RngLike) -> ForestState:
    """Monotone forest: one size-biased attachment per merge, in event order."""
    gen = as_generator(rng)
    sizes = x.masses[clocks.pi]
    edges = []
    for ev in schedule.events:
        j, k = ev.left
        if j == k:
            parent = j
        else:
            w = sizes[j:k + 1]
            parent = j + int(gen.choice(k - j + 1, p=w / w.sum()))
        edges.append(ForestEdge(child=ev.right[0], parent=parent, arrival_q=ev.q_star))
    return ForestState(n=clocks.n, edges=tuple(edges))


def component_partition_at(schedule: MergeSchedule, q: float) -> list[tuple[int, int]]:
    """Contiguous position ranges after applying every merge with time ``<= q``."""
    if q < 0:
        raise ValueError("q must be nonnegative")
    if schedule.n == 1:
        return [(0, 0)]
    return partition_from_boundaries(schedule.boundary_times(), q)


def ranges_to_blocks(ranges) -> list[tuple[int, ...]]:
    return [tuple(range(a, b + 1)) for a, b in ranges]


def generations(forest: ForestState) -> np.ndarray:
    """Depth of every vertex below its root."""
    parent = forest.parent_map()
    depth = np.zeros(forest.n, dtype=int)
    for v in range(forest.n):
        if v in parent:
            depth[v] = depth[parent[v]] + 1
    return depth
