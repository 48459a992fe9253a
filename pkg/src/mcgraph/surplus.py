"""Surplus edges on top of the spanning forests.

Three constructions:

* :func:`surplus_snapshot_f0` decorates the breadth-first forest at one
  ``q`` with independently drawn non-tree edges.  Its law at that ``q`` is the
  continuous-time random graph's.
* :func:`sample_surplus_monotone` runs the Poisson processes indexed by
  ``(l; j-k)`` on top of the monotone forest.  In simple mode arrivals that
  duplicate an existing edge are dropped, giving the random graph process;
  in multigraph mode every arrival is kept and self-loops are added.
* :func:`graph_process_g1` wires the monotone pipeline together.

Process ids ``(l, j, k)`` use 0-based positions: ``l`` issues the edge, the
target is drawn from positions ``j .. k``.  ``(l, l, l)`` is the self-loop
process of ``l``.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .core import EPS, ClockAssignment, RngLike, WeightVector, as_generator, sample_clocks
from .forests import ForestState, build_f0_snapshot, evolve_f1
from .graphs import GraphObservation, observe_graph
from .walks import MergeSchedule, WalkPath, decompose_excursions, merge_schedule

SIMPLE = "simple-surplus"
MULTI = "multi-surplus"
LOOP = "self-loop"


class ConsistencyError(AssertionError):
    """Two independent evaluations of the same quantity disagree."""


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class GraphSnapshot:
    q: float
    spanning: ForestState
    surplus_edges: frozenset = frozenset()

    def edges(self) -> list[tuple[int, int]]:
        return [_pair(e.child, e.parent) for e in self.spanning.edges] + sorted(self.surplus_edges)

    def observe(self, clocks: ClockAssignment | None = None) -> GraphObservation:
        """Components and surplus counts, relabelled to block labels if ``clocks`` given."""
        edges = self.edges()
        if clocks is not None:
            pi = clocks.pi
            edges = [(int(pi[a]), int(pi[b])) for a, b in edges]
        return observe_graph(self.spanning.n, edges)

    def check(self) -> None:
        tree = {_pair(e.child, e.parent) for e in self.spanning.edges}
        comp = {}
        for i, c in enumerate(self.spanning.components()):
            for v in c:
                comp[v] = i
        for a, b in self.surplus_edges:
            assert a < b, "self-loop or unsorted pair in a simple graph"
            assert (a, b) not in tree, "surplus edge duplicates a spanning edge"
            assert comp[a] == comp[b], "surplus edge joins two components"


def surplus_snapshot_f0(x: WeightVector, clocks: ClockAssignment, q: float,
                        rng: RngLike) -> GraphSnapshot:
    """Breadth-first forest at ``q`` plus independent surplus edges.

    For each non-root ``h`` and each ``l > h`` already heard before ``h`` is
    explored (``order_stats[l] / q <= sup I_{h-1}``) the edge ``{h, l}`` is
    present with probability ``1 - exp(-q x_h x_l)``.
    """
    gen = as_generator(rng)
    dec = decompose_excursions(x, clocks, q)
    forest = build_f0_snapshot(x, clocks, q, decomposition=dec)
    times = (clocks.order_stats / q).tolist()
    sizes = x.masses[clocks.pi]
    sup = dec.interval_sup
    extra = []
    for h in range(1, clocks.n):
        if dec.is_root[h]:
            continue
        stop = bisect_right(times, sup[h - 1])
        if stop <= h + 1:
            continue
        partners = np.arange(h + 1, stop)
        p = -np.expm1(-q * sizes[h] * sizes[partners])
        hit = gen.random(partners.size) < p
        extra.extend((h, int(l)) for l in partners[hit])
    return GraphSnapshot(q=float(q), spanning=forest, surplus_edges=frozenset(extra))


def eligible_partners(x: WeightVector, clocks: ClockAssignment, q: float, h: int) -> list[int]:
    """Positions ``l > h`` that ``h`` may join by a snapshot surplus edge."""
    dec = decompose_excursions(x, clocks, q)
    if dec.is_root[h]:
        return []
    times = (clocks.order_stats / q).tolist()
    return list(range(h + 1, bisect_right(times, dec.interval_sup[h - 1])))


def cumulative_intensity_f0(x: WeightVector, clocks: ClockAssignment, q: float, h: int) -> float:
    """Total snapshot surplus intensity listened to by non-root ``h``.

    Returns ``q * sum(x_l)`` over eligible partners, after checking it against
    the walk form ``q * (B(sup I_{h-1}) - x_h)``.
    """
    dec = decompose_excursions(x, clocks, q)
    if h <= 0 or dec.is_root[h]:
        raise ValueError(f"position {h} is a root at q={q}")
    sizes = x.masses[clocks.pi]
    times = (clocks.order_stats / q).tolist()
    b = float(dec.interval_sup[h - 1])
    stop = bisect_right(times, b)
    by_sum = q * float(sizes[h + 1:stop].sum())
    walk = WalkPath.build(x, clocks, q)
    by_walk = q * (walk.reflected(b) - float(sizes[h]))
    if abs(by_sum - by_walk) > EPS * max(1.0, abs(by_sum)):
        raise ConsistencyError(f"intensity forms disagree at h={h}: {by_sum!r} vs {by_walk!r}")
    return by_sum


@dataclass(frozen=True)
class ActivationTable:
    """Activation times ``T[(l, j, k)]``; absent entries are never activated."""

    n: int
    times: dict = field(default_factory=dict)

    def get(self, l: int, j: int, k: int) -> float:
        return self.times.get((l, j, k), float("inf"))

    def processes(self, include_loops: bool = True):
        for key in sorted(self.times):
            if include_loops or key[0] != key[2]:
                yield key, self.times[key]

    def processes_of(self, l: int) -> list[tuple[tuple[int, int, int], float]]:
        """Non-loop processes issued by ``l``, nearest range first."""
        out = [(key, t) for key, t in self.times.items() if key[0] == l and key[2] < l]
        return sorted(out, key=lambda kt: -kt[0][1])

    def finite_count(self) -> int:
        return len(self.times)


def activation_table(schedule: MergeSchedule) -> ActivationTable:
    """Merging ``[j, k]`` with ``[k+1, m]`` at ``q*`` activates ``(l; j-k)`` for ``l`` in ``[k+1, m]``."""
    times = {(l, l, l): 0.0 for l in range(schedule.n)}
    for ev in schedule.events:
        j, k = ev.left
        for l in range(ev.right[0], ev.right[1] + 1):
            times[(l, j, k)] = ev.q_star
    return ActivationTable(n=schedule.n, times=times)


@dataclass(frozen=True)
class SurplusEvent:
    q: float
    source: int
    target: int
    kind: str
    process: tuple[int, int, int]

    def to_dict(self, clocks: ClockAssignment | None = None) -> dict:
        src, dst = self.source, self.target
        if clocks is not None:
            src, dst = int(clocks.pi[src]), int(clocks.pi[dst])
        return {"q": self.q, "src": src, "dst": dst, "kind": self.kind,
                "process": list(self.process)}


@dataclass(frozen=True)
class SurplusEventLog:
    events: tuple[SurplusEvent, ...]
    multigraph: bool = False
    q_max: float = float("inf")

    def __len__(self):
        return len(self.events)

    def until(self, q: float) -> list[SurplusEvent]:
        return [e for e in self.events if e.q <= q]

    def to_jsonl(self, clocks: ClockAssignment | None = None) -> str:
        return "".join(json.dumps(e.to_dict(clocks)) + "\n" for e in self.events)


def sample_surplus_monotone(x: WeightVector, clocks: ClockAssignment, table: ActivationTable,
                            f1: ForestState, q_max: float, rng: RngLike,
                            multigraph: bool = False) -> SurplusEventLog:
    """Run every active ``(l; j-k)`` process on ``(T, q_max]``.

    Arrivals are drawn identically in both modes (same generator consumption),
    so the simple log is always the deduplicated subset of the multigraph log
    without loops.  Self-loop processes draw last, in multigraph mode only.
    """
    if not q_max > 0:
        raise ValueError("q_max must be positive")
    gen = as_generator(rng)
    sizes = x.masses[clocks.pi]
    arrivals = []
    for (l, j, k), t in table.processes(include_loops=False):
        if t >= q_max:
            continue
        w = sizes[j:k + 1]
        mass = float(w.sum())
        count = gen.poisson(sizes[l] * mass * (q_max - t))
        if count == 0:
            continue
        when = np.sort(gen.uniform(t, q_max, size=count))
        if j == k:
            targets = np.full(count, j)
        else:
            targets = j + gen.choice(k - j + 1, size=count, p=w / mass)
        arrivals.extend(zip(when.tolist(), [l] * count, targets.tolist(), [(l, j, k)] * count))

    if multigraph:
        events = [SurplusEvent(q, s, d, MULTI, pid) for q, s, d, pid in arrivals]
        for l in range(clocks.n):
            count = gen.poisson(sizes[l] ** 2 / 2.0 * q_max)
            for q in gen.uniform(0.0, q_max, size=count).tolist():
                events.append(SurplusEvent(q, l, l, LOOP, (l, l, l)))
    else:
        present = set()
        stream = [(e.arrival_q, 0, e.child, e.parent, None) for e in f1.edges]
        stream += [(q, 1, s, d, pid) for q, s, d, pid in arrivals]
        stream.sort(key=lambda r: (r[0], r[1]))
        events = []
        for q, is_surplus, s, d, pid in stream:
            key = _pair(s, d)
            if key in present:
                continue
            present.add(key)
            if is_surplus:
                events.append(SurplusEvent(q, s, d, SIMPLE, pid))
    events.sort(key=lambda e: e.q)
    return SurplusEventLog(events=tuple(events), multigraph=multigraph, q_max=float(q_max))


@dataclass(frozen=True)
class G1Process:
    """Monotone random graph process: forest ``F1`` plus surplus log."""

    x: WeightVector
    clocks: ClockAssignment
    schedule: MergeSchedule
    table: ActivationTable
    forest: ForestState
    log: SurplusEventLog

    def edges_at(self, q: float) -> list[tuple[int, int]]:
        """Position pairs (loops and repeats kept) of edges arrived by ``q``."""
        out = [_pair(e.child, e.parent) for e in self.forest.edges_until(q)]
        out += [_pair(e.source, e.target) for e in self.log.until(q)]
        return out

    def labeled_edges_at(self, q: float) -> list[tuple[int, int]]:
        pi = self.clocks.pi
        return [_pair(int(pi[a]), int(pi[b])) for a, b in self.edges_at(q)]

    def observe(self, q: float) -> GraphObservation:
        return observe_graph(self.clocks.n, self.labeled_edges_at(q))


def graph_process_g1(x: WeightVector, clocks: ClockAssignment | None, rng: RngLike,
                     q_max: float, multigraph: bool = False) -> G1Process:
    """Clocks, merge schedule, ``F1``, activation table, then surplus.

    When ``clocks`` is None they are drawn first from the same generator.
    """
    gen = as_generator(rng)
    if clocks is None:
        clocks = sample_clocks(x, gen)
    schedule = merge_schedule(x, clocks)
    forest = evolve_f1(x, clocks, schedule, gen)
    table = activation_table(schedule)
    log = sample_surplus_monotone(x, clocks, table, forest, q_max, gen, multigraph=multigraph)
    return G1Process(x=x, clocks=clocks, schedule=schedule, table=table, forest=forest, log=log)
