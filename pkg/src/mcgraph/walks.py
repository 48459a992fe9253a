"""Simultaneous breadth-first walks and their excursions.

For a fixed coalescent time ``q`` the walk jumps by ``x[pi[l]]`` at time
``order_stats[l] / q`` and otherwise drifts down at unit speed.  Excursions of
the reflected walk above zero carry contiguous runs of positions; their
lengths are the component masses at time ``q``.

Across ``q`` the component structure only changes at closed-form merge times,
which :func:`merge_schedule` computes with an event-driven sweep.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .core import ClockAssignment, TieError, WeightVector


@dataclass(frozen=True)
class WalkPath:
    """Piecewise linear walk at a fixed ``q``; evaluated exactly."""

    q: float
    jump_times: np.ndarray
    jump_sizes: np.ndarray
    _cum: np.ndarray = field(repr=False)
    _low: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, x: WeightVector, clocks: ClockAssignment, q: float) -> "WalkPath":
        if not q > 0:
            raise ValueError("q must be positive")
        times = clocks.order_stats / q
        sizes = x.masses[clocks.pi]
        cum = np.concatenate(([0.0], np.cumsum(sizes)))
        # low[i] = min(0, min_{m<i} Z(t_m-)), running infimum before the i-th jump
        left_vals = cum[:-1] - times
        low = np.minimum.accumulate(np.concatenate(([0.0], left_vals)))
        return cls(q=float(q), jump_times=times, jump_sizes=sizes, _cum=cum, _low=low)

    @property
    def domain_end(self) -> float:
        """End of the last excursion; the reflected walk is zero afterwards."""
        t = float(self.jump_times[-1])
        return t + self.reflected(t)

    def _count(self, s, left):
        return np.searchsorted(self.jump_times, s, side="left" if left else "right")

    def value(self, s, left: bool = False):
        """``Z(s)`` (or the left limit ``Z(s-)``)."""
        s = np.asarray(s, dtype=float)
        out = self._cum[self._count(s, left)] - s
        return float(out) if out.ndim == 0 else out

    def reflected(self, s, left: bool = False):
        """``B(s) = Z(s) - inf_{u <= s} Z(u)`` (or its left limit)."""
        s = np.asarray(s, dtype=float)
        idx = self._count(s, left)
        z = self._cum[idx] - s
        out = z - np.minimum(self._low[idx], z)
        return float(out) if out.ndim == 0 else out

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "jump_times": self.jump_times.tolist(),
            "jump_sizes": self.jump_sizes.tolist(),
            "domain_end": self.domain_end,
        }


def eval_walk(x: WeightVector, clocks: ClockAssignment, q: float, s: float,
              left: bool = False) -> float:
    """Evaluate the breadth-first walk directly from its defining sum.

    Deliberately does not reuse :class:`WalkPath`, so the two can check each
    other.
    """
    if not q > 0:
        raise ValueError("q must be positive")
    hit = clocks.xi / q < s if left else clocks.xi / q <= s
    return float(np.sum(x.masses[hit]) - s)


def reflect_walk(walk: WalkPath, s, left: bool = False):
    return walk.reflected(s, left=left)


@dataclass(frozen=True)
class Excursion:
    start: float
    end: float
    first: int  # first carried position (the tree root)
    last: int   # last carried position, inclusive

    @property
    def length(self) -> float:
        return self.end - self.start

    @property
    def carried(self) -> range:
        return range(self.first, self.last + 1)

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "length": self.length,
                "carried": [self.first, self.last]}


@dataclass(frozen=True)
class ExcursionDecomposition:
    q: float
    excursions: tuple[Excursion, ...]
    gaps: tuple[tuple[float, float], ...]
    # sup of I_l for every position l, used by the forest and surplus builders
    interval_sup: np.ndarray = field(repr=False)
    is_root: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return len(self.excursions)

    def ranges(self) -> list[tuple[int, int]]:
        return [(e.first, e.last) for e in self.excursions]

    def excursion_of(self, position: int) -> Excursion:
        starts = [e.first for e in self.excursions]
        return self.excursions[bisect_right(starts, position) - 1]

    def to_dict(self) -> dict:
        return {"q": self.q, "excursions": [e.to_dict() for e in self.excursions],
                "gaps": [list(g) for g in self.gaps]}


def decompose_excursions(x: WeightVector, clocks: ClockAssignment, q: float) -> ExcursionDecomposition:
    """Run the interval recursion at fixed ``q``.

    ``I_l`` is extended by the next jump size while the next jump time lands
    in ``I_{l-1} = (a, b]``; otherwise a new excursion opens at that jump.
    """
    if not q > 0:
        raise ValueError("q must be positive")
    times = (clocks.order_stats / q).tolist()
    sizes = x.masses[clocks.pi].tolist()
    n = len(times)
    sup = [0.0] * n
    root = [False] * n
    excursions = []
    gaps = [(0.0, times[0])]
    a, b = times[0], times[0] + sizes[0]
    first = 0
    root[0] = True
    sup[0] = b
    for l in range(1, n):
        t = times[l]
        if t <= b:
            b += sizes[l]
        else:
            excursions.append(Excursion(a, b, first, l - 1))
            gaps.append((b, t))
            a, b, first = t, t + sizes[l], l
            root[l] = True
        sup[l] = b
    excursions.append(Excursion(a, b, first, n - 1))
    return ExcursionDecomposition(q=float(q), excursions=tuple(excursions), gaps=tuple(gaps),
                                  interval_sup=np.array(sup), is_root=np.array(root))


@dataclass(frozen=True)
class MergeEvent:
    q_star: float
    left: tuple[int, int]    # positions [j, k]
    right: tuple[int, int]   # positions [k+1, m]
    left_mass: float
    right_mass: float

    @property
    def left_root(self) -> int:
        return self.left[0]

    @property
    def right_root(self) -> int:
        return self.right[0]

    def to_dict(self) -> dict:
        return {"q_star": self.q_star, "left_range": list(self.left),
                "right_range": list(self.right), "left_mass": self.left_mass,
                "right_mass": self.right_mass}


@dataclass(frozen=True)
class MergeSchedule:
    """All ``n - 1`` merges, ordered by merge time."""

    n: int
    events: tuple[MergeEvent, ...]

    def __len__(self):
        return len(self.events)

    @property
    def times(self) -> np.ndarray:
        return np.array([e.q_star for e in self.events])

    def boundary_times(self) -> np.ndarray:
        """``out[k]`` is the time positions ``k`` and ``k + 1`` become connected."""
        out = np.full(max(self.n - 1, 0), np.inf)
        for e in self.events:
            out[e.left[1]] = e.q_star
        return out

    def to_dict(self) -> dict:
        return {"n": self.n, "events": [e.to_dict() for e in self.events]}


def merge_schedule(x: WeightVector, clocks: ClockAssignment) -> MergeSchedule:
    """Event-driven sweep over ``q`` producing every merge time.

    Components are contiguous position ranges kept in a linked list.
    The left member ``[j, k]`` (mass ``L``) of an adjacent pair merges with its
    right neighbour at ``(order_stats[k+1] - order_stats[j]) / L``.  Heap entries
    carry the left component's version and go stale when it changes.
    """
    xi = clocks.order_stats.tolist()
    sizes = x.masses[clocks.pi].tolist()
    n = len(xi)
    # components keyed by their first position
    last = list(range(n))
    mass = list(sizes)
    nxt = list(range(1, n)) + [-1]
    alive = [True] * n
    version = [0] * n

    heap = []
    for j in range(n - 1):
        heap.append(((xi[j + 1] - xi[j]) / mass[j], j, 0))
    heapq.heapify(heap)

    events = []
    while heap:
        q_star, j, ver = heapq.heappop(heap)
        if not alive[j] or ver != version[j]:
            continue
        r = nxt[j]
        events.append(MergeEvent(q_star=q_star, left=(j, last[j]), right=(r, last[r]),
                                 left_mass=mass[j], right_mass=mass[r]))
        alive[r] = False
        last[j] = last[r]
        mass[j] += mass[r]
        nxt[j] = nxt[r]
        version[j] += 1
        if nxt[j] != -1:
            cand = (xi[nxt[j]] - xi[j]) / mass[j]
            if not cand > q_star:
                raise TieError(f"new candidate {cand!r} does not exceed merge time {q_star!r}")
            heapq.heappush(heap, (cand, j, version[j]))

    times = [e.q_star for e in events]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise TieError("two merge candidates share the same time")
    return MergeSchedule(n=n, events=tuple(events))


def partition_from_boundaries(boundary_times: np.ndarray, q: float) -> list[tuple[int, int]]:
    """Split ``0 .. n-1`` at every boundary not yet crossed by time ``q``."""
    n = boundary_times.size + 1
    cuts = np.flatnonzero(boundary_times > q)
    starts = np.concatenate(([0], cuts + 1))
    ends = np.concatenate((cuts, [n - 1]))
    return list(zip(starts.tolist(), ends.tolist()))
