"""Excursion mosaic geometry.

The area under each excursion of the reflected walk is tiled by one slice
per carried position.  The slice of ``l`` is a right isosceles triangle of
area ``x_l**2 / 2`` with a stack of parallelograms below it, one for every
activated process ``(l; j-k)``.  A parallelogram has base ``x_l`` and height
``L - (order_stats[k+1] - order_stats[j]) / q`` where ``L`` is the mass of
``j .. k``; it appears with zero height at its activation time.

Every area here is closed form (products and trapezoids), so the identities
can be checked to ``EPS``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EPS, ClockAssignment, WeightVector
from .surplus import ActivationTable
from .walks import Excursion, WalkPath, decompose_excursions


class NotActiveError(ValueError):
    """The requested process has not been activated by the given time."""


class IdentityViolation(AssertionError):
    def __init__(self, process, discrepancy):
        super().__init__(f"rate identity fails for process {process}: discrepancy {discrepancy:.3e}")
        self.process = process
        self.discrepancy = discrepancy


@dataclass(frozen=True)
class ParallelogramRegion:
    process: tuple[int, int, int]
    activation: float
    base: float
    height: float

    @property
    def area(self) -> float:
        return self.base * self.height


def parallelogram_geometry(x: WeightVector, clocks: ClockAssignment, table: ActivationTable,
                           l: int, j: int, k: int, q: float) -> ParallelogramRegion:
    t = table.get(l, j, k)
    if t > q:
        raise NotActiveError(f"process {(l, j, k)} activates at {t}, after q={q}")
    sizes = x.masses[clocks.pi]
    base = float(sizes[l])
    if (l, j, k) == (l, l, l):
        # the self-loop triangle, reported as a degenerate region of height base/2
        return ParallelogramRegion((l, l, l), 0.0, base, base / 2.0)
    mass = float(sizes[j:k + 1].sum())
    xi = clocks.order_stats
    height = mass - (xi[k + 1] - xi[j]) / q
    return ParallelogramRegion((l, j, k), t, base, float(height))


def walk_height(walk: WalkPath, j: int, k: int) -> float:
    """Parallelogram height read off the walk: ``Z(t_{k+1}-) - Z(t_j-)``."""
    t = walk.jump_times
    return walk.value(t[k + 1], left=True) - walk.value(t[j], left=True)


def top_boundary_index(table: ActivationTable, l: int, j: int, k: int) -> int:
    """Smallest ``j1 > j`` with some ``(l; j1-k1)`` activated strictly earlier."""
    t = table.get(l, j, k)
    earlier = [key[1] for key, s in table.processes_of(l) if s < t and key[1] > j]
    if l > k and table.get(l, l, l) < t:
        earlier.append(l)
    return min(earlier) if earlier else l


def slice_regions(x: WeightVector, clocks: ClockAssignment, table: ActivationTable,
                  l: int, q: float) -> list[ParallelogramRegion]:
    return [parallelogram_geometry(x, clocks, table, *key, q)
            for key, t in table.processes_of(l) if t <= q]


def slice_area(x: WeightVector, clocks: ClockAssignment, table: ActivationTable,
               l: int, q: float) -> float:
    """Triangle plus every active parallelogram of ``l``'s slice."""
    if not q > 0:
        raise ValueError("q must be positive")
    base = float(x.masses[clocks.pi[l]])
    return base * base / 2.0 + sum(r.area for r in slice_regions(x, clocks, table, l, q))


def slice_area_from_walk(walk: WalkPath, l: int) -> float:
    """``x_l * B(t_l-) + x_l**2 / 2``."""
    base = float(walk.jump_sizes[l])
    return base * walk.reflected(walk.jump_times[l], left=True) + base * base / 2.0


def excursion_area(x: WeightVector, clocks: ClockAssignment, q: float, excursion: Excursion,
                   walk: WalkPath | None = None) -> float:
    """Integral of the reflected walk over one excursion, by exact trapezoids.

    Between consecutive jumps the walk falls at unit slope, so each piece is a
    trapezoid from ``B(t_i)`` to ``B(t_{i+1}-)``; the last piece is a triangle
    ending at the excursion's right end.
    """
    walk = walk if walk is not None else WalkPath.build(x, clocks, q)
    t = walk.jump_times[excursion.first:excursion.last + 1]
    knots = np.append(t, excursion.end)
    top = walk.reflected(knots[:-1])
    bottom = walk.reflected(knots[1:], left=True)
    bottom[-1] = 0.0
    return float(np.sum((top + bottom) / 2.0 * np.diff(knots)))


@dataclass(frozen=True)
class RateIdentityReport:
    q: float
    max_discrepancy: float
    worst_process: tuple[int, int, int] | None
    checked: int

    def to_dict(self) -> dict:
        return {"q": self.q, "max_discrepancy": self.max_discrepancy,
                "worst_process": list(self.worst_process) if self.worst_process else None,
                "checked": self.checked}


def verify_rate_identity(x: WeightVector, clocks: ClockAssignment, table: ActivationTable,
                         q: float, tol: float = EPS, raise_on_failure: bool = True) -> RateIdentityReport:
    """Compare cumulative arrival rate with ``q`` times region area, per process.

    The rate side uses the activation time; the area side reads heights off
    the walk, so the two share nothing but the input.
    """
    walk = WalkPath.build(x, clocks, q)
    sizes = x.masses[clocks.pi]
    worst, worst_key, checked = 0.0, None, 0
    for key, t in table.processes():
        if t > q:
            continue
        l, j, k = key
        if key == (l, l, l):
            rate = sizes[l] ** 2 / 2.0
            area = sizes[l] ** 2 / 2.0
        else:
            rate = sizes[l] * float(sizes[j:k + 1].sum())
            area = sizes[l] * walk_height(walk, j, k)
        diff = abs(rate * (q - t) - q * area)
        checked += 1
        if diff > worst:
            worst, worst_key = float(diff), key
    report = RateIdentityReport(q=float(q), max_discrepancy=worst, worst_process=worst_key,
                                checked=checked)
    if raise_on_failure and worst >= tol:
        raise IdentityViolation(worst_key, worst)
    return report


@dataclass(frozen=True)
class TilingReport:
    q: float
    slice_total: float
    excursion_total: float
    walk_integral: float

    @property
    def max_discrepancy(self) -> float:
        v = (self.slice_total, self.excursion_total, self.walk_integral)
        return max(v) - min(v)


def integrate_reflected_walk(walk: WalkPath) -> float:
    """Integral of ``B`` over ``[0, domain_end]`` by trapezoids at all jump points.

    Does not use the excursion decomposition; zero stretches contribute nothing.
    """
    t = walk.jump_times
    knots = np.append(t, walk.domain_end)
    top = walk.reflected(knots[:-1])
    bottom = walk.reflected(knots[1:], left=True)
    # where B hits zero inside a piece, only the triangle before the hit counts
    width = np.diff(knots)
    piece = np.where(top >= width, (top + bottom) / 2.0 * width, top * top / 2.0)
    return float(piece.sum())


def check_tiling(x: WeightVector, clocks: ClockAssignment, table: ActivationTable,
                 q: float) -> TilingReport:
    """Totals of slice areas, excursion areas and the direct walk integral."""
    walk = WalkPath.build(x, clocks, q)
    dec = decompose_excursions(x, clocks, q)
    slices = sum(slice_area(x, clocks, table, l, q) for l in range(clocks.n))
    excursions = sum(excursion_area(x, clocks, q, e, walk=walk) for e in dec.excursions)
    return TilingReport(q=float(q), slice_total=slices, excursion_total=excursions,
                        walk_integral=integrate_reflected_walk(walk))


def expected_surplus_by_component(x: WeightVector, clocks: ClockAssignment, q: float) -> list[float]:
    """``q`` times each excursion area, in left-to-right excursion order."""
    walk = WalkPath.build(x, clocks, q)
    dec = decompose_excursions(x, clocks, q)
    return [q * excursion_area(x, clocks, q, e, walk=walk) for e in dec.excursions]
