"""Continuum objects of the near-critical window.

``W(s) = sqrt(kappa) * BM(s) - tau * s - kappa * s**2 / 2 + V(s) + t * s`` with
``V(s) = sum_j (c_j * 1{xi'_j <= s} - c_j**2 * s)`` and ``xi'_j ~ Exp(rate c_j)``.
Its reflection above the running minimum has excursions whose lengths play
the role of component masses; a unit-rate Poisson process under the curve
gives each excursion a mark count.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import RngLike, WeightVector, as_generator, sample_clocks
from .walks import decompose_excursions


class TruncationWarning(UserWarning):
    """The reflected path had not returned to zero by the horizon."""


@dataclass(frozen=True)
class ScalingParams:
    kappa: float = 1.0
    tau: float = 0.0
    c: tuple[float, ...] = ()
    t: float = 0.0
    horizon: float = 10.0
    ds: float = 1e-3
    c_tail: float = 0.0  # sum of c_j**3 over the dropped tail of c

    def __post_init__(self):
        if self.kappa < 0:
            raise ValueError("kappa must be nonnegative")
        c = tuple(float(v) for v in self.c)
        if any(v < 0 for v in c) or any(b > a for a, b in zip(c, c[1:])):
            raise ValueError("c must be nonnegative and nonincreasing")
        if not (self.horizon > 0 and self.ds > 0):
            raise ValueError("horizon and ds must be positive")
        object.__setattr__(self, "c", tuple(v for v in c if v > 0))

    @property
    def steps(self) -> int:
        return int(round(self.horizon / self.ds))

    def with_t(self, t: float) -> "ScalingParams":
        return ScalingParams(self.kappa, self.tau, self.c, t, self.horizon, self.ds, self.c_tail)


def truncate_c(c, length: int) -> tuple[tuple[float, ...], float]:
    """Keep the first ``length`` entries; also return ``sum c_j**3`` of the rest."""
    c = sorted((float(v) for v in c), reverse=True)
    tail = float(np.sum(np.asarray(c[length:]) ** 3))
    return tuple(c[:length]), tail


@dataclass(frozen=True)
class ContinuumPath:
    grid: np.ndarray
    W: np.ndarray
    B: np.ndarray
    jump_times: np.ndarray = field(default_factory=lambda: np.empty(0))
    jump_sizes: np.ndarray = field(default_factory=lambda: np.empty(0))
    c_tail: float = 0.0

    @property
    def ds(self) -> float:
        return float(self.grid[1] - self.grid[0])

    @classmethod
    def from_reflected(cls, grid, B) -> "ContinuumPath":
        """Wrap a given nonnegative path (used for deterministic checks)."""
        grid = np.asarray(grid, float)
        B = np.asarray(B, float)
        return cls(grid=grid, W=B.copy(), B=B)


def _drift_and_jumps(params: ScalingParams, s: np.ndarray, gen: np.random.Generator):
    c = np.asarray(params.c)
    base = -params.tau * s - 0.5 * params.kappa * s * s + params.t * s
    if c.size == 0:
        return base, np.empty(0), np.empty(0)
    xi = gen.exponential(1.0 / c)
    base = base - np.sum(c * c) * s
    # the jump at xi_j is counted at every grid point s >= xi_j
    idx = np.searchsorted(s, xi, side="left")
    jumps = np.zeros(s.size + 1)
    np.add.at(jumps, idx, c)
    return base + np.cumsum(jumps)[:-1], xi, c


def sample_continuum_paths(params: ScalingParams, rng: RngLike, count: int,
                           refine: int = 1) -> list[list[ContinuumPath]]:
    """Sample ``count`` paths; each comes back at ``refine`` coupled resolutions.

    The Brownian path is drawn on the finest grid (``ds / 2**(refine-1)``) and
    subsampled, so the resolutions differ only through the grid.
    """
    gen = as_generator(rng)
    fine = 2 ** (refine - 1)
    m = params.steps * fine
    ds = params.ds / fine
    s = np.arange(m + 1) * ds
    out = []
    for _ in range(count):
        bm = np.concatenate(([0.0], np.cumsum(gen.normal(0.0, np.sqrt(ds), size=m))))
        rest, xi, c = _drift_and_jumps(params, s, gen)
        w = np.sqrt(params.kappa) * bm + rest
        levels = []
        for r in range(refine):
            step = 2 ** (refine - 1 - r)
            ws = w[::step]
            b = ws - np.minimum.accumulate(np.minimum(ws, 0.0))
            levels.append(ContinuumPath(grid=s[::step], W=ws, B=b, jump_times=xi,
                                        jump_sizes=c, c_tail=params.c_tail))
        out.append(levels)
    return out


def sample_continuum_path(params: ScalingParams, rng: RngLike) -> ContinuumPath:
    return sample_continuum_paths(params, rng, 1)[0][0]


@dataclass(frozen=True)
class AugmentedState:
    """Excursion lengths ``X`` (nonincreasing) and aligned mark counts ``Y``."""

    X: np.ndarray
    Y: np.ndarray
    areas: np.ndarray = field(default_factory=lambda: np.empty(0))
    censored: bool = False

    def csv_row(self, top: int = 10) -> list:
        x = list(self.X[:top]) + [""] * max(0, top - self.X.size)
        y = list(self.Y[:top]) + [""] * max(0, top - self.Y.size)
        return x + y


def excursion_intervals(path: ContinuumPath, min_length: float | None = None):
    """Maximal grid runs with ``B > 0``, as ``(start_index, end_index)`` of the zeros around them.

    Runs shorter than ``min_length`` (default ``2 * ds``) are dropped.
    A run still open at the horizon is returned with ``end_index = len - 1``
    and flagged.
    """
    pos = path.B > 0
    ds = path.ds
    min_length = 2 * ds if min_length is None else min_length
    padded = np.concatenate(([False], pos, [False]))
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    starts, stops = edges[0::2], edges[1::2]   # pos[starts:stops] all True
    lo = np.maximum(starts - 1, 0)
    hi = np.minimum(stops, pos.size - 1)
    censored = bool(stops.size and stops[-1] == pos.size)
    keep = (hi - lo) * ds >= min_length
    return lo[keep], hi[keep], censored and bool(keep.size and keep[-1])


def extract_excursions_and_marks(path: ContinuumPath, rng: RngLike) -> AugmentedState:
    """Excursion lengths and Poisson(area) mark counts, sorted by length."""
    gen = as_generator(rng)
    lo, hi, censored = excursion_intervals(path)
    if censored:
        warnings.warn("path did not return to zero before the horizon; last excursion censored",
                      TruncationWarning, stacklevel=2)
    ds = path.ds
    lengths = (hi - lo) * ds
    cum = np.concatenate(([0.0], np.cumsum((path.B[1:] + path.B[:-1]) / 2.0 * ds)))
    areas = cum[hi] - cum[lo]
    marks = gen.poisson(areas) if areas.size else np.empty(0, dtype=int)
    order = np.argsort(-lengths, kind="stable")
    return AugmentedState(X=lengths[order], Y=np.asarray(marks)[order], areas=areas[order],
                          censored=censored)


def largest_excursion(path: ContinuumPath) -> float:
    lo, hi, _ = excursion_intervals(path)
    return float(((hi - lo) * path.ds).max()) if lo.size else 0.0


def discrete_largest_component(n: int, t: float, rng: RngLike) -> float:
    """Largest component mass for ``n`` blocks of mass ``n**(-2/3)`` at coalescent time ``n**(1/3) + t``."""
    x = WeightVector.critical(n)
    clocks = sample_clocks(x, rng)
    q = n ** (1.0 / 3.0) + t
    dec = decompose_excursions(x, clocks, q)
    return max(e.length for e in dec.excursions)


def states_to_csv(states, top: int = 10) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow([f"X{i + 1}" for i in range(top)] + [f"Y{i + 1}" for i in range(top)])
    for st in states:
        w.writerow(st.csv_row(top))
    return buf.getvalue()
