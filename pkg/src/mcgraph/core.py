"""Weight vectors, exponential clocks and the seeded RNG contract.

Conventions used across the package:

* Blocks (vertices) carry their original labels ``0 .. n-1``, the index into
  ``WeightVector.masses``.
* Positions in the size-biased order are also 0-based: ``pi[l]`` is the label
  of the block whose clock is the ``l``-th smallest.  Almost every structure in
  the package (forests, merge schedules, activation tables) is expressed in
  these positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

#: Tolerance for asserted floating point identities.
EPS = 1e-9


class TieError(ValueError):
    """Two random times that must be strictly ordered compare equal."""


@dataclass(frozen=True)
class WeightVector:
    """Finite nonincreasing vector of positive block masses."""

    masses: np.ndarray

    def __post_init__(self):
        m = np.array(self.masses, dtype=float).reshape(-1)
        if m.size == 0:
            raise ValueError("weight vector must have at least one block")
        if not np.all(np.isfinite(m)) or np.any(m <= 0):
            raise ValueError("block masses must be finite and strictly positive")
        if np.any(np.diff(m) > 0):
            raise ValueError("block masses must be nonincreasing; pass sorted masses")
        m.setflags(write=False)
        object.__setattr__(self, "masses", m)

    @property
    def n(self) -> int:
        return int(self.masses.size)

    def __len__(self):
        return self.n

    @property
    def total(self) -> float:
        return float(self.masses.sum())

    @classmethod
    def sorted(cls, masses: Sequence[float]) -> "WeightVector":
        """Build from masses in any order (applies the decreasing ordering)."""
        return cls(np.sort(np.asarray(masses, dtype=float))[::-1])

    @classmethod
    def unit(cls, n: int, mass: float = 1.0) -> "WeightVector":
        return cls(np.full(int(n), float(mass)))

    @classmethod
    def critical(cls, n: int) -> "WeightVector":
        """``n`` blocks of mass ``n**(-2/3)`` (near-critical scaling window)."""
        return cls.unit(n, float(n) ** (-2.0 / 3.0))


@dataclass(frozen=True)
class RngStream:
    """Seed plus replicate index; each pair names one independent stream."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=int(self.seed), spawn_key=(int(self.stream_id),))
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)


RngLike = Union[RngStream, np.random.Generator, int, None]


def as_generator(rng: RngLike) -> np.random.Generator:
    """Coerce an ``RngStream``, seed or generator into a ``numpy`` generator.

    A ``Generator`` is returned as is, so pipelines that thread one generator
    through several stages consume it in a fixed order.
    """
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    return np.random.default_rng(rng)


@dataclass(frozen=True)
class ClockAssignment:
    """Exponential clocks ``xi`` and the size-biased order they induce.

    ``order_stats[l] == xi[pi[l]]`` for every position ``l``.
    """

    xi: np.ndarray
    order_stats: np.ndarray = field(repr=False)
    pi: np.ndarray

    @property
    def n(self) -> int:
        return int(self.xi.size)

    def position_of(self) -> np.ndarray:
        """Inverse permutation: ``position_of()[label]`` is that block's position."""
        inv = np.empty_like(self.pi)
        inv[self.pi] = np.arange(self.pi.size)
        return inv

    def labels(self, positions) -> list[int]:
        return [int(self.pi[p]) for p in positions]


def clocks_from_xi(xi: Sequence[float]) -> ClockAssignment:
    """Build a ``ClockAssignment`` from explicit clock values (ties rejected)."""
    xi = np.array(xi, dtype=float).reshape(-1)
    if xi.size == 0 or np.any(~np.isfinite(xi)) or np.any(xi <= 0):
        raise ValueError("clock values must be finite and positive")
    pi = np.argsort(xi, kind="stable")
    order = xi[pi]
    if np.any(np.diff(order) <= 0):
        raise TieError("two clock values compare equal")
    for a in (xi, order, pi):
        a.setflags(write=False)
    return ClockAssignment(xi=xi, order_stats=order, pi=pi)


def sample_clocks(x: WeightVector, rng: RngLike) -> ClockAssignment:
    """Draw independent ``Exponential(rate=x_i)`` clocks, one per block."""
    gen = as_generator(rng)
    xi = gen.exponential(1.0 / x.masses)
    return clocks_from_xi(xi)


def parse_masses(spec: str, n: int | None = None) -> WeightVector:
    """Parse ``"unit"``, ``"n^{-2/3}"`` or an explicit comma separated list."""
    s = spec.strip()
    if s == "unit":
        if n is None:
            raise ValueError("'unit' masses need n")
        return WeightVector.unit(n)
    if s.replace(" ", "") in ("n^{-2/3}", "n^(-2/3)", "critical"):
        if n is None:
            raise ValueError("critical masses need n")
        return WeightVector.critical(n)
    vals = [float(v) for v in s.split(",") if v.strip()]
    if n is not None and len(vals) != n:
        raise ValueError(f"got {len(vals)} masses but n={n}")
    return WeightVector.sorted(vals)
