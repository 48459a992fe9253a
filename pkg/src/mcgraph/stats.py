"""Goodness-of-fit machinery for the "equal in law" checks."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np
from scipy import stats as sps

from .oracle import ExactLaw

MIN_EXPECTED = 5.0


class UnsupportedOutcome(ValueError):
    """An observed outcome has probability zero under the reference law."""


@dataclass
class EmpiricalLaw:
    counts: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def add(self, key, k: int = 1) -> None:
        self.counts[key] += k

    def update(self, other: "EmpiricalLaw") -> "EmpiricalLaw":
        self.counts.update(other.counts)
        return self

    @classmethod
    def from_keys(cls, keys: Iterable) -> "EmpiricalLaw":
        return cls(Counter(keys))

    def frequencies(self) -> dict:
        n = self.total
        return {k: c / n for k, c in self.counts.items()}


@dataclass(frozen=True)
class CheckReport:
    test: str
    N: int
    statistic: float
    p: float
    passed: bool
    dof: int | None = None
    claim: str | None = None

    def to_dict(self) -> dict:
        out = {"test": self.test, "N": self.N, "statistic": self.statistic,
               "p": self.p, "pass": self.passed}
        if self.dof is not None:
            out["dof"] = self.dof
        if self.claim is not None:
            out["claim"] = self.claim
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class ChiSquare:
    statistic: float
    dof: int
    p_value: float


def _pool(observed: np.ndarray, expected: np.ndarray):
    """Merge cells with expected count below ``MIN_EXPECTED`` into one tail cell.

    If the tail is still too small it absorbs the smallest remaining cell.
    """
    order = np.argsort(expected)
    obs, exp = observed[order], expected[order]
    small = exp < MIN_EXPECTED
    if not small.any():
        return obs, exp
    cut = int(small.sum())
    tail_o, tail_e = obs[:cut].sum(), exp[:cut].sum()
    while tail_e < MIN_EXPECTED and cut < exp.size - 1:
        tail_o += obs[cut]
        tail_e += exp[cut]
        cut += 1
    return np.append(obs[cut:], tail_o), np.append(exp[cut:], tail_e)


def chi_square_gof(empirical: EmpiricalLaw, expected: ExactLaw | Mapping) -> ChiSquare:
    """Pearson statistic of the counts against a reference law, with tail pooling."""
    probs = expected.probabilities if isinstance(expected, ExactLaw) else dict(expected)
    support = {k for k, p in probs.items() if p > 0}
    for key in empirical.counts:
        if key not in support:
            raise UnsupportedOutcome(f"outcome {key!r} has zero reference probability")
    keys = sorted(support, key=repr)
    n = empirical.total
    obs = np.array([empirical.counts.get(k, 0) for k in keys], dtype=float)
    exp = np.array([probs[k] for k in keys]) * n
    obs, exp = _pool(obs, exp)
    dof = obs.size - 1
    if dof < 1:
        return ChiSquare(0.0, 0, 1.0)
    stat = float(np.sum((obs - exp) ** 2 / exp))
    return ChiSquare(stat, dof, float(sps.chi2.sf(stat, dof)))


def chi_square_homogeneity(a: EmpiricalLaw, b: EmpiricalLaw) -> ChiSquare:
    """Two-sample test that both count tables come from one law.

    Cells whose pooled expected count falls below ``MIN_EXPECTED`` in either
    row are merged into a single tail column.
    """
    keys = sorted(set(a.counts) | set(b.counts), key=repr)
    table = np.array([[a.counts.get(k, 0) for k in keys],
                      [b.counts.get(k, 0) for k in keys]], dtype=float)
    row = table.sum(axis=1, keepdims=True)
    col = table.sum(axis=0)
    exp_min = col * row.min() / row.sum()
    order = np.argsort(exp_min)
    table = table[:, order]
    exp_min = exp_min[order]
    cut = int((exp_min < MIN_EXPECTED).sum())
    if cut:
        while exp_min[:cut].sum() < MIN_EXPECTED and cut < exp_min.size - 1:
            cut += 1
        table = np.column_stack((table[:, cut:], table[:, :cut].sum(axis=1)))
    if table.shape[1] < 2:
        return ChiSquare(0.0, 0, 1.0)
    col = table.sum(axis=0)
    exp = row * col / row.sum()
    stat = float(np.sum((table - exp) ** 2 / exp))
    dof = table.shape[1] - 1
    return ChiSquare(stat, dof, float(sps.chi2.sf(stat, dof)))


@dataclass(frozen=True)
class KSResult:
    D: float
    p_approx: float


def ks_two_sided(samples, cdf: Callable) -> KSResult:
    """Sup distance between the empirical CDF and ``cdf``; asymptotic p-value."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("need at least one sample")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    d = float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))
    return KSResult(d, float(sps.kstwobign.sf(d * math.sqrt(n))))


def ks_two_sample(a, b) -> KSResult:
    """Sup distance between two empirical CDFs."""
    a, b = np.sort(np.asarray(a, float)), np.sort(np.asarray(b, float))
    grid = np.concatenate((a, b))
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    d = float(np.max(np.abs(fa - fb)))
    en = math.sqrt(a.size * b.size / (a.size + b.size))
    return KSResult(d, float(sps.kstwobign.sf(d * en)))


def within_sigma(observed_total: float, expected_mean: float, expected_var: float,
                 k: float = 3.0) -> tuple[bool, float]:
    """``|observed - mean| < k * sd``; also returns the standardized deviation."""
    sd = math.sqrt(expected_var)
    z = (observed_total - expected_mean) / sd if sd > 0 else 0.0
    return abs(z) < k, z


def binomial_interval_ok(successes: int, trials: int, p: float, k: float = 3.0) -> bool:
    sd = math.sqrt(trials * p * (1 - p))
    return abs(successes - trials * p) < k * sd


def bonferroni(alpha: float, m: int) -> float:
    """Per-test level keeping the family-wise false failure rate at ``alpha``."""
    return alpha / max(int(m), 1)
