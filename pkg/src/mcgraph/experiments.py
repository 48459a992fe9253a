"""Reproducible Monte Carlo and exact checks.

Each function runs one family of checks and returns :class:`CheckReport`
records.  Replicate ``r`` draws from ``RngStream(seed, r)`` (plus a fixed
offset for a second, independent side), so results depend only on the
arguments.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .core import EPS, RngStream, WeightVector, sample_clocks
from .forests import build_f0_snapshot, component_partition_at, evolve_f1, ranges_to_blocks
from .mosaic import (check_tiling, excursion_area, slice_area, slice_area_from_walk,
                     verify_rate_identity)
from .oracle import (MAX_ENUMERATION_N, enumerate_exact_law, partition_key, sample_direct_graph,
                     simulate_direct_graph)
from .scaling import (ScalingParams, discrete_largest_component, largest_excursion,
                      sample_continuum_paths)
from .stats import (CheckReport, EmpiricalLaw, chi_square_gof, chi_square_homogeneity,
                    ks_two_sample, ks_two_sided, within_sigma)
from .surplus import activation_table, graph_process_g1, sample_surplus_monotone, surplus_snapshot_f0
from .walks import WalkPath, decompose_excursions, merge_schedule

LN2 = 0.6931471805599453
SECOND_SIDE = 1 << 40

SNAPSHOT_CLAIM = "Lemma 1: breadth-first forest plus snapshot surplus has the random graph law at fixed q"
PROCESS_CLAIM = "Lemma 2: monotone forest plus surplus process has the random graph process law"
RATE_CLAIM = "Proposition 1: cumulative arrival rate equals q times mosaic region area"
AREA_CLAIM = "Corollary 1: slice and excursion areas times q give cumulative surplus rates"
MERGE_LAW = "Merge times follow the multiplicative coalescent rate"
PARTITIONS = "F0, F1 and the merge schedule share components at every q"
ORACLE = "Direct random graph simulation agrees with exact enumeration"
BRIDGE = "Near-critical discrete components versus continuum excursions"


def log_uniform_masses(gen: np.random.Generator, n: int, low: float = 0.1,
                       high: float = 10.0) -> WeightVector:
    return WeightVector.sorted(np.exp(gen.uniform(np.log(low), np.log(high), size=n)))


def mosaic_sweep(instances: int = 100, n_max: int = 50, qs=(0.5, 1.0, 2.0, 5.0),
                 seed: int = 0, tol: float = EPS) -> list[CheckReport]:
    """Rate identity, tiling and slice identities on random instances."""
    worst_rate = worst_tile = worst_slice = 0.0
    checked = 0
    for r in range(instances):
        gen = RngStream(seed, r).generator()
        n = int(gen.integers(1, n_max + 1))
        x = log_uniform_masses(gen, n)
        clocks = sample_clocks(x, gen)
        table = activation_table(merge_schedule(x, clocks))
        for q in qs:
            rep = verify_rate_identity(x, clocks, table, q, tol=tol, raise_on_failure=False)
            worst_rate = max(worst_rate, rep.max_discrepancy)
            checked += rep.checked
            worst_tile = max(worst_tile, check_tiling(x, clocks, table, q).max_discrepancy)
            walk = WalkPath.build(x, clocks, q)
            for l in range(n):
                d = abs(slice_area(x, clocks, table, l, q) - slice_area_from_walk(walk, l))
                worst_slice = max(worst_slice, d)
    return [
        CheckReport("rate_identity", instances, worst_rate, float("nan"), worst_rate < tol,
                    claim=RATE_CLAIM),
        CheckReport("tiling", instances, worst_tile, float("nan"), worst_tile < tol,
                    claim=AREA_CLAIM),
        CheckReport("slice_area", instances, worst_slice, float("nan"), worst_slice < tol,
                    claim=AREA_CLAIM),
    ]


def snapshot_law_check(n: int, q: float, replicates: int, seed: int, alpha: float = 0.01,
                 masses: WeightVector | None = None) -> CheckReport:
    """Snapshot construction versus the law of ``(sizes, surplus)``.

    The reference is exact enumeration when ``n`` is small enough, otherwise
    an equally sized direct simulation and a homogeneity test.
    """
    x = masses if masses is not None else WeightVector.unit(n)
    emp = EmpiricalLaw()
    for r in range(replicates):
        gen = RngStream(seed, r).generator()
        clocks = sample_clocks(x, gen)
        emp.add(surplus_snapshot_f0(x, clocks, q, gen).observe().key())
    if x.n <= MAX_ENUMERATION_N:
        res = chi_square_gof(emp, enumerate_exact_law(x, q))
    else:
        ref = EmpiricalLaw.from_keys(sample_direct_graph(x, RngStream(seed, SECOND_SIDE + r)).observe(q).key()
                                     for r in range(replicates))
        res = chi_square_homogeneity(emp, ref)
    return CheckReport(f"snapshot_law_n{x.n}_q{q:g}", replicates, res.statistic, res.p_value,
                       res.p_value > alpha, dof=res.dof, claim=SNAPSHOT_CLAIM)


def oracle_self_check(n: int, q: float, replicates: int, seed: int, alpha: float = 0.01,
                      masses: WeightVector | None = None) -> CheckReport:
    x = masses if masses is not None else WeightVector.unit(n)
    law = enumerate_exact_law(x, q)
    emp = EmpiricalLaw()
    for r in range(replicates):
        emp.add(simulate_direct_graph(x, RngStream(seed, r), [q])[0].key())
    res = chi_square_gof(emp, law)
    return CheckReport(f"oracle_n{x.n}_q{q:g}", replicates, res.statistic, res.p_value,
                       res.p_value > alpha, dof=res.dof, claim=ORACLE)


def process_law_check(n: int, q1: float, q2: float, replicates: int, seed: int,
                 alpha: float = 0.01, masses: WeightVector | None = None) -> list[CheckReport]:
    """Joint labeled partitions at two times: monotone construction versus oracle.

    Also checks on every replicate that the edge multiset at ``q1`` is
    contained in the one at ``q2``.
    """
    x = masses if masses is not None else WeightVector.unit(n)
    n = x.n
    g1, direct = EmpiricalLaw(), EmpiricalLaw()
    monotone_failures = 0
    for r in range(replicates):
        proc = graph_process_g1(x, None, RngStream(seed, r), q_max=q2)
        e1, e2 = proc.labeled_edges_at(q1), proc.labeled_edges_at(q2)
        if not set(e1) <= set(e2) or len(set(e2)) != len(e2):
            monotone_failures += 1
        g1.add((partition_key(n, e1), partition_key(n, e2)))
        run = sample_direct_graph(x, RngStream(seed, SECOND_SIDE + r))
        direct.add((partition_key(n, run.edges_at(q1)), partition_key(n, run.edges_at(q2))))
    res = chi_square_homogeneity(g1, direct)
    return [
        CheckReport(f"process_law_n{n}_q{q1:g}_{q2:g}", replicates, res.statistic, res.p_value,
                    res.p_value > alpha, dof=res.dof, claim=PROCESS_CLAIM),
        CheckReport("process_monotone", replicates, float(monotone_failures), float("nan"),
                    monotone_failures == 0, claim=PROCESS_CLAIM),
    ]


def merge_time_law(replicates: int, seed: int, threshold: float = 0.015) -> CheckReport:
    """``n = 2`` unit masses: the single merge time is ``Exp(1)``."""
    x = WeightVector.unit(2)
    samples = np.array([merge_schedule(x, sample_clocks(x, RngStream(seed, r))).events[0].q_star
                        for r in range(replicates)])
    res = ks_two_sided(samples, lambda q: -np.expm1(-q))
    return CheckReport("merge_time_ks", replicates, res.D, res.p_approx, res.D < threshold,
                       claim=MERGE_LAW)


def multigraph_mean_law(n: int = 10, q: float = 1.0, replicates: int = 10_000, seed: int = 0,
                        masses: WeightVector | None = None) -> list[CheckReport]:
    """Observed multigraph surplus plus loop counts versus ``q`` times excursion area.

    Counts are compared as totals over replicates (all components, and the
    leftmost component alone); under the construction each total is Poisson
    with mean equal to the summed ``q * area``.
    """
    x = masses if masses is not None else log_uniform_masses(
        RngStream(seed, SECOND_SIDE).generator(), n, 0.2, 2.0)
    obs_all = exp_all = obs_first = exp_first = 0.0
    for r in range(replicates):
        gen = RngStream(seed, r).generator()
        clocks = sample_clocks(x, gen)
        schedule = merge_schedule(x, clocks)
        forest = evolve_f1(x, clocks, schedule, gen)
        table = activation_table(schedule)
        log = sample_surplus_monotone(x, clocks, table, forest, q, gen, multigraph=True)
        dec = decompose_excursions(x, clocks, q)
        walk = WalkPath.build(x, clocks, q)
        ranges = component_partition_at(schedule, q)
        assert ranges == dec.ranges()
        starts = [a for a, _ in ranges]
        counts = np.zeros(len(ranges))
        for e in log.events:
            counts[np.searchsorted(starts, e.source, side="right") - 1] += 1
        means = np.array([q * excursion_area(x, clocks, q, e, walk=walk) for e in dec.excursions])
        obs_all += counts.sum()
        exp_all += means.sum()
        obs_first += counts[0]
        exp_first += means[0]
    ok_all, z_all = within_sigma(obs_all, exp_all, exp_all)
    ok_first, z_first = within_sigma(obs_first, exp_first, exp_first)
    return [
        CheckReport("multigraph_mean_all", replicates, z_all, float("nan"), ok_all, claim=AREA_CLAIM),
        CheckReport("multigraph_mean_first", replicates, z_first, float("nan"), ok_first,
                    claim=AREA_CLAIM),
    ]


def partition_equality_sweep(n: int = 20, replicates: int = 1000, probes: int = 20,
                             seed: int = 0) -> CheckReport:
    """Exact agreement of four partition readings at random probe times."""
    mismatches = 0
    for r in range(replicates):
        gen = RngStream(seed, r).generator()
        x = log_uniform_masses(gen, n, 0.5, 2.0)
        clocks = sample_clocks(x, gen)
        schedule = merge_schedule(x, clocks)
        f1 = evolve_f1(x, clocks, schedule, gen)
        horizon = 1.2 * schedule.events[-1].q_star if schedule.events else 1.0
        for q in np.sort(gen.uniform(0.0, horizon, size=probes)):
            if q <= 0:
                continue
            from_schedule = ranges_to_blocks(component_partition_at(schedule, q))
            dec = decompose_excursions(x, clocks, q)
            from_walk = ranges_to_blocks(dec.ranges())
            from_f0 = build_f0_snapshot(x, clocks, q, decomposition=dec).components()
            from_f1 = f1.components(q)
            if not (from_schedule == from_walk == from_f0 == from_f1):
                mismatches += 1
    return CheckReport("partition_equality", replicates, float(mismatches), float("nan"),
                       mismatches == 0, claim=PARTITIONS)


def scaling_bridge(ts=(-1.0, 0.0, 1.0), n: int = 2000, discrete_replicates: int = 1000,
                   paths: int = 1000, horizon: float = 10.0, ds: float = 1e-3, seed: int = 0,
                   rel_tol: float = 0.15) -> list[CheckReport]:
    """Mean largest component (discrete) against mean largest excursion (continuum)."""
    out = []
    for i, t in enumerate(ts):
        disc = np.array([discrete_largest_component(n, t, RngStream(seed, i * 10**7 + r))
                         for r in range(discrete_replicates)])
        params = ScalingParams(kappa=1.0, tau=0.0, c=(), t=t, horizon=horizon, ds=ds)
        cont = np.array([largest_excursion(p[0]) for p in
                         sample_continuum_paths(params, RngStream(seed, SECOND_SIDE + i), paths)])
        rel = abs(disc.mean() - cont.mean()) / cont.mean()
        out.append(CheckReport(f"bridge_t{t:g}", paths, float(rel), float("nan"), rel < rel_tol,
                               claim=BRIDGE))
    return out


def grid_refinement(t: float = 0.0, paths: int = 1000, horizon: float = 10.0, ds: float = 1e-3,
                    seed: int = 0, threshold: float = 0.02) -> CheckReport:
    """KS distance between largest-excursion laws at ``ds`` and ``ds / 2`` (coupled paths)."""
    params = ScalingParams(kappa=1.0, tau=0.0, c=(), t=t, horizon=horizon, ds=ds)
    pairs = sample_continuum_paths(params, RngStream(seed, 2 * SECOND_SIDE), paths, refine=2)
    coarse = np.array([largest_excursion(p[0]) for p in pairs])
    fine = np.array([largest_excursion(p[1]) for p in pairs])
    res = ks_two_sample(coarse, fine)
    return CheckReport("grid_refinement_ks", paths, res.D, res.p_approx, res.D < threshold,
                       claim=BRIDGE)


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


def expected_partition_law_n3(q: float) -> dict:
    """Closed form for three unit vertices: singletons, one pair, connected."""
    p = -math.expm1(-q)
    return {"singletons": (1 - p) ** 3, "pair": 3 * p * (1 - p) ** 2,
            "connected": 1 - (1 - p) ** 3 - 3 * p * (1 - p) ** 2}

