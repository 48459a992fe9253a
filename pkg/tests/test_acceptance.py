"""Acceptance criteria at their stated sample sizes and tolerances.

Each test records one ``PASS``/``FAIL`` line, printed in the terminal summary
(or directly when the file is run as a script).  Chi-square criteria share a
1% family-wise level split evenly across them.
"""

import time

import pytest

from mcgraph import experiments as ex
from mcgraph.stats import bonferroni

from conftest import ACCEPTANCE_LINES

SNAPSHOT_CONFIGS = [(n, q) for n in (3, 4) for q in (0.3, 0.6931, 1.2)]
CHI_SQUARE_TESTS = len(SNAPSHOT_CONFIGS) + 1 + 1  # criteria 3, 4 and 9
ALPHA = bonferroni(0.01, CHI_SQUARE_TESTS)

pytestmark = pytest.mark.slow


def record(number, reports, elapsed, limit=None, extra=""):
    ok = all(r.passed for r in reports) and (limit is None or elapsed < limit)
    detail = "; ".join(f"{r.test}: stat={r.statistic:.4g}" + ("" if r.p != r.p else f" p={r.p:.3g}")
                       for r in reports)
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s) {detail}{extra}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def test_criterion_1_and_2_mosaic_identities():
    (reports, elapsed) = ex.timed(ex.mosaic_sweep, instances=100, n_max=50,
                                  qs=(0.5, 1.0, 2.0, 5.0), seed=2024, tol=1e-9)
    rate, tiling, slices = reports
    ok1 = record(1, [rate], elapsed, limit=10.0)
    ok2 = record(2, [tiling, slices], elapsed)
    assert ok1 and ok2


@pytest.mark.parametrize("n,q", SNAPSHOT_CONFIGS)
def test_criterion_3_snapshot_law(n, q):
    rep, elapsed = ex.timed(ex.snapshot_law_check, n, q, 100_000, seed=31 + n, alpha=ALPHA)
    assert record(3, [rep], elapsed, limit=120.0, extra=f" (alpha={ALPHA:.2g})")


def test_criterion_4_process_law():
    reports, elapsed = ex.timed(ex.process_law_check, 3, 0.3, 0.8, 100_000, seed=41, alpha=ALPHA)
    assert record(4, reports, elapsed, extra=f" (alpha={ALPHA:.2g})")


def test_criterion_5_merge_time():
    rep, elapsed = ex.timed(ex.merge_time_law, 10_000, seed=51, threshold=0.015)
    assert record(5, [rep], elapsed)


def test_criterion_6_multigraph_mean():
    reports, elapsed = ex.timed(ex.multigraph_mean_law, n=10, q=1.0, replicates=10_000, seed=61)
    assert record(6, reports, elapsed)


def test_criterion_7_partition_equality():
    rep, elapsed = ex.timed(ex.partition_equality_sweep, n=20, replicates=1000, probes=20, seed=71)
    assert record(7, [rep], elapsed)


def test_criterion_8_scaling():
    start = time.perf_counter()
    bridge = ex.scaling_bridge(ts=(-1.0, 0.0, 1.0), n=2000, discrete_replicates=1000, paths=1000,
                               horizon=10.0, ds=1e-3, seed=81, rel_tol=0.15)
    grid = ex.grid_refinement(t=0.0, paths=1000, horizon=10.0, ds=1e-3, seed=82, threshold=0.02)
    elapsed = time.perf_counter() - start
    assert record(8, bridge + [grid], elapsed, limit=600.0)


def test_criterion_9_oracle():
    rep, elapsed = ex.timed(ex.oracle_self_check, 3, 0.6931, 100_000, seed=91, alpha=ALPHA)
    assert record(9, [rep], elapsed, extra=f" (alpha={ALPHA:.2g})")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
