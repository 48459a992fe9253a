import json

import numpy as np
import pytest
from scipy import stats as sps

from mcgraph.stats import (CheckReport, EmpiricalLaw, UnsupportedOutcome, bonferroni,
                           chi_square_gof, chi_square_homogeneity, ks_two_sample, ks_two_sided,
                           within_sigma)

UNIFORM6 = {i: 1 / 6 for i in range(6)}


def test_proportional_counts():
    emp = EmpiricalLaw.from_keys([0, 0, 1, 2, 2, 2, 2, 3] * 5)
    law = {k: v for k, v in emp.frequencies().items()}
    r = chi_square_gof(emp, law)
    assert r.statistic == 0 and r.p_value == 1.0


def test_fair_die():
    emp = EmpiricalLaw({i: 10 for i in range(6)})
    assert chi_square_gof(emp, UNIFORM6).statistic == 0


def test_pearson_hand_value():
    from collections import Counter
    emp = EmpiricalLaw(Counter(dict(enumerate([20, 10, 10, 10, 5, 5]))))
    r = chi_square_gof(emp, UNIFORM6)
    assert r.statistic == pytest.approx(15.0)
    assert r.dof == 5
    assert r.p_value == pytest.approx(sps.chi2.sf(15, 5))


def test_unsupported_outcome():
    with pytest.raises(UnsupportedOutcome):
        chi_square_gof(EmpiricalLaw.from_keys([0, 7]), UNIFORM6)


def test_rare_cells_pooled():
    law = {0: 0.5, 1: 0.4995, 2: 0.0005}
    emp = EmpiricalLaw.from_keys([0] * 500 + [1] * 499 + [2])
    r = chi_square_gof(emp, law)
    assert r.dof == 1


def test_homogeneity():
    gen = np.random.default_rng(0)
    a = EmpiricalLaw.from_keys(gen.integers(0, 4, 4000).tolist())
    b = EmpiricalLaw.from_keys(gen.integers(0, 4, 4000).tolist())
    assert chi_square_homogeneity(a, b).p_value > 0.001
    c = EmpiricalLaw.from_keys(gen.integers(0, 3, 4000).tolist())
    assert chi_square_homogeneity(a, c).p_value < 1e-6


def test_ks_against_own_cdf():
    gen = np.random.default_rng(1)
    assert ks_two_sided(gen.exponential(size=10_000), sps.expon.cdf).D < 0.02


def test_ks_trivial_cases():
    assert ks_two_sided([0.0], sps.norm.cdf).D == pytest.approx(0.5)
    assert ks_two_sided([1.0] * 50, sps.norm.cdf).D >= 0.5
    with pytest.raises(ValueError):
        ks_two_sided([], sps.norm.cdf)


def test_ks_matches_scipy():
    gen = np.random.default_rng(2)
    s = gen.normal(size=500)
    ours = ks_two_sided(s, sps.norm.cdf)
    assert ours.D == pytest.approx(sps.kstest(s, "norm").statistic)
    a, b = gen.normal(size=300), gen.normal(0.2, size=400)
    assert ks_two_sample(a, b).D == pytest.approx(sps.ks_2samp(a, b).statistic)


def test_helpers():
    ok, z = within_sigma(110, 100, 100)
    assert ok and z == pytest.approx(1.0)
    assert not within_sigma(131, 100, 100)[0]
    assert bonferroni(0.01, 4) == 0.0025


def test_report_json():
    r = CheckReport("x", 10, 1.5, 0.3, True, dof=2)
    assert json.loads(r.to_json()) == {"test": "x", "N": 10, "statistic": 1.5, "p": 0.3,
                                       "pass": True, "dof": 2}


def test_counts_merge():
    a = EmpiricalLaw.from_keys("aab")
    a.update(EmpiricalLaw.from_keys("bc"))
    assert a.counts == {"a": 2, "b": 2, "c": 1} and a.total == 5
