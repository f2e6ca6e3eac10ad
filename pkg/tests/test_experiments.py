import math

import numpy as np
import pytest
from scipy.stats import binomtest

from c4toric.errors import InvalidParameter
from c4toric.experiments import (
    BLOCK,
    ExperimentConfig,
    PointResult,
    block_seed,
    estimate_threshold,
    run_point,
    run_sweep,
    wilson_ci,
)


def _wilson_direct(k, n, z=1.959963984540054):
    ph = k / n
    c = (ph + z * z / (2 * n)) / (1 + z * z / n)
    h = z / (1 + z * z / n) * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n))
    return c - h, c + h


def test_wilson_examples():
    assert wilson_ci(0, 100)[0] == 0.0
    lo, hi = wilson_ci(50, 100)
    assert (lo + hi) / 2 == pytest.approx(0.5)
    assert wilson_ci(100, 100)[1] == 1.0


@pytest.mark.parametrize("k,n", [(41, 10_000), (3, 50), (977, 1000), (1, 7)])
def test_wilson_against_two_oracles(k, n):
    ours = wilson_ci(k, n)
    assert ours == pytest.approx(_wilson_direct(k, n), abs=1e-12)
    ci = binomtest(k, n).proportion_ci(0.95, method="wilson")
    assert ours == pytest.approx((ci.low, ci.high), abs=1e-9)


def test_wilson_rejects_bad_input():
    with pytest.raises(InvalidParameter):
        wilson_ci(0, 0)
    with pytest.raises(InvalidParameter):
        wilson_ci(5, 4)


def _curves(rate, ls, ps, trials, rng=None):
    out = {}
    for l in ls:
        pts = []
        for p in ps:
            r = rate(p, l)
            k = int(rng.binomial(trials, r)) if rng is not None else int(round(r * trials))
            pts.append(PointResult(l, l, p, trials, k, *wilson_ci(k, trials)))
        out[l] = pts
    return out


def test_synthetic_crossing_recovered():
    p0 = 0.01
    ps = np.linspace(0.0085, 0.0115, 11)
    rate = lambda p, d: 0.5 * (p / p0) ** (d / 2)
    est = estimate_threshold(_curves(rate, (4, 6, 8), ps, 10 ** 6), bootstrap=50)
    assert est.p_c == pytest.approx(p0, rel=0.01)
    noisy = estimate_threshold(_curves(rate, (4, 6, 8), ps, 10 ** 5, np.random.default_rng(0)),
                               bootstrap=100)
    assert noisy.p_c == pytest.approx(p0, rel=0.05)
    assert noisy.ci[0] <= p0 <= noisy.ci[1]


def test_identical_curves_do_not_cross():
    rate = lambda p, d: 0.1 + p
    est = estimate_threshold(_curves(rate, (4, 6), np.linspace(0.01, 0.05, 5), 10 ** 4))
    assert not est.found and est.p_c is None and est.ci is None
    assert est.to_dict()["found"] is False


def test_separated_curves_do_not_cross():
    rate = lambda p, d: min(0.9, 10 * p / d)
    est = estimate_threshold(_curves(rate, (4, 6), np.linspace(0.01, 0.05, 5), 10 ** 5))
    assert not est.found


def test_threshold_needs_two_sizes():
    with pytest.raises(InvalidParameter):
        estimate_threshold(_curves(lambda p, d: p, (4,), [0.1, 0.2], 100))


@pytest.mark.parametrize("kwargs", [
    dict(l_values=(1,)), dict(p_values=(0.2, 0.1)), dict(p_values=(1.5,)), dict(trials=0),
    dict(q=-0.1), dict(decoder="unionfind"), dict(scenario="CircuitLevel"),
    dict(scenario="CircuitLevel", schedule="Toric4"),
])
def test_config_validation(kwargs):
    base = dict(family="C4Toric", scenario="DataOnly", l_values=(2,), p_values=(0.1,))
    with pytest.raises(InvalidParameter):
        ExperimentConfig(**{**base, **kwargs})


def test_block_seeds_distinct():
    keys = {tuple(block_seed(0, l, i, b).generate_state(2)) for l in (2, 3) for i in range(3) for b in range(3)}
    assert len(keys) == 18


@pytest.mark.parametrize("scenario,schedule", [("DataOnly", "None"), ("DataSyndrome", "None"),
                                               ("CircuitLevel", "C4Four")])
def test_zero_noise_zero_failures(scenario, schedule):
    cfg = ExperimentConfig("C4Toric", scenario, (2,), (0.0,), schedule, trials=300)
    pt = run_point(cfg, 2, 0.0)
    assert pt.failures == 0 and pt.logical_rate == 0.0 and pt.ci_low == 0.0


def test_sweep_independent_of_workers():
    cfg = ExperimentConfig("Toric", "DataSyndrome", (2, 3), (0.02, 0.05), trials=BLOCK * 2 + 100,
                           master_seed=11)
    a = run_sweep(cfg, workers=1, bootstrap=20)
    b = run_sweep(cfg, workers=2, bootstrap=20)
    assert a.points == b.points
    assert a.threshold == b.threshold


def test_sweep_p_zero_column():
    cfg = ExperimentConfig("C4Toric", "DataOnly", (2, 3), (0.0, 0.05), trials=500)
    res = run_sweep(cfg, bootstrap=10)
    assert [pt.failures for pt in res.points if pt.p == 0.0] == [0, 0]
    assert [(pt.l, pt.p) for pt in res.points] == [(2, 0.0), (2, 0.05), (3, 0.0), (3, 0.05)]


def test_data_only_c4_d8_matches_reference_curve():
    # the d=8 data-only curve reads 0.4767 at p=0.09895 and 0.4880 at p=0.10105
    ref = 0.4767 + (0.4880 - 0.4767) * (0.10 - 0.0989473684211) / (0.101052631579 - 0.0989473684211)
    cfg = ExperimentConfig("C4Toric", "DataOnly", (4,), (0.10,), trials=10_000)
    pt = run_point(cfg, 4, 0.10)
    sigma = math.sqrt(ref * (1 - ref) / pt.trials)
    assert pt.d == 8
    assert abs(pt.logical_rate - ref) <= 3 * sigma


def test_data_syndrome_without_flips_reduces_to_data_only():
    trials = 4000
    ds = ExperimentConfig("C4Toric", "DataSyndrome", (3,), (0.06,), trials=trials, q=0.0, rounds=1)
    do = ExperimentConfig("C4Toric", "DataOnly", (3,), (0.06,), trials=trials)
    a, b = run_point(ds, 3, 0.06), run_point(do, 3, 0.06)
    pooled = (a.failures + b.failures) / (2 * trials)
    sigma = math.sqrt(2 * pooled * (1 - pooled) / trials)
    assert abs(a.logical_rate - b.logical_rate) <= 3 * sigma


def test_blossom_and_pymatching_rates_agree():
    # reference and campaign decoders on identical samples
    base = dict(family="Toric", scenario="DataSyndrome", l_values=(3,), p_values=(0.03,), trials=600)
    a = run_point(ExperimentConfig(**base), 3, 0.03)
    b = run_point(ExperimentConfig(**base, decoder="blossom"), 3, 0.03)
    sigma = math.sqrt(max(a.logical_rate, 0.01) / a.trials)
    assert abs(a.logical_rate - b.logical_rate) <= 3 * sigma


def test_rate_nondecreasing_in_p():
    cfg = ExperimentConfig("Toric", "DataOnly", (4,), (0.02, 0.06, 0.1), trials=3000)
    rates = [pt.logical_rate for pt in run_sweep(cfg).points]
    assert rates == sorted(rates)
