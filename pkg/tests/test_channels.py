from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evenbly.channels import (
    DEPOLARIZING,
    ERASURE,
    GAUSSIAN,
    GREEDY,
    PAULI,
    PURE_Y,
    PURE_Z,
    NoiseModel,
    RecoveryCurve,
    SweepConfig,
    WeightTable,
    binomial_pmf,
    build_instance,
    estimate_threshold,
    failure_weights_table,
    read_curves,
    recombine,
    recombine_failure_weights,
    sample_per_weight,
    sweep,
    thresholds,
    write_sweep,
)
from evenbly.codegen import ZERO_RATE, GaugeSpec


@given(st.integers(1, 60), st.floats(0.0, 1.0))
def test_binomial_pmf_sums_to_one(n, p):
    pmf = binomial_pmf(n, p)
    assert pmf.shape == (n + 1,)
    assert pmf.sum() == pytest.approx(1.0, abs=1e-9)
    assert (pmf >= 0).all()


def test_binomial_pmf_matches_math_comb():
    n, p = 9, 0.37
    want = [math.comb(n, w) * p ** w * (1 - p) ** (n - w) for w in range(n + 1)]
    assert np.allclose(binomial_pmf(n, p), want)


@pytest.mark.parametrize("p", [0.0, 0.05, 0.3, 0.8, 1.0])
def test_recombine_seed_table(p):
    # [[4,1,2]]: single erasures are recoverable, larger ones never are
    val, err = recombine([1, 1, 0, 0, 0], p)
    assert val == pytest.approx((1 - p) ** 4 + 4 * p * (1 - p) ** 3)
    assert err == 0.0


def test_recombine_constant_rates():
    assert recombine([0.5] * 8, 0.3)[0] == pytest.approx(0.5)
    val, err = recombine([1, 0.5, 0], 0.5, [0, 0.01, 0])
    assert val == pytest.approx(0.25 + 0.25)
    assert err == pytest.approx(0.5 * math.sqrt(0.01))


def test_failure_weights_recombination_matches_table():
    n = 6
    w_star = np.array([1, 2, 2, 3, 6, 7, 0])
    table = failure_weights_table(w_star, n)
    for p in (0.1, 0.4, 0.7):
        a, _ = recombine_failure_weights(w_star, n, p)
        b, _ = recombine(table.rates, p)
        assert a == pytest.approx(b)


def test_standard_errors_floor_at_one_over_trials():
    # identical trials give zero sample spread, but 50 trials cannot resolve better than 1/50
    w_star = np.full(50, 3)
    for p in (0.01, 0.5, 0.99):
        _, err = recombine_failure_weights(w_star, 10, p)
        assert err == pytest.approx(1 / 50)
    t = WeightTable(2, np.array([8.0, 8.0, 0.0]), np.array([8.0, 8.0, 8.0]))
    assert np.allclose(t.variances, 1 / 64)


def test_weight_table_fill():
    t = WeightTable(4, np.array([5.0, 0, 2, 0, 0]), np.array([5.0, 0, 4, 0, 1]))
    assert np.allclose(t.filled_rates(), [1.0, 1.0, 0.5, 0.5, 0.0])
    with pytest.raises(ValueError):
        WeightTable(2, np.zeros(3), np.zeros(3)).filled_rates()


def test_noise_model_validation():
    NoiseModel(ERASURE, 0.2)
    with pytest.raises(ValueError):
        NoiseModel("amplitude", 0.1)
    with pytest.raises(ValueError):
        NoiseModel(DEPOLARIZING, 1.5)


@pytest.fixture(scope="module")
def seed_inst():
    return build_instance(5, 4, 0, GaugeSpec(ZERO_RATE, "Z"))


def test_sample_per_weight_on_the_seed(seed_inst):
    assert sample_per_weight(seed_inst, GAUSSIAN, ERASURE, 0, 10, 0) == (1.0, 0.1)
    assert sample_per_weight(seed_inst, GAUSSIAN, ERASURE, 1, 50, 0)[0] == 1.0
    # the logical Z has a weight-2 representative on every pair of qubits
    assert sample_per_weight(seed_inst, GAUSSIAN, ERASURE, 2, 50, 0)[0] == 0.0
    assert sample_per_weight(seed_inst, GAUSSIAN, ERASURE, 3, 50, 0)[0] == 0.0
    with pytest.raises(ValueError):
        sample_per_weight(seed_inst, GAUSSIAN, ERASURE, 9, 10, 0)
    with pytest.raises(ValueError):
        sample_per_weight(seed_inst, GAUSSIAN, ERASURE, 1, 0, 0)


def test_sample_per_weight_is_seeded(seed_inst):
    a = sample_per_weight(seed_inst, PAULI, DEPOLARIZING, 2, 200, 5)
    b = sample_per_weight(seed_inst, PAULI, DEPOLARIZING, 2, 200, 5)
    assert a == b


def test_instance_decoders_are_keyed_on_restriction(seed_inst):
    assert seed_inst.decoder(PAULI, PURE_Z).restrict == "Z"
    assert seed_inst.decoder(PAULI, DEPOLARIZING).restrict is None
    assert seed_inst.decoder(PAULI, PURE_Y) is seed_inst.decoder(PAULI, PURE_Y)
    plain = build_instance(5, 4, 0, GaugeSpec(ZERO_RATE, "Z"), noise_aware=False)
    assert plain.decoder(PAULI, PURE_Z).restrict is None
    with pytest.raises(ValueError):
        seed_inst.decoder("oracle")


def _line(L, a, b, p, err=0.0):
    return RecoveryCurve([(x, a + b * x, err) for x in p], {"L": L})


def test_threshold_of_synthetic_lines():
    p = np.linspace(0.0, 1.0, 21)
    # 0.9 - 0.8p and 1.1 - 1.2p meet at p = 0.5
    est = estimate_threshold(_line(1, 0.9, -0.8, p), _line(2, 1.1, -1.2, p), resamples=50)
    assert est.found and est.p_threshold == pytest.approx(0.5)
    assert 0 < est.uncertainty < 1e-6


def test_threshold_absent_when_larger_code_never_leads():
    p = np.linspace(0.0, 1.0, 21)
    est = estimate_threshold(_line(1, 1.0, -0.5, p), _line(2, 0.9, -0.6, p), resamples=10)
    assert not est.found and "no threshold" in est.method


def test_threshold_ignores_a_late_rise():
    # the larger code leads, falls behind at 0.4, then recovers at high p
    p = np.round(np.linspace(0.1, 0.9, 9), 2)
    a = np.array([0.9, 0.8, 0.7, 0.6, 0.5, 0.5, 0.5, 0.5, 0.5])
    b = np.array([1.0, 0.95, 0.8, 0.5, 0.4, 0.45, 0.55, 0.7, 0.9])
    ca = RecoveryCurve(list(zip(p, a, [0.0] * 9)), {"L": 2})
    cb = RecoveryCurve(list(zip(p, b, [0.0] * 9)), {"L": 3})
    est = estimate_threshold(ca, cb, resamples=10)
    assert est.p_threshold == pytest.approx(0.3 + 0.1 * 0.1 / 0.2)


def test_threshold_needs_a_significant_lead():
    p = np.linspace(0.1, 0.9, 9)
    a = _line(1, 0.5, 0.0, p, err=0.05)
    b = RecoveryCurve([(x, 0.52 - 0.1 * x, 0.05) for x in p], {"L": 2})
    assert not estimate_threshold(a, b, resamples=10).found


def test_threshold_rejects_mismatched_grids():
    with pytest.raises(ValueError):
        estimate_threshold(_line(1, 1, -1, [0.1, 0.2]), _line(2, 1, -1, [0.1, 0.3]))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.15, 0.85), st.floats(0.2, 2.0))
def test_threshold_recovers_planted_crossing(x0, slope):
    p = np.linspace(0.0, 1.0, 41)
    a = _line(1, 0.5 + 0.5 * x0, -0.5, p)
    b = _line(2, 0.5 + (0.5 + slope) * x0, -(0.5 + slope), p)
    est = estimate_threshold(a, b, resamples=5)
    assert est.found and est.p_threshold == pytest.approx(x0, abs=1e-9)


def test_thresholds_orders_by_layers():
    p = np.linspace(0, 1, 11)
    curves = [_line(3, 1.3, -1.6, p), _line(1, 0.9, -0.8, p), _line(2, 1.1, -1.2, p)]
    ests = thresholds(curves, resamples=5)
    assert [e.method for e in ests] == ["crossing L=1 / L=2", "crossing L=2 / L=3"]
    assert all(e.p_threshold == pytest.approx(0.5) for e in ests)


def test_sweep_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(decoder=PAULI, kind=ERASURE)
    with pytest.raises(ValueError):
        SweepConfig(decoder=GAUSSIAN, kind=DEPOLARIZING)
    with pytest.raises(ValueError):
        SweepConfig(layers=())
    with pytest.raises(ValueError):
        SweepConfig(p_grid=(0.1, 1.2))
    with pytest.raises(ValueError):
        SweepConfig(sampling="importance")
    cfg = SweepConfig(trials={"1": "7"})
    assert cfg.trials_for(1) == 7 and cfg.trials_for(2) == 1000
    assert SweepConfig.from_dict(cfg.to_dict()) == cfg


def test_sweep_erasure_seed_is_exact():
    cfg = SweepConfig(layers=(0,), p_grid=(0.0, 0.2, 0.5), trials={0: 400})
    res = sweep(cfg)
    (curve,) = res.curves
    for p, val, _ in curve.points:
        # every permutation fails exactly at weight 2, so the curve is exact
        assert val == pytest.approx((1 - p) ** 4 + 4 * p * (1 - p) ** 3)
    assert curve.meta["n"] == 4 and res.extras["greedy_violations"] == 0


def test_sweep_greedy_records_no_violations():
    cfg = SweepConfig(layers=(1, 2), decoder=GREEDY, p_grid=(0.2, 0.4), trials={1: 100, 2: 40})
    res = sweep(cfg)
    assert res.extras["greedy_violations"] == 0
    gauss = sweep(SweepConfig(layers=(1, 2), p_grid=(0.2, 0.4), trials={1: 100, 2: 40}))
    for cg, ch in zip(res.curves, gauss.curves):
        assert (cg.p_rec <= ch.p_rec + 1e-12).all()


def test_sweep_direct_matches_weight_sampling():
    common = dict(layers=(0,), kind=PURE_Z, decoder=PAULI, p_grid=(0.1, 0.3))
    w = sweep(SweepConfig(trials={0: 2000}, **common)).curves[0]
    d = sweep(SweepConfig(trials={0: 4000}, sampling="direct", **common)).curves[0]
    for (_, a, sa), (_, b, sb) in zip(w.points, d.points):
        assert abs(a - b) < 4 * math.hypot(sa, sb) + 1e-3


@pytest.mark.parametrize("kind,decoder", [(ERASURE, GREEDY), (DEPOLARIZING, PAULI)])
def test_sweep_csv_is_thread_independent(kind, decoder):
    base = dict(layers=(0, 1), kind=kind, decoder=decoder, p_grid=(0.1, 0.3), trials={0: 40, 1: 40},
                chunk=16, seed=11, truncate=1e-3)
    one = sweep(SweepConfig(threads=1, **base)).to_csv()
    two = sweep(SweepConfig(threads=2, **base)).to_csv()
    assert one == two
    other = sweep(SweepConfig(threads=1, **(base | {"seed": 12}))).to_csv()
    assert other != one


def test_write_and_read_curves(tmp_path):
    res = sweep(SweepConfig(layers=(0, 1), p_grid=(0.1, 0.5), trials={0: 20, 1: 20}))
    path = tmp_path / "s.csv"
    write_sweep(res, str(path))
    back = read_curves(str(path))
    assert [c.meta["L"] for c in back] == [0, 1]
    for a, b in zip(back, res.curves):
        assert a.points == b.points
    assert (tmp_path / "s.json").exists()
