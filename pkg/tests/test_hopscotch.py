import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import binom

from squidprob.hopscotch import (
    BridgeConfig,
    bridge_csv,
    bridge_table,
    expected_first_crosser,
    first_crosser_pmf,
    survival_probability,
    text_chart,
)

SHOW = BridgeConfig(17, 2)


def test_first_player_crosses_rarely():
    assert math.isclose(first_crosser_pmf(SHOW)[0], 0.5 ** 17, rel_tol=1e-12)
    assert math.isclose(survival_probability(SHOW, 1), 7.62939453125e-6, rel_tol=1e-12)


def test_modes_at_nine_and_ten():
    pmf = first_crosser_pmf(SHOW)
    assert pmf[8] == pmf[9]
    assert pmf[8] == pmf.max()
    assert np.argsort(pmf)[-2:].tolist() in ([8, 9], [9, 8])


def test_survival_examples():
    assert survival_probability(SHOW, 18) == 1.0
    assert survival_probability(SHOW, 40) == 1.0
    assert survival_probability(SHOW, 9) < survival_probability(SHOW, 10)
    with pytest.raises(ValueError):
        survival_probability(SHOW, 0)


def test_expected_first_crosser():
    assert expected_first_crosser(SHOW) == 9.5
    assert expected_first_crosser(BridgeConfig(17, 1)) == 18


def test_certain_misstep():
    pmf = first_crosser_pmf(BridgeConfig(9, 1))
    assert pmf[-1] == 1.0 and pmf[:-1].sum() == 0.0
    assert survival_probability(BridgeConfig(9, 1), 9) == 0.0


@pytest.mark.parametrize("n,m", [(17, 2), (17, 3), (60, 7), (1000, 2), (10_000, 2),
                                 (10_000, 1000), (5000, 3)])
def test_pmf_against_direct_binomial(n, m):
    pmf = first_crosser_pmf(BridgeConfig(n, m))
    assert abs(pmf.sum() - 1) < 1e-12
    ref = binom.pmf(np.arange(n + 1), n, 1 / m)
    assert np.allclose(pmf, ref, rtol=1e-9, atol=1e-300)


def test_small_case_by_exact_enumeration():
    # 2^n equally likely step outcomes at m = 2
    n = 12
    counts = np.zeros(n + 1)
    for outcome in range(2 ** n):
        counts[bin(outcome).count("1")] += 1
    assert np.allclose(first_crosser_pmf(BridgeConfig(n, 2)), counts / 2 ** n, rtol=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 400), st.integers(1, 50))
def test_pmf_properties(n, m):
    cfg = BridgeConfig(n, m)
    result = bridge_table(cfg)
    pmf, surv = result.first_crosser, result.survival
    assert abs(pmf.sum() - 1) < 1e-12
    assert np.all(np.diff(surv) >= -1e-15)
    assert surv[-1] == 1.0
    # steps into a clamped value (survival capped at 1) absorb the pmf's rounding
    free = surv[1:] < 1.0
    assert np.allclose(np.diff(surv)[free], pmf[1:][free], atol=1e-15, rtol=0)
    assert abs((surv[-1] - surv[-2]) - pmf[-1]) < 1e-12
    mean = float(np.dot(np.arange(1, n + 2), pmf))
    assert math.isclose(mean, expected_first_crosser(cfg), rel_tol=1e-10)


@given(st.integers(1, 200), st.integers(1, 30))
def test_expected_first_crosser_falls_with_m(n, m):
    assert expected_first_crosser(BridgeConfig(n, m + 1)) < expected_first_crosser(BridgeConfig(n, m))


def test_survival_step_is_pmf():
    surv = bridge_table(SHOW).survival
    pmf = first_crosser_pmf(SHOW)
    for k in range(2, 18):
        assert abs((survival_probability(SHOW, k) - survival_probability(SHOW, k - 1)) - pmf[k - 1]) < 1e-15
    assert surv[0] == pmf[0]


def test_config_validation():
    with pytest.raises(ValueError):
        BridgeConfig(0, 2)
    with pytest.raises(ValueError):
        BridgeConfig(5, 0)


def test_csv_and_chart():
    text = bridge_csv(bridge_table(SHOW))
    lines = text.splitlines()
    assert lines[0] == "k,first_crosser,survival"
    assert len(lines) == 19
    assert lines[-1].startswith("18,") and lines[-1].endswith(",1")
    assert len(text_chart(bridge_table(SHOW)).splitlines()) == 18
