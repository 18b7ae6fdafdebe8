import math

import numpy as np
import pytest

import oracles
from conftest import BINARY, QUATERNARY, make_seq
from mcorder import (aic_order, bic_order, generate, log_likelihood,
                     ps_fluctuation, ps_order, random_transition_model)
from mcorder.errors import InvalidConfig, SequenceTooShort
from mcorder.rng import TAG_GENERATE, TAG_MODEL, derive


class TestLogLikelihood:
    def test_constant_k0(self, constant10):
        assert log_likelihood(constant10, 0) == 0.0

    def test_alternating_k1_deterministic(self, alternating8):
        assert log_likelihood(alternating8, 1) == pytest.approx(0.0, abs=1e-12)

    def test_alternating_k0_frozen(self, alternating8):
        assert log_likelihood(alternating8, 0) == pytest.approx(
            -5.545177444479562, abs=1e-12)

    def test_matches_naive_oracle(self, random_sequences):
        for seq in random_sequences:
            for k in (0, 1, 2, 3):
                got = log_likelihood(seq, k)
                want = oracles.log_likelihood(seq.data.tolist(), k)
                assert got == pytest.approx(want, abs=1e-9)

    def test_nondecreasing_in_k_exhaustive(self):
        for n in range(4, 10):
            for data in oracles.all_binary_sequences(n):
                seq = make_seq(data)
                values = [log_likelihood(seq, k) for k in range(0, n - 1)]
                assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))

    def test_too_short(self):
        with pytest.raises(SequenceTooShort):
            log_likelihood(make_seq([0, 1]), 2)


class TestPenalizedCriteria:
    def test_constant_selects_zero(self, constant10):
        assert aic_order(constant10, 3).order == 0
        assert bic_order(constant10, 3).order == 0

    def test_alternating_selects_one(self, alternating1600):
        assert aic_order(alternating1600, 4).order == 1
        assert bic_order(alternating1600, 4).order == 1

    def test_penalty_values(self, alternating1600):
        aic = dict(aic_order(alternating1600, 2).scores)
        bic = dict(bic_order(alternating1600, 2).scores)
        ll = {k: log_likelihood(alternating1600, k) for k in (0, 1, 2)}
        n = len(alternating1600)
        for k in (0, 1, 2):
            assert aic[k] == pytest.approx(-2 * ll[k] + 2 * 2 ** k, rel=1e-12)
            assert bic[k] == pytest.approx(
                -2 * ll[k] + 2 ** k * math.log(n - k), rel=1e-12)

    def test_bic_order_never_above_aic(self, random_sequences):
        # holds whenever ln(N-k) > 2 with a margin; keep N - k_max >= 12
        for seq in random_sequences:
            k_max = min(3, len(seq) - 12)
            if k_max < 1:
                continue
            assert bic_order(seq, k_max).order <= aic_order(seq, k_max).order

    def test_bic_consistent_on_iid(self):
        rng = np.random.default_rng(404)
        hits = 0
        for _ in range(100):
            seq = make_seq(rng.integers(0, 2, 1600))
            hits += bic_order(seq, 3).order == 0
        assert hits >= 90

    def test_scores_finite(self, random_sequences):
        for seq in random_sequences:
            for k, score in aic_order(seq, 3).scores:
                assert math.isfinite(score)


class TestPeresShields:
    def test_constant_zero_fluctuation(self, constant10):
        assert ps_fluctuation(constant10, 0, 3) == 0.0
        assert ps_order(constant10, 2, j_max=3).order == 0

    def test_alternating_frozen(self, alternating1600):
        # deterministic order-1 chain: zero above order, ~N/4 below
        d0 = ps_fluctuation(alternating1600, 0, 4)
        d1 = ps_fluctuation(alternating1600, 1, 4)
        assert d1 == 0.0
        assert d0 == pytest.approx(399.0, abs=1e-9)
        assert d0 > 1600 ** 0.75
        assert ps_order(alternating1600, 3, j_max=4).order == 1

    def test_matches_naive_oracle(self, random_sequences):
        for seq in random_sequences:
            k_size = seq.alphabet.size
            for k in (0, 1, 2):
                got = ps_fluctuation(seq, k, 3)
                want = oracles.ps_fluctuation(seq.data.tolist(), k_size, k, 3)
                assert got == pytest.approx(want, abs=1e-9)

    def test_zero_above_order_for_deterministic_chains(self):
        # period-4 chain 0011 is deterministic at order 2
        seq = make_seq([0, 0, 1, 1] * 100)
        assert ps_fluctuation(seq, 1, 4) > 0.0
        assert ps_fluctuation(seq, 2, 4) == 0.0
        assert ps_fluctuation(seq, 3, 4) == 0.0

    def test_knee_rule_on_stochastic_chain(self):
        model = random_transition_model(2, 3, derive(7, TAG_MODEL, 0))
        seq = generate(model, 1600, derive(7, TAG_GENERATE, 0))
        assert ps_order(seq, 4, rule="knee").order == 3

    def test_rule_recorded(self, alternating1600):
        assert ps_order(alternating1600, 2).rule == "threshold"
        assert ps_order(alternating1600, 2, rule="knee").rule == "knee"

    def test_invalid_jmax(self, alternating1600):
        with pytest.raises(InvalidConfig):
            ps_order(alternating1600, 3, j_max=3)
        with pytest.raises(InvalidConfig):
            ps_fluctuation(alternating1600, 2, 2)

    def test_too_short(self):
        with pytest.raises(SequenceTooShort):
            ps_fluctuation(make_seq([0, 1, 0]), 0, 3)

    def test_unknown_rule(self, alternating1600):
        with pytest.raises(InvalidConfig):
            ps_order(alternating1600, 2, rule="median")
