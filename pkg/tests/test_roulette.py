import math

import numpy as np
import pytest

from qubit_remainder.automaton import BitString, ProblemSpec, run_classical_counter
from qubit_remainder.errors import InvalidArgumentError
from qubit_remainder.noise import NOISELESS, NoiseModel
from qubit_remainder.roulette import (
    COIN,
    GameResult,
    GameSpec,
    generate_string,
    play,
    play_game,
    resolve_pointer,
    settle,
    win_rate,
)
from qubit_remainder import rng as rngmod


class TestString:
    def test_all_zero(self, rng):
        assert generate_string(GameSpec(2, 50, p_one=0.0), rng).hamming_weight == 0

    def test_all_one(self, rng):
        assert generate_string(GameSpec(2, 50, p_one=1.0), rng).hamming_weight == 50

    def test_fair_weight(self, rng):
        N = 10 ** 5
        w = generate_string(GameSpec(2, N), rng).hamming_weight
        assert abs(w - N / 2) <= 3 * math.sqrt(N / 4)

    def test_one_uniform_per_character(self):
        a, b = np.random.default_rng(1), np.random.default_rng(1)
        generate_string(GameSpec(2, 17), a)
        b.random(17)
        assert a.random() == b.random()


class TestPointer:
    def test_all_zero(self):
        assert resolve_pointer(BitString(np.zeros(9, dtype=np.uint8)), GameSpec(2, 9)) == 0

    def test_worked_example(self):
        bits = np.zeros(2000, dtype=np.uint8)
        bits[:1729] = 1
        assert resolve_pointer(BitString(bits), GameSpec(2, 2000)) == 1

    def test_full_revolution(self):
        assert resolve_pointer(BitString(np.ones(8, dtype=np.uint8)), GameSpec(4, 8)) == 0

    def test_agrees_with_counter(self, rng):
        for n in (2, 3, 16):
            spec = GameSpec(n, 300)
            for _ in range(200):
                s = generate_string(spec, rng)
                assert resolve_pointer(s, spec) == run_classical_counter(s, ProblemSpec(n, 300))[0]


class TestSettle:
    def test_non_critical_wins(self):
        spec = GameSpec(2, 10)
        assert settle(1, 0, spec).won and settle(1, 2, spec).won

    def test_landing_on_bet_loses(self):
        r = settle(0, 0, GameSpec(2, 10))
        assert not r.won and r.critical

    def test_bet_domain(self):
        with pytest.raises(InvalidArgumentError):
            settle(0, 1, GameSpec(2, 10))

    def test_result_invariant(self):
        with pytest.raises(InvalidArgumentError):
            GameResult(pointer=1, bet=0, won=False, critical=False)


class TestPlay:
    @pytest.mark.parametrize("scheme", ["single-qubit", "tmr", "ghz"])
    def test_noiseless_always_wins(self, scheme, rng):
        spec = GameSpec(3, 120)
        assert all(play(spec, NOISELESS, scheme, rng).won for _ in range(300))

    @pytest.mark.parametrize("n,N", [(2, 10 ** 3), (16, 10 ** 4)])
    def test_noiseless_never_loses(self, n, N):
        stats = win_rate(GameSpec(n, N), NOISELESS, "single-qubit", 10 ** 4, master_seed=n)
        assert stats.win_rate == 1.0 and stats.wins == 10 ** 4

    def test_coin_player(self):
        stats = win_rate(GameSpec(2, 30), NOISELESS, COIN, 20000, master_seed=4)
        c = stats.critical
        assert abs(stats.conditional_loss_rate - 0.5) <= 3 * math.sqrt(0.25 / c)

    def test_noisy_matches_prediction(self):
        stats = win_rate(GameSpec(2, 60), NoiseModel(phi0=0.04), "single-qubit", 20000, master_seed=7)
        p = stats.predicted_conditional_loss
        assert abs(stats.conditional_loss_rate - p) <= 3 * math.sqrt(p * (1 - p) / stats.critical)

    def test_loss_decomposition(self):
        stats = win_rate(GameSpec(2, 60), NoiseModel(phi0=0.04), "tmr", 20000, master_seed=8)
        assert stats.loss_rate == pytest.approx(stats.critical_fraction * stats.conditional_loss_rate, abs=1e-15)

    def test_loss_rate_from_binomial_weights(self):
        """Unconditional loss = sum over critical weights of P(weight) * P(error | weight)."""
        from qubit_remainder.noise import predicted_error_prob

        n, N, phi0, games = 2, 60, 0.04, 20000
        expected = sum(
            math.comb(N, k) / 2 ** N * predicted_error_prob(k * phi0 ** 2)
            for k in range(N + 1)
            if k % (2 * n) in (0, n)
        )
        stats = win_rate(GameSpec(n, N), NoiseModel(phi0=phi0), "single-qubit", games, master_seed=9)
        assert abs(stats.loss_rate - expected) <= 3 * math.sqrt(expected * (1 - expected) / games)

    def test_reproducible(self):
        spec = GameSpec(2, 50, seed=3)
        noise = NoiseModel(phi0=0.1)
        assert win_rate(spec, noise, "ghz", 500) == win_rate(spec, noise, "ghz", 500)
        assert play_game(spec, noise, "tmr", 17) == play_game(spec, noise, "tmr", 17)

    def test_rejects_unknown_scheme(self):
        with pytest.raises(InvalidArgumentError):
            win_rate(GameSpec(2, 10), NOISELESS, "oracle", 10)
