import math

import pytest

from coinduel import SimConfig, SimResult, dp_distribution, simulate_game


def run(n, trials, seed, **kw):
    return simulate_game(SimConfig(n=n, trials=trials, seed=seed, **kw))


class TestBasics:
    def test_single_flip_always_ties(self):
        r = run(1, 500, 11)
        assert r.ties == 500
        assert (r.pA, r.pB, r.pTie) == (0.0, 0.0, 1.0)

    def test_counts_partition_trials(self):
        r = run(13, 9999, 3)
        assert r.wins_a + r.wins_b + r.ties == r.trials == 9999
        assert r.pA + r.pB + r.pTie == pytest.approx(1.0, abs=1e-12)

    def test_result_echoes_config(self):
        r = run(7, 100, 5, p=0.3)
        assert (r.n, r.p, r.trials, r.seed) == (7, 0.3, 100, 5)


class TestReproducibility:
    def test_same_seed_same_result(self):
        assert run(50, 20000, 99) == run(50, 20000, 99)

    def test_different_seeds_differ(self):
        assert run(50, 20000, 1) != run(50, 20000, 2)

    def test_batch_size_changes_stream(self):
        # substreams are keyed by batch index, so the partition matters;
        # this is part of the contract, not an accident
        a = run(20, 10000, 7, batch_size=4096)
        b = run(20, 10000, 7, batch_size=1000)
        assert a != b


class TestCalibration:
    def test_n3_within_four_se(self):
        exact = dp_distribution(3)
        r = run(3, 10**5, 2718)
        assert abs(r.pA - float(exact.pA)) <= 4 * r.stderr_a
        assert abs(r.pB - float(exact.pB)) <= 4 * r.stderr_b
        assert abs(r.pTie - float(exact.pTie)) <= 4 * r.stderr_tie

    def test_n4_tie_rate(self):
        r = run(4, 10**5, 31415)
        assert abs(r.pTie - 0.375) <= 4 * r.stderr_tie

    def test_biased_coin_matches_dp(self):
        from fractions import Fraction

        exact = dp_distribution(12, Fraction(7, 10))
        r = run(12, 10**5, 161803, p=0.7)
        assert abs(r.pA - float(exact.pA)) <= 4 * r.stderr_a
        assert abs(r.pB - float(exact.pB)) <= 4 * r.stderr_b

    def test_stderr_formula(self):
        r = run(6, 4000, 17)
        q = r.wins_a / r.trials
        assert r.stderr_a == pytest.approx(math.sqrt(q * (1 - q) / r.trials))


class TestValidation:
    @pytest.mark.parametrize(
        "kw",
        [
            dict(n=0, trials=10, seed=1),
            dict(n=5, trials=0, seed=1),
            dict(n=5, trials=10, seed=1, p=0.0),
            dict(n=5, trials=10, seed=1, p=1.0),
            dict(n=5, trials=10, seed=1, batch_size=0),
        ],
    )
    def test_bad_config(self, kw):
        with pytest.raises(ValueError):
            SimConfig(**kw)

    def test_result_is_frozen(self):
        r = run(3, 10, 1)
        with pytest.raises(AttributeError):
            r.pA = 0.5
