import numpy as np
import pytest

from normgame.games import (
    DilemmaClass,
    RewardMatrix,
    check_dilemma_conditions,
    chicken_reward,
    classify_dilemma,
    pd_reward,
)


def reward(entries):
    return RewardMatrix(np.array(entries, dtype=float))


class TestConditions:
    def test_chicken_instance(self):
        f = check_dilemma_conditions(chicken_reward(3.0, 0.5))
        assert (f.c1, f.c2, f.c3, f.greed, f.fear) == (True, True, True, True, False)

    def test_all_zero(self):
        f = check_dilemma_conditions(reward([[0, 0], [0, 0]]))
        assert not any((f.c1, f.c2, f.c3, f.greed, f.fear))

    def test_harmonious_ordering(self):
        f = check_dilemma_conditions(reward([[3, 1], [2, 0]]))
        assert not f.greed and not f.fear
        assert f.c1 and f.c2 and f.c3


class TestClassification:
    @pytest.mark.parametrize(
        "entries,expected",
        [
            ([[3, 1], [3.5, 0]], DilemmaClass.CHICKEN),
            ([[3, -1], [2, 0]], DilemmaClass.STAG_HUNT),
            ([[3, -1], [4, 0]], DilemmaClass.PRISONERS_DILEMMA),
            ([[3, 1], [2, 0]], DilemmaClass.NO_DILEMMA),
            ([[0, 1], [2, 3]], DilemmaClass.NOT_A_SOCIAL_DILEMMA),
        ],
    )
    def test_families(self, entries, expected):
        assert classify_dilemma(reward(entries)) is expected

    def test_tie_flagged(self):
        with pytest.warns(UserWarning, match="tie"):
            out = classify_dilemma(reward([[3, 1], [3, 0]]))
        assert out is DilemmaClass.NOT_A_SOCIAL_DILEMMA


class TestChickenReward:
    def test_canonical_instance(self):
        np.testing.assert_array_equal(chicken_reward(3.0, 0.5).entries, [[3, 1], [3.5, 0]])

    def test_boundary_warns(self):
        with pytest.warns(UserWarning, match="overwhelm"):
            r = chicken_reward(3.0, 2.0)
        np.testing.assert_array_equal(r.entries, [[3, 1], [5, 0]])

    def test_small_instance(self):
        np.testing.assert_array_equal(chicken_reward(2.0, 0.1).entries, [[2, 1], [2.1, 0]])

    @pytest.mark.parametrize("B,L", [(1.0, 0.5), (0.5, 0.5), (3.0, 0.0), (3.0, -1.0)])
    def test_domain_errors(self, B, L):
        with pytest.raises(ValueError):
            chicken_reward(B, L)

    def test_normalization_is_definitional(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            B = 1.0 + rng.random() * 4
            L = rng.random() * (B - 1.0) * 0.99 + 1e-6
            r = chicken_reward(B, L)
            assert r.S == 1.0 and r.P == 0.0

    def test_always_chicken_inside_domain(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            B = 1.0 + rng.random() * 4
            L = rng.uniform(1e-3, (B - 1.0) * 0.999)
            assert classify_dilemma(chicken_reward(B, L)) is DilemmaClass.CHICKEN


class TestPdReward:
    def test_column_swap_of_chicken(self):
        np.testing.assert_array_equal(pd_reward(3.0, 0.5).entries, [[3, 0], [3.5, 1]])

    def test_classifies_as_pd(self):
        assert classify_dilemma(pd_reward(3.0, 0.5)) is DilemmaClass.PRISONERS_DILEMMA

    def test_direct_substitution(self):
        np.testing.assert_allclose(pd_reward(2.0, 1.9).entries, [[2, 0], [3.9, 1]])

    def test_domain_error(self):
        with pytest.raises(ValueError):
            pd_reward(3.0, 3.0)
