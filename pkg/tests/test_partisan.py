import numpy as np
import pytest

from normgame.games import check_dilemma_conditions, chicken_reward, classify_dilemma, DilemmaClass
from normgame.partisan import (
    DemoConfig,
    PairType,
    demo_run,
    infer_type,
    infer_type_partial,
    partisan_reward,
    similarity,
)


class TestSimilarity:
    def test_identical_positive_vectors(self):
        d = np.array([0.5, 1.2, 0.1])
        assert similarity(d, d) == 1.0

    def test_sign_opposite_vectors(self):
        d = np.array([1.0, 2.0, 0.5, 0.1])
        assert similarity(d, -d) == 0.0

    def test_quarter_overlap(self):
        a = np.array([1.0, 1.0, -1.0, -1.0])
        b = np.array([1.0, -1.0, -1.0, 1.0])
        assert similarity(a, b) == 0.25

    def test_symmetric(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            a, b = rng.normal(size=8), rng.normal(size=8)
            assert similarity(a, b) == similarity(b, a)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            similarity(np.ones(3), np.ones(4))

    def test_zero_components_count_as_negative(self):
        # step convention: 0 maps to 0
        assert similarity(np.zeros(4), np.zeros(4)) == 0.0


class TestInferType:
    def test_full_similarity(self):
        assert infer_type(1.0).xi == 1

    def test_below_threshold(self):
        assert infer_type(0.25).xi == 0

    def test_boundary_maps_to_unlike(self):
        assert infer_type(0.5).xi == 0

    def test_domain(self):
        with pytest.raises(ValueError):
            infer_type(1.5)

    def test_self_similarity_classification(self):
        mostly_positive = np.array([1.0, 2.0, 3.0, -1.0, 0.5])
        assert infer_type(similarity(mostly_positive, mostly_positive)).xi == 1
        all_negative = -np.ones(5)
        assert infer_type(similarity(all_negative, all_negative)).xi == 0


class TestPartisanReward:
    def test_like_pairs_recover_chicken(self):
        np.testing.assert_array_equal(
            partisan_reward(1, 3.0, 0.5).entries, chicken_reward(3.0, 0.5).entries
        )

    def test_unlike_pairs_flip_sucker_payoff(self):
        np.testing.assert_array_equal(
            partisan_reward(0, 3.0, 0.5).entries, [[3.0, -1.0], [3.5, 0.0]]
        )

    def test_unlike_game_has_fear(self):
        flags = check_dilemma_conditions(partisan_reward(0, 3.0, 0.5))
        assert flags.fear and flags.greed
        assert classify_dilemma(partisan_reward(0, 3.0, 0.5)) is DilemmaClass.PRISONERS_DILEMMA

    def test_xi_domain(self):
        with pytest.raises(ValueError):
            partisan_reward(2, 3.0, 0.5)


class TestPartialInference:
    def test_deviating_component_settles_unlike(self):
        out = infer_type_partial(-0.5, 0.7, "non_overlapping")
        assert out is not None and out.xi == 0

    def test_agreeing_component_undecided(self):
        assert infer_type_partial(0.5, 0.7, "non_overlapping") is None

    def test_uninformative_prior_never_decides(self):
        assert infer_type_partial(-0.5, 0.7, "uninformative") is None
        assert infer_type_partial(0.5, 0.7, "uninformative") is None

    def test_unknown_prior(self):
        with pytest.raises(ValueError):
            infer_type_partial(0.1, 0.2, "strong")


class TestPairType:
    def test_binary_domain(self):
        with pytest.raises(ValueError):
            PairType(xi=2)


class TestDemo:
    def test_deterministic(self):
        config = DemoConfig(n_per_group=20, rounds=20, seed=5)
        a = demo_run(config)
        b = demo_run(config)
        assert [(r.within_coop, r.cross_coop) for r in a] == [
            (r.within_coop, r.cross_coop) for r in b
        ]

    def test_cross_group_cooperation_collapses(self):
        config = DemoConfig(n_per_group=60, rounds=60, seed=2)
        rows = demo_run(config)
        late = rows[-15:]
        cross = np.nanmean([r.cross_coop for r in late])
        within = np.nanmean([r.within_coop for r in late])
        # unlike pairs play the dominant-exploitation game: cooperation dies
        assert cross <= 0.05
        assert within > cross

    def test_partial_inference_mode_runs(self):
        config = DemoConfig(n_per_group=20, rounds=10, seed=3, inference="non_overlapping")
        rows = demo_run(config)
        assert len(rows) == 10
        assert all(0 <= r.n_within and 0 <= r.n_cross for r in rows)
