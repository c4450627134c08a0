import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normgame.probkit import (
    CondDist,
    JointDist2,
    Marginal,
    SignalParams,
    compose_conditionals,
    correlation_form,
    correlation_of,
    env_from_partitions,
    expectation,
    is_independent,
    marginals,
    mutual_information,
    signal_dist,
)

from helpers import brute_expectation, brute_mutual_information, random_joint

UNIFORM = [[0.25, 0.25], [0.25, 0.25]]


def joint(entries, **kw):
    return JointDist2(np.array(entries, dtype=float), **kw)


class TestInvariants:
    def test_negative_entry_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            joint([[0.6, -0.1], [0.25, 0.25]])

    def test_bad_total_rejected(self):
        with pytest.raises(ValueError, match="sum"):
            joint([[0.5, 0.5], [0.5, 0.5]])

    def test_symmetry_flag_is_exact(self):
        with pytest.raises(ValueError, match="symmetry"):
            joint([[0.5, 0.2], [0.3, 0.0]], symmetric=True)

    def test_conditional_columns_must_normalize(self):
        with pytest.raises(ValueError, match="column"):
            CondDist(np.array([[0.5, 1.0], [0.4, 0.0]]))

    def test_signal_params_domain(self):
        with pytest.raises(ValueError):
            SignalParams(b=0.2, g=0.4)
        with pytest.raises(ValueError):
            SignalParams(b=1.2, g=0.0)
        # the antisymmetric corner is admissible
        SignalParams(b=0.0, g=0.0)


class TestMarginals:
    def test_uniform(self):
        r, c = marginals(joint(UNIFORM))
        np.testing.assert_allclose(r.probs, [0.5, 0.5])
        np.testing.assert_allclose(c.probs, [0.5, 0.5])

    def test_signal_half(self):
        r, c = marginals(signal_dist(SignalParams(0.5, 0.0)))
        np.testing.assert_allclose(r.probs, [0.75, 0.25], atol=1e-15)
        np.testing.assert_allclose(c.probs, [0.75, 0.25], atol=1e-15)

    def test_point_mass(self):
        r, c = marginals(joint([[1.0, 0.0], [0.0, 0.0]]))
        np.testing.assert_array_equal(r.probs, [1.0, 0.0])
        np.testing.assert_array_equal(c.probs, [1.0, 0.0])


class TestExpectation:
    def test_reward_example(self):
        f = np.array([[3.0, 1.0], [3.5, 0.0]])
        assert expectation(f, joint([[0.5, 0.25], [0.25, 0.0]])) == pytest.approx(2.625, abs=1e-15)

    def test_all_ones_is_normalization(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            j = joint(random_joint(rng))
            assert expectation(np.ones((2, 2)), j) == pytest.approx(1.0, abs=1e-12)

    def test_zero_matrix(self):
        assert expectation(np.zeros((2, 2)), joint(UNIFORM)) == 0.0

    def test_matches_brute_force_exactly(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            j = joint(random_joint(rng))
            f = rng.normal(size=(2, 2))
            assert expectation(f, j) == brute_expectation(f, j)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="shape"):
            expectation(np.ones((3, 3)), joint(UNIFORM))


class TestCompose:
    def test_identity_channels_preserve_symmetric_joint(self):
        ident = CondDist(np.eye(2))
        j = signal_dist(SignalParams(0.5, 0.0))
        out = compose_conditionals(ident, j, ident)
        np.testing.assert_allclose(out.entries, j.entries, atol=1e-15)

    def test_signal_follower_reproduces_signal_joint(self):
        follow = CondDist(np.eye(2))
        for b, g in ((0.5, 0.0), (0.7, 0.1), (1.0, 0.5)):
            j = signal_dist(SignalParams(b, g))
            out = compose_conditionals(follow, j, follow)
            np.testing.assert_allclose(out.entries, j.entries, atol=1e-15)

    def test_swap_channels_permute(self):
        swap = CondDist(np.array([[0.0, 1.0], [1.0, 0.0]]))
        out = compose_conditionals(swap, joint([[0.5, 0.25], [0.25, 0.0]]), swap)
        np.testing.assert_allclose(out.entries, [[0.0, 0.25], [0.25, 0.5]], atol=1e-15)


class TestIndependence:
    def test_uniform_independent(self):
        assert is_independent(joint(UNIFORM))

    def test_diagonal_correlated(self):
        assert not is_independent(joint([[0.5, 0.0], [0.0, 0.5]]))

    def test_signal_quarter_is_uniform(self):
        j = signal_dist(SignalParams(0.5, 0.25))
        np.testing.assert_allclose(j.entries, UNIFORM, atol=1e-15)
        assert is_independent(j)


class TestCorrelationForm:
    def test_rho_zero_outer_product(self):
        p = Marginal(np.array([0.3, 0.7]))
        q = Marginal(np.array([0.6, 0.4]))
        out = correlation_form(p, q, 0.0)
        np.testing.assert_allclose(out.entries, np.outer(p.probs, q.probs), atol=1e-15)

    def test_rho_one_diagonal(self):
        p = Marginal(np.array([0.5, 0.5]))
        out = correlation_form(p, p, 1.0)
        np.testing.assert_allclose(out.entries, [[0.5, 0.0], [0.0, 0.5]], atol=1e-15)

    def test_rho_minus_one_antidiagonal(self):
        p = Marginal(np.array([0.5, 0.5]))
        out = correlation_form(p, p, -1.0)
        np.testing.assert_allclose(out.entries, [[0.0, 0.5], [0.5, 0.0]], atol=1e-15)

    def test_incompatible_correlation_rejected(self):
        p = Marginal(np.array([0.9, 0.1]))
        with pytest.raises(ValueError, match="incompatible"):
            correlation_form(p, p, -1.0)

    @given(st.floats(0.05, 0.95), st.floats(0.0, 1.0))
    @settings(max_examples=60, deadline=None)
    def test_round_trip_through_correlation(self, b, g_frac):
        g = min(b, 1.0) * g_frac
        j = signal_dist(SignalParams(b, g))
        r, c = marginals(j)
        if min(r.probs.min(), c.probs.min()) < 1e-6:
            return
        rebuilt = correlation_form(r, c, correlation_of(j))
        np.testing.assert_allclose(rebuilt.entries, j.entries, atol=1e-12)

    def test_round_trip_random_joints(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            j = joint(random_joint(rng))
            r, c = marginals(j)
            rebuilt = correlation_form(r, c, correlation_of(j))
            np.testing.assert_allclose(rebuilt.entries, j.entries, atol=1e-12)


class TestSignalDist:
    def test_pure_symmetric(self):
        np.testing.assert_allclose(
            signal_dist(SignalParams(1.0, 0.5)).entries, [[0.5, 0.0], [0.0, 0.5]], atol=1e-15
        )

    def test_pure_antisymmetric(self):
        np.testing.assert_allclose(
            signal_dist(SignalParams(0.0, 0.0)).entries, [[0.0, 0.5], [0.5, 0.0]], atol=1e-15
        )

    def test_half_zero(self):
        np.testing.assert_allclose(
            signal_dist(SignalParams(0.5, 0.0)).entries, [[0.5, 0.25], [0.25, 0.0]], atol=1e-15
        )

    def test_exact_symmetry(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            b = rng.random()
            g = rng.random() * b
            m = signal_dist(SignalParams(b, g)).entries
            assert np.array_equal(m, m.T)


class TestMutualInformation:
    def test_perfect_correlation_one_bit(self):
        assert mutual_information(joint([[0.5, 0.0], [0.0, 0.5]])) == pytest.approx(1.0, abs=1e-12)

    def test_uniform_zero(self):
        assert mutual_information(joint(UNIFORM)) == pytest.approx(0.0, abs=1e-12)

    def test_signal_half_value(self):
        # 2 H(3/4) - H(joint) with H(joint) = 1.5 bits
        expected = 0.12255624891826566
        assert mutual_information(signal_dist(SignalParams(0.5, 0.0))) == pytest.approx(
            expected, abs=1e-12
        )

    def test_matches_brute_force(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            j = joint(random_joint(rng))
            assert mutual_information(j) == pytest.approx(brute_mutual_information(j), abs=1e-12)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_nonnegative_and_zero_iff_independent(self, seed):
        j = joint(random_joint(np.random.default_rng(seed)))
        mi = mutual_information(j)
        assert mi >= 0.0
        if is_independent(j, tol=1e-12):
            assert mi == pytest.approx(0.0, abs=1e-9)
        if mi < 1e-13:
            assert is_independent(j, tol=1e-5)


class TestEnvFromPartitions:
    PART_FIRST = CondDist(np.array([[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0]]))
    PART_SECOND = CondDist(np.array([[1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0]]))

    def test_four_state_partition(self):
        p = Marginal(np.array([0.4, 0.3, 0.2, 0.1]))
        out = env_from_partitions(self.PART_FIRST, self.PART_SECOND, p)
        np.testing.assert_allclose(out.entries, [[0.4, 0.3], [0.2, 0.1]], atol=1e-15)

    def test_identity_partitions(self):
        ident = CondDist(np.eye(2))
        out = env_from_partitions(ident, ident, Marginal(np.array([0.5, 0.5])))
        np.testing.assert_allclose(out.entries, [[0.5, 0.0], [0.0, 0.5]], atol=1e-15)

    def test_reproduces_signal_instance(self):
        p = Marginal(np.array([0.5, 0.25, 0.25, 0.0]))
        out = env_from_partitions(self.PART_FIRST, self.PART_SECOND, p)
        np.testing.assert_allclose(
            out.entries, signal_dist(SignalParams(0.5, 0.0)).entries, atol=1e-15
        )

    def test_strict_mode_rejects_stochastic_channels(self):
        soft = CondDist(np.array([[0.9, 0.8, 0.1, 0.0], [0.1, 0.2, 0.9, 1.0]]))
        p = Marginal(np.full(4, 0.25))
        with pytest.raises(ValueError, match="partition"):
            env_from_partitions(soft, self.PART_SECOND, p)
        out = env_from_partitions(soft, self.PART_SECOND, p, strict_partition=False)
        assert abs(out.entries.sum() - 1.0) < 1e-12
