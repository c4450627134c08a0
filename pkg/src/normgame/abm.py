"""Closed-loop finite-population simulation.

Agents subscribe to strategies (the observation-independent default or a
norm). Every round they are paired at random; each pair draws its
observation pair from the current empirical action statistics of its
ordered strategy pair, plays its prescription only when that is rational
against the opponent's prescription under those statistics (the default mix
otherwise), and collects rewards. The realized action frequencies become
the next round's observation statistics, closing the loop. A second random
pairing drives norm adoption through noisy payoff comparison.

All randomness is drawn from generators derived from (seed, round, stream),
so runs are bit-reproducible regardless of how the per-pair work is
scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .games import RewardMatrix, chicken_reward
from .norms import (
    NashSolution,
    Norm,
    Policy,
    avg_reward,
    best_response_per_obs,
    mixed_nash_chicken,
)
from .payoff import Strategy, chicken_strategies
from .probkit import JointDist2, SignalParams, signal_dist

_STREAM_GAME_PAIRING = 0
_STREAM_OBSERVATIONS = 1
_STREAM_DEFAULT_ACTIONS = 2
_STREAM_IMITATION_PAIRING = 3
_STREAM_IMITATION_COINS = 4


def _rng(seed: int, round_index: int, stream: int) -> np.random.Generator:
    return np.random.default_rng((int(seed), int(round_index), int(stream)))


@dataclass(frozen=True)
class Population:
    """Per-agent strategy assignment over a fixed strategy set."""

    strategies: tuple[Strategy, ...]
    strategy_of: np.ndarray

    def __post_init__(self):
        arr = np.array(self.strategy_of, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("strategy_of must be a vector of strategy indices")
        if arr.size % 2 != 0:
            raise ValueError(f"agent count {arr.size} must be even")
        if arr.size and (arr.min() < 0 or arr.max() >= len(self.strategies)):
            raise ValueError("strategy index out of range")
        arr.setflags(write=False)
        object.__setattr__(self, "strategy_of", arr)

    @property
    def n_agents(self) -> int:
        return self.strategy_of.size

    @property
    def n_strategies(self) -> int:
        return len(self.strategies)

    def frequencies(self) -> np.ndarray:
        return np.bincount(self.strategy_of, minlength=self.n_strategies) / self.n_agents


@dataclass
class EstimateTable:
    """Empirical 2x2 action statistics per ordered strategy pair.

    ``joints[n, m]`` is the current estimate used as the observation
    distribution for (player n, opponent m) pairs; ``counts[n, m]`` the
    number of games behind the latest update (0 while still at the seed
    value). Pairs unobserved in a round carry the previous estimate.
    """

    joints: np.ndarray
    counts: np.ndarray

    @staticmethod
    def seeded(n_strategies: int, initial_joint: JointDist2) -> "EstimateTable":
        joints = np.tile(initial_joint.entries, (n_strategies, n_strategies, 1, 1))
        counts = np.zeros((n_strategies, n_strategies), dtype=np.int64)
        return EstimateTable(joints=joints, counts=counts)

    def copy(self) -> "EstimateTable":
        return EstimateTable(joints=self.joints.copy(), counts=self.counts.copy())


def pair_agents(pop: Population, seed: int, round_index: int = 0, stream: int = _STREAM_GAME_PAIRING) -> np.ndarray:
    """Uniform random perfect matching as an (N/2, 2) index array."""
    perm = _rng(seed, round_index, stream).permutation(pop.n_agents)
    return perm.reshape(-1, 2)


def empirical_joint(first_actions: np.ndarray, second_actions: np.ndarray) -> np.ndarray:
    """Average outer-product indicator of binary action pairs (0=stop, 1=go).

    Rows index the first agent's action, columns the second's.
    """
    a = np.asarray(first_actions, dtype=np.int64)
    b = np.asarray(second_actions, dtype=np.int64)
    if a.size == 0:
        raise ValueError("empirical joint of an empty pair set is undefined")
    if a.shape != b.shape:
        raise ValueError("action vectors must have equal length")
    counts = np.bincount(2 * a + b, minlength=4).reshape(2, 2)
    return counts / a.size


def _prescription_is_rational(
    pi: Policy, opp_policy: Policy, joint_entries: np.ndarray, reward: RewardMatrix
) -> bool:
    joint = JointDist2(joint_entries)
    return best_response_per_obs(opp_policy, joint, reward).contains(pi)


def conditional_play(
    norm: Norm | None,
    norm_opp: Norm | None,
    joint: JointDist2 | None,
    reward: RewardMatrix,
    nash: NashSolution,
) -> tuple[Policy, Policy]:
    """Policies actually played by a (norm, norm) pairing.

    Each side plays its prescription when that prescription is a
    per-observation best response to the opponent's prescription (the
    default mix for a default-strategy opponent) under the pair's current
    observation statistics; otherwise it plays the default mix. A missing
    estimate (``joint is None``) forces the default on both sides.
    """
    default = nash.policy()
    if joint is None:
        return default, default
    first_policy = norm.prescription if norm is not None else default
    second_policy = norm_opp.prescription if norm_opp is not None else default
    played_first = default
    if norm is not None and _prescription_is_rational(
        norm.prescription, second_policy, joint.entries, reward
    ):
        played_first = norm.prescription
    played_second = default
    if norm_opp is not None and _prescription_is_rational(
        norm_opp.prescription, first_policy, joint.entries.T, reward
    ):
        played_second = norm_opp.prescription
    return played_first, played_second


def effective_gamma(
    strategies: list[Strategy] | tuple[Strategy, ...],
    joint: JointDist2,
    reward: RewardMatrix,
    nash: NashSolution,
) -> np.ndarray:
    """Average-reward matrix under conditional play at fixed statistics.

    This is the payoff matrix the closed loop realizes in expectation when
    every ordered pair's estimate sits at ``joint``; it differs from the
    open-loop payoff matrix wherever a prescription is irrational against
    a specific opponent.
    """
    n = len(strategies)
    out = np.empty((n, n))
    for i, s_i in enumerate(strategies):
        for j, s_j in enumerate(strategies):
            pi, pj = conditional_play(s_i.norm, s_j.norm, joint, reward, nash)
            out[i, j] = avg_reward(pi, pj, joint, reward)
    return out


@dataclass(frozen=True)
class StepResult:
    pairs: np.ndarray
    observations: np.ndarray
    actions: np.ndarray
    payoffs: np.ndarray
    estimates: EstimateTable
    gamma: np.ndarray


def _delta_table(
    strategies: tuple[Strategy, ...],
    estimates: EstimateTable,
    reward: RewardMatrix,
    nash: NashSolution,
) -> np.ndarray:
    """delta[n, m]: strategy n plays its prescription against strategy m."""
    n = len(strategies)
    default = nash.policy()
    delta = np.zeros((n, n), dtype=bool)
    for i, s_i in enumerate(strategies):
        if s_i.norm is None:
            continue
        for j, s_j in enumerate(strategies):
            opp_policy = s_j.norm.prescription if s_j.norm is not None else default
            delta[i, j] = _prescription_is_rational(
                s_i.norm.prescription, opp_policy, estimates.joints[i, j], reward
            )
    return delta


def step(
    pop: Population,
    estimates: EstimateTable,
    reward: RewardMatrix,
    nash: NashSolution,
    seed: int,
    round_index: int,
) -> StepResult:
    """Play one round of games and refresh the empirical statistics.

    Pairs agents, samples each pair's observation pair from the estimate
    for its ordered strategy pair, realizes actions through conditional
    play, pays rewards, and replaces estimates for every strategy pair
    observed this round (unobserved pairs carry over). The recorded payoff
    matrix is the expectation of the reward under the refreshed estimates.
    """
    n_agents = pop.n_agents
    n_strat = pop.n_strategies
    pairs = pair_agents(pop, seed, round_index)
    first, second = pairs[:, 0], pairs[:, 1]
    t_first = pop.strategy_of[first]
    t_second = pop.strategy_of[second]

    # Observation pair per game, drawn from the pair-type estimate.
    flat = estimates.joints[t_first, t_second].reshape(-1, 4)
    cdf = np.cumsum(flat, axis=1)
    u = _rng(seed, round_index, _STREAM_OBSERVATIONS).random(pairs.shape[0])
    cell = (u[:, None] > cdf).sum(axis=1)
    np.clip(cell, 0, 3, out=cell)
    obs_first, obs_second = cell // 2, cell % 2

    delta = _delta_table(pop.strategies, estimates, reward, nash)
    prescribed = np.zeros((n_strat, 2), dtype=np.int64)
    for i, s in enumerate(pop.strategies):
        if s.norm is not None:
            prescribed[i] = [s.norm.prescription.action_of(0), s.norm.prescription.action_of(1)]

    # Default-mix draws for every agent; used only where delta says so.
    default_draw = (
        _rng(seed, round_index, _STREAM_DEFAULT_ACTIONS).random(n_agents) >= nash.p_stop
    ).astype(np.int64)
    act_first = np.where(
        delta[t_first, t_second], prescribed[t_first, obs_first], default_draw[first]
    )
    act_second = np.where(
        delta[t_second, t_first], prescribed[t_second, obs_second], default_draw[second]
    )

    payoffs = np.empty(n_agents)
    payoffs[first] = reward.entries[act_first, act_second]
    payoffs[second] = reward.entries[act_second, act_first]

    new_estimates = estimates.copy()
    # Each game feeds both orientations of its strategy pair, so the table
    # stays transpose-consistent and same-type estimates stay symmetric.
    pair_ids = np.concatenate([t_first * n_strat + t_second, t_second * n_strat + t_first])
    outcome = np.concatenate([2 * act_first + act_second, 2 * act_second + act_first])
    counts = np.bincount(pair_ids * 4 + outcome, minlength=n_strat * n_strat * 4)
    counts = counts.reshape(n_strat, n_strat, 2, 2)
    totals = counts.sum(axis=(2, 3))
    seen = totals > 0
    new_estimates.joints[seen] = counts[seen] / totals[seen][:, None, None]
    new_estimates.counts[seen] = totals[seen]

    gamma = np.einsum("ab,nmab->nm", reward.entries, new_estimates.joints)

    actions = np.empty(n_agents, dtype=np.int64)
    actions[first] = act_first
    actions[second] = act_second
    observations = np.empty(n_agents, dtype=np.int64)
    observations[first] = obs_first
    observations[second] = obs_second
    return StepResult(
        pairs=pairs,
        observations=observations,
        actions=actions,
        payoffs=payoffs,
        estimates=new_estimates,
        gamma=gamma,
    )


def _adoption_prob(payoff_gap: np.ndarray, beta: float) -> np.ndarray:
    """Logistic acceptance probability, stable for large and infinite beta."""
    if beta == 0.0:
        return np.full(payoff_gap.shape, 0.5)
    if np.isinf(beta):
        return np.where(payoff_gap > 0, 1.0, np.where(payoff_gap < 0, 0.0, 0.5))
    z = beta * payoff_gap
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def imitation_update(
    pop: Population,
    payoffs: np.ndarray,
    beta: float,
    seed: int,
    round_index: int,
) -> Population:
    """Norm adoption through pairwise noisy payoff comparison.

    Agents meet in a fresh random pairing; each adopts the partner's
    strategy with the logistic probability of the payoff gap in the
    partner's favor. The disadvantaged side therefore adopts with
    probability 1/(1+exp(-beta |gap|)), the advantaged side with the
    complement; beta=0 reduces to coin-flip adoption and beta=inf to
    deterministic imitation of the higher payoff.
    """
    if beta < 0:
        raise ValueError(f"selection strength beta={beta} must be >= 0")
    pairs = pair_agents(pop, seed, round_index, stream=_STREAM_IMITATION_PAIRING)
    first, second = pairs[:, 0], pairs[:, 1]
    gap = payoffs[second] - payoffs[first]
    coins = _rng(seed, round_index, _STREAM_IMITATION_COINS).random((pairs.shape[0], 2))
    adopt_first = coins[:, 0] < _adoption_prob(gap, beta)
    adopt_second = coins[:, 1] < _adoption_prob(-gap, beta)
    new_assignment = np.array(pop.strategy_of)
    old = pop.strategy_of
    new_assignment[first[adopt_first]] = old[second[adopt_first]]
    new_assignment[second[adopt_second]] = old[first[adopt_second]]
    return replace(pop, strategy_of=new_assignment)


@dataclass(frozen=True)
class RunConfig:
    """Closed-loop run parameters; ``initial_mix`` spans the strategy set."""

    n_agents: int = 1000
    rounds: int = 500
    beta: float = 1.0
    initial_mix: tuple[float, ...] = (0.0, 0.0, 1.0, 0.0)
    b0: float = 0.4
    g0: float = 0.0
    B: float = 3.0
    L: float = 0.5
    seed: int = 12345

    def __post_init__(self):
        if self.n_agents % 2 != 0:
            raise ValueError("agent count must be even")
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        mix = np.asarray(self.initial_mix, dtype=float)
        if mix.min() < 0 or abs(mix.sum() - 1.0) > 1e-9:
            raise ValueError("initial_mix must be a frequency vector")


@dataclass(frozen=True)
class RunResult:
    """Per-round frequencies, payoff matrices and estimate tables."""

    strategy_labels: tuple[str, ...]
    frequencies: np.ndarray  # (rounds + 1, S)
    gamma: np.ndarray  # (rounds, S, S)
    estimates: np.ndarray  # (rounds, S, S, 2, 2)
    final_population: Population


def mix_to_counts(mix: np.ndarray, n_agents: int) -> np.ndarray:
    """Deterministic largest-remainder apportionment of agents to strategies."""
    raw = np.asarray(mix, dtype=float) * n_agents
    counts = np.floor(raw).astype(np.int64)
    shortfall = n_agents - counts.sum()
    if shortfall:
        order = np.argsort(-(raw - counts), kind="stable")
        counts[order[:shortfall]] += 1
    return counts


def initial_population(
    strategies: tuple[Strategy, ...] | list[Strategy],
    mix: tuple[float, ...],
    n_agents: int,
) -> Population:
    counts = mix_to_counts(np.asarray(mix), n_agents)
    if len(counts) != len(strategies):
        raise ValueError("initial mix length must match strategy count")
    assignment = np.repeat(np.arange(len(strategies)), counts)
    return Population(strategies=tuple(strategies), strategy_of=assignment)


def run(config: RunConfig, strategies: list[Strategy] | None = None) -> RunResult:
    """Run the closed loop: game round then imitation, every round.

    Deterministic given the config seed. The default strategy set is the
    mixed default plus the three canonical norms (each described by its
    own prescription).
    """
    if strategies is None:
        strategies = canonical_norm_strategies(config.L, config.B)
    reward = chicken_reward(config.B, config.L)
    nash = mixed_nash_chicken(config.B, config.L)
    pop = initial_population(strategies, config.initial_mix, config.n_agents)
    estimates = EstimateTable.seeded(
        pop.n_strategies, signal_dist(SignalParams(b=config.b0, g=config.g0))
    )
    s = pop.n_strategies
    freqs = np.empty((config.rounds + 1, s))
    gammas = np.empty((config.rounds, s, s))
    joints = np.empty((config.rounds, s, s, 2, 2))
    freqs[0] = pop.frequencies()
    for t in range(config.rounds):
        result = step(pop, estimates, reward, nash, config.seed, t)
        estimates = result.estimates
        pop = imitation_update(pop, result.payoffs, config.beta, config.seed, t)
        freqs[t + 1] = pop.frequencies()
        gammas[t] = result.gamma
        joints[t] = estimates.joints
    return RunResult(
        strategy_labels=tuple(s.label for s in strategies),
        frequencies=freqs,
        gamma=gammas,
        estimates=joints,
        final_population=pop,
    )


def canonical_norm_strategies(L: float, B: float = 3.0) -> list[Strategy]:
    """Default closed-loop strategy set: the mixed default plus the three
    canonical prescriptions, each packaged as a self-describing norm."""
    from .norms import enumerate_norms

    base = chicken_strategies(L, B)
    by_bits = {}
    for nm in enumerate_norms(2, 2):
        key = (
            tuple(int(nm.prescription.action_of(o)) for o in range(2)),
            tuple(int(nm.description.action_of(o)) for o in range(2)),
        )
        by_bits[key] = nm
    out = [base[0]]
    for strat, bits in zip(base[1:], ((1, 0), (0, 1), (1, 1))):
        out.append(Strategy(strat.label, strat.policy, norm=by_bits[(bits, bits)]))
    return out
