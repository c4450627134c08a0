"""Opinion-similarity primitives and type-dependent rewards.

Agents carry private opinion vectors (deviations from the population
average). Pairs infer whether they are of the same type from binarized
opinion overlap, and perceive a reward matrix that depends on the inferred
type: like pairs play the anti-coordination game, unlike pairs a variant
whose sucker payoff is negative. A small two-population demonstration loop
couples two closed-loop estimate tables keyed by the inferred type and
reports per-round cooperation rates; it is a hook for experimentation, not
a claim about long-run population structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .games import RewardMatrix
from .norms import Policy, best_response_per_obs
from .probkit import JointDist2, SignalParams, signal_dist


@dataclass(frozen=True)
class PairType:
    """Binary like/unlike label; ``estimated`` marks inferred labels."""

    xi: int
    estimated: bool = True

    def __post_init__(self):
        if self.xi not in (0, 1):
            raise ValueError(f"pair type must be 0 or 1, got {self.xi}")


def _binarize(d: np.ndarray) -> np.ndarray:
    # step function with the 0 -> 0 convention
    return (np.asarray(d, dtype=float) > 0.0).astype(float)


def similarity(d: np.ndarray, d_opp: np.ndarray) -> float:
    """Normalized overlap of binarized opinions, in [0, 1]."""
    a = np.asarray(d, dtype=float)
    b = np.asarray(d_opp, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size < 1:
        raise ValueError("opinion vectors must be equal-length nonempty vectors")
    return float(_binarize(a) @ _binarize(b) / a.size)


def infer_type(s: float) -> PairType:
    """Threshold the similarity at 1/2 (the boundary itself maps to 0)."""
    if not (0.0 <= s <= 1.0):
        raise ValueError(f"similarity {s} outside [0, 1]")
    return PairType(xi=1 if s > 0.5 else 0)


def partisan_reward(xi: int, B: float, L: float) -> RewardMatrix:
    """Type-dependent rewards [[B, 2 xi - 1], [B + L, 0]].

    xi=1 recovers the anti-coordination matrix; xi=0 flips the sucker
    payoff to -1, making exploitation strictly dominant.
    """
    if xi not in (0, 1):
        raise ValueError(f"pair type must be 0 or 1, got {xi}")
    return RewardMatrix(np.array([[B, 2.0 * xi - 1.0], [B + L, 0.0]]))


def infer_type_partial(
    observed_component: float, own_component: float, prior: str
) -> PairType | None:
    """Single-component type inference; ``None`` means undecided.

    Under the ``non_overlapping`` prior any sign-deviating component
    settles the estimate at unlike (0); agreement leaves it undecided.
    The ``uninformative`` prior never decides from one component.
    """
    if prior == "non_overlapping":
        if _binarize(np.array([observed_component]))[0] != _binarize(
            np.array([own_component])
        )[0]:
            return PairType(xi=0)
        return None
    if prior == "uninformative":
        return None
    raise ValueError(f"unknown prior {prior!r}")


def _stop_prob_of_best_mix(reward: RewardMatrix) -> float:
    """Stop probability of the symmetric equilibrium of a 2x2 game.

    Anti-coordination games (T > B, S > P) get the indifference mix; when
    exploitation dominates the mix degenerates to always-go, and when
    cooperation dominates to always-stop.
    """
    greed = reward.T - reward.B
    fear = reward.P - reward.S
    if greed > 0 and fear >= 0:
        return 0.0
    if greed <= 0 and fear <= 0:
        return 1.0
    return (reward.S - reward.P) / ((reward.S - reward.P) + (reward.T - reward.B))


@dataclass(frozen=True)
class DemoConfig:
    """Two seeded opinion groups playing signal-conditioned games."""

    n_per_group: int = 100
    opinion_dim: int = 8
    rounds: int = 200
    B: float = 3.0
    L: float = 0.5
    b0: float = 0.4
    seed: int = 12345
    inference: str = "full"  # "full" | "non_overlapping" | "uninformative"


@dataclass(frozen=True)
class DemoRound:
    round_index: int
    within_coop: float
    cross_coop: float
    n_within: int
    n_cross: int


def demo_run(config: DemoConfig) -> list[DemoRound]:
    """Couple two estimate loops through inferred pair types.

    Every agent follows the signal-following norm. Each round pairs all
    agents; a pair infers its type (full-similarity threshold, or a
    single-component rule with the configured prior where undecided
    defaults to like), then plays under the estimate table and reward
    keyed by the inferred type. Reported cooperation rates are the stop
    fractions among true-within and true-cross pairs.
    """
    rng_setup = np.random.default_rng((config.seed, 0))
    n_total = 2 * config.n_per_group
    opinions = np.concatenate(
        [
            rng_setup.normal(1.0, 0.5, size=(config.n_per_group, config.opinion_dim)),
            rng_setup.normal(-1.0, 0.5, size=(config.n_per_group, config.opinion_dim)),
        ]
    )
    group = np.repeat([0, 1], config.n_per_group)
    rewards = {xi: partisan_reward(xi, config.B, config.L) for xi in (0, 1)}
    defaults = {
        xi: Policy.constant(
            np.array([_stop_prob_of_best_mix(rewards[xi]), 1.0 - _stop_prob_of_best_mix(rewards[xi])]),
            2,
        )
        for xi in (0, 1)
    }
    follower = Policy.from_actions((0, 1), 2)
    joints = {xi: signal_dist(SignalParams(b=config.b0, g=0.0)).entries.copy() for xi in (0, 1)}

    out = []
    for t in range(config.rounds):
        rng = np.random.default_rng((config.seed, 1, t))
        order = rng.permutation(n_total).reshape(-1, 2)
        realized = {0: [], 1: []}
        stops_within = stops_cross = 0
        count_within = count_cross = 0
        for i, j in order:
            if config.inference == "full":
                xi = infer_type(similarity(opinions[i], opinions[j])).xi
            else:
                k = rng.integers(config.opinion_dim)
                est = infer_type_partial(opinions[j][k], opinions[i][k], config.inference)
                xi = 1 if est is None else est.xi
            reward = rewards[xi]
            joint = JointDist2(joints[xi])
            rational = best_response_per_obs(follower, joint, reward).contains(follower)
            # observation pair from the type-keyed estimate
            cell = int((rng.random() > np.cumsum(joints[xi].ravel())).sum())
            o_i, o_j = divmod(min(cell, 3), 2)
            if rational:
                a_i, a_j = (0, 1)[o_i], (0, 1)[o_j]
            else:
                p_stop = defaults[xi].entries[0, 0]
                a_i = int(rng.random() >= p_stop)
                a_j = int(rng.random() >= p_stop)
            realized[xi].append((a_i, a_j))
            same = group[i] == group[j]
            stops = (a_i == 0) + (a_j == 0)
            if same:
                stops_within += stops
                count_within += 2
            else:
                stops_cross += stops
                count_cross += 2
        for xi in (0, 1):
            if realized[xi]:
                acts = np.array(realized[xi])
                counts = np.bincount(2 * acts[:, 0] + acts[:, 1], minlength=4).reshape(2, 2)
                sym = (counts + counts.T) / (2.0 * len(acts))
                joints[xi] = sym
        out.append(
            DemoRound(
                round_index=t,
                within_coop=stops_within / count_within if count_within else np.nan,
                cross_coop=stops_cross / count_cross if count_cross else np.nan,
                n_within=count_within // 2,
                n_cross=count_cross // 2,
            )
        )
    return out
