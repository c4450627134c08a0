"""Norm payoff matrices: numeric construction and the chicken closed form.

The payoff matrix collects average rewards of every strategy against every
other under a fixed joint signal distribution. Strategies are either bare
policies (the observation-independent mixed-equilibrium default, or a
deterministic prescription) or full norms; a norm that is not rational
against its own description is replaced by the default policy before
evaluation, and the substitution is recorded so the matrix provenance stays
auditable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .games import RewardMatrix, chicken_reward
from .norms import (
    ALWAYS_GO,
    ANTI_SIGNAL,
    SIGNAL_FOLLOWER,
    NashSolution,
    Norm,
    Policy,
    avg_reward,
    is_rational,
    mixed_nash_chicken,
)
from .probkit import JointDist2, signal_dist, SignalParams

CHICKEN_LABELS = ("nash", "anti-signal", "signal-follow", "always-go")


@dataclass(frozen=True)
class Strategy:
    """A labelled competitor in the payoff matrix.

    ``norm`` is attached when the policy is a norm's prescription; only
    strategies with a norm attached are eligible for default substitution.
    """

    label: str
    policy: Policy
    norm: Norm | None = None


@dataclass(frozen=True)
class PayoffMatrix:
    """Square matrix of average rewards between strategies.

    ``substitutions[i]`` marks strategies whose norm was null under the
    evaluation distribution and therefore played the default policy.
    """

    entries: np.ndarray
    strategy_labels: tuple[str, ...]
    substitutions: tuple[bool, ...] = ()

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        n = len(self.strategy_labels)
        if m.shape != (n, n):
            raise ValueError(f"payoff matrix shape {m.shape} != ({n}, {n})")
        if not np.isfinite(m).all():
            raise ValueError("payoff entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        if not self.substitutions:
            object.__setattr__(self, "substitutions", tuple(False for _ in range(n)))
        elif len(self.substitutions) != n:
            raise ValueError("substitution flags must match strategy count")

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def chicken_strategies(L: float, B: float = 3.0) -> list[Strategy]:
    """Default strategy set: the mixed-equilibrium policy plus the three
    distinct non-always-stop prescriptions, in the canonical order."""
    nash = mixed_nash_chicken(B, L)
    return [
        Strategy(CHICKEN_LABELS[0], nash.policy()),
        Strategy(CHICKEN_LABELS[1], ANTI_SIGNAL),
        Strategy(CHICKEN_LABELS[2], SIGNAL_FOLLOWER),
        Strategy(CHICKEN_LABELS[3], ALWAYS_GO),
    ]


def build_gamma(
    strategies: list[Strategy],
    joint: JointDist2,
    reward: RewardMatrix,
    nash: NashSolution,
) -> PayoffMatrix:
    """Average-reward matrix over a strategy list.

    Strategy i's row holds its reward against each column opponent. A
    strategy carrying a norm that is null under (joint, reward) is replaced
    by the observation-independent default policy before any evaluation;
    the flags in ``substitutions`` record which rows/columns were affected.
    """
    default = nash.policy(n_obs=joint.k)
    played: list[Policy] = []
    substituted: list[bool] = []
    for s in strategies:
        if s.norm is not None and not is_rational(s.norm, joint, reward):
            played.append(default)
            substituted.append(True)
        else:
            played.append(s.policy)
            substituted.append(False)
    n = len(strategies)
    entries = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            entries[i, j] = avg_reward(played[i], played[j], joint, reward)
    return PayoffMatrix(
        entries=entries,
        strategy_labels=tuple(s.label for s in strategies),
        substitutions=tuple(substituted),
    )


def build_chicken_gamma(b: float, L: float, B: float = 3.0, g: float = 0.0) -> PayoffMatrix:
    """Numeric 4x4 payoff matrix for the chicken family at (b, L).

    Strategies are bare policies (no norms attached), so no default
    substitution can occur and the result is directly comparable with
    :func:`chicken_gamma_closed_form`.
    """
    joint = signal_dist(SignalParams(b=b, g=g))
    reward = chicken_reward(B, L)
    nash = mixed_nash_chicken(B, L)
    return build_gamma(chicken_strategies(L, B), joint, reward, nash)


def chicken_gamma_closed_form(b: float, L: float) -> PayoffMatrix:
    """Closed-form 4x4 payoff matrix for B=3, g=0.

    Rows and columns are ordered (mixed default, anti-signal,
    signal-follow, always-go); the column against the mixed default is the
    constant (L+3)/(L+1) because that mix equalizes all replies.
    """
    q = L * (L + 3.0) + 3.0
    col0 = (L + 3.0) / (L + 1.0)
    entries = np.array(
        [
            [
                col0,
                (b - (b - 1.0) * q + 1.0) / (2.0 * (L + 1.0)),
                (-b + (b + 1.0) * q + 1.0) / (2.0 * (L + 1.0)),
                1.0 / (L + 1.0),
            ],
            [
                col0,
                -b / 2.0 - (L + 3.0) * (b - 1.0) / 2.0 + 0.5,
                b * (L + 1.5) + 1.5,
                0.5 - b / 2.0,
            ],
            [
                col0,
                1.5 - b / 2.0,
                2.5 * b - (L + 3.0) * (b - 1.0) / 2.0 + 0.5,
                b / 2.0 + 0.5,
            ],
            [
                col0,
                -(L + 3.0) * (b - 1.0) / 2.0,
                (L + 3.0) * (b + 1.0) / 2.0,
                0.0,
            ],
        ]
    )
    return PayoffMatrix(entries=entries, strategy_labels=CHICKEN_LABELS)
