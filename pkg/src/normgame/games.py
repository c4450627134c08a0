"""Two-player symmetric matrix games and social-dilemma classification.

Reward matrices follow the [[B, S], [T, P]] layout: rows are the player's
action (cooperate first), columns the opponent's. The five dilemma
conditions and the greed/fear taxonomy sort games into the chicken,
stag-hunt and prisoner's-dilemma families.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np


class DilemmaClass(Enum):
    NO_DILEMMA = "no_dilemma"
    CHICKEN = "chicken"
    STAG_HUNT = "stag_hunt"
    PRISONERS_DILEMMA = "prisoners_dilemma"
    NOT_A_SOCIAL_DILEMMA = "not_a_social_dilemma"


@dataclass(frozen=True)
class RewardMatrix:
    """2x2 symmetric-game rewards with named B/S/T/P accessors."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.shape != (2, 2):
            raise ValueError(f"reward matrix must be 2x2, got {m.shape}")
        if not np.isfinite(m).all():
            raise ValueError("reward entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def B(self) -> float:
        return float(self.entries[0, 0])

    @property
    def S(self) -> float:
        return float(self.entries[0, 1])

    @property
    def T(self) -> float:
        return float(self.entries[1, 0])

    @property
    def P(self) -> float:
        return float(self.entries[1, 1])


@dataclass(frozen=True)
class DilemmaFlags:
    c1: bool  # mutual cooperation beats mutual exploitation
    c2: bool  # mutual cooperation beats being suckered
    c3: bool  # mutual cooperation beats trading exploitation
    greed: bool  # exploiting a cooperator beats mutual cooperation
    fear: bool  # mutual exploitation beats being exploited


def check_dilemma_conditions(reward: RewardMatrix) -> DilemmaFlags:
    """Evaluate the social-dilemma conditions with strict inequalities."""
    b, s, t, p = reward.B, reward.S, reward.T, reward.P
    return DilemmaFlags(
        c1=b > p,
        c2=b > s,
        c3=2.0 * b > t + s,
        greed=t > b,
        fear=p > s,
    )


def _has_tie(reward: RewardMatrix) -> bool:
    b, s, t, p = reward.B, reward.S, reward.T, reward.P
    return b == p or b == s or 2.0 * b == t + s or t == b or p == s


def classify_dilemma(reward: RewardMatrix) -> DilemmaClass:
    """Assign the dilemma family from the greed/fear combination.

    Any tie among the defining comparisons is classified as
    NOT_A_SOCIAL_DILEMMA (the taxonomy uses strict orderings) and flagged
    with a warning.
    """
    if _has_tie(reward):
        warnings.warn(
            "tie among reward comparisons; classification requires strict orderings",
            stacklevel=2,
        )
        return DilemmaClass.NOT_A_SOCIAL_DILEMMA
    f = check_dilemma_conditions(reward)
    if not (f.c1 and f.c2 and f.c3):
        return DilemmaClass.NOT_A_SOCIAL_DILEMMA
    if f.greed and not f.fear:
        return DilemmaClass.CHICKEN
    if f.fear and not f.greed:
        return DilemmaClass.STAG_HUNT
    if f.greed and f.fear:
        return DilemmaClass.PRISONERS_DILEMMA
    return DilemmaClass.NO_DILEMMA


def chicken_reward(B: float, L: float) -> RewardMatrix:
    """Chicken-family rewards [[B, 1], [B+L, 0]] with challenge level L.

    Uses the P=0, S=1 normalization. L >= B-1 is allowed (some parameter
    maps deliberately cover the region where trading exploitation beats
    mutual cooperation) but emits a warning.
    """
    if B <= 1.0:
        raise ValueError(f"B={B} must exceed the sucker payoff 1")
    if L <= 0.0:
        raise ValueError(f"challenge level L={L} must be positive")
    if L >= B - 1.0:
        warnings.warn(
            f"L={L} >= B-1={B - 1}: exploitation excess overwhelms mutual cooperation",
            stacklevel=2,
        )
    return RewardMatrix(np.array([[B, 1.0], [B + L, 0.0]]))


def pd_reward(B: float, L: float) -> RewardMatrix:
    """Prisoner's-dilemma variant [[B, 0], [B+L, 1]] (second column swapped)."""
    if L >= B:
        raise ValueError(f"L={L} must be below B={B}")
    if L <= 0.0:
        raise ValueError(f"challenge level L={L} must be positive")
    return RewardMatrix(np.array([[B, 0.0], [B + L, 1.0]]))
