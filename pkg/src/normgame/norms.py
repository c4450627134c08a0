"""Social norms over signal-correlated games: representation and analysis.

A norm is an ordered pair of deterministic policies: a prescription (how the
subscriber should map observations to actions) and a description (how the
subscriber believes the opponent maps observations to actions). Average
reward, per-observation best responses, the rationality/validatability/
consistency hierarchy, and correlated-equilibrium checks are all small
matrix computations over a joint observation distribution and a reward
matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .games import RewardMatrix
from .probkit import JointDist2, is_independent

TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Policy:
    """Column-stochastic map from observations to action distributions.

    ``entries[a, o]`` is the probability of action a given observation o.
    Deterministic policies are 0/1-valued with one nonzero per column.
    """

    entries: np.ndarray
    deterministic: bool = False

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2:
            raise ValueError("policy must be a matrix")
        if m.min() < -TIE_TOL:
            raise ValueError(f"negative policy entry {m.min():g}")
        colsums = m.sum(axis=0)
        if np.max(np.abs(colsums - 1.0)) > TIE_TOL:
            raise ValueError("policy columns must sum to 1")
        if self.deterministic and not np.isin(m, (0.0, 1.0)).all():
            raise ValueError("deterministic flag set but entries are not 0/1")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n_actions(self) -> int:
        return self.entries.shape[0]

    @property
    def n_obs(self) -> int:
        return self.entries.shape[1]

    def action_of(self, obs: int) -> int:
        """Chosen action for an observation (deterministic policies)."""
        if not self.deterministic:
            raise ValueError("action_of is defined for deterministic policies")
        return int(np.argmax(self.entries[:, obs]))

    @staticmethod
    def from_actions(actions: tuple[int, ...] | list[int], n_actions: int) -> "Policy":
        m = np.zeros((n_actions, len(actions)))
        for o, a in enumerate(actions):
            m[a, o] = 1.0
        return Policy(m, deterministic=True)

    @staticmethod
    def constant(dist: np.ndarray, n_obs: int) -> "Policy":
        """Observation-independent policy with the same column everywhere."""
        col = np.asarray(dist, dtype=float).reshape(-1, 1)
        return Policy(np.repeat(col, n_obs, axis=1))


# Canonical binary policies: actions are (stop, go), observations (red, green).
ALWAYS_STOP = Policy.from_actions((0, 0), 2)
SIGNAL_FOLLOWER = Policy.from_actions((0, 1), 2)
ANTI_SIGNAL = Policy.from_actions((1, 0), 2)
ALWAYS_GO = Policy.from_actions((1, 1), 2)


@dataclass(frozen=True, eq=False)
class Norm:
    """Ordered (prescription, description) pair of deterministic policies."""

    prescription: Policy
    description: Policy
    id: int

    def __post_init__(self):
        if not (self.prescription.deterministic and self.description.deterministic):
            raise ValueError("both norm members must be deterministic policies")


@dataclass(frozen=True)
class NormClass:
    """Classification flags for one norm; stronger flags imply weaker ones."""

    rational: bool
    null: bool
    empirically_validatable: bool
    consistent: bool
    inconsistent: bool
    evolutionarily_stable: bool
    best_response: bool

    def __post_init__(self):
        ok = (
            self.null == (not self.rational)
            and (not self.consistent or self.empirically_validatable)
            and (not self.empirically_validatable or self.rational)
            and (not self.evolutionarily_stable or self.consistent)
            and (not self.best_response or self.evolutionarily_stable)
            and self.inconsistent == (self.empirically_validatable and not self.consistent)
        )
        if not ok:
            raise ValueError(f"inconsistent classification flags: {self}")


@dataclass(frozen=True)
class NashSolution:
    """Mixed symmetric equilibrium: stop probability and average reward."""

    p_stop: float
    rho: float

    def __post_init__(self):
        if not (0.0 <= self.p_stop <= 1.0):
            raise ValueError(f"p_stop={self.p_stop} outside [0, 1]")

    def policy(self, n_obs: int = 2) -> Policy:
        """Observation-independent policy playing the equilibrium mix."""
        return Policy.constant(np.array([self.p_stop, 1.0 - self.p_stop]), n_obs)


def deterministic_policies(n_actions: int, n_obs: int) -> list[Policy]:
    """All deterministic policies, ordered lexicographically by the tuple
    of chosen actions (observation 0 first)."""
    return [
        Policy.from_actions(actions, n_actions)
        for actions in product(range(n_actions), repeat=n_obs)
    ]


def enumerate_norms(n_actions: int, n_obs: int) -> list[Norm]:
    """All ordered pairs of deterministic policies, prescription-major.

    ``id = prescription_index * n_policies + description_index`` with
    policies in the order of :func:`deterministic_policies`.
    """
    if n_actions < 1 or n_obs < 1:
        raise ValueError("action and observation counts must be >= 1")
    policies = deterministic_policies(n_actions, n_obs)
    n = len(policies)
    return [
        Norm(prescription=policies[i], description=policies[j], id=i * n + j)
        for i in range(n)
        for j in range(n)
    ]


def avg_reward(pi: Policy, pi_opp: Policy, joint: JointDist2, reward: RewardMatrix) -> float:
    """Average reward of ``pi`` against ``pi_opp`` under correlated signals.

    ``trace(R @ pi_opp @ J.T @ pi.T)``, identical to the expectation over
    all (o, o', a, a') outcomes. The transpose on J matters only for
    asymmetric joints.
    """
    if pi.n_obs != joint.k or pi_opp.n_obs != joint.k:
        raise ValueError("policy observation count does not match joint size")
    if reward.entries.shape != (pi.n_actions, pi_opp.n_actions):
        raise ValueError("reward shape does not match policy action counts")
    return float(
        np.trace(reward.entries @ pi_opp.entries @ joint.entries.T @ pi.entries.T)
    )


@dataclass(frozen=True)
class BestResponse:
    """Per-observation optimal action sets.

    Observations with zero marginal probability carry the full action set
    and are flagged in ``zero_prob_obs``.
    """

    actions_per_obs: tuple[frozenset[int], ...]
    zero_prob_obs: tuple[bool, ...]

    def contains(self, policy: Policy) -> bool:
        """True if the deterministic policy picks an optimal action everywhere."""
        return all(
            policy.action_of(o) in acts for o, acts in enumerate(self.actions_per_obs)
        )


def best_response_per_obs(
    opp: Policy, joint: JointDist2, reward: RewardMatrix, tol: float = TIE_TOL
) -> BestResponse:
    """Optimal action sets per observation against a fixed opponent policy.

    For observation o the value of action a is the posterior-averaged
    reward ``sum_o' p(o'|o) E_{a'~opp(.|o')} R[a, a']``; ties within
    ``tol`` are kept in the set.
    """
    # value_unnorm[a, o] = sum_o' R[a, :] @ opp[:, o'] * J[o, o']
    action_value_by_opp_obs = reward.entries @ opp.entries  # (A, O')
    value_unnorm = action_value_by_opp_obs @ joint.entries.T  # (A, O)
    p_obs = joint.entries.sum(axis=1)
    sets = []
    zero_flags = []
    n_actions = reward.entries.shape[0]
    for o in range(joint.k):
        if p_obs[o] <= 0.0:
            sets.append(frozenset(range(n_actions)))
            zero_flags.append(True)
            continue
        vals = value_unnorm[:, o] / p_obs[o]
        margin = tol * max(1.0, float(np.abs(vals).max()))
        best = float(vals.max())
        sets.append(frozenset(int(a) for a in np.flatnonzero(vals >= best - margin)))
        zero_flags.append(False)
    return BestResponse(tuple(sets), tuple(zero_flags))


def is_rational(norm: Norm, joint: JointDist2, reward: RewardMatrix) -> bool:
    """True if the prescription is never worse than any alternative, per
    observation, against the norm's own description."""
    br = best_response_per_obs(norm.description, joint, reward)
    return br.contains(norm.prescription)


def is_correlated_equilibrium(
    pi: Policy, pi_opp: Policy, joint: JointDist2, reward: RewardMatrix
) -> bool:
    """Check the per-observation best-response inequality for both players.

    The opponent's perspective sees the transposed joint (and the same
    reward, the game being symmetric).
    """
    if not (pi.deterministic and pi_opp.deterministic):
        raise ValueError("correlated-equilibrium check expects deterministic policies")
    if not best_response_per_obs(pi_opp, joint, reward).contains(pi):
        return False
    joint_opp = JointDist2(joint.entries.T)
    return best_response_per_obs(pi, joint_opp, reward).contains(pi_opp)


def is_nash_factorizable(
    pi: Policy, pi_opp: Policy, joint: JointDist2, tol: float
) -> bool:
    """True if the induced joint action distribution is a product measure."""
    action_joint = pi.entries @ joint.entries @ pi_opp.entries.T
    return is_independent(JointDist2(action_joint), tol)


def mixed_nash_chicken(B: float, L: float) -> NashSolution:
    """Closed-form mixed equilibrium of the chicken family.

    Stops with probability 1/(1+L); the average reward is (B+L)/(1+L).
    """
    if L <= 0.0:
        raise ValueError(f"challenge level L={L} must be positive")
    return NashSolution(p_stop=1.0 / (1.0 + L), rho=(B + L) / (1.0 + L))


@dataclass(frozen=True)
class RegionFlags:
    """Closed-form rationality constraints for the signal-following norm.

    Each field is "ok", "violated" or "marginal" (boundary equality).
    """

    green: str
    red: str
    positivity: str

    @property
    def all_ok(self) -> bool:
        return self.green == "ok" and self.red == "ok" and self.positivity == "ok"

    @property
    def rational(self) -> bool:
        """Weak-inequality reading: marginal cells still count as rational."""
        return (
            self.green in ("ok", "marginal")
            and self.red in ("ok", "marginal")
            and self.positivity in ("ok", "marginal")
        )


def _compare(value: float, bound: float, atol: float = 1e-12) -> str:
    if abs(value - bound) <= atol:
        return "marginal"
    return "ok" if value < bound else "violated"


def rationality_region(b: float, g: float, L: float) -> RegionFlags:
    """Closed-form constraints on (b, g, L) for signal-following rationality.

    green: stay with go on the second signal requires b < 1 - 2g/L
    (always satisfied when g = 0); red: stay with stop on the first signal
    requires b < (1 + 2gL) / (1 + 2L); positivity: b > g.
    """
    if L <= 0.0:
        raise ValueError(f"challenge level L={L} must be positive")
    green = "ok" if g == 0.0 else _compare(b, 1.0 - 2.0 * g / L)
    red = _compare(b, (1.0 + 2.0 * g * L) / (1.0 + 2.0 * L))
    positivity = "violated" if b < g else ("marginal" if b == g else "ok")
    return RegionFlags(green=green, red=red, positivity=positivity)


def classify_all(
    norms: list[Norm],
    joint: JointDist2,
    reward: RewardMatrix,
    gamma,
) -> list[NormClass]:
    """Classify every norm through the validity hierarchy.

    ``gamma`` (a payoff matrix object with an ``entries`` array, or a plain
    array) must be built over the same norm list preceded by the default
    strategy, so norm i sits at payoff index i + 1. Each level of the
    hierarchy refines the previous one: evolutionary stability is only
    evaluated for consistent norms, and the best-response class only for
    evolutionarily stable ones.
    """
    n = len(norms)
    gamma_entries = np.asarray(getattr(gamma, "entries", gamma), dtype=float)
    if gamma_entries.shape != (n + 1, n + 1):
        raise ValueError(
            f"payoff matrix is {gamma_entries.shape}, expected {(n + 1, n + 1)} "
            "(default strategy plus one row per norm)"
        )
    rational = [is_rational(nm, joint, reward) for nm in norms]
    br_vs_prescription = {}

    def br_against(prescription: Policy) -> BestResponse:
        key = prescription.entries.tobytes()
        if key not in br_vs_prescription:
            br_vs_prescription[key] = best_response_per_obs(prescription, joint, reward)
        return br_vs_prescription[key]

    rational_prescriptions = [nm.prescription for nm, r in zip(norms, rational) if r]
    consistent = [
        r and br_against(nm.prescription).contains(nm.prescription)
        for nm, r in zip(norms, rational)
    ]
    validatable = [
        r and any(br_against(p).contains(nm.prescription) for p in rational_prescriptions)
        for nm, r in zip(norms, rational)
    ]
    consistent_prescriptions = [
        nm.prescription for nm, c in zip(norms, consistent) if c
    ]

    g = gamma_entries
    scale = max(1.0, float(np.abs(g).max()))
    tie = TIE_TOL * scale

    def is_ess(idx: int) -> bool:
        own = g[idx, idx]
        for m in range(g.shape[0]):
            if m == idx:
                continue
            if g[m, idx] > own + tie:
                return False
            if abs(g[m, idx] - own) <= tie and g[idx, m] <= g[m, m] + tie:
                return False
        return True

    out = []
    for i, nm in enumerate(norms):
        es = consistent[i] and is_ess(i + 1)
        best = es and all(
            br_against(p).contains(nm.prescription) for p in consistent_prescriptions
        )
        out.append(
            NormClass(
                rational=rational[i],
                null=not rational[i],
                empirically_validatable=validatable[i],
                consistent=consistent[i],
                inconsistent=validatable[i] and not consistent[i],
                evolutionarily_stable=es,
                best_response=best,
            )
        )
    return out
