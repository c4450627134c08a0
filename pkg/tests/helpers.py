"""Independent brute-force oracles used to freeze expected test values.

These deliberately avoid the library's matrix expressions: everything is
an explicit loop over outcomes, so agreement with the fast paths is a real
check rather than a tautology.
"""

import numpy as np


def brute_avg_reward(pi, pi_opp, joint, reward) -> float:
    """Quadruple sum over (o, o', a, a')."""
    total = 0.0
    k = joint.entries.shape[0]
    n_actions = reward.entries.shape[0]
    for o in range(k):
        for o2 in range(k):
            for a in range(n_actions):
                for a2 in range(n_actions):
                    total += (
                        reward.entries[a, a2]
                        * pi_opp.entries[a2, o2]
                        * joint.entries[o, o2]
                        * pi.entries[a, o]
                    )
    return total


def brute_expectation(values, joint) -> float:
    total = 0.0
    k = joint.entries.shape[0]
    for i in range(k):
        for j in range(k):
            total = total + values[i][j] * joint.entries[i, j]
    return total


def brute_action_values(opp, joint, reward, obs: int):
    """Posterior-averaged value of each action at one observation."""
    k = joint.entries.shape[0]
    p_obs = sum(joint.entries[obs, o2] for o2 in range(k))
    if p_obs == 0.0:
        return None
    values = []
    for a in range(reward.entries.shape[0]):
        v = 0.0
        for o2 in range(k):
            post = joint.entries[obs, o2] / p_obs
            for a2 in range(reward.entries.shape[0]):
                v += post * opp.entries[a2, o2] * reward.entries[a, a2]
        values.append(v)
    return values


def brute_best_actions(opp, joint, reward, obs: int, tol: float = 1e-12):
    values = brute_action_values(opp, joint, reward, obs)
    if values is None:
        return set(range(reward.entries.shape[0]))
    best = max(values)
    margin = tol * max(1.0, abs(best))
    return {a for a, v in enumerate(values) if v >= best - margin}


def brute_mutual_information(joint) -> float:
    m = joint.entries
    p_row = m.sum(axis=1)
    p_col = m.sum(axis=0)
    total = 0.0
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            if m[i, j] > 0.0:
                total += m[i, j] * np.log2(m[i, j] / (p_row[i] * p_col[j]))
    return total


def edge_equilibrium(gamma: np.ndarray, i: int, j: int) -> np.ndarray | None:
    """Interior rest point on the (i, j) edge from the indifference condition."""
    denom = gamma[i, i] - gamma[j, i] - gamma[i, j] + gamma[j, j]
    if denom == 0.0:
        return None
    alpha = (gamma[j, j] - gamma[i, j]) / denom
    if not (0.0 < alpha < 1.0):
        return None
    x = np.zeros(gamma.shape[0])
    x[i] = alpha
    x[j] = 1.0 - alpha
    return x


def fd_jacobian(flow_fn, x, gamma, h: float = 1e-6) -> np.ndarray:
    n = len(x)
    out = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        out[:, j] = (flow_fn(x + e, gamma) - flow_fn(x - e, gamma)) / (2.0 * h)
    return out


def random_joint(rng, k: int = 2) -> np.ndarray:
    m = rng.random((k, k))
    return m / m.sum()
