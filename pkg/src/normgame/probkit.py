"""Matrix algebra for discrete two-dimensional probability distributions.

Joint distributions of two discrete random variables are k x k matrices,
conditionals are column-stochastic matrices, and all the usual probability
operations (marginalization, expectation, composition, independence tests,
mutual information) become small matrix expressions. The module also builds
the two-parameter symmetric signal distribution used by the coordination
games downstream, and environments defined by observation partitions over a
latent state.

All values are immutable after construction; every function is pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PROB_TOL = 1e-12


def _as_readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class JointDist2:
    """Joint distribution of two discrete variables as a k x k matrix.

    ``entries[i, j]`` is the probability of (x=i, y=j). Entries must be
    nonnegative and sum to one within ``PROB_TOL``. When ``symmetric`` is
    set the matrix must equal its transpose exactly.
    """

    entries: np.ndarray
    symmetric: bool = False

    def __post_init__(self):
        object.__setattr__(self, "entries", _as_readonly(self.entries))
        m = self.entries
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"joint distribution must be square, got shape {m.shape}")
        if m.min() < -PROB_TOL:
            raise ValueError(f"negative probability entry {m.min():g}")
        total = m.sum()
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {total!r}, expected 1")
        if self.symmetric and not np.array_equal(m, m.T):
            raise ValueError("symmetry flag set but entries != entries.T")

    @property
    def k(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class CondDist:
    """Conditional distribution as an m x k column-stochastic matrix.

    Column j holds the distribution of the output given input j.
    """

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _as_readonly(self.entries))
        m = self.entries
        if m.ndim != 2:
            raise ValueError("conditional distribution must be a matrix")
        if m.min() < -PROB_TOL:
            raise ValueError(f"negative probability entry {m.min():g}")
        colsums = m.sum(axis=0)
        bad = np.abs(colsums - 1.0) > PROB_TOL
        if bad.any():
            j = int(np.argmax(bad))
            raise ValueError(f"column {j} sums to {colsums[j]!r}, expected 1")

    @property
    def n_outputs(self) -> int:
        return self.entries.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class Marginal:
    """Distribution of a single discrete variable."""

    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", _as_readonly(self.probs))
        p = self.probs
        if p.ndim != 1:
            raise ValueError("marginal must be a vector")
        if p.min() < -PROB_TOL:
            raise ValueError(f"negative probability entry {p.min():g}")
        if abs(p.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}, expected 1")

    @property
    def k(self) -> int:
        return self.probs.shape[0]


@dataclass(frozen=True)
class SignalParams:
    """Parameters of the symmetric binary signal distribution.

    ``b`` is the coordination potential (mass steered toward the mutual
    first-signal cell) and ``g`` the exploitation mass on the mutual
    second-signal cell. ``b >= g`` keeps the first cell nonnegative; the
    strict ``b > g`` case is tracked downstream as a region constraint
    rather than rejected here, since the antisymmetric corner b = g = 0 is
    a legitimate (maximally informative) configuration.
    """

    b: float
    g: float

    def __post_init__(self):
        if not (0.0 <= self.b <= 1.0):
            raise ValueError(f"b={self.b} outside [0, 1]")
        if not (0.0 <= self.g <= 1.0):
            raise ValueError(f"g={self.g} outside [0, 1]")
        if self.b < self.g:
            raise ValueError(f"b={self.b} < g={self.g} gives a negative entry")


def marginals(joint: JointDist2) -> tuple[Marginal, Marginal]:
    """Row and column marginals of a joint distribution."""
    m = joint.entries
    return Marginal(m.sum(axis=1)), Marginal(m.sum(axis=0))


def expectation(values: np.ndarray, joint: JointDist2) -> float:
    """Expectation of a function given as a matrix of per-outcome values.

    Equals ``trace(F @ J.T)``, i.e. the elementwise sum of F * J.
    """
    f = np.asarray(values, dtype=float)
    if f.shape != joint.entries.shape:
        raise ValueError(f"value matrix shape {f.shape} != joint shape {joint.entries.shape}")
    return float(np.sum(f * joint.entries))


def compose_conditionals(
    out_given_y: CondDist, joint: JointDist2, out_given_x: CondDist
) -> JointDist2:
    """Push a joint distribution of (x, y) through per-variable conditionals.

    Returns the joint distribution ``P_v|y @ J.T @ P_u|x.T`` of the outputs
    (v, u); rows index the channel applied to y, columns the channel applied
    to x. For symmetric inputs and identical channels the orientation is
    immaterial.
    """
    if out_given_y.n_inputs != joint.k or out_given_x.n_inputs != joint.k:
        raise ValueError("conditional input dimension does not match joint size")
    result = out_given_y.entries @ joint.entries.T @ out_given_x.entries.T
    return JointDist2(result)


def is_independent(joint: JointDist2, tol: float = PROB_TOL) -> bool:
    """True if the joint factorizes into the product of its marginals."""
    p_row, p_col = marginals(joint)
    residual = joint.entries - np.outer(p_row.probs, p_col.probs)
    return bool(np.max(np.abs(residual)) <= tol)


def correlation_form(p_x: Marginal, p_y: Marginal, rho: float) -> JointDist2:
    """Binary joint distribution with given marginals and correlation.

    ``J = p_x p_y^T + rho * sqrt(var_x * var_y) * [[+1, -1], [-1, +1]]``
    where the variance of a binary marginal is the product of its two
    probabilities. Raises when the requested correlation pushes any entry
    outside [0, 1]; clamping would silently change the distribution.
    """
    if p_x.k != 2 or p_y.k != 2:
        raise ValueError("correlation form is defined for binary marginals only")
    if not (-1.0 <= rho <= 1.0):
        raise ValueError(f"correlation {rho} outside [-1, 1]")
    var_x = float(np.prod(p_x.probs))
    var_y = float(np.prod(p_y.probs))
    tilt = np.array([[1.0, -1.0], [-1.0, 1.0]])
    j = np.outer(p_x.probs, p_y.probs) + rho * np.sqrt(var_x * var_y) * tilt
    if j.min() < -PROB_TOL or j.max() > 1.0 + PROB_TOL:
        raise ValueError(
            f"correlation {rho} incompatible with marginals: entries span "
            f"[{j.min():g}, {j.max():g}]"
        )
    return JointDist2(np.clip(j, 0.0, 1.0))


def correlation_of(joint: JointDist2) -> float:
    """Pearson correlation of a binary joint distribution."""
    if joint.k != 2:
        raise ValueError("correlation is defined for binary joints only")
    p_row, p_col = marginals(joint)
    var_x = float(np.prod(p_row.probs))
    var_y = float(np.prod(p_col.probs))
    if var_x <= 0.0 or var_y <= 0.0:
        raise ValueError("correlation undefined for a degenerate marginal")
    cov = joint.entries[0, 0] - p_row.probs[0] * p_col.probs[0]
    return float(cov / np.sqrt(var_x * var_y))


def signal_dist(params: SignalParams) -> JointDist2:
    """Symmetric binary signal distribution [[b-g, (1-b)/2], [(1-b)/2, g]]."""
    b, g = params.b, params.g
    off = (1.0 - b) / 2.0
    m = np.array([[b - g, off], [off, g]])
    return JointDist2(m, symmetric=True)


def mutual_information(joint: JointDist2) -> float:
    """Mutual information in bits, with the 0 * log 0 := 0 convention."""
    p_row, p_col = marginals(joint)
    prod = np.outer(p_row.probs, p_col.probs)
    j = joint.entries
    mask = j > 0.0
    terms = j[mask] * np.log2(j[mask] / prod[mask])
    return float(terms.sum())


def env_from_partitions(
    obs_first: CondDist,
    obs_second: CondDist,
    state_dist: Marginal,
    strict_partition: bool = True,
) -> JointDist2:
    """Joint observation distribution induced by two observation channels.

    Computes ``P_o|s @ diag(p_s) @ P_o'|s.T``. With ``strict_partition``
    both channels must be 0/1-valued partitions of the state space (each
    state maps to exactly one observation); general stochastic observation
    channels are accepted when the flag is cleared.
    """
    if obs_first.n_inputs != state_dist.k or obs_second.n_inputs != state_dist.k:
        raise ValueError("observation channel input size does not match state count")
    if strict_partition:
        for name, cd in (("first", obs_first), ("second", obs_second)):
            if not np.isin(cd.entries, (0.0, 1.0)).all():
                raise ValueError(f"{name} observation channel is not a 0/1 partition")
    result = obs_first.entries @ np.diag(state_dist.probs) @ obs_second.entries.T
    return JointDist2(result)
