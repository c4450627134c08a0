"""Parameter sweeps over the coordination-potential / challenge-level plane.

Each map evaluates a per-cell quantity on a rectangular grid and returns the
axes plus cell values/labels; the CLI serializes them as long-format CSV.
Cells are independent, so evaluation order never affects results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .norms import rationality_region
from .payoff import chicken_gamma_closed_form
from .probkit import SignalParams, mutual_information, signal_dist
from .replicator import classify_stability, vertex_spectrum

VALID = "valid"
RED_VIOLATED = "red-violated"
GREEN_VIOLATED = "green-violated"
POSITIVITY_VIOLATED = "positivity-violated"
CONDITION3_VIOLATED = "condition3-violated"


@dataclass(frozen=True)
class GridSpec:
    """Rectangular (b, L) grid with fixed exploitation mass and benefit."""

    b_range: tuple[float, float] = (0.0, 1.0)
    L_range: tuple[float, float] = (0.0125, 2.5)
    g: float = 0.0
    B: float = 3.0
    resolution: int = 200

    def __post_init__(self):
        if self.resolution < 2:
            raise ValueError("resolution must be >= 2")
        if not (self.b_range[0] < self.b_range[1]) or not (self.L_range[0] < self.L_range[1]):
            raise ValueError("ranges must be nonempty intervals")
        if self.L_range[0] <= 0.0:
            raise ValueError("challenge level must stay positive")

    def b_axis(self) -> np.ndarray:
        return np.linspace(self.b_range[0], self.b_range[1], self.resolution)

    def L_axis(self) -> np.ndarray:
        return np.linspace(self.L_range[0], self.L_range[1], self.resolution)


@dataclass(frozen=True)
class GridMap:
    """Per-cell results of one sweep: values[i, j] corresponds to (x[i], y[j])."""

    x_name: str
    y_name: str
    x: np.ndarray
    y: np.ndarray
    quantity: str
    values: np.ndarray
    labels: np.ndarray


def region_label(b: float, g: float, L: float, B: float) -> str:
    """Binding-constraint label for one (b, g, L, B) cell.

    Violations outrank marginal boundaries. When both best-response
    constraints are violated the one with the smaller threshold binds
    (it is crossed first as b grows); positivity and the cooperation
    condition L < B - 1 outrank both.
    """
    flags = rationality_region(b, g, L)
    if flags.positivity == "violated":
        return POSITIVITY_VIOLATED
    if L > B - 1.0:
        return CONDITION3_VIOLATED
    if L == B - 1.0:
        return "marginal:condition3"
    red_bound = (1.0 + 2.0 * g * L) / (1.0 + 2.0 * L)
    green_bound = np.inf if g == 0.0 else 1.0 - 2.0 * g / L
    if flags.red == "violated" and flags.green == "violated":
        return GREEN_VIOLATED if green_bound < red_bound else RED_VIOLATED
    if flags.red == "violated":
        return RED_VIOLATED
    if flags.green == "violated":
        return GREEN_VIOLATED
    for name, state in (("positivity", flags.positivity), ("red", flags.red), ("green", flags.green)):
        if state == "marginal":
            return f"marginal:{name}"
    return VALID


def rationality_map(grid: GridSpec) -> GridMap:
    """Label every cell by the constraint that binds there, if any."""
    b_ax, l_ax = grid.b_axis(), grid.L_axis()
    labels = np.empty((b_ax.size, l_ax.size), dtype=object)
    values = np.zeros((b_ax.size, l_ax.size))
    for i, b in enumerate(b_ax):
        for j, L in enumerate(l_ax):
            lab = region_label(b, grid.g, L, grid.B)
            labels[i, j] = lab
            values[i, j] = 1.0 if lab == VALID else 0.0
    return GridMap("b", "L", b_ax, l_ax, "rationality", values, labels)


def reward_ratio(b: float, L: float) -> float:
    """Signal-following self-play reward over the mixed-equilibrium reward."""
    gamma = chicken_gamma_closed_form(b, L)
    return float(gamma.entries[2, 2] / gamma.entries[0, 0])


def reward_ratio_map(grid: GridSpec) -> GridMap:
    """Self-play reward of the signal-following norm relative to the mixed
    default, over the canonical g=0, B=3 family; non-rational cells keep
    their value but carry the binding-constraint label."""
    if grid.g != 0.0 or grid.B != 3.0:
        raise ValueError("reward ratio map is defined for the g=0, B=3 family")
    b_ax, l_ax = grid.b_axis(), grid.L_axis()
    values = np.empty((b_ax.size, l_ax.size))
    labels = np.empty((b_ax.size, l_ax.size), dtype=object)
    for i, b in enumerate(b_ax):
        for j, L in enumerate(l_ax):
            values[i, j] = reward_ratio(b, L)
            labels[i, j] = region_label(b, grid.g, L, grid.B)
    return GridMap("b", "L", b_ax, l_ax, "reward_ratio", values, labels)


def stability_map(grid: GridSpec) -> list[GridMap]:
    """Leading vertex eigenvalue and stability class, one map per vertex."""
    b_ax, l_ax = grid.b_axis(), grid.L_axis()
    maps = []
    for vertex in range(4):
        values = np.empty((b_ax.size, l_ax.size))
        labels = np.empty((b_ax.size, l_ax.size), dtype=object)
        for i, b in enumerate(b_ax):
            for j, L in enumerate(l_ax):
                spec = vertex_spectrum(vertex, chicken_gamma_closed_form(b, L), validate=False)
                values[i, j] = spec.lambda_max_real
                labels[i, j] = classify_stability(spec)
        maps.append(
            GridMap("b", "L", b_ax, l_ax, f"lambda_max_vertex{vertex}", values, labels)
        )
    return maps


def stability_transitions(vertex_map: GridMap) -> list[tuple[float, float]]:
    """(L, b) points where the leading eigenvalue changes sign, located by
    linear interpolation along each fixed-L column."""
    out = []
    values, b_ax, l_ax = vertex_map.values, vertex_map.x, vertex_map.y
    for j, L in enumerate(l_ax):
        col = values[:, j]
        signs = np.sign(col)
        for i in range(len(col) - 1):
            if signs[i] != signs[i + 1] and signs[i] != 0 and signs[i + 1] != 0:
                frac = col[i] / (col[i] - col[i + 1])
                out.append((float(L), float(b_ax[i] + frac * (b_ax[i + 1] - b_ax[i]))))
    return out


def mi_map(
    b_range: tuple[float, float],
    g_range: tuple[float, float],
    resolution: int,
) -> GridMap:
    """Mutual information of the signal distribution over the (b, g) plane.

    Cells with b < g (no valid distribution) are NaN-valued and labelled
    as positivity violations.
    """
    b_ax = np.linspace(b_range[0], b_range[1], resolution)
    g_ax = np.linspace(g_range[0], g_range[1], resolution)
    values = np.full((b_ax.size, g_ax.size), np.nan)
    labels = np.empty((b_ax.size, g_ax.size), dtype=object)
    for i, b in enumerate(b_ax):
        for j, g in enumerate(g_ax):
            if b < g:
                labels[i, j] = POSITIVITY_VIOLATED
                continue
            values[i, j] = mutual_information(signal_dist(SignalParams(b=b, g=g)))
            labels[i, j] = VALID
    return GridMap("b", "g", b_ax, g_ax, "mutual_information", values, labels)
