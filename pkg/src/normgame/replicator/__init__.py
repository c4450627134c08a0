"""Replicator dynamics on the frequency simplex.

Flow evaluation, trajectory integration, fixed-point residuals, Jacobians
and their spectra, linear stability classification, and attractor-basin
sampling. The payoff argument of every function accepts either a
``PayoffMatrix`` or a plain square array.

Trajectory integration dominates the runtime of basin sampling, so the
stepping kernel exists twice: a compiled extension (built from
``_kernels.pyx``) and a NumPy fallback with identical semantics. The
compiled kernel is preferred at import time when present; set
``NORMGAME_BACKEND=pure`` to force the fallback. ``benchmarks/`` in the
repository compares the two.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _pure

_IMPLS = {"pure": _pure}
if os.environ.get("NORMGAME_BACKEND", "").lower() != "pure":
    try:
        from . import _kernels

        _IMPLS["compiled"] = _kernels
    except ImportError:
        pass

DEFAULT_BACKEND = "compiled" if "compiled" in _IMPLS else "pure"

DEFAULT_DT = 0.01
DEFAULT_T_END = 500.0
CLIP_TOL = 1e-12
VERTEX_TOL = 1e-6
BASIN_VERTEX_TOL = 1e-2
STABILITY_TOL = 1e-9
MIXED_LABEL = "mixed"


def backend() -> str:
    """Name of the integration kernel selected at import time."""
    return DEFAULT_BACKEND


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_IMPLS))


class SimplexEscapeError(RuntimeError):
    """Raised when an integrated state leaves the simplex beyond tolerance."""


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a linearization and the largest real part."""

    eigenvalues: np.ndarray
    lambda_max_real: float


@dataclass(frozen=True)
class Trajectory:
    """Integrated path: times, states (one row per time), terminal label.

    The terminal label is the index of the nearest vertex when the final
    state is within the vertex tolerance, else ``"mixed"``.
    """

    times: np.ndarray
    states: np.ndarray
    terminal_label: int | str


def _entries(gamma) -> np.ndarray:
    g = np.asarray(getattr(gamma, "entries", gamma), dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"payoff matrix must be square, got shape {g.shape}")
    return g


def check_simplex(x, tol: float = 1e-9) -> np.ndarray:
    """Validate and return a frequency vector (sum 1, nonnegative)."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError("frequency state must be a vector")
    if abs(v.sum() - 1.0) > tol:
        raise ValueError(f"frequencies sum to {v.sum()!r}, expected 1")
    if v.min() < -CLIP_TOL:
        raise ValueError(f"negative frequency {v.min():g}")
    return v


def flow(x, gamma) -> np.ndarray:
    """Replicator velocity ``diag(x) (G x - (x' G x) 1)``; sums to zero."""
    g = _entries(gamma)
    v = np.asarray(x, dtype=float)
    f = g @ v
    return v * (f - v @ f)


def tanh_flow(x, gamma, beta: float) -> np.ndarray:
    """Saturating-comparison velocity ``x_n tanh(beta (f_n - fbar))``,
    shifted back onto the simplex tangent by its x-weighted mean."""
    if beta <= 0.0:
        raise ValueError(f"selection strength beta={beta} must be positive")
    g = _entries(gamma)
    v = np.asarray(x, dtype=float)
    f = g @ v
    t = np.tanh(beta * (f - v @ f))
    return v * (t - v @ t)


def fixed_point_residual(x, gamma) -> float:
    """Max over supported components of ``|(G x)_n - x' G x|``."""
    g = _entries(gamma)
    v = np.asarray(x, dtype=float)
    f = g @ v
    dev = np.abs(f - v @ f)
    support = v > 0.0
    if not support.any():
        return 0.0
    return float(dev[support].max())


def jacobian(x, gamma) -> np.ndarray:
    """Derivative matrix of the replicator flow at an arbitrary state."""
    g = _entries(gamma)
    v = np.asarray(x, dtype=float)
    f = g @ v
    fbar = v @ f
    outer = np.outer(v, v)
    return np.diag(f - fbar) + (np.diag(v) - outer) @ g - outer @ g.T


def jacobian_at_vertex(n: int, gamma) -> np.ndarray:
    """Flow Jacobian at the single-population state of index ``n``."""
    g = _entries(gamma)
    col = g[:, n]
    jac = np.diag(col - g[n, n])
    jac[n, :] -= col
    return jac


def eigenvalues(matrix) -> np.ndarray:
    """All eigenvalues of a small dense matrix, residual-checked.

    Each pair must satisfy ``|M v - lambda v| <= 1e-8``; dimension is
    capped at 64. Non-convergence raises ``numpy.linalg.LinAlgError``.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > 64:
        raise ValueError(f"matrix dimension {m.shape[0]} exceeds the cap of 64")
    vals, vecs = np.linalg.eig(m)
    residuals = np.linalg.norm(m @ vecs - vecs * vals, axis=0)
    worst = float(residuals.max()) if residuals.size else 0.0
    if worst > 1e-8:
        raise np.linalg.LinAlgError(f"eigenpair residual {worst:g} exceeds 1e-8")
    return vals


def vertex_spectrum(n: int, gamma, validate: bool = True) -> Spectrum:
    """Spectrum at vertex ``n``: ``{G_in - G_nn, i != n}`` plus ``-G_nn``.

    With ``validate`` the closed form is checked against a numeric
    eigensolve of the vertex Jacobian to 1e-10.
    """
    g = _entries(gamma)
    closed = g[:, n] - g[n, n]
    closed[n] = -g[n, n]
    if validate:
        numeric = eigenvalues(jacobian_at_vertex(n, gamma))
        if np.abs(numeric.imag).max() > 1e-10:
            raise ValueError("vertex Jacobian produced complex eigenvalues")
        gap = np.abs(np.sort(numeric.real) - np.sort(closed)).max()
        if gap > 1e-10:
            raise ValueError(f"closed-form spectrum deviates from numeric by {gap:g}")
    vals = closed.astype(complex)
    return Spectrum(eigenvalues=vals, lambda_max_real=float(closed.max()))


def classify_stability(spectrum: Spectrum, tol: float = STABILITY_TOL) -> str:
    """"stable", "neutral" or "unstable" from the leading real part."""
    lam = spectrum.lambda_max_real
    if lam > tol:
        return "unstable"
    if lam >= -tol:
        return "neutral"
    return "stable"


def _kernel(backend_name: str | None):
    name = backend_name or DEFAULT_BACKEND
    if name not in _IMPLS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    return _IMPLS[name]


def _integrate_batch(
    x0s: np.ndarray,
    gamma: np.ndarray,
    dt: float,
    t_end: float,
    variant: str,
    beta: float | None,
    record_every: int,
    backend_name: str | None,
):
    if dt <= 0.0:
        raise ValueError(f"step size dt={dt} must be positive")
    if t_end <= 0.0:
        raise ValueError(f"horizon t_end={t_end} must be positive")
    if variant == "linear":
        tanh_variant, beta_val = False, 0.0
    elif variant == "tanh":
        if beta is None or beta <= 0.0:
            raise ValueError("tanh variant requires a positive beta")
        tanh_variant, beta_val = True, float(beta)
    else:
        raise ValueError(f"unknown variant {variant!r} (expected 'linear' or 'tanh')")
    n_steps = max(1, int(round(t_end / dt)))
    stride = max(1, int(record_every))
    impl = _kernel(backend_name)
    records, abort_step, abort_sample = impl.rk4_path(
        x0s, gamma, dt, n_steps, stride, tanh_variant, beta_val, CLIP_TOL
    )
    if abort_step >= 0:
        state = records[-1, abort_sample]
        raise SimplexEscapeError(
            f"sample {abort_sample} left the simplex at t={abort_step * dt:g} "
            f"(min component {state.min():g})"
        )
    n_full = n_steps // stride
    times = np.arange(n_full + 1, dtype=float) * (stride * dt)
    if n_steps % stride != 0:
        times = np.append(times, n_steps * dt)
    return times, records


def terminal_label(state: np.ndarray, vertex_tol: float = VERTEX_TOL) -> int | str:
    """Nearest-vertex index if the largest component exceeds 1 - tol."""
    i = int(np.argmax(state))
    return i if state[i] > 1.0 - vertex_tol else MIXED_LABEL


def integrate(
    x0,
    gamma,
    dt: float = DEFAULT_DT,
    t_end: float = DEFAULT_T_END,
    variant: str = "linear",
    beta: float | None = None,
    record_every: int = 100,
    vertex_tol: float = VERTEX_TOL,
    backend: str | None = None,
) -> Trajectory:
    """Integrate one trajectory from ``x0``.

    Parameters
    ----------
    x0 : frequency vector on the simplex (validated to 1e-9).
    gamma : payoff matrix (``PayoffMatrix`` or array).
    dt, t_end : fixed step size and horizon.
    variant : "linear" or "tanh" (requires ``beta``).
    record_every : steps between recorded states.
    vertex_tol : terminal-label threshold on the largest component.
    backend : kernel override ("pure" or "compiled").
    """
    g = _entries(gamma)
    v = check_simplex(x0)
    if v.shape[0] != g.shape[0]:
        raise ValueError("state length does not match payoff size")
    times, records = _integrate_batch(
        v[None, :], g, dt, t_end, variant, beta, record_every, backend
    )
    states = records[:, 0, :]
    return Trajectory(
        times=times, states=states, terminal_label=terminal_label(states[-1], vertex_tol)
    )


def sample_simplex(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform point on the simplex via normalized exponential spacings."""
    e = rng.standard_exponential(n)
    return e / e.sum()


def basin_sample(
    gamma,
    n_samples: int,
    seed: int,
    t_end: float = DEFAULT_T_END,
    dt: float = DEFAULT_DT,
    vertex_tol: float = BASIN_VERTEX_TOL,
    backend: str | None = None,
) -> dict[int | str, int]:
    """Attractor frequency table from uniformly sampled starts.

    Each sample's start is drawn from its own generator seeded by
    ``(seed, index)``, so results are independent of evaluation order.
    The terminal classification uses a coarser vertex tolerance than
    :func:`integrate`: attractors whose leading eigenvalue vanishes are
    approached algebraically, which a tolerance near machine precision
    would misreport as "mixed" at any practical horizon.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    g = _entries(gamma)
    n = g.shape[0]
    starts = np.empty((n_samples, n))
    for i in range(n_samples):
        rng = np.random.default_rng((seed, i))
        starts[i] = sample_simplex(rng, n)
    _, records = _integrate_batch(
        starts, g, dt, t_end, "linear", None, max(1, int(round(t_end / dt))), backend
    )
    finals = records[-1]
    table: dict[int | str, int] = {}
    for i in range(n_samples):
        label = terminal_label(finals[i], vertex_tol)
        table[label] = table.get(label, 0) + 1
    return table
