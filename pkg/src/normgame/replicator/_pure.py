"""NumPy fallback for the trajectory integration kernel.

Integrates a batch of frequency vectors in lockstep with the classical
fourth-order one-step scheme, clipping roundoff-scale negatives and
renormalizing after every step. Semantics are identical to the compiled
kernel in ``_kernels.pyx``; only the execution strategy differs (the batch
dimension is vectorized here, looped in C there).
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"


def rk4_path(
    x0s: np.ndarray,
    gamma: np.ndarray,
    dt: float,
    n_steps: int,
    record_stride: int,
    tanh_variant: bool,
    beta: float,
    clip_tol: float,
):
    """Integrate a (M, N) batch of states for ``n_steps`` steps.

    Records the state every ``record_stride`` steps plus the final state
    when the stride does not divide ``n_steps``. Returns
    ``(records, abort_step, abort_sample)`` where ``abort_step`` is -1 on
    success; on abort the records hold the state at the failing step.
    """
    x = np.array(x0s, dtype=float)
    g_t = np.ascontiguousarray(np.asarray(gamma, dtype=float).T)
    m, n = x.shape
    n_rec = n_steps // record_stride
    extra_final = int(n_steps % record_stride != 0)
    records = np.empty((1 + n_rec + extra_final, m, n))
    records[0] = x

    def rate(y):
        f = y @ g_t
        fbar = np.einsum("ij,ij->i", y, f)[:, None]
        dev = f - fbar
        if tanh_variant:
            t = np.tanh(beta * dev)
            s = np.einsum("ij,ij->i", y, t)[:, None]
            return y * (t - s)
        return y * dev

    rec = 0
    half = 0.5 * dt
    sixth = dt / 6.0
    for step in range(1, n_steps + 1):
        k1 = rate(x)
        k2 = rate(x + half * k1)
        k3 = rate(x + half * k2)
        k4 = rate(x + dt * k3)
        x = x + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        mins = x.min(axis=1)
        if (mins < -clip_tol).any():
            bad = int(np.argmax(mins < -clip_tol))
            records[rec + 1 if rec + 1 < records.shape[0] else rec] = x
            return records[: rec + 1], step, bad
        np.clip(x, 0.0, None, out=x)
        x /= x.sum(axis=1, keepdims=True)
        if step % record_stride == 0:
            rec += 1
            records[rec] = x
    if extra_final:
        rec += 1
        records[rec] = x
    return records, -1, -1
