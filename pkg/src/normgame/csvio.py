"""CSV and key-value serialization for every artifact the CLI emits.

Floats are written with ``repr`` (shortest round-trip form), so identical
inputs always produce byte-identical files and every file parses back to
the values it was written from.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .games import RewardMatrix
from .norms import Norm, NormClass
from .payoff import PayoffMatrix
from .replicator import Trajectory
from .sweep import GridMap


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_rows(path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def read_rows(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]


def write_matrix_csv(path, matrix: np.ndarray) -> None:
    m = np.asarray(matrix)
    _write_rows(path, [str(j) for j in range(m.shape[1])], m)


def read_matrix_csv(path) -> np.ndarray:
    _, rows = read_rows(path)
    return np.array([[float(v) for v in row] for row in rows])


def write_reward_csv(path, reward: RewardMatrix) -> None:
    _write_rows(path, ["B", "S", "T", "P"], [[reward.B, reward.S, reward.T, reward.P]])


def read_reward_csv(path) -> RewardMatrix:
    _, rows = read_rows(path)
    b, s, t, p = (float(v) for v in rows[0])
    return RewardMatrix(np.array([[b, s], [t, p]]))


def write_gamma_csv(path, gamma: PayoffMatrix) -> None:
    header = ["strategy", *gamma.strategy_labels, "substituted"]
    rows = [
        [label, *gamma.entries[i], gamma.substitutions[i]]
        for i, label in enumerate(gamma.strategy_labels)
    ]
    _write_rows(path, header, rows)


def read_gamma_csv(path) -> PayoffMatrix:
    header, rows = read_rows(path)
    labels = tuple(header[1:-1])
    entries = np.array([[float(v) for v in row[1:-1]] for row in rows])
    subs = tuple(row[-1] == "1" for row in rows)
    return PayoffMatrix(entries=entries, strategy_labels=labels, substitutions=subs)


def _policy_bits(policy) -> str:
    return "".join(str(policy.action_of(o)) for o in range(policy.n_obs))


NORM_FLAG_COLUMNS = (
    "rational",
    "null",
    "empirically_validatable",
    "consistent",
    "inconsistent",
    "evolutionarily_stable",
    "best_response",
)


def write_norm_table_csv(path, norms: list[Norm], classes: list[NormClass]) -> None:
    header = ["id", "prescription", "description", *NORM_FLAG_COLUMNS]
    rows = [
        [
            nm.id,
            _policy_bits(nm.prescription),
            _policy_bits(nm.description),
            *[getattr(cl, flag) for flag in NORM_FLAG_COLUMNS],
        ]
        for nm, cl in zip(norms, classes)
    ]
    _write_rows(path, header, rows)


def read_norm_table_csv(path) -> list[dict]:
    header, rows = read_rows(path)
    out = []
    for row in rows:
        rec = dict(zip(header, row))
        rec["id"] = int(rec["id"])
        for flag in NORM_FLAG_COLUMNS:
            rec[flag] = rec[flag] == "1"
        out.append(rec)
    return out


def write_trajectory_csv(path, trajectory: Trajectory) -> None:
    n = trajectory.states.shape[1]
    header = ["t", *[f"x{i}" for i in range(n)]]
    rows = [
        [t, *state] for t, state in zip(trajectory.times, trajectory.states)
    ]
    _write_rows(path, header, rows)


def read_trajectory_csv(path) -> tuple[np.ndarray, np.ndarray]:
    _, rows = read_rows(path)
    data = np.array([[float(v) for v in row] for row in rows])
    return data[:, 0], data[:, 1:]


def write_long_map_csv(path, grid_map: GridMap) -> None:
    header = [grid_map.x_name, grid_map.y_name, "quantity", "value", "label"]
    rows = [
        [x, y, grid_map.quantity, grid_map.values[i, j], grid_map.labels[i, j]]
        for i, x in enumerate(grid_map.x)
        for j, y in enumerate(grid_map.y)
    ]
    _write_rows(path, header, rows)


def write_long_maps_csv(path, grid_maps: list[GridMap]) -> None:
    first = grid_maps[0]
    header = [first.x_name, first.y_name, "quantity", "value", "label"]
    rows = []
    for gm in grid_maps:
        rows.extend(
            [x, y, gm.quantity, gm.values[i, j], gm.labels[i, j]]
            for i, x in enumerate(gm.x)
            for j, y in enumerate(gm.y)
        )
    _write_rows(path, header, rows)


def read_long_map_csv(path) -> list[dict]:
    header, rows = read_rows(path)
    out = []
    for row in rows:
        rec = dict(zip(header, row))
        rec["value"] = float(rec["value"]) if rec["value"] != "nan" else float("nan")
        out.append(rec)
    return out


def write_spectra_csv(path, rows: list[dict]) -> None:
    if not rows:
        raise ValueError("no spectra rows to write")
    n = len(rows[0]["eigenvalues"])
    header = ["b", "L", "vertex"]
    for i in range(n):
        header += [f"lam{i}_re", f"lam{i}_im"]
    header += ["lambda_max", "class"]
    table = []
    for rec in rows:
        row = [rec["b"], rec["L"], rec["vertex"]]
        for lam in rec["eigenvalues"]:
            row += [lam.real, lam.imag]
        row += [rec["lambda_max"], rec["class"]]
        table.append(row)
    _write_rows(path, header, table)


def write_abm_csv(path, labels, frequencies, gamma, estimates) -> None:
    s = len(labels)
    header = ["round", *[f"freq_{lab}" for lab in labels]]
    header += [f"gamma_{i}{j}" for i in range(s) for j in range(s)]
    header += [f"est_{i}{j}_{a}{b}" for i in range(s) for j in range(s) for a in range(2) for b in range(2)]
    rows = []
    for t in range(frequencies.shape[0]):
        row = [t, *frequencies[t]]
        if t >= 1:
            row += list(gamma[t - 1].ravel()) + list(estimates[t - 1].ravel())
        else:
            row += [np.nan] * (s * s) + [np.nan] * (s * s * 4)
        rows.append(row)
    _write_rows(path, header, rows)


def read_abm_frequencies_csv(path, n_strategies: int) -> np.ndarray:
    _, rows = read_rows(path)
    return np.array([[float(v) for v in row[1 : 1 + n_strategies]] for row in rows])


def write_basin_csv(path, table: dict, labels: tuple[str, ...]) -> None:
    rows = []
    for key in sorted(table, key=str):
        name = labels[key] if isinstance(key, int) else str(key)
        rows.append([name, key, table[key]])
    _write_rows(path, ["attractor", "vertex", "count"], rows)


def write_partisan_csv(path, rounds) -> None:
    header = ["round", "within_coop", "cross_coop", "n_within", "n_cross"]
    rows = [
        [r.round_index, r.within_coop, r.cross_coop, r.n_within, r.n_cross]
        for r in rounds
    ]
    _write_rows(path, header, rows)


def write_config(path, mapping: dict) -> None:
    lines = [f"{key} = {_fmt(mapping[key])}" for key in sorted(mapping)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_config(path) -> dict[str, str]:
    out: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line: {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out
