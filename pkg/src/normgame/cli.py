"""Command-line interface.

Subcommands: classify, gamma, simulate, sweep, abm, partisan-demo. Every
run resolves its parameters from built-in defaults, then an optional
key-value config file (``--config``), then explicit flags, and writes a
``manifest.txt`` beside its outputs containing the fully resolved
configuration; re-running any subcommand with ``--config manifest.txt``
reproduces the outputs byte for byte. Exit codes: 0 success, 2 usage
error, 1 runtime failure (partially written outputs are removed).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, abm, csvio, partisan, replicator, sweep
from .games import chicken_reward
from .norms import classify_all, enumerate_norms, mixed_nash_chicken
from .payoff import Strategy, build_chicken_gamma, build_gamma, chicken_gamma_closed_form
from .probkit import SignalParams, signal_dist

_COMMON = {
    "B": (float, 3.0),
    "L": (float, 0.5),
    "b": (float, 0.5),
    "g": (float, 0.0),
    "seed": (int, 12345),
}

# parameter schema per subcommand: name -> (type, default)
SCHEMAS: dict[str, dict[str, tuple]] = {
    "classify": {**_COMMON},
    "gamma": {**_COMMON},
    "simulate": {**_COMMON, "n_samples": (int, 30), "dt": (float, 0.01), "t_end": (float, 500.0)},
    "sweep": {**_COMMON, "grid": (int, 200)},
    "abm": {
        **_COMMON,
        "b": (float, 0.4),
        "N": (int, 1000),
        "rounds": (int, 500),
        "beta": (float, 1.0),
        "mix": (str, "0,0,1,0"),
    },
    "partisan-demo": {
        **_COMMON,
        "b": (float, 0.4),
        "N": (int, 100),
        "rounds": (int, 200),
        "D": (int, 8),
    },
}

_FLAG_HELP = {
    "B": "mutual-cooperation benefit",
    "L": "coordination challenge level (temptation excess)",
    "b": "coordination potential of the signal distribution",
    "g": "exploitation mass of the signal distribution",
    "seed": "root RNG seed",
    "n_samples": "number of uniformly sampled starts",
    "dt": "integration step size",
    "t_end": "integration horizon",
    "grid": "sweep resolution per axis",
    "N": "agent count (abm) or group size (partisan-demo)",
    "rounds": "number of simulation rounds",
    "beta": "imitation selection strength",
    "mix": "comma-separated initial strategy frequencies",
    "D": "opinion vector dimension",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normgame",
        description="Signal-correlated social norms: classification, payoffs, dynamics.",
    )
    parser.add_argument("--version", action="version", version=f"normgame {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, schema in SCHEMAS.items():
        p = sub.add_parser(name, help=f"run the {name} pipeline")
        p.add_argument("--config", type=str, default=None, help="key=value parameter file")
        p.add_argument("--out", type=str, required=True, help="output directory")
        for key, (typ, default) in schema.items():
            flag = "--" + key.replace("_", "-")
            p.add_argument(flag, type=typ, default=None, help=f"{_FLAG_HELP[key]} (default {default})")
    return parser


def resolve_params(args: argparse.Namespace) -> dict:
    schema = SCHEMAS[args.subcommand]
    params = {key: default for key, (typ, default) in schema.items()}
    if args.config:
        file_values = csvio.read_config(args.config)
        for key, raw in file_values.items():
            if key in schema:
                params[key] = schema[key][0](raw)
            elif key not in ("subcommand", "version", "out"):
                raise ValueError(f"unknown config key {key!r} for {args.subcommand}")
    for key in schema:
        given = getattr(args, key)
        if given is not None:
            params[key] = given
    return params


class _OutputTracker:
    """Registers written files so a failed run leaves no partial outputs."""

    def __init__(self, outdir: Path):
        self.outdir = outdir
        self.paths: list[Path] = []

    def path(self, name: str) -> Path:
        p = self.outdir / name
        self.paths.append(p)
        return p

    def cleanup(self) -> None:
        for p in self.paths:
            try:
                p.unlink(missing_ok=True)
            except OSError:
                pass


def _norm_strategies(norms, nash):
    strategies = [Strategy("default", nash.policy())]
    strategies += [Strategy(f"norm{nm.id}", nm.prescription, norm=nm) for nm in norms]
    return strategies


def cmd_classify(params: dict, out: _OutputTracker) -> None:
    joint = signal_dist(SignalParams(b=params["b"], g=params["g"]))
    reward = chicken_reward(params["B"], params["L"])
    nash = mixed_nash_chicken(params["B"], params["L"])
    norms = enumerate_norms(2, 2)
    gamma = build_gamma(_norm_strategies(norms, nash), joint, reward, nash)
    classes = classify_all(norms, joint, reward, gamma)
    csvio.write_norm_table_csv(out.path("norm_classes.csv"), norms, classes)
    counts = {
        flag: sum(getattr(cl, flag) for cl in classes) for flag in csvio.NORM_FLAG_COLUMNS
    }
    csvio.write_config(out.path("class_counts.txt"), counts)
    print(f"classified {len(norms)} norms: " + ", ".join(f"{k}={v}" for k, v in counts.items()))


def cmd_gamma(params: dict, out: _OutputTracker) -> None:
    if params["B"] != 3.0 or params["g"] != 0.0:
        raise ValueError("the closed-form payoff matrix is defined for B=3, g=0")
    numeric = build_chicken_gamma(params["b"], params["L"])
    closed = chicken_gamma_closed_form(params["b"], params["L"])
    deviation = float(np.abs(numeric.entries - closed.entries).max())
    col0 = closed.entries[:, 0]
    col0_constant = bool(np.max(np.abs(col0 - col0[0])) <= 1e-12)
    ratio = sweep.reward_ratio(params["b"], params["L"])
    csvio.write_gamma_csv(out.path("gamma_numeric.csv"), numeric)
    csvio.write_gamma_csv(out.path("gamma_closed_form.csv"), closed)
    csvio.write_config(
        out.path("gamma_summary.txt"),
        {
            "max_deviation": deviation,
            "column0_constant": col0_constant,
            "self_play_over_default_ratio": ratio,
        },
    )
    print(
        f"max |numeric - closed| = {deviation:.3e}; column-0 constant: {col0_constant}; "
        f"self-play/default reward ratio = {ratio:.6g}"
    )


def cmd_simulate(params: dict, out: _OutputTracker) -> None:
    if params["B"] != 3.0 or params["g"] != 0.0:
        raise ValueError("simulate uses the closed-form payoff matrix (B=3, g=0)")
    gamma = chicken_gamma_closed_form(params["b"], params["L"])
    table = replicator.basin_sample(
        gamma,
        n_samples=params["n_samples"],
        seed=params["seed"],
        t_end=params["t_end"],
        dt=params["dt"],
    )
    csvio.write_basin_csv(out.path("basin.csv"), table, gamma.strategy_labels)
    rng = np.random.default_rng((params["seed"], 0))
    x0 = replicator.sample_simplex(rng, 4)
    trajectory = replicator.integrate(
        x0, gamma, dt=params["dt"], t_end=params["t_end"]
    )
    csvio.write_trajectory_csv(out.path("trajectory.csv"), trajectory)
    spectra = []
    for vertex in range(4):
        spec = replicator.vertex_spectrum(vertex, gamma)
        spectra.append(
            {
                "b": params["b"],
                "L": params["L"],
                "vertex": vertex,
                "eigenvalues": list(spec.eigenvalues),
                "lambda_max": spec.lambda_max_real,
                "class": replicator.classify_stability(spec),
            }
        )
    csvio.write_spectra_csv(out.path("spectra.csv"), spectra)
    share = {k: v / params["n_samples"] for k, v in table.items()}
    print(f"basin shares: " + ", ".join(f"{k}: {v:.1%}" for k, v in sorted(share.items(), key=lambda kv: str(kv[0]))))


def cmd_sweep(params: dict, out: _OutputTracker) -> None:
    grid = sweep.GridSpec(g=params["g"], B=params["B"], resolution=params["grid"])
    csvio.write_long_map_csv(out.path("rationality.csv"), sweep.rationality_map(grid))
    if params["g"] == 0.0 and params["B"] == 3.0:
        csvio.write_long_map_csv(out.path("reward_ratio.csv"), sweep.reward_ratio_map(grid))
    else:
        csvio.write_long_map_csv(
            out.path("reward_ratio.csv"),
            sweep.reward_ratio_map(sweep.GridSpec(resolution=params["grid"])),
        )
    csvio.write_long_maps_csv(out.path("stability.csv"), sweep.stability_map(grid))
    csvio.write_long_map_csv(
        out.path("mi.csv"),
        sweep.mi_map((0.0, 1.0), (0.0, 1.0), params["grid"]),
    )
    print(f"wrote 4 sweep files at resolution {params['grid']}")


def cmd_abm(params: dict, out: _OutputTracker) -> None:
    mix = tuple(float(v) for v in params["mix"].split(","))
    config = abm.RunConfig(
        n_agents=params["N"],
        rounds=params["rounds"],
        beta=params["beta"],
        initial_mix=mix,
        b0=params["b"],
        g0=params["g"],
        B=params["B"],
        L=params["L"],
        seed=params["seed"],
    )
    result = abm.run(config)
    csvio.write_abm_csv(
        out.path("abm_run.csv"),
        result.strategy_labels,
        result.frequencies,
        result.gamma,
        result.estimates,
    )
    final = dict(zip(result.strategy_labels, result.frequencies[-1]))
    print("final frequencies: " + ", ".join(f"{k}={v:.4f}" for k, v in final.items()))


def cmd_partisan_demo(params: dict, out: _OutputTracker) -> None:
    config = partisan.DemoConfig(
        n_per_group=params["N"],
        opinion_dim=params["D"],
        rounds=params["rounds"],
        B=params["B"],
        L=params["L"],
        b0=params["b"],
        seed=params["seed"],
    )
    rows = partisan.demo_run(config)
    csvio.write_partisan_csv(out.path("partisan.csv"), rows)
    last = rows[-1]
    print(
        f"round {last.round_index}: within-group cooperation {last.within_coop:.3f}, "
        f"cross-group cooperation {last.cross_coop:.3f}"
    )


_COMMANDS = {
    "classify": cmd_classify,
    "gamma": cmd_gamma,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "abm": cmd_abm,
    "partisan-demo": cmd_partisan_demo,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = resolve_params(args)
    except Exception as exc:
        parser.error(str(exc))  # exits with code 2
    outdir = Path(args.out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory {outdir}: {exc}", file=sys.stderr)
        return 1
    tracker = _OutputTracker(outdir)
    try:
        _COMMANDS[args.subcommand](params, tracker)
        manifest = dict(params)
        manifest["subcommand"] = args.subcommand
        manifest["version"] = __version__
        csvio.write_config(outdir / "manifest.txt", manifest)
    except Exception as exc:
        tracker.cleanup()
        print(f"error [{args.subcommand}]: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
