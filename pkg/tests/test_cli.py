import filecmp
from pathlib import Path

import numpy as np
import pytest

from normgame import csvio
from normgame.cli import main
from normgame.games import chicken_reward
from normgame.payoff import chicken_gamma_closed_form
from normgame.replicator import Trajectory


def run(args):
    return main([str(a) for a in args])


class TestSubcommands:
    def test_classify(self, tmp_path, capsys):
        assert run(["classify", "--b", 0.4, "--out", tmp_path / "c"]) == 0
        table = csvio.read_norm_table_csv(tmp_path / "c" / "norm_classes.csv")
        assert len(table) == 16
        assert sum(rec["rational"] for rec in table) == 4
        assert "classified 16 norms" in capsys.readouterr().out

    def test_classify_flags_null_follower_outside_region(self, tmp_path):
        assert run(["classify", "--b", 0.9, "--out", tmp_path / "c"]) == 0
        table = csvio.read_norm_table_csv(tmp_path / "c" / "norm_classes.csv")
        follower = next(
            rec for rec in table if rec["prescription"] == "01" and rec["description"] == "01"
        )
        assert follower["null"]

    def test_gamma(self, tmp_path, capsys):
        assert run(["gamma", "--b", 0.5, "--out", tmp_path / "g"]) == 0
        out = capsys.readouterr().out
        assert "column-0 constant: True" in out
        summary = csvio.read_config(tmp_path / "g" / "gamma_summary.txt")
        assert float(summary["max_deviation"]) < 1e-10

    def test_gamma_ratio_at_peak(self, tmp_path, capsys):
        assert run(["gamma", "--b", 0.2, "--L", 2.0, "--out", tmp_path / "g"]) == 0
        assert "ratio = 1.8" in capsys.readouterr().out

    def test_simulate(self, tmp_path):
        assert run(
            ["simulate", "--b", 0.5, "--n-samples", 10, "--t-end", 200, "--out", tmp_path / "s"]
        ) == 0
        header, rows = csvio.read_rows(tmp_path / "s" / "basin.csv")
        assert header == ["attractor", "vertex", "count"]
        assert sum(int(r[2]) for r in rows) == 10

    def test_sweep(self, tmp_path):
        assert run(["sweep", "--grid", 16, "--out", tmp_path / "w"]) == 0
        for name in ("rationality.csv", "reward_ratio.csv", "stability.csv", "mi.csv"):
            assert (tmp_path / "w" / name).exists()
        records = csvio.read_long_map_csv(tmp_path / "w" / "rationality.csv")
        assert len(records) == 16 * 16

    def test_abm(self, tmp_path, capsys):
        assert run(
            ["abm", "--N", 200, "--rounds", 30, "--b", 0.4, "--out", tmp_path / "a"]
        ) == 0
        assert "signal-follow=1.0000" in capsys.readouterr().out
        freqs = csvio.read_abm_frequencies_csv(tmp_path / "a" / "abm_run.csv", 4)
        assert freqs.shape == (31, 4)
        np.testing.assert_allclose(freqs.sum(axis=1), 1.0, atol=1e-9)

    def test_partisan_demo(self, tmp_path):
        assert run(
            ["partisan-demo", "--N", 20, "--rounds", 10, "--out", tmp_path / "p"]
        ) == 0
        header, rows = csvio.read_rows(tmp_path / "p" / "partisan.csv")
        assert header[:3] == ["round", "within_coop", "cross_coop"]
        assert len(rows) == 10


class TestExitCodes:
    def test_usage_error_is_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["classify", "--b", "not-a-number", "--out", "x"])
        assert exc.value.code == 2

    def test_missing_out_is_2(self):
        with pytest.raises(SystemExit) as exc:
            run(["classify"])
        assert exc.value.code == 2

    def test_runtime_error_is_1_and_cleans_partial_outputs(self, tmp_path, capsys):
        code = run(["gamma", "--B", 4.0, "--out", tmp_path / "g"])
        assert code == 1
        assert "error" in capsys.readouterr().err
        leftovers = [p for p in (tmp_path / "g").glob("*") if p.is_file()]
        assert leftovers == []

    def test_unknown_config_key_is_2(self, tmp_path):
        cfg = tmp_path / "bad.txt"
        cfg.write_text("bogus = 1\n")
        with pytest.raises(SystemExit) as exc:
            run(["classify", "--config", cfg, "--out", tmp_path / "c"])
        assert exc.value.code == 2


class TestManifestReplay:
    @pytest.mark.parametrize(
        "args,artifact",
        [
            (["classify", "--b", 0.45], "norm_classes.csv"),
            (["simulate", "--b", 0.5, "--n-samples", 6, "--t-end", 100], "basin.csv"),
            (["abm", "--N", 100, "--rounds", 20], "abm_run.csv"),
            (["partisan-demo", "--N", 16, "--rounds", 8], "partisan.csv"),
        ],
    )
    def test_rerun_from_manifest_is_byte_identical(self, tmp_path, args, artifact):
        first = tmp_path / "first"
        second = tmp_path / "second"
        assert run([*args, "--out", first]) == 0
        assert run([args[0], "--config", first / "manifest.txt", "--out", second]) == 0
        assert filecmp.cmp(first / artifact, second / artifact, shallow=False)

    def test_manifest_records_version_and_params(self, tmp_path):
        assert run(["classify", "--b", 0.4, "--out", tmp_path / "c"]) == 0
        manifest = csvio.read_config(tmp_path / "c" / "manifest.txt")
        assert manifest["subcommand"] == "classify"
        assert float(manifest["b"]) == 0.4
        assert "version" in manifest and "seed" in manifest


class TestRoundTrips:
    def test_gamma_csv(self, tmp_path):
        gamma = chicken_gamma_closed_form(0.37, 0.8)
        path = tmp_path / "gamma.csv"
        csvio.write_gamma_csv(path, gamma)
        back = csvio.read_gamma_csv(path)
        np.testing.assert_array_equal(back.entries, gamma.entries)
        assert back.strategy_labels == gamma.strategy_labels
        assert back.substitutions == gamma.substitutions

    def test_matrix_csv(self, tmp_path):
        m = np.random.default_rng(0).random((3, 3))
        path = tmp_path / "m.csv"
        csvio.write_matrix_csv(path, m)
        np.testing.assert_array_equal(csvio.read_matrix_csv(path), m)

    def test_reward_csv(self, tmp_path):
        r = chicken_reward(2.7, 0.9)
        path = tmp_path / "r.csv"
        csvio.write_reward_csv(path, r)
        np.testing.assert_array_equal(csvio.read_reward_csv(path).entries, r.entries)

    def test_trajectory_csv(self, tmp_path):
        times = np.array([0.0, 0.5, 1.0])
        states = np.array([[0.25, 0.75], [0.4, 0.6], [0.9, 0.1]])
        path = tmp_path / "t.csv"
        csvio.write_trajectory_csv(path, Trajectory(times, states, "mixed"))
        t_back, s_back = csvio.read_trajectory_csv(path)
        np.testing.assert_array_equal(t_back, times)
        np.testing.assert_array_equal(s_back, states)

    def test_config_round_trip(self, tmp_path):
        path = tmp_path / "cfg.txt"
        csvio.write_config(path, {"L": 0.5, "seed": 7, "label": "x"})
        back = csvio.read_config(path)
        assert back == {"L": "0.5", "seed": "7", "label": "x"}

    def test_config_rejects_malformed_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("just some text\n")
        with pytest.raises(ValueError, match="malformed"):
            csvio.read_config(path)
