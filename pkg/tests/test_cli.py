import csv
import json

import pytest

from cotarget.cli import build_parser, main
from cotarget.preference import OBJECTIVE_FEATURES, synthesize_records, write_choice_csv


class TestParser:
    def test_requires_subcommand(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_rejects_unknown_agent(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["simulate", "--agent", "psychic", "--out", "x"])


class TestSimulateMetricsPipeline:
    def test_end_to_end(self, tmp_path, capsys):
        logs = tmp_path / "logs"
        rc = main(
            [
                "simulate",
                "--agent", "omit",
                "--density", "5",
                "--seed", "41",
                "--episodes", "2",
                "--out", str(logs),
            ]
        )
        assert rc == 0
        produced = sorted(logs.glob("*.jsonl"))
        assert len(produced) == 2
        out = capsys.readouterr().out
        assert "human=" in out and "ai=" in out

        metrics_csv = tmp_path / "metrics.csv"
        rc = main(["metrics", "--in", str(logs), "--out", str(metrics_csv)])
        assert rc == 0
        with open(metrics_csv, newline="") as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 2
        assert {r["agent"] for r in rows} == {"omit"}
        assert {r["seed"] for r in rows} == {"41", "42"}

    def test_metrics_empty_dir_fails(self, tmp_path, capsys):
        empty = tmp_path / "none"
        empty.mkdir()
        assert main(["metrics", "--in", str(empty), "--out", str(tmp_path / "m.csv")]) == 1
        assert "no .jsonl logs" in capsys.readouterr().err


class TestReplayCommand:
    def test_replay_ok(self, tmp_path, capsys):
        logs = tmp_path / "logs"
        main(["simulate", "--agent", "divide", "--seed", "7", "--out", str(logs)])
        log_path = next(logs.glob("*.jsonl"))
        assert main(["replay", "--log", str(log_path)]) == 0
        assert "replay ok" in capsys.readouterr().out

    def test_replay_tampered_fails(self, tmp_path, capsys):
        logs = tmp_path / "logs"
        main(["simulate", "--agent", "divide", "--seed", "8", "--out", str(logs)])
        log_path = next(logs.glob("*.jsonl"))
        lines = log_path.read_text().splitlines()
        for i, line in enumerate(lines):
            event = json.loads(line)
            if event.get("kind") == "intercept":
                event["value"] += 1
                lines[i] = json.dumps(event, separators=(",", ":"))
                break
        log_path.write_text("\n".join(lines) + "\n")
        assert main(["replay", "--log", str(log_path)]) == 1
        assert "FAIL" in capsys.readouterr().err


class TestFitPreference:
    def test_fit_from_csv(self, tmp_path, capsys):
        records = synthesize_records(
            120, 0.0,
            {f: (1.2 if f == "ai_score" else 0.0) for f in OBJECTIVE_FEATURES},
            seed=5,
        )
        choices = tmp_path / "choices.csv"
        write_choice_csv(records, OBJECTIVE_FEATURES, choices)
        coefs = tmp_path / "coefs.csv"
        rc = main(
            [
                "fit-preference",
                "--choices", str(choices),
                "--features", "objective",
                "--folds", "4",
                "--out", str(coefs),
            ]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "cv accuracy=" in out and "auc=" in out
        with open(coefs, newline="") as f:
            rows = list(csv.DictReader(f))
        assert [r["coefficient"] for r in rows] == ["bias"] + OBJECTIVE_FEATURES
        ai_row = next(r for r in rows if r["coefficient"] == "ai_score")
        assert float(ai_row["mean"]) > 0.3


class TestBinomialBF:
    def test_prints_value(self, capsys):
        assert main(["binomial-bf", "--k", "2", "--n", "3"]) == 0
        assert float(capsys.readouterr().out) == pytest.approx(2 / 3)
