import csv
import math

import pytest

from cotarget.engine import AI, HUMAN, EngineConfig, EpisodeLog
from cotarget.metrics import (
    CSV_COLUMNS,
    EmptyRoundError,
    MissingSnapshotsError,
    compute_row,
    count_intersections,
    count_steals,
    mean_distance,
    relative_scores,
    write_csv,
)
from cotarget.runner import run_episode


def synthetic_log(events, density=5, seed=0):
    log = EpisodeLog({"density": density, "seed": seed, "agent": "omit"})
    for e in events:
        log.append(e)
    return log


def spawn(t, value, tid=0):
    return {"kind": "spawn", "t": t, "target": tid, "value": value}


def mark(t, player, tid):
    return {"kind": "mark_set", "t": t, "player": player, "target": tid}


def intercept(t, player, tid, value=1):
    return {"kind": "intercept", "t": t, "player": player, "target": tid, "value": value}


def exit_(t, tid):
    return {"kind": "exit", "t": t, "target": tid}


def snap(t, human_pos, ai_pos):
    return {"kind": "snapshot", "t": t, "human_pos": list(human_pos), "ai_pos": list(ai_pos)}


class TestRelativeScores:
    def test_basic_fractions(self):
        log = synthetic_log(
            [
                spawn(0.0, 10, 1),
                spawn(0.0, 10, 2),
                spawn(1.0, 20, 3),
                intercept(2.0, HUMAN, 1, value=10),
                intercept(3.0, AI, 3, value=20),
            ]
        )
        human, ai, team = relative_scores(log)
        assert human == pytest.approx(0.25)
        assert ai == pytest.approx(0.50)
        assert team == pytest.approx(0.75)

    def test_team_is_exact_sum(self):
        log = synthetic_log([spawn(0.0, 7, 1), intercept(1.0, HUMAN, 1, value=7)])
        human, ai, team = relative_scores(log)
        assert team == human + ai

    def test_empty_round_raises(self):
        with pytest.raises(EmptyRoundError):
            relative_scores(synthetic_log([]))

    def test_matches_episode_scores(self):
        config = EngineConfig(density=5, seed=31, round_length_s=60.0)
        world, _ = run_episode(config, "omit")
        human, ai, _ = relative_scores(world.log)
        assert human == pytest.approx(world.human_score / world.total_spawned_value)
        assert ai == pytest.approx(world.ai_score / world.total_spawned_value)


class TestCountSteals:
    def test_active_mark_stolen(self):
        # Victim still marking target 1 when the thief intercepts it.
        log = synthetic_log(
            [
                mark(1.0, HUMAN, 1),
                intercept(2.0, AI, 1),
            ]
        )
        assert count_steals(log, AI) == 1
        assert count_steals(log, HUMAN) == 0

    def test_victim_moved_on_after_thief_committed(self):
        # Victim was marking target 1 when the thief first marked it, then
        # switched away; the interception still counts as a steal.
        log = synthetic_log(
            [
                mark(1.0, HUMAN, 1),
                mark(1.5, AI, 1),
                mark(2.0, HUMAN, 2),
                intercept(3.0, AI, 1),
            ]
        )
        assert count_steals(log, AI) == 1

    def test_never_contested_is_not_a_steal(self):
        # Victim only marked target 1 after the thief had already first marked
        # it while it was unclaimed; no steal either way.
        log = synthetic_log(
            [
                mark(1.0, AI, 1),
                mark(2.0, HUMAN, 2),
                mark(2.5, HUMAN, 1),
                mark(2.6, HUMAN, 2),
                intercept(3.0, AI, 1),
            ]
        )
        assert count_steals(log, AI) == 0

    def test_mark_cleared_by_exit(self):
        log = synthetic_log(
            [
                mark(1.0, HUMAN, 1),
                exit_(2.0, 1),
                mark(2.5, AI, 2),
                intercept(3.0, AI, 2),
            ]
        )
        assert count_steals(log, AI) == 0

    def test_own_interceptions_never_steals(self):
        log = synthetic_log(
            [
                mark(1.0, HUMAN, 1),
                intercept(2.0, HUMAN, 1),
            ]
        )
        assert count_steals(log, AI) == 0
        assert count_steals(log, HUMAN) == 0

    def test_symmetric_definition(self):
        log = synthetic_log(
            [
                mark(1.0, AI, 5),
                intercept(2.0, HUMAN, 5),
            ]
        )
        assert count_steals(log, HUMAN) == 1
        assert count_steals(log, AI) == 0


class TestCountIntersections:
    def test_no_snapshots_raises(self):
        with pytest.raises(MissingSnapshotsError):
            count_intersections(synthetic_log([]))

    def test_parallel_paths_never_cross(self):
        events = [snap(0.2 * i, (i, 0.0), (i, 10.0)) for i in range(20)]
        assert count_intersections(synthetic_log(events)) == 0

    def test_single_crossing(self):
        events = [
            snap(0.0, (-10.0, -10.0), (-10.0, 10.0)),
            snap(0.2, (10.0, 10.0), (10.0, -10.0)),
        ]
        assert count_intersections(synthetic_log(events)) == 1

    def test_refractory_suppresses_zigzag(self):
        # Crossings every 0.2 s for 1 s; with a 0.5 s refractory only every
        # third segment's crossing is counted.
        events = []
        for i in range(11):
            y = 10.0 if i % 2 == 0 else -10.0
            events.append(snap(0.2 * i, (float(i), y), (float(i), -y)))
        assert count_intersections(synthetic_log(events)) == 4
        assert count_intersections(synthetic_log(events), refractory_s=0.0) == 10

    def test_crossings_far_apart_all_counted(self):
        events = [
            snap(0.0, (-10.0, -1.0), (-10.0, 1.0)),
            snap(0.2, (0.0, 1.0), (0.0, -1.0)),
            snap(5.0, (10.0, 1.0), (10.0, -1.0)),
            snap(5.2, (20.0, -1.0), (20.0, 1.0)),
        ]
        assert count_intersections(synthetic_log(events)) == 2


class TestMeanDistance:
    def test_constant_separation(self):
        events = [snap(0.2 * i, (0.0, 0.0), (3.0, 4.0)) for i in range(5)]
        assert mean_distance(synthetic_log(events)) == pytest.approx(5.0)

    def test_varying_separation(self):
        events = [
            snap(0.0, (0.0, 0.0), (10.0, 0.0)),
            snap(0.2, (0.0, 0.0), (20.0, 0.0)),
        ]
        assert mean_distance(synthetic_log(events)) == pytest.approx(15.0)

    def test_no_snapshots_raises(self):
        with pytest.raises(MissingSnapshotsError):
            mean_distance(synthetic_log([]))


class TestComputeRow:
    def test_row_from_real_episode(self):
        config = EngineConfig(density=15, seed=33, round_length_s=60.0)
        world, _ = run_episode(config, "divide")
        row = compute_row(world.log)
        assert row.human_points == world.human_score
        assert row.ai_points == world.ai_score
        assert row.score_inequality == abs(world.human_score - world.ai_score)
        assert row.team_rel_score == row.human_rel_score + row.ai_rel_score
        assert 0.0 <= row.team_rel_score <= 1.0
        assert row.density == 15
        assert row.agent == "divide"
        assert row.seed == 33
        assert row.mean_distance > 0
        assert row.ai_steals >= 0 and row.human_steals >= 0

    def test_csv_round_trip(self, tmp_path):
        config = EngineConfig(density=5, seed=34, round_length_s=30.0)
        world, _ = run_episode(config, "omit")
        row = compute_row(world.log)
        out = tmp_path / "metrics.csv"
        write_csv([row], out)
        with open(out, newline="") as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 1
        assert list(rows[0].keys()) == CSV_COLUMNS
        assert int(rows[0]["human_points"]) == row.human_points
        assert float(rows[0]["mean_distance"]) == pytest.approx(row.mean_distance)
        assert rows[0]["agent"] == "omit"
