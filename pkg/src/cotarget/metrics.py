"""Objective interaction metrics computed from episode logs.

Everything here is a pure fold over the JSON-lines event stream: relative
scores, steals, path intersections (from the 5 Hz trajectory snapshots),
mean separation, and score inequality.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .engine import AI, HUMAN, EpisodeLog
from .geometry import Vec2, segments_intersect

INTERSECTION_REFRACTORY_S = 0.5


class EmptyRoundError(ValueError):
    """No spawned value in the log; relative scores are undefined."""


class MissingSnapshotsError(ValueError):
    """Log lacks trajectory snapshots required by this metric."""


@dataclass(frozen=True)
class MetricsRow:
    human_rel_score: float
    ai_rel_score: float
    team_rel_score: float
    human_points: int
    ai_points: int
    score_inequality: int
    ai_steals: int
    human_steals: int
    intersections: int
    mean_distance: float
    density: int
    agent: str
    seed: int


CSV_COLUMNS = [
    "human_rel_score",
    "ai_rel_score",
    "team_rel_score",
    "human_points",
    "ai_points",
    "score_inequality",
    "ai_steals",
    "human_steals",
    "intersections",
    "mean_distance",
    "density",
    "agent",
    "seed",
]


def _other(player: str) -> str:
    return AI if player == HUMAN else HUMAN


def relative_scores(log: EpisodeLog) -> tuple[float, float, float]:
    """Points scored by each side relative to all value spawned in the round."""
    available = sum(e["value"] for e in log.events if e["kind"] == "spawn")
    if available == 0:
        raise EmptyRoundError("empty round: no spawned value")
    human = sum(
        e["value"] for e in log.events if e["kind"] == "intercept" and e["player"] == HUMAN
    )
    ai = sum(
        e["value"] for e in log.events if e["kind"] == "intercept" and e["player"] == AI
    )
    human_rel = human / available
    ai_rel = ai / available
    return human_rel, ai_rel, human_rel + ai_rel


def count_steals(log: EpisodeLog, thief: str) -> int:
    """Interceptions by `thief` of a target the other player was pursuing.

    A steal is counted when the victim's mark on the target is active at
    interception time, or was active at the moment the thief first marked it.
    """
    victim = _other(thief)
    thief_first_mark: dict[int, int | None] = {}  # target -> victim's mark then
    current_victim_mark: int | None = None
    steals = 0
    for e in log.events:
        kind = e["kind"]
        if kind == "mark_set":
            if e["player"] == victim:
                current_victim_mark = e["target"]
            else:
                tid = e["target"]
                if tid is not None and tid not in thief_first_mark:
                    thief_first_mark[tid] = current_victim_mark
        elif kind == "intercept":
            tid = e["target"]
            if e["player"] == thief:
                active = current_victim_mark == tid
                marked_first = thief_first_mark.get(tid) == tid
                if active or marked_first:
                    steals += 1
            if current_victim_mark == tid:
                current_victim_mark = None
        elif kind == "exit":
            if current_victim_mark == e["target"]:
                current_victim_mark = None
    return steals


def _snapshots(log: EpisodeLog) -> list[tuple[float, Vec2, Vec2]]:
    snaps = [
        (e["t"], Vec2(*e["human_pos"]), Vec2(*e["ai_pos"]))
        for e in log.events
        if e["kind"] == "snapshot"
    ]
    if not snaps:
        raise MissingSnapshotsError("log lacks trajectory snapshots")
    return snaps


def count_intersections(
    log: EpisodeLog, refractory_s: float = INTERSECTION_REFRACTORY_S
) -> int:
    """Crossings of the two avatars' motion segments between snapshots.

    After a counted crossing, further crossings within the refractory window
    are ignored (the metric targets distinct path-crossing events, not
    prolonged shadowing).
    """
    snaps = _snapshots(log)
    count = 0
    last_counted = -float("inf")
    for (t0, h0, a0), (t1, h1, a1) in zip(snaps, snaps[1:]):
        if segments_intersect(h0, h1, a0, a1) and t1 >= last_counted + refractory_s:
            count += 1
            last_counted = t1
    return count


def mean_distance(log: EpisodeLog) -> float:
    """Mean pixel separation of the avatars over the trajectory snapshots."""
    snaps = _snapshots(log)
    total = 0.0
    for _, h, a in snaps:
        total += h.distance_to(a)
    return total / len(snaps)


def compute_row(log: EpisodeLog) -> MetricsRow:
    human_rel, ai_rel, team_rel = relative_scores(log)
    human_points = sum(
        e["value"] for e in log.events if e["kind"] == "intercept" and e["player"] == HUMAN
    )
    ai_points = sum(
        e["value"] for e in log.events if e["kind"] == "intercept" and e["player"] == AI
    )
    return MetricsRow(
        human_rel_score=human_rel,
        ai_rel_score=ai_rel,
        team_rel_score=team_rel,
        human_points=human_points,
        ai_points=ai_points,
        score_inequality=abs(human_points - ai_points),
        ai_steals=count_steals(log, AI),
        human_steals=count_steals(log, HUMAN),
        intersections=count_intersections(log),
        mean_distance=mean_distance(log),
        density=log.header["density"],
        agent=log.header.get("agent", "none"),
        seed=log.header["seed"],
    )


def write_csv(rows: list[MetricsRow], path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow([getattr(r, c) for c in CSV_COLUMNS])
