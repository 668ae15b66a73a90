"""Session orchestration: schedules, counterbalancing, archives, choice export.

A session is two blocks of two 3-minute rounds. Both blocks use the same agent
pair under different target densities; the pair is disguised per block with
color identities (block 1: green/purple, block 2: copper/blue, in play order).
Archives are flat per-participant directories: plan.json, round_<n>.jsonl,
survey_block<k>.json, choice_block<k>.json.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .engine import EngineConfig, EpisodeLog
from .metrics import compute_row
from .preference import (
    OBJECTIVE_FEATURES,
    SUBJECTIVE_FEATURES,
    ChoiceRecord,
)
from .runner import HumanProxy, run_episode

DENSITIES = (5, 15)
BLOCK_IDENTITIES = {1: ("green", "purple"), 2: ("copper", "blue")}
MIN_FREE_TEXT_CHARS = 10
SURVEY_STUB_SENTINEL = 0  # outside the 1..7 Likert range, marks synthetic data

SURVEY_ITEMS = [
    "The bot and I were a team.",
    "The bot was competent.",
    "I understood the bot's intentions.",
    "The bot understood my intentions.",
    "I contributed more to the team's performance.",
    "The bot was easy to play with.",
    "The bot was fun to play with.",
    "The bot and I had a similar playing style.",
]


@dataclass(frozen=True)
class RoundSpec:
    round_number: int  # 1..4
    block: int  # 1..2
    density: int
    agent: str
    identity: str


@dataclass(frozen=True)
class SessionPlan:
    participant_id: str
    agent_pair: tuple[str, str]
    counterbalance_index: int
    rounds: tuple[RoundSpec, ...]

    def block_rounds(self, block: int) -> tuple[RoundSpec, RoundSpec]:
        rs = tuple(r for r in self.rounds if r.block == block)
        assert len(rs) == 2
        return rs

    def to_json(self) -> dict:
        return {
            "participant_id": self.participant_id,
            "agent_pair": list(self.agent_pair),
            "counterbalance_index": self.counterbalance_index,
            "rounds": [asdict(r) for r in self.rounds],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SessionPlan":
        return cls(
            participant_id=data["participant_id"],
            agent_pair=tuple(data["agent_pair"]),
            counterbalance_index=data["counterbalance_index"],
            rounds=tuple(RoundSpec(**r) for r in data["rounds"]),
        )


def make_schedule(
    participant_id: str, agent_pair: tuple[str, str], counterbalance_index: int
) -> SessionPlan:
    """Counterbalanced session plan: index bit 0 flips the density order,
    bit 1 flips the within-block agent order."""
    a, b = agent_pair
    if a == b:
        raise ValueError("agent pair must be two distinct kinds")
    if counterbalance_index not in (0, 1, 2, 3):
        raise ValueError(f"counterbalance index must be in 0..3, got {counterbalance_index}")
    densities = DENSITIES if (counterbalance_index & 1) == 0 else DENSITIES[::-1]
    agents = (a, b) if (counterbalance_index >> 1 & 1) == 0 else (b, a)
    rounds = []
    for block in (1, 2):
        identities = BLOCK_IDENTITIES[block]
        for slot in (0, 1):
            rounds.append(
                RoundSpec(
                    round_number=(block - 1) * 2 + slot + 1,
                    block=block,
                    density=densities[block - 1],
                    agent=agents[slot],
                    identity=identities[slot],
                )
            )
    return SessionPlan(participant_id, (a, b), counterbalance_index, tuple(rounds))


def round_seed(session_seed: int, round_number: int) -> int:
    return int(np.random.SeedSequence([session_seed, round_number]).generate_state(1)[0])


def run_session(
    plan: SessionPlan,
    out_dir,
    seed: int = 0,
    proxy: HumanProxy | None = None,
) -> Path:
    """Headless session: 4 rounds with the scripted proxy, stub questionnaires.

    Survey stubs use the sentinel value 0 (outside 1..7) so synthetic
    subjective data can never pass for human responses; the forced choice is a
    seeded coin flip.
    """
    out = Path(out_dir) / plan.participant_id
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "plan.json", "w") as f:
        json.dump(plan.to_json(), f, indent=2)

    choice_rng = np.random.default_rng([seed, 0x63686F69])
    for r in plan.rounds:
        config = EngineConfig(density=r.density, seed=round_seed(seed, r.round_number))
        world, _ = run_episode(config, r.agent, proxy=proxy)
        world.log.save(out / f"round_{r.round_number}.jsonl")

    for block in (1, 2):
        first, second = plan.block_rounds(block)
        surveys = [
            {
                "participant_id": plan.participant_id,
                "block": block,
                "agent": spec.agent,
                "identity": spec.identity,
                "stub": True,
                **{f"q{i}": SURVEY_STUB_SENTINEL for i in range(1, 9)},
            }
            for spec in (first, second)
        ]
        with open(out / f"survey_block{block}.json", "w") as f:
            json.dump(surveys, f, indent=2)
        chosen = first if choice_rng.random() < 0.5 else second
        choice = {
            "participant_id": plan.participant_id,
            "block": block,
            "identity": chosen.identity,
            "agent": chosen.agent,
            "free_text": "headless proxy stub choice",
            "stub": True,
        }
        with open(out / f"choice_block{block}.json", "w") as f:
            json.dump(choice, f, indent=2)
    return out


def is_complete(session_dir) -> bool:
    d = Path(session_dir)
    needed = ["plan.json"]
    needed += [f"round_{n}.jsonl" for n in range(1, 5)]
    needed += [f"survey_block{k}.json" for k in (1, 2)]
    needed += [f"choice_block{k}.json" for k in (1, 2)]
    return all((d / name).exists() for name in needed)


def load_plan(session_dir) -> SessionPlan:
    with open(Path(session_dir) / "plan.json") as f:
        return SessionPlan.from_json(json.load(f))


def _objective_features(log: EpisodeLog) -> dict[str, float]:
    row = compute_row(log)
    return {
        "human_score": float(row.human_points),
        "ai_score": float(row.ai_points),
        "score_inequality": float(row.score_inequality),
        "ai_steals": float(row.ai_steals),
        "intersections": float(row.intersections),
    }


def export_choices(
    session_dirs: list, feature_set: str = "objective"
) -> tuple[list[ChoiceRecord], list[str]]:
    """One ChoiceRecord per (participant, block); X is the first-presented agent.

    Incomplete sessions (or blocks with unreadable pieces) are skipped and
    reported, mirroring the exclusion of incomplete participants.
    """
    records: list[ChoiceRecord] = []
    skipped: list[str] = []
    for session_dir in session_dirs:
        d = Path(session_dir)
        if not is_complete(d):
            skipped.append(f"{d}: incomplete session")
            continue
        plan = load_plan(d)
        for block in (1, 2):
            first, second = plan.block_rounds(block)
            try:
                if feature_set == "objective":
                    fx = _objective_features(EpisodeLog.load(d / f"round_{first.round_number}.jsonl"))
                    fy = _objective_features(EpisodeLog.load(d / f"round_{second.round_number}.jsonl"))
                else:
                    with open(d / f"survey_block{block}.json") as f:
                        surveys = json.load(f)
                    by_identity = {s["identity"]: s for s in surveys}
                    fx = {q: float(by_identity[first.identity][q]) for q in SUBJECTIVE_FEATURES}
                    fy = {q: float(by_identity[second.identity][q]) for q in SUBJECTIVE_FEATURES}
                with open(d / f"choice_block{block}.json") as f:
                    choice = json.load(f)
            except (OSError, KeyError, ValueError) as e:
                skipped.append(f"{d} block {block}: {e}")
                continue
            records.append(
                ChoiceRecord(
                    participant_id=plan.participant_id,
                    density=first.density,
                    agent_x=first.agent,
                    agent_y=second.agent,
                    features_x=fx,
                    features_y=fy,
                    chose_x=choice["identity"] == first.identity,
                )
            )
    return records, skipped


FEATURE_NAMES = {"objective": OBJECTIVE_FEATURES, "subjective": SUBJECTIVE_FEATURES}
