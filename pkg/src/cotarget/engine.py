"""Deterministic fixed-timestep simulation of the circular-arena interception game.

All randomness flows through one seeded PCG64 generator owned by the world, and
spawn replacements are triggered purely by geometric perimeter exits (ghost paths
keep advancing after interception), so the spawn stream is independent of how
either player clicks. Every state change is recorded in an append-only event log
that replays bit-for-bit from the header seed.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Arena, Vec2, clamp_to_arena, solve_interception

LOG_FORMAT_VERSION = 1

HUMAN = "human"
AI = "ai"


class ConfigError(ValueError):
    """Invalid engine configuration."""


class InvalidTargetError(ValueError):
    """Click on an unknown, ghost, or exited target."""


class ReplayDivergenceError(RuntimeError):
    """Replayed event stream differs from the recorded log."""


@dataclass(frozen=True)
class EngineConfig:
    density: int
    seed: int
    round_length_s: float = 180.0
    avatar_speed: float = 200.0
    arena_radius: float = 400.0
    collision_radius: float = 14.0
    dt: float = 0.02
    spawn_cone_half_angle_deg: float = 60.0
    snapshot_interval_s: float = 0.2

    def __post_init__(self) -> None:
        if self.density <= 0:
            raise ConfigError(f"density must be positive, got {self.density}")
        if self.round_length_s <= 0:
            raise ConfigError(
                f"round length must be positive, got {self.round_length_s}"
            )
        if self.dt <= 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")

    @property
    def num_ticks(self) -> int:
        return int(round(self.round_length_s / self.dt))

    @property
    def snapshot_every_ticks(self) -> int:
        return max(1, int(round(self.snapshot_interval_s / self.dt)))


VISIBLE = "visible"
GHOST = "ghost"
EXITED = "exited"


@dataclass
class Target:
    id: int
    pos: Vec2
    vel: Vec2
    value: int
    state: str
    spawn_time: float


@dataclass
class Avatar:
    owner: str
    pos: Vec2
    speed: float
    mark: int | None = None
    nav_dest: Vec2 | None = None


class EpisodeLog:
    """Append-only event record, serializable as JSON lines (header first)."""

    def __init__(self, header: dict):
        self.header = header
        self.events: list[dict] = []

    def append(self, event: dict) -> None:
        self.events.append(event)

    def to_jsonl(self) -> str:
        lines = [json.dumps(self.header, separators=(",", ":"))]
        for e in self.events:
            lines.append(json.dumps(e, separators=(",", ":")))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "EpisodeLog":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty log")
        log = cls(json.loads(lines[0]))
        for ln in lines[1:]:
            log.append(json.loads(ln))
        return log

    def save(self, path) -> None:
        with open(path, "w") as f:
            f.write(self.to_jsonl())

    @classmethod
    def load(cls, path) -> "EpisodeLog":
        with open(path) as f:
            return cls.from_jsonl(f.read())

    def sha256(self) -> str:
        return hashlib.sha256(self.to_jsonl().encode()).hexdigest()


class WorldState:
    """Full simulation state at a tick. Mutated only by this module's functions."""

    def __init__(self, config: EngineConfig, agent_label: str = "none"):
        self.config = config
        self.arena = Arena(config.arena_radius)
        self.ticks = 0
        self.targets: dict[int, Target] = {}
        self.human = Avatar(HUMAN, Vec2(-100.0, 0.0), config.avatar_speed)
        self.ai = Avatar(AI, Vec2(100.0, 0.0), config.avatar_speed)
        self.human_score = 0
        self.ai_score = 0
        self.total_spawned_value = 0
        self.exited_visible_value = 0
        self.rng = np.random.Generator(np.random.PCG64(config.seed))
        self._next_id = 0
        self.log = EpisodeLog(
            {
                "format_version": LOG_FORMAT_VERSION,
                "seed": config.seed,
                "density": config.density,
                "agent": agent_label,
                "round_length_s": config.round_length_s,
                "avatar_speed": config.avatar_speed,
                "arena_radius": config.arena_radius,
                "collision_radius": config.collision_radius,
                "dt": config.dt,
                "spawn_cone_half_angle_deg": config.spawn_cone_half_angle_deg,
                "snapshot_interval_s": config.snapshot_interval_s,
            }
        )

    @property
    def clock(self) -> float:
        return self.ticks * self.config.dt

    def avatar(self, owner: str) -> Avatar:
        if owner == HUMAN:
            return self.human
        if owner == AI:
            return self.ai
        raise ValueError(f"unknown player {owner!r}")

    def visible_targets(self) -> list[Target]:
        return [t for t in self.targets.values() if t.state == VISIBLE]

    def visible_count(self) -> int:
        return sum(1 for t in self.targets.values() if t.state == VISIBLE)

    def ghost_count(self) -> int:
        return sum(1 for t in self.targets.values() if t.state == GHOST)

    def _emit(self, kind: str, **payload) -> dict:
        event = {"t": self.clock, "kind": kind, **payload}
        self.log.append(event)
        return event


def sample_target_value(rng: np.random.Generator) -> int:
    """Draw a point value in 0..15 from a discretized Beta(1,2).

    Inverse-CDF: x = 1 - sqrt(1 - u) is Beta(1,2) distributed; binning over
    sixteenths of [0,1) makes low values the most common (mass of bin v is the
    integral of 2(1-x) over [v/16, (v+1)/16)).
    """
    u = rng.random()
    x = 1.0 - math.sqrt(1.0 - u)
    return min(int(x * 16.0), 15)


def spawn_target(world: WorldState) -> Target:
    """Spawn one target on the arena rim, consuming RNG deterministically.

    Draw order (fixed for replay): rim angle, heading deviation, speed
    fraction, value uniform.
    """
    cfg = world.config
    rng = world.rng
    theta = rng.uniform(0.0, 2.0 * math.pi)
    half = math.radians(cfg.spawn_cone_half_angle_deg)
    deviation = rng.uniform(-half, half)
    speed = rng.uniform(0.50, 0.99) * cfg.avatar_speed
    value = sample_target_value(rng)

    pos = Vec2.from_angle(theta, cfg.arena_radius)
    inward = theta + math.pi
    vel = Vec2.from_angle(inward + deviation, speed)

    target = Target(
        id=world._next_id,
        pos=pos,
        vel=vel,
        value=value,
        state=VISIBLE,
        spawn_time=world.clock,
    )
    world._next_id += 1
    world.targets[target.id] = target
    world.total_spawned_value += value
    world._emit(
        "spawn",
        target=target.id,
        pos=[pos.x, pos.y],
        vel=[vel.x, vel.y],
        value=value,
    )
    return target


def new_world(config: EngineConfig, agent_label: str = "none") -> WorldState:
    """World at clock 0 with `density` fresh targets and avatars at their posts."""
    world = WorldState(config, agent_label)
    for _ in range(config.density):
        spawn_target(world)
    return world


def handle_click(world: WorldState, player: str, target_id: int | None) -> list[dict]:
    """Apply a click (on a visible target, or None for the center disc).

    Sets the player's mark and navigation destination; unreachable interception
    points are clamped to the rim, where the avatar will sit until re-clicked.
    Raises InvalidTargetError for ghost/exited/unknown ids (no state change).
    """
    avatar = world.avatar(player)
    events = []
    if target_id is None:
        avatar.mark = None
        avatar.nav_dest = Vec2(0.0, 0.0)
        events.append(world._emit("center_click", player=player))
        events.append(world._emit("mark_set", player=player, target=None, dest=[0.0, 0.0]))
        return events

    target = world.targets.get(target_id)
    if target is None or target.state != VISIBLE:
        raise InvalidTargetError(f"invalid target {target_id}")
    sol = solve_interception(avatar.pos, avatar.speed, target.pos, target.vel, world.arena)
    dest = sol.point if sol.reachable else clamp_to_arena(sol.point, world.arena)
    avatar.mark = target_id
    avatar.nav_dest = dest
    events.append(world._emit("click", player=player, target=target_id))
    events.append(
        world._emit("mark_set", player=player, target=target_id, dest=[dest.x, dest.y])
    )
    return events


def _advance_avatar(avatar: Avatar, dt: float) -> None:
    dest = avatar.nav_dest
    if dest is None:
        return
    dx = dest.x - avatar.pos.x
    dy = dest.y - avatar.pos.y
    dist = math.sqrt(dx * dx + dy * dy)
    step = avatar.speed * dt
    if dist <= step or dist == 0.0:
        avatar.pos = dest
    else:
        scale = step / dist
        avatar.pos = Vec2(avatar.pos.x + dx * scale, avatar.pos.y + dy * scale)


def tick(world: WorldState, dt: float | None = None) -> list[dict]:
    """Advance the world one fixed timestep; returns the events it produced.

    Order within a tick: move targets, move avatars, resolve interceptions
    (including unmarked pass-throughs; simultaneous contact goes to the closer
    avatar, exact ties to the human), process perimeter exits each of which
    triggers exactly one replacement spawn, then the periodic trajectory
    snapshot.
    """
    cfg = world.config
    if dt is None:
        dt = cfg.dt
    if dt == 0.0:
        return []
    if abs(dt - cfg.dt) > 1e-12:
        raise ConfigError(f"tick dt must equal configured dt {cfg.dt}, got {dt}")

    world.ticks += 1
    events: list[dict] = []
    radius = cfg.collision_radius
    arena_r = cfg.arena_radius

    ordered = sorted(world.targets.values(), key=lambda t: t.id)
    for t in ordered:
        if t.state != EXITED:
            t.pos = Vec2(t.pos.x + t.vel.x * dt, t.pos.y + t.vel.y * dt)

    _advance_avatar(world.human, dt)
    _advance_avatar(world.ai, dt)

    # Interceptions (marked or pass-through).
    for t in ordered:
        if t.state != VISIBLE:
            continue
        dh = world.human.pos.distance_to(t.pos)
        da = world.ai.pos.distance_to(t.pos)
        h_in = dh <= radius
        a_in = da <= radius
        if not (h_in or a_in):
            continue
        if h_in and (not a_in or dh <= da):
            winner = world.human
        else:
            winner = world.ai
        t.state = GHOST
        if winner.owner == HUMAN:
            world.human_score += t.value
        else:
            world.ai_score += t.value
        events.append(world._emit("intercept", player=winner.owner, target=t.id, value=t.value))
        for avatar in (world.human, world.ai):
            if avatar.mark == t.id:
                avatar.mark = None

    # Perimeter exits; each frees a spawn slot immediately.
    for t in ordered:
        if t.state == EXITED:
            continue
        if math.sqrt(t.pos.x * t.pos.x + t.pos.y * t.pos.y) > arena_r:
            was_visible = t.state == VISIBLE
            t.state = EXITED
            if was_visible:
                world.exited_visible_value += t.value
            events.append(world._emit("exit", target=t.id, was_visible=was_visible))
            for avatar in (world.human, world.ai):
                if avatar.mark == t.id:
                    avatar.mark = None
            spawn_target(world)
            events.append(world.log.events[-1])

    if world.ticks % cfg.snapshot_every_ticks == 0:
        events.append(
            world._emit(
                "snapshot",
                human_pos=[world.human.pos.x, world.human.pos.y],
                ai_pos=[world.ai.pos.x, world.ai.pos.y],
            )
        )
    return events


def run_round_scripted(world: WorldState, clicks: list[dict]) -> WorldState:
    """Run a full round applying a scripted click stream at its recorded times.

    ``clicks`` are event dicts with keys t/kind/player (+ target for "click"),
    applied in order just before the tick that advances past their timestamp.
    """
    cfg = world.config
    idx = 0
    n = len(clicks)
    for _ in range(cfg.num_ticks):
        now = world.clock
        while idx < n and clicks[idx]["t"] <= now + 1e-12:
            c = clicks[idx]
            handle_click(world, c["player"], c.get("target") if c["kind"] == "click" else None)
            idx += 1
        tick(world)
    return world


def config_from_header(header: dict) -> EngineConfig:
    if header.get("format_version") != LOG_FORMAT_VERSION:
        raise ValueError(f"unsupported log format version {header.get('format_version')}")
    return EngineConfig(
        density=header["density"],
        seed=header["seed"],
        round_length_s=header["round_length_s"],
        avatar_speed=header["avatar_speed"],
        arena_radius=header["arena_radius"],
        collision_radius=header["collision_radius"],
        dt=header["dt"],
        spawn_cone_half_angle_deg=header["spawn_cone_half_angle_deg"],
        snapshot_interval_s=header["snapshot_interval_s"],
    )


def replay(log: EpisodeLog) -> WorldState:
    """Re-simulate a recorded round and verify it reproduces the log exactly.

    Clicks (human and AI) are injected at their recorded times; everything else
    regenerates from the header seed. Raises ReplayDivergenceError naming the
    first differing event.
    """
    config = config_from_header(log.header)
    world = new_world(config, agent_label=log.header.get("agent", "none"))
    clicks = [e for e in log.events if e["kind"] in ("click", "center_click")]
    run_round_scripted(world, clicks)

    recorded = log.events
    produced = world.log.events
    n = min(len(recorded), len(produced))
    for i in range(n):
        a = json.dumps(recorded[i], separators=(",", ":"))
        b = json.dumps(produced[i], separators=(",", ":"))
        if a != b:
            raise ReplayDivergenceError(
                f"replay divergence at event {i}: recorded {a} != produced {b}"
            )
    if len(recorded) != len(produced):
        raise ReplayDivergenceError(
            f"replay divergence at event {n}: "
            f"recorded {len(recorded)} events, produced {len(produced)}"
        )
    return world
