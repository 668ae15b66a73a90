"""The five collaborative AI policies, plus scripted human proxies.

Every policy is the same planner wearing a different consideration-set /
value / timing transform:

- ignorant: plans over all visible targets, blind to the human.
- omit: drops the human's marked target and everything on the human's path.
- divide: omit, further restricted to the half-plane away from the human.
- delay: omit, but waits a human-like beat after each of its interceptions.
- bottom_feeder: omit on inverted values, so it chases the cheap targets.

`AgentDriver` owns the per-round mutable state (active plan, spawn-interval
EMA, delay clock) and is what the headless runner and the live server both
drive; `decide` itself is pure given that state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .engine import AI, HUMAN, VISIBLE, WorldState
from .geometry import Vec2, solve_interception
from .planner import (
    DiscountModel,
    Plan,
    evaluate_sequence,
    search_best,
    should_switch,
)

IGNORANT = "ignorant"
OMIT = "omit"
DIVIDE = "divide"
DELAY = "delay"
BOTTOM_FEEDER = "bottom_feeder"
AGENT_KINDS = (IGNORANT, OMIT, DIVIDE, DELAY, BOTTOM_FEEDER)

MAX_TARGET_VALUE = 15

DELAY_EMA_LAMBDA = 1.0 / 3.0  # span-5 smoothing: 2/(5+1)
INITIAL_EMA_RT = 1.0

PROXY_KINDS = ("greedy", "random", "idle")


@dataclass(frozen=True)
class HumanIntent:
    marked_target: int | None
    path_targets: frozenset[int]
    last_response_times: tuple[float, ...] = ()


@dataclass(frozen=True)
class DelayState:
    ema_rt: float = INITIAL_EMA_RT


def update_delay(state: DelayState, observed_rt: float) -> DelayState:
    """Fold one observed human response time into the EMA."""
    if observed_rt < 0:
        raise ValueError(f"response time must be nonnegative, got {observed_rt}")
    ema = DELAY_EMA_LAMBDA * observed_rt + (1.0 - DELAY_EMA_LAMBDA) * state.ema_rt
    return DelayState(ema_rt=ema)


# Actions returned by decide / proxy_decide.
@dataclass(frozen=True)
class Action:
    kind: str  # "click" | "center" | "wait"
    target_id: int | None = None


WAIT = Action("wait")
CENTER = Action("center")


def click(target_id: int) -> Action:
    return Action("click", target_id)


def infer_intent(world: WorldState) -> HumanIntent:
    """Derive the human's marked target and the targets its current path sweeps.

    The path sweep slides the collision disc along the human's straight-line
    run to its navigation destination against each target's constant-velocity
    motion; the minimum of the resulting quadratic decides inclusion.
    """
    human = world.human
    marked = human.mark
    path: set[int] = set()
    dest = human.nav_dest
    if dest is not None:
        hx, hy = human.pos.x, human.pos.y
        dx, dy = dest.x - hx, dest.y - hy
        dist = math.sqrt(dx * dx + dy * dy)
        if dist > 1e-9:
            hvx = dx / dist * human.speed
            hvy = dy / dist * human.speed
            horizon = dist / human.speed
            radius = world.config.collision_radius
            for t in world.targets.values():
                if t.state != VISIBLE or t.id == marked:
                    continue
                rx = t.pos.x - hx
                ry = t.pos.y - hy
                rvx = t.vel.x - hvx
                rvy = t.vel.y - hvy
                rv2 = rvx * rvx + rvy * rvy
                if rv2 < 1e-12:
                    tau = 0.0
                else:
                    tau = -(rx * rvx + ry * rvy) / rv2
                    tau = min(max(tau, 0.0), horizon)
                cx = rx + rvx * tau
                cy = ry + rvy * tau
                if math.sqrt(cx * cx + cy * cy) <= radius:
                    path.add(t.id)
    return HumanIntent(marked_target=marked, path_targets=frozenset(path))


def consideration_set(
    kind: str,
    snapshot: WorldState,
    intent: HumanIntent,
    divide_dir: Vec2 | None = None,
) -> set[int]:
    """Which visible targets this agent kind may plan over.

    ``divide_dir`` is the unit direction from the arena center to the human
    (the divide agent's dividing line is orthogonal to it); callers supply the
    remembered fallback when the human sits at the exact center.
    """
    visible = {t.id for t in snapshot.targets.values() if t.state == VISIBLE}
    if kind == IGNORANT:
        return visible
    excluded = set(intent.path_targets)
    if intent.marked_target is not None:
        excluded.add(intent.marked_target)
    base = visible - excluded
    if kind != DIVIDE:
        return base
    if divide_dir is None:
        divide_dir = divide_direction(snapshot.human.pos, None)
    out = set()
    ai = snapshot.ai
    for tid in base:
        t = snapshot.targets[tid]
        try:
            sol = solve_interception(ai.pos, ai.speed, t.pos, t.vel, snapshot.arena)
        except ValueError:
            continue
        if sol.point.x * divide_dir.x + sol.point.y * divide_dir.y < 0:
            out.add(tid)
    return out


def divide_direction(human_pos: Vec2, last_dir: Vec2 | None) -> Vec2:
    """Unit vector center->human; falls back to the last well-defined line.

    With no history (human exactly at center from the start) the dividing line
    is vertical, with the AI taking the +x half — matching the avatars' start
    posts (human on -x, AI on +x).
    """
    r = human_pos.length()
    if r > 1e-9:
        return human_pos / r
    if last_dir is not None:
        return last_dir
    return Vec2(-1.0, 0.0)


def agent_values(kind: str, values: dict[int, float]) -> dict[int, float]:
    """Value transform: the bottom feeder sees 15 - v, everyone else sees v."""
    if kind == BOTTOM_FEEDER:
        return {tid: MAX_TARGET_VALUE - v for tid, v in values.items()}
    return dict(values)


@dataclass
class AgentState:
    kind: str
    discount: DiscountModel = field(default_factory=DiscountModel)
    delay: DelayState = field(default_factory=DelayState)
    pending_until: float = 0.0
    active_plan: Plan | None = None
    divide_dir: Vec2 | None = None


def decide(
    kind: str,
    state: AgentState,
    snapshot: WorldState,
    intent: HumanIntent,
) -> Action:
    """One planning pass: consideration set, search, 20% switch rule, delay gate.

    Mutates ``state`` (active plan adoption, remembered divide direction); the
    decision is a pure function of (state, snapshot, intent).
    """
    if kind == DELAY and snapshot.clock < state.pending_until:
        return WAIT

    if kind == DIVIDE:
        state.divide_dir = divide_direction(snapshot.human.pos, state.divide_dir)

    cset = consideration_set(kind, snapshot, intent, state.divide_dir)
    raw = {
        t.id: float(t.value)
        for t in snapshot.targets.values()
        if t.state == VISIBLE and t.id in cset
    }
    values = agent_values(kind, raw)

    # Re-price the not-yet-executed remainder of the active plan on this
    # snapshot; drop steps whose targets are gone or no longer considerable.
    current_value = None
    remaining: tuple[int, ...] = ()
    if state.active_plan is not None:
        remaining = tuple(tid for tid in state.active_plan.target_ids if tid in cset)
        if remaining:
            repriced = evaluate_sequence(
                snapshot, remaining, values, state.discount,
                snapshot.ai.pos, snapshot.ai.speed,
            )
            if repriced is not None:
                current_value = repriced.discounted_value
                state.active_plan = repriced

    if not cset:
        state.active_plan = None
        if snapshot.ai.mark is None and snapshot.ai.nav_dest == Vec2(0.0, 0.0):
            return WAIT
        return CENTER

    candidate = search_best(
        snapshot, cset, values, state.discount, snapshot.ai.pos, snapshot.ai.speed
    )

    if candidate is not None and should_switch(current_value, candidate.discounted_value):
        state.active_plan = candidate
    elif current_value is None:
        state.active_plan = None
        if snapshot.ai.mark is None and snapshot.ai.nav_dest == Vec2(0.0, 0.0):
            return WAIT
        return CENTER

    first = state.active_plan.target_ids[0]
    if snapshot.ai.mark != first:
        return click(first)
    return WAIT


@dataclass(frozen=True)
class HumanProxy:
    """Scripted stand-in for a human player in headless runs."""

    kind: str = "greedy"
    median_delay_s: float = 0.8
    sigma_log: float = 0.4
    value_exponent: float = 1.0

    def sample_delay(self, rng: np.random.Generator) -> float:
        return float(rng.lognormal(mean=math.log(self.median_delay_s), sigma=self.sigma_log))


def proxy_decide(proxy: HumanProxy, snapshot: WorldState, rng: np.random.Generator) -> Action:
    """Pick the proxy's next click; ties go to the lowest target id."""
    if proxy.kind == "idle":
        return WAIT
    visible = sorted(t.id for t in snapshot.targets.values() if t.state == VISIBLE)
    if not visible:
        return WAIT
    if proxy.kind == "random":
        return click(visible[int(rng.integers(len(visible)))])
    # greedy: maximize value^exponent per second of interception time
    best_id = None
    best_rate = -1.0
    human = snapshot.human
    for tid in visible:
        t = snapshot.targets[tid]
        try:
            sol = solve_interception(human.pos, human.speed, t.pos, t.vel, snapshot.arena)
        except ValueError:
            continue
        if not sol.reachable:
            continue
        rate = float(t.value) ** proxy.value_exponent / max(sol.time, 1e-9)
        if rate > best_rate:
            best_rate = rate
            best_id = tid
    if best_id is None:
        return WAIT
    return click(best_id)


REPLAN_INTERVAL_S = 0.25


class AgentDriver:
    """Stateful adapter: watches the world's event log and emits AI clicks.

    Replans every 250 ms of simulated time and immediately after intercept,
    exit, or human mark_set events. Keeps a decision trace for tests.
    """

    def __init__(self, kind: str, keep_trace: bool = False):
        if kind not in AGENT_KINDS:
            raise ValueError(f"unknown agent kind {kind!r}")
        self.kind = kind
        self.state = AgentState(kind=kind)
        if kind == DELAY:
            # The first click of the round is delayed too.
            self.state.pending_until = INITIAL_EMA_RT
        self._log_index = 0
        self._last_replan = -math.inf
        self._replan_flag = True
        self._last_spawn_time: float | None = 0.0
        self._last_human_completion = 0.0
        self.trace: list[dict] | None = [] if keep_trace else None

    def observe(self, world: WorldState) -> None:
        """Consume log events appended since the last call."""
        events = world.log.events
        while self._log_index < len(events):
            e = events[self._log_index]
            self._log_index += 1
            kind = e["kind"]
            if kind == "spawn":
                t = e["t"]
                if self._last_spawn_time is not None and t > self._last_spawn_time:
                    self.state.discount.observe_interval(t - self._last_spawn_time)
                if self._last_spawn_time is None or t > self._last_spawn_time:
                    self._last_spawn_time = t
                self._replan_flag = True
            elif kind == "intercept":
                self._replan_flag = True
                if e["player"] == AI and self.kind == DELAY:
                    self.state.pending_until = e["t"] + self.state.delay.ema_rt
                if e["player"] == HUMAN:
                    self._last_human_completion = e["t"]
            elif kind == "exit":
                self._replan_flag = True
            elif kind == "mark_set" and e["player"] == HUMAN:
                self._replan_flag = True
            elif kind == "click" and e["player"] == HUMAN:
                rt = e["t"] - self._last_human_completion
                if rt >= 0:
                    self.state.delay = update_delay(self.state.delay, rt)

    def step(self, world: WorldState) -> Action:
        """Observe, decide if due, and return the action (caller applies it)."""
        self.observe(world)
        now = world.clock
        if not self._replan_flag and now - self._last_replan < REPLAN_INTERVAL_S:
            return WAIT
        self._last_replan = now
        self._replan_flag = False
        intent = infer_intent(world)
        action = decide(self.kind, self.state, world, intent)
        if self.trace is not None:
            self.trace.append(
                {
                    "t": now,
                    "action": action.kind,
                    "target": action.target_id,
                    "pending_until": self.state.pending_until,
                    "ema_rt": self.state.delay.ema_rt,
                }
            )
        return action
