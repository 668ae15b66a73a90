"""Depth-limited exhaustive search over interception sequences.

Enumerates every ordered sequence of up to three distinct reachable targets,
propagating the agent and the targets through the sequence, and discounts each
step's value by alpha^K where K estimates how many new targets will have
spawned by that step's arrival time. A 20% hysteresis rule keeps the active
plan stable against marginally better candidates.

The hot path (`search_best`) is vectorized with numpy but is kept bit-identical
to the scalar per-sequence evaluator: both use the same expression ordering and
share one discount-factor lookup table, so exhaustive-oracle comparisons can
demand exact float equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .engine import VISIBLE, WorldState
from .geometry import Vec2

MAX_DEPTH = 3
SWITCH_THRESHOLD = 1.2


@dataclass(frozen=True)
class PlanStep:
    target_id: int
    point: Vec2
    arrival_time: float


@dataclass(frozen=True)
class Plan:
    steps: tuple[PlanStep, ...]
    discounted_value: float
    total_time: float

    @property
    def target_ids(self) -> tuple[int, ...]:
        return tuple(s.target_id for s in self.steps)


@dataclass
class DiscountModel:
    """Spawn-rate discounting state: alpha and an EMA of inter-spawn intervals."""

    alpha: float = 0.9
    spawn_interval_ema: float = 5.0
    ema_lambda: float = 0.2
    _powers: list[float] = field(default_factory=lambda: [1.0], repr=False)

    def observe_interval(self, interval: float) -> None:
        if interval <= 0:
            return
        self.spawn_interval_ema = (
            self.ema_lambda * interval + (1.0 - self.ema_lambda) * self.spawn_interval_ema
        )

    def factor(self, k: int) -> float:
        """alpha^k via a successively-multiplied table shared by all callers."""
        powers = self._powers
        while len(powers) <= k:
            powers.append(powers[-1] * self.alpha)
        return powers[k]

    def factors(self, ks: np.ndarray) -> np.ndarray:
        if ks.size:
            self.factor(int(ks.max()))
        table = np.array(self._powers)
        return table[ks]


def estimate_K(elapsed: float, discount: DiscountModel) -> int:
    """Expected number of new spawns within `elapsed` seconds, rounded half-up."""
    return int(math.floor(elapsed / discount.spawn_interval_ema + 0.5))


def _solve_batch(
    px: np.ndarray,
    py: np.ndarray,
    speed: float,
    tx: np.ndarray,
    ty: np.ndarray,
    ux: np.ndarray,
    uy: np.ndarray,
    arena_radius: float,
):
    """Vectorized interception solve; mirrors geometry.solve_interception exactly."""
    dx = tx - px
    dy = ty - py
    denom = speed * speed - (ux * ux + uy * uy)
    du = dx * ux + dy * uy
    disc = du * du + denom * (dx * dx + dy * dy)
    t = (du + np.sqrt(disc)) / denom
    ix = tx + ux * t
    iy = ty + uy * t
    reachable = np.sqrt(ix * ix + iy * iy) <= arena_radius + 1e-9
    return t, ix, iy, reachable


def evaluate_sequence(
    snapshot: WorldState,
    sequence: tuple[int, ...],
    values: dict[int, float],
    discount: DiscountModel,
    agent_pos: Vec2,
    agent_speed: float,
) -> Plan | None:
    """Price one interception sequence; None if any step is unreachable.

    Scalar twin of the vectorized search: expression ordering matches
    `_solve_batch` operation for operation.
    """
    arena_radius = snapshot.arena.radius
    px, py = agent_pos.x, agent_pos.y
    elapsed = 0.0
    total = 0.0
    steps = []
    for tid in sequence:
        target = snapshot.targets.get(tid)
        if target is None or target.state != VISIBLE:
            return None
        ux, uy = target.vel.x, target.vel.y
        tx = target.pos.x + ux * elapsed
        ty = target.pos.y + uy * elapsed
        dx = tx - px
        dy = ty - py
        denom = agent_speed * agent_speed - (ux * ux + uy * uy)
        if denom <= 0:
            return None
        du = dx * ux + dy * uy
        disc = du * du + denom * (dx * dx + dy * dy)
        dt = (du + math.sqrt(disc)) / denom
        ix = tx + ux * dt
        iy = ty + uy * dt
        if math.sqrt(ix * ix + iy * iy) > arena_radius + 1e-9:
            return None
        elapsed = elapsed + dt
        k = estimate_K(elapsed, discount)
        total = total + values[tid] * discount.factor(k)
        px, py = ix, iy
        steps.append(PlanStep(tid, Vec2(ix, iy), elapsed))
    return Plan(tuple(steps), total, elapsed)


def enumerate_plans(
    snapshot: WorldState,
    consideration: set[int],
    values: dict[int, float],
    discount: DiscountModel,
    agent_pos: Vec2,
    agent_speed: float,
    max_depth: int = MAX_DEPTH,
) -> list[Plan]:
    """All reachable sequences of 1..min(3, |consideration|) distinct targets.

    Sequences hitting an unreachable step are dropped rather than truncated:
    their reachable prefix is already enumerated on its own.
    """
    ids = sorted(
        tid
        for tid in consideration
        if tid in snapshot.targets and snapshot.targets[tid].state == VISIBLE
    )
    plans: list[Plan] = []

    def extend(prefix: tuple[int, ...]) -> None:
        if len(prefix) >= max_depth:
            return
        for tid in ids:
            if tid in prefix:
                continue
            seq = prefix + (tid,)
            plan = evaluate_sequence(snapshot, seq, values, discount, agent_pos, agent_speed)
            if plan is not None:
                plans.append(plan)
                extend(seq)

    extend(())
    return plans


def best_plan(plans: list[Plan]) -> Plan | None:
    """Highest discounted value; ties to shorter total time, then lex id order."""
    best = None
    for p in plans:
        if best is None:
            best = p
            continue
        if p.discounted_value > best.discounted_value:
            best = p
        elif p.discounted_value == best.discounted_value:
            if p.total_time < best.total_time:
                best = p
            elif p.total_time == best.total_time and p.target_ids < best.target_ids:
                best = p
    return best


def should_switch(current_remaining_value: float | None, candidate_value: float) -> bool:
    """Hysteresis: switch only for a >=20% improvement over the live plan.

    ``current_remaining_value`` of None means the active plan is empty or
    invalidated (its targets intercepted or exited), in which case any
    candidate is adopted.
    """
    if current_remaining_value is None:
        return True
    return candidate_value >= SWITCH_THRESHOLD * current_remaining_value


def search_best(
    snapshot: WorldState,
    consideration: set[int],
    values: dict[int, float],
    discount: DiscountModel,
    agent_pos: Vec2,
    agent_speed: float,
    max_depth: int = MAX_DEPTH,
) -> Plan | None:
    """Vectorized equivalent of best_plan(enumerate_plans(...)).

    Candidates are generated in lexicographic sequence order so exact-value
    ties resolve identically to the scalar path.
    """
    ids = sorted(
        tid
        for tid in consideration
        if tid in snapshot.targets and snapshot.targets[tid].state == VISIBLE
    )
    n = len(ids)
    if n == 0:
        return None

    arena_radius = snapshot.arena.radius
    P = np.array([[snapshot.targets[t].pos.x, snapshot.targets[t].pos.y] for t in ids])
    V = np.array([[snapshot.targets[t].vel.x, snapshot.targets[t].vel.y] for t in ids])
    vals = np.array([float(values[t]) for t in ids])
    id_arr = np.array(ids)

    # Depth 1: (n,) candidates from the agent's current position.
    t1, x1, y1, r1 = _solve_batch(
        agent_pos.x, agent_pos.y, agent_speed, P[:, 0], P[:, 1], V[:, 0], V[:, 1], arena_radius
    )
    k1 = np.floor(t1 / discount.spawn_interval_ema + 0.5).astype(np.int64)
    dv1 = vals * discount.factors(np.where(r1, k1, 0))

    levels = [(np.arange(n).reshape(-1, 1), t1, x1, y1, r1, dv1)]
    for _ in range(1, max_depth):
        seqs, tc, xc, yc, rc, vc = levels[-1]
        live = np.nonzero(rc)[0]
        if live.size == 0:
            break
        # Expand each reachable prefix by every target not already used.
        m = live.size
        used = np.zeros((m, n), dtype=bool)
        for col in range(seqs.shape[1]):
            used[np.arange(m), seqs[live, col]] = True
        pi, nj = np.nonzero(~used)
        if pi.size == 0:
            break
        src = live[pi]
        # Target positions propagated to the prefix's cumulative arrival time.
        tprev = tc[src]
        tx = P[nj, 0] + V[nj, 0] * tprev
        ty = P[nj, 1] + V[nj, 1] * tprev
        dt, ix, iy, rr = _solve_batch(
            xc[src], yc[src], agent_speed, tx, ty, V[nj, 0], V[nj, 1], arena_radius
        )
        tnew = tprev + dt
        kk = np.floor(tnew / discount.spawn_interval_ema + 0.5).astype(np.int64)
        vnew = vc[src] + vals[nj] * discount.factors(np.where(rr, kk, 0))
        newseqs = np.concatenate([seqs[src], nj.reshape(-1, 1)], axis=1)
        levels.append((newseqs, tnew, ix, iy, rr, vnew))

    # Pick the winner on the candidate arrays: max value, ties to smaller
    # total time, then lexicographically smallest id sequence. Only the winner
    # is materialized as a Plan (via the scalar evaluator, which reproduces the
    # vectorized arithmetic bit for bit).
    best_key = None  # (value, time, id sequence)
    for seqs, tc, xc, yc, rc, vc in levels:
        live = np.nonzero(rc)[0]
        if live.size == 0:
            continue
        vmax = vc[live].max()
        tied = live[vc[live] == vmax]
        tmin = tc[tied].min()
        tied = tied[tc[tied] == tmin]
        seq_best = min(tuple(int(id_arr[j]) for j in seqs[row]) for row in tied)
        key = (vmax, tmin, seq_best)
        if (
            best_key is None
            or key[0] > best_key[0]
            or (key[0] == best_key[0] and key[1] < best_key[1])
            or (key[0] == best_key[0] and key[1] == best_key[1] and key[2] < best_key[2])
        ):
            best_key = key

    if best_key is None:
        return None
    return evaluate_sequence(
        snapshot, best_key[2], values, discount, agent_pos, agent_speed
    )
