"""Authoritative live-session server speaking the JSON websocket protocol.

The browser client is a pure renderer/input device: simulation ticks run here
at the fixed timestep, client clicks are applied at tick boundaries, and state
frames go out at 15 Hz. Wire payloads carry only display identities, never the
true agent kind; the kind appears solely in the server-side archive.
"""

from __future__ import annotations

import asyncio
import json
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .agents import AgentDriver
from .engine import (
    AI,
    HUMAN,
    EngineConfig,
    InvalidTargetError,
    handle_click,
    new_world,
    tick,
)
from .session import (
    MIN_FREE_TEXT_CHARS,
    SURVEY_ITEMS,
    SessionPlan,
    round_seed,
)

PROTOCOL_VERSION = 1
STATE_INTERVAL_S = 1.0 / 15.0

CLIENT_KINDS = {"click", "click_center", "survey_submit", "choice_submit"}

_DISCONNECT = object()


def _state_frame(world) -> dict:
    return {
        "kind": "state",
        "t": world.clock,
        "targets": [
            {"id": t.id, "x": t.pos.x, "y": t.pos.y, "value": t.value}
            for t in world.visible_targets()
        ],
        "human": {"x": world.human.pos.x, "y": world.human.pos.y, "mark": world.human.mark},
        "ai": {"x": world.ai.pos.x, "y": world.ai.pos.y, "mark": world.ai.mark},
        "scores": {
            "human": world.human_score,
            "ai": world.ai_score,
            "team": world.human_score + world.ai_score,
        },
    }


class _Connection:
    """One websocket with a background receive pump and JSON frame helpers."""

    def __init__(self, ws: WebSocket):
        self.ws = ws
        self.queue: asyncio.Queue = asyncio.Queue()
        self._pump_task: asyncio.Task | None = None

    async def start(self) -> None:
        self._pump_task = asyncio.create_task(self._pump())

    async def _pump(self) -> None:
        try:
            while True:
                text = await self.ws.receive_text()
                self.queue.put_nowait(text)
        except (WebSocketDisconnect, RuntimeError):
            self.queue.put_nowait(_DISCONNECT)

    async def stop(self) -> None:
        if self._pump_task is not None:
            self._pump_task.cancel()

    async def send(self, payload: dict) -> None:
        await self.ws.send_text(json.dumps(payload))

    async def error(self, message: str) -> None:
        await self.send({"kind": "error", "message": message})

    def parse(self, text) -> dict | None:
        if text is _DISCONNECT:
            raise WebSocketDisconnect(code=1006)
        try:
            msg = json.loads(text)
        except json.JSONDecodeError:
            return None
        if not isinstance(msg, dict) or msg.get("kind") not in CLIENT_KINDS:
            return None
        return msg


async def _run_live_round(
    conn: _Connection,
    spec,
    config: EngineConfig,
    time_scale: float,
):
    """Simulate one round, applying queued clicks at tick boundaries."""
    world = new_world(config, agent_label=spec.agent)
    driver = AgentDriver(spec.agent)
    await conn.send(
        {
            "kind": "hello",
            "protocol_version": PROTOCOL_VERSION,
            "session_id": spec.identity,  # display identity doubles as round id
            "display_identity": spec.identity,
            "arena_radius": config.arena_radius,
            "density": config.density,
            "round_length_s": config.round_length_s,
        }
    )
    next_state = 0.0
    for _ in range(config.num_ticks):
        while not conn.queue.empty():
            msg = conn.parse(conn.queue.get_nowait())
            if msg is None:
                await conn.error("unknown message kind")
                continue
            if msg["kind"] == "click":
                try:
                    handle_click(world, HUMAN, int(msg["target_id"]))
                except (InvalidTargetError, KeyError, TypeError, ValueError):
                    await conn.error("invalid target")
            elif msg["kind"] == "click_center":
                handle_click(world, HUMAN, None)
            else:
                await conn.error(f"unexpected {msg['kind']} during play")
        action = driver.step(world)
        if action.kind == "click":
            handle_click(world, AI, action.target_id)
        elif action.kind == "center":
            handle_click(world, AI, None)
        tick(world)
        if world.clock >= next_state:
            await conn.send(_state_frame(world))
            next_state += STATE_INTERVAL_S
        if time_scale > 0:
            await asyncio.sleep(config.dt / time_scale)
        else:
            await asyncio.sleep(0)
    await conn.send(
        {
            "kind": "round_end",
            "scores": {
                "human": world.human_score,
                "ai": world.ai_score,
                "team": world.human_score + world.ai_score,
            },
        }
    )
    return world


def _valid_survey(msg: dict, identities: tuple[str, str]) -> bool:
    responses = msg.get("responses")
    if not isinstance(responses, dict) or set(responses) != set(identities):
        return False
    for answers in responses.values():
        if not isinstance(answers, dict):
            return False
        for i in range(1, 9):
            v = answers.get(f"q{i}")
            if not isinstance(v, int) or not 1 <= v <= 7:
                return False
    return True


async def _await_kind(conn: _Connection, expected: str) -> dict:
    while True:
        msg = conn.parse(await conn.queue.get())
        if msg is None:
            await conn.error("unknown message kind")
            continue
        if msg["kind"] != expected:
            await conn.error(f"expected {expected}, got {msg['kind']}")
            continue
        return msg


async def _run_block_debrief(
    conn: _Connection, plan: SessionPlan, block: int, out: Path
) -> None:
    first, second = plan.block_rounds(block)
    identities = (first.identity, second.identity)
    by_identity = {first.identity: first, second.identity: second}

    await conn.send({"kind": "survey_request", "items": SURVEY_ITEMS, "identities": list(identities)})
    while True:
        msg = await _await_kind(conn, "survey_submit")
        if _valid_survey(msg, identities):
            break
        await conn.error("survey incomplete: all 16 items must be answered on the 1-7 scale")
    surveys = [
        {
            "participant_id": plan.participant_id,
            "block": block,
            "agent": by_identity[ident].agent,
            "identity": ident,
            "stub": False,
            **{f"q{i}": msg["responses"][ident][f"q{i}"] for i in range(1, 9)},
        }
        for ident in identities
    ]
    with open(out / f"survey_block{block}.json", "w") as f:
        json.dump(surveys, f, indent=2)

    await conn.send({"kind": "choice_request", "identities": list(identities)})
    while True:
        msg = await _await_kind(conn, "choice_submit")
        ident = msg.get("identity")
        text = msg.get("free_text", "")
        if ident not in identities:
            await conn.error("choice must name one of the presented identities")
            continue
        if not isinstance(text, str) or len(text) < MIN_FREE_TEXT_CHARS:
            await conn.error(f"free text must be at least {MIN_FREE_TEXT_CHARS} characters")
            continue
        break
    choice = {
        "participant_id": plan.participant_id,
        "block": block,
        "identity": ident,
        "agent": by_identity[ident].agent,
        "free_text": text,
        "stub": False,
    }
    with open(out / f"choice_block{block}.json", "w") as f:
        json.dump(choice, f, indent=2)


def create_app(
    plans: dict[str, SessionPlan],
    out_dir,
    seed: int = 0,
    time_scale: float = 1.0,
) -> FastAPI:
    """App serving one live session per participant id at /ws/{participant_id}.

    ``time_scale`` scales simulated vs wall time (1.0 = real time, 0 = as fast
    as the event loop allows; used by tests and scripted clients).
    """
    app = FastAPI()
    out_root = Path(out_dir)

    @app.websocket("/ws/{participant_id}")
    async def live_session(ws: WebSocket, participant_id: str):
        await ws.accept()
        conn = _Connection(ws)
        await conn.start()
        try:
            plan = plans.get(participant_id)
            if plan is None:
                await conn.error(f"unknown session {participant_id}")
                await ws.close()
                return
            out = out_root / plan.participant_id
            out.mkdir(parents=True, exist_ok=True)
            with open(out / "plan.json", "w") as f:
                json.dump(plan.to_json(), f, indent=2)

            for spec in plan.rounds:
                log_path = out / f"round_{spec.round_number}.jsonl"
                debrief_done = (out / f"choice_block{spec.block}.json").exists()
                if log_path.exists() and debrief_done:
                    continue  # resume from the next unstarted round
                if not log_path.exists():
                    config = EngineConfig(
                        density=spec.density, seed=round_seed(seed, spec.round_number)
                    )
                    world = await _run_live_round(conn, spec, config, time_scale)
                    world.log.save(log_path)
                if spec.round_number % 2 == 0 and not debrief_done:
                    await _run_block_debrief(conn, plan, spec.block, out)
            await conn.send({"kind": "done"})
            await ws.close()
        except WebSocketDisconnect:
            pass  # incomplete round stays unwritten; session resumes later
        finally:
            await conn.stop()

    return app
