"""Headless episode loop: one world, one AI driver, one scripted human proxy.

All clicks are applied at tick boundaries, so a run is fully determined by
(engine seed, agent kind, proxy kind, proxy seed) and the resulting log
replays exactly.
"""

from __future__ import annotations

import math

import numpy as np

from .agents import AgentDriver, HumanProxy, proxy_decide
from .engine import AI, HUMAN, EngineConfig, WorldState, handle_click, new_world, tick


class ProxyDriver:
    """Applies a HumanProxy's clicks with lognormal reaction delays."""

    def __init__(self, proxy: HumanProxy, seed: int):
        self.proxy = proxy
        self.rng = np.random.default_rng([seed, 0x70726F78])  # independent stream
        self.next_time = self.proxy.sample_delay(self.rng) if proxy.kind != "idle" else math.inf
        self._was_marked = False

    def step(self, world: WorldState) -> None:
        human = world.human
        now = world.clock
        if self._was_marked and human.mark is None:
            # Current action completed (interception or target exit): react
            # again only after a fresh delay.
            self._was_marked = False
            self.next_time = now + self.proxy.sample_delay(self.rng)
        if human.mark is not None or now < self.next_time:
            return
        action = proxy_decide(self.proxy, world, self.rng)
        if action.kind == "click":
            handle_click(world, HUMAN, action.target_id)
            self._was_marked = True
        else:
            # Nothing clickable right now; check again shortly.
            self.next_time = now + 0.25


def run_episode(
    config: EngineConfig,
    agent_kind: str,
    proxy: HumanProxy | None = None,
    keep_trace: bool = False,
) -> tuple[WorldState, AgentDriver]:
    """Simulate one full round; returns the final world (log attached) and driver."""
    if proxy is None:
        proxy = HumanProxy()
    world = new_world(config, agent_label=agent_kind)
    driver = AgentDriver(agent_kind, keep_trace=keep_trace)
    proxy_driver = ProxyDriver(proxy, config.seed)

    for _ in range(config.num_ticks):
        proxy_driver.step(world)
        action = driver.step(world)
        if action.kind == "click":
            handle_click(world, AI, action.target_id)
        elif action.kind == "center":
            handle_click(world, AI, None)
        tick(world)
    driver.observe(world)
    return world, driver
