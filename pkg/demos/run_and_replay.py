"""Run one round against each AI teammate and prove the log replays exactly.

Every round is fully determined by (density, seed): the engine draws all
randomness from one seeded stream, so re-running the recorded clicks must
reproduce the identical event log, byte for byte.
"""

from cotarget import EngineConfig, replay, run_episode
from cotarget.agents import AGENT_KINDS

config = EngineConfig(density=5, seed=2024)

print(f"density={config.density} seed={config.seed} round={config.round_length_s:.0f}s\n")
print(f"{'agent':>14s}  {'human':>5s}  {'ai':>5s}  {'events':>6s}  replay")
for kind in AGENT_KINDS:
    world, _ = run_episode(config, kind)
    rerun = replay(world.log)
    ok = "exact" if rerun.log.sha256() == world.log.sha256() else "DIVERGED"
    print(
        f"{kind:>14s}  {world.human_score:5d}  {world.ai_score:5d}"
        f"  {len(world.log.events):6d}  {ok}"
    )

print("\nSame seed, same clicks, same log - the archive is the experiment.")
