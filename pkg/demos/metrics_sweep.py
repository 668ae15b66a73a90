"""Sweep agent kinds across both target densities and tabulate the
interaction metrics that later feed the preference model.

The scripted greedy proxy stands in for the human, so magnitudes are not
human-play numbers; what carries over is the ordering, e.g. the ignorant
agent out-scores its considerate variants and steals far more targets.
"""

import numpy as np

from cotarget import EngineConfig, compute_row, run_episode
from cotarget.agents import AGENT_KINDS
from cotarget.metrics import write_csv

SEEDS = range(100, 120)
rows = []

for density in (5, 15):
    print(f"\n--- density {density} ---")
    print(f"{'agent':>14s}  {'team_rel':>8s}  {'ai_rel':>7s}  {'steals':>6s}  {'dist':>6s}")
    for kind in AGENT_KINDS:
        cell = []
        for seed in SEEDS:
            world, _ = run_episode(EngineConfig(density=density, seed=seed), kind)
            cell.append(compute_row(world.log))
        rows.extend(cell)
        print(
            f"{kind:>14s}"
            f"  {np.mean([r.team_rel_score for r in cell]):8.3f}"
            f"  {np.mean([r.ai_rel_score for r in cell]):7.3f}"
            f"  {np.mean([r.ai_steals for r in cell]):6.2f}"
            f"  {np.mean([r.mean_distance for r in cell]):6.1f}"
        )

write_csv(rows, "metrics_sweep.csv")
print(f"\nwrote {len(rows)} rows to metrics_sweep.csv")
