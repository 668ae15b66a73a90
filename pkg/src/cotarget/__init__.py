"""Collaborative target-interception game: deterministic engine, planning
agents, interaction metrics, and pairwise-preference modeling."""

from .agents import AGENT_KINDS, HumanProxy
from .engine import EngineConfig, EpisodeLog, new_world, replay, tick
from .geometry import Arena, Vec2, clamp_to_arena, segments_intersect, solve_interception
from .metrics import compute_row
from .planner import DiscountModel, best_plan, enumerate_plans, should_switch
from .preference import ChoiceRecord, binomial_bf, build_design, cross_validate, fit
from .runner import run_episode
from .session import SessionPlan, export_choices, make_schedule, run_session

__version__ = "0.1.0"

__all__ = [
    "AGENT_KINDS",
    "Arena",
    "ChoiceRecord",
    "DiscountModel",
    "EngineConfig",
    "EpisodeLog",
    "HumanProxy",
    "SessionPlan",
    "Vec2",
    "best_plan",
    "binomial_bf",
    "build_design",
    "clamp_to_arena",
    "compute_row",
    "cross_validate",
    "enumerate_plans",
    "export_choices",
    "fit",
    "make_schedule",
    "new_world",
    "replay",
    "run_episode",
    "run_session",
    "segments_intersect",
    "should_switch",
    "solve_interception",
    "tick",
]
