"""Command-line surface: headless simulation, metrics, model fitting, serving."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .agents import AGENT_KINDS, PROXY_KINDS, HumanProxy
from .engine import EngineConfig, EpisodeLog, ReplayDivergenceError, replay
from .metrics import compute_row, write_csv
from .preference import (
    binomial_bf,
    build_design,
    cross_validate,
    fit,
    load_choice_csv,
    write_coefficient_csv,
)
from .runner import run_episode
from .session import SessionPlan, make_schedule


def _cmd_simulate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    proxy = HumanProxy(kind=args.proxy)
    for episode in range(args.episodes):
        seed = args.seed + episode
        config = EngineConfig(density=args.density, seed=seed)
        world, _ = run_episode(config, args.agent, proxy=proxy)
        path = out / f"episode_{args.agent}_d{args.density}_s{seed}.jsonl"
        world.log.save(path)
        print(f"{path}  human={world.human_score} ai={world.ai_score}")
    return 0


def _cmd_metrics(args) -> int:
    in_dir = Path(args.in_dir)
    logs = sorted(in_dir.glob("*.jsonl"))
    if not logs:
        print(f"no .jsonl logs under {in_dir}", file=sys.stderr)
        return 1
    rows = [compute_row(EpisodeLog.load(p)) for p in logs]
    write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_fit_preference(args) -> int:
    records = load_choice_csv(args.choices)
    cv = cross_validate(records, args.features, folds=args.folds, seed=args.seed)
    print(f"cv accuracy={cv['accuracy']:.3f} auc={cv['auc']:.3f} ({args.folds} folds)")
    design = build_design(records, args.features, standardize=True)
    summary = fit(design)
    write_coefficient_csv(summary, args.out)
    for c in summary.coefficients:
        print(
            f"{c.name:>20s}  mean={c.mean:+.3f} sd={c.sd:.3f} "
            f"ci95=[{c.ci95_lower:+.3f},{c.ci95_upper:+.3f}] bf={c.bf_inclusion:.2f}"
        )
    print(f"wrote coefficients to {args.out}")
    return 0


def _cmd_binomial_bf(args) -> int:
    print(f"{binomial_bf(args.k, args.n):.6g}")
    return 0


def _cmd_replay(args) -> int:
    log = EpisodeLog.load(args.log)
    try:
        world = replay(log)
    except ReplayDivergenceError as e:
        print(f"FAIL: {e}", file=sys.stderr)
        return 1
    print(f"replay ok: human={world.human_score} ai={world.ai_score}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    with open(args.sessions) as f:
        entries = json.load(f)
    plans: dict[str, SessionPlan] = {}
    for entry in entries:
        plan = make_schedule(
            entry["participant_id"],
            tuple(entry["agent_pair"]),
            entry["counterbalance_index"],
        )
        plans[plan.participant_id] = plan
    app = create_app(plans, args.out, seed=args.seed, time_scale=args.time_scale)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cotarget",
        description="Collaborative target-interception simulator and analysis tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run headless episodes against a scripted proxy")
    p.add_argument("--agent", choices=AGENT_KINDS, required=True)
    p.add_argument("--proxy", choices=PROXY_KINDS, default="greedy")
    p.add_argument("--density", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--episodes", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("metrics", help="compute per-episode metrics CSV from logs")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", default="metrics.csv")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("fit-preference", help="fit the pairwise choice model")
    p.add_argument("--choices", required=True)
    p.add_argument("--features", choices=["objective", "subjective"], default="objective")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="coefs.csv")
    p.set_defaults(func=_cmd_fit_preference)

    p = sub.add_parser("binomial-bf", help="Bayes factor for a binomial proportion vs 0.5")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_binomial_bf)

    p = sub.add_parser("replay", help="verify an episode log replays exactly")
    p.add_argument("--log", required=True)
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("serve", help="serve live sessions over the websocket protocol")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--sessions", required=True, help="JSON list of session plan entries")
    p.add_argument("--out", default="sessions_out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-scale", type=float, default=1.0)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
