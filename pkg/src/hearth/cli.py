"""Command-line entry points.

Exit codes are fixed for CI scripting: 0 success, 1 task failure or
replay divergence, 2 configuration problem, 3 backend problem.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from .agent.backends import BackendError, RecordedReplayBackend, ReplayDivergence
from .agent.context import PROMPT_VERSION, PromptConfig
from .agent.loop import RunLimits, run_task
from .agent.transcript import Transcript, TranscriptError
from .harness.metrics import compute_metrics, emit_report, render_json
from .harness.runner import (
    BackendSetup,
    ExperimentPlan,
    run_memory_protocol,
    run_trials,
    write_transcript,
)
from .harness.tasks import TASKS, EvaluationError, check_t1
from .memory.episodic import EpisodicStore, PersistenceError
from .memory.scratchpad import Scratchpad
from .rpc.server import ToolRpcServer, serve_stdio
from .tools.dispatch import MemoryHandles
from .world.scenario import (
    ScenarioError,
    default_scenario_data,
    load_scenario,
    scenario_hash,
)
from .world.state import WorldState, canonical_json, snapshot

EXIT_OK = 0
EXIT_TASK_FAILED = 1
EXIT_CONFIG = 2
EXIT_BACKEND = 3


def _load_scenario_arg(path: str | None) -> dict[str, Any]:
    if path is None:
        return default_scenario_data()
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    load_scenario(data)
    return data


def _load_baseline(path: str) -> dict[str, Any]:
    if os.path.isdir(path):
        path = os.path.join(path, "baseline.json")
    with open(path, encoding="utf-8") as handle:
        baseline = json.load(handle)
    for key in ("scenario", "scenario_hash", "world", "snapshot"):
        if key not in baseline:
            raise ValueError(f"baseline file is missing '{key}'")
    return baseline


def cmd_run(args: argparse.Namespace) -> int:
    task = TASKS.get(args.task)
    if task is None:
        print(f"error: unknown task '{args.task}'", file=sys.stderr)
        return EXIT_CONFIG

    baseline_snapshot: dict[str, Any] | None = None
    if task.prerequisite is not None:
        if args.baseline is None:
            print(
                f"error: task '{task.id}' requires a baseline from a "
                f"successful '{task.prerequisite}' run; pass --baseline",
                file=sys.stderr,
            )
            return EXIT_CONFIG
        baseline = _load_baseline(args.baseline)
        if not check_t1(baseline["snapshot"]):
            print(
                "error: baseline snapshot does not satisfy t1; refusing to "
                "run t2 from it",
                file=sys.stderr,
            )
            return EXIT_CONFIG
        scenario_data = baseline["scenario"]
        world = WorldState.from_dict(baseline["world"])
        baseline_snapshot = baseline["snapshot"]
    else:
        if args.baseline is not None:
            print("error: --baseline only applies to tasks with a prerequisite",
                  file=sys.stderr)
            return EXIT_CONFIG
        scenario_data = _load_scenario_arg(args.scenario)
        world = load_scenario(scenario_data)

    setup = BackendSetup.from_spec(args.backend)
    backend = setup.make(task.id)
    store = EpisodicStore(path=args.memory) if args.memory else EpisodicStore()
    handles = MemoryHandles(
        scratchpad=Scratchpad(), store=store, model_id=setup.model_id
    )
    initial_memories = [record.to_dict() for record in store.records]
    initial_world = world.to_dict()
    limits = RunLimits(max_tool_calls=args.max_tool_calls)
    prompt_config = PromptConfig(memory_enabled=not args.no_memory)

    run = run_task(
        world, handles, backend, task.prompt, limits=limits,
        prompt_config=prompt_config,
    )
    final_snapshot = snapshot(world)
    actual_ok = task.check(final_snapshot, baseline_snapshot)
    believed = run.believed_status or "failed"

    print(f"task: {task.id}")
    print(f"believed: {believed}")
    print(f"actual: {'succeeded' if actual_ok else 'failed'}")
    print(f"tool calls: {run.tool_calls}")
    print(f"termination: {run.termination}")
    if run.latencies_s:
        mean_latency = sum(run.latencies_s) / len(run.latencies_s)
        print(f"mean backend latency: {mean_latency:.2f}s")

    if args.output_dir:
        os.makedirs(args.output_dir, exist_ok=True)
        digest = scenario_hash(scenario_data)
        path = write_transcript(
            args.output_dir,
            "run",
            task,
            run,
            scenario_data,
            digest,
            setup.model_id,
            args.seed,
            not args.no_memory,
            initial_memories,
            initial_world,
            final_snapshot,
        )
        print(f"transcript: {path}")
        if task.id == "t1" and actual_ok:
            baseline_path = os.path.join(args.output_dir, "baseline.json")
            with open(baseline_path, "w", encoding="utf-8") as handle:
                handle.write(
                    canonical_json(
                        {
                            "scenario": scenario_data,
                            "scenario_hash": digest,
                            "world": world.to_dict(),
                            "snapshot": final_snapshot,
                        }
                    )
                )
            print(f"baseline: {baseline_path}")

    if run.termination == "backend_error":
        if run.error:
            print(f"backend error: {run.error}", file=sys.stderr)
        return EXIT_BACKEND
    return EXIT_OK if actual_ok else EXIT_TASK_FAILED


def cmd_experiment(args: argparse.Namespace) -> int:
    plan = ExperimentPlan.from_file(args.plan)
    records = run_memory_protocol(plan) if plan.memory_sizes else run_trials(plan)
    report = compute_metrics(records, plan.exclude_backend_errors)
    out_dir = plan.output_dir or args.report_dir
    if out_dir:
        paths = emit_report(report, out_dir)
        for path in paths:
            print(f"wrote {path}")
    else:
        print(render_json(report), end="")
    for group in report.groups:
        print(
            f"{group.task_id} {group.model_id}: success rate "
            f"{group.success_rate:.1%} over {group.trials} trials"
        )
    return EXIT_OK


def cmd_memory(args: argparse.Namespace) -> int:
    if not os.path.exists(args.store):
        print(f"error: no store file at '{args.store}'", file=sys.stderr)
        return EXIT_CONFIG
    store = EpisodicStore(path=args.store)
    if args.action == "list":
        print(f"{len(store)} records")
        for record in store.records:
            print(
                f"{record.id} [{record.believed_status}] ({record.model_id}) "
                f"{record.task_description}"
            )
        return EXIT_OK
    if args.action == "search":
        if not args.query:
            print("error: search requires --query", file=sys.stderr)
            return EXIT_CONFIG
        results = store.search(args.query, k=args.k)
        if not results:
            print("no relevant memories")
            return EXIT_OK
        for rank, (record, similarity) in enumerate(results, start=1):
            print(
                f"{rank}. {record.id} similarity {similarity:.3f} "
                f"[{record.believed_status}] {record.task_description}"
            )
        return EXIT_OK
    # purge
    if not args.yes:
        print("refusing to purge without --yes", file=sys.stderr)
        return EXIT_CONFIG
    count = len(store)
    store.purge()
    print(f"purged {count} records")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    scenario_data = _load_scenario_arg(args.scenario)
    if args.stdio:
        serve_stdio(scenario_data, expose_ground_truth=args.expose_ground_truth)
        return EXIT_OK
    server = ToolRpcServer(
        (args.host, args.port),
        scenario_data,
        expose_ground_truth=args.expose_ground_truth,
    )
    print(f"listening on {args.host}:{server.port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        transcript = Transcript.read_jsonl(args.transcript)
    except (TranscriptError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    header = transcript.header
    if header.prompt_version != PROMPT_VERSION:
        print(
            f"error: transcript prompt version '{header.prompt_version}' does "
            f"not match current '{PROMPT_VERSION}'",
            file=sys.stderr,
        )
        return EXIT_CONFIG
    recomputed = scenario_hash(header.scenario)
    if recomputed != header.scenario_hash:
        print(
            f"error: scenario hash mismatch: header says "
            f"{header.scenario_hash}, scenario hashes to {recomputed}",
            file=sys.stderr,
        )
        return EXIT_CONFIG

    if header.initial_world is not None:
        world = WorldState.from_dict(header.initial_world)
    else:
        world = load_scenario(header.scenario)
    store = EpisodicStore()
    for memory in header.initial_memories:
        store.add(
            task_description=memory["task_description"],
            believed_status=memory["believed_status"],
            action_summary=memory["action_summary"],
            model_id=memory.get("model_id", "unknown"),
        )
    handles = MemoryHandles(
        scratchpad=Scratchpad(), store=store, model_id=header.model_id
    )
    limits = RunLimits(max_tool_calls=max(transcript.final.tool_calls, 1))
    backend = RecordedReplayBackend(transcript)
    try:
        run = run_task(
            world,
            handles,
            backend,
            header.task_prompt,
            limits=limits,
            prompt_config=PromptConfig(memory_enabled=header.memory_enabled),
        )
    except ReplayDivergence as exc:
        print(f"replay diverged: {exc}", file=sys.stderr)
        return EXIT_TASK_FAILED

    recorded = transcript.messages
    if len(run.messages) != len(recorded):
        print(
            f"replay diverged: live run has {len(run.messages)} messages, "
            f"recording has {len(recorded)}",
            file=sys.stderr,
        )
        return EXIT_TASK_FAILED
    for live, want in zip(run.messages, recorded):
        if live.semantic_key() != want.semantic_key():
            print(
                f"replay diverged: message index {live.index} differs from "
                f"the recording",
                file=sys.stderr,
            )
            return EXIT_TASK_FAILED
    if run.termination != transcript.final.termination:
        print(
            f"replay diverged: termination '{run.termination}' != recorded "
            f"'{transcript.final.termination}'",
            file=sys.stderr,
        )
        return EXIT_TASK_FAILED
    live_snapshot = snapshot(world)
    if canonical_json(live_snapshot) != canonical_json(transcript.final.snapshot):
        print("replay diverged: final snapshot differs from the recording",
              file=sys.stderr)
        return EXIT_TASK_FAILED
    print(
        f"replay ok: {len(recorded)} messages, {run.tool_calls} tool calls, "
        f"termination {run.termination}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hearth",
        description="Household-agent simulator: run tasks, experiments, and "
        "the tool server.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one task with a backend")
    run.add_argument("--task", required=True, choices=sorted(TASKS))
    run.add_argument(
        "--backend",
        required=True,
        help="scripted:NAME or http:CONFIG_JSON",
    )
    run.add_argument("--scenario", help="scenario JSON (default: bundled)")
    run.add_argument("--baseline", help="baseline.json (or its directory) from t1")
    run.add_argument("--memory", help="episodic store JSONL path")
    run.add_argument("--output-dir", help="write transcript and baseline here")
    run.add_argument("--max-tool-calls", type=int, default=50)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--no-memory", action="store_true",
                     help="hide search_memory from the agent")
    run.set_defaults(func=cmd_run)

    experiment = sub.add_parser("experiment", help="run a trial batch from a plan")
    experiment.add_argument("plan", help="experiment plan JSON")
    experiment.add_argument("--report-dir", help="where to write metrics files")
    experiment.set_defaults(func=cmd_experiment)

    memory = sub.add_parser("memory", help="inspect or clear an episodic store")
    memory.add_argument("action", choices=("list", "search", "purge"))
    memory.add_argument("--store", required=True, help="store JSONL path")
    memory.add_argument("--query", help="search query")
    memory.add_argument("--k", type=int, default=3)
    memory.add_argument("--yes", action="store_true", help="confirm purge")
    memory.set_defaults(func=cmd_memory)

    serve = sub.add_parser("serve", help="serve the tool interface over JSON-RPC")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=7341)
    serve.add_argument("--scenario", help="scenario JSON (default: bundled)")
    serve.add_argument("--expose-ground-truth", action="store_true")
    serve.add_argument("--stdio", action="store_true",
                       help="serve a single connection on stdin/stdout")
    serve.set_defaults(func=cmd_serve)

    replay = sub.add_parser("replay", help="re-execute a recorded transcript")
    replay.add_argument("transcript", help="transcript JSONL path")
    replay.set_defaults(func=cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if isinstance(code, int) else EXIT_CONFIG
    try:
        return args.func(args)
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (
        ScenarioError,
        EvaluationError,
        PersistenceError,
        ValueError,
        OSError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
