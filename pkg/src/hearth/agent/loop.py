"""The perceive-reason-act loop.

One task execution: clear the scratchpad, assemble the context, then
alternate between asking the backend for the next action and dispatching
it, until the agent files a report via end_task, hits the tool-call
budget, refuses to act often enough, or the backend gives out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..tools.dispatch import MemoryHandles, ToolCall, ToolResult, dispatch, failure
from ..world.state import WorldState
from .backends import Backend, BackendError
from .context import (
    AgentContext,
    PromptConfig,
    build_system_prompt,
    inject_memories,
    tool_declarations,
)
from .transcript import TranscriptMessage

REFUSAL_THRESHOLD = 10

TERMINATION_END_TASK = "end_task"
TERMINATION_STEP_LIMIT = "step_limit"
TERMINATION_REFUSAL = "refusal"
TERMINATION_BACKEND_ERROR = "backend_error"

PARALLEL_CALLS_MESSAGE = (
    "Tool call failed (parallel-calls): issue exactly one tool call per "
    "turn; none of these calls were executed."
)


@dataclass(frozen=True)
class RunLimits:
    max_tool_calls: int = 50
    refusal_threshold: int = REFUSAL_THRESHOLD
    max_messages: int = 200

    def __post_init__(self) -> None:
        if self.max_tool_calls < 1:
            raise ValueError("max_tool_calls must be >= 1")
        if self.refusal_threshold < 1:
            raise ValueError("refusal_threshold must be >= 1")


@dataclass
class TaskRun:
    task_prompt: str
    terminated: bool
    termination: str
    believed_status: str | None
    tool_calls: int
    messages: list[TranscriptMessage]
    latencies_s: list[float] = field(default_factory=list)
    error: str | None = None

    @property
    def believed_succeeded(self) -> bool:
        return self.believed_status == "succeeded"


def detect_refusal(
    no_action_attempts: Sequence[bool], threshold: int = REFUSAL_THRESHOLD
) -> bool:
    """True iff the trailing run of no-action invocations reaches threshold.

    Each entry is one backend invocation for the same task; True marks an
    invocation that produced neither a tool call nor end_task. Any action
    resets the count.
    """
    streak = 0
    for no_action in no_action_attempts:
        streak = streak + 1 if no_action else 0
    return streak >= threshold


def run_task(
    world: WorldState,
    memory: MemoryHandles,
    backend: Backend,
    task_prompt: str,
    limits: RunLimits | None = None,
    prompt_config: PromptConfig | None = None,
    preinject_memories: int = 0,
) -> TaskRun:
    """Drive one task to termination and return its record."""
    limits = limits or RunLimits()
    prompt_config = prompt_config or PromptConfig()
    memory.scratchpad.clear()
    context = AgentContext(
        system_prompt=build_system_prompt(prompt_config),
        task_prompt=task_prompt,
        max_messages=limits.max_messages,
        scratchpad=memory.scratchpad,
    )
    inject_memories(context, memory.store, task_prompt, preinject_memories)
    declarations = tool_declarations(prompt_config)

    attempts: list[bool] = []
    tool_calls = 0
    latencies: list[float] = []
    # Hard bound on backend invocations so a backend that only ever
    # proposes parallel calls cannot spin the loop forever.
    max_invocations = limits.max_tool_calls * 3 + limits.refusal_threshold

    def finish(
        termination: str, believed: str | None, error: str | None = None
    ) -> TaskRun:
        return TaskRun(
            task_prompt=task_prompt,
            terminated=True,
            termination=termination,
            believed_status=believed,
            tool_calls=tool_calls,
            messages=context.messages,
            latencies_s=latencies,
            error=error,
        )

    for _ in range(max_invocations):
        try:
            reply = backend.next_action(context, declarations)
        except BackendError as exc:
            context.append_assistant_text(f"[backend error: {exc}]")
            return finish(TERMINATION_BACKEND_ERROR, None, error=str(exc))
        if reply.latency_s is not None:
            latencies.append(reply.latency_s)

        if not reply.calls:
            context.append_assistant_text(reply.text or "")
            attempts.append(True)
            if detect_refusal(attempts, limits.refusal_threshold):
                return finish(TERMINATION_REFUSAL, None)
            continue
        attempts.append(False)

        if len(reply.calls) > 1:
            # Parallel calls are rejected wholesale: every call gets a
            # corrective tool message and none is dispatched.
            context.append_assistant_calls(
                [c.to_dict() for c in reply.calls], reply.text
            )
            rejection = failure(PARALLEL_CALLS_MESSAGE, cause="parallel-calls")
            for proposed in reply.calls:
                context.append_tool_result(proposed.call_id, proposed.name, rejection)
            continue

        proposed = reply.calls[0]
        context.append_assistant_calls([proposed.to_dict()], reply.text)
        result: ToolResult = dispatch(
            ToolCall(proposed.name, proposed.arguments, call_index=tool_calls),
            world,
            memory,
        )
        tool_calls += 1
        context.append_tool_result(proposed.call_id, proposed.name, result)

        if result.ok and result.machine_payload.get("terminates"):
            return finish(
                TERMINATION_END_TASK, result.machine_payload["believed_status"]
            )
        if tool_calls >= limits.max_tool_calls:
            return finish(TERMINATION_STEP_LIMIT, None)

    return finish(TERMINATION_STEP_LIMIT, None)
