"""Transcript records: typed JSONL logs of agent runs.

A transcript is a header line (run metadata plus the full scenario and
the world state at task start, so a replay can rebuild the exact world),
one line per context message, and a final line carrying the termination
verdict and the ground-truth snapshot. Replay consumes these files;
tamper detection compares them message by message.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any


class TranscriptError(ValueError):
    """Raised for malformed or incomplete transcript files."""


@dataclass
class TranscriptMessage:
    """One context message. Assistant messages may propose tool calls;
    tool messages link back to the call they answer."""

    index: int
    role: str
    content: str
    tool_calls: list[dict[str, Any]] | None = None
    tool_result: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "type": "message",
            "index": self.index,
            "role": self.role,
            "content": self.content,
        }
        if self.tool_calls is not None:
            data["tool_calls"] = self.tool_calls
        if self.tool_result is not None:
            data["tool_result"] = self.tool_result
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TranscriptMessage":
        return cls(
            index=int(data["index"]),
            role=data["role"],
            content=data["content"],
            tool_calls=data.get("tool_calls"),
            tool_result=data.get("tool_result"),
        )

    def semantic_key(self) -> tuple:
        """The fields that must match for two messages to count as equal
        under replay (ids and indexes included; they are deterministic)."""
        calls = None
        if self.tool_calls is not None:
            calls = tuple(
                (c.get("id"), c.get("name"), json.dumps(c.get("arguments"), sort_keys=True))
                for c in self.tool_calls
            )
        result = None
        if self.tool_result is not None:
            result = (
                self.tool_result.get("call_id"),
                self.tool_result.get("status"),
                self.tool_result.get("message"),
            )
        return (self.index, self.role, self.content, calls, result)


@dataclass
class TranscriptHeader:
    scenario: dict[str, Any]
    scenario_hash: str
    prompt_version: str
    model_id: str
    task_id: str
    task_prompt: str
    seed: int | None = None
    memory_enabled: bool = True
    initial_memories: list[dict[str, Any]] = field(default_factory=list)
    # World state at task start. A task run from a baseline (t2 after t1)
    # does not begin at the scenario's seed placements, so replay needs
    # the actual starting world, not a fresh scenario load.
    initial_world: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "type": "header",
            "scenario": self.scenario,
            "scenario_hash": self.scenario_hash,
            "prompt_version": self.prompt_version,
            "model_id": self.model_id,
            "task_id": self.task_id,
            "task_prompt": self.task_prompt,
            "seed": self.seed,
            "memory_enabled": self.memory_enabled,
            "initial_memories": self.initial_memories,
        }
        if self.initial_world is not None:
            data["initial_world"] = self.initial_world
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TranscriptHeader":
        return cls(
            scenario=data["scenario"],
            scenario_hash=data["scenario_hash"],
            prompt_version=data["prompt_version"],
            model_id=data["model_id"],
            task_id=data["task_id"],
            task_prompt=data["task_prompt"],
            seed=data.get("seed"),
            memory_enabled=data.get("memory_enabled", True),
            initial_memories=data.get("initial_memories", []),
            initial_world=data.get("initial_world"),
        )


@dataclass
class TranscriptFinal:
    termination: str
    believed_status: str | None
    tool_calls: int
    snapshot: dict[str, Any]

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": "final",
            "termination": self.termination,
            "believed_status": self.believed_status,
            "tool_calls": self.tool_calls,
            "snapshot": self.snapshot,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TranscriptFinal":
        return cls(
            termination=data["termination"],
            believed_status=data.get("believed_status"),
            tool_calls=int(data["tool_calls"]),
            snapshot=data["snapshot"],
        )


@dataclass
class Transcript:
    header: TranscriptHeader
    messages: list[TranscriptMessage]
    final: TranscriptFinal

    def write_jsonl(self, path: str) -> None:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(json.dumps(self.header.to_dict(), sort_keys=True) + "\n")
            for message in self.messages:
                handle.write(json.dumps(message.to_dict(), sort_keys=True) + "\n")
            handle.write(json.dumps(self.final.to_dict(), sort_keys=True) + "\n")

    @classmethod
    def read_jsonl(cls, path: str) -> "Transcript":
        header: TranscriptHeader | None = None
        final: TranscriptFinal | None = None
        messages: list[TranscriptMessage] = []
        with open(path, encoding="utf-8") as handle:
            for number, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    data = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise TranscriptError(f"{path}:{number}: invalid JSON: {exc}") from exc
                kind = data.get("type")
                try:
                    if kind == "header":
                        header = TranscriptHeader.from_dict(data)
                    elif kind == "message":
                        messages.append(TranscriptMessage.from_dict(data))
                    elif kind == "final":
                        final = TranscriptFinal.from_dict(data)
                    else:
                        raise TranscriptError(
                            f"{path}:{number}: unknown line type {kind!r}"
                        )
                except (KeyError, TypeError, ValueError) as exc:
                    if isinstance(exc, TranscriptError):
                        raise
                    raise TranscriptError(
                        f"{path}:{number}: malformed {kind} line: {exc}"
                    ) from exc
        if header is None:
            raise TranscriptError(f"{path}: missing header line")
        if final is None:
            raise TranscriptError(f"{path}: missing final line")
        return cls(header=header, messages=messages, final=final)
