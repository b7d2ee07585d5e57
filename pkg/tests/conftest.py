from __future__ import annotations

import pytest

from hearth.memory.episodic import EpisodicStore
from hearth.memory.scratchpad import Scratchpad
from hearth.tools.dispatch import MemoryHandles, ToolCall, dispatch
from hearth.world.scenario import default_scenario
from hearth.world.state import WorldState


@pytest.fixture
def world() -> WorldState:
    return default_scenario()


@pytest.fixture
def handles() -> MemoryHandles:
    return MemoryHandles(
        scratchpad=Scratchpad(), store=EpisodicStore(), model_id="test"
    )


@pytest.fixture
def call_tool(world, handles):
    """Dispatch one tool call against the shared fixtures."""

    def runner(name: str, arguments: dict | None = None):
        return dispatch(ToolCall(name, arguments if arguments is not None else {}),
                        world, handles)

    return runner
