"""World state: furniture with slots, objects, the agent body, snapshots.

The world is the single source of ground truth. Nothing here talks to the
agent; observation happens through the tool layer, and the evaluation
harness reads immutable snapshots.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .semantic_map import SemanticMap

DEFAULT_REACH_RADIUS = 1.5


@dataclass(frozen=True)
class InSlot:
    furniture_id: str
    slot_index: int


@dataclass(frozen=True)
class Held:
    pass


@dataclass(frozen=True)
class AtLocation:
    location_id: str


Containment = InSlot | Held | AtLocation


def containment_to_dict(c: Containment) -> dict:
    if isinstance(c, InSlot):
        return {"kind": "slot", "furniture": c.furniture_id, "slot": c.slot_index}
    if isinstance(c, Held):
        return {"kind": "held"}
    return {"kind": "loose", "location": c.location_id}


def containment_from_dict(d: dict) -> Containment:
    kind = d["kind"]
    if kind == "slot":
        return InSlot(d["furniture"], d["slot"])
    if kind == "held":
        return Held()
    if kind == "loose":
        return AtLocation(d["location"])
    raise ValueError(f"unknown containment kind '{kind}'")


@dataclass
class Furniture:
    """A supporting surface at a map node, with single-occupancy slots."""

    id: str
    location: str
    slots: list[str | None]

    def slot_name(self, index: int) -> str:
        return f"{self.id}_layer_{index + 1}"


@dataclass
class SimObject:
    id: str
    kind: str
    graspable: bool
    containment: Containment


@dataclass
class AgentBody:
    location: str
    held: str | None = None
    reach_radius: float = DEFAULT_REACH_RADIUS


@dataclass
class WorldState:
    map: SemanticMap
    furniture: dict[str, Furniture] = field(default_factory=dict)
    objects: dict[str, SimObject] = field(default_factory=dict)
    agent: AgentBody = field(default_factory=lambda: AgentBody(location=""))
    step_counter: int = 0

    def find_slot(self, slot_name: str) -> tuple[Furniture, int] | None:
        for furn in self.furniture.values():
            for index in range(len(furn.slots)):
                if furn.slot_name(index) == slot_name:
                    return furn, index
        return None

    def agent_position(self) -> tuple[float, float]:
        return self.map.positions[self.agent.location]

    def object_position(self, obj: SimObject) -> tuple[float, float]:
        c = obj.containment
        if isinstance(c, InSlot):
            return self.map.positions[self.furniture[c.furniture_id].location]
        if isinstance(c, Held):
            return self.agent_position()
        return self.map.positions[c.location_id]

    def within_reach(self, position: tuple[float, float]) -> bool:
        return math.dist(self.agent_position(), position) <= self.agent.reach_radius

    def describe_placement(self, obj: SimObject) -> str:
        """Human-readable placement, e.g. 'mug on shelf layer 2'."""
        c = obj.containment
        if isinstance(c, InSlot):
            return f"{obj.id} on {c.furniture_id} layer {c.slot_index + 1}"
        if isinstance(c, Held):
            return f"{obj.id} held by agent"
        return f"{obj.id} at {c.location_id}"

    def to_dict(self) -> dict:
        return {
            "map": self.map.to_dict(),
            "furniture": [
                {"id": f.id, "location": f.location, "slots": list(f.slots)}
                for f in sorted(self.furniture.values(), key=lambda f: f.id)
            ],
            "objects": [
                {"id": o.id, "kind": o.kind, "graspable": o.graspable,
                 "containment": containment_to_dict(o.containment)}
                for o in sorted(self.objects.values(), key=lambda o: o.id)
            ],
            "agent": {
                "location": self.agent.location,
                "held": self.agent.held,
                "reach_radius": self.agent.reach_radius,
            },
            "step_counter": self.step_counter,
        }

    @classmethod
    def from_dict(cls, data: dict) -> WorldState:
        state = cls(map=SemanticMap.from_dict(data["map"]))
        for f in data["furniture"]:
            state.furniture[f["id"]] = Furniture(f["id"], f["location"], list(f["slots"]))
        for o in data["objects"]:
            state.objects[o["id"]] = SimObject(
                o["id"], o["kind"], o["graspable"],
                containment_from_dict(o["containment"]),
            )
        state.agent = AgentBody(
            location=data["agent"]["location"],
            held=data["agent"]["held"],
            reach_radius=data["agent"]["reach_radius"],
        )
        state.step_counter = data["step_counter"]
        validate_state(state)
        return state


def canonical_json(data) -> str:
    """Canonical serialization: sorted keys, no whitespace, bit-exact."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def snapshot(state: WorldState) -> dict:
    """Ground-truth snapshot of containment facts and agent state.

    Consumed only by the evaluation harness; the agent never sees it.
    """
    return {
        "step_counter": state.step_counter,
        "agent": {"location": state.agent.location, "held": state.agent.held},
        "objects": {
            oid: containment_to_dict(obj.containment)
            for oid, obj in sorted(state.objects.items())
        },
    }


class InvariantViolation(AssertionError):
    """The world state broke one of its structural invariants."""


def validate_state(state: WorldState) -> None:
    """Check all structural invariants; raises InvariantViolation."""
    def check(cond: bool, msg: str) -> None:
        if not cond:
            raise InvariantViolation(msg)

    smap = state.map
    for node, nbrs in smap.adjacency.items():
        check(node in smap.positions, f"edge endpoint '{node}' missing from nodes")
        for nbr, cost in nbrs.items():
            check(nbr in smap.positions, f"edge endpoint '{nbr}' missing from nodes")
            check(nbr != node, f"self-loop on '{node}'")
            check(cost >= 0, f"negative cost on ({node}, {nbr})")

    check(state.step_counter >= 0, "negative step counter")
    check(state.agent.location in smap.positions,
          f"agent at unknown location '{state.agent.location}'")

    for furn in state.furniture.values():
        check(furn.location in smap.positions,
              f"furniture '{furn.id}' at unknown location '{furn.location}'")
        for index, occupant in enumerate(furn.slots):
            if occupant is None:
                continue
            obj = state.objects.get(occupant)
            check(obj is not None,
                  f"slot {furn.slot_name(index)} holds unknown object '{occupant}'")
            check(obj.containment == InSlot(furn.id, index),
                  f"slot {furn.slot_name(index)} and object '{occupant}' disagree")

    held_objects = []
    for obj in state.objects.values():
        c = obj.containment
        if isinstance(c, InSlot):
            furn = state.furniture.get(c.furniture_id)
            check(furn is not None,
                  f"object '{obj.id}' references unknown furniture '{c.furniture_id}'")
            check(0 <= c.slot_index < len(furn.slots),
                  f"object '{obj.id}' references slot index {c.slot_index} out of range")
            check(furn.slots[c.slot_index] == obj.id,
                  f"object '{obj.id}' not registered in its slot")
        elif isinstance(c, Held):
            held_objects.append(obj.id)
        else:
            check(c.location_id in smap.positions,
                  f"object '{obj.id}' at unknown location '{c.location_id}'")

    check(len(held_objects) <= 1, f"multiple held objects: {held_objects}")
    if held_objects:
        check(state.agent.held == held_objects[0],
              "held object does not match agent.held")
    else:
        check(state.agent.held is None,
              f"agent.held '{state.agent.held}' references no held object")
