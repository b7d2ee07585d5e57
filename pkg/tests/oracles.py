"""Independent reference implementations used to cross-check the package.

Nothing here imports the implementation under test beyond data types:
the Dijkstra oracle uses a dict scan instead of a heap, and the cosine
oracle recomputes similarity from scratch and ranks by repeated max
extraction instead of a sort.
"""

from __future__ import annotations

import math
import random

from hearth.memory.episodic import EpisodicRecord
from hearth.world.semantic_map import SemanticMap


def dijkstra_cost(smap: SemanticMap, start: str, goal: str) -> float | None:
    """Cheapest-path cost by textbook dict-scan Dijkstra, or None."""
    unvisited = set(smap.positions)
    dist = {node: math.inf for node in unvisited}
    dist[start] = 0.0
    while unvisited:
        current = min(unvisited, key=lambda node: dist[node])
        if dist[current] == math.inf:
            break
        unvisited.remove(current)
        if current == goal:
            return dist[current]
        for neighbor, cost in smap.adjacency[current].items():
            if neighbor in unvisited and dist[current] + cost < dist[neighbor]:
                dist[neighbor] = dist[current] + cost
    return None if dist[goal] == math.inf else dist[goal]


def random_connected_map(rng: random.Random, max_nodes: int = 12) -> SemanticMap:
    """Random connected map with costs >= Euclidean distance."""
    count = rng.randint(2, max_nodes)
    smap = SemanticMap()
    names = [f"n{i:02d}" for i in range(count)]
    for name in names:
        smap.add_node(name, rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0), "room")
    for index in range(1, count):
        other = names[rng.randrange(index)]
        _add_random_edge(rng, smap, names[index], other)
    extra = rng.randint(0, count)
    for _ in range(extra):
        a, b = rng.sample(names, 2)
        if b not in smap.adjacency[a]:
            _add_random_edge(rng, smap, a, b)
    return smap


def _add_random_edge(rng: random.Random, smap: SemanticMap, a: str, b: str) -> None:
    base = smap.euclidean(a, b)
    cost = max(base * rng.uniform(1.0, 1.5), 1e-6)
    smap.add_edge(a, b, cost)


def two_component_map(rng: random.Random) -> tuple[SemanticMap, str, str]:
    """A map with two islands; returns (map, node_in_a, node_in_b)."""
    smap = SemanticMap()
    for i in range(3):
        smap.add_node(f"a{i}", float(i), 0.0, "west")
    for i in range(3):
        smap.add_node(f"b{i}", float(i), 50.0, "east")
    for i in range(2):
        _add_random_edge(rng, smap, f"a{i}", f"a{i + 1}")
        _add_random_edge(rng, smap, f"b{i}", f"b{i + 1}")
    return smap, "a0", "b2"


def brute_force_search(
    records: list[EpisodicRecord],
    query_vector: list[float],
    k: int,
    floor: float,
) -> list[tuple[str, float]]:
    """(record id, similarity) by exhaustive scan and max extraction."""
    scored = []
    for record in records:
        dot = math.fsum(q * v for q, v in zip(query_vector, record.embedding))
        nq = math.sqrt(math.fsum(q * q for q in query_vector))
        nv = math.sqrt(math.fsum(v * v for v in record.embedding))
        similarity = 0.0 if nq == 0.0 or nv == 0.0 else dot / (nq * nv)
        if similarity >= floor:
            scored.append((record.id, similarity, record.created_at))
    picked: list[tuple[str, float]] = []
    remaining = list(scored)
    while remaining and len(picked) < k:
        best = remaining[0]
        for candidate in remaining[1:]:
            if (candidate[1], candidate[2]) > (best[1], best[2]):
                best = candidate
        remaining.remove(best)
        picked.append((best[0], best[1]))
    return picked
