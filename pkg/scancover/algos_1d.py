"""
Discrete scan covers for points on a line.

In 1D every vertex faces right or left, so a scan cover with N steps is an
assignment of N-bit vectors (0 = facing right, 1 = facing left); the edge uv
with u left of v is scanned in a step where u faces right and v faces left.
Such a cover takes 180 degrees per step after the first.

Assigning pairwise incomparable vectors (same number of ones, all distinct)
to the color classes of a proper coloring scans every edge whatever its
orientation; the same construction bounds the directed cut cover number.
"""

import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

import networkx as nx

from scancover.core_model import Instance, VertexId, is_complete
from scancover.errors import CoverViolation, ImproperColoring, NotBipartite, NotComplete, WrongDimension
from scancover.schedule_engine import ScanSchedule

logger = logging.getLogger(__name__)

STEP_DEGREES = 180.0


@dataclass(frozen=True)
class BitSchedule:
    steps: int
    vectors: Mapping[VertexId, str]

    @property
    def scan_time(self) -> float:
        return STEP_DEGREES * max(self.steps - 1, 0)


def _require_1d(instance: Instance) -> None:
    if instance.dimension != 1:
        raise WrongDimension("1D algorithms need a 1D instance")


def _oriented(instance: Instance, edge) -> tuple[VertexId, VertexId]:
    """Endpoints of an edge as (left, right) in the line order."""
    u, v = edge
    rank = instance.line_rank
    return (u, v) if rank[u] < rank[v] else (v, u)


def cover_step(bits: BitSchedule, left: VertexId, right: VertexId) -> int | None:
    """Smallest step in which `left` faces right and `right` faces left."""
    for index, (a, b) in enumerate(zip(bits.vectors[left], bits.vectors[right])):
        if a == "0" and b == "1":
            return index
    return None


def has_cover_property(instance: Instance, bits: BitSchedule) -> bool:
    return all(cover_step(bits, *_oriented(instance, edge)) is not None for edge in instance.edges)


def steps_for_colors(colors: int) -> int:
    """
    Number of steps for a C-coloring: ceil(log2 C + 1/2 log2 log2 C + 1), reduced
    while C still fits into the binom(N, floor(N/2)) vectors of weight floor(N/2).
    """
    if colors < 2:
        raise ValueError("steps_for_colors needs at least two colors")
    log_c = math.log2(colors)
    steps = math.ceil(log_c + 0.5 * math.log2(log_c) + 1 - 1e-12)
    assert colors <= math.comb(steps, steps // 2), "weight-N/2 vectors do not suffice"
    while steps > 1 and colors <= math.comb(steps - 1, (steps - 1) // 2):
        steps -= 1
    return steps


def balanced_vectors(steps: int) -> list[str]:
    """All vectors of length `steps` with floor(steps/2) ones, in lexicographic order."""
    ones = steps // 2
    vectors = []
    for positions in combinations(range(steps), ones):
        bits = ["0"] * steps
        for position in positions:
            bits[position] = "1"
        vectors.append("".join(bits))
    return sorted(vectors)


def _check_coloring(instance: Instance, coloring: Mapping[VertexId, int]) -> None:
    for u, v in instance.edges:
        if u not in coloring or v not in coloring:
            raise ImproperColoring(f"edge ({u}, {v}) has an uncolored endpoint")
        if coloring[u] == coloring[v]:
            raise ImproperColoring(f"adjacent vertices {u} and {v} share color {coloring[u]}")


def vectors_from_coloring(instance: Instance, coloring: Mapping[VertexId, int]) -> BitSchedule:
    """
    Give every color class its own vector with floor(N/2) ones. Distinct vectors of
    equal weight are incomparable, so every edge finds a step in either orientation.
    """
    _require_1d(instance)
    _check_coloring(instance, coloring)
    classes = sorted({coloring.get(vertex_id, 0) for vertex_id in instance.vertex_ids})
    steps = steps_for_colors(max(len(classes), 2))
    pool = balanced_vectors(steps)
    vector_of = {color: pool[index] for index, color in enumerate(classes)}
    vectors = {vertex_id: vector_of[coloring.get(vertex_id, 0)] for vertex_id in instance.vertex_ids}
    logger.debug("%d colors -> %d steps", len(classes), steps)
    return BitSchedule(steps, vectors)


def solve_bipartite_1d(instance: Instance) -> BitSchedule:
    """
    Optimal scan cover of a bipartite graph on a line: one step when every vertex
    sees all its neighbors on one side, otherwise two steps from a 2-coloring.
    """
    _require_1d(instance)
    graph = instance.graph
    if not nx.is_bipartite(graph):
        raise NotBipartite("underlying graph is not bipartite")

    rank = instance.line_rank
    one_sided = True
    vectors = {}
    for vertex_id in instance.vertex_ids:
        sides = {rank[neighbor] > rank[vertex_id] for neighbor in graph.neighbors(vertex_id)}
        if len(sides) > 1:
            one_sided = False
            break
        vectors[vertex_id] = "1" if sides == {False} else "0"
    if one_sided:
        return BitSchedule(1, vectors)

    coloring = nx.bipartite.color(graph)
    return vectors_from_coloring(instance, coloring)


def solve_complete_1d(instance: Instance) -> BitSchedule:
    """
    Optimal scan cover of a complete graph on a line with ceil(log2 n) steps:
    split the line order into halves and recurse; at each level the left half
    faces right and the right half faces left.
    """
    _require_1d(instance)
    if not is_complete(instance):
        raise NotComplete("underlying graph is not complete")

    ordered = sorted(instance.vertex_ids, key=instance.line_rank.get)
    steps = math.ceil(math.log2(len(ordered)))
    vectors = {vertex_id: "" for vertex_id in ordered}

    def split(block: list[VertexId], level: int) -> None:
        if level == steps:
            return
        half = (len(block) + 1) // 2
        left, right = block[:half], block[half:]
        for vertex_id in left:
            vectors[vertex_id] += "0"
        for vertex_id in right:
            vectors[vertex_id] += "1"
        split(left, level + 1)
        split(right, level + 1)

    split(ordered, 0)
    return BitSchedule(steps, vectors)


def solve_coloring_1d(instance: Instance, coloring: Mapping[VertexId, int] | None = None) -> BitSchedule:
    """General 1D construction from a proper coloring (smallest-last greedy by default)."""
    _require_1d(instance)
    if coloring is None:
        coloring = nx.coloring.greedy_color(instance.graph, strategy="smallest_last")
    return vectors_from_coloring(instance, coloring)


def bitschedule_to_schedule(bits: BitSchedule, instance: Instance, algorithm_tag: str = "bits-1d") -> ScanSchedule:
    """Scan every edge in its first valid step, at 180 degrees per step."""
    times = {}
    for edge in instance.edges:
        left, right = _oriented(instance, edge)
        step = cover_step(bits, left, right)
        if step is None:
            raise CoverViolation(f"edge {edge} has no step with {left} facing right and {right} facing left")
        times[edge] = STEP_DEGREES * step
    return ScanSchedule(times, algorithm_tag)
