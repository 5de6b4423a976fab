"""
Scan covers for abstract instances: stars as Path-TSP, trees by cyclic
orders, general graphs through a forest decomposition.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import networkx as nx

from scancover.config import load_settings
from scancover.core_model import TOL, Edge, Instance, VertexId
from scancover.errors import NotAStar, NotATree
from scancover.schedule_engine import ScanSchedule, concatenate_phases

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CyclicOrder:
    """Incident edges of a vertex in cyclic order; offsets[i] is the cost of the path up to edges[i]."""

    vertex: VertexId
    edges: tuple[Edge, ...]
    offsets: tuple[float, ...]
    length: float


def path_cost(instance: Instance, order: Sequence[Edge]) -> float:
    return sum(instance.cost(a, b) for a, b in zip(order, order[1:]))


def held_karp_path(instance: Instance, edges: Sequence[Edge]) -> tuple[list[Edge], float]:
    """Minimum-cost Hamiltonian path through pairwise incident edges, free endpoints."""
    edges = sorted(edges)
    n = len(edges)
    if n <= 1:
        return list(edges), 0.0
    cost = [[0.0 if i == j else instance.cost(edges[i], edges[j]) for j in range(n)] for i in range(n)]

    # best[(mask, last)] = (cost, previous)
    best: dict[tuple[int, int], tuple[float, int]] = {(1 << k, k): (0.0, -1) for k in range(n)}
    for mask in range(1, 1 << n):
        for last in range(n):
            state = best.get((mask, last))
            if state is None:
                continue
            for nxt in range(n):
                if mask & (1 << nxt):
                    continue
                key = (mask | (1 << nxt), nxt)
                value = state[0] + cost[last][nxt]
                if key not in best or value < best[key][0] - TOL:
                    best[key] = (value, last)

    full = (1 << n) - 1
    last = min(range(n), key=lambda k: (best[(full, k)][0], k))
    total = best[(full, last)][0]
    order = []
    mask = full
    while last != -1:
        order.append(edges[last])
        previous = best[(mask, last)][1]
        mask ^= 1 << last
        last = previous
    order.reverse()
    return order, total


def greedy_path(instance: Instance, edges: Sequence[Edge]) -> tuple[list[Edge], float]:
    """Nearest-neighbor path that starts from the cheapest pair."""
    edges = sorted(edges)
    if len(edges) <= 1:
        return list(edges), 0.0
    first, second = min(
        ((a, b) for i, a in enumerate(edges) for b in edges[i + 1:]),
        key=lambda pair: (instance.cost(*pair), pair),
    )
    order = [first, second]
    remaining = set(edges) - {first, second}
    while remaining:
        nxt = min(remaining, key=lambda edge: (instance.cost(order[-1], edge), edge))
        order.append(nxt)
        remaining.remove(nxt)
    return order, path_cost(instance, order)


def vertex_path(instance: Instance, vertex_id: VertexId, exact_threshold: int | None = None) -> tuple[list[Edge], float]:
    """Cheapest order of the edges at one vertex: exact up to the threshold degree, greedy above."""
    if exact_threshold is None:
        exact_threshold = load_settings().exact_threshold
    edges = instance.incident[vertex_id]
    if len(edges) <= exact_threshold:
        return held_karp_path(instance, edges)
    logger.debug("vertex %s has degree %d, using the greedy path", vertex_id, len(edges))
    return greedy_path(instance, edges)


def star_order(instance: Instance, center: VertexId, exact_threshold: int | None = None) -> list[Edge]:
    """
    Order of the star's edges as a Path-TSP on the leaves. Scanning them in this
    order with schedule_from_order takes exactly the path cost.
    """
    if center not in instance.incident or any(center not in edge for edge in instance.edges):
        raise NotAStar(f"not every edge is incident to {center}")
    order, cost = vertex_path(instance, center, exact_threshold)
    logger.debug("star at %s: path cost %.6f", center, cost)
    return order


def cyclic_order(instance: Instance, vertex_id: VertexId, exact_threshold: int | None = None) -> CyclicOrder:
    order, _ = vertex_path(instance, vertex_id, exact_threshold)
    offsets = [0.0]
    for a, b in zip(order, order[1:]):
        offsets.append(offsets[-1] + instance.cost(a, b))
    length = offsets[-1] + instance.cost(order[-1], order[0]) if len(order) > 1 else 0.0
    return CyclicOrder(vertex_id, tuple(order), tuple(offsets), length)


def _check_tree(instance: Instance) -> nx.Graph:
    tree = instance.graph.edge_subgraph(instance.edges)
    if instance.edges and not nx.is_tree(tree):
        raise NotATree("edges do not form a tree")
    return tree


def tree_approx(instance: Instance, root: VertexId | None = None, exact_threshold: int | None = None) -> ScanSchedule:
    """
    Every vertex runs once around its cyclic order. The root starts at time 0;
    each child rotates its cycle so that it meets the parent edge at the parent's
    time, folding the part that would pass the horizon back to the start.
    """
    tree = _check_tree(instance)
    if not instance.edges:
        return ScanSchedule({}, "tree")

    cycles = {vertex_id: cyclic_order(instance, vertex_id, exact_threshold) for vertex_id in tree.nodes}
    horizon = max(cycle.length for cycle in cycles.values())
    if root is None:
        root = min(tree.nodes)
    elif root not in tree:
        raise NotATree(f"root {root} is not a tree vertex")

    times: dict[Edge, float] = {}
    root_cycle = cycles[root]
    for edge, offset in zip(root_cycle.edges, root_cycle.offsets):
        times[edge] = offset

    for parent, child in nx.bfs_edges(tree, root):
        cycle = cycles[child]
        parent_index = next(i for i, edge in enumerate(cycle.edges) if parent in edge)
        t = times[cycle.edges[parent_index]]
        for index, edge in enumerate(cycle.edges):
            if index == parent_index:
                continue
            if cycle.length <= TOL:
                times[edge] = t
                continue
            shifted = t + (cycle.offsets[index] - cycle.offsets[parent_index]) % cycle.length
            if shifted > horizon + TOL:
                shifted -= cycle.length
            times[edge] = max(shifted, 0.0)

    schedule = ScanSchedule(times, "tree")
    assert schedule.makespan <= horizon + 1e-6, "tree schedule passed the longest cycle"
    return schedule


def degeneracy_order(graph: nx.Graph) -> list[VertexId]:
    """Repeatedly remove a vertex of minimum degree (smallest id on ties)."""
    degree = dict(graph.degree())
    removed = set()
    order = []
    while len(order) < len(degree):
        vertex_id = min((v for v in degree if v not in removed), key=lambda v: (degree[v], v))
        order.append(vertex_id)
        removed.add(vertex_id)
        for neighbor in graph.neighbors(vertex_id):
            if neighbor not in removed:
                degree[neighbor] -= 1
    return order


def forest_decompose(instance: Instance) -> list[list[Edge]]:
    """
    Orient every edge towards the later vertex of a degeneracy order and put the
    k-th out-edge of each vertex into forest k. Following out-edges moves strictly
    forward in the order, so every part is acyclic; at most degeneracy parts.
    """
    order = degeneracy_order(instance.graph)
    position = {vertex_id: index for index, vertex_id in enumerate(order)}
    forests: list[list[Edge]] = []
    out_count = {vertex_id: 0 for vertex_id in order}
    for u, v in sorted(instance.edges, key=lambda edge: (min(position[edge[0]], position[edge[1]]), edge)):
        tail = u if position[u] < position[v] else v
        k = out_count[tail]
        out_count[tail] += 1
        if k == len(forests):
            forests.append([])
        forests[k].append((u, v))
    for forest in forests:
        assert nx.is_forest(nx.Graph(forest)), "forest decomposition produced a cycle"
    return forests


def arboricity_approx(instance: Instance, exact_threshold: int | None = None) -> ScanSchedule:
    """Tree schedules for every component of every forest; forests run one after another."""
    phases = []
    for forest in forest_decompose(instance):
        times = {}
        for component in nx.connected_components(nx.Graph(forest)):
            edges = [edge for edge in forest if edge[0] in component]
            times.update(tree_approx(instance.restrict(edges), exact_threshold=exact_threshold).times)
        phases.append(ScanSchedule(times, "forest"))
    times, offsets = concatenate_phases(instance, phases)
    logger.debug("arboricity: %d forests at offsets %s", len(phases), offsets)
    return ScanSchedule(times, "arboricity")
