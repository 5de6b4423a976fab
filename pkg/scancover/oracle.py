"""
Exact reference solvers for small instances.

exact_order_search only explores edge orders whose scan times never decrease
(ties in edge order). Re-scanning any schedule in its own time order never
delays an edge, so repeating that reaches a schedule of this form without
increasing the makespan; an optimum of this form always exists.
"""

import logging
from dataclasses import dataclass
from typing import Mapping

import networkx as nx

from scancover.algos_1d import BitSchedule, steps_for_colors
from scancover.algos_2d import lambda_cone
from scancover.config import load_settings
from scancover.core_model import TOL, Edge, Instance, VertexId
from scancover.errors import CostsNotDiscrete, NoSolutionWithin, TooLarge, TooManyVariables, WrongDimension
from scancover.generators import formula_variables, is_negated, validate_formula, variable_of
from scancover.schedule_engine import ScanSchedule, schedule_from_order
from scancover.tree_abstract import vertex_path

logger = logging.getLogger(__name__)

MAX_NAE_VARIABLES = 20


@dataclass(frozen=True)
class StepCover:
    """Scan cover on the time grid 0, step, 2 step, ...; slots[e] is the step index of edge e."""

    steps: int
    step: float
    slots: Mapping[Edge, int]

    @property
    def makespan(self) -> float:
        return self.step * max(self.steps - 1, 0)

    def to_schedule(self, algorithm_tag: str = "oracle-discrete") -> ScanSchedule:
        return ScanSchedule({edge: slot * self.step for edge, slot in self.slots.items()}, algorithm_tag)


def static_lower_bound(instance: Instance, exact_threshold: int | None = None) -> float:
    """Largest single pair cost, the cone bound in 1D/2D and the exact per-vertex path costs."""
    bound = max(instance.pair_costs.values(), default=0.0)
    if instance.dimension in (1, 2):
        bound = max(bound, lambda_cone(instance))
    if exact_threshold is None:
        exact_threshold = load_settings().exact_threshold
    for vertex_id, edges in instance.incident.items():
        if 2 < len(edges) <= exact_threshold:
            bound = max(bound, vertex_path(instance, vertex_id, exact_threshold)[1])
    return bound


def exact_order_search(instance: Instance, edge_limit: int | None = None) -> ScanSchedule:
    """Branch and bound over edge orders; returns an optimal schedule."""
    settings = load_settings()
    if edge_limit is None:
        edge_limit = settings.edge_limit
    m = len(instance.edges)
    if m > edge_limit:
        raise TooLarge(f"{m} edges exceed the oracle limit of {edge_limit}")
    if m == 0:
        return ScanSchedule({}, "oracle")

    edges = sorted(instance.edges)
    rank = {edge: index for index, edge in enumerate(edges)}
    neighbors = {
        edge: [(other, instance.cost(edge, other)) for vertex_id in edge for other in instance.incident[vertex_id] if other != edge]
        for edge in edges
    }
    floor = static_lower_bound(instance, settings.exact_threshold)

    best = schedule_from_order(instance, edges, "oracle")
    best_makespan = best.makespan
    times: dict[Edge, float] = {}
    order: list[Edge] = []
    explored = 0

    def earliest(edge: Edge) -> float:
        return max((times[other] + cost for other, cost in neighbors[edge] if other in times), default=0.0)

    def search(current: float, last_time: float, last_rank: int) -> None:
        nonlocal best, best_makespan, explored
        explored += 1
        if len(order) == m:
            if current < best_makespan - TOL:
                best = ScanSchedule(dict(times), "oracle")
                best_makespan = current
                logger.debug("oracle incumbent %.6f after %d nodes", current, explored)
            return
        if best_makespan <= floor + TOL:
            return

        candidates = []
        bound = max(current, floor)
        for edge in edges:
            if edge in times:
                continue
            t = earliest(edge)
            bound = max(bound, t)
            if t < last_time - TOL or (abs(t - last_time) <= TOL and rank[edge] < last_rank):
                # not yet; a later incident edge may still push it past last_time
                continue
            candidates.append((t, rank[edge], edge))
        if bound >= best_makespan - TOL:
            return

        for t, edge_rank, edge in sorted(candidates):
            times[edge] = t
            order.append(edge)
            search(max(current, t), t, edge_rank)
            order.pop()
            del times[edge]

    search(0.0, 0.0, -1)
    logger.debug("oracle finished with %.6f after %d nodes", best_makespan, explored)
    return best


def _discrete_costs(instance: Instance, step: float) -> dict[Edge, list[tuple[Edge, int]]]:
    if step <= 0:
        raise CostsNotDiscrete("step must be positive")
    constraints: dict[Edge, list[tuple[Edge, int]]] = {edge: [] for edge in instance.edges}
    for key, cost in instance.pair_costs.items():
        multiple = round(cost / step)
        if abs(cost - multiple * step) > 1e-9 * max(1.0, abs(cost)):
            raise CostsNotDiscrete(f"cost {cost} is not a multiple of {step}")
        if multiple > 0:
            e1, e2 = sorted(key)
            constraints[e1].append((e2, multiple))
            constraints[e2].append((e1, multiple))
    return constraints


def _solve_slots(edges: list[Edge], constraints, slots_available: int) -> dict[Edge, int] | None:
    """Backtracking with forward checking on the step index of every edge."""
    domains = {edge: set(range(slots_available)) for edge in edges}
    assigned: dict[Edge, int] = {}

    def search() -> bool:
        if len(assigned) == len(edges):
            return True
        edge = min(
            (e for e in edges if e not in assigned),
            key=lambda e: (len(domains[e]), -len(constraints[e]), e),
        )
        for slot in sorted(domains[edge]):
            pruned = []
            feasible = True
            for other, gap in constraints[edge]:
                if other in assigned:
                    continue
                removed = {s for s in domains[other] if abs(s - slot) < gap}
                if removed:
                    domains[other] -= removed
                    pruned.append((other, removed))
                if not domains[other]:
                    feasible = False
                    break
            if feasible:
                assigned[edge] = slot
                if search():
                    return True
                del assigned[edge]
            for other, removed in pruned:
                domains[other] |= removed
        return False

    return dict(assigned) if search() else None


def discrete_step_oracle(instance: Instance, step: float, max_steps: int = 8) -> StepCover:
    """Fewest time steps of length `step` that admit a scan cover, when all costs are multiples of `step`."""
    constraints = _discrete_costs(instance, step)
    edges = sorted(instance.edges)
    if not edges:
        return StepCover(0, step, {})
    for steps in range(1, max_steps + 1):
        slots = _solve_slots(edges, constraints, steps)
        if slots is not None:
            logger.debug("discrete oracle: %d steps", steps)
            return StepCover(steps, step, slots)
    raise NoSolutionWithin(max_steps)


def exact_1d(instance: Instance, vertex_limit: int | None = None) -> BitSchedule:
    """Smallest number of 180-degree steps for a 1D instance, by backtracking over bit vectors."""
    if instance.dimension != 1:
        raise WrongDimension("exact_1d needs a 1D instance")
    if vertex_limit is None:
        vertex_limit = load_settings().vertex_limit_1d
    n = len(instance.vertices)
    if n > vertex_limit:
        raise TooLarge(f"{n} vertices exceed the oracle limit of {vertex_limit}")
    if not instance.edges:
        return BitSchedule(0, {vertex_id: "" for vertex_id in instance.vertex_ids})

    rank = instance.line_rank
    graph = instance.graph
    ordered = sorted(instance.vertex_ids, key=rank.get)
    left_of = {v: [u for u in graph.neighbors(v) if rank[u] < rank[v]] for v in ordered}
    right_of = {v: [u for u in graph.neighbors(v) if rank[u] > rank[v]] for v in ordered}

    for steps in range(1, steps_for_colors(max(n, 2)) + 1):
        full = (1 << steps) - 1
        masks: dict[VertexId, int] = {}

        def candidates(v: VertexId) -> range | list[int]:
            # a vertex with neighbors on one side only is best served by facing that side always
            if not left_of[v]:
                return [0]
            if not right_of[v]:
                return [full]
            return range(full + 1)

        def fits(v: VertexId, mask: int) -> bool:
            # bit i set = facing left at step i; the left endpoint needs 0 where the right one has 1
            return all(mask & ~masks[u] & full for u in left_of[v] if u in masks)

        def search(index: int) -> bool:
            if index == len(ordered):
                return True
            v = ordered[index]
            for mask in candidates(v):
                if fits(v, mask):
                    masks[v] = mask
                    if search(index + 1):
                        return True
                    del masks[v]
            return False

        if search(0):
            # most significant bit is the first step
            vectors = {v: format(masks[v], f"0{steps}b") for v in ordered}
            return BitSchedule(steps, vectors)
    raise AssertionError("balanced vectors always give a cover")


def nae3sat_check(formula) -> tuple[bool, dict[str, bool] | None]:
    """Brute force over all assignments: is there one with a true and a false literal in every clause?"""
    formula = validate_formula(formula)
    variables = formula_variables(formula)
    if len(variables) > MAX_NAE_VARIABLES:
        raise TooManyVariables(f"{len(variables)} variables exceed {MAX_NAE_VARIABLES}")
    position = {variable: index for index, variable in enumerate(variables)}
    for mask in range(1 << len(variables)):
        values = {variable: bool(mask >> position[variable] & 1) for variable in variables}
        if all(_nae_satisfied(clause, values) for clause in formula):
            return True, values
    return False, None


def _nae_satisfied(clause, values: Mapping[str, bool]) -> bool:
    truths = {values[variable_of(literal)] != is_negated(literal) for literal in clause}
    return truths == {True, False}


def exact_chromatic(instance: Instance, vertex_limit: int | None = None) -> int:
    """Chromatic number by DSATUR branch and bound."""
    if vertex_limit is None:
        vertex_limit = load_settings().chromatic_limit
    graph = instance.graph
    n = graph.number_of_nodes()
    if n > vertex_limit:
        raise TooLarge(f"{n} vertices exceed the oracle limit of {vertex_limit}")
    if n == 0:
        return 0
    if graph.number_of_edges() == 0:
        return 1

    adjacency = {v: set(graph.neighbors(v)) for v in graph.nodes}
    greedy = nx.coloring.greedy_color(graph, strategy="smallest_last")
    best = len(set(greedy.values()))
    clique = max((len(c) for c in nx.find_cliques(graph)), default=1)
    colors: dict[VertexId, int] = {}

    def search(used: int) -> None:
        nonlocal best
        if best == clique:
            return
        if len(colors) == n:
            best = min(best, used)
            return
        vertex = max(
            (v for v in adjacency if v not in colors),
            key=lambda v: (len({colors[u] for u in adjacency[v] if u in colors}), len(adjacency[v]), v),
        )
        blocked = {colors[u] for u in adjacency[vertex] if u in colors}
        for color in range(min(used + 1, best - 1)):
            if color in blocked:
                continue
            colors[vertex] = color
            search(max(used, color + 1))
            del colors[vertex]

    search(0)
    return best

