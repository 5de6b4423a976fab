"""
Instance representation and angular transition costs.

An instance is a simple graph whose vertices are points in R^1, R^2 or R^3,
or an abstract graph with an explicit table of transition costs between
incident edges. Costs and scan times are measured in degrees; one degree of
turning takes one unit of time.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterator, Mapping

import networkx as nx

from scancover.errors import DegenerateEdge, InvalidInstance, NotIncident

VertexId = str
Edge = tuple[str, str]

ABSTRACT = "abstract"
DIMENSIONS = (1, 2, 3, ABSTRACT)
TOL = 1e-9


def make_edge(u: VertexId, v: VertexId) -> Edge:
    """Canonical (sorted) form of the undirected edge uv."""
    return (u, v) if u <= v else (v, u)


def pair_key(e1: Edge, e2: Edge) -> frozenset:
    return frozenset((e1, e2))


def angle_between(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    """Smaller angle in degrees between two unit vectors of equal length (2 or 3)."""
    dot = sum(x * y for x, y in zip(a, b))
    if len(a) == 2:
        cross = abs(a[0] * b[1] - a[1] * b[0])
    else:
        cross = math.sqrt(
            (a[1] * b[2] - a[2] * b[1]) ** 2
            + (a[2] * b[0] - a[0] * b[2]) ** 2
            + (a[0] * b[1] - a[1] * b[0]) ** 2
        )
    return math.degrees(math.atan2(cross, dot))


@dataclass(frozen=True)
class Vertex:
    id: VertexId
    coords: tuple[float, ...] = ()


@dataclass(frozen=True)
class MetricViolation:
    vertex: VertexId
    e1: Edge
    e2: Edge
    e3: Edge
    excess: float


@dataclass(frozen=True)
class Instance:
    """
    A scan cover instance.

    `dimension` is 1, 2, 3 or "abstract". Geometric instances give every vertex
    exactly `dimension` coordinates; abstract instances carry `costs`, keyed by
    the unordered pair of incident edges.
    """

    dimension: int | str
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    costs: Mapping[frozenset, float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.dimension not in DIMENSIONS:
            raise InvalidInstance(f"unsupported dimension {self.dimension!r}")

        ids = [vertex.id for vertex in self.vertices]
        if len(set(ids)) != len(ids):
            raise InvalidInstance("duplicate vertex ids")

        known = set(ids)
        edges = []
        for u, v in self.edges:
            if u == v:
                raise InvalidInstance(f"self-loop at {u}")
            if u not in known or v not in known:
                raise InvalidInstance(f"edge ({u}, {v}) references an unknown vertex")
            edges.append(make_edge(u, v))
        if len(set(edges)) != len(edges):
            raise InvalidInstance("duplicate edges")
        object.__setattr__(self, "edges", tuple(edges))

        if self.is_geometric:
            for vertex in self.vertices:
                if len(vertex.coords) != self.dimension:
                    raise InvalidInstance(
                        f"vertex {vertex.id} has {len(vertex.coords)} coordinates, expected {self.dimension}"
                    )
            for u, v in self.edges:
                if self.coords[u] == self.coords[v]:
                    raise DegenerateEdge(f"edge ({u}, {v}) joins two vertices at identical coordinates")
        else:
            table = dict(self.costs or {})
            for _, e1, e2 in self.incident_pairs():
                key = pair_key(e1, e2)
                if key not in table:
                    raise InvalidInstance(f"missing cost for incident pair {e1}, {e2}")
                if table[key] < 0:
                    raise InvalidInstance(f"negative cost for incident pair {e1}, {e2}")
            object.__setattr__(self, "costs", table)

    @property
    def is_geometric(self) -> bool:
        return self.dimension != ABSTRACT

    @cached_property
    def vertex_ids(self) -> tuple[VertexId, ...]:
        return tuple(vertex.id for vertex in self.vertices)

    @cached_property
    def coords(self) -> dict[VertexId, tuple[float, ...]]:
        return {vertex.id: tuple(float(c) for c in vertex.coords) for vertex in self.vertices}

    @cached_property
    def incident(self) -> dict[VertexId, tuple[Edge, ...]]:
        incident = {vertex_id: [] for vertex_id in self.vertex_ids}
        for edge in self.edges:
            incident[edge[0]].append(edge)
            incident[edge[1]].append(edge)
        return {vertex_id: tuple(sorted(edges)) for vertex_id, edges in incident.items()}

    @cached_property
    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertex_ids)
        graph.add_edges_from(self.edges)
        return graph

    @cached_property
    def line_rank(self) -> dict[VertexId, int]:
        """Rank of every vertex along the line (1D only); ties broken by id."""
        if self.dimension != 1:
            raise InvalidInstance("line order is only defined for 1D instances")
        ordered = sorted(self.vertex_ids, key=lambda vertex_id: (self.coords[vertex_id][0], vertex_id))
        return {vertex_id: rank for rank, vertex_id in enumerate(ordered)}

    def position(self, vertex_id: VertexId) -> tuple[float, ...]:
        """Coordinates in heading space (1D points are placed on the x-axis)."""
        coords = self.coords[vertex_id]
        if self.dimension == 1:
            return (coords[0], 0.0)
        return coords

    @cached_property
    def _directions(self) -> dict[tuple[VertexId, VertexId], tuple[float, ...]]:
        directions = {}
        for u, v in self.edges:
            pu, pv = self.position(u), self.position(v)
            delta = tuple(b - a for a, b in zip(pu, pv))
            norm = math.sqrt(sum(x * x for x in delta))
            if norm == 0.0:
                raise DegenerateEdge(f"edge ({u}, {v}) has zero length")
            unit = tuple(x / norm for x in delta)
            directions[(u, v)] = unit
            directions[(v, u)] = tuple(-x for x in unit)
        return directions

    def direction(self, source: VertexId, target: VertexId) -> tuple[float, ...]:
        """Unit vector from `source` towards its neighbor `target`."""
        if not self.is_geometric:
            raise InvalidInstance("abstract instances have no directions")
        return self._directions[(source, target)]

    @staticmethod
    def shared_vertex(e1: Edge, e2: Edge) -> VertexId | None:
        common = set(e1) & set(e2)
        if len(common) != 1:
            return None
        return next(iter(common))

    @staticmethod
    def other(edge: Edge, vertex_id: VertexId) -> VertexId:
        return edge[1] if edge[0] == vertex_id else edge[0]

    def incident_pairs(self) -> Iterator[tuple[VertexId, Edge, Edge]]:
        """Every unordered pair of distinct edges sharing a vertex, with that vertex."""
        incident = {vertex_id: [] for vertex_id in self.vertex_ids}
        for edge in self.edges:
            incident[edge[0]].append(edge)
            incident[edge[1]].append(edge)
        for vertex_id in self.vertex_ids:
            for e1, e2 in combinations(sorted(incident[vertex_id]), 2):
                yield vertex_id, e1, e2

    def cost(self, e1: Edge, e2: Edge) -> float:
        """Transition cost between two incident edges (no validation)."""
        if not self.is_geometric:
            return self.costs[pair_key(e1, e2)]
        vertex_id = self.shared_vertex(e1, e2)
        a = self._directions[(vertex_id, self.other(e1, vertex_id))]
        b = self._directions[(vertex_id, self.other(e2, vertex_id))]
        return angle_between(a, b)

    @cached_property
    def pair_costs(self) -> dict[frozenset, float]:
        return {pair_key(e1, e2): self.cost(e1, e2) for _, e1, e2 in self.incident_pairs()}

    def restrict(self, edges) -> "Instance":
        """Sub-instance on the same vertices with only the given edges."""
        kept = tuple(sorted(make_edge(u, v) for u, v in edges))
        missing = set(kept) - set(self.edges)
        if missing:
            raise InvalidInstance(f"edges not in instance: {sorted(missing)}")
        costs = None
        if not self.is_geometric:
            kept_set = set(kept)
            costs = {key: value for key, value in self.costs.items() if key <= kept_set}
        return Instance(self.dimension, self.vertices, kept, costs)

    def to_abstract(self) -> "Instance":
        """The abstract instance induced by the angular costs of this one."""
        if not self.is_geometric:
            return self
        vertices = tuple(Vertex(vertex.id) for vertex in self.vertices)
        return Instance(ABSTRACT, vertices, self.edges, dict(self.pair_costs))


def angular_cost(instance: Instance, e1: Edge, e2: Edge) -> float:
    """
    Transition cost in degrees between two incident edges.

    Geometric instances return the smaller angle at the shared vertex
    (in 1D: 0 when both neighbors lie on the same side, 180 otherwise);
    abstract instances look the pair up in the cost table.
    """
    e1, e2 = make_edge(*e1), make_edge(*e2)
    vertex_id = instance.shared_vertex(e1, e2)
    if vertex_id is None:
        raise NotIncident(f"edges {e1} and {e2} do not share exactly one vertex")
    if instance.is_geometric:
        for edge in (e1, e2):
            if instance.coords[edge[0]] == instance.coords[edge[1]]:
                raise DegenerateEdge(f"edge {edge} has zero length")
    return instance.cost(e1, e2)


def check_metric(instance: Instance, tolerance: float = TOL) -> list[MetricViolation]:
    """
    Report every triple of edges at a common vertex that breaks the triangle
    inequality. An empty list means the costs are metric.
    """
    violations = []
    for vertex_id in instance.vertex_ids:
        edges = instance.incident[vertex_id]
        for e1, e3 in combinations(edges, 2):
            direct = instance.cost(e1, e3)
            for e2 in edges:
                if e2 == e1 or e2 == e3:
                    continue
                detour = instance.cost(e1, e2) + instance.cost(e2, e3)
                if direct > detour + tolerance:
                    violations.append(MetricViolation(vertex_id, e1, e2, e3, direct - detour))
    return violations


def is_complete(instance: Instance) -> bool:
    n = len(instance.vertices)
    return n >= 2 and len(instance.edges) == n * (n - 1) // 2


def is_star(instance: Instance) -> VertexId | None:
    """Center of the instance if its edges form a star (with at least one edge)."""
    if not instance.edges:
        return None
    candidates = set(instance.edges[0])
    for edge in instance.edges[1:]:
        candidates &= set(edge)
    if not candidates:
        return None
    return min(candidates)
