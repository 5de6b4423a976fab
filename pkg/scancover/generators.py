"""
Instance generators: hardness gadgets, lower-bound families and seeded
random instances.
"""

import logging
import math
import re
from itertools import combinations

import networkx as nx
import numpy as np
from scipy.spatial import ConvexHull

from scancover.config import load_settings
from scancover.core_model import ABSTRACT, Instance, Vertex, make_edge, pair_key
from scancover.errors import DimensionMismatch, InfeasibleSchedule, InvalidInstance, MalformedFormula, TooLarge
from scancover.schedule_engine import ScanSchedule

logger = logging.getLogger(__name__)

Clause = tuple[str, str, str]
Formula = tuple[Clause, ...]

LITERAL = re.compile(r"^!?[A-Za-z_][A-Za-z0-9_]*$")
CLAUSE = re.compile(r"\(([^()]*)\)")

RANDOM_KINDS = ("bipartite2d", "complete2d", "sparse2d", "tree3d", "bipartite1d", "complete1d", "sparse1d")


def variable_of(literal: str) -> str:
    return literal.lstrip("!")


def is_negated(literal: str) -> bool:
    return literal.startswith("!")


def validate_formula(clauses) -> Formula:
    """Normalize a list of 3-literal clauses of signed variable names ("x1", "!x3")."""
    if isinstance(clauses, str) or not clauses:
        raise MalformedFormula("a formula is a non-empty list of clauses")
    formula = []
    for index, clause in enumerate(clauses):
        if isinstance(clause, str) or len(clause) != 3:
            raise MalformedFormula(f"clause {index + 1} must have exactly three literals")
        literals = tuple(str(literal).strip() for literal in clause)
        for literal in literals:
            if not LITERAL.match(literal):
                raise MalformedFormula(f"bad literal {literal!r} in clause {index + 1}")
        formula.append(literals)
    return tuple(formula)


def parse_formula(text: str) -> Formula:
    """Parse "(x1,x2,!x3)(x1,!x2,x3)" into clauses."""
    stripped = text.strip()
    clauses = CLAUSE.findall(stripped)
    if not clauses or CLAUSE.sub("", stripped).strip(" ,;"):
        raise MalformedFormula(f"cannot parse formula {text!r}")
    return validate_formula([[part.strip() for part in clause.split(",")] for clause in clauses])


def formula_variables(formula: Formula) -> list[str]:
    """Variables in order of first appearance."""
    seen = {}
    for clause in formula:
        for literal in clause:
            seen.setdefault(variable_of(literal), None)
    return list(seen)


def literal_vertex(literal: str) -> str:
    return f"L:!{variable_of(literal)}" if is_negated(literal) else f"L:{literal}"


def _gadget_edges(formula: Formula):
    clause_edges, variable_edges, incidence_edges = [], [], []
    for i, clause in enumerate(formula, start=1):
        for k, literal in enumerate(clause, start=1):
            entry = f"C{i}.{k}"
            clause_edges.append(make_edge(f"C{i}", entry))
            incidence_edges.append(make_edge(entry, literal_vertex(literal)))
    for variable in formula_variables(formula):
        variable_edges.append(make_edge(f"V:{variable}", f"L:{variable}"))
        variable_edges.append(make_edge(f"V:{variable}", f"L:!{variable}"))
    return clause_edges, variable_edges, incidence_edges


def gen_nae_gadget(formula, phi: float = 90.0) -> Instance:
    """
    Abstract instance that has a scan cover with three steps of length phi iff the
    formula is NAE-satisfiable. Each clause gets a clause vertex and one entry vertex
    per literal; each variable gets a variable vertex and two literal vertices; every
    literal occurrence links its entry vertex to its literal vertex.

    Costs: phi for pairs with a clause edge, 2 phi for pairs with a variable edge, 0 otherwise.
    """
    formula = validate_formula(formula)
    if phi <= 0:
        raise InvalidInstance("phi must be positive")

    clause_edges, variable_edges, incidence_edges = _gadget_edges(formula)
    vertex_ids = []
    for i, clause in enumerate(formula, start=1):
        vertex_ids.append(f"C{i}")
        vertex_ids.extend(f"C{i}.{k}" for k in range(1, len(clause) + 1))
    for variable in formula_variables(formula):
        vertex_ids.extend([f"V:{variable}", f"L:{variable}", f"L:!{variable}"])

    edges = clause_edges + variable_edges + incidence_edges
    clause_set, variable_set = set(clause_edges), set(variable_edges)
    incident = {vertex_id: [] for vertex_id in vertex_ids}
    for edge in edges:
        incident[edge[0]].append(edge)
        incident[edge[1]].append(edge)

    costs = {}
    for vertex_edges in incident.values():
        for e1, e2 in combinations(vertex_edges, 2):
            if e1 in variable_set or e2 in variable_set:
                costs[pair_key(e1, e2)] = 2 * phi
            elif e1 in clause_set or e2 in clause_set:
                costs[pair_key(e1, e2)] = phi
            else:
                costs[pair_key(e1, e2)] = 0.0
    return Instance(ABSTRACT, tuple(Vertex(vertex_id) for vertex_id in vertex_ids), tuple(edges), costs)


def nae_witness_schedule(formula, assignment: dict[str, bool], phi: float = 90.0) -> ScanSchedule:
    """
    Three-step scan cover of the gadget from a NAE-satisfying assignment. True
    literals are reached by their variable edge in the first step and scan their
    occurrences in the third; false literals the other way round. In every clause
    one true literal is responsible for the first step, one false literal for the
    third, and the remaining clause edge goes in the middle.
    """
    formula = validate_formula(formula)
    values = {variable: bool(assignment[variable]) for variable in formula_variables(formula)}

    def value(literal: str) -> bool:
        return values[variable_of(literal)] != is_negated(literal)

    times = {}
    for variable, truth in values.items():
        times[make_edge(f"V:{variable}", f"L:{variable}")] = 0.0 if truth else 2 * phi
        times[make_edge(f"V:{variable}", f"L:!{variable}")] = 2 * phi if truth else 0.0

    for i, clause in enumerate(formula, start=1):
        truths = [value(literal) for literal in clause]
        if all(truths) or not any(truths):
            raise InfeasibleSchedule(f"assignment does not NAE-satisfy clause {i}")
        positive, negative = truths.index(True), truths.index(False)
        for k, literal in enumerate(clause):
            entry = f"C{i}.{k + 1}"
            times[make_edge(entry, literal_vertex(literal))] = 2 * phi if truths[k] else 0.0
            if k == positive:
                times[make_edge(f"C{i}", entry)] = 0.0
            elif k == negative:
                times[make_edge(f"C{i}", entry)] = 2 * phi
            else:
                times[make_edge(f"C{i}", entry)] = phi
    return ScanSchedule(times, "nae-witness")


def gen_turan_1d(ell: int, cap: int | None = None) -> Instance:
    """
    Complete 2^n-partite graph on n * 2^n points of a line, n = 2^ell: n disjoint
    intervals each holding one vertex of every color class, colors in order.
    """
    if ell < 1:
        raise InvalidInstance("ell must be at least 1")
    if cap is None:
        cap = load_settings().turan_cap
    n = 2 ** ell
    if n > 64 or n * 2 ** n > cap:
        raise TooLarge(f"Turan instance for ell={ell} exceeds {cap} vertices")

    classes = 2 ** n
    width = len(str(classes - 1))
    vertices = []
    color_of = {}
    for interval in range(n):
        for color in range(classes):
            vertex_id = f"T{interval}.{color:0{width}d}"
            vertices.append(Vertex(vertex_id, (float(interval * classes + color),)))
            color_of[vertex_id] = color
    ids = [vertex.id for vertex in vertices]
    edges = [(u, v) for u, v in combinations(ids, 2) if color_of[u] != color_of[v]]
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug("turan ell=%d: %d vertices, %d edges", ell, len(vertices), len(edges))
    return Instance(1, tuple(vertices), tuple(edges))


def _icosahedron() -> np.ndarray:
    golden = (1 + math.sqrt(5)) / 2
    points = []
    for a in (-1.0, 1.0):
        for b in (-golden, golden):
            points.extend([(0.0, a, b), (a, b, 0.0), (b, 0.0, a)])
    points = np.array(points)
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def geodesic_points(subdivisions: int) -> np.ndarray:
    """Vertices of an icosahedron with every face split into four `subdivisions` times, on the unit sphere."""
    if subdivisions < 0:
        raise InvalidInstance("subdivisions must be non-negative")
    points = [tuple(p) for p in _icosahedron()]
    faces = [tuple(simplex) for simplex in ConvexHull(np.array(points)).simplices]

    for _ in range(subdivisions):
        index = {}

        def midpoint(i: int, j: int) -> int:
            key = (min(i, j), max(i, j))
            if key not in index:
                m = np.add(points[i], points[j])
                m /= np.linalg.norm(m)
                points.append(tuple(m))
                index[key] = len(points) - 1
            return index[key]

        refined = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            refined.extend([(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)])
        faces = refined
    return np.array(points)


def gen_geodesic_star(subdivisions: int) -> Instance:
    """Star centered at the origin whose leaves are the vertices of a geodesic sphere."""
    points = sorted(tuple(round(float(c), 12) for c in p) for p in geodesic_points(subdivisions))
    width = len(str(len(points) - 1))
    vertices = [Vertex("O", (0.0, 0.0, 0.0))]
    vertices.extend(Vertex(f"L{k:0{width}d}", point) for k, point in enumerate(points))
    edges = tuple(("O", vertex.id) for vertex in vertices[1:])
    return Instance(3, tuple(vertices), edges)


def gen_orthant_star(n: int, d: int) -> Instance:
    """Star with n leaves on distinct coordinate axes; d > 3 gives the abstract version (all costs 90)."""
    if n < 1 or d < 1 or n > d:
        raise DimensionMismatch(f"cannot place {n} leaves on distinct axes in dimension {d}")
    leaves = [f"X{k}" for k in range(n)]
    edges = tuple(("O", leaf) for leaf in leaves)
    if d > 3:
        vertices = (Vertex("O"),) + tuple(Vertex(leaf) for leaf in leaves)
        costs = {pair_key(make_edge(*a), make_edge(*b)): 90.0 for a, b in combinations(edges, 2)}
        return Instance(ABSTRACT, vertices, edges, costs)
    vertices = [Vertex("O", (0.0,) * d)]
    for k, leaf in enumerate(leaves):
        coords = [0.0] * d
        coords[k] = 1.0
        vertices.append(Vertex(leaf, tuple(coords)))
    return Instance(d, tuple(vertices), edges)


def gen_line_chord() -> Instance:
    """
    Monotone path a-b-c-d-e on a line plus the chord b-d. Two steps would force
    the path edges into alternating steps, leaving b and d facing the same way in
    both, so the chord needs a third step.
    """
    ids = "abcde"
    vertices = tuple(Vertex(vertex_id, (float(k),)) for k, vertex_id in enumerate(ids))
    edges = (("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("b", "d"))
    return Instance(1, vertices, edges)


def gen_regular_polygon(k: int, center: bool = False) -> Instance:
    """Complete graph on the corners of a regular k-gon on the unit circle, optionally with its center."""
    if k < 3:
        raise InvalidInstance("a polygon needs at least three corners")
    vertices = [
        Vertex(f"P{i}", (round(math.cos(2 * math.pi * i / k), 12), round(math.sin(2 * math.pi * i / k), 12)))
        for i in range(k)
    ]
    if center:
        vertices.append(Vertex("O", (0.0, 0.0)))
    ids = [vertex.id for vertex in vertices]
    return Instance(2, tuple(vertices), tuple(combinations(ids, 2)))


def _point_ids(prefix: str, count: int, offset: int = 0) -> list[str]:
    width = max(len(str(offset + count - 1)), 1)
    return [f"{prefix}{offset + i:0{width}d}" for i in range(count)]


def _points(rng: np.random.Generator, count: int, dimension: int) -> list[tuple[float, ...]]:
    return [tuple(float(c) for c in row) for row in rng.random((count, dimension))]


def gen_random(kind: str, n: int, seed: int = 0) -> tuple[Instance, tuple[list[str], list[str]] | None]:
    """
    Seeded random instance with coordinates uniform in the unit box. Bipartite
    kinds also return the partition.
    """
    if kind not in RANDOM_KINDS:
        raise InvalidInstance(f"unknown random kind {kind!r}")
    if n < 1:
        raise InvalidInstance("n must be at least 1")
    rng = np.random.default_rng(seed)
    dimension = 1 if kind.endswith("1d") else 3 if kind.endswith("3d") else 2
    points = _points(rng, n, dimension)

    if kind.startswith("bipartite"):
        half = (n + 1) // 2
        first, second = _point_ids("a", half), _point_ids("b", n - half)
        ids = first + second
        edges = [(u, v) for u in first for v in second if rng.random() < 0.5]
        if not edges and first and second:
            edges = [(first[0], second[0])]
        vertices = tuple(Vertex(vertex_id, point) for vertex_id, point in zip(ids, points))
        return Instance(dimension, vertices, tuple(edges)), (first, second)

    ids = _point_ids("v", n)
    if kind.startswith("complete"):
        edges = list(combinations(ids, 2))
    elif kind.startswith("sparse"):
        graph = nx.gnp_random_graph(n, min(1.0, 3.0 / n), seed=int(rng.integers(2**31)))
        edges = [(ids[u], ids[v]) for u, v in sorted(graph.edges)]
    else:
        if n == 1:
            edges = []
        elif n == 2:
            edges = [(ids[0], ids[1])]
        else:
            sequence = [int(x) for x in rng.integers(0, n, size=n - 2)]
            tree = nx.from_prufer_sequence(sequence)
            edges = [(ids[u], ids[v]) for u, v in sorted(tree.edges)]
    vertices = tuple(Vertex(vertex_id, point) for vertex_id, point in zip(ids, points))
    return Instance(dimension, vertices, tuple(edges)), None
