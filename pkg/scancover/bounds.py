"""
Certified lower bounds on the makespan and the cut cover read off a trajectory.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping

import networkx as nx
import numpy as np
from networkx.algorithms import approximation
from scipy.spatial.transform import Rotation

from scancover.algos_2d import heading_of, lambda_cone
from scancover.config import Settings, load_settings
from scancover.core_model import TOL, Instance, VertexId, is_complete, is_star
from scancover.errors import InvalidTrajectory, NotAStar, WrongDimension
from scancover.oracle import exact_chromatic
from scancover.schedule_engine import ScanSchedule, Trajectory, validate_trajectory
from scancover.tree_abstract import vertex_path

logger = logging.getLogger(__name__)

INTERVAL = 90.0
ROTATION_RETRIES = 32


@dataclass(frozen=True)
class CutInterval:
    """One 90-degree interval of a schedule with the quadrant (orthant) class of every vertex at its midpoint."""

    start: float
    end: float
    classes: Mapping[VertexId, int]


@dataclass(frozen=True)
class BoundReport:
    lambda_bound: float
    chromatic_bound: float
    star_bound: float
    path_bound: float
    chi_lower: int
    chi_upper: int
    provenance: Mapping[str, str] = field(default_factory=dict)

    @property
    def best(self) -> float:
        return max(self.lambda_bound, self.chromatic_bound, self.star_bound, self.path_bound)

    def as_dict(self) -> dict:
        return {
            "lambda": self.lambda_bound,
            "chromatic_bound": self.chromatic_bound,
            "star_bound": self.star_bound,
            "path_bound": self.path_bound,
            "chi_lower": self.chi_lower,
            "chi_upper": self.chi_upper,
            "best": self.best,
            "provenance": dict(self.provenance),
        }


def chromatic_lower_bound(chi: int, d: int) -> float:
    """
    Every scan cover induces a cover of the edges by cuts: in 1D one directed cut
    per 180 degrees, in d >= 2 dimensions 2 cuts per 90-degree interval of d
    orthant classes. So T >= (ceil(log2 chi) - d) / d * 90, and in 1D
    T >= (ceil(log2 chi) - 1) * 180.
    """
    if d not in (1, 2, 3):
        raise WrongDimension(f"no chromatic bound for dimension {d!r}")
    if chi < 2:
        return 0.0
    cuts = math.ceil(math.log2(chi))
    if d == 1:
        return max(0.0, (cuts - 1) * 180.0)
    return max(0.0, (cuts - d) / d * 90.0)


def interval_count(makespan: float) -> int:
    return max(1, math.ceil(makespan / INTERVAL - TOL))


def _intervals(makespan: float) -> list[tuple[float, float]]:
    count = interval_count(makespan)
    return [(INTERVAL * k, INTERVAL * (k + 1)) for k in range(count)]


def _quadrant(heading) -> int:
    angle = heading_of(heading)
    return int(angle // INTERVAL) % 4


def _orthant(heading, basis: np.ndarray) -> int | None:
    coords = basis @ np.asarray(heading, dtype=float)
    if np.any(np.abs(coords) <= 1e-9):
        return None
    return int(sum(1 << axis for axis in range(3) if coords[axis] < 0))


def _orthant_classes(midpoints: list[dict[VertexId, tuple]]) -> list[dict[VertexId, int]]:
    """Orthant of every heading in a basis where no heading lies on a coordinate plane."""
    rng = np.random.default_rng(0)
    basis = np.eye(3)
    for attempt in range(ROTATION_RETRIES + 1):
        result = []
        for headings in midpoints:
            classes = {vertex_id: _orthant(heading, basis) for vertex_id, heading in headings.items()}
            if any(value is None for value in classes.values()):
                break
            result.append(classes)
        else:
            return result
        logger.debug("heading on a coordinate plane, retrying with a random basis (%d)", attempt + 1)
        basis = Rotation.random(random_state=rng).as_matrix()
    raise InvalidTrajectory("could not find a basis in general position for the headings")


def cut_cover_extract(instance: Instance, schedule: ScanSchedule, trajectory: Trajectory) -> list[CutInterval]:
    """
    Split [0, T] into 90-degree intervals and classify every vertex by the quadrant
    (orthant in 3D) of its heading at the interval midpoint. The endpoints of an
    edge scanned inside an interval face each other at the scan time and turn at
    most 45 degrees until the midpoint, so they land in different classes.
    """
    if instance.dimension not in (1, 2, 3):
        raise WrongDimension("cut covers are read off geometric trajectories")
    verdict = validate_trajectory(instance, schedule, trajectory)
    if not verdict.valid:
        raise InvalidTrajectory("; ".join(verdict.problems[:5]))

    active = [vertex_id for vertex_id in instance.vertex_ids if trajectory.waypoints.get(vertex_id)]
    spans = _intervals(schedule.makespan)
    midpoints = [
        {vertex_id: trajectory.heading_at(vertex_id, (start + end) / 2.0) for vertex_id in active}
        for start, end in spans
    ]
    if instance.dimension == 3:
        classes = _orthant_classes(midpoints)
    else:
        classes = [{vertex_id: _quadrant(heading) for vertex_id, heading in headings.items()} for headings in midpoints]
    return [CutInterval(start, end, cls) for (start, end), cls in zip(spans, classes)]


def interval_of(time: float, intervals: list[CutInterval]) -> int:
    """Index of the interval containing `time`; the last interval is closed."""
    index = int(time // INTERVAL) if time >= 0 else 0
    return min(index, len(intervals) - 1)


def cut_cover_violations(instance: Instance, schedule: ScanSchedule, intervals: list[CutInterval]) -> list:
    """Edges scanned inside an interval whose endpoints share a class there."""
    violations = []
    for edge in instance.edges:
        interval = intervals[interval_of(schedule.times[edge], intervals)]
        u, v = edge
        if interval.classes[u] == interval.classes[v]:
            violations.append((edge, interval.start))
    return violations


def cut_cover_coloring(intervals: list[CutInterval]) -> dict[VertexId, tuple[int, ...]]:
    """Proper coloring with at most (classes per interval)^intervals colors: the tuple of classes."""
    vertex_ids = set().union(*(interval.classes for interval in intervals)) if intervals else set()
    return {vertex_id: tuple(interval.classes[vertex_id] for interval in intervals) for vertex_id in sorted(vertex_ids)}


def star_sequential_bound(instance: Instance) -> float:
    """All edges of a star meet at the center: n edges need n - 1 gaps of at least the cheapest pair cost."""
    center = is_star(instance)
    if center is None:
        raise NotAStar("edges do not share a common vertex")
    n = len(instance.edges)
    if n < 2:
        return 0.0
    return (n - 1) * min(instance.pair_costs.values())


def vertex_path_bound(instance: Instance, exact_threshold: int | None = None) -> float:
    """Largest exact Path-TSP cost over the vertices of degree at most the threshold."""
    if exact_threshold is None:
        exact_threshold = load_settings().exact_threshold
    bound = 0.0
    for vertex_id, edges in instance.incident.items():
        if 2 <= len(edges) <= exact_threshold:
            bound = max(bound, vertex_path(instance, vertex_id, exact_threshold)[1])
    return bound


def greedy_coloring(instance: Instance) -> dict[VertexId, int]:
    """Smallest available color along a smallest-last (degeneracy) order."""
    return nx.coloring.greedy_color(instance.graph, strategy="smallest_last")


def clique_lower_bound(instance: Instance) -> int:
    graph = instance.graph
    if graph.number_of_nodes() == 0:
        return 0
    if graph.number_of_edges() == 0:
        return 1
    if is_complete(instance):
        return graph.number_of_nodes()
    return max(2, len(approximation.max_clique(graph)))


def chromatic_estimate(instance: Instance, settings: Settings | None = None) -> tuple[int, int, str]:
    """(lower, upper, source) for the chromatic number; exact when the graph is small enough."""
    settings = settings or load_settings()
    upper = len(set(greedy_coloring(instance).values()))
    if len(instance.vertices) <= settings.chromatic_limit:
        chi = exact_chromatic(instance, settings.chromatic_limit)
        return chi, chi, "exact"
    if is_complete(instance):
        return upper, upper, "complete"
    if instance.edges and nx.is_bipartite(instance.graph):
        return 2, 2, "bipartite"
    return clique_lower_bound(instance), upper, "clique"


def compute_bounds(instance: Instance, settings: Settings | None = None) -> BoundReport:
    settings = settings or load_settings()
    provenance = {}

    if instance.dimension in (1, 2):
        lambda_bound = lambda_cone(instance)
        provenance["lambda"] = "cone"
    else:
        lambda_bound = max(instance.pair_costs.values(), default=0.0)
        provenance["lambda"] = "max-pair"

    chi_lower, chi_upper, provenance["chi"] = chromatic_estimate(instance, settings)
    if instance.is_geometric:
        chromatic_bound = chromatic_lower_bound(chi_lower, instance.dimension)
        provenance["chromatic_bound"] = f"d={instance.dimension}"
    else:
        chromatic_bound = 0.0
        provenance["chromatic_bound"] = "not-geometric"

    star_bound = star_sequential_bound(instance) if is_star(instance) is not None else 0.0
    provenance["star_bound"] = "star" if is_star(instance) is not None else "not-a-star"
    path_bound = vertex_path_bound(instance, settings.exact_threshold)
    provenance["path_bound"] = f"degree<={settings.exact_threshold}"

    report = BoundReport(lambda_bound, chromatic_bound, star_bound, path_bound, chi_lower, chi_upper, provenance)
    logger.debug("bounds: %s", report)
    return report
