"""
Scan strategies for points in the plane.

Headings are angles in degrees, counterclockwise from the positive x-axis;
"clockwise" means decreasing heading. When all vertices of one class rotate
clockwise from a start heading and the other class rotates in lockstep from
the opposite heading, the two endpoints of every edge face each other at the
same moment (alternate angles along the edge).
"""

import logging
import math
from dataclasses import dataclass
from typing import Collection, Mapping

import numpy as np
from shapely.geometry import MultiPoint
from shapely.ops import nearest_points

from scancover.core_model import TOL, Edge, Instance, VertexId, is_complete
from scancover.errors import ImproperColoring, NotBipartitePartition, NotComplete, WrongDimension
from scancover.schedule_engine import ScanSchedule, Trajectory, concatenate_phases, trajectory_from_schedule

logger = logging.getLogger(__name__)

Partition = tuple[Collection[VertexId], Collection[VertexId]]


@dataclass(frozen=True)
class SeparatingLine:
    """Line through `point` with unit `normal` pointing from the first set to the second."""

    point: tuple[float, float]
    normal: tuple[float, float]

    @property
    def normal_heading(self) -> float:
        return heading_of(self.normal)


@dataclass(frozen=True)
class TrajectorySchedule:
    schedule: ScanSchedule
    trajectory: Trajectory
    separating_line: SeparatingLine | None = None


def heading_of(vector) -> float:
    """Heading angle of a 2D vector in [0, 360)."""
    angle = math.degrees(math.atan2(vector[1], vector[0])) % 360.0
    return 0.0 if angle >= 360.0 - TOL else angle


def unit(heading: float) -> tuple[float, float]:
    radians = math.radians(heading)
    return (math.cos(radians), math.sin(radians))


def clockwise_turn(start: float, target: float) -> float:
    """Clockwise angle from heading `start` to heading `target`, in [0, 360)."""
    turn = (start - target) % 360.0
    return 0.0 if turn >= 360.0 - TOL else turn


def _require_2d(instance: Instance) -> None:
    if instance.dimension != 2:
        raise WrongDimension("2D strategies need a 2D instance")


def _orient(instance: Instance, partition: Partition) -> dict[Edge, tuple[VertexId, VertexId]]:
    """Every edge as (endpoint in P1, endpoint in P2)."""
    first, second = set(partition[0]), set(partition[1])
    if first & second:
        raise NotBipartitePartition("partition classes overlap")
    oriented = {}
    for u, v in instance.edges:
        if u in first and v in second:
            oriented[(u, v)] = (u, v)
        elif v in first and u in second:
            oriented[(u, v)] = (v, u)
        else:
            raise NotBipartitePartition(f"edge ({u}, {v}) does not cross the partition")
    return oriented


def detect_separating_line(first, second) -> SeparatingLine | None:
    """
    A line strictly separating two planar point sets, or None. Sets whose convex
    hulls touch count as not separated.
    """
    first_hull = MultiPoint([tuple(p) for p in first]).convex_hull
    second_hull = MultiPoint([tuple(p) for p in second]).convex_hull
    if first_hull.intersects(second_hull):
        return None
    a, b = nearest_points(first_hull, second_hull)
    normal = np.array([b.x - a.x, b.y - a.y])
    normal /= np.linalg.norm(normal)
    midpoint = ((a.x + b.x) / 2.0, (a.y + b.y) / 2.0)
    return SeparatingLine(midpoint, (float(normal[0]), float(normal[1])))


def _rotation_times(instance: Instance, oriented, normal_heading: float) -> dict[Edge, float]:
    start = normal_heading + 90.0
    return {
        edge: clockwise_turn(start, heading_of(instance.direction(p1, p2)))
        for edge, (p1, p2) in oriented.items()
    }


def bipartite_rotation(instance: Instance, partition: Partition) -> TrajectorySchedule:
    """
    P1 starts heading north and P2 south, all rotate clockwise; every edge is scanned
    within 360 degrees. If a line separates P1 from P2, both classes start parallel to
    that line instead and half a turn suffices.
    """
    _require_2d(instance)
    oriented = _orient(instance, partition)
    first = {p1 for p1, _ in oriented.values()}
    second = {p2 for _, p2 in oriented.values()}

    line = None
    if oriented:
        line = detect_separating_line(
            [instance.coords[v] for v in sorted(first)], [instance.coords[v] for v in sorted(second)]
        )
    normal_heading = line.normal_heading if line else 0.0
    times = _rotation_times(instance, oriented, normal_heading)
    schedule = ScanSchedule(times, "bip-rotation")

    limit = 180.0 if line else 360.0
    assert schedule.makespan <= limit + 1e-6, f"rotation exceeded {limit} degrees"

    start_headings = {v: unit(normal_heading + 90.0) for v in first}
    start_headings.update({v: unit(normal_heading - 90.0) for v in second})
    trajectory = trajectory_from_schedule(instance, schedule, start_headings)
    return TrajectorySchedule(schedule, trajectory, line)


def cone_width(headings: list[float]) -> float:
    """Width of the smallest cone containing all headings: 360 minus the largest circular gap."""
    if len(headings) <= 1:
        return 0.0
    ordered = sorted(headings)
    gaps = [b - a for a, b in zip(ordered, ordered[1:])]
    gaps.append(ordered[0] + 360.0 - ordered[-1])
    return max(0.0, 360.0 - max(gaps))


def lambda_cone(instance: Instance) -> float:
    """
    Smallest angle such that every vertex has a cone of that angle containing all
    its edges; a lower bound on the makespan of every scan cover.
    """
    if instance.dimension not in (1, 2):
        raise WrongDimension("the cone bound is defined for planar instances")
    widest = 0.0
    for vertex_id in instance.vertex_ids:
        headings = [
            heading_of(instance.direction(vertex_id, instance.other(edge, vertex_id)))
            for edge in instance.incident[vertex_id]
        ]
        widest = max(widest, cone_width(headings))
    return widest


def sector_count(cone: float) -> int:
    """Largest s with 360 / (2s) >= cone (cone < 90 gives s >= 2)."""
    if cone <= TOL:
        raise ValueError(f"no sector split for a cone of {cone}")
    s = math.floor(180.0 / cone + 1e-9)
    while s > 2 and 180.0 / s < cone - TOL:
        s -= 1
    return s


def sector_approx(instance: Instance, partition: Partition) -> TrajectorySchedule:
    """
    Adaptive sector strategy for bipartite planar instances, within 4.5 times optimal.

    With cone bound L >= 90 this is the plain rotation (at most 360 = 4L). Otherwise the
    headings are cut into 2s sectors of width L' = 180/s >= L, so every vertex has
    edges in at most two adjacent sectors. Phase one scans the even sectors clockwise
    (P2 the opposite sectors), then every vertex turns by at most L', and phase two
    scans the odd sectors counterclockwise. Total at most 3L' < 4.5L.
    """
    _require_2d(instance)
    oriented = _orient(instance, partition)
    cone = lambda_cone(instance)

    if cone >= 90.0:
        logger.debug("cone %.6f >= 90, falling back to the full rotation", cone)
        result = bipartite_rotation(instance, partition)
        return TrajectorySchedule(result.schedule.retagged("sector"), result.trajectory, result.separating_line)

    if cone <= TOL:
        schedule = ScanSchedule({edge: 0.0 for edge in instance.edges}, "sector")
        return TrajectorySchedule(schedule, trajectory_from_schedule(instance, schedule))

    s = sector_count(cone)
    width = 180.0 / s
    logger.debug("cone %.6f: %d sector pairs of width %.6f", cone, s, width)

    sectors: dict[VertexId, set[int]] = {}
    times = {}
    for edge, (p1, p2) in oriented.items():
        theta = heading_of(instance.direction(p1, p2))
        nearest = round(theta / width)
        if abs(theta - nearest * width) <= TOL:
            theta = (nearest * width) % 360.0
        index = int(math.floor(theta / width)) % (2 * s)
        sectors.setdefault(p1, set()).add(index)
        sectors.setdefault(p2, set()).add((index + s) % (2 * s))
        if index % 2 == 0:
            times[edge] = (index + 1) * width - theta
        else:
            times[edge] = 2 * width + theta - index * width

    for vertex_id, used in sectors.items():
        assert len(used) <= 2, f"{vertex_id} has edges in {len(used)} sectors"
        if len(used) == 2:
            a, b = sorted(used)
            assert b - a == 1 or (a == 0 and b == 2 * s - 1), f"{vertex_id} uses non-adjacent sectors"

    schedule = ScanSchedule(times, "sector")
    assert schedule.makespan <= 3 * width + 1e-9, "sector strategy exceeded three sector widths"
    return TrajectorySchedule(schedule, trajectory_from_schedule(instance, schedule))


def _color_indices(instance: Instance, coloring: Mapping[VertexId, int]) -> dict[VertexId, int]:
    for u, v in instance.edges:
        if u not in coloring or v not in coloring:
            raise ImproperColoring(f"edge ({u}, {v}) has an uncolored endpoint")
        if coloring[u] == coloring[v]:
            raise ImproperColoring(f"adjacent vertices {u} and {v} share color {coloring[u]}")
    index_of = {color: index for index, color in enumerate(sorted(set(coloring.values())))}
    return {vertex_id: index_of[color] for vertex_id, color in coloring.items()}


def bit_phases(instance: Instance, coloring: Mapping[VertexId, int]) -> list[list[Edge]]:
    """
    Split the edges into ceil(log2 k) bipartite graphs: an edge belongs to the phase
    of the lowest bit in which its endpoints' color indices differ.
    """
    indices = _color_indices(instance, coloring)
    k = len(set(indices.values()))
    phases: list[list[Edge]] = [[] for _ in range(math.ceil(math.log2(k)) if k > 1 else 0)]
    for u, v in instance.edges:
        differing = indices[u] ^ indices[v]
        phases[(differing & -differing).bit_length() - 1].append((u, v))
    return phases


def kcolor_decompose(instance: Instance, coloring: Mapping[VertexId, int]) -> ScanSchedule:
    """Scan the bit phases of a k-coloring one after another with the sector strategy."""
    _require_2d(instance)
    indices = _color_indices(instance, coloring)
    partial = []
    for bit, edges in enumerate(bit_phases(instance, coloring)):
        if not edges:
            continue
        first = [v for v in instance.vertex_ids if v in indices and not indices[v] >> bit & 1]
        second = [v for v in instance.vertex_ids if v in indices and indices[v] >> bit & 1]
        partial.append(sector_approx(instance.restrict(edges), (first, second)).schedule)
    times, offsets = concatenate_phases(instance, partial)
    logger.debug("kcolor phase offsets: %s", offsets)
    return ScanSchedule(times, "kcolor")


def complete_split_bound(n: int) -> float:
    levels = math.ceil(math.log2(n))
    return levels * 180.0 + max(levels - 1, 0) * 90.0


def complete_recursive_split(instance: Instance) -> TrajectorySchedule:
    """
    Complete graphs: split every block at its median, alternating vertical and
    horizontal lines by level, and scan each level's cross edges with the separated
    half-turn rotation in all blocks at once. Levels run back to back.
    """
    _require_2d(instance)
    if not is_complete(instance):
        raise NotComplete("underlying graph is not complete")

    n = len(instance.vertices)
    levels = math.ceil(math.log2(n))
    blocks = [list(instance.vertex_ids)]
    partial = []
    for level in range(levels):
        axis = level % 2
        # the split line is vertical for axis 0 (normal east) and horizontal for axis 1 (normal north)
        normal_heading = 0.0 if axis == 0 else 90.0
        start = normal_heading + 90.0
        times = {}
        next_blocks = []
        for block in blocks:
            if len(block) < 2:
                continue
            ordered = sorted(block, key=lambda v: (instance.coords[v][axis], instance.coords[v][1 - axis], v))
            half = (len(ordered) + 1) // 2
            first, second = ordered[:half], ordered[half:]
            for p1 in first:
                for p2 in second:
                    turn = clockwise_turn(start, heading_of(instance.direction(p1, p2)))
                    if turn > 180.0 + TOL:
                        turn = 180.0 if turn < 360.0 - 1e-6 else 0.0
                    times[(p1, p2) if p1 <= p2 else (p2, p1)] = min(turn, 180.0)
            next_blocks.extend([first, second])
        partial.append(ScanSchedule(times, f"split-level-{level}"))
        blocks = next_blocks

    times, offsets = concatenate_phases(instance, partial)
    logger.debug("complete split offsets: %s", offsets)
    schedule = ScanSchedule(times, "complete-split")
    assert schedule.makespan <= complete_split_bound(n) + 1e-6, "recursive split exceeded its bound"
    return TrajectorySchedule(schedule, trajectory_from_schedule(instance, schedule))
