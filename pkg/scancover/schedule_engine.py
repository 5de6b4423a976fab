"""
Schedules, trajectories and their validation.

A scan cover is determined by an edge order: scanning the edges in that order
as early as the transition costs allow gives the pointwise-minimal schedule.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from scancover.core_model import TOL, Edge, Instance, VertexId, angle_between, make_edge
from scancover.errors import IncompleteOrder, InfeasibleSchedule, InvalidInstance

logger = logging.getLogger(__name__)

TRAJECTORY_TOL = 1e-6

Heading = tuple[float, ...]
Waypoint = tuple[float, Heading]


@dataclass(frozen=True)
class ScanSchedule:
    times: Mapping[Edge, float]
    algorithm_tag: str = ""

    @property
    def makespan(self) -> float:
        return max(self.times.values(), default=0.0)

    def retagged(self, algorithm_tag: str) -> "ScanSchedule":
        return ScanSchedule(dict(self.times), algorithm_tag)

    def shifted(self, delta: float) -> "ScanSchedule":
        return ScanSchedule({edge: t + delta for edge, t in self.times.items()}, self.algorithm_tag)


@dataclass(frozen=True)
class Trajectory:
    """Per-vertex waypoints (time, unit heading); headings are tuples in R^2 or R^3."""

    waypoints: Mapping[VertexId, tuple[Waypoint, ...]]

    def heading_at(self, vertex_id: VertexId, time: float) -> Heading:
        """
        Heading of a vertex at `time`. Between waypoints the vertex turns along the
        shortest rotation at unit speed and then waits; outside them it holds still.
        """
        points = self.waypoints[vertex_id]
        if time <= points[0][0]:
            return points[0][1]
        for (t0, h0), (t1, h1) in zip(points, points[1:]):
            if time < t1:
                return rotate_towards(h0, h1, time - t0)
        return points[-1][1]


@dataclass(frozen=True)
class PairViolation:
    vertex: VertexId
    e1: Edge
    e2: Edge
    gap: float
    required: float


@dataclass(frozen=True)
class ScheduleVerdict:
    valid: bool
    makespan: float
    violations: tuple[PairViolation, ...] = ()
    missing: tuple[Edge, ...] = ()


@dataclass(frozen=True)
class TrajectoryVerdict:
    valid: bool
    problems: tuple[str, ...] = field(default_factory=tuple)


def rotate_towards(start: Heading, end: Heading, budget: float) -> Heading:
    """Rotate `start` towards `end` by at most `budget` degrees along a shortest rotation."""
    a = np.asarray(start, dtype=float)
    b = np.asarray(end, dtype=float)
    angle = angle_between(start, end)
    if budget >= angle:
        return tuple(end)
    if budget <= 0.0 or angle <= TOL:
        return tuple(start)

    if angle >= 180.0 - TOL:
        # antipodal: any rotation plane works, pick one deterministically
        if a.size == 2:
            perpendicular = np.array([-a[1], a[0]])
        else:
            axis = np.zeros(3)
            axis[int(np.argmin(np.abs(a)))] = 1.0
            perpendicular = np.cross(a, axis)
            perpendicular /= np.linalg.norm(perpendicular)
    else:
        perpendicular = b - np.dot(a, b) * a
        perpendicular /= np.linalg.norm(perpendicular)

    beta = math.radians(budget)
    heading = math.cos(beta) * a + math.sin(beta) * perpendicular
    heading /= np.linalg.norm(heading)
    return tuple(float(x) for x in heading)


def schedule_from_order(instance: Instance, order: Sequence[Edge], algorithm_tag: str = "order") -> ScanSchedule:
    """
    Pointwise-minimal schedule that scans the edges in the given order:
    S(e_1) = 0 and S(e_i) = max{S(e_j) + cost(e_i, e_j) : j < i, e_j incident to e_i}.
    """
    order = [make_edge(*edge) for edge in order]
    if len(order) != len(instance.edges) or set(order) != set(instance.edges):
        raise IncompleteOrder("order must be a permutation of the instance edges")

    scanned: dict[VertexId, list[Edge]] = {vertex_id: [] for vertex_id in instance.vertex_ids}
    times: dict[Edge, float] = {}
    for edge in order:
        t = 0.0
        for vertex_id in edge:
            for previous in scanned[vertex_id]:
                t = max(t, times[previous] + instance.cost(edge, previous))
        times[edge] = t
        scanned[edge[0]].append(edge)
        scanned[edge[1]].append(edge)
    return ScanSchedule(times, algorithm_tag)


def schedule_to_order(schedule: ScanSchedule) -> list[Edge]:
    """Edges sorted by scan time; ties broken by edge id."""
    return sorted(schedule.times, key=lambda edge: (schedule.times[edge], edge))


def tighten(instance: Instance, schedule: ScanSchedule) -> ScanSchedule:
    """Re-run the order recurrence on the schedule's own order; never increases any time."""
    return schedule_from_order(instance, schedule_to_order(schedule), schedule.algorithm_tag)


def validate_schedule(instance: Instance, schedule: ScanSchedule, tolerance: float = TOL) -> ScheduleVerdict:
    missing = tuple(edge for edge in instance.edges if edge not in schedule.times)
    violations = []
    for vertex_id, e1, e2 in instance.incident_pairs():
        if e1 not in schedule.times or e2 not in schedule.times:
            continue
        gap = abs(schedule.times[e1] - schedule.times[e2])
        required = instance.cost(e1, e2)
        if gap < required - tolerance:
            violations.append(PairViolation(vertex_id, e1, e2, gap, required))
    makespan = max((schedule.times[edge] for edge in instance.edges if edge in schedule.times), default=0.0)
    return ScheduleVerdict(not violations and not missing, makespan, tuple(violations), missing)


def _scan_events(instance: Instance, schedule: ScanSchedule, vertex_id: VertexId) -> list[Waypoint]:
    events = [
        (schedule.times[edge], instance.direction(vertex_id, instance.other(edge, vertex_id)))
        for edge in instance.incident[vertex_id]
    ]
    events.sort(key=lambda event: event[0])
    return events


def trajectory_from_schedule(
    instance: Instance,
    schedule: ScanSchedule,
    start_headings: Mapping[VertexId, Heading] | None = None,
) -> Trajectory:
    """
    Waypoints at every scan time of a vertex, heading towards the scanned partner.
    Optional start headings add a waypoint at time 0 for strategies that prescribe them.
    """
    if not instance.is_geometric:
        raise InvalidInstance("trajectories need a geometric instance")

    waypoints = {}
    for vertex_id in instance.vertex_ids:
        events = _scan_events(instance, schedule, vertex_id)
        if not events:
            continue
        points: list[Waypoint] = []
        if start_headings and vertex_id in start_headings and events[0][0] > TOL:
            points.append((0.0, tuple(start_headings[vertex_id])))
        for t, heading in events:
            if points and t - points[-1][0] <= TOL:
                if angle_between(points[-1][1], heading) > TRAJECTORY_TOL:
                    raise InfeasibleSchedule(f"vertex {vertex_id} must face two directions at time {t}")
                continue
            if points and angle_between(points[-1][1], heading) > t - points[-1][0] + TRAJECTORY_TOL:
                raise InfeasibleSchedule(f"vertex {vertex_id} cannot turn in time before {t}")
            points.append((t, heading))
        waypoints[vertex_id] = tuple(points)
    return Trajectory(waypoints)


def validate_trajectory(
    instance: Instance,
    schedule: ScanSchedule,
    trajectory: Trajectory,
    tolerance: float = TRAJECTORY_TOL,
) -> TrajectoryVerdict:
    problems = []
    for vertex_id, points in trajectory.waypoints.items():
        for (t0, h0), (t1, h1) in zip(points, points[1:]):
            if t1 <= t0:
                problems.append(f"{vertex_id}: waypoint times not increasing at {t1}")
            elif angle_between(h0, h1) > t1 - t0 + tolerance:
                problems.append(f"{vertex_id}: turn between {t0} and {t1} exceeds unit angular speed")

    for edge in instance.edges:
        if edge not in schedule.times:
            problems.append(f"{edge}: no scan time")
            continue
        t = schedule.times[edge]
        for vertex_id in edge:
            if not trajectory.waypoints.get(vertex_id):
                problems.append(f"{vertex_id}: no waypoints")
                continue
            heading = trajectory.heading_at(vertex_id, t)
            target = instance.direction(vertex_id, instance.other(edge, vertex_id))
            if angle_between(heading, target) > tolerance:
                problems.append(f"{edge}: {vertex_id} does not face its partner at {t}")
    return TrajectoryVerdict(not problems, tuple(problems))


def concatenate_phases(instance: Instance, phases: Iterable[ScanSchedule]) -> tuple[dict[Edge, float], list[float]]:
    """
    Run edge-disjoint partial schedules one after another. Each phase is shifted by
    the smallest offset that puts all of its edges after every incident edge of the
    earlier phases with the required transition cost in between.
    """
    placed: dict[VertexId, list[Edge]] = {vertex_id: [] for vertex_id in instance.vertex_ids}
    times: dict[Edge, float] = {}
    offsets = []
    for phase in phases:
        offset = 0.0
        for edge, t in phase.times.items():
            for vertex_id in edge:
                for earlier in placed[vertex_id]:
                    offset = max(offset, times[earlier] + instance.cost(edge, earlier) - t)
        for edge, t in phase.times.items():
            times[edge] = t + offset
            placed[edge[0]].append(edge)
            placed[edge[1]].append(edge)
        offsets.append(offset)
        logger.debug("phase with %d edges placed at offset %.6f", len(phase.times), offset)
    return times, offsets
