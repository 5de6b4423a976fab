"""
Instance and schedule documents.

Instance: {version: 1, dimension, vertices: [{id, coords}], edges: [[u, v]],
costs: [{e1, e2, cost}] (abstract only)}. Schedule: the template in
utilities/schedule_template.json filled with the instance hash, the algorithm
tag and [{edge, t}], plus optional `bits` and `trajectory` sections.
"""

import copy
import hashlib
import json
from typing import Any, Mapping

from scancover.algos_1d import BitSchedule
from scancover.core_model import ABSTRACT, Instance, Vertex, check_metric, make_edge, pair_key
from scancover.errors import InvalidInstance, ParseError, ScanCoverError
from scancover.schedule_engine import ScanSchedule, Trajectory

VERSION = 1
INSTANCE_FIELDS = {"version", "dimension", "vertices", "edges", "costs"}
SCHEDULE_FIELDS = {"version", "instance_hash", "algorithm_tag", "makespan", "times", "bits", "trajectory"}


def _edge(raw, where: str) -> tuple[str, str]:
    if not isinstance(raw, list) or len(raw) != 2 or not all(isinstance(x, str) for x in raw):
        raise ParseError(f"{where}: an edge is a pair of vertex ids")
    return make_edge(raw[0], raw[1])


def _number(raw, where: str) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ParseError(f"{where}: expected a number, got {raw!r}")
    return float(raw)


def _unknown(document: Mapping, allowed: set, where: str) -> None:
    extra = set(document) - allowed
    if extra:
        raise ParseError(f"{where}: unknown fields {sorted(extra)}")


def parse_instance(document: Any) -> Instance:
    if not isinstance(document, dict):
        raise ParseError("instance document must be an object")
    _unknown(document, INSTANCE_FIELDS, "instance")
    if document.get("version") != VERSION:
        raise ParseError(f"unsupported instance version {document.get('version')!r}")

    dimension = document.get("dimension")
    if dimension not in (1, 2, 3, ABSTRACT) or isinstance(dimension, bool):
        raise ParseError(f"dimension must be 1, 2, 3 or {ABSTRACT!r}")

    vertices = []
    for index, raw in enumerate(document.get("vertices") or []):
        where = f"vertices[{index}]"
        if not isinstance(raw, dict) or not isinstance(raw.get("id"), str):
            raise ParseError(f"{where}: a vertex is an object with a string id")
        _unknown(raw, {"id", "coords"}, where)
        coords = tuple(_number(c, where) for c in raw.get("coords") or [])
        vertices.append(Vertex(raw["id"], coords))

    edges = [_edge(raw, f"edges[{index}]") for index, raw in enumerate(document.get("edges") or [])]

    costs = None
    if dimension == ABSTRACT:
        costs = {}
        for index, raw in enumerate(document.get("costs") or []):
            where = f"costs[{index}]"
            if not isinstance(raw, dict):
                raise ParseError(f"{where}: a cost entry is an object")
            _unknown(raw, {"e1", "e2", "cost"}, where)
            costs[pair_key(_edge(raw.get("e1"), where), _edge(raw.get("e2"), where))] = _number(raw.get("cost"), where)
    elif document.get("costs"):
        raise ParseError("only abstract instances carry costs")

    try:
        instance = Instance(dimension, tuple(vertices), tuple(edges), costs)
    except ScanCoverError:
        raise
    except (TypeError, ValueError) as e:
        raise ParseError(str(e))

    if not instance.is_geometric:
        violations = check_metric(instance)
        if violations:
            first = violations[0]
            raise InvalidInstance(
                f"costs are not metric at {first.vertex}: {first.e1}, {first.e2}, {first.e3} exceed by {first.excess:.6g}"
            )
    return instance


def serialize_instance(instance: Instance) -> dict:
    document = {
        "version": VERSION,
        "dimension": instance.dimension,
        "vertices": [{"id": vertex.id, "coords": list(instance.coords[vertex.id])} for vertex in instance.vertices],
        "edges": [list(edge) for edge in sorted(instance.edges)],
    }
    if not instance.is_geometric:
        document["vertices"] = [{"id": vertex.id} for vertex in instance.vertices]
        entries = []
        for key, cost in instance.costs.items():
            e1, e2 = sorted(key)
            entries.append({"e1": list(e1), "e2": list(e2), "cost": cost})
        document["costs"] = sorted(entries, key=lambda entry: (entry["e1"], entry["e2"]))
    return document


def instance_hash(instance: Instance) -> str:
    canonical = json.dumps(serialize_instance(instance), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def build_schedule_document(
    template: Mapping,
    instance: Instance,
    schedule: ScanSchedule,
    bits: BitSchedule | None = None,
    trajectory: Trajectory | None = None,
) -> dict:
    document = copy.deepcopy(dict(template))
    document["version"] = VERSION
    document["instance_hash"] = instance_hash(instance)
    document["algorithm_tag"] = schedule.algorithm_tag
    document["makespan"] = schedule.makespan
    document["times"] = [{"edge": list(edge), "t": schedule.times[edge]} for edge in sorted(schedule.times)]
    if bits is not None:
        document["bits"] = {"steps": bits.steps, "vectors": dict(sorted(bits.vectors.items()))}
    if trajectory is not None:
        document["trajectory"] = {
            vertex_id: [[t, list(heading)] for t, heading in points]
            for vertex_id, points in sorted(trajectory.waypoints.items())
        }
    return document


def parse_schedule_document(
    document: Any, instance: Instance
) -> tuple[ScanSchedule, Trajectory | None, BitSchedule | None]:
    """Read a schedule document written for `instance`; a different instance hash is an input error."""
    if not isinstance(document, dict):
        raise ParseError("schedule document must be an object")
    _unknown(document, SCHEDULE_FIELDS, "schedule")
    if document.get("instance_hash") != instance_hash(instance):
        raise ParseError("schedule was written for a different instance (hash mismatch)")

    times = {}
    for index, raw in enumerate(document.get("times") or []):
        where = f"times[{index}]"
        if not isinstance(raw, dict):
            raise ParseError(f"{where}: a time entry is an object")
        times[_edge(raw.get("edge"), where)] = _number(raw.get("t"), where)
    schedule = ScanSchedule(times, str(document.get("algorithm_tag", "")))

    trajectory = None
    if document.get("trajectory") is not None:
        waypoints = {}
        for vertex_id, points in document["trajectory"].items():
            try:
                waypoints[vertex_id] = tuple(
                    (_number(t, vertex_id), tuple(_number(h, vertex_id) for h in heading)) for t, heading in points
                )
            except (TypeError, ValueError):
                raise ParseError(f"trajectory of {vertex_id}: waypoints are [t, [heading]] pairs")
        trajectory = Trajectory(waypoints)

    bits = None
    if document.get("bits") is not None:
        raw = document["bits"]
        if not isinstance(raw, dict) or not isinstance(raw.get("steps"), int):
            raise ParseError("bits: expected {steps, vectors}")
        bits = BitSchedule(raw["steps"], dict(raw.get("vectors") or {}))
    return schedule, trajectory, bits
