"""Static SVG figure of a schedule: the drawing colored by scan time and a per-vertex timeline."""

import io

import matplotlib

matplotlib.use("Agg")

import matplotlib as mpl
import networkx as nx
from matplotlib.figure import Figure

from scancover.core_model import Instance
from scancover.schedule_engine import ScanSchedule, Trajectory

SVG_SETTINGS = {"svg.hashsalt": "scancover", "svg.fonttype": "none"}


def layout(instance: Instance) -> dict[str, tuple[float, float]]:
    """Plane positions: 1D on the x-axis, 3D projected to xy, abstract on a circle."""
    if not instance.is_geometric:
        positions = nx.circular_layout(nx.Graph(instance.graph.subgraph(sorted(instance.vertex_ids))))
        return {vertex_id: (float(p[0]), float(p[1])) for vertex_id, p in positions.items()}
    return {vertex_id: tuple(instance.position(vertex_id)[:2]) for vertex_id in instance.vertex_ids}


def render_svg(instance: Instance, schedule: ScanSchedule, trajectory: Trajectory | None = None) -> str:
    positions = layout(instance)
    makespan = schedule.makespan
    cmap = mpl.colormaps["viridis"]
    norm = mpl.colors.Normalize(vmin=0.0, vmax=makespan if makespan > 0 else 1.0)
    bar_style = {"alpha": 1.0, "lw": 6, "solid_capstyle": "butt"}
    rows = list(instance.vertex_ids)

    with mpl.rc_context(SVG_SETTINGS):
        fig = Figure(figsize=(8, 5 + len(rows) / 4))
        drawing, timeline = fig.subplots(2, 1, gridspec_kw={"height_ratios": [3, max(1, len(rows) / 4)]})

        for edge in sorted(instance.edges):
            (x0, y0), (x1, y1) = positions[edge[0]], positions[edge[1]]
            color = cmap(norm(schedule.times.get(edge, 0.0)))
            drawing.plot([x0, x1], [y0, y1], color=color, lw=2)
        xs = [positions[v][0] for v in rows]
        ys = [positions[v][1] for v in rows]
        drawing.scatter(xs, ys, color="black", zorder=3, s=12)
        for vertex_id in rows:
            drawing.annotate(vertex_id, positions[vertex_id], textcoords="offset points", xytext=(3, 3), fontsize=7)
        drawing.set_aspect("equal", adjustable="datalim")
        drawing.set_title(f"{schedule.algorithm_tag or 'schedule'}: makespan {makespan:.1f}")
        fig.colorbar(mpl.cm.ScalarMappable(norm=norm, cmap=cmap), ax=drawing, label="scan time")

        for row, vertex_id in enumerate(rows, 1):
            times = sorted(schedule.times[edge] for edge in instance.incident[vertex_id] if edge in schedule.times)
            if trajectory is not None and trajectory.waypoints.get(vertex_id):
                points = trajectory.waypoints[vertex_id]
                timeline.plot([points[0][0], points[-1][0]], [row] * 2, color="lightgray", **bar_style)
            elif times:
                timeline.plot([times[0], times[-1]], [row] * 2, color="lightgray", **bar_style)
            for t in times:
                timeline.plot([t], [row], marker="|", markersize=12, color=cmap(norm(t)))

        timeline.set_ylim(0.5, len(rows) + 0.5)
        timeline.set_yticks(range(1, len(rows) + 1))
        timeline.set_yticklabels(rows)
        timeline.plot([makespan] * 2, timeline.get_ylim(), "r--")
        timeline.set_xlabel("time (degrees)")
        timeline.grid(True)
        fig.tight_layout()

        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()
