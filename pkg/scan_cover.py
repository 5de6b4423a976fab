import argparse
import asyncio
import json
import logging
import os
import sys
from dataclasses import dataclass

import networkx as nx

from scancover import algos_1d, algos_2d, bounds, generators, oracle, tree_abstract
from scancover.algos_1d import BitSchedule
from scancover.config import Settings, load_settings
from scancover.core_model import Instance, is_complete
from scancover.errors import NotBipartite, ParseError, ScanCoverError
from scancover.instance_io import (
    build_schedule_document,
    parse_instance,
    parse_schedule_document,
    serialize_instance,
)
from scancover.schedule_engine import (
    ScanSchedule,
    Trajectory,
    trajectory_from_schedule,
    validate_schedule,
    validate_trajectory,
)
from scancover.svg_export import render_svg
from utilities.files import load_schedule_template, read_json, write_json, write_text
from utilities.text_similarity import suggest

logger = logging.getLogger("scan_cover")

ALGORITHMS = (
    "auto", "bip-rotation", "sector", "kcolor", "complete-split", "bits-1d",
    "tree", "arboricity", "oracle", "oracle-discrete",
)
GENERATORS = (
    "nae-gadget", "turan-1d", "geodesic-star", "orthant-star", "random", "line-chord", "polygon",
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INPUT = 3


class ArgumentParser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which here means "inapplicable algorithm"
    def error(self, message):
        raise ParseError(message)


@dataclass
class Solution:
    schedule: ScanSchedule
    trajectory: Trajectory | None = None
    bits: BitSchedule | None = None


def bipartition(instance: Instance) -> tuple[list[str], list[str]]:
    graph = instance.graph
    if not nx.is_bipartite(graph):
        raise NotBipartite("underlying graph is not bipartite")
    coloring = nx.bipartite.color(graph)
    first = [v for v in instance.vertex_ids if coloring[v] == 0]
    second = [v for v in instance.vertex_ids if coloring[v] == 1]
    return first, second


def auto_algorithm(instance: Instance) -> str:
    """Decision table for --algo auto; depends only on the instance structure."""
    if not instance.edges:
        return "empty"
    graph = instance.graph
    if instance.dimension == 1:
        return "bits-1d"
    if instance.dimension == 2:
        if nx.is_bipartite(graph):
            return "sector"
        if is_complete(instance):
            return "complete-split"
        return "kcolor"
    if nx.is_forest(graph.edge_subgraph(instance.edges)) and nx.is_connected(graph.edge_subgraph(instance.edges)):
        return "tree"
    return "arboricity"


def _solve_1d(instance: Instance) -> BitSchedule:
    if nx.is_bipartite(instance.graph):
        return algos_1d.solve_bipartite_1d(instance)
    if is_complete(instance):
        return algos_1d.solve_complete_1d(instance)
    return algos_1d.solve_coloring_1d(instance)


def solve(instance: Instance, algo: str, settings: Settings, step: float | None = None, max_steps: int = 8) -> Solution:
    if algo == "auto":
        algo = auto_algorithm(instance)
        logger.info("auto selected %s", algo)

    if algo == "empty":
        return Solution(ScanSchedule({}, "empty"))
    if algo == "bits-1d":
        bits = _solve_1d(instance)
        return Solution(algos_1d.bitschedule_to_schedule(bits, instance), bits=bits)
    if algo == "bip-rotation":
        result = algos_2d.bipartite_rotation(instance, bipartition(instance))
        return Solution(result.schedule, result.trajectory)
    if algo == "sector":
        result = algos_2d.sector_approx(instance, bipartition(instance))
        return Solution(result.schedule, result.trajectory)
    if algo == "kcolor":
        return Solution(algos_2d.kcolor_decompose(instance, bounds.greedy_coloring(instance)))
    if algo == "complete-split":
        result = algos_2d.complete_recursive_split(instance)
        return Solution(result.schedule, result.trajectory)
    if algo == "tree":
        return Solution(tree_abstract.tree_approx(instance, exact_threshold=settings.exact_threshold))
    if algo == "arboricity":
        return Solution(tree_abstract.arboricity_approx(instance, settings.exact_threshold))
    if algo == "oracle":
        return Solution(oracle.exact_order_search(instance, settings.edge_limit))
    if algo == "oracle-discrete":
        if step is None:
            step = min((c for c in instance.pair_costs.values() if c > 0), default=1.0)
        cover = oracle.discrete_step_oracle(instance, step, max_steps)
        return Solution(cover.to_schedule())
    raise ParseError(f"unknown algorithm {algo!r}")


def _unknown_name(kind: str, name: str, choices) -> dict:
    hint = suggest(name, list(choices))
    message = f"unknown {kind} {name!r}" + (f"; did you mean {hint!r}?" if hint else "")
    return {"exit_code": EXIT_INPUT, "body": {"error": "ParseError", "message": message}}


async def load_instance(path: str) -> Instance:
    try:
        document = await read_json(path)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e}")
    return parse_instance(document)


async def cmd_solve(args, settings: Settings) -> dict:
    if args.algo not in ALGORITHMS:
        return _unknown_name("algorithm", args.algo, ALGORITHMS)
    instance = await load_instance(args.instance)
    solution = solve(instance, args.algo, settings, args.step, args.max_steps)

    trajectory = solution.trajectory
    if trajectory is None and instance.is_geometric:
        trajectory = trajectory_from_schedule(instance, solution.schedule)

    template = await load_schedule_template()
    document = build_schedule_document(template, instance, solution.schedule, solution.bits, trajectory)
    out = args.out or os.path.splitext(args.instance)[0] + ".schedule.json"
    await write_json(out, document)

    report = bounds.compute_bounds(instance, settings)
    body = {
        "algorithm": solution.schedule.algorithm_tag,
        "makespan": solution.schedule.makespan,
        "schedule": out,
    }
    body.update({f"bound.{key}": value for key, value in report.as_dict().items() if key != "provenance"})
    if report.best > 0:
        body["ratio"] = solution.schedule.makespan / report.best
    return {"exit_code": EXIT_OK, "body": body}


async def cmd_validate(args, settings: Settings) -> dict:
    instance_document, schedule_document = await asyncio.gather(read_json(args.instance), read_json(args.schedule))
    instance = parse_instance(instance_document)
    schedule, trajectory, bits = parse_schedule_document(schedule_document, instance)

    verdict = validate_schedule(instance, schedule)
    problems = [
        f"{v.vertex}: {list(v.e1)} and {list(v.e2)} are {v.gap:.6f} apart, need {v.required:.6f}"
        for v in verdict.violations
    ]
    problems += [f"{list(edge)}: no scan time" for edge in verdict.missing]
    if trajectory is not None:
        problems += list(validate_trajectory(instance, schedule, trajectory).problems)
    if bits is not None and instance.dimension == 1:
        if set(instance.vertex_ids) - set(bits.vectors):
            problems.append("bit vectors missing for some vertices")
        elif not algos_1d.has_cover_property(instance, bits):
            problems.append("bit vectors do not cover every edge")

    body = {"valid": not problems, "makespan": verdict.makespan, "problems": problems}
    return {"exit_code": EXIT_OK if not problems else EXIT_INVALID, "body": body}


async def cmd_bound(args, settings: Settings) -> dict:
    instance = await load_instance(args.instance)
    report = bounds.compute_bounds(instance, settings)
    return {"exit_code": EXIT_OK, "body": report.as_dict()}


def generate(args, settings: Settings) -> Instance:
    kind = args.kind
    if kind == "nae-gadget":
        return generators.gen_nae_gadget(generators.parse_formula(args.formula or ""), args.phi)
    if kind == "turan-1d":
        return generators.gen_turan_1d(args.ell, settings.turan_cap)
    if kind == "geodesic-star":
        return generators.gen_geodesic_star(args.sub)
    if kind == "orthant-star":
        return generators.gen_orthant_star(args.n, args.d)
    if kind == "random":
        instance, _ = generators.gen_random(args.random_kind, args.n, args.seed)
        return instance
    if kind == "line-chord":
        return generators.gen_line_chord()
    if kind == "polygon":
        return generators.gen_regular_polygon(args.k, args.center)
    raise ParseError(f"unknown generator {kind!r}")


async def cmd_generate(args, settings: Settings) -> dict:
    if args.kind not in GENERATORS:
        return _unknown_name("generator", args.kind, GENERATORS)
    instance = generate(args, settings)
    await write_json(args.out, serialize_instance(instance))
    body = {"kind": args.kind, "vertices": len(instance.vertices), "edges": len(instance.edges), "out": args.out}
    return {"exit_code": EXIT_OK, "body": body}


async def cmd_export_svg(args, settings: Settings) -> dict:
    instance_document, schedule_document = await asyncio.gather(read_json(args.instance), read_json(args.schedule))
    instance = parse_instance(instance_document)
    schedule, trajectory, _ = parse_schedule_document(schedule_document, instance)
    await write_text(args.out, render_svg(instance, schedule, trajectory))
    return {"exit_code": EXIT_OK, "body": {"out": args.out, "edges": len(schedule.times)}}


HANDLERS = {
    "solve": cmd_solve,
    "validate": cmd_validate,
    "bound": cmd_bound,
    "generate": cmd_generate,
    "export-svg": cmd_export_svg,
}


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON document instead of key: value lines")
    parser = ArgumentParser(prog="scan_cover", description="Minimum scan cover solver")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    solve_parser = commands.add_parser("solve", parents=[common])
    solve_parser.add_argument("instance")
    solve_parser.add_argument("--algo", default="auto")
    solve_parser.add_argument("--out", "-o")
    solve_parser.add_argument("--step", type=float)
    solve_parser.add_argument("--max-steps", type=int, default=8)

    validate_parser = commands.add_parser("validate", parents=[common])
    validate_parser.add_argument("instance")
    validate_parser.add_argument("schedule")

    bound_parser = commands.add_parser("bound", parents=[common])
    bound_parser.add_argument("instance")

    generate_parser = commands.add_parser("generate", parents=[common])
    generate_parser.add_argument("kind")
    generate_parser.add_argument("--out", "-o", required=True)
    generate_parser.add_argument("--formula")
    generate_parser.add_argument("--phi", type=float, default=90.0)
    generate_parser.add_argument("--ell", type=int, default=1)
    generate_parser.add_argument("--sub", type=int, default=0)
    generate_parser.add_argument("--n", type=int, default=4)
    generate_parser.add_argument("--d", type=int, default=3)
    generate_parser.add_argument("--k", type=int, default=6)
    generate_parser.add_argument("--center", action="store_true")
    generate_parser.add_argument("--random-kind", default="bipartite2d", choices=generators.RANDOM_KINDS)
    generate_parser.add_argument("--seed", type=int, default=0)

    export_parser = commands.add_parser("export-svg", parents=[common])
    export_parser.add_argument("instance")
    export_parser.add_argument("schedule")
    export_parser.add_argument("--out", "-o", required=True)
    return parser


def _flatten(body: dict, prefix: str = "") -> list[str]:
    lines = []
    for key, value in body.items():
        if isinstance(value, dict):
            lines.extend(_flatten(value, f"{prefix}{key}."))
        elif isinstance(value, list):
            lines.append(f"{prefix}{key}: {len(value)}")
            lines.extend(f"  {item}" for item in value)
        else:
            lines.append(f"{prefix}{key}: {value}")
    return lines


def render(body: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(body, sort_keys=True)
    return "\n".join(_flatten(body))


async def main(argv: list[str] | None = None) -> int:
    as_json = "--json" in (argv if argv is not None else sys.argv[1:])
    try:
        settings = load_settings()
        logging.basicConfig(level=getattr(logging, settings.log_level, logging.WARNING))
        args = build_parser().parse_args(argv)
        result = await HANDLERS[args.command](args, settings)
    except ScanCoverError as e:
        result = {"exit_code": e.exit_code, "body": {"error": type(e).__name__, "message": str(e)}}
    except (OSError, json.JSONDecodeError) as e:
        result = {"exit_code": EXIT_INPUT, "body": {"error": type(e).__name__, "message": str(e)}}

    print(render(result["body"], as_json))
    return result["exit_code"]


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
