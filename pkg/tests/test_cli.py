import asyncio
import json

import pytest

from scan_cover import auto_algorithm, main
from scancover.generators import gen_line_chord, gen_random, gen_regular_polygon
from scancover.instance_io import serialize_instance


def run(*argv):
    return asyncio.run(main(list(argv)))


def write(path, document):
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)


@pytest.fixture
def triangle_file(tmp_path, triangle):
    return write(tmp_path / "triangle.json", serialize_instance(triangle))


def output(capsys):
    return json.loads(capsys.readouterr().out)


def test_solve_validate_and_bound(tmp_path, triangle_file, capsys):
    schedule_path = str(tmp_path / "out.json")
    assert run("solve", triangle_file, "--algo", "oracle", "--out", schedule_path, "--json") == 0
    body = output(capsys)
    assert body["algorithm"] == "oracle"
    assert body["makespan"] == pytest.approx(120.0)
    assert body["bound.best"] == pytest.approx(60.0)
    assert body["ratio"] == pytest.approx(2.0)

    assert run("validate", triangle_file, schedule_path, "--json") == 0
    assert output(capsys) == {"valid": True, "makespan": pytest.approx(120.0), "problems": []}

    assert run("bound", triangle_file, "--json") == 0
    report = output(capsys)
    assert report["chi_lower"] == report["chi_upper"] == 3
    assert report["provenance"]["chi"] == "exact"


def test_solve_default_output_path(tmp_path, triangle_file, capsys):
    assert run("solve", triangle_file) == 0
    assert (tmp_path / "triangle.schedule.json").exists()
    assert "makespan: " in capsys.readouterr().out


def test_collision_is_invalid(tmp_path, triangle_file, capsys):
    schedule_path = str(tmp_path / "out.json")
    run("solve", triangle_file, "--algo", "oracle", "--out", schedule_path)
    capsys.readouterr()
    document = json.loads(open(schedule_path, encoding="utf-8").read())
    for entry in document["times"]:
        entry["t"] = 0.0
    del document["trajectory"]
    write(tmp_path / "bad.json", document)

    assert run("validate", triangle_file, str(tmp_path / "bad.json"), "--json") == 1
    body = output(capsys)
    assert body["valid"] is False
    assert body["problems"]


def test_hash_mismatch_is_an_input_error(tmp_path, triangle_file, line_path, capsys):
    schedule_path = str(tmp_path / "out.json")
    run("solve", triangle_file, "--out", schedule_path)
    other = write(tmp_path / "line.json", serialize_instance(line_path))
    capsys.readouterr()
    assert run("validate", other, schedule_path, "--json") == 3
    assert output(capsys)["error"] == "ParseError"


def test_unknown_algorithm_suggests(triangle_file, capsys):
    assert run("solve", triangle_file, "--algo", "sectr", "--json") == 3
    assert "did you mean 'sector'" in output(capsys)["message"]


def test_inapplicable_algorithms(triangle_file, tmp_path, capsys):
    assert run("solve", triangle_file, "--algo", "bits-1d", "--json") == 2
    assert output(capsys)["error"] == "WrongDimension"
    assert run("solve", triangle_file, "--algo", "sector", "--json") == 2
    assert output(capsys)["error"] == "NotBipartite"
    pentagon = write(tmp_path / "pentagon.json", serialize_instance(gen_regular_polygon(5)))
    assert run("solve", pentagon, "--algo", "oracle", "--json") == 2
    assert output(capsys)["error"] == "TooLarge"


def test_input_errors(tmp_path, capsys):
    assert run("bound", str(tmp_path / "missing.json"), "--json") == 3
    assert output(capsys)["error"] == "FileNotFoundError"
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    assert run("bound", str(broken)) == 3
    capsys.readouterr()
    assert run("frobnicate") == 3


def test_generate_nae_gadget(tmp_path, capsys):
    out = str(tmp_path / "gadget.json")
    formula = "(x1,x2,!x3)(!x1,!x2,x3)(!x1,!x2,!x3)"
    assert run("generate", "nae-gadget", "--formula", formula, "--out", out, "--json") == 0
    body = output(capsys)
    assert body["vertices"] == 21
    assert body["edges"] == 24
    assert run("bound", out, "--json") == 0
    assert output(capsys)["chromatic_bound"] == 0.0


def test_generate_errors(tmp_path, capsys):
    out = str(tmp_path / "x.json")
    assert run("generate", "nae-gadget", "--formula", "(x1,x2)", "--out", out, "--json") == 3
    assert output(capsys)["error"] == "MalformedFormula"
    assert run("generate", "polgon", "--out", out, "--json") == 3
    assert "did you mean 'polygon'" in output(capsys)["message"]


def test_generate_geodesic_star_and_solve(tmp_path, capsys):
    out = str(tmp_path / "star.json")
    assert run("generate", "geodesic-star", "--sub", "1", "--out", out, "--json") == 0
    assert output(capsys)["vertices"] == 43
    schedule_path = str(tmp_path / "star.schedule.json")
    assert run("solve", out, "--json") == 0
    assert output(capsys)["algorithm"] == "tree"
    assert run("validate", out, schedule_path) == 0


def test_export_svg(tmp_path, capsys):
    instance_path = str(tmp_path / "poly.json")
    run("generate", "polygon", "--k", "6", "--out", instance_path)
    run("solve", instance_path)
    svg_path = tmp_path / "poly.svg"
    assert run("export-svg", instance_path, str(tmp_path / "poly.schedule.json"), "--out", str(svg_path)) == 0
    assert "<svg" in svg_path.read_text(encoding="utf-8")
    capsys.readouterr()


def test_repeated_runs_are_byte_identical(tmp_path, capsys):
    instance_path = str(tmp_path / "random.json")
    run("generate", "random", "--random-kind", "sparse2d", "--n", "12", "--seed", "4", "--out", instance_path)
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    run("solve", instance_path, "--out", str(first))
    run("solve", instance_path, "--out", str(second))
    assert first.read_bytes() == second.read_bytes()
    capsys.readouterr()


@pytest.mark.parametrize(
    "instance, expected",
    [
        (gen_random("bipartite1d", 6, 0)[0], "bits-1d"),
        (gen_line_chord(), "bits-1d"),
        (gen_random("bipartite2d", 6, 0)[0], "sector"),
        (gen_regular_polygon(5), "complete-split"),
        (gen_regular_polygon(4, center=True), "complete-split"),
        (gen_random("tree3d", 6, 0)[0], "tree"),
    ],
)
def test_auto_algorithm(instance, expected):
    assert auto_algorithm(instance) == expected


def test_auto_algorithm_for_sparse_and_empty(triangle, plus_star):
    assert auto_algorithm(triangle.restrict([])) == "empty"
    assert auto_algorithm(triangle.to_abstract()) == "arboricity"
    assert auto_algorithm(plus_star.to_abstract()) == "tree"
