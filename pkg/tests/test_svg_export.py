from scancover.algos_2d import bipartite_rotation
from scancover.generators import gen_nae_gadget, nae_witness_schedule
from scancover.schedule_engine import schedule_from_order
from scancover.svg_export import layout, render_svg


def test_render_svg(triangle):
    schedule = schedule_from_order(triangle, sorted(triangle.edges), "order")
    svg = render_svg(triangle, schedule)
    assert "<svg" in svg
    assert "makespan 120.0" in svg


def test_render_is_repeatable(square_k22):
    instance, partition = square_k22
    result = bipartite_rotation(instance, partition)
    first = render_svg(instance, result.schedule, result.trajectory)
    second = render_svg(instance, result.schedule, result.trajectory)
    assert first == second


def test_render_abstract_instance(single_clause):
    gadget = gen_nae_gadget(single_clause)
    schedule = nae_witness_schedule(single_clause, {"x1": True, "x2": False, "x3": False})
    svg = render_svg(gadget, schedule)
    assert "C1.2" in svg


def test_layout_of_a_line(line_path):
    positions = layout(line_path)
    assert positions["w"] == (2.0, 0.0)
