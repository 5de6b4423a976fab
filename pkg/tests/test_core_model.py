import pytest

from conftest import make_instance
from scancover.core_model import ABSTRACT, angular_cost, check_metric, is_complete, is_star, pair_key
from scancover.errors import DegenerateEdge, InvalidInstance, NotIncident


def test_angle_at_triangle_corner(triangle):
    assert angular_cost(triangle, ("a", "b"), ("a", "c")) == pytest.approx(60.0)


def test_edge_order_does_not_matter(triangle):
    assert angular_cost(triangle, ("b", "a"), ("c", "a")) == pytest.approx(60.0)


def test_line_costs_are_zero_or_half_turn():
    instance = make_instance(1, {"a": (0.0,), "b": (1.0,), "c": (2.0,)}, [("a", "b"), ("b", "c"), ("a", "c")])
    assert angular_cost(instance, ("a", "b"), ("b", "c")) == pytest.approx(180.0)
    assert angular_cost(instance, ("a", "b"), ("a", "c")) == pytest.approx(0.0)


def test_orthogonal_edges_in_space():
    points = {"O": (0.0, 0.0, 0.0), "x": (1.0, 0.0, 0.0), "z": (0.0, 0.0, 2.0)}
    instance = make_instance(3, points, [("O", "x"), ("O", "z")])
    assert angular_cost(instance, ("O", "x"), ("O", "z")) == pytest.approx(90.0)


def test_disjoint_edges_are_not_incident(square_k22):
    instance, _ = square_k22
    with pytest.raises(NotIncident):
        angular_cost(instance, ("a0", "b0"), ("a1", "b1"))


def test_coincident_points_are_rejected():
    with pytest.raises(DegenerateEdge):
        make_instance(2, {"a": (0.0, 0.0), "b": (0.0, 0.0)}, [("a", "b")])


@pytest.mark.parametrize(
    "edges",
    [
        [("a", "a")],
        [("a", "zz")],
        [("a", "b"), ("b", "a")],
    ],
)
def test_malformed_edges_are_rejected(edges):
    with pytest.raises(InvalidInstance):
        make_instance(2, {"a": (0.0, 0.0), "b": (1.0, 0.0)}, edges)


def test_wrong_coordinate_count_is_rejected():
    with pytest.raises(InvalidInstance):
        make_instance(2, {"a": (0.0,), "b": (1.0, 0.0)}, [("a", "b")])


def test_abstract_instance_needs_every_pair_cost():
    with pytest.raises(InvalidInstance):
        make_instance(ABSTRACT, ["x", "y", "z"], [("x", "y"), ("y", "z")], {})


def test_abstract_cost_lookup(abstract_path):
    assert angular_cost(abstract_path, ("x", "y"), ("y", "z")) == 30.0


def test_geometric_costs_are_metric(triangle, plus_star):
    assert check_metric(triangle) == []
    assert check_metric(plus_star) == []


def test_metric_violation_is_reported_once():
    edges = [("c", "p"), ("c", "q"), ("c", "r")]
    e1, e2, e3 = edges
    costs = {pair_key(e1, e2): 10.0, pair_key(e2, e3): 10.0, pair_key(e1, e3): 50.0}
    instance = make_instance(ABSTRACT, ["c", "p", "q", "r"], edges, costs)
    violations = check_metric(instance)
    assert len(violations) == 1
    assert violations[0].vertex == "c"
    assert violations[0].excess == pytest.approx(30.0)


def test_structure_helpers(triangle, plus_star, square_k22):
    assert is_complete(triangle)
    assert not is_complete(square_k22[0])
    assert is_star(plus_star) == "O"
    assert is_star(triangle) is None
    assert is_star(triangle.restrict([("b", "c")])) == "b"
    assert is_star(triangle.restrict([("c", "a"), ("c", "b")])) == "c"


def test_restrict_keeps_vertices(triangle):
    sub = triangle.restrict([("b", "a")])
    assert sub.edges == (("a", "b"),)
    assert sub.vertex_ids == triangle.vertex_ids
    with pytest.raises(InvalidInstance):
        sub.restrict([("a", "c")])


def test_to_abstract_copies_costs(triangle):
    abstract = triangle.to_abstract()
    assert not abstract.is_geometric
    assert abstract.cost(("a", "b"), ("b", "c")) == pytest.approx(60.0)
