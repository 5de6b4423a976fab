import math

import pytest

from scancover.core_model import ABSTRACT, Instance, Vertex, pair_key


def make_instance(dimension, points, edges, costs=None):
    if dimension == ABSTRACT:
        vertices = tuple(Vertex(vertex_id) for vertex_id in points)
    else:
        vertices = tuple(Vertex(vertex_id, tuple(coords)) for vertex_id, coords in points.items())
    return Instance(dimension, vertices, tuple(edges), costs)


@pytest.fixture
def triangle():
    """Equilateral triangle; every transition costs 60."""
    points = {"a": (0.0, 0.0), "b": (1.0, 0.0), "c": (0.5, math.sqrt(3) / 2)}
    return make_instance(2, points, [("a", "b"), ("a", "c"), ("b", "c")])


@pytest.fixture
def line_path():
    return make_instance(1, {"u": (0.0,), "v": (1.0,), "w": (2.0,)}, [("u", "v"), ("v", "w")])


@pytest.fixture
def k4_line():
    points = {f"p{i}": (float(i),) for i in range(4)}
    ids = list(points)
    return make_instance(1, points, [(u, v) for i, u in enumerate(ids) for v in ids[i + 1:]])


@pytest.fixture
def plus_star():
    """Star in the plane with leaves east, north and west of the center."""
    points = {"O": (0.0, 0.0), "e": (1.0, 0.0), "n": (0.0, 1.0), "w": (-1.0, 0.0)}
    return make_instance(2, points, [("O", "e"), ("O", "n"), ("O", "w")])


@pytest.fixture
def square_k22():
    """K_{2,2} on the corners of a unit square, classes on opposite diagonals."""
    points = {"a0": (0.0, 0.0), "a1": (1.0, 1.0), "b0": (1.0, 0.0), "b1": (0.0, 1.0)}
    edges = [("a0", "b0"), ("a0", "b1"), ("a1", "b0"), ("a1", "b1")]
    return make_instance(2, points, edges), (["a0", "a1"], ["b0", "b1"])


@pytest.fixture
def abstract_path():
    """Abstract path x-y-z with a transition cost of 30 at y."""
    edges = [("x", "y"), ("y", "z")]
    return make_instance(ABSTRACT, ["x", "y", "z"], edges, {pair_key(("x", "y"), ("y", "z")): 30.0})


@pytest.fixture
def single_clause():
    return [["x1", "x2", "x3"]]


@pytest.fixture
def three_clauses():
    return [["x1", "x2", "!x3"], ["!x1", "!x2", "x3"], ["!x1", "!x2", "!x3"]]


@pytest.fixture
def repeated_clause():
    return [["x", "x", "x"]]
