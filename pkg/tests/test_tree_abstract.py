import networkx as nx
import pytest

from conftest import make_instance
from scancover.core_model import ABSTRACT, pair_key
from scancover.errors import NotAStar, NotATree
from scancover.generators import gen_orthant_star, gen_random
from scancover.schedule_engine import schedule_from_order, validate_schedule
from scancover.tree_abstract import (
    arboricity_approx,
    cyclic_order,
    degeneracy_order,
    forest_decompose,
    greedy_path,
    held_karp_path,
    path_cost,
    star_order,
    tree_approx,
)


def test_star_order_visits_the_middle_leaf_second(plus_star):
    order = star_order(plus_star, "O")
    assert order[1] == ("O", "n")
    assert schedule_from_order(plus_star, order).makespan == pytest.approx(180.0)


def test_two_leaf_star(triangle):
    star = triangle.restrict([("a", "b"), ("a", "c")])
    order = star_order(star, "a")
    assert path_cost(star, order) == pytest.approx(60.0)


def test_orthant_star_order_costs():
    star = gen_orthant_star(4, 4)
    assert path_cost(star, star_order(star, "O")) == pytest.approx(270.0)


def test_star_order_needs_a_star(triangle):
    with pytest.raises(NotAStar):
        star_order(triangle, "a")


def test_greedy_path_matches_exact_on_small_stars(plus_star):
    exact_order, exact_cost = held_karp_path(plus_star, plus_star.incident["O"])
    greedy_order, greedy_cost = greedy_path(plus_star, plus_star.incident["O"])
    assert greedy_cost >= exact_cost - 1e-9
    assert len(greedy_order) == len(exact_order) == 3


def test_threshold_switches_to_greedy(plus_star):
    order = star_order(plus_star, "O", exact_threshold=1)
    assert sorted(order) == sorted(plus_star.edges)


def test_cyclic_order_closes_the_path(plus_star):
    cycle = cyclic_order(plus_star, "O")
    assert cycle.offsets[0] == 0.0
    assert list(cycle.offsets) == sorted(cycle.offsets)
    assert cycle.length == pytest.approx(360.0)


def test_single_edge_tree():
    instance = make_instance(2, {"a": (0.0, 0.0), "b": (1.0, 0.0)}, [("a", "b")])
    assert tree_approx(instance).makespan == 0.0


def test_collinear_path_tree(line_path):
    schedule = tree_approx(line_path)
    assert schedule.makespan == pytest.approx(180.0)
    assert validate_schedule(line_path, schedule).valid


def test_star_tree_within_twice_the_path(plus_star):
    schedule = tree_approx(plus_star, root="O")
    assert validate_schedule(plus_star, schedule).valid
    assert schedule.makespan <= 2 * 180.0 + 1e-9


def test_abstract_path_tree(abstract_path):
    schedule = tree_approx(abstract_path)
    assert validate_schedule(abstract_path, schedule).valid
    assert schedule.makespan == pytest.approx(30.0)


@pytest.mark.parametrize("seed", range(15))
def test_random_trees_are_synchronized(seed):
    instance, _ = gen_random("tree3d", 10, seed)
    schedule = tree_approx(instance)
    assert set(schedule.times) == set(instance.edges)
    assert validate_schedule(instance, schedule).valid


def test_tree_approx_rejects_cycles(triangle):
    with pytest.raises(NotATree):
        tree_approx(triangle)


def test_degeneracy_order_of_a_path(line_path):
    assert degeneracy_order(line_path.graph) == ["u", "v", "w"]


def test_forests_of_k4():
    instance, _ = gen_random("complete2d", 4, 0)
    forests = forest_decompose(instance)
    assert 1 <= len(forests) <= 3
    assert sorted(edge for forest in forests for edge in forest) == sorted(instance.edges)
    assert all(nx.is_forest(nx.Graph(forest)) for forest in forests)


def test_a_tree_is_one_forest():
    instance, _ = gen_random("tree3d", 9, 1)
    assert len(forest_decompose(instance)) == 1


def test_cycle_needs_at_most_two_forests():
    points = {f"c{i}": (float(i), float(i % 2)) for i in range(5)}
    edges = [(f"c{i}", f"c{(i + 1) % 5}") for i in range(5)]
    forests = forest_decompose(make_instance(2, points, edges))
    assert len(forests) <= 2


def test_arboricity_on_triangle(triangle):
    schedule = arboricity_approx(triangle)
    assert validate_schedule(triangle, schedule).valid
    assert schedule.makespan >= 120.0 - 1e-9


def test_arboricity_on_a_tree_matches_tree_approx():
    instance, _ = gen_random("tree3d", 7, 4)
    assert arboricity_approx(instance).times == tree_approx(instance).times


def test_disjoint_edges_run_in_parallel():
    points = {"a": (0.0, 0.0, 0.0), "b": (1.0, 0.0, 0.0), "c": (0.0, 5.0, 0.0), "d": (0.0, 5.0, 1.0)}
    instance = make_instance(3, points, [("a", "b"), ("c", "d")])
    assert arboricity_approx(instance).makespan == 0.0


@pytest.mark.parametrize("seed", range(10))
def test_arboricity_on_random_graphs(seed):
    instance, _ = gen_random("sparse2d", 10, seed)
    assert validate_schedule(instance, arboricity_approx(instance)).valid


def test_arboricity_on_abstract_costs():
    edges = [("p", "q"), ("q", "r"), ("p", "r")]
    e_pq, e_qr, e_pr = edges
    costs = {pair_key(e_pq, e_qr): 20.0, pair_key(e_pq, e_pr): 40.0, pair_key(e_qr, e_pr): 30.0}
    instance = make_instance(ABSTRACT, ["p", "q", "r"], edges, costs)
    assert validate_schedule(instance, arboricity_approx(instance)).valid
