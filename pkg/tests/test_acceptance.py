"""End-to-end checks of the guarantees on seeded random corpora."""

import itertools
import math

import pytest

from conftest import make_instance
from scancover.algos_1d import (
    balanced_vectors,
    bitschedule_to_schedule,
    has_cover_property,
    solve_bipartite_1d,
    solve_coloring_1d,
    solve_complete_1d,
    vectors_from_coloring,
)
from scancover.algos_2d import (
    bipartite_rotation,
    complete_recursive_split,
    complete_split_bound,
    detect_separating_line,
    kcolor_decompose,
    lambda_cone,
    sector_approx,
)
from scancover.bounds import (
    chromatic_lower_bound,
    compute_bounds,
    cut_cover_extract,
    cut_cover_violations,
    greedy_coloring,
    star_sequential_bound,
)
from scancover.core_model import is_star
from scancover.errors import NoSolutionWithin
from scancover.generators import gen_geodesic_star, gen_nae_gadget, gen_random, nae_witness_schedule
from scancover.oracle import discrete_step_oracle, exact_1d, exact_chromatic, exact_order_search, nae3sat_check
from scancover.schedule_engine import validate_schedule, validate_trajectory
from scancover.tree_abstract import arboricity_approx, tree_approx

SEEDS = range(20)
VALIDITY_SEEDS = range(200)


def assert_valid(instance, schedule, trajectory=None):
    assert set(schedule.times) == set(instance.edges)
    verdict = validate_schedule(instance, schedule)
    assert verdict.valid, verdict.violations[:3]
    if trajectory is not None:
        assert validate_trajectory(instance, schedule, trajectory).valid


@pytest.mark.parametrize("seed", VALIDITY_SEEDS)
def test_validity_1d(seed):
    bipartite, _ = gen_random("bipartite1d", 9, seed)
    for bits in (solve_bipartite_1d(bipartite), solve_coloring_1d(bipartite)):
        assert has_cover_property(bipartite, bits)
        assert_valid(bipartite, bitschedule_to_schedule(bits, bipartite))

    complete, _ = gen_random("complete1d", 9, seed)
    bits = solve_complete_1d(complete)
    assert has_cover_property(complete, bits)
    assert_valid(complete, bitschedule_to_schedule(bits, complete))

    sparse, _ = gen_random("sparse1d", 12, seed)
    assert_valid(sparse, bitschedule_to_schedule(solve_coloring_1d(sparse), sparse))


@pytest.mark.parametrize("seed", VALIDITY_SEEDS)
def test_validity_2d(seed):
    bipartite, partition = gen_random("bipartite2d", 10, seed)
    for result in (bipartite_rotation(bipartite, partition), sector_approx(bipartite, partition)):
        assert_valid(bipartite, result.schedule, result.trajectory)
    assert_valid(bipartite, kcolor_decompose(bipartite, greedy_coloring(bipartite)))

    complete, _ = gen_random("complete2d", 9, seed)
    result = complete_recursive_split(complete)
    assert_valid(complete, result.schedule, result.trajectory)
    assert_valid(complete, kcolor_decompose(complete, greedy_coloring(complete)))

    sparse, _ = gen_random("sparse2d", 14, seed)
    assert_valid(sparse, kcolor_decompose(sparse, greedy_coloring(sparse)))
    assert_valid(sparse, arboricity_approx(sparse))


@pytest.mark.parametrize("seed", VALIDITY_SEEDS)
def test_validity_3d_and_abstract(seed):
    tree, _ = gen_random("tree3d", 12, seed)
    assert_valid(tree, tree_approx(tree))
    assert_valid(tree, arboricity_approx(tree))

    formula = [["x1", "x2", "!x3"], ["!x1", "x3", "x4"], ["x2", "!x4", "!x1"]]
    gadget = gen_nae_gadget(formula, phi=30.0 + seed)
    assert_valid(gadget, arboricity_approx(gadget))
    satisfiable, assignment = nae3sat_check(formula)
    assert satisfiable
    assert_valid(gadget, nae_witness_schedule(formula, assignment, phi=30.0 + seed))


@pytest.mark.parametrize("seed", SEEDS)
def test_1d_polynomial_cases_are_optimal(seed):
    bipartite, _ = gen_random("bipartite1d", 4 + seed % 5, seed)
    assert solve_bipartite_1d(bipartite).steps == exact_1d(bipartite).steps
    complete, _ = gen_random("complete1d", 2 + seed % 7, seed)
    assert solve_complete_1d(complete).steps == exact_1d(complete).steps


def test_complete_on_eight_points_takes_three_steps():
    complete, _ = gen_random("complete1d", 8, 0)
    bits = solve_complete_1d(complete)
    assert bits.steps == 3
    assert bits.scan_time == 360.0


@pytest.mark.parametrize("colors", [2, 3, 4, 5, 7, 10, 16, 33, 64])
def test_coloring_steps_stay_under_the_ceiling(colors):
    points = {f"p{i:02d}": (float(i),) for i in range(colors)}

    ids = list(points)
    instance = make_instance(1, points, list(itertools.combinations(ids, 2)))
    bits = vectors_from_coloring(instance, {vertex_id: index for index, vertex_id in enumerate(ids)})
    log_c = math.log2(colors)
    assert bits.steps <= math.ceil(log_c + 0.5 * math.log2(log_c) + 1)
    vectors = set(bits.vectors.values())
    assert len(vectors) == colors
    for a, b in itertools.combinations(vectors, 2):
        assert any(x == "0" and y == "1" for x, y in zip(a, b))
        assert any(x == "1" and y == "0" for x, y in zip(a, b))
    assert has_cover_property(instance, bits)
    if colors == 2:
        assert bits.steps == 2
    assert set(vectors) <= set(balanced_vectors(bits.steps))


@pytest.mark.parametrize("seed", SEEDS)
def test_rotation_absolute_bounds(seed):
    instance, partition = gen_random("bipartite2d", 12, seed)
    result = bipartite_rotation(instance, partition)
    assert result.schedule.makespan <= 360.0 + 1e-6
    if detect_separating_line(*[[instance.coords[v] for v in side] for side in partition]) is not None:
        assert result.schedule.makespan <= 180.0 + 1e-6


def test_rotation_on_separated_classes():

    points = {"a0": (0.0, 0.0), "a1": (0.2, 1.0), "b0": (1.0, 0.3), "b1": (1.2, -0.5)}
    edges = [("a0", "b0"), ("a0", "b1"), ("a1", "b0"), ("a1", "b1")]
    instance = make_instance(2, points, edges)
    result = bipartite_rotation(instance, (["a0", "a1"], ["b0", "b1"]))
    assert result.separating_line is not None
    assert result.schedule.makespan <= 180.0 + 1e-6


@pytest.mark.parametrize("seed", range(100))
def test_sector_within_four_and_a_half_of_optimal(seed):
    instance, partition = gen_random("bipartite2d", 4 + seed % 3, seed)
    optimum = exact_order_search(instance).makespan
    makespan = sector_approx(instance, partition).schedule.makespan
    assert makespan <= 4.5 * optimum + 1e-6


@pytest.mark.parametrize("kind, n", [("bipartite2d", 6), ("sparse2d", 6), ("tree3d", 8), ("complete2d", 4)])
@pytest.mark.parametrize("seed", range(8))
def test_lower_bounds_are_sound(kind, n, seed):
    instance, _ = gen_random(kind, n, seed)
    if len(instance.edges) > 9:
        pytest.skip("too many edges for the oracle")
    optimum = exact_order_search(instance).makespan
    if instance.dimension == 2:
        assert lambda_cone(instance) <= optimum + 1e-9
    chi = exact_chromatic(instance)
    assert chromatic_lower_bound(chi, instance.dimension) <= optimum + 1e-9
    if is_star(instance) is not None:
        assert star_sequential_bound(instance) <= optimum + 1e-9
    assert compute_bounds(instance).best <= optimum + 1e-9


@pytest.mark.parametrize("seed", SEEDS)
def test_cut_covers_of_planar_trajectories(seed):
    bipartite, partition = gen_random("bipartite2d", 10, seed)
    complete, _ = gen_random("complete2d", 6 + seed % 5, seed)
    runs = [
        (bipartite, bipartite_rotation(bipartite, partition)),
        (bipartite, sector_approx(bipartite, partition)),
        (complete, complete_recursive_split(complete)),
    ]
    for instance, result in runs:
        intervals = cut_cover_extract(instance, result.schedule, result.trajectory)
        assert cut_cover_violations(instance, result.schedule, intervals) == []


def _canonical(formula):
    """Smallest relabelling of a formula under variable permutations and sign flips."""
    variables = sorted({literal.lstrip("!") for clause in formula for literal in clause})
    names = ["p", "q", "r"][: len(variables)]
    best = None
    for permutation in itertools.permutations(names):
        for flips in itertools.product((False, True), repeat=len(variables)):
            rename = dict(zip(variables, zip(permutation, flips)))

            def literal(text):
                name, flip = rename[text.lstrip("!")]
                return ("!" if text.startswith("!") != flip else "") + name

            key = tuple(sorted(tuple(sorted(literal(x) for x in clause)) for clause in formula))
            best = key if best is None or key < best else best
    return best


def small_formulas():
    literals = ["x", "!x", "y", "!y", "z", "!z"]
    clauses = list(itertools.combinations_with_replacement(literals, 3))
    seen = set()
    for count in (1, 2):
        for chosen in itertools.combinations_with_replacement(clauses, count):
            key = _canonical(chosen)
            if key not in seen:
                seen.add(key)
                yield [list(clause) for clause in key]


def test_gadget_needs_three_steps_exactly_when_nae_satisfiable():
    formulas = list(small_formulas())
    assert len(formulas) > 20
    unsatisfiable = 0
    for formula in formulas:
        gadget = gen_nae_gadget(formula)
        satisfiable, _ = nae3sat_check(formula)
        if satisfiable:
            assert discrete_step_oracle(gadget, 90.0, max_steps=3).steps == 3, formula
        else:
            unsatisfiable += 1
            with pytest.raises(NoSolutionWithin):
                discrete_step_oracle(gadget, 90.0, max_steps=3)
    assert unsatisfiable > 0


@pytest.mark.parametrize("seed", range(50))
def test_tree_approximation_ratio(seed):
    tree, _ = gen_random("tree3d", 4 + seed % 5, seed)
    optimum = exact_order_search(tree).makespan
    makespan = tree_approx(tree).makespan
    assert makespan <= 2.0 * optimum + 1e-6


@pytest.mark.parametrize("n", [2, 3, 4, 5, 8, 9, 16, 17, 33, 64])
def test_complete_split_bound(n):
    instance, _ = gen_random("complete2d", n, n)
    result = complete_recursive_split(instance)
    assert result.schedule.makespan <= complete_split_bound(n) + 1e-6
    assert validate_schedule(instance, result.schedule).valid


def test_geodesic_star_bound_grows():
    values = [star_sequential_bound(gen_geodesic_star(sub)) for sub in (0, 1, 2)]
    assert values[0] < values[1] < values[2]
