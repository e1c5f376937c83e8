import math

import numpy as np
import pytest

from fpplab import animals as an
from fpplab.lattice import WeightField
from fpplab.rng import derive_seed, uniform01

from _oracles import plain_max_open, recursive_saw_count


def test_saw_counts_known_values():
    assert an.saw_count(2, 1) == 4
    assert an.saw_count(2, 2) == 12
    assert an.saw_count(2, 3) == 36
    assert an.saw_count(2, 4) == 100
    assert an.saw_count(3, 1) == 6
    assert an.saw_count(3, 2) == 30


@pytest.mark.parametrize("d,n", [(2, 1), (2, 3), (2, 5), (2, 7), (3, 3), (3, 4)])
def test_saw_count_matches_recursive_counter(d, n):
    assert an.saw_count(d, n) == recursive_saw_count(d, n)


def test_saw_paths_are_self_avoiding_and_unique():
    seen = set()
    for path in an.enumerate_saws(2, 5):
        assert len(path) == 5
        assert len(set(path)) == 5  # distinct edges
        # walk the path to confirm n+1 distinct vertices
        verts = {(0, 0)}
        v = (0, 0)
        for tail, k in path:
            unit = tuple(1 if i == k else 0 for i in range(2))
            head = tuple(a + b for a, b in zip(tail, unit))
            v = head if v == tail else tail
            verts.add(v)
        assert len(verts) == 6
        assert path not in seen
        seen.add(path)


def test_budget_guards():
    with pytest.raises(ValueError):
        list(an.enumerate_saws(2, 15))
    with pytest.raises(ValueError):
        list(an.enumerate_saws(3, 10))
    with pytest.raises(ValueError):
        list(an.enumerate_saws(4, 3))
    with pytest.raises(ValueError):
        an.exact_Nn(2, 0, lambda e: 1)


def test_exact_nn_trivial():
    assert an.exact_Nn(2, 5, lambda e: 1) == 5
    assert an.exact_Nn(2, 5, lambda e: 0) == 0
    assert an.exact_Nn(3, 4, lambda e: 1) == 4
    open_set = {((0, 0), 0), ((1, 0), 0)}
    assert an.exact_Nn(2, 3, lambda e: 1 if e in open_set else 0) == 2


@pytest.mark.parametrize("n", [3, 5, 8])
def test_bnb_equals_plain_enumeration(n):
    paths = list(an.enumerate_saws(2, n))
    for rep in range(10):
        seed = derive_seed(11, "bnb", n, rep)
        box, _ = an.saw_edge_matrix(2, n)
        field = WeightField(box, an.bernoulli_law(0.4), seed)
        open_fn = lambda e: field.weight_of(e) == 1.0
        assert an.exact_Nn(2, n, field) == plain_max_open(paths, open_fn)


def test_monotone_in_open_edges():
    # flipping an edge open never decreases N_n
    n = 5
    box, _ = an.saw_edge_matrix(2, n)
    field = WeightField(box, an.bernoulli_law(0.3), 17)
    base = an.exact_Nn(2, n, field)
    for idx in range(0, box.edge_count, 7):
        e = box.edge_id(idx)
        if field.weight_of(e) == 0.0:
            assert an.exact_Nn(2, n, field.with_override(e, 1.0)) >= base
    assert 0 <= base <= n


def test_scaling_ratio_examples():
    ratio, se = an.scaling_ratio(2, 6, 1.0, 120, 0)
    assert ratio == 1.0 and se == 0.0
    ratio, se = an.scaling_ratio(2, 10, 0.5, 500, 0)
    assert ratio < 8.0
    assert se > 0.0
    with pytest.raises(ValueError):
        an.scaling_ratio(2, 6, 0.5, 50, 0)  # too few replications
    with pytest.raises(ValueError):
        an.scaling_ratio(2, 6, 0.0, 200, 0)


def test_single_step_closed_form():
    # E N_1 = 1 - (1-p)^(2d); check within 3 standard errors
    d, p, reps = 2, 0.3, 4000
    box, matrix = an.saw_edge_matrix(d, 1)
    vals = []
    for rep in range(reps):
        field = WeightField(box, an.bernoulli_law(p), derive_seed(5, "n1", rep))
        vals.append(field.weights()[matrix].sum(axis=1).max())
    mean = float(np.mean(vals))
    expected = 1 - (1 - p) ** (2 * d)
    se = float(np.std(vals, ddof=1) / math.sqrt(reps))
    assert abs(mean - expected) <= 3 * se


def test_matrix_rows_match_enumeration():
    box, matrix = an.saw_edge_matrix(2, 4)
    paths = list(an.enumerate_saws(2, 4))
    assert matrix.shape == (100, 4)
    for row, path in zip(matrix, paths):
        assert [box.edge_id(i) for i in row] == list(path)


def test_cover_straight_segment():
    # straight segment with l = n: r = 2, anchors cover everything
    n = 6
    animal = {(i, 0) for i in range(n + 1)}
    cover = an.animal_cover(animal, n)
    assert len(cover.anchors) == 2 * n // n + 1
    assert an.cover_invariants_ok(animal, cover)


def test_cover_rejects_degenerate():
    with pytest.raises(ValueError):
        an.animal_cover({(0, 0)}, 1)  # n = 0, l <= n fails
    with pytest.raises(ValueError):
        an.animal_cover({(0, 0), (1, 0)}, 2)  # l > n
    with pytest.raises(ValueError):
        an.animal_cover({(0, 0), (2, 0)}, 1)  # disconnected
    with pytest.raises(ValueError):
        an.animal_cover({(1, 0), (2, 0)}, 1)  # origin missing


def test_cover_random_animals():
    for i in range(1000):
        size = 3 + int(uniform01(0, 500, i) * 28)
        animal = an.random_animal(2, size, derive_seed(0, "cov", i))
        n = len(animal) - 1
        l = 1 + int(uniform01(0, 501, i) * n)
        cover = an.animal_cover(animal, l)
        assert len(cover.anchors) == (2 * n) // l + 1
        assert an.cover_invariants_ok(animal, cover)


def test_cover_3d_animals():
    for i in range(50):
        animal = an.random_animal(3, 10, derive_seed(1, "cov3", i))
        cover = an.animal_cover(animal, 3)
        assert an.cover_invariants_ok(animal, cover)


def test_random_animal_properties():
    a = an.random_animal(2, 25, 123)
    assert len(a) == 25
    assert (0, 0) in a
    # connectivity: BFS reaches everything
    frontier = [(0, 0)]
    seen = {(0, 0)}
    while frontier:
        v = frontier.pop()
        for s in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            u = (v[0] + s[0], v[1] + s[1])
            if u in a and u not in seen:
                seen.add(u)
                frontier.append(u)
    assert seen == a
