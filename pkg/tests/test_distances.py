import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from hookprod.distances import (EXACT, MATCHING, SearchConfig, bottleneck, candidate_matchings,
                                gamma_bar_search, hom_nonzero, interleaving_exact,
                                interleaving_hooks, matching_distance_estimate, restricted_barcode,
                                score_matching)
from hookprod.errors import BudgetExceeded, NotHookDecomposable
from hookprod.gamma_product import Entry, Matching, identity_matching
from hookprod.grid_modules import INF, GridModule, as_multiset, evaluate_hooks, hook, hook_decompose, zero_module
from hookprod.persistence1 import PersistenceDiagram

from oracles import distance_to_zero, random_hooks


def pd(*pts):
    return PersistenceDiagram(tuple(pts))


# ---------------------------------------------------------------- bottleneck

def test_bottleneck_against_empty():
    val, m = bottleneck(pd((0, 1)), pd())
    assert val == Fraction(1, 2)
    assert m.entries == (Entry("fdiag", 0, 0),)


def test_bottleneck_shifted_point():
    val, m = bottleneck(pd((0, 2)), pd((1, 3)))
    assert val == 1
    assert m.entries == (Entry("match", 0, 0),)


def test_bottleneck_identical():
    a = pd((0, 1), (100, 101))
    val, m = bottleneck(a, a)
    assert val == 0 and m == identity_matching(2)


def test_bottleneck_essential():
    assert bottleneck(pd((0, INF)), pd((3, INF)))[0] == 3
    assert bottleneck(pd((0, INF)), pd())[0] == math.inf


def test_bottleneck_empty():
    val, m = bottleneck(pd(), pd())
    assert val == 0 and m.entries == ()


def test_stored_diagonal_stays_on_diagonal():
    val, m = bottleneck(pd((2, 2)), pd((2, 3)))
    assert val == Fraction(1, 2)
    assert Entry("match", 0, 0) not in m.entries


def rand_pd(rng, n, top=10):
    pts = []
    for _ in range(n):
        b = rng.randint(0, top)
        pts.append((b, rng.randint(b, top)))
    return PersistenceDiagram(tuple(pts))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_bottleneck_metric_axioms(seed):
    rng = random.Random(seed)
    a, b, c = (rand_pd(rng, rng.randint(0, 4)) for _ in range(3))
    ab, m = bottleneck(a, b)
    assert ab == bottleneck(b, a)[0]
    assert bottleneck(a, c)[0] <= ab + bottleneck(b, c)[0]
    m.validate(a, b)


# ---------------------------------------------------------------- interleaving

def test_hom_nonzero_cases():
    h = hook((0, 0), (1, 1))
    assert hom_nonzero(h, h, 0)
    assert not hom_nonzero(h, h, 1)
    assert hom_nonzero(hook((0, 0)), hook((0, 0)), 3)
    assert hom_nonzero(hook((0, 0)), h, 0)
    assert not hom_nonzero(h, hook((0, 0)), 0)  # the relation is not honoured


def test_hook_against_zero():
    assert interleaving_hooks([hook((0, 0), (1, 1))], []) == 1
    assert interleaving_hooks([hook((0, 0), (4, 2))], []) == 2
    assert interleaving_hooks([hook((0, 0), (5, 5))], []) == 3
    assert interleaving_hooks([hook((0, 0))], []) is None


def test_interleaving_example1(example1):
    from hookprod.bipersistence import grid_module_of_pair
    M = grid_module_of_pair(example1, 1)
    ident = evaluate_hooks([hook((0, 0), (1, 1)), hook((100, 100), (101, 101))], M.box)
    swap = evaluate_hooks([hook((0, 100), (1, 101)), hook((100, 0), (101, 1))], M.box)
    assert interleaving_exact(M, swap) == 0
    assert interleaving_exact(M, ident) == 1


def test_max_eps_cutoff():
    assert interleaving_hooks([hook((0, 0), (5, 5))], [], max_eps=2) is None


def test_budget():
    hooks = [hook((0, 0), (9, 9))] * 5
    with pytest.raises(BudgetExceeded):
        interleaving_hooks(hooks, hooks[:4] + [hook((0, 0), (8, 8))], budget=3)


def test_non_hook_module_rejected(data_dir):
    from hookprod.bipersistence import grid_module_of_pair
    from hookprod.complex_io import read_complex
    m = grid_module_of_pair(read_complex(data_dir / "two_births.cplx"), 0)
    with pytest.raises(NotHookDecomposable):
        interleaving_exact(m, zero_module(m.box))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_distance_to_zero_oracle(seed):
    hooks = random_hooks(random.Random(seed), max_hooks=3, top=6, free_rate=0)
    assert interleaving_hooks(hooks, []) == distance_to_zero(evaluate_hooks(hooks, (16, 16)))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 20), st.integers(0, 20))
def test_unit_hook_at_distance_one(a, b):
    assert interleaving_hooks([hook((a, b), (a + 1, b + 1))], []) == 1


def small_pair(rng):
    return (random_hooks(rng, max_hooks=3, top=5, free_rate=0.1),
            random_hooks(rng, max_hooks=3, top=5, free_rate=0.1))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_interleaving_symmetric(seed):
    A, B = small_pair(random.Random(seed))
    assert interleaving_hooks(A, B) == interleaving_hooks(B, A)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_zero_exactly_on_equal_multisets(seed):
    rng = random.Random(seed)
    A, B = small_pair(rng)
    if rng.random() < 0.3:
        B = list(A)
    d = interleaving_hooks(A, B, shortcut=False)
    assert (d == 0) == (as_multiset(A) == as_multiset(B))
    assert d == interleaving_hooks(A, B)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_interleaving_triangle(seed):
    rng = random.Random(seed)
    A, B = small_pair(rng)
    C = random_hooks(rng, max_hooks=3, top=5, free_rate=0.1)
    ab, bc, ac = interleaving_hooks(A, B, 12), interleaving_hooks(B, C, 12), interleaving_hooks(A, C, 12)
    if ab is not None and bc is not None:
        assert ac is not None and ac <= ab + bc


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_estimate_below_exact(seed):
    A, B = small_pair(random.Random(seed))
    box = (8, 8)
    a, b = evaluate_hooks(A, box), evaluate_hooks(B, box)
    exact = interleaving_exact(a, b)
    assume(exact is not None)
    assert matching_distance_estimate(a, b) <= exact


# ---------------------------------------------------------------- line restrictions

def test_restricted_barcode_diagonal():
    m = evaluate_hooks([hook((0, 0), (2, 4))], (6, 6))
    assert restricted_barcode(m, 0).points == ((0, 4),)
    assert restricted_barcode(m, 1).points == ((0, 3),)
    # past the box the module is constant, so bars are not cut at its edge
    assert restricted_barcode(m, 5).points == ((0, 2),)
    assert restricted_barcode(evaluate_hooks([hook((1, 0))], (6, 6)), 0).points == ((1, INF),)


def test_estimate_blind_spot():
    # a vertical and a horizontal strip fill one hook: every slope-one line
    # sees the same bars, the modules are still not isomorphic
    box = (4, 4)
    one = evaluate_hooks([hook((0, 1), (1, 2))], box)
    two = evaluate_hooks([hook((0, 1), (1, 1)), hook((1, 1), (1, 2))], box)
    assert matching_distance_estimate(one, two) == 0
    assert interleaving_exact(one, two) > 0


# ---------------------------------------------------------------- search

def test_search_single_point():
    a = pd((0, 2))
    target = evaluate_hooks([hook((0, 0), (2, 2))], (4, 4))
    rep = gamma_bar_search(a, a, target, SearchConfig(objective="exact"))
    assert rep.best_value == 0
    assert rep.best_matching.entries == (Entry("match", 0, 0),)
    assert rep.objective == EXACT


def test_search_empty():
    rep = gamma_bar_search(pd(), pd(), zero_module((2, 2)))
    assert rep.best_value == 0 and rep.best_matching.entries == ()
    assert rep.evaluations == 1


def test_search_example1(example1):
    from hookprod.bipersistence import axis_barcodes, grid_module_of_pair
    M = grid_module_of_pair(example1, 1)
    pd_f, pd_g = axis_barcodes(example1, 1)
    rep = gamma_bar_search(pd_f, pd_g, M, SearchConfig(objective="exact"))
    assert rep.best_value == 0 and rep.ties == 1
    assert rep.best_matching.entries == (Entry("match", 0, 1), Entry("match", 1, 0))
    assert score_matching(pd_f, pd_g, identity_matching(2), M) == 1
    text = rep.render()
    assert text.splitlines()[:4] == ["objective: exact_interleaving", "best_value: 0",
                                     f"evaluations: {rep.evaluations}", "tied_minimizers: 1"]


def test_search_matching_objective(example1):
    from hookprod.bipersistence import axis_barcodes, grid_module_of_pair
    M = grid_module_of_pair(example1, 1)
    pd_f, pd_g = axis_barcodes(example1, 1)
    rep = gamma_bar_search(pd_f, pd_g, M, SearchConfig(objective="matching"))
    assert rep.objective == MATCHING and rep.best_value == 0


def test_candidates_bounded():
    a = pd((0, 2), (1, 3), (2, 5))
    with pytest.raises(BudgetExceeded):
        candidate_matchings(a, a, zero_module((6, 6)), max_points=2)
    with pytest.raises(BudgetExceeded):
        candidate_matchings(a, a, zero_module((6, 6)), max_candidates=10)


def test_candidates_valid_and_sorted():
    a, b = pd((0, 2), (3, 3)), pd((1, 4))
    cands = candidate_matchings(a, b, evaluate_hooks([hook((0, 1), (2, 4))], (6, 6)))
    keys = [c.sort_key() for c in cands]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    for c in cands:
        c.validate(a, b)
        assert Entry("fdiag", 1, 3) in c.entries


def test_auto_falls_back(data_dir):
    from hookprod.bipersistence import axis_barcodes, grid_module_of_pair
    from hookprod.complex_io import read_complex
    c = read_complex(data_dir / "two_births.cplx")
    M = grid_module_of_pair(c, 0)
    pd_f, pd_g = axis_barcodes(c, 0)
    assert gamma_bar_search(pd_f, pd_g, M).objective == MATCHING
    with pytest.raises(BudgetExceeded):
        gamma_bar_search(pd_f, pd_g, M, SearchConfig(objective="exact"))


def test_unknown_objective():
    with pytest.raises(ValueError):
        gamma_bar_search(pd(), pd(), zero_module((2, 2)), SearchConfig(objective="nope"))


def test_bottleneck_prefers_direct_match():
    val, m = bottleneck(pd((0, 10)), pd((1, 10)))
    assert val == 1 and m.entries == (Entry("match", 0, 0),)


def test_estimate_sees_example1_identity(example1):
    from hookprod.bipersistence import grid_module_of_pair
    M = grid_module_of_pair(example1, 1)
    ident = evaluate_hooks([hook((0, 0), (1, 1)), hook((100, 100), (101, 101))], M.box)
    assert matching_distance_estimate(ident, M, lines=[0]) > 0
    assert matching_distance_estimate(M, M) == 0
    assert matching_distance_estimate(zero_module((3, 3)), zero_module((3, 3))) == 0


def test_search_on_one_cycle_complex(data_dir):
    from hookprod.bipersistence import axis_barcodes, grid_module_of_pair
    from hookprod.complex_io import read_complex
    c = read_complex(data_dir / "one_cycle.cplx")
    M = grid_module_of_pair(c, 1)
    assert hook_decompose(M) == [hook((0, 0), (2, 2))]
    pd_f, pd_g = axis_barcodes(c, 1)
    rep = gamma_bar_search(pd_f, pd_g, M)
    assert rep.best_value == 0 and rep.best_matching == identity_matching(1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_search_no_worse_than_bottleneck_matching(seed):
    rng = random.Random(seed)
    hooks = random_hooks(rng, max_hooks=2, top=6, free_rate=0)
    target = evaluate_hooks(hooks, (8, 8))
    a = rand_pd(rng, rng.randint(0, 2), top=6)
    b = rand_pd(rng, rng.randint(0, 2), top=6)
    cfg = SearchConfig(objective="exact")
    try:
        rep = gamma_bar_search(a, b, target, cfg)
    except BudgetExceeded:
        assume(False)
    _, witness = bottleneck(a, b)
    assert rep.best_value <= score_matching(a, b, witness, target)
