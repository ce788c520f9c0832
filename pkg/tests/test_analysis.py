import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import reducible_oracle, split_oracle
from quasi4.analysis import (Leaf, Node, decompose_tree, evaluate_tree, first_split, is_completely_reducible,
                             is_permutably_reducible, kappa, leaves, node_count, reducible_batch, splits, try_split)
from quasi4.coloring import gamma_catalog
from quasi4.core import Quasigroup, add_mod4, compose, from_function, is_normalized, points, xor_sum
from quasi4.enumeration import latin_squares, random_composed, random_semilinear, random_tree
from quasi4.errors import ArityMismatch
from quasi4.semilinear import BooleanFunction, from_lambda

seeds = st.integers(0, 2**63 - 1)
MAJORITY = BooleanFunction.from_callable(3, lambda a, b, c: (a & b) | (a & c) | (b & c))
TRIPLE_AND = BooleanFunction.from_string(3, "00000001")


def test_xor3_splits_on_12(xor2):
    s = try_split(xor_sum(3), (1, 2))
    assert s is not None and s.recompose() == xor_sum(3)
    assert s.g == xor2


def test_mixed_split_examples(mixed3):
    assert try_split(mixed3, (1, 3)) is None
    s = try_split(mixed3, (1, 2))
    assert s.recompose() == mixed3
    assert s.g == xor_sum(2)
    assert s.h == add_mod4(2)


def test_try_split_rejects_bad_subsets(xor2):
    with pytest.raises(ArityMismatch):
        try_split(xor2, (1, 2))
    with pytest.raises(ArityMismatch):
        try_split(xor_sum(3), (1, 2, 3))
    with pytest.raises(ArityMismatch):
        try_split(xor_sum(3), (0, 1))


def test_binary_is_irreducible():
    assert not any(is_permutably_reducible(Quasigroup.trusted(2, s)) for s in latin_squares())


def test_reducibility_examples():
    assert is_permutably_reducible(xor_sum(3))
    assert is_permutably_reducible(add_mod4(3))
    assert not is_permutably_reducible(from_lambda(TRIPLE_AND))


def test_majority_lambda_is_reducible():
    # frozen from the definitional oracle: lam = ab ^ (a^b)c has a split
    q = from_lambda(MAJORITY)
    vals = q.values.tolist()
    assert [split_oracle(vals, 3, s) for s in [(1, 2), (1, 3), (2, 3)]] == [True, True, True]
    assert is_permutably_reducible(q)


def test_irreducible_count_among_standard_n3():
    flags = [is_permutably_reducible(from_lambda(BooleanFunction(3, b)))
             for b in itertools.product((0, 1), repeat=8)]
    assert flags.count(False) == 128


def test_batch_matches_oracle_on_all_cubes(all_cubes):
    fast = reducible_batch(all_cubes, 3)
    assert int(fast.sum()) == 34560
    rng = np.random.default_rng(7)
    for k in rng.choice(len(all_cubes), 3000, replace=False):
        assert fast[k] == reducible_oracle(all_cubes[k].tolist(), 3)


def test_splits_recompose_on_all_cubes(all_cubes):
    for vals in all_cubes[::11]:
        q = Quasigroup.trusted(3, vals)
        for s in splits(q):
            assert s.recompose() == q


@given(seeds, st.integers(4, 5))
def test_splits_recompose_random(seed, n):
    q = random_composed(n, seed)
    found = splits(q)
    assert found
    for s in found:
        assert s.recompose() == q
        assert split_oracle(q.values.tolist(), n, s.inner)


@given(seeds)
def test_try_split_agrees_with_oracle(seed):
    rng = np.random.default_rng(seed)
    q = random_composed(4, rng) if rng.integers(2) else random_semilinear(4, rng)
    vals = q.values.tolist()
    for size in (2, 3):
        for inner in itertools.combinations(range(1, 5), size):
            assert (try_split(q, inner) is not None) == split_oracle(vals, 4, inner)


def test_g_takes_value_a_on_first_inner_argument():
    s = first_split(compose(add_mod4(2), random_composed(2, 3), (3, 1, 2)))
    for a in range(4):
        assert s.g(a, *([0] * (s.g.n - 1))) == a


def _representable(vals):
    """For each reducible 3-quasigroup D: some i in {0,1,2} and binary h with
    h(x,0) = x such that D<z0,z1,z2,z3> = F<z with z_i -> h(z_i, z3)>,
    F being the z3 = 0 principal retract.  h is read back from D."""
    b = len(vals)
    x1, x2, x3 = points(3).T
    p2 = points(2)
    rows = np.arange(b)[:, None]
    F = vals[:, :16]
    inv1 = np.zeros((b, 16), dtype=np.int64)
    inv1[rows, F + 4 * p2[:, 1]] = p2[:, 0]
    inv2 = np.zeros((b, 16), dtype=np.int64)
    inv2[rows, F + 4 * p2[:, 0]] = p2[:, 1]
    found = np.zeros(b, dtype=bool)
    for i in range(3):
        if i == 0:
            key, c = vals + 4 * x3, F[:, x1 + 4 * x2]
        elif i == 1:
            key, c = x1 + 4 * x3, np.take_along_axis(inv1, vals + 4 * x2, 1)
        else:
            key, c = x2 + 4 * x3, np.take_along_axis(inv2, vals + 4 * x1, 1)
        key = np.broadcast_to(key, (b, 64))
        h = np.full((b, 16), -1)
        h[rows, key] = c
        consistent = (np.take_along_axis(h, key, 1) == c).all(1)
        sq = h.reshape(b, 4, 4)
        latin = (np.sort(sq, 2) == np.arange(4)).all((1, 2)) & (np.sort(sq, 1) == np.arange(4)[:, None]).all((1, 2))
        found |= consistent & latin & (h[:, :4] == np.arange(4)).all(1)
    return found


def test_reducible_cubes_have_retract_representation(all_cubes):
    vals = all_cubes.astype(np.int64)
    red = reducible_batch(all_cubes, 3)
    rep = _representable(vals)
    assert rep[red].all()
    # and the converse holds at n = 3
    assert not rep[~red].any()


def test_kappa_examples():
    assert kappa(xor_sum(3)) == 2
    assert kappa(xor_sum(4)) == 2
    assert kappa(compose(from_lambda(TRIPLE_AND), xor_sum(2))) == 3
    assert kappa(compose(from_lambda(MAJORITY), xor_sum(2))) == 2


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_kappa_one_color_towers(n):
    assert kappa(xor_sum(n)) == 2
    assert kappa(add_mod4(n)) == 2


@given(seeds, st.integers(4, 5))
def test_kappa_in_range(seed, n):
    q = random_semilinear(n, seed)
    assert 2 <= kappa(q) <= n - 1


def test_decompose_examples(mixed3):
    g0, _, g2, _ = (g.table for g in gamma_catalog())
    t = decompose_tree(xor_sum(3))
    assert t == Node(g0, Node(g0, Leaf(1), Leaf(2)), Leaf(3))
    t = decompose_tree(mixed3)
    assert t == Node(g2, Node(g0, Leaf(1), Leaf(2)), Leaf(3))
    assert decompose_tree(from_lambda(TRIPLE_AND)) is None


@given(seeds, st.integers(2, 6))
def test_decompose_reproduces_random_trees(seed, n):
    q = evaluate_tree(random_tree(n, seed))
    assert is_normalized(q)
    t = decompose_tree(q)
    assert t is not None
    assert evaluate_tree(t) == q
    assert node_count(t) == n - 1
    assert sorted(leaves(t)) == list(range(1, n + 1))


@given(seeds, st.integers(3, 5))
def test_isotoped_trees_completely_reducible(seed, n):
    assert is_completely_reducible(random_composed(n, seed))


def test_evaluate_tree_example():
    z4 = gamma_catalog()[2].table
    t = Node(z4, Leaf(2), Node(z4, Leaf(3), Leaf(1)))
    assert evaluate_tree(t) == from_function(3, lambda a, b, c: (a + b + c) % 4)
