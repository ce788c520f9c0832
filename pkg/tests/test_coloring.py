import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quasi4.analysis import Leaf, Node, decompose_tree, evaluate_tree
from quasi4.coloring import (EdgeColoring, check_conditions, check_principal_hypothesis, check_rhombus_rule,
                             check_sparse_agreement, compute_coloring, edges, find_inner_edge, gamma_by_id,
                             gamma_catalog, gamma_index, rebuild_pipeline, reconstruct, reconstruct_tree,
                             row_major)
from quasi4.core import add_mod4, apply_isotopy, compose, is_normalized, normalize, xor_sum
from quasi4.enumeration import random_composed, random_tree
from quasi4.errors import ConditionViolation, HypothesisFailed, NoInnerEdge, NotNormalized
from quasi4.semilinear import BooleanFunction, from_lambda

seeds = st.integers(0, 2**63 - 1)
XOR, Z4 = 0, 2


def mono(n, k):
    return EdgeColoring(n, (k,) * (n * (n - 1) // 2))


def passing(n):
    for cols in itertools.product(range(4), repeat=n * (n - 1) // 2):
        c = EdgeColoring(n, cols)
        if check_conditions(c).ok:
            yield c


def brute_reduced_squares():
    out = []
    for cells in itertools.product(range(4), repeat=9):
        rows = ["0123"] + [str(r) + "".join(map(str, cells[3 * r - 3:3 * r])) for r in (1, 2, 3)]
        if all(len(set(r)) == 4 for r in rows) and all(len(set(c)) == 4 for c in zip(*rows)):
            out.append("".join(rows))
    return sorted(out)


def test_catalog_contents():
    cat = gamma_catalog()
    assert [g.row_major() for g in cat] == brute_reduced_squares()
    assert cat[XOR].row_major() == "0123103223013210"
    assert cat[Z4].row_major() == "0123123023013012"
    assert [g.id for g in cat] == ["g0", "g1", "g2", "g3"]
    assert gamma_by_id("g2") is cat[2]
    assert cat[XOR].table == xor_sum(2) and cat[Z4].table == add_mod4(2)


@pytest.mark.parametrize("k", range(4))
def test_gamma_laws(k):
    g = gamma_catalog()[k]
    for a, b in itertools.product(range(4), repeat=2):
        assert g(a, b) == g(b, a)
    for a, b, c in itertools.product(range(4), repeat=3):
        assert g(g(a, b), c) == g(a, g(b, c))
    assert row_major(g.table) == g.row_major()


def test_compute_coloring_examples(mixed3):
    assert compute_coloring(xor_sum(3)).colors == (XOR,) * 3
    c = compute_coloring(mixed3)
    assert (c(1, 2), c(1, 3), c(2, 3)) == (XOR, Z4, Z4)
    assert compute_coloring(add_mod4(3)).colors == (Z4,) * 3


def test_compute_coloring_needs_normalized(fig2):
    with pytest.raises(NotNormalized):
        compute_coloring(fig2)


def test_condition_examples():
    assert check_conditions(mono(5, 1)).ok
    tri = EdgeColoring(3, (0, 1, 2))
    assert check_conditions(tri).a_violations == [(1, 2, 3)]
    # a=1 b=2 c=3 d=4: star on ab, bc, cd and circ on ac, ad, bd
    frag = EdgeColoring.from_mapping(4, {(1, 2): 0, (2, 3): 0, (3, 4): 0, (1, 3): 1, (1, 4): 1, (2, 4): 1})
    rep = check_conditions(frag)
    assert rep.a_violations == [] and rep.b_violations == [(1, 2, 3, 4)]
    assert not rep.ok


def test_rhombus_rule_monochromatic():
    assert check_rhombus_rule(mono(6, 3)) == []


@pytest.mark.parametrize("n", [2, 3, 4])
def test_exhaustive_small_colorings(n):
    count = 0
    for c in passing(n):
        count += 1
        assert check_rhombus_rule(c) == []
        find_inner_edge(c)
        q = reconstruct(c)
        assert is_normalized(q)
        assert decompose_tree(q) is not None
        assert compute_coloring(q) == c
    assert count > 0


def test_inner_edge_examples(mixed3):
    assert find_inner_edge(mono(4, 0)) == (1, 2)
    assert find_inner_edge(compute_coloring(mixed3)) == (1, 2)
    assert find_inner_edge(EdgeColoring(2, (3,))) == (1, 2)
    with pytest.raises(NoInnerEdge):
        # the forbidden (B) fragment has no inner edge
        find_inner_edge(EdgeColoring.from_mapping(
            4, {(1, 2): 0, (2, 3): 0, (3, 4): 0, (1, 3): 1, (1, 4): 1, (2, 4): 1}))


def test_reconstruct_examples(mixed3):
    assert reconstruct(mono(3, XOR)) == xor_sum(3)
    c = EdgeColoring.from_mapping(3, {(1, 2): XOR, (1, 3): Z4, (2, 3): Z4})
    assert reconstruct(c) == mixed3
    assert reconstruct(EdgeColoring(2, (Z4,))) == add_mod4(2)
    with pytest.raises(ConditionViolation):
        reconstruct_tree(EdgeColoring(3, (0, 1, 2)))


def _tree_coloring(n, seed):
    return compute_coloring(evaluate_tree(random_tree(n, seed)))


@given(seeds, st.integers(5, 7))
def test_tree_colorings_pass_conditions(seed, n):
    c = _tree_coloring(n, seed)
    rep = check_conditions(c)
    assert rep.ok and rep.inner_edges
    assert check_rhombus_rule(c) == []


@given(seeds)
def test_reconstruct_sound_k6(seed):
    c = _tree_coloring(6, seed)
    q = reconstruct(c)
    assert compute_coloring(q) == c
    assert decompose_tree(q) is not None


def _replay_inner_edge_proof(c, rng):
    # extend a random sequence satisfying (C) until maximal, checking the
    # claim mu(a_i d) = mu(e_i) for every later e_j and d in e_j
    seq = [tuple(edges(c.n)[rng.integers(len(edges(c.n)))])]
    while True:
        x, y = seq[-1]
        options = []
        for keep, drop in ((x, y), (y, x)):
            for z in range(1, c.n + 1):
                if z in (x, y):
                    continue
                if c(x, y) == c(drop, z) != c(keep, z):
                    options.append((min(keep, z), max(keep, z)))
        if not options:
            break
        seq.append(options[rng.integers(len(options))])
        assert len(seq) <= c.n
    a = [next(v for v in e if v not in f) for e, f in zip(seq, seq[1:])]
    assert len(set(a)) == len(a)
    for i in range(len(a)):
        for j in range(i + 1, len(seq)):
            for d in seq[j]:
                assert a[i] != d and c(a[i], d) == c(*seq[i])
    x, y = seq[-1]
    assert all(c(x, z) == c(y, z) for z in range(1, c.n + 1) if z not in (x, y))


@given(seeds, st.integers(3, 7))
def test_inner_edge_proof_replay(seed, n):
    _replay_inner_edge_proof(_tree_coloring(n, seed), np.random.default_rng(seed))


def test_inner_edge_proof_replay_exhaustive_k4():
    rng = np.random.default_rng(0)
    for c in passing(4):
        _replay_inner_edge_proof(c, rng)


def test_sparse_agreement_examples():
    f = xor_sum(3)
    assert check_sparse_agreement(f, f)
    assert not check_sparse_agreement(f, add_mod4(3))


@given(seeds, st.integers(5, 7))
def test_sparse_agreement_rigidity(seed, n):
    f = evaluate_tree(random_tree(n, seed))
    g = reconstruct(compute_coloring(f))
    assert check_sparse_agreement(f, g)
    assert f == g


def test_rebuild_xor5():
    tree, t = rebuild_pipeline(xor_sum(5))
    g0 = gamma_catalog()[XOR].table
    want = Leaf(1)
    for v in range(2, 6):
        want = Node(g0, want, Leaf(v))
    assert tree == want
    assert evaluate_tree(tree) == apply_isotopy(xor_sum(5), t)


@given(seeds)
def test_rebuild_random_isotoped_trees(seed):
    q = random_composed(6, seed)
    tree, t = rebuild_pipeline(q)
    assert evaluate_tree(tree) == apply_isotopy(q, t) == normalize(q)[0]


def test_rebuild_rejects_irreducible_retract():
    irr = from_lambda(BooleanFunction.from_string(3, "00000001"))
    # f = irr(x1 ^ x2 ^ x3, x4, x5): fixing x2, x3 leaves irr itself
    f = compose(irr, xor_sum(3))
    with pytest.raises(HypothesisFailed) as exc:
        rebuild_pipeline(f)
    assert exc.value.retract.n == 3
    check_principal_hypothesis(xor_sum(5))  # no exception
