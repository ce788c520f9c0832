"""Permutable reducibility, splits, kappa and composition trees."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .core import Q, Quasigroup, compose, points, retract_table
from .errors import ArityMismatch, QuasigroupError


@dataclass(frozen=True)
class Split:
    """``f(x) = h(g(x_S), x_rest)`` with ``S`` and ``rest`` in increasing order."""

    inner: tuple
    g: Quasigroup
    h: Quasigroup

    @property
    def n(self) -> int:
        return self.g.n + self.h.n - 1

    def sigma(self) -> tuple:
        rest = [i for i in range(1, self.n + 1) if i not in self.inner]
        return tuple(self.inner) + tuple(rest)

    def recompose(self) -> Quasigroup:
        return compose(self.h, self.g, self.sigma())


def _subfunction_matrix(values: np.ndarray, k: int, inner: Sequence[int]) -> np.ndarray:
    """Reshape a batch ``(B, 4**k)`` into ``(B, 4**|S|, 4**(k-|S|))``.

    Rows run over assignments of the ``inner`` arguments, columns over the
    remaining ones; in both the lowest-numbered argument varies fastest.
    """
    rest = [t for t in range(1, k + 1) if t not in inner]
    b = values.shape[0]
    grid = values.reshape((b,) + (Q,) * k)
    # C-order grid axis a+1 holds x_{k-a}
    order = [0] + [k - s + 1 for s in reversed(inner)] + [k - t + 1 for t in reversed(rest)]
    return grid.transpose(order).reshape(b, Q ** len(inner), Q ** len(rest))


def _split_batch(m: np.ndarray):
    # Rows 0..3 are the assignments (a, 0, ..., 0): four distinct subfunctions
    # by the latin property.  Any split must map every row onto one of them,
    # and the column-0 entry identifies which.
    b = m.shape[0]
    reps = m[:, :Q, :]
    inv = np.zeros((b, Q), dtype=np.int64)
    inv[np.arange(b)[:, None], reps[:, :, 0]] = np.arange(Q)
    labels = np.take_along_axis(inv, m[:, :, 0].astype(np.int64), axis=1)
    ok = (reps[np.arange(b)[:, None], labels] == m).all(axis=(1, 2))
    return ok, labels, reps


def _subsets(n: int) -> Iterator[tuple]:
    for size in range(2, n):
        yield from itertools.combinations(range(1, n + 1), size)


def try_split(q: Quasigroup, inner: Sequence[int]) -> Split | None:
    """Split along the argument set ``inner`` if one exists.

    Classes of inner assignments are numbered by first occurrence in index
    order, which makes ``g`` take the value ``a`` on ``(a, 0, ..., 0)``.
    """
    inner = tuple(sorted(int(s) for s in inner))
    n = q.n
    if n < 3 or not 2 <= len(inner) <= n - 1 or len(set(inner)) != len(inner):
        raise ArityMismatch(f"need n >= 3 and 2 <= |S| <= n-1, got n={n}, S={inner}")
    if inner[0] < 1 or inner[-1] > n:
        raise ArityMismatch(f"S must be a subset of 1..{n}")
    m = _subfunction_matrix(q.values[None, :], n, inner)
    ok, labels, reps = _split_batch(m)
    if not ok[0]:
        return None
    g = Quasigroup.trusted(len(inner), labels[0])
    h = Quasigroup.trusted(n - len(inner) + 1, reps[0].T.ravel())
    return Split(inner, g, h)


def reducible_batch(values: np.ndarray, k: int) -> np.ndarray:
    """Reducibility flag for each row of a ``(B, 4**k)`` batch of k-quasigroups."""
    values = np.asarray(values)
    out = np.zeros(values.shape[0], dtype=bool)
    if k < 3:
        return out
    for inner in _subsets(k):
        todo = ~out
        if not todo.any():
            break
        ok, _, _ = _split_batch(_subfunction_matrix(values[todo], k, inner))
        out[np.flatnonzero(todo)[ok]] = True
    return out


def splits(q: Quasigroup) -> list[Split]:
    """Every split, smallest inner set first, lexicographic within a size."""
    if q.n < 3:
        return []
    return [s for s in (try_split(q, inner) for inner in _subsets(q.n)) if s is not None]


def first_split(q: Quasigroup) -> Split | None:
    if q.n < 3:
        return None
    for inner in _subsets(q.n):
        s = try_split(q, inner)
        if s is not None:
            return s
    return None


def is_permutably_reducible(q: Quasigroup) -> bool:
    return first_split(q) is not None


def kappa(q: Quasigroup) -> int:
    """Largest arity of an irreducible proper retract (all fixings, all outputs)."""
    n = q.n
    if n < 3:
        raise ArityMismatch("kappa is defined for n >= 3")
    for k in range(n - 1, 2, -1):
        for fixed in itertools.combinations(range(n + 1), n - k):
            for output in range(n + 1):
                if output in fixed:
                    continue
                if not reducible_batch(retract_table(q, fixed, output), k).all():
                    return k
    return 2


# -- composition trees ------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    var: int


@dataclass(frozen=True)
class Node:
    op: Quasigroup
    left: "CompositionTree"
    right: "CompositionTree"

    def __post_init__(self):
        if self.op.n != 2:
            raise ArityMismatch("tree nodes carry binary quasigroups")


CompositionTree = Union[Leaf, Node]


def leaves(tree: CompositionTree) -> list[int]:
    if isinstance(tree, Leaf):
        return [tree.var]
    return leaves(tree.left) + leaves(tree.right)


def node_count(tree: CompositionTree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + node_count(tree.left) + node_count(tree.right)


def evaluate_tree(tree: CompositionTree) -> Quasigroup:
    """The quasigroup computed by a repetition-free tree over x1..xn."""
    vs = leaves(tree)
    n = len(vs)
    if sorted(vs) != list(range(1, n + 1)):
        raise QuasigroupError(f"tree leaves must be x1..x{n} each exactly once, got {sorted(vs)}")
    pts = points(n)

    def run(t):
        if isinstance(t, Leaf):
            return pts[:, t.var - 1]
        a = run(t.left)
        b = run(t.right)
        return t.op.values[a + Q * b].astype(np.int64)

    return Quasigroup.trusted(n, run(tree))


def substitute(tree: CompositionTree, mapping: dict) -> CompositionTree:
    if isinstance(tree, Leaf):
        return mapping[tree.var]
    return Node(tree.op, substitute(tree.left, mapping), substitute(tree.right, mapping))


def decompose_tree(q: Quasigroup) -> CompositionTree | None:
    """Binary composition tree for a completely reducible ``q``, else ``None``.

    Splits are taken greedily (smallest, then lexicographically least inner
    set) and the recursion runs on both ``g`` and ``h``.
    """
    if q.n < 2:
        return None
    if q.n == 2:
        return Node(q, Leaf(1), Leaf(2))
    s = first_split(q)
    if s is None:
        return None
    gt = decompose_tree(s.g)
    ht = decompose_tree(s.h) if gt is not None else None
    if ht is None:
        return None
    gt = substitute(gt, {k + 1: Leaf(v) for k, v in enumerate(s.inner)})
    rest = s.sigma()[len(s.inner):]
    mapping = {1: gt}
    mapping.update({k + 2: Leaf(v) for k, v in enumerate(rest)})
    return substitute(ht, mapping)


def is_completely_reducible(q: Quasigroup) -> bool:
    return decompose_tree(q) is not None
