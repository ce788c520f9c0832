"""Edge colorings of K_n by normalized binary quasigroups.

For a normalized quasigroup every zero-background 2-retract is one of the
four reduced 4x4 latin squares (the Klein group and three cyclic groups).
Those retracts define a coloring of the complete graph on the arguments;
colorings that avoid two small forbidden patterns are exactly the ones
realised by binary composition trees.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .analysis import CompositionTree, Leaf, Node, decompose_tree, evaluate_tree, reducible_batch, substitute
from .core import Isotopy, Quasigroup, is_normalized, normalize, points, retract_table
from .errors import ArityMismatch, ConditionViolation, HypothesisFailed, NoInnerEdge, NotNormalized, QuasigroupError


@dataclass(frozen=True)
class GammaOp:
    id: str
    table: Quasigroup

    def __call__(self, a, b):
        return int(self.table.values[a + 4 * b])

    def row_major(self) -> str:
        return row_major(self.table)


def row_major(op: Quasigroup) -> str:
    """16-character string with ``op(a, b)`` at position ``4a + b``."""
    return "".join(str(op.values[a + 4 * b]) for a in range(4) for b in range(4))


def from_row_major(s: str) -> Quasigroup:
    from .core import validate

    return validate(2, [int(s[a * 4 + b]) for b in range(4) for a in range(4)])


@lru_cache(maxsize=None)
def gamma_catalog() -> tuple:
    """The four reduced latin squares, ids g0..g3 by row-major string order."""
    tables = []
    for inner in itertools.product(range(4), repeat=9):
        rows = [[0, 1, 2, 3]] + [[r] + list(inner[3 * (r - 1): 3 * r]) for r in (1, 2, 3)]
        if all(sorted(row) == [0, 1, 2, 3] for row in rows) and all(
            sorted(col) == [0, 1, 2, 3] for col in zip(*rows)
        ):
            tables.append("".join(str(v) for row in rows for v in row))
    tables.sort()
    return tuple(GammaOp(f"g{k}", from_row_major(s)) for k, s in enumerate(tables))


def gamma_by_id(gid) -> GammaOp:
    k = int(str(gid).lstrip("g"))
    return gamma_catalog()[k]


def gamma_index(op: Quasigroup) -> int | None:
    for k, g in enumerate(gamma_catalog()):
        if g.table == op:
            return k
    return None


def edges(n: int) -> list[tuple]:
    return list(itertools.combinations(range(1, n + 1), 2))


@dataclass(frozen=True)
class EdgeColoring:
    """Colors (indices into the catalog) for every edge of K_n, edges in lexicographic order."""

    n: int
    colors: tuple
    _pos: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        colors = tuple(int(c) for c in self.colors)
        if len(colors) != self.n * (self.n - 1) // 2:
            raise ArityMismatch(f"K_{self.n} has {self.n * (self.n - 1) // 2} edges, got {len(colors)} colors")
        if any(not 0 <= c <= 3 for c in colors):
            raise QuasigroupError("colors must be catalog indices 0..3")
        object.__setattr__(self, "colors", colors)
        object.__setattr__(self, "_pos", {e: k for k, e in enumerate(edges(self.n))})

    @classmethod
    def from_mapping(cls, n: int, mapping: dict) -> "EdgeColoring":
        return cls(n, tuple(mapping[e] for e in edges(n)))

    def __call__(self, i: int, j: int) -> int:
        return self.colors[self._pos[(i, j) if i < j else (j, i)]]

    def items(self):
        return zip(edges(self.n), self.colors)


@dataclass
class ConditionReport:
    a_violations: list
    b_violations: list
    inner_edges: list

    @property
    def ok(self) -> bool:
        return not self.a_violations and not self.b_violations


def compute_coloring(q: Quasigroup) -> EdgeColoring:
    if q.n < 2:
        raise ArityMismatch("a coloring needs n >= 2")
    if not is_normalized(q):
        raise NotNormalized("compute_coloring expects a normalized quasigroup")
    lookup = {g.table.values.tobytes(): k for k, g in enumerate(gamma_catalog())}
    ab = np.arange(16)
    a, b = ab & 3, ab >> 2
    colors = []
    for i, j in edges(q.n):
        table = q.values[(a << (2 * (i - 1))) + (b << (2 * (j - 1)))]
        colors.append(lookup[table.tobytes()])
    return EdgeColoring(q.n, tuple(colors))


def _inner(c: EdgeColoring, vertices, x, y) -> bool:
    return all(c(x, z) == c(y, z) for z in vertices if z != x and z != y)


def check_conditions(c: EdgeColoring) -> ConditionReport:
    """Triangles with three colors (A) and 3+3 tetrahedra without a one-color triangle (B)."""
    n = c.n
    a_bad = [t for t in itertools.combinations(range(1, n + 1), 3)
             if len({c(t[0], t[1]), c(t[0], t[2]), c(t[1], t[2])}) == 3]
    b_bad = []
    for quad in itertools.combinations(range(1, n + 1), 4):
        cols = [c(u, v) for u, v in itertools.combinations(quad, 2)]
        counts = sorted(cols.count(x) for x in set(cols))
        if counts != [3, 3]:
            continue
        mono = any(
            c(t[0], t[1]) == c(t[0], t[2]) == c(t[1], t[2]) for t in itertools.combinations(quad, 3)
        )
        if not mono:
            b_bad.append(quad)
    verts = range(1, n + 1)
    inner = [e for e in edges(n) if _inner(c, verts, *e)]
    return ConditionReport(a_bad, b_bad, inner)


def check_rhombus_rule(c: EdgeColoring) -> list[tuple]:
    """Ordered 4-tuples where ab=ac != bc=bd != cd holds but ad != ab."""
    bad = []
    for a, b, cc, d in itertools.permutations(range(1, c.n + 1), 4):
        if c(a, b) == c(a, cc) != c(b, cc) == c(b, d) != c(cc, d) and c(a, d) != c(a, b):
            bad.append((a, b, cc, d))
    return bad


def find_inner_edge(c: EdgeColoring, vertices=None) -> tuple:
    verts = list(range(1, c.n + 1)) if vertices is None else sorted(vertices)
    for x, y in itertools.combinations(verts, 2):
        if _inner(c, verts, x, y):
            return (x, y)
    raise NoInnerEdge(f"no inner edge among vertices {verts}")


def reconstruct_tree(c: EdgeColoring) -> CompositionTree:
    """Gamma-labelled composition tree whose coloring is ``c``.

    Repeatedly take the smallest inner edge ``xy`` of the remaining vertex
    set, drop ``y``, solve the smaller instance and substitute
    ``x -> x * y`` with the edge's color.
    """
    if c.n < 2:
        raise ArityMismatch("reconstruction needs n >= 2")
    report = check_conditions(c)
    if not report.ok:
        raise ConditionViolation(f"(A) violations {report.a_violations}, (B) violations {report.b_violations}")
    cat = gamma_catalog()

    def build(verts):
        if len(verts) == 2:
            x, y = verts
            return Node(cat[c(x, y)].table, Leaf(x), Leaf(y))
        x, y = find_inner_edge(c, verts)
        sub = build([v for v in verts if v != y])
        mapping = {v: Leaf(v) for v in verts if v != y}
        mapping[x] = Node(cat[c(x, y)].table, Leaf(x), Leaf(y))
        return substitute(sub, mapping)

    return build(list(range(1, c.n + 1)))


def reconstruct(c: EdgeColoring) -> Quasigroup:
    return evaluate_tree(reconstruct_tree(c))


def check_sparse_agreement(f: Quasigroup, g: Quasigroup) -> bool:
    """Agreement on every tuple with at most two non-zero arguments."""
    if f.n != g.n:
        raise ArityMismatch("arity mismatch")
    sparse = (points(f.n) != 0).sum(axis=1) <= 2
    return bool((f.values[sparse] == g.values[sparse]).all())


def check_principal_hypothesis(q: Quasigroup, arities=(3, 4)) -> None:
    """Raise :class:`HypothesisFailed` on the first irreducible principal retract."""
    n = q.n
    for k in arities:
        if not 3 <= k < n:
            continue
        for fixed in itertools.combinations(range(1, n + 1), n - k):
            table = retract_table(q, fixed, 0)
            red = reducible_batch(table, k)
            if not red.all():
                code = int(np.flatnonzero(~red)[0])
                vals = {c: (code >> (2 * t)) & 3 for t, c in enumerate(fixed)}
                raise HypothesisFailed(vals, Quasigroup.trusted(k, table[code]))


def rebuild_pipeline(q: Quasigroup) -> tuple[CompositionTree, Isotopy]:
    """Recover a binary composition tree when all principal 3-/4-retracts are reducible.

    Returns the tree of the normalized isotope together with the isotopy
    ``T`` such that ``apply_isotopy(q, T)`` evaluates to the tree.
    """
    if q.n < 5:
        raise ArityMismatch("the rebuild pipeline needs n >= 5")
    check_principal_hypothesis(q)
    qn, t = normalize(q)
    mu = compute_coloring(qn)
    report = check_conditions(mu)
    assert report.ok, f"coloring of a reducible-retract quasigroup violates (A)/(B): {report}"
    g = reconstruct(mu)
    assert g == qn, "reconstruction disagrees with the normalized input"
    tree = decompose_tree(g)
    assert tree is not None
    return tree, t
