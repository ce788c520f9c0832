"""Exhaustive enumeration for n <= 3, classification and seeded generators."""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator

import numpy as np

from . import analysis, semilinear
from .analysis import CompositionTree, Leaf, Node, Split, evaluate_tree, first_split, try_split
from .coloring import gamma_catalog
from .core import Isotopy, Quasigroup, apply_isotopy, compose
from .errors import UnsupportedArity
from .semilinear import BooleanFunction, LIsotope

FULL = 15


# -- n <= 2 ------------------------------------------------------------------

def _squares(forbid=None) -> Iterator[list]:
    """Latin squares in index order (cell ``x1 + 4*x2``) avoiding per-cell masks."""
    forbid = forbid or [0] * 16
    cells = [0] * 16
    along1 = [0] * 4  # used values on the line x2 = const
    along2 = [0] * 4  # used values on the line x1 = const

    def fill(t):
        if t == 16:
            yield list(cells)
            return
        x1, x2 = t & 3, t >> 2
        free = FULL & ~(along1[x2] | along2[x1] | forbid[t])
        while free:
            bit = free & -free
            free ^= bit
            along1[x2] |= bit
            along2[x1] |= bit
            cells[t] = bit.bit_length() - 1
            yield from fill(t + 1)
            along1[x2] ^= bit
            along2[x1] ^= bit

    yield from fill(0)


@lru_cache(maxsize=None)
def latin_squares() -> tuple:
    return tuple(tuple(s) for s in _squares())


# -- n = 3 by layer extension ------------------------------------------------

def _layers_from(base) -> Iterator[list]:
    # layers L1..L3 stacked on L0 = base; the per-cell mask stores every
    # value already used in that cell by an earlier layer
    used = [1 << v for v in base]

    def extend(depth, acc):
        if depth == 4:
            yield acc
            return
        for layer in _squares(used):
            for t, v in enumerate(layer):
                used[t] |= 1 << v
            yield from extend(depth + 1, acc + layer)
            for t, v in enumerate(layer):
                used[t] ^= 1 << v

    yield from extend(1, list(base))


def shard_indices(total: int, shard: tuple | None) -> range:
    """Indices owned by shard ``k`` of ``m`` (0-based ``k``, round robin)."""
    if shard is None:
        return range(total)
    k, m = shard
    if not (m >= 1 and 0 <= k < m):
        raise ValueError(f"invalid shard {k}/{m}")
    return range(k, total, m)


def enumerate_all(n: int, shard: tuple | None = None) -> Iterator[Quasigroup]:
    """Every order-4 n-quasigroup exactly once, in a fixed order.

    For n = 3 the work is partitioned by the bottom layer (576 shards).
    """
    if n == 1:
        for p in itertools.permutations(range(4)):
            yield Quasigroup.trusted(1, p)
    elif n == 2:
        for s in latin_squares():
            yield Quasigroup.trusted(2, s)
    elif n == 3:
        squares = latin_squares()
        for idx in shard_indices(len(squares), shard):
            for cube in _layers_from(squares[idx]):
                yield Quasigroup.trusted(3, cube)
    else:
        raise UnsupportedArity(f"exhaustive enumeration is limited to n <= 3, got {n}")


def enumerate_cubes_cellwise() -> Iterator[Quasigroup]:
    """Independent n = 3 enumerator: cell-by-cell fill with one mask per line."""
    cells = [0] * 64
    m1 = [0] * 16  # lines along x1, keyed by (x2, x3)
    m2 = [0] * 16  # lines along x2, keyed by (x1, x3)
    m3 = [0] * 16  # lines along x3, keyed by (x1, x2)

    def fill(t):
        if t == 64:
            yield Quasigroup.trusted(3, cells)
            return
        x1, x2, x3 = t & 3, (t >> 2) & 3, t >> 4
        a, b, c = x2 + 4 * x3, x1 + 4 * x3, x1 + 4 * x2
        free = FULL & ~(m1[a] | m2[b] | m3[c])
        while free:
            bit = free & -free
            free ^= bit
            m1[a] |= bit
            m2[b] |= bit
            m3[c] |= bit
            cells[t] = bit.bit_length() - 1
            yield from fill(t + 1)
            m1[a] ^= bit
            m2[b] ^= bit
            m3[c] ^= bit

    yield from fill(0)


# -- classification ----------------------------------------------------------

@dataclass
class ClassificationRecord:
    reducible: bool
    split: Split | None
    semilinear: bool | None
    witness: LIsotope | None
    standardly_semilinear: bool
    kappa: int | None = None


def classify(q: Quasigroup, full: bool = False, with_kappa: bool = False) -> ClassificationRecord:
    """Reducibility first; semilinearity only when still open or ``full`` is set."""
    split = first_split(q)
    standard = semilinear.is_standardly_semilinear(q)
    if standard:
        witness = semilinear.standard_L(q.n)
        semi = True
    elif split is None or full:
        witness = semilinear.is_semilinear(q)
        semi = witness is not None
    else:
        witness, semi = None, None
    k = analysis.kappa(q) if with_kappa and q.n >= 3 else None
    return ClassificationRecord(split is not None, split, semi, witness, standard, k)


REPORT_KEYS = ("n", "total", "reducible_only", "semilinear_only", "both", "neither",
               "semilinear_total", "formula_total")


@dataclass
class TheoremReport:
    n: int
    total: int = 0
    reducible_only: int = 0
    semilinear_only: int = 0
    both: int = 0
    neither: int = 0
    semilinear_total: int = 0
    formula_total: int = 0

    def add(self, rec: ClassificationRecord):
        self.total += 1
        if rec.reducible and rec.semilinear:
            self.both += 1
        elif rec.reducible:
            self.reducible_only += 1
        elif rec.semilinear:
            self.semilinear_only += 1
        else:
            self.neither += 1
        self.semilinear_total += bool(rec.semilinear)

    def merge(self, other: "TheoremReport"):
        for key in REPORT_KEYS[1:-1]:
            setattr(self, key, getattr(self, key) + getattr(other, key))

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in REPORT_KEYS}

    def to_json(self) -> str:
        return json.dumps(self.as_dict())


def _verify_shard(args) -> TheoremReport:
    n, shard = args
    rep = TheoremReport(n)
    for q in enumerate_all(n, shard):
        rep.add(classify(q, full=True))
    return rep


def verify_theorem(n: int, jobs: int = 1, shard: tuple | None = None) -> TheoremReport:
    """Classify every n-quasigroup; the theorem holds iff ``neither == 0``."""
    if n not in (2, 3):
        raise UnsupportedArity(f"theorem verification covers n in {{2, 3}}, got {n}")
    report = TheoremReport(n, formula_total=semilinear.count_semilinear(n))
    if n == 2 or jobs <= 1:
        report.merge(_verify_shard((n, shard)))
        return report
    # split this process's share into round-robin sub-shards
    k0, m0 = shard if shard is not None else (0, 1)
    parts = jobs * 4
    tasks = [(n, (k0 + m0 * j, m0 * parts)) for j in range(parts)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_verify_shard, tasks):
            report.merge(part)
    return report


# -- seeded generators -------------------------------------------------------

def _rng(seed):
    return np.random.default_rng(seed)


def _catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


def _random_shape(rng, leaves: int):
    if leaves == 1:
        return None
    weights = [_catalan(k - 1) * _catalan(leaves - k - 1) for k in range(1, leaves)]
    total = sum(weights)
    k = 1 + int(rng.choice(len(weights), p=[w / total for w in weights]))
    return (_random_shape(rng, k), _random_shape(rng, leaves - k))


def random_tree(n: int, seed) -> CompositionTree:
    """Uniform tree shape, uniform Gamma labels, uniform leaf order."""
    if n < 2:
        raise ValueError("random trees need n >= 2")
    rng = _rng(seed)
    shape = _random_shape(rng, n)
    order = iter((rng.permutation(n) + 1).tolist())
    cat = gamma_catalog()

    def label(s):
        if s is None:
            return Leaf(next(order))
        left = label(s[0])
        right = label(s[1])
        return Node(cat[int(rng.integers(4))].table, left, right)

    return label(shape)


def random_permutation(rng) -> tuple:
    return tuple(int(v) for v in rng.permutation(4))


def random_isotopy(n: int, seed) -> Isotopy:
    rng = _rng(seed)
    return Isotopy(tuple(random_permutation(rng) for _ in range(n + 1)))


def random_semilinear(n: int, seed) -> Quasigroup:
    rng = _rng(seed)
    lam = BooleanFunction(n, tuple(int(b) for b in rng.integers(0, 2, size=2**n)))
    return apply_isotopy(semilinear.from_lambda(lam), random_isotopy(n, rng))


def random_binary(seed) -> Quasigroup:
    rng = _rng(seed)
    op = gamma_catalog()[int(rng.integers(4))].table
    return apply_isotopy(op, random_isotopy(2, rng))


def random_composed(n: int, seed) -> Quasigroup:
    """Isotope of a random Gamma tree: completely reducible, not normalized."""
    rng = _rng(seed)
    return apply_isotopy(evaluate_tree(random_tree(n, rng)), random_isotopy(n, rng))


def n4_family_check(samples: int = 1000, seed: int = 0) -> dict:
    """Classify three constructed families of 4-quasigroups with known outcomes."""
    rng = _rng(seed)
    trees = semi = mixed_red = mixed_split = neither = 0
    for _ in range(samples):
        rec = classify(random_composed(4, rng))
        trees += rec.reducible
        neither += not (rec.reducible or rec.semilinear)
    for _ in range(samples):
        q = random_semilinear(4, rng)
        semi += semilinear.is_semilinear(q) is not None
    for _ in range(samples):
        h = random_semilinear(3, rng)
        g = random_binary(rng)
        sigma = tuple(int(v) for v in rng.permutation(4) + 1)
        f = compose(h, g, sigma)
        rec = classify(f)
        mixed_red += rec.reducible
        known = try_split(f, sorted(sigma[:2]))
        mixed_split += (known is not None and known.recompose() == f
                        and rec.split is not None and rec.split.recompose() == f)
        neither += not (rec.reducible or rec.semilinear)
    report = {
        "samples": samples,
        "seed": seed,
        "trees_reducible": trees,
        "semilinear_witnessed": semi,
        "mixed_reducible": mixed_red,
        "mixed_split_recovered": mixed_split,
        "neither": neither,
    }
    report["all_predicted"] = (trees == semi == mixed_red == mixed_split == samples) and neither == 0
    return report
