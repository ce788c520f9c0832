"""Semilinear quasigroups and their Boolean-function parametrisation.

A quasigroup is standardly semilinear when every point of its predicate
has an even number of coordinates in {2, 3}.  Such quasigroups are in
bijection with Boolean functions ``lam`` of n variables via

    hi(f(x)) = hi(x1) ^ ... ^ hi(xn)
    lo(f(x)) = lo(x1) ^ ... ^ lo(xn) ^ lam(hi(x1), ..., hi(xn)) ^ 1

Truth tables are indexed by ``sum(z_i * 2**(i-1))`` (``z1`` fastest).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .core import PI, Q, Quasigroup, points
from .errors import ArityMismatch, NotStandardlySemilinear, QuasigroupError

# hi, lo and hi^lo as lookup tables over {0,1,2,3}
PARTITIONS = {
    "A": np.array([0, 0, 1, 1], dtype=np.uint8),
    "B": np.array([0, 1, 0, 1], dtype=np.uint8),
    "C": np.array([0, 1, 1, 0], dtype=np.uint8),
}
_PART_NAMES = "ABC"
_PART_STACK = np.stack([PARTITIONS[p] for p in _PART_NAMES])


@dataclass(frozen=True)
class BooleanFunction:
    n: int
    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != 2**self.n:
            raise ArityMismatch(f"a Boolean function of {self.n} variables needs {2 ** self.n} bits, got {len(bits)}")
        if any(b not in (0, 1) for b in bits):
            raise QuasigroupError("truth table entries must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, n: int, s: str) -> "BooleanFunction":
        return cls(n, tuple(int(c) for c in s))

    @classmethod
    def constant(cls, n: int, value: int) -> "BooleanFunction":
        return cls(n, (value,) * 2**n)

    @classmethod
    def from_callable(cls, n: int, fn) -> "BooleanFunction":
        return cls(n, tuple(int(fn(*((t >> i) & 1 for i in range(n)))) & 1 for t in range(2**n)))

    def __call__(self, *zs) -> int:
        if len(zs) != self.n:
            raise ArityMismatch(f"expected {self.n} arguments")
        return self.bits[sum(int(z) << i for i, z in enumerate(zs))]

    def to_string(self) -> str:
        return "".join(map(str, self.bits))

    def as_mapping(self) -> dict:
        """``{"z1z2...": bit}`` with keys in lexicographic order."""
        return {"".join(map(str, zs)): self(*zs) for zs in itertools.product((0, 1), repeat=self.n)}


@dataclass(frozen=True)
class LIsotope:
    """The function ``XOR_i p_i(x_i) ^ complement ^ 1`` on predicate points."""

    partitions: tuple
    complement: int = 0

    def __post_init__(self):
        parts = tuple(self.partitions)
        if any(p not in PARTITIONS for p in parts):
            raise QuasigroupError(f"partitions must be drawn from A, B, C: {parts}")
        object.__setattr__(self, "partitions", parts)

    @property
    def n(self) -> int:
        return len(self.partitions) - 1

    def __call__(self, *zs) -> int:
        if len(zs) != len(self.partitions):
            raise ArityMismatch(f"expected {len(self.partitions)} coordinates")
        acc = self.complement ^ 1
        for p, z in zip(self.partitions, zs):
            acc ^= int(PARTITIONS[p][z])
        return acc

    def name(self) -> str:
        return "|".join(self.partitions)

    def table(self) -> np.ndarray:
        pts = points(self.n + 1)
        acc = np.full(len(pts), self.complement ^ 1, dtype=np.uint8)
        for c, p in enumerate(self.partitions):
            acc ^= PARTITIONS[p][pts[:, c]]
        return acc


def standard_L(n: int) -> LIsotope:
    return LIsotope(("A",) * (n + 1), 0)


@dataclass(frozen=True)
class AffinityClass:
    affine: bool
    coefficients: tuple | None = None


def eval_L(zs: Sequence[int]) -> int:
    return 1 ^ (sum(int(z) >> 1 for z in zs) & 1)


def is_standardly_semilinear(q: Quasigroup) -> bool:
    sup = q.support()
    return not np.bitwise_xor.reduce(sup >> 1, axis=1).any()


def extract_lambda(q: Quasigroup) -> BooleanFunction:
    if not is_standardly_semilinear(q):
        raise NotStandardlySemilinear("quasigroup is not majorized by L")
    sup = q.support()
    his = sup[:, 1:] >> 1
    cls = his @ (1 << np.arange(q.n, dtype=np.int64))
    lam = 1 ^ np.bitwise_xor.reduce(sup & 1, axis=1)
    bits = np.full(2**q.n, -1, dtype=np.int64)
    bits[cls] = lam
    # every hi-class must carry a single parity
    check = np.zeros(2**q.n, dtype=np.int64)
    np.add.at(check, cls, lam)
    sizes = np.bincount(cls, minlength=2**q.n)
    assert ((check == 0) | (check == sizes)).all(), "inconsistent parity inside a hi-class"
    return BooleanFunction(q.n, tuple(bits.tolist()))


def from_lambda(lam: BooleanFunction) -> Quasigroup:
    n = lam.n
    pts = points(n)
    h = np.bitwise_xor.reduce(pts >> 1, axis=1)
    lo_ = np.bitwise_xor.reduce(pts & 1, axis=1)
    cls = (pts >> 1) @ (1 << np.arange(n, dtype=np.int64))
    lbits = np.array(lam.bits, dtype=np.int64)[cls]
    return Quasigroup.trusted(n, 2 * h + (lo_ ^ lbits ^ 1))


def enumerate_L_isotopes(n: int) -> Iterator[LIsotope]:
    """All ``2 * 3**(n+1)`` distinct isotopes of L, partitions outermost."""
    for parts in itertools.product(_PART_NAMES, repeat=n + 1):
        for c in (0, 1):
            yield LIsotope(parts, c)


def _covering(q: Quasigroup, first_only: bool) -> list[LIsotope]:
    # L' covers the support iff XOR_i p_i(z_i) is constant there; that
    # constant is the complement bit, so each partition choice gives <= 1.
    sup = q.support()
    m = q.n + 1
    bits = _PART_STACK[:, sup.T]  # (3, m, P)
    found = []
    lead = min(m, 2)
    for head in itertools.product(range(3), repeat=lead):
        base = np.zeros(sup.shape[0], dtype=np.uint8)
        for c, t in enumerate(head):
            base ^= bits[t, c]
        tail = m - lead
        if tail:
            combos = np.array(list(itertools.product(range(3), repeat=tail)), dtype=np.int64)
            acc = np.broadcast_to(base, (len(combos), sup.shape[0])).copy()
            for k in range(tail):
                acc ^= bits[combos[:, k], lead + k]
        else:
            combos = np.zeros((1, 0), dtype=np.int64)
            acc = base[None, :]
        const = (acc == acc[:, :1]).all(axis=1)
        for r in np.flatnonzero(const):
            parts = tuple(_PART_NAMES[t] for t in head) + tuple(_PART_NAMES[t] for t in combos[r])
            found.append(LIsotope(parts, int(acc[r, 0])))
            if first_only:
                return found
    return found


def is_semilinear(q: Quasigroup) -> LIsotope | None:
    """A majorizing isotope of L, or ``None`` when ``q`` is not semilinear."""
    found = _covering(q, first_only=True)
    return found[0] if found else None


def majorizing_isotopes(q: Quasigroup) -> list[LIsotope]:
    return _covering(q, first_only=False)


def count_semilinear(n: int) -> int:
    if n < 1:
        raise ArityMismatch("n must be >= 1")
    return 3 ** (n + 1) * 2 ** (2**n + 1) - 8 * 6**n


def anf(lam: BooleanFunction) -> list[int]:
    coeffs = list(lam.bits)
    for i in range(lam.n):
        step = 1 << i
        for mask in range(len(coeffs)):
            if mask & step:
                coeffs[mask] ^= coeffs[mask ^ step]
    return coeffs


def affinity(lam: BooleanFunction) -> AffinityClass:
    coeffs = anf(lam)
    if any(c for mask, c in enumerate(coeffs) if bin(mask).count("1") > 1):
        return AffinityClass(False)
    return AffinityClass(True, (coeffs[0],) + tuple(coeffs[1 << i] for i in range(lam.n)))


ALL_PERMS = tuple(itertools.permutations(range(Q)))
_PERM_ARRAY = np.array(ALL_PERMS, dtype=np.int64)


def autotopy_pairs(q: Quasigroup, i: int, j: int) -> list[tuple]:
    """All ``(mu, nu)`` leaving the predicate invariant when applied at coordinates i, j."""
    n = q.n
    if i == j or not (0 <= i <= n and 0 <= j <= n):
        raise ArityMismatch(f"need distinct predicate coordinates in 0..{n}")
    sup = q.support()
    w = Q ** np.arange(n + 1, dtype=np.int64)
    member = np.zeros(Q ** (n + 1), dtype=bool)
    member[sup @ w] = True
    base = sup @ w - sup[:, i] * w[i] - sup[:, j] * w[j]
    mi = _PERM_ARRAY[:, sup[:, i]] * w[i]
    nj = _PERM_ARRAY[:, sup[:, j]] * w[j]
    ok = member[base[None, None, :] + mi[:, None, :] + nj[None, :, :]].all(axis=2)
    return [(ALL_PERMS[a], ALL_PERMS[b]) for a, b in zip(*np.nonzero(ok))]


def has_pi_autotopy(q: Quasigroup, i: int, j: int) -> bool:
    return (PI, PI) in autotopy_pairs(q, i, j)
