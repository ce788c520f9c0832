"""Order-4 n-ary quasigroups stored as dense value arrays.

Arguments are indexed 1..n; the flat index of ``(x1, ..., xn)`` is
``sum(x_i * 4**(i-1))`` so ``x1`` varies fastest.  Predicate coordinates are
0..n with 0 the output slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .errors import ArityMismatch, LatinViolation, LengthMismatch, QuasigroupError, ValueOutOfRange

Q = 4
ID = (0, 1, 2, 3)
PI = (1, 0, 3, 2)


def hi(x):
    return x >> 1


def lo(x):
    return x & 1


@lru_cache(maxsize=None)
def points(n: int) -> np.ndarray:
    """All argument tuples in index order, shape ``(4**n, n)``."""
    idx = np.arange(Q**n, dtype=np.int64)
    out = np.empty((Q**n, n), dtype=np.int64)
    for i in range(n):
        out[:, i] = (idx >> (2 * i)) & 3
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _weights(n: int) -> np.ndarray:
    w = Q ** np.arange(n, dtype=np.int64)
    w.setflags(write=False)
    return w


def index_of(xs: Sequence[int]) -> int:
    return sum(int(x) << (2 * i) for i, x in enumerate(xs))


# -- permutations -----------------------------------------------------------

def check_permutation(p: Sequence[int]) -> tuple[int, ...]:
    p = tuple(int(v) for v in p)
    if sorted(p) != [0, 1, 2, 3]:
        raise QuasigroupError(f"{p} is not a permutation of 0..3")
    return p


def perm_inverse(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * 4
    for a, b in enumerate(p):
        inv[b] = a
    return tuple(inv)


def perm_compose(p: Sequence[int], r: Sequence[int]) -> tuple[int, ...]:
    """``p after r``: x -> p[r[x]]."""
    return tuple(p[r[x]] for x in range(4))


@dataclass(frozen=True)
class Isotopy:
    """n+1 permutations; ``taus[0]`` acts on the output coordinate."""

    taus: tuple

    def __post_init__(self):
        taus = tuple(check_permutation(t) for t in self.taus)
        if len(taus) < 2:
            raise QuasigroupError("an isotopy needs at least two permutations")
        object.__setattr__(self, "taus", taus)

    @property
    def n(self) -> int:
        return len(self.taus) - 1

    @classmethod
    def identity(cls, n: int) -> "Isotopy":
        return cls((ID,) * (n + 1))

    def inverse(self) -> "Isotopy":
        return Isotopy(tuple(perm_inverse(t) for t in self.taus))


# -- the quasigroup value -------------------------------------------------

class Quasigroup:
    """Immutable latin hypercube of order 4.

    Construct through :func:`validate` (or ``Quasigroup(n, raw)``, which
    validates too).  ``Quasigroup.trusted`` skips the latin check and is
    meant for values produced by operations known to preserve it.
    """

    __slots__ = ("n", "values", "_key")

    def __init__(self, n: int, raw):
        q = validate(n, raw)
        self.n, self.values, self._key = q.n, q.values, q._key

    @classmethod
    def trusted(cls, n: int, values) -> "Quasigroup":
        obj = object.__new__(cls)
        arr = np.array(values, dtype=np.uint8).reshape(-1)
        arr.setflags(write=False)
        obj.n = int(n)
        obj.values = arr
        obj._key = arr.tobytes()
        return obj

    def __eq__(self, other):
        if not isinstance(other, Quasigroup):
            return NotImplemented
        return self.n == other.n and self._key == other._key

    def __hash__(self):
        return hash((self.n, self._key))

    def __repr__(self):
        body = "".join(str(v) for v in self.values[:64])
        more = "..." if len(self.values) > 64 else ""
        return f"Quasigroup(n={self.n}, {body}{more})"

    def grid(self) -> np.ndarray:
        """View as an n-dimensional array indexed ``[x1, ..., xn]``."""
        return self.values.reshape((Q,) * self.n, order="F")

    def digits(self) -> str:
        return "".join(str(v) for v in self.values.tolist())

    # convenience wrappers
    def __call__(self, *xs):
        return evaluate(self, xs)

    def support(self) -> np.ndarray:
        """Predicate support as ``(4**n, n+1)`` rows ``(z0, z1, ..., zn)``."""
        pts = points(self.n)
        return np.column_stack([self.values.astype(np.int64), pts])


def validate(n: int, raw) -> Quasigroup:
    """Check a raw value array and wrap it as a :class:`Quasigroup`.

    Raises ``LengthMismatch``, ``ValueOutOfRange`` or ``LatinViolation`` for
    the first failing line (coordinates scanned 1..n, lines in index order).
    """
    n = int(n)
    if n < 1:
        raise ArityMismatch(f"arity must be >= 1, got {n}")
    seq = list(raw) if not isinstance(raw, np.ndarray) else raw.reshape(-1).tolist()
    if len(seq) != Q**n:
        raise LengthMismatch(Q**n, len(seq))
    for k, v in enumerate(seq):
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or not 0 <= v <= 3:
            raise ValueOutOfRange(k, v)
    arr = np.array(seq, dtype=np.uint8)
    grid = arr.reshape((Q,) * n, order="F")
    masks = np.left_shift(np.uint8(1), grid)
    for axis in range(n):
        ok = np.bitwise_or.reduce(masks, axis=axis) == 15
        if not ok.all():
            bad = np.flatnonzero(~ok.ravel(order="F"))[0]
            others = np.unravel_index(bad, ok.shape, order="F")
            fixed = [int(v) for v in others]
            fixed.insert(axis, None)
            raise LatinViolation(axis + 1, fixed)
    return Quasigroup.trusted(n, arr)


def _check_tuple(q: Quasigroup, xs, length):
    if len(xs) != length:
        raise ArityMismatch(f"expected a tuple of length {length}, got {len(xs)}")
    for x in xs:
        if not 0 <= int(x) <= 3:
            raise ValueOutOfRange(None, x)


def evaluate(q: Quasigroup, xs: Sequence[int]) -> int:
    _check_tuple(q, xs, q.n)
    return int(q.values[index_of(xs)])


def predicate(q: Quasigroup, zs: Sequence[int]) -> int:
    _check_tuple(q, zs, q.n + 1)
    return int(int(zs[0]) == evaluate(q, zs[1:]))


def solve_for(q: Quasigroup, i: int, fixed: Sequence[int]) -> int:
    """Value of predicate coordinate ``i`` given the other n coordinates.

    ``fixed`` lists the remaining predicate coordinates in increasing order.
    """
    if not 0 <= i <= q.n:
        raise ArityMismatch(f"coordinate {i} out of range 0..{q.n}")
    _check_tuple(q, fixed, q.n)
    zs = list(fixed)
    zs.insert(i, None)
    if i == 0:
        return evaluate(q, zs[1:])
    for y in range(Q):
        zs[i] = y
        if evaluate(q, zs[1:]) == zs[0]:
            return y
    raise AssertionError("latin property violated")


def retract_table(q: Quasigroup, fixed_coords: Sequence[int], output: int) -> np.ndarray:
    """Every retract obtained by fixing ``fixed_coords`` at once.

    Row ``c`` of the result is the retract whose fixed values encode to
    ``c`` (first fixed coordinate fastest); columns run over the remaining
    non-output coordinates in index order.
    """
    fixed_coords = sorted(fixed_coords)
    free = [c for c in range(q.n + 1) if c not in fixed_coords and c != output]
    if output in fixed_coords or not 0 <= output <= q.n:
        raise QuasigroupError(f"output coordinate {output} must be free")
    if not free:
        raise QuasigroupError("retract would have arity 0")
    sup = q.support()
    row = sup[:, fixed_coords] @ _weights(len(fixed_coords))
    col = sup[:, free] @ _weights(len(free))
    out = np.empty((Q ** len(fixed_coords), Q ** len(free)), dtype=np.uint8)
    out[row, col] = sup[:, output]
    return out


def retract(q: Quasigroup, fixings: Mapping[int, int], output: int = 0) -> Quasigroup:
    """Fix predicate coordinates and read ``output`` as the new result.

    Remaining free coordinates become arguments in increasing order.
    """
    if not 1 <= len(fixings) <= q.n - 1:
        raise QuasigroupError(f"need between 1 and {q.n - 1} fixings, got {len(fixings)}")
    for c, v in fixings.items():
        if not 0 <= c <= q.n or not 0 <= v <= 3:
            raise QuasigroupError(f"bad fixing {c}={v}")
    coords = sorted(fixings)
    table = retract_table(q, coords, output)
    code = index_of([fixings[c] for c in coords])
    return Quasigroup.trusted(q.n - len(coords), table[code])


def apply_isotopy(q: Quasigroup, t: Isotopy) -> Quasigroup:
    """``f(x1..xn) = tau0^-1 Q(tau1 x1, ..., taun xn)``."""
    if t.n != q.n:
        raise ArityMismatch(f"isotopy has {t.n + 1} permutations, quasigroup arity is {q.n}")
    pts = points(q.n)
    taus = np.array(t.taus, dtype=np.int64)
    moved = np.empty_like(pts)
    for i in range(q.n):
        moved[:, i] = taus[i + 1][pts[:, i]]
    vals = q.values[moved @ _weights(q.n)]
    inv0 = np.array(perm_inverse(t.taus[0]), dtype=np.uint8)
    return Quasigroup.trusted(q.n, inv0[vals])


def is_normalized(q: Quasigroup) -> bool:
    for i in range(q.n):
        for a in range(Q):
            if q.values[a << (2 * i)] != a:
                return False
    return True


def normalize(q: Quasigroup) -> tuple[Quasigroup, Isotopy]:
    """Isotope with ``f(0,..,a,..,0) = a`` in every position, plus the witness."""
    tau0 = tuple(int(q.values[a]) for a in range(Q))
    taus = [tau0, ID]
    inv0 = perm_inverse(tau0)
    for i in range(1, q.n):
        # beta(b) = tau0^-1 f(0..b..0); beta(0) = 0 so earlier positions keep
        beta = tuple(inv0[int(q.values[b << (2 * i)])] for b in range(Q))
        taus.append(perm_inverse(beta))
    t = Isotopy(tuple(taus))
    return apply_isotopy(q, t), t


def compose(h: Quasigroup, g: Quasigroup, sigma: Sequence[int] | None = None) -> Quasigroup:
    """``f(x) = h(g(x_s1, ..., x_sm), x_s(m+1), ..., x_sn)`` for 1-based ``sigma``."""
    m = g.n
    n = h.n + m - 1
    if sigma is None:
        sigma = range(1, n + 1)
    sigma = [int(s) for s in sigma]
    if sorted(sigma) != list(range(1, n + 1)):
        raise ArityMismatch(f"sigma must be a permutation of 1..{n}, got {sigma}")
    if not 2 <= m <= n - 1:
        raise ArityMismatch(f"inner arity {m} must lie in 2..{n - 1}")
    pts = points(n)
    cols = np.array(sigma, dtype=np.int64) - 1
    inner = g.values[pts[:, cols[:m]] @ _weights(m)].astype(np.int64)
    outer_idx = inner + (pts[:, cols[m:]] @ _weights(n - m)) * Q
    return Quasigroup.trusted(n, h.values[outer_idx])


def from_function(n: int, fn) -> Quasigroup:
    """Tabulate a Python callable of n arguments and validate the result."""
    return validate(n, [fn(*map(int, x)) for x in points(n)])


def xor_sum(n: int) -> Quasigroup:
    return Quasigroup.trusted(n, np.bitwise_xor.reduce(points(n), axis=1))


def add_mod4(n: int) -> Quasigroup:
    return Quasigroup.trusted(n, points(n).sum(axis=1) % 4)
