"""Text formats: hypercubes, Boolean functions, colorings, trees, isotopies.

Every ``format_*`` output parses back to an equal value, and parsing a
canonically printed file and printing it again reproduces the bytes.
"""

from __future__ import annotations

import re

from .analysis import CompositionTree, Leaf, Node, leaves
from .coloring import EdgeColoring, edges, from_row_major, gamma_catalog, gamma_index, row_major
from .core import Isotopy, Quasigroup, validate
from .errors import FormatError, LengthMismatch, MissingEdge, QuasigroupError
from .semilinear import BooleanFunction


def _header(text: str, tag: str, pattern: str):
    lines = text.split("\n")
    m = re.fullmatch(pattern, lines[0].strip()) if lines else None
    if m is None:
        raise FormatError(f"expected header '{tag}'", line=1, column=1)
    return m, lines


def _tokens(lines, start_line=2):
    for ln, line in enumerate(lines[start_line - 1:], start=start_line):
        for m in re.finditer(r"\S+", line):
            yield m.group(0), ln, m.start() + 1


# -- hypercube ---------------------------------------------------------------

def format_qg(q: Quasigroup) -> str:
    digits = [str(v) for v in q.values.tolist()]
    width = min(16, len(digits))
    rows = [" ".join(digits[k:k + width]) for k in range(0, len(digits), width)]
    return f"QG n={q.n} q=4\n" + "\n".join(rows) + "\n"


def parse_qg(text: str) -> Quasigroup:
    m, lines = _header(text, "QG n=<n> q=4", r"QG n=(\d+) q=(\d+)")
    n, q = int(m.group(1)), int(m.group(2))
    if q != 4:
        raise FormatError(f"only order q=4 is supported, got q={q}", line=1)
    if n < 1:
        raise FormatError("arity must be >= 1", line=1)
    expected = 4**n
    values = []
    last = (1, len(lines[0]) + 1)
    for tok, ln, col in _tokens(lines):
        if len(values) == expected:
            raise FormatError(f"trailing data {tok!r} after {expected} digits", line=ln, column=col)
        if not re.fullmatch(r"\d", tok):
            raise FormatError(f"expected a single digit, got {tok!r}", line=ln, column=col)
        if int(tok) > 3:
            raise FormatError(f"value {tok} out of range 0..3", line=ln, column=col)
        values.append(int(tok))
        last = (ln, col + 1)
    if len(values) != expected:
        raise LengthMismatch(expected, len(values), position=f"line {last[0]}, column {last[1]}")
    return validate(n, values)


# -- Boolean functions -------------------------------------------------------

def format_bf(lam: BooleanFunction) -> str:
    return f"BF n={lam.n}\n{lam.to_string()}\n"


def parse_bf(text: str) -> BooleanFunction:
    m, lines = _header(text, "BF n=<n>", r"BF n=(\d+)")
    n = int(m.group(1))
    toks = list(_tokens(lines))
    if len(toks) != 1:
        where = toks[1][1:] if len(toks) > 1 else (len(lines), 1)
        raise FormatError(f"expected one bit string of length {2 ** n}", *where)
    tok, ln, col = toks[0]
    bad = re.search(r"[^01]", tok)
    if bad:
        raise FormatError(f"unexpected character {bad.group(0)!r}", line=ln, column=col + bad.start())
    if len(tok) != 2**n:
        raise LengthMismatch(2**n, len(tok), position=f"line {ln}, column {col + len(tok)}")
    return BooleanFunction.from_string(n, tok)


# -- colorings ---------------------------------------------------------------

def format_coloring(c: EdgeColoring) -> str:
    body = "".join(f"{i} {j} g{k}\n" for (i, j), k in c.items())
    return f"COLORING n={c.n}\n" + body


def parse_coloring(text: str) -> EdgeColoring:
    m, lines = _header(text, "COLORING n=<n>", r"COLORING n=(\d+)")
    n = int(m.group(1))
    if n < 2:
        raise FormatError("a coloring needs n >= 2", line=1)
    seen = {}
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        lm = re.fullmatch(r"\s*(\d+)\s+(\d+)\s+g([0-3])\s*", line)
        if lm is None:
            raise FormatError(f"expected 'i j g<k>', got {line.strip()!r}", line=ln, column=1)
        i, j, k = int(lm.group(1)), int(lm.group(2)), int(lm.group(3))
        if not (1 <= i < j <= n):
            raise FormatError(f"bad edge {i} {j} for n={n}", line=ln, column=1)
        if (i, j) in seen:
            raise FormatError(f"duplicate edge {{{i},{j}}}", line=ln, column=1)
        seen[(i, j)] = k
    for e in edges(n):
        if e not in seen:
            raise MissingEdge(e)
    return EdgeColoring.from_mapping(n, seen)


# -- composition trees -------------------------------------------------------

def format_op(op: Quasigroup) -> str:
    k = gamma_index(op)
    return f"g{k}" if k is not None else "t:" + row_major(op)


def format_tree(tree: CompositionTree) -> str:
    def walk(t):
        if isinstance(t, Leaf):
            return f"x{t.var}"
        return f"({format_op(t.op)} {walk(t.left)} {walk(t.right)})"

    return walk(tree) + "\n"


_TREE_TOKEN = re.compile(r"\s*(?:(\()|(\))|(g[0-3]\b|t:[0-3]{16}\b)|(x[1-9]\d*\b)|(\S+))")


def parse_tree(text: str) -> CompositionTree:
    toks = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TREE_TOKEN.match(stripped, pos)
        kind = m.lastindex
        start = m.start(kind)
        line = stripped.count("\n", 0, start) + 1
        col = start - (stripped.rfind("\n", 0, start) + 1) + 1
        if kind == 5:
            raise FormatError(f"unexpected token {m.group(5)!r}", line=line, column=col)
        toks.append((kind, m.group(kind), line, col))
        pos = m.end()
    it = iter(toks)

    def nxt():
        tok = next(it, None)
        if tok is None:
            raise FormatError("unexpected end of expression", line=stripped.count("\n") + 1)
        return tok

    def expr():
        kind, val, line, col = nxt()
        if kind == 4:
            return Leaf(int(val[1:]))
        if kind != 1:
            raise FormatError(f"expected '(' or a variable, got {val!r}", line=line, column=col)
        kind, val, line, col = nxt()
        if kind != 3:
            raise FormatError(f"expected an operation, got {val!r}", line=line, column=col)
        op = gamma_catalog()[int(val[1])].table if val.startswith("g") else from_row_major(val[2:])
        left = expr()
        right = expr()
        kind, val, line, col = nxt()
        if kind != 2:
            raise FormatError(f"expected ')', got {val!r}", line=line, column=col)
        return Node(op, left, right)

    tree = expr()
    extra = next(it, None)
    if extra is not None:
        raise FormatError(f"trailing token {extra[1]!r}", line=extra[2], column=extra[3])
    vs = leaves(tree)
    if sorted(vs) != list(range(1, len(vs) + 1)):
        raise FormatError(f"variables must be x1..x{len(vs)} each exactly once")
    return tree


# -- isotopies ---------------------------------------------------------------

def format_isotopy(t: Isotopy) -> str:
    return f"ISOTOPY n={t.n}\n" + "".join("".join(map(str, tau)) + "\n" for tau in t.taus)


def parse_isotopy(text: str) -> Isotopy:
    m, lines = _header(text, "ISOTOPY n=<n>", r"ISOTOPY n=(\d+)")
    n = int(m.group(1))
    toks = list(_tokens(lines))
    if len(toks) != n + 1:
        raise LengthMismatch(n + 1, len(toks))
    taus = []
    for tok, ln, col in toks:
        if not re.fullmatch(r"[0-3]{4}", tok):
            raise FormatError(f"expected a permutation like 1032, got {tok!r}", line=ln, column=col)
        taus.append(tuple(int(ch) for ch in tok))
    try:
        return Isotopy(tuple(taus))
    except QuasigroupError as exc:
        raise FormatError(str(exc)) from exc


# -- dispatch ----------------------------------------------------------------

def detect(text: str) -> str:
    head = text.lstrip()
    for tag, kind in (("QG", "qg"), ("BF", "bf"), ("COLORING", "coloring"), ("ISOTOPY", "isotopy")):
        if re.match(tag + r"\b", head):
            return kind
    if head.startswith("(") or head.startswith("x"):
        return "tree"
    raise FormatError("unrecognised file header", line=1, column=1)


PARSERS = {
    "qg": parse_qg,
    "bf": parse_bf,
    "coloring": parse_coloring,
    "tree": parse_tree,
    "isotopy": parse_isotopy,
}


def parse_any(text: str):
    return PARSERS[detect(text)](text)


def format_any(value) -> str:
    if isinstance(value, Quasigroup):
        return format_qg(value)
    if isinstance(value, BooleanFunction):
        return format_bf(value)
    if isinstance(value, EdgeColoring):
        return format_coloring(value)
    if isinstance(value, Isotopy):
        return format_isotopy(value)
    if isinstance(value, (Leaf, Node)):
        return format_tree(value)
    raise TypeError(f"no text format for {type(value).__name__}")
