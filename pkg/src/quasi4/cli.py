"""``qg`` command line front end.

Exit codes: 0 success, 1 the checked property fails, 2 usage or format error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor

from . import analysis, coloring, enumeration, formats, semilinear
from .core import is_normalized, normalize
from .errors import LatinViolation, QuasigroupError
from .semilinear import BooleanFunction


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from exc


def _read_qg(path: str):
    text = _read(path)
    if formats.detect(text) != "qg":
        raise UsageError(f"{path}: expected a QG hypercube file")
    return formats.parse_qg(text)


def _shard(text: str | None):
    if text is None:
        return None
    try:
        k, m = (int(v) for v in text.split("/"))
    except ValueError:
        raise UsageError(f"--shard expects k/m, got {text!r}")
    if not (m >= 1 and 0 <= k < m):
        raise UsageError(f"--shard {text}: need 0 <= k < m")
    return (k, m)


def analyze_report(q, with_kappa: bool = False) -> dict:
    standard = semilinear.is_standardly_semilinear(q)
    witness = semilinear.is_semilinear(q)
    lam = semilinear.extract_lambda(q).as_mapping() if standard else None
    return {
        "n": q.n,
        "valid": True,
        "normalized": is_normalized(q),
        "reducible": analysis.is_permutably_reducible(q),
        "splits": [list(s.inner) for s in analysis.splits(q)],
        "standardly_semilinear": standard,
        "semilinear": witness is not None,
        "witness": None if witness is None else {"partitions": witness.name(), "complement": witness.complement},
        "lambda": lam,
        "kappa": analysis.kappa(q) if with_kappa and q.n >= 3 else None,
    }


def cmd_validate(args, out):
    try:
        q = _read_qg(args.file)
    except LatinViolation as exc:
        print(f"invalid: {exc}", file=out)
        return 1
    print(f"valid n={q.n}", file=out)
    return 0


def cmd_analyze(args, out):
    text = _read(args.file)
    try:
        q = formats.parse_qg(text)
        report = analyze_report(q, args.kappa)
        code = 0
    except LatinViolation as exc:
        n = int(re.match(r"\s*QG n=(\d+)", text).group(1))
        report = {key: None for key in ("n", "valid", "normalized", "reducible", "splits", "standardly_semilinear",
                                        "semilinear", "witness", "lambda", "kappa")}
        report.update(n=n, valid=False, error=str(exc))
        code = 1
    if args.json:
        print(json.dumps(report), file=out)
    else:
        for key, value in report.items():
            print(f"{key}: {json.dumps(value)}", file=out)
    return code


def cmd_construct(args, out):
    if args.kind == "lambda":
        if args.n is None:
            raise UsageError("construct lambda needs --n")
        bits = args.value
        if len(bits) == 1:
            bits = bits * 2**args.n
        if len(bits) != 2**args.n or set(bits) - {"0", "1"}:
            raise UsageError(f"BITS must be one bit or {2 ** args.n} bits, got {args.value!r}")
        q = semilinear.from_lambda(BooleanFunction.from_string(args.n, bits))
    else:
        q = analysis.evaluate_tree(formats.parse_tree(args.value))
    out.write(formats.format_qg(q))
    return 0


def cmd_decompose(args, out):
    q = _read_qg(args.file)
    tree = analysis.decompose_tree(q)
    if tree is None:
        print("not completely reducible", file=sys.stderr)
        return 1
    out.write(formats.format_tree(tree))
    return 0


def cmd_coloring(args, out):
    q = _read_qg(args.file)
    if q.n < 2:
        raise UsageError("colorings need n >= 2")
    if not is_normalized(q):
        q, _ = normalize(q)
        print("note: input normalized before coloring", file=sys.stderr)
    out.write(formats.format_coloring(coloring.compute_coloring(q)))
    return 0


def cmd_reconstruct(args, out):
    text = _read(args.file)
    c = formats.parse_coloring(text)
    report = coloring.check_conditions(c)
    if not report.ok:
        print(f"conditions fail: A={report.a_violations} B={report.b_violations}", file=sys.stderr)
        return 1
    out.write(formats.format_qg(coloring.reconstruct(c)))
    return 0


def _enumerate_lines(n, idx, classify):
    lines = []
    for q in enumeration.enumerate_all(n, (idx, 576) if n == 3 else None):
        if classify:
            rec = enumeration.classify(q, full=True)
            lines.append(json.dumps({
                "values": q.digits(),
                "reducible": rec.reducible,
                "semilinear": rec.semilinear,
                "standardly_semilinear": rec.standardly_semilinear,
            }))
        else:
            lines.append(q.digits())
    return lines


def cmd_enumerate(args, out):
    shard = _shard(args.shard)
    n = args.n
    if n not in (1, 2, 3):
        raise UsageError("enumerate supports --n 1, 2 or 3")
    if n == 3:
        units = list(enumeration.shard_indices(576, shard))
    else:
        units = [0] if shard is None or shard[0] == 0 else []
    work = [(n, i, args.classify) for i in units]
    total = 0
    if args.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            chunks = pool.map(_enumerate_unit, work, chunksize=8)
            total = _emit(chunks, out, args.count)
    else:
        total = _emit(map(_enumerate_unit, work), out, args.count)
    if args.count:
        print(json.dumps({"n": n, "total": total}), file=out)
    return 0


def _enumerate_unit(task):
    n, idx, classify = task
    return _enumerate_lines(n, idx, classify)


def _emit(chunks, out, count_only):
    total = 0
    for lines in chunks:
        total += len(lines)
        if not count_only:
            for line in lines:
                print(line, file=out)
    return total


def cmd_verify(args, out):
    if args.n not in (2, 3):
        raise UsageError("verify-theorem supports --n 2 or 3")
    report = enumeration.verify_theorem(args.n, jobs=args.jobs)
    print(report.to_json(), file=out)
    return 0 if report.neither == 0 else 1


def cmd_random(args, out):
    if args.kind == "tree":
        out.write(formats.format_tree(enumeration.random_tree(args.n, args.seed)))
    elif args.kind == "semilinear":
        out.write(formats.format_qg(enumeration.random_semilinear(args.n, args.seed)))
    else:
        out.write(formats.format_isotopy(enumeration.random_isotopy(args.n, args.seed)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qg", description="n-ary quasigroups of order 4")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the latin property of a QG file")
    s.add_argument("file", nargs="?", default="-")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("analyze", help="reducibility and semilinearity report")
    s.add_argument("file", nargs="?", default="-")
    s.add_argument("--json", action="store_true")
    s.add_argument("--kappa", action="store_true", help="also compute the largest irreducible retract arity")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("construct", help="build a quasigroup from a Boolean function or a tree")
    s.add_argument("kind", choices=["lambda", "tree"])
    s.add_argument("value", help="truth table bits (z1 fastest) or a tree expression")
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("decompose", help="binary composition tree of a completely reducible quasigroup")
    s.add_argument("file", nargs="?", default="-")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("coloring", help="edge coloring of the normalized isotope")
    s.add_argument("file", nargs="?", default="-")
    s.set_defaults(func=cmd_coloring)

    s = sub.add_parser("reconstruct", help="completely reducible quasigroup realising a coloring")
    s.add_argument("file", nargs="?", default="-")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("enumerate", help="list every n-quasigroup (n <= 3)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--classify", action="store_true")
    s.add_argument("--count", action="store_true", help="print only the total")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--shard", help="k/m: process bottom layers with index = k mod m")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("verify-theorem", help="exhaustively check reducible-or-semilinear")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("random", help="seeded random objects")
    s.add_argument("kind", choices=["tree", "semilinear", "isotopy"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_random)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, QuasigroupError, ValueError) as exc:
        print(f"qg {args.command}: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
