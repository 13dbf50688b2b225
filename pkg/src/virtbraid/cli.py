"""Command-line front end.

Exit status: 0 success, 1 failed verification, illegal move or inconclusive
search, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .braiding import braid_from_gauss
from .gauss import GaussData, canonical_code, emit_gauss, gauss_of_closure, parse_gauss
from .invariant import load_table, q_of_gauss
from .laurent import LaurentPoly, format_poly
from .moves import (
    Mode,
    MoveError,
    MoveStep,
    SearchLimits,
    apply_step,
    equiv_search,
    format_witness,
    parse_witness,
    replay,
)
from .words import BraidWord, format_word, free_reduce, parse_word, permutation, writhe

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

FORMATS = """\
text formats:
  braid word    degree <m>; <tokens>     tokens s<i> (sigma_i), S<i> (inverse), t<i> (virtual)
                e.g.  degree 3; t1 S1 t2 t1 s1 t2
  gauss data    crossing <id> <+|->
                arc <id>.<3|4> -> <id>.<1|2>
                loops <k>
  polynomial    ascending exponents, e.g.  q^-3 - q^-1 - q + q^3
  move step     VM0 <relation> i=<i> [j=<j>] v=<variant> at=<pos> <ltr|rtl>
                VM1 degree <m>; <conjugator tokens>
                VM2 <positive|negative|virtual> <stabilize|destabilize>
                VM3 <left|right> <forward|backward>
                LSTAB <positive|negative|virtual> [stabilize|destabilize]
                (WM0..WM2 are accepted as aliases in welded modes)
  witness log   mode <vb|vb-strict|wb|wb-star>, start <word>, one step per line, end <word>

Inputs may be given inline (an argument starting with "degree"), as a file
path, or as "-" for standard input.
"""


class UsageError(Exception):
    pass


def _read(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    stripped = arg.lstrip()
    if stripped.startswith(("degree", "crossing", "loops", "mode")):
        return arg
    try:
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {arg!r}: {exc.strerror}") from None


def _word(arg: str) -> BraidWord:
    return _word_text(_read(arg))


def _word_text(text: str) -> BraidWord:
    try:
        return parse_word(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _gauss(text: str) -> GaussData:
    try:
        return parse_gauss(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _is_gauss(text: str) -> bool:
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return not line.startswith("degree")
    return False


def _poly_text(p: LaurentPoly, descending: bool) -> str:
    if not descending or not p:
        return format_poly(p)
    terms = []
    for e, c in reversed(list(p)):
        body = format_poly(LaurentPoly.monomial(e, abs(c)))
        if not terms:
            terms.append(body if c > 0 else f"-{body}")
        else:
            terms.append(("+ " if c > 0 else "- ") + body)
    return " ".join(terms)


# ---------------------------------------------------------------------------
# commands


def cmd_normalize(args, out) -> int:
    print(format_word(free_reduce(_word(args.word))), file=out)
    return EXIT_OK


def cmd_perm(args, out) -> int:
    print(" ".join(map(str, permutation(_word(args.word)))), file=out)
    return EXIT_OK


def cmd_writhe(args, out) -> int:
    print(writhe(_word(args.word)), file=out)
    return EXIT_OK


def cmd_gauss(args, out) -> int:
    g = gauss_of_closure(_word(args.word))
    print(canonical_code(g) if args.canonical else emit_gauss(g), end="\n" if args.canonical else "", file=out)
    return EXIT_OK


def cmd_braid(args, out) -> int:
    g = _gauss(_read(args.gauss))
    print(format_word(braid_from_gauss(g)), file=out)
    return EXIT_OK


def cmd_q(args, out) -> int:
    text = _read(args.input)
    if _is_gauss(text):
        g = _gauss(text)
    else:
        g = gauss_of_closure(_word_text(text))
    table = None
    if args.table:
        try:
            table = load_table(args.table)
        except OSError as exc:
            raise UsageError(f"cannot read {args.table!r}: {exc.strerror}") from None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    try:
        value = q_of_gauss(g, args.N, args.alpha, table, workers=args.workers)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(_poly_text(value, args.descending), file=out)
    return EXIT_OK


def cmd_move(args, out) -> int:
    w = _word(args.word)
    try:
        step = MoveStep.parse(args.step)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        result = apply_step(w, step, Mode(args.flavor))
    except (MoveError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(format_word(result), file=out)
    return EXIT_OK


def cmd_equiv(args, out) -> int:
    w1, w2 = _word(args.first), _word(args.second)
    try:
        limits = SearchLimits(args.max_degree, args.max_length, args.max_depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    witness = equiv_search(w1, w2, Mode(args.flavor), limits)
    if witness is None:
        print("INCONCLUSIVE", file=out)
        return EXIT_FAIL
    print(format_witness(witness), end="", file=out)
    return EXIT_OK


def cmd_witness_verify(args, out) -> int:
    try:
        witness = parse_witness(_read(args.log))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = replay(witness, Mode(args.flavor) if args.flavor else None)
    if result.ok:
        print(f"OK {len(witness.steps)} steps", file=out)
        return EXIT_OK
    print(f"FAIL at step {result.failed_step}: {result.reason}", file=out)
    return EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="virtbraid",
        description="Virtual and welded braid calculator.",
        epilog=FORMATS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    modes = [m.value for m in Mode]

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text, epilog=FORMATS,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.set_defaults(func=func)
        return p

    p = add("normalize", cmd_normalize, "free-reduce a braid word")
    p.add_argument("word", nargs="?", default="-")
    p = add("perm", cmd_perm, "print the permutation image (one-line notation)")
    p.add_argument("word", nargs="?", default="-")
    p = add("writhe", cmd_writhe, "print the writhe")
    p.add_argument("word", nargs="?", default="-")
    p = add("gauss", cmd_gauss, "print the Gauss data of a word's closure")
    p.add_argument("word", nargs="?", default="-")
    p.add_argument("--canonical", action="store_true", help="print the relabeling-invariant code instead")
    p = add("braid", cmd_braid, "convert Gauss data to a braid word")
    p.add_argument("gauss", nargs="?", default="-")
    p = add("q", cmd_q, "evaluate Q_{N,alpha} of a word (or of Gauss data)")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--alpha", type=int, default=0)
    p.add_argument("--table", help="weight-table file to use instead of the built-in rule")
    p.add_argument("--workers", type=int, default=1, help="processes for the state sum")
    p.add_argument("--descending", action="store_true", help="print highest exponent first")
    p = add("move", cmd_move, "apply one serialized move step")
    p.add_argument("word", nargs="?", default="-")
    p.add_argument("--step", required=True)
    p.add_argument("--flavor", choices=modes, default="vb")
    p = add("equiv", cmd_equiv, "bounded search for a move sequence between two words")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--flavor", choices=modes, default="vb-strict")
    p.add_argument("--max-depth", type=int, default=8)
    p.add_argument("--max-degree", type=int, default=5)
    p.add_argument("--max-length", type=int, default=12)
    p = add("witness-verify", cmd_witness_verify, "replay a witness log")
    p.add_argument("log", nargs="?", default="-")
    p.add_argument("--flavor", choices=modes, help="override the log's mode")
    return parser


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
