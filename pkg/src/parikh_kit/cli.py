"""Command-line front end.

Exit codes: 0 for ACCEPT / EQUAL / success, 1 for REJECT / counterexample,
2 for usage, parse or pipeline errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .apa import DetAPA, apa_accepts
from .automata import Automaton, accepts_word, words_up_to
from .bsl import BslLanguage, Socle, bsl_member
from .config import limits
from .errors import ParikhKitError
from .flatten import Cqdd, cqdd_accepts, run_bsl_pipeline, run_pipeline
from .models import PA, EpsCA, ca_accepts, ca_to_pa, epsca_to_ca, pa_accepts
from .serialize import dumps, load_model, to_dot


class UsageError(Exception):
    pass


def model_alphabet(model) -> tuple:
    if isinstance(model, Automaton):
        return model.alphabet
    if isinstance(model, BslLanguage):
        return model.socle.letters
    if isinstance(model, Cqdd):
        return tuple(model.alphabet)
    return model.automaton.alphabet


def model_accepts(model, w: Sequence) -> bool:
    w = tuple(w)
    if isinstance(model, BslLanguage):
        return bsl_member(model, w)
    if isinstance(model, Cqdd):
        return cqdd_accepts(model, w)
    if isinstance(model, DetAPA):
        return apa_accepts(model, w)
    if isinstance(model, PA):
        return pa_accepts(model, w)
    if isinstance(model, EpsCA):
        return ca_accepts(model, w)
    if isinstance(model, Automaton):
        return accepts_word(model, w)
    raise TypeError(f"no membership test for {type(model).__name__}")


def parse_word(text: str) -> tuple:
    """Split a command-line word into letters.

    Separators (space or comma) split explicitly; otherwise each character
    is a letter. ``""`` and ``ε`` denote the empty word.
    """
    if text in ("", "ε"):
        return ()
    if any(sep in text for sep in (" ", ",")):
        return tuple(p for p in text.replace(",", " ").split() if p)
    return tuple(text)


def crosscheck(a, b, max_len: int) -> tuple | None:
    """The length-lexicographically first word on which ``a`` and ``b`` differ."""
    alphabet = tuple(dict.fromkeys(tuple(model_alphabet(a)) + tuple(model_alphabet(b))))
    for w in words_up_to(alphabet, max_len):
        if model_accepts(a, w) != model_accepts(b, w):
            return w
    return None


def _show(w: tuple) -> str:
    if not w:
        return "ε"
    sep = "" if all(len(str(a)) == 1 for a in w) else " "
    return sep.join(map(str, w))


def cmd_member(args) -> int:
    model = load_model(args.model)
    w = parse_word(args.word)
    ok = model_accepts(model, w)
    print("ACCEPT" if ok else "REJECT")
    return 0 if ok else 1


def cmd_pipeline(args) -> int:
    model = load_model(args.input)
    if isinstance(model, BslLanguage):
        result = run_bsl_pipeline(model)
    else:
        if isinstance(model, EpsCA):
            model = ca_to_pa(model if not model.automaton.has_epsilon else epsca_to_ca(model))
        if not isinstance(model, PA):
            raise UsageError(f"pipeline input must be a BSL or PA file, got {type(model).__name__}")
        if not args.socle:
            raise UsageError("a PA input needs --socle w1,w2,...")
        socle = Socle([w for w in args.socle.split(",") if w])
        result = run_pipeline(model, socle)
    text = dumps(result.cqdd) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    report = dict(result.report)
    report["seed"] = args.seed
    out = sys.stdout if args.output else sys.stderr
    if args.json:
        print(json.dumps(report, sort_keys=True), file=out)
    else:
        for k in sorted(report):
            print(f"{k}: {report[k]}", file=out)
    return 0


def cmd_crosscheck(args) -> int:
    a, b = load_model(args.first), load_model(args.second)
    w = crosscheck(a, b, args.max_len)
    if w is None:
        print(f"EQUAL-UP-TO({args.max_len})")
        return 0
    print(f"COUNTEREXAMPLE {_show(w)}: {args.first}={model_accepts(a, w)} {args.second}={model_accepts(b, w)}")
    return 1


def cmd_dot(args) -> int:
    text = to_dot(load_model(args.model))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--solver-cap", type=int, help="max candidates explored by the linear solver")
    common.add_argument("--monoid-cap", type=int, help="max size of a transition matrix monoid")
    common.add_argument("--cd-bound", type=int, help="word length for constraint-determinism checks")
    common.add_argument("--seed", type=int, default=0, help="seed recorded in reports")
    common.add_argument("--json", action="store_true", help="machine-readable report")

    p = argparse.ArgumentParser(prog="parikh-kit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("member", parents=[common], help="decide membership of a word")
    m.add_argument("model")
    m.add_argument("word", help="letters, or separated by spaces/commas; '' for the empty word")
    m.set_defaults(func=cmd_member)

    pl = sub.add_parser("pipeline", parents=[common], help="bounded PA or BSL to flat DetCA union")
    pl.add_argument("input")
    pl.add_argument("--socle", help="comma-separated socle words, required for PA input")
    pl.add_argument("-o", "--output", help="Cqdd JSON destination (default stdout)")
    pl.set_defaults(func=cmd_pipeline)

    c = sub.add_parser("crosscheck", parents=[common], help="compare two models on short words")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("--max-len", type=int, default=8)
    c.set_defaults(func=cmd_crosscheck)

    d = sub.add_parser("dot", parents=[common], help="export Graphviz DOT")
    d.add_argument("model")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_dot)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    overrides = {
        k: v
        for k, v in (("solver_cap", args.solver_cap), ("monoid_cap", args.monoid_cap), ("cd_bound", args.cd_bound))
        if v is not None
    }
    try:
        with limits(**overrides):
            return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ParikhKitError as exc:
        stage = getattr(exc, "stage", args.command)
        print(f"error [{stage}] {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
