"""Command-line entry point.

Exit codes: 0 success, 1 a checked property failed, 2 bad input or usage,
3 inconclusive (a search cap was hit or the run was interrupted).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from . import __version__
from .bounds import (
    class_parameters,
    m_formula,
    m_formula_branch,
    max_degree_report,
    q_class_nonempty,
    survey_class,
    survey_csv,
    upper_bound_for_quiver,
)
from .equiv import Characteristic, EquivEngine
from .errors import Inconclusive, PropertyViolation, QuiverError
from .extremal import FAMILIES, build_extremal, verify_witness
from .omega import (
    build_complete_chain,
    build_delta_tree,
    chain_problems,
    omega_membership,
    tree_problems,
)
from .oracle.invariants import cross_validate, decomposable_report, invariant_polynomial, ring
from .oracle.poly import field_from_name
from .quiver import Quiver, Word, check_closed, check_multidegree, load_multidegree, load_quiver, load_word

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


@dataclass
class CommandOutcome:
    exit_code: int
    payload: Any


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors, which is what we want;
    this only keeps the message on stderr consistent."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise QuiverError(f"cannot read {path}: {exc.strerror}") from None


def _quiver(args) -> Quiver:
    if not args.quiver:
        raise QuiverError("--quiver is required")
    return load_quiver(_read(args.quiver))


def _word(args, q: Quiver) -> Word:
    if not args.word:
        raise QuiverError("--word is required")
    return check_closed(q, load_word(_read(args.word)))


def _delta(args, q: Quiver):
    if not args.delta:
        raise QuiverError("--delta is required")
    return check_multidegree(q, load_multidegree(_read(args.delta)))


def _need(args, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise QuiverError(f"missing {', '.join(missing)}")


def _cutoff(args, q: Quiver, ch: Characteristic) -> int:
    if args.cutoff is not None:
        if args.cutoff < 1:
            raise QuiverError("--cutoff must be positive")
        return args.cutoff
    return upper_bound_for_quiver(q, ch) + 1


# --- subcommands ------------------------------------------------------------


def cmd_equiv_zero(args) -> CommandOutcome:
    q = _quiver(args)
    w = _word(args, q)
    res = EquivEngine(q, args.char).equiv_zero(w)
    return CommandOutcome(EXIT_OK, res.to_dict())


def cmd_max_degree(args) -> CommandOutcome:
    q = _quiver(args)
    ch = Characteristic.parse(args.char)
    rep = max_degree_report(q, ch, _cutoff(args, q, ch))
    return CommandOutcome(EXIT_OK if rep["within_bound"] else EXIT_VIOLATION, rep)


def cmd_omega(args) -> CommandOutcome:
    q = _quiver(args)
    delta = _delta(args, q)
    ch = Characteristic.parse(args.char)
    cutoff = args.cutoff if args.cutoff is not None else upper_bound_for_quiver(q, ch) + 1
    mem = omega_membership(q, delta, ch, cutoff=cutoff)
    return CommandOutcome(EXIT_OK, mem.to_dict())


def cmd_chain(args) -> CommandOutcome:
    q = _quiver(args)
    delta = _delta(args, q)
    chain = build_complete_chain(q, delta)
    probs = chain_problems(q, delta, chain)
    out = {**chain.to_dict(), "problems": probs}
    return CommandOutcome(EXIT_VIOLATION if probs else EXIT_OK, out)


def cmd_tree(args) -> CommandOutcome:
    q = _quiver(args)
    delta = _delta(args, q)
    root = build_delta_tree(q, delta)
    probs = tree_problems(q, root)
    out = {"tree": root.to_dict(), "size": root.size(), "problems": probs}
    return CommandOutcome(EXIT_VIOLATION if probs else EXIT_OK, out)


def cmd_m_bound(args) -> CommandOutcome:
    if args.quiver:
        q = _quiver(args)
        n, d, m = class_parameters(q)
    else:
        _need(args, "n", "d", "m")
        n, d, m = args.n, args.d, args.m
    ch = Characteristic.parse(args.char)
    out = {"n": n, "d": d, "m": m, "char": ch.value, "M": m_formula(n, d, m, ch),
           "branch": m_formula_branch(n, d, m, ch)}
    return CommandOutcome(EXIT_OK, out)


def cmd_class_nonempty(args) -> CommandOutcome:
    _need(args, "n", "d", "m")
    out = {"n": args.n, "d": args.d, "m": args.m,
           "nonempty": q_class_nonempty(args.n, args.d, args.m)}
    return CommandOutcome(EXIT_OK, out)


def cmd_survey(args) -> CommandOutcome:
    if args.n is not None:
        _need(args, "n", "d", "m")
        points = [(args.n, args.d, args.m)]
    else:
        points = [(n, d, m) for n in range(1, args.max_n + 1) for d in range(n, args.max_d + 1)
                  for m in range(1, n + 1) if q_class_nonempty(n, d, m)]
    chars = BOTH_CHARS if args.char == "both" else [Characteristic.parse(args.char)]
    reports = [survey_class(n, d, m, ch, cap=args.cap) for n, d, m in points for ch in chars]
    ok = all(r.bound_attained for r in reports)
    payload = {"rows": [r.to_dict() for r in reports], "csv": survey_csv(reports)}
    return CommandOutcome(EXIT_OK if ok else EXIT_VIOLATION, payload)


def cmd_extremal(args) -> CommandOutcome:
    if args.family is None:
        raise QuiverError("--family is required")
    w = build_extremal(args.family, args.n, args.d, args.m)
    out = {"witness": w.to_dict()}
    code = EXIT_OK
    if args.verify:
        ch = None if args.char_given is None else args.char_given
        rep = verify_witness(w, ch)
        out["verification"] = rep.to_dict()
        code = EXIT_OK if rep.ok else EXIT_VIOLATION
    return CommandOutcome(code, out)


def cmd_oracle(args) -> CommandOutcome:
    q = _quiver(args)
    w = _word(args, q)
    fld = field_from_name(args.field or "q")
    if args.action == "poly":
        p = invariant_polynomial(q, w, args.k, fld)
        names = ring(q, fld).var_names()
        return CommandOutcome(EXIT_OK, {"field": fld.name, "k": args.k, "word": list(w),
                                        "polynomial": p.dump(names)})
    rep = decomposable_report(q, w, args.k, fld, cap=args.cap, explain=args.explain)
    out = {"word": list(w), "k": args.k, "field": rep.field, "degree": rep.degree,
           "decomposable": rep.decomposable, "products": rep.products}
    if args.explain:
        out["spanning_products"] = rep.transcript
    return CommandOutcome(EXIT_OK, out)


class _FlippedEngine(EquivEngine):
    """Deliberately wrong engine used to exercise the mismatch exit path."""

    def equiv_zero(self, word):
        res = super().equiv_zero(word)
        return type(res)(res.word, res.char, not res.equiv_zero, res.states_explored, "injected")


def cmd_cross_validate(args) -> CommandOutcome:
    q = _quiver(args)
    ch = Characteristic.parse(args.char)
    cutoff = args.cutoff if args.cutoff is not None else upper_bound_for_quiver(q, ch)
    fld = field_from_name(args.field) if args.field else None
    eng = _FlippedEngine(q, ch) if args.inject_fault else None
    cv = cross_validate(q, cutoff, ch, engine=eng, field_=fld)
    return CommandOutcome(EXIT_VIOLATION if cv.mismatches else EXIT_OK, cv.to_dict())


def cmd_accept(args) -> CommandOutcome:
    from .acceptance import run

    numbers = sorted({int(x) for x in args.only.split(",")}) if args.only else list(range(1, 11))
    results = []
    for k in numbers:
        res = run(k)
        print(res.line(), file=sys.stderr, flush=True)
        results.append(res)
    ok = all(r.passed for r in results)
    inconclusive = any("inconclusive" in r.details for r in results)
    code = EXIT_OK if ok else (EXIT_INCONCLUSIVE if inconclusive else EXIT_VIOLATION)
    return CommandOutcome(code, {"passed": ok, "criteria": [r.to_dict() for r in results]})


BOTH_CHARS = [Characteristic.TWO, Characteristic.NOT2]

COMMANDS: dict[str, Callable[[argparse.Namespace], CommandOutcome]] = {
    "equiv-zero": cmd_equiv_zero,
    "max-degree": cmd_max_degree,
    "omega": cmd_omega,
    "chain": cmd_chain,
    "tree": cmd_tree,
    "m-bound": cmd_m_bound,
    "class-nonempty": cmd_class_nonempty,
    "survey": cmd_survey,
    "extremal": cmd_extremal,
    "oracle": cmd_oracle,
    "cross-validate": cmd_cross_validate,
    "accept": cmd_accept,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", metavar="FILE", help="quiver JSON")
    common.add_argument("--word", metavar="FILE", help="closed word JSON")
    common.add_argument("--delta", metavar="FILE", help="multidegree JSON")
    common.add_argument("--char", default=None, choices=["2", "not2", "both"],
                        help="characteristic of the base field (default 2; survey: both)")
    common.add_argument("--field", choices=["q", "gf2", "gf3"], default=None,
                        help="field for the matrix oracle")
    common.add_argument("--cutoff", type=int, default=None,
                        help="degree cutoff (defaults to the theoretical bound plus one)")
    common.add_argument("--format", choices=["json", "csv", "table"], default="json")
    common.add_argument("--seed", type=int, default=0,
                        help="accepted for reproducible chunking; enumeration is deterministic")
    common.add_argument("--n", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--m", type=int)

    parser = _Parser(prog="quivar", description="Closed paths, their equivalence and degree bounds "
                     "for 2x2 matrix invariants of quivers.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    sub.add_parser("equiv-zero", parents=[common], help="decide h ≡ 0")
    sub.add_parser("max-degree", parents=[common], help="largest degree of a path not ≡ 0")
    sub.add_parser("omega", parents=[common], help="Ω-set membership of a multidegree")
    sub.add_parser("chain", parents=[common], help="complete chain of a multidegree in Ω₂")
    sub.add_parser("tree", parents=[common], help="δ-tree of a multidegree in Ω₂")
    sub.add_parser("m-bound", parents=[common], help="evaluate M(n,d,m)")
    sub.add_parser("class-nonempty", parents=[common], help="is Q(n,d,m) nonempty")
    p = sub.add_parser("survey", parents=[common], help="exact D over a class of small quivers")
    p.add_argument("--max-n", type=int, default=2)
    p.add_argument("--max-d", type=int, default=3)
    p.add_argument("--cap", type=int, default=8, help="oracle degree cap")
    p = sub.add_parser("extremal", parents=[common], help="build an extremal witness")
    p.add_argument("--family", choices=sorted(FAMILIES) + sorted(FAMILIES.values()))
    p.add_argument("--verify", action="store_true")
    p = sub.add_parser("oracle", parents=[common], help="matrix-invariant oracle")
    p.add_argument("action", choices=["decomp", "poly"])
    p.add_argument("--k", type=int, default=1, choices=[1, 2])
    p.add_argument("--cap", type=int, default=8)
    p.add_argument("--explain", action="store_true")
    p = sub.add_parser("cross-validate", parents=[common], help="engine against oracle")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p = sub.add_parser("accept", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", help="comma separated criterion numbers")
    return parser


# --- rendering --------------------------------------------------------------


def _flat(payload: Any) -> dict[str, Any]:
    if not isinstance(payload, dict):
        return {"value": payload}
    return {k: (json.dumps(v, sort_keys=True, ensure_ascii=False) if isinstance(v, (dict, list)) else v)
            for k, v in sorted(payload.items())}


def render(payload: Any, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)
    if isinstance(payload, dict) and "csv" in payload and fmt == "csv":
        return payload["csv"].rstrip("\n")
    rows = payload["rows"] if isinstance(payload, dict) and "rows" in payload else [payload]
    flat = [_flat(r) for r in rows]
    keys = sorted({k for r in flat for k in r})
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        return buf.getvalue().rstrip("\n")
    width = max((len(k) for k in keys), default=0)
    blocks = ["\n".join(f"{k.ljust(width)}  {r.get(k, '')}" for k in keys) for r in flat]
    return "\n\n".join(blocks)


def _threads() -> int:
    raw = os.environ.get("QUIVAR_THREADS")
    if raw is None:
        return 1
    try:
        val = int(raw)
    except ValueError:
        raise QuiverError(f"QUIVAR_THREADS must be an integer, got {raw!r}") from None
    if val < 1:
        raise QuiverError("QUIVAR_THREADS must be at least 1")
    return val


def run_cli(argv: Sequence[str] | None = None) -> CommandOutcome:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors, --help, --version
        return CommandOutcome(exc.code if isinstance(exc.code, int) else EXIT_USAGE, None)
    args.char_given = args.char
    if args.char is None:
        args.char = "both" if args.command == "survey" else "2"
    try:
        _threads()  # validated; all work runs in this process
        outcome = COMMANDS[args.command](args)
    except QuiverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_USAGE, None)
    except PropertyViolation as exc:
        print(f"property violated: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_VIOLATION, None)
    except Inconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_INCONCLUSIVE, None)
    except KeyboardInterrupt:
        print("interrupted: no result was produced for this command", file=sys.stderr)
        return CommandOutcome(EXIT_INCONCLUSIVE, None)
    print(render(outcome.payload, args.format))
    return outcome


def main(argv: Sequence[str] | None = None) -> int:
    return run_cli(argv).exit_code


if __name__ == "__main__":
    sys.exit(main())
