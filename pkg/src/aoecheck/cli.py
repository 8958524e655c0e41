"""Command-line entry point.

Exit status: 0 when every check passes and every classification agrees,
1 when a check finds violations or differences, 2 on usage, fixture or
parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import axioms, diophantine
from .diophantine import EquationKind, SolutionTriple
from .numeric import DomainError
from .parser import FixtureError, ParseError, parse_fixture, parse_formula, parse_term, print_fixture, print_formula, print_term
from .syntax import EvalError, eval_formula, eval_term

SCHEMA_VERSION = 1
DEFAULT_MAX_EXP = 64
COMMANDS = ("solve", "check-axioms", "check-theorems", "eval", "parse", "scan")
SCANS = ("lemma1", "lemma2", "ramanujan-nagell", "b2", "b3a")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    kind: Optional[EquationKind] = None
    max_exp: int = DEFAULT_MAX_EXP
    min_exp: int = diophantine.DEFAULT_MIN_EXP
    samples: int = axioms.DEFAULT_SAMPLES
    seed: int = axioms.DEFAULT_SEED
    format: str = "text"
    only: Optional[list[str]] = None
    fixture: Optional[Path] = None
    text: Optional[str] = None
    scan: Optional[str] = None
    odd_only: bool = False
    timings: bool = False


class UsageError(Exception):
    pass


def _natural(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _positive(s: str) -> int:
    v = _natural(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _default_max_exp() -> int:
    raw = os.environ.get("AOE_MAX_EXP")
    if raw is None:
        return DEFAULT_MAX_EXP
    try:
        return _natural(raw)
    except argparse.ArgumentTypeError as e:
        raise UsageError(f"AOE_MAX_EXP: {e}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--kind", choices=[k.value for k in EquationKind])
    common.add_argument("--max-exp", type=_natural, default=None,
                        help=f"largest exponent scanned (default {DEFAULT_MAX_EXP}, or $AOE_MAX_EXP)")
    common.add_argument("--min-exp", type=_natural, default=diophantine.DEFAULT_MIN_EXP,
                        help="smallest exponent for n and m (default 1)")
    common.add_argument("--samples", type=_positive, default=axioms.DEFAULT_SAMPLES)
    common.add_argument("--seed", type=_natural, default=axioms.DEFAULT_SEED)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--only", help="comma-separated axiom ids, e.g. A19,B3B")
    common.add_argument("--fixture", type=Path, help="axiom fixture file")
    common.add_argument("--timings", action="store_true", help="include elapsed times (output is then not reproducible)")

    parser = _Parser(prog="aoecheck", description="Verify AOE+B axioms and the 2^n +- 2^m +- 1 = x^2 classifications.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("solve", parents=[common], help="enumerate one equation and compare with its classification")
    sub.add_parser("check-theorems", parents=[common], help="compare all four equations with their classifications")
    sub.add_parser("check-axioms", parents=[common], help="check A1-A21 and B1-B3 in the standard model")
    p = sub.add_parser("eval", parents=[common], help="evaluate a closed formula or term")
    p.add_argument("text")
    p = sub.add_parser("parse", parents=[common], help="print the canonical form of a formula or fixture")
    p.add_argument("text", nargs="?")
    p = sub.add_parser("scan", parents=[common], help="run a lemma or B-axiom scan")
    p.add_argument("scan", choices=SCANS)
    p.add_argument("--odd-only", action="store_true", help="b3a: odd D only")
    return parser


def parse_args(argv: Sequence[str]) -> RunConfig:
    parser = build_parser()
    if not argv:
        raise UsageError(parser.format_help())
    ns = parser.parse_args(list(argv))
    cfg = RunConfig(
        command=ns.command,
        kind=EquationKind(ns.kind) if ns.kind else None,
        max_exp=ns.max_exp if ns.max_exp is not None else _default_max_exp(),
        min_exp=ns.min_exp,
        samples=ns.samples,
        seed=ns.seed,
        format=ns.format,
        only=[s.strip() for s in ns.only.split(",") if s.strip()] if ns.only else None,
        fixture=ns.fixture,
        text=getattr(ns, "text", None),
        scan=getattr(ns, "scan", None),
        odd_only=getattr(ns, "odd_only", False),
        timings=ns.timings,
    )
    if cfg.command == "solve" and cfg.kind is None:
        raise UsageError("solve: --kind is required")
    if cfg.command == "parse" and cfg.text is None and cfg.fixture is None:
        raise UsageError("parse: give a formula or --fixture PATH")
    if cfg.min_exp > cfg.max_exp:
        raise UsageError("--min-exp must not exceed --max-exp")
    return cfg


# -- commands ----------------------------------------------------------------

def _triple(t) -> str:
    return "({}, {}, {})".format(*t)


def _theorem_text(c: diophantine.TheoremCheck) -> list[str]:
    lines = [f"{c.kind.value}: {c.kind.equation}, exponents {c.min_exp}..{c.max_exp}: "
             f"{len(c.solutions)} solution(s)"]
    lines += ["  " + _triple(t) for t in c.solutions]
    if c.diff.agrees:
        lines.append("  classification: agrees")
    else:
        lines += ["  missing " + _triple(t) for t in c.diff.missing]
        lines += ["  extra " + _triple(t) for t in c.diff.extra]
    return lines


def cmd_theorems(cfg: RunConfig):
    kinds = [cfg.kind] if cfg.kind else list(EquationKind)
    checks = [diophantine.check_theorem(k, cfg.max_exp, cfg.min_exp) for k in kinds]
    code = EXIT_OK if all(c.diff.agrees for c in checks) else EXIT_FAIL
    if cfg.command == "solve":
        doc = checks[0].to_json()
    else:
        doc = {"max_exp": cfg.max_exp, "min_exp": cfg.min_exp, "theorems": [c.to_json() for c in checks]}
    text = [line for c in checks for line in _theorem_text(c)]
    return code, doc, text


def _load_registry(cfg: RunConfig):
    if cfg.fixture is None:
        return None
    try:
        return axioms.load_registry(cfg.fixture.read_text(encoding="utf-8"))
    except OSError as e:
        raise UsageError(f"cannot read fixture: {e}") from None
    except (FixtureError, ValueError) as e:
        raise UsageError(f"{cfg.fixture}: {e}") from None


def cmd_check_axioms(cfg: RunConfig):
    registry = _load_registry(cfg)
    try:
        reports = axioms.check_all(cfg.samples, cfg.seed, cfg.only, registry)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    doc = {"samples": cfg.samples, "seed": cfg.seed, "reports": [r.to_json(cfg.timings) for r in reports]}
    text = []
    for r in reports:
        status = "PASS" if r.passed else f"FAIL ({len(r.violations)} violations)"
        line = f"{r.axiom_id:<4} {status:<24} {r.mode} {r.samples_run}"
        if cfg.timings:
            line += f" {r.elapsed * 1000:.1f} ms"
        text.append(line)
        text += [f"     {n}" for n in r.notes]
        for v in r.violations[:3]:
            env = ", ".join(f"{k}={val}" for k, val in v.env.items())
            text.append(f"     witness {env}: {v.note}")
    return code, doc, text


def cmd_eval(cfg: RunConfig):
    try:
        f = parse_formula(cfg.text)
    except ParseError as formula_err:
        try:
            t = parse_term(cfg.text)
        except ParseError:
            raise UsageError(f"parse error: {formula_err}") from None
        value = _guard(eval_term, t)
        return EXIT_OK, {"term": print_term(t), "value": str(value)}, [str(value)]
    value = _guard(eval_formula, f)
    return (EXIT_OK if value else EXIT_FAIL), {"formula": print_formula(f), "value": value}, [str(value).lower()]


def _guard(fn, node):
    try:
        return fn(node, {})
    except (EvalError, DomainError) as e:
        raise UsageError(f"evaluation error: {e}") from None


def cmd_parse(cfg: RunConfig):
    if cfg.fixture is not None:
        try:
            stanzas = parse_fixture(cfg.fixture.read_text(encoding="utf-8"))
        except OSError as e:
            raise UsageError(f"cannot read fixture: {e}") from None
        except FixtureError as e:
            raise UsageError(f"{cfg.fixture}: {e}") from None
        out = print_fixture(stanzas)
        return EXIT_OK, {"fixture": out}, [out.rstrip("\n")]
    try:
        f = parse_formula(cfg.text)
    except ParseError as e:
        raise UsageError(f"parse error: {e}") from None
    s = print_formula(f)
    return EXIT_OK, {"formula": s}, [s]


def cmd_scan(cfg: RunConfig):
    what = cfg.scan
    if what == "lemma1":
        strict = diophantine.lemma1_solutions(cfg.max_exp, min_exp=cfg.min_exp)
        relaxed = diophantine.lemma1_solutions(cfg.max_exp, relaxed=True, min_exp=cfg.min_exp)
        printed = set(diophantine.LEMMA1_PRINTED)
        code = EXIT_OK if strict == printed else EXIT_FAIL
        doc = {"strict": _pairs(strict), "relaxed": _pairs(relaxed), "printed": _pairs(printed),
               "strict_missing": _pairs(printed - strict), "strict_extra": _pairs(strict - printed)}
        text = [f"strict 0 < |p - x^2| < 4: {_fmt_pairs(strict)}",
                f"relaxed 0 <= |p - x^2| < 4: {len(relaxed)} pairs",
                f"printed list: {_fmt_pairs(printed)}",
                f"printed but not strict solutions: {_fmt_pairs(printed - strict)}",
                f"strict solutions not printed: {_fmt_pairs(strict - printed)}"]
        return code, doc, text
    if what == "lemma2":
        rows, code, text = [], EXIT_OK, []
        for e in range(max(cfg.min_exp, 1), min(cfg.max_exp, 20) + 1):
            p = 1 << e
            got = diophantine.lemma2_solutions(e, 1 << 12)
            want = {(p // 2, p * p // 2 - 1)} if e >= 2 else set()
            if got != want:
                code = EXIT_FAIL
            rows.append({"p": str(p), "solutions": _pairs(got), "agrees": got == want})
            text.append(f"p = {p}: {_fmt_pairs(got)}{'' if got == want else '  (differs from (p/2, p^2/2 - 1))'}")
        return code, {"x_cap": str(1 << 12), "rows": rows}, text
    if what == "ramanujan-nagell":
        sols = diophantine.ramanujan_nagell(cfg.max_exp)
        listed = {n for n in diophantine.RAMANUJAN_NAGELL if n.bit_length() - 1 <= cfg.max_exp}
        code = EXIT_OK if {n for n, _ in sols} == listed else EXIT_FAIL
        exps = sorted(n.bit_length() - 1 for n, _ in sols)
        doc = {"solutions": _pairs(sols), "exponents": exps,
               "note": "printed list has 32678; the solution is 32768 = 181^2 + 7"}
        return code, doc, [f"2^k - 7 = x^2 for k in {exps}: {_fmt_pairs(sols)}",
                           "note: printed list has 32678; the solution is 32768 = 181^2 + 7"]
    if what == "b2":
        rows = diophantine.b2_gap_scan(cfg.min_exp, cfg.max_exp)
        code = EXIT_OK if all(r.consistent for r in rows) else EXIT_FAIL
        bad = [r.k for r in rows if not r.consistent]
        return code, {"rows": [r.to_json() for r in rows]}, [
            f"k = {cfg.min_exp}..{cfg.max_exp}: {len(rows) - len(bad)} consistent, inconsistent at {bad}"]
    entries = diophantine.b3a_scan(cfg.max_exp, axioms.B3A_SCAN_MAX_D, odd_only=cfg.odd_only,
                                   min_exp=cfg.min_exp if cfg.odd_only else 0)
    outside = [e for e in entries if not e.in_family]
    code = EXIT_OK if not outside else EXIT_FAIL
    text = [f"{len(entries)} admissible D <= {axioms.B3A_SCAN_MAX_D}, {len(outside)} outside the family"]
    text += [f"  D = {e.d}: " + ", ".join(f"{n} - {e.d} = {x}^2" for n, x in e.witnesses[:3]) for e in outside[:10]]
    return code, {"max_d": str(axioms.B3A_SCAN_MAX_D), "entries": [e.to_json() for e in entries]}, text


def _pairs(pairs) -> list[list[str]]:
    return [[str(a), str(b)] for a, b in sorted(pairs)]


def _fmt_pairs(pairs) -> str:
    return "{" + ", ".join(f"({a}, {b})" for a, b in sorted(pairs)) + "}"


HANDLERS = {
    "solve": cmd_theorems,
    "check-theorems": cmd_theorems,
    "check-axioms": cmd_check_axioms,
    "eval": cmd_eval,
    "parse": cmd_parse,
    "scan": cmd_scan,
}


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    code, doc, text = HANDLERS[cfg.command](cfg)
    if cfg.format == "json":
        payload = {"schema_version": SCHEMA_VERSION, "command": cfg.command, **doc, "exit_code": code}
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write("\n".join(text) + "\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(parse_args(argv))
    except UsageError as e:
        sys.stderr.write(str(e).rstrip("\n") + "\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
