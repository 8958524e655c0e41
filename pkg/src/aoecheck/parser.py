"""ASCII concrete syntax for terms and formulas, and the axiom fixture format.

Grammar (one formula per call)::

    formula     := implication
    implication := disjunction ("->" implication)?
    disjunction := conjunction ("\\/" conjunction)*
    conjunction := negation ("/\\" negation)*
    negation    := "~" negation | quantified | atom
    quantified  := ("forall" | "exists") IDENT "<" term "." formula
    atom        := term ("=" | "<" | "<=" | ">" | ">=") term
                 | "pow2" "(" term ")" | "(" formula ")"
    term        := product (("+" | "-") product)*
    product     := power ("*" power)*
    power       := primary ("^" NAT)?
    primary     := NAT | IDENT | "half(" term ")" | "tau(" term ")"
                 | "omega(" term ")" | "divp2(" term "," term ")" | "(" term ")"

``-`` is monus. ``a > b`` and ``a >= b`` are read as ``b < a`` and ``b <= a``.
The quantifier bound is inclusive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional

from .syntax import (
    Add, And, Const, DivP2, Eq, ExistsBounded, ForallBounded, Formula, Half,
    Implies, IsPow2, KEYWORDS, Le, Lt, Monus, Mul, Not, Omega, One, Or, Pow,
    Tau, Term, Var, Zero, num,
)


class SourceSpan(NamedTuple):
    start: int
    end: int


class ParseError(ValueError):
    def __init__(self, span: SourceSpan, expected: str, found: str, text: str = ""):
        self.span = span
        self.expected = expected
        self.found = found
        self.text = text
        super().__init__(f"at offset {span.start}: expected {expected}, found {found}")


class Token(NamedTuple):
    kind: str  # "nat", "ident", "kw", "op", "eof"
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<nat>[0-9]+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>->|/\\|\\/|<=|>=|[-+*^=<>~().,])"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(SourceSpan(pos, pos + 1), "a token", repr(text[pos]), text)
        kind = m.lastgroup
        if kind != "ws":
            word = m.group()
            if kind == "ident" and word in KEYWORDS:
                kind = "kw"
            tokens.append(Token(kind, word, SourceSpan(m.start(), m.end())))
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(len(text), len(text))))
    return tokens


_COMPARISONS = {"=", "<", "<=", ">", ">="}
_UNARY_FUNCS = {"half": Half, "tau": Tau, "omega": Omega}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    # helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, expected: str) -> ParseError:
        tok = self.tok
        found = "end-of-input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(tok.span, expected, found, self.text)

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("op", "kw") and self.tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise self.error(repr(text))

    def expect_eof(self) -> None:
        if self.tok.kind != "eof":
            raise self.error("end-of-input")

    # formulas
    def formula(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.accept("\\/"):
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.negation()
        while self.accept("/\\"):
            f = And(f, self.negation())
        return f

    def negation(self) -> Formula:
        if self.accept("~"):
            return Not(self.negation())
        if self.tok.kind == "kw" and self.tok.text in ("forall", "exists"):
            return self.quantified()
        return self.atom()

    def quantified(self) -> Formula:
        ctor = ForallBounded if self.tok.text == "forall" else ExistsBounded
        self.pos += 1
        if self.tok.kind != "ident":
            raise self.error("variable name")
        var = self.tok.text
        self.pos += 1
        self.expect("<")
        bound = self.term()
        self.expect(".")
        return ctor(var, bound, self.formula())

    def atom(self) -> Formula:
        if self.accept("pow2"):
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return IsPow2(arg)
        if self.tok.text == "(" and self.tok.kind == "op":
            # "(" opens either a term or a parenthesized formula
            start = self.pos
            try:
                return self.comparison()
            except ParseError as term_err:
                self.pos = start
                try:
                    self.expect("(")
                    f = self.formula()
                    self.expect(")")
                    return f
                except ParseError as formula_err:
                    raise max(term_err, formula_err, key=lambda e: e.span.start)
        return self.comparison()

    def comparison(self) -> Formula:
        left = self.term()
        op = self.tok.text if self.tok.kind == "op" else ""
        if op not in _COMPARISONS:
            raise self.error("comparison ('=', '<', '<=', '>', '>=')")
        self.pos += 1
        right = self.term()
        if op == "=":
            return Eq(left, right)
        if op == "<":
            return Lt(left, right)
        if op == "<=":
            return Le(left, right)
        if op == ">":
            return Lt(right, left)
        return Le(right, left)

    # terms
    def term(self) -> Term:
        t = self.product()
        while True:
            if self.accept("+"):
                t = Add(t, self.product())
            elif self.accept("-"):
                t = Monus(t, self.product())
            else:
                return t

    def product(self) -> Term:
        t = self.power()
        while self.accept("*"):
            t = Mul(t, self.power())
        return t

    def power(self) -> Term:
        base = self.primary()
        if self.accept("^"):
            if self.tok.kind != "nat":
                raise self.error("numeral exponent")
            exponent = int(self.tok.text)
            self.pos += 1
            return Pow(base, exponent)
        return base

    def primary(self) -> Term:
        tok = self.tok
        if tok.kind == "nat":
            self.pos += 1
            return num(int(tok.text))
        if tok.kind == "ident":
            self.pos += 1
            return Var(tok.text)
        if tok.kind == "kw" and tok.text in _UNARY_FUNCS:
            self.pos += 1
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return _UNARY_FUNCS[tok.text](arg)
        if tok.kind == "kw" and tok.text == "divp2":
            self.pos += 1
            self.expect("(")
            numerator = self.term()
            self.expect(",")
            denominator = self.term()
            self.expect(")")
            return DivP2(numerator, denominator)
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        raise self.error("term")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.expect_eof()
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.expect_eof()
    return t


# -- printing ----------------------------------------------------------------

_SUM, _PRODUCT, _POWER, _PRIMARY = 1, 2, 3, 4


def _term_level(t: Term) -> int:
    if isinstance(t, (Add, Monus)):
        return _SUM
    if isinstance(t, Mul):
        return _PRODUCT
    if isinstance(t, Pow):
        return _POWER
    return _PRIMARY


def _term(t: Term, level: int = 0) -> str:
    if _term_level(t) < level:
        return f"({_term(t)})"
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Add):
        return f"{_term(t.left, _SUM)} + {_term(t.right, _PRODUCT)}"
    if isinstance(t, Monus):
        return f"{_term(t.left, _SUM)} - {_term(t.right, _PRODUCT)}"
    if isinstance(t, Mul):
        return f"{_term(t.left, _PRODUCT)} * {_term(t.right, _POWER)}"
    if isinstance(t, Pow):
        return f"{_term(t.base, _PRIMARY)}^{t.exponent}"
    if isinstance(t, Half):
        return f"half({_term(t.arg)})"
    if isinstance(t, Tau):
        return f"tau({_term(t.arg)})"
    if isinstance(t, Omega):
        return f"omega({_term(t.arg)})"
    if isinstance(t, DivP2):
        return f"divp2({_term(t.numerator)}, {_term(t.denominator)})"
    raise TypeError(f"not a term: {t!r}")


print_term = _term

_QUANT, _IMPL, _DISJ, _CONJ, _NEG = 0, 1, 2, 3, 4


def _formula(f: Formula, level: int = _QUANT) -> str:
    if isinstance(f, (ForallBounded, ExistsBounded)):
        word = "forall" if isinstance(f, ForallBounded) else "exists"
        s = f"{word} {f.var} < {_term(f.bound)}. {_formula(f.body)}"
        return s if level == _QUANT else f"({s})"
    if isinstance(f, Implies):
        s = f"{_formula(f.left, _DISJ)} -> {_formula(f.right, _IMPL)}"
        return s if level <= _IMPL else f"({s})"
    if isinstance(f, Or):
        s = f"{_formula(f.left, _DISJ)} \\/ {_formula(f.right, _CONJ)}"
        return s if level <= _DISJ else f"({s})"
    if isinstance(f, And):
        s = f"{_formula(f.left, _CONJ)} /\\ {_formula(f.right, _NEG)}"
        return s if level <= _CONJ else f"({s})"
    if isinstance(f, Not):
        if isinstance(f.body, (Not, IsPow2)):
            return "~" + _formula(f.body, _NEG)
        return f"~({_formula(f.body)})"
    if isinstance(f, Eq):
        return f"{_term(f.left)} = {_term(f.right)}"
    if isinstance(f, Lt):
        return f"{_term(f.left)} < {_term(f.right)}"
    if isinstance(f, Le):
        return f"{_term(f.left)} <= {_term(f.right)}"
    if isinstance(f, IsPow2):
        return f"pow2({_term(f.arg)})"
    raise TypeError(f"not a formula: {f!r}")


def print_formula(f: Formula) -> str:
    return _formula(f)


# -- fixture files -----------------------------------------------------------

DOMAIN_KINDS = ("nat", "pow2", "odd")


@dataclass(frozen=True)
class DomainConstraint:
    """How one free variable is drawn.

    ``nat`` and ``odd`` caps are bit lengths (values below ``2**cap``);
    ``pow2`` caps are exponents. ``def`` binds the variable to a term over
    the other variables.
    """
    var: str
    kind: str
    cap: Optional[int] = None
    term: Optional[Term] = None

    def __str__(self) -> str:
        if self.kind == "def":
            return f"{self.var} := {print_term(self.term)}"
        return f"{self.var} {self.kind} {self.cap}"


def parse_domain(text: str) -> list[DomainConstraint]:
    out = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        if ":=" in item:
            var, _, rhs = item.partition(":=")
            out.append(DomainConstraint(Var(var.strip()).name, "def", term=parse_term(rhs)))
            continue
        parts = item.split()
        if len(parts) != 3 or parts[1] not in DOMAIN_KINDS or not parts[2].isdigit():
            raise ValueError(f"bad domain constraint {item!r}")
        out.append(DomainConstraint(Var(parts[0]).name, parts[1], int(parts[2])))
    return out


@dataclass(frozen=True)
class Stanza:
    id: str
    formula: Formula
    domain: tuple[DomainConstraint, ...] = ()
    notes: tuple[str, ...] = field(default=())


class FixtureError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


_HEADER_RE = re.compile(r"\[([A-Za-z0-9_]+)\]\Z")


def _blocks(text: str) -> Iterator[tuple[str, int, list[tuple[int, str]]]]:
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER_RE.match(line)
        if m:
            if current:
                yield current
            current = (m.group(1), lineno, [])
        elif current is None:
            raise FixtureError(lineno, "content before first [id] header")
        else:
            current[2].append((lineno, line))
    if current:
        yield current


def parse_fixture(text: str) -> list[Stanza]:
    stanzas = []
    seen = set()
    for ident, header_line, lines in _blocks(text):
        if ident in seen:
            raise FixtureError(header_line, f"duplicate id {ident}")
        seen.add(ident)
        domain: list[DomainConstraint] = []
        notes = []
        body = []
        for lineno, line in lines:
            if line.startswith("domain:") and not body:
                try:
                    domain.extend(parse_domain(line[len("domain:"):]))
                except (ValueError, ParseError) as e:
                    raise FixtureError(lineno, str(e)) from None
            elif line.startswith("note:") and not body:
                notes.append(line[len("note:"):].strip())
            else:
                body.append((lineno, line))
        if not body:
            raise FixtureError(header_line, f"[{ident}] has no formula")
        try:
            formula = parse_formula(" ".join(line for _, line in body))
        except ParseError as e:
            raise FixtureError(body[0][0], f"[{ident}] {e}") from None
        stanzas.append(Stanza(ident, formula, tuple(domain), tuple(notes)))
    return stanzas


def print_fixture(stanzas, header: str = "") -> str:
    chunks = [header] if header else []
    for s in stanzas:
        lines = [f"[{s.id}]"]
        if s.domain:
            lines.append("domain: " + ", ".join(str(d) for d in s.domain))
        lines.extend(f"note: {n}" for n in s.notes)
        lines.append(print_formula(s.formula))
        chunks.append("\n".join(lines) + "\n")
    return "\n".join(chunks)
