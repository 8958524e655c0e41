"""Terms and formulas of the language, with evaluation in the standard model.

Terms: 0, 1, numerals, variables, +, *, monus, half, tau, omega, divp2 and
literal powers. Formulas: =, <, <=, pow2, the propositional connectives and
bounded quantifiers. A bound is inclusive: ``ExistsBounded(v, b, f)`` ranges
``v`` over ``0..eval(b)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

from . import numeric

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
KEYWORDS = frozenset({"forall", "exists", "pow2", "half", "tau", "omega", "divp2"})

Env = Mapping[str, int]


# -- terms -------------------------------------------------------------------

@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Const:
    """A numeral >= 2; 0 and 1 are the language's own constants."""
    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or self.value < 2:
            raise ValueError(f"Const needs an integer >= 2 (use Zero/One), got {self.value!r}")


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not IDENT_RE.match(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid variable name {self.name!r}")


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Monus:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Half:
    arg: "Term"


@dataclass(frozen=True)
class Tau:
    arg: "Term"


@dataclass(frozen=True)
class Omega:
    arg: "Term"


@dataclass(frozen=True)
class DivP2:
    numerator: "Term"
    denominator: "Term"


@dataclass(frozen=True)
class Pow:
    """``base ^ exponent`` with a literal exponent; sugar for iterated Mul."""
    base: "Term"
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int) or self.exponent < 0:
            raise ValueError(f"Pow exponent must be a non-negative literal, got {self.exponent!r}")


Term = Union[Zero, One, Const, Var, Add, Mul, Monus, Half, Tau, Omega, DivP2, Pow]


def num(n: int) -> Term:
    """The numeral for n."""
    if n == 0:
        return Zero()
    if n == 1:
        return One()
    return Const(n)


# -- formulas ----------------------------------------------------------------

@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Lt:
    left: Term
    right: Term


@dataclass(frozen=True)
class Le:
    left: Term
    right: Term


@dataclass(frozen=True)
class IsPow2:
    arg: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForallBounded:
    var: str
    bound: Term
    body: "Formula"


@dataclass(frozen=True)
class ExistsBounded:
    var: str
    bound: Term
    body: "Formula"


Formula = Union[Eq, Lt, Le, IsPow2, Not, And, Or, Implies, ForallBounded, ExistsBounded]

TERM_TYPES = (Zero, One, Const, Var, Add, Mul, Monus, Half, Tau, Omega, DivP2, Pow)
FORMULA_TYPES = (Eq, Lt, Le, IsPow2, Not, And, Or, Implies, ForallBounded, ExistsBounded)


# -- errors ------------------------------------------------------------------

class EvalError(Exception):
    """Evaluation failed; ``node`` is the offending subterm or subformula."""

    def __init__(self, message: str, node=None):
        super().__init__(message)
        self.node = node


class UnboundVariable(EvalError):
    pass


class TauOmegaOfZero(EvalError):
    pass


class NotPowerOfTwo(EvalError):
    pass


# -- free variables ----------------------------------------------------------

def free_vars(node) -> frozenset[str]:
    if isinstance(node, Var):
        return frozenset({node.name})
    if isinstance(node, (Zero, One, Const)):
        return frozenset()
    if isinstance(node, (Half, Tau, Omega, IsPow2)):
        return free_vars(node.arg)
    if isinstance(node, Pow):
        return free_vars(node.base)
    if isinstance(node, DivP2):
        return free_vars(node.numerator) | free_vars(node.denominator)
    if isinstance(node, Not):
        return free_vars(node.body)
    if isinstance(node, (ForallBounded, ExistsBounded)):
        return free_vars(node.bound) | (free_vars(node.body) - {node.var})
    if isinstance(node, (Add, Mul, Monus, Eq, Lt, Le, And, Or, Implies)):
        return free_vars(node.left) | free_vars(node.right)
    raise TypeError(f"not a term or formula: {node!r}")


# -- evaluation --------------------------------------------------------------

def eval_term(t: Term, env: Env) -> int:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(f"unbound variable {t.name!r}", t) from None
    if isinstance(t, Zero):
        return 0
    if isinstance(t, One):
        return 1
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Add):
        return eval_term(t.left, env) + eval_term(t.right, env)
    if isinstance(t, Mul):
        return eval_term(t.left, env) * eval_term(t.right, env)
    if isinstance(t, Monus):
        return numeric.monus(eval_term(t.left, env), eval_term(t.right, env))
    if isinstance(t, Half):
        return numeric.half(eval_term(t.arg, env))
    if isinstance(t, (Tau, Omega)):
        v = eval_term(t.arg, env)
        if v == 0:
            raise TauOmegaOfZero(f"{type(t).__name__.lower()} of 0 is undefined", t)
        split = numeric.tau_omega(v)
        return split.tau if isinstance(t, Tau) else split.omega
    if isinstance(t, DivP2):
        m = eval_term(t.numerator, env)
        n = eval_term(t.denominator, env)
        if not numeric.is_pow2(n):
            raise NotPowerOfTwo(f"divp2 denominator evaluates to {n}, not a power of two", t)
        return numeric.div_pow2(m, n)
    if isinstance(t, Pow):
        return eval_term(t.base, env) ** t.exponent
    raise TypeError(f"not a term: {t!r}")


def eval_formula(f: Formula, env: Env) -> bool:
    """Truth of ``f`` in the standard model.

    Connectives short-circuit left to right, so a guarded subterm such as
    ``0 < n -> tau(n) ...`` is never evaluated when its guard is false.
    Errors propagate; they are never folded into False.
    """
    if isinstance(f, Eq):
        return eval_term(f.left, env) == eval_term(f.right, env)
    if isinstance(f, Lt):
        return eval_term(f.left, env) < eval_term(f.right, env)
    if isinstance(f, Le):
        return eval_term(f.left, env) <= eval_term(f.right, env)
    if isinstance(f, IsPow2):
        return numeric.is_pow2(eval_term(f.arg, env))
    if isinstance(f, Not):
        return not eval_formula(f.body, env)
    if isinstance(f, And):
        return eval_formula(f.left, env) and eval_formula(f.right, env)
    if isinstance(f, Or):
        return eval_formula(f.left, env) or eval_formula(f.right, env)
    if isinstance(f, Implies):
        return (not eval_formula(f.left, env)) or eval_formula(f.right, env)
    if isinstance(f, (ForallBounded, ExistsBounded)):
        bound = eval_term(f.bound, env)
        want = isinstance(f, ExistsBounded)
        scope = dict(env)
        for w in range(bound + 1):
            scope[f.var] = w
            if eval_formula(f.body, scope) == want:
                return want
        return not want
    raise TypeError(f"not a formula: {f!r}")
