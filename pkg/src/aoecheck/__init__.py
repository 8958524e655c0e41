"""Mechanical checks of the theory AOE+B and the 2^n +- 2^m +- 1 = x^2 classifications."""

from .diophantine import EquationKind, SolutionTriple, solve_equation
from .parser import ParseError, parse_formula, parse_term, print_formula
from .syntax import eval_formula, eval_term, free_vars

__all__ = [
    "EquationKind", "SolutionTriple", "solve_equation",
    "ParseError", "parse_formula", "parse_term", "print_formula",
    "eval_formula", "eval_term", "free_vars",
]
