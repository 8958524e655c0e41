"""Enumerators for 2^a +- 2^b +- 1 = x^2 and the scans behind Lemmas 1-2, B2, B3.

Powers of two are taken with exponents in ``[min_exp, max_exp]``. The
default ``min_exp = 1`` excludes n = 1 or m = 1; with exponent 0 allowed
the minus-plus and plus-minus equations both pick up the infinite family
(4^j, 1, 2^j), which the classifications do not list.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple

from .numeric import is_pow2, isqrt, log2_exact, monus

DEFAULT_MIN_EXP = 1
B2_EXPONENT = 210
B2_GAP_FLOOR = 1 << 96
RAMANUJAN_NAGELL = (8, 16, 32, 128, 32768)


class EquationKind(enum.Enum):
    PLUS_PLUS = "plus-plus"
    MINUS_PLUS = "minus-plus"
    PLUS_MINUS = "plus-minus"
    MINUS_MINUS = "minus-minus"

    @property
    def symmetric(self) -> bool:
        return self in (EquationKind.PLUS_PLUS, EquationKind.PLUS_MINUS)

    @property
    def equation(self) -> str:
        return _EQUATIONS[self]

    def lhs(self, n: int, m: int) -> int:
        """Left-hand side n +- m +- 1; may be negative for the minus kinds."""
        sign_m = 1 if self in (EquationKind.PLUS_PLUS, EquationKind.PLUS_MINUS) else -1
        sign_1 = 1 if self in (EquationKind.PLUS_PLUS, EquationKind.MINUS_PLUS) else -1
        return n + sign_m * m + sign_1

    def holds(self, n: int, m: int, x: int) -> bool:
        return self.lhs(n, m) == x * x


_EQUATIONS = {
    EquationKind.PLUS_PLUS: "n + m + 1 = x^2",
    EquationKind.MINUS_PLUS: "n - m + 1 = x^2",
    EquationKind.PLUS_MINUS: "n + m - 1 = x^2",
    EquationKind.MINUS_MINUS: "n - m - 1 = x^2",
}


class SolutionTriple(NamedTuple):
    n: int
    m: int
    x: int

    def to_json(self) -> dict:
        return {"n": str(self.n), "m": str(self.m), "x": str(self.x)}


def solve_equation(kind: EquationKind, max_exp: int, min_exp: int = DEFAULT_MIN_EXP) -> set[SolutionTriple]:
    """All (2^a, 2^b, x) solving ``kind`` with exponents in the window.

    Symmetric kinds report n >= m only. Pairs whose left-hand side would be
    negative are skipped.
    """
    if max_exp < 0 or min_exp < 0:
        raise ValueError("exponent caps must be non-negative")
    found = set()
    for a in range(min_exp, max_exp + 1):
        n = 1 << a
        for b in range(min_exp, (a if kind.symmetric else max_exp) + 1):
            v = kind.lhs(n, 1 << b)
            if v < 0:
                continue
            root, exact = isqrt(v)
            if exact:
                found.add(SolutionTriple(n, 1 << b, root))
    return found


def canonical_order(triples: Iterable[SolutionTriple]) -> list[SolutionTriple]:
    return sorted(triples, key=lambda t: (t.n, t.m, t.x))


# -- closed-form classifications ---------------------------------------------

@dataclass(frozen=True)
class Family:
    """Triples ``generator(t)`` for ``t = 2^s``, ``s >= s_min``."""
    label: str
    generator: Callable[[int], tuple[int, int, int]]
    s_min: int


@dataclass(frozen=True)
class FamilySpec:
    kind: EquationKind
    families: tuple[Family, ...] = ()
    sporadics: tuple[SolutionTriple, ...] = ()

    def __post_init__(self):
        for fam in self.families:
            for s in range(fam.s_min, fam.s_min + 12):
                n, m, x = fam.generator(1 << s)
                if not (is_pow2(n) and is_pow2(m) and self.kind.holds(n, m, x)):
                    raise ValueError(f"{fam.label} at t=2^{s} gives non-solution {(n, m, x)}")
        for t in self.sporadics:
            if not (is_pow2(t.n) and is_pow2(t.m) and self.kind.holds(*t)):
                raise ValueError(f"sporadic {t} does not solve {self.kind.equation}")


THEOREMS = {
    EquationKind.MINUS_PLUS: FamilySpec(
        EquationKind.MINUS_PLUS,
        (
            Family("(t^2, 2t, t-1), t >= 4", lambda t: (t * t, 2 * t, t - 1), 2),
            Family("(t, t, 1), t >= 1", lambda t: (t, t, 1), 0),
        ),
        (SolutionTriple(32, 8, 5), SolutionTriple(128, 8, 11), SolutionTriple(32768, 8, 181)),
    ),
    EquationKind.PLUS_MINUS: FamilySpec(EquationKind.PLUS_MINUS, (), (SolutionTriple(8, 2, 3),)),
    EquationKind.MINUS_MINUS: FamilySpec(EquationKind.MINUS_MINUS, (), (SolutionTriple(4, 2, 1),)),
    EquationKind.PLUS_PLUS: FamilySpec(
        EquationKind.PLUS_PLUS,
        (Family("(t^2, 2t, t+1), t >= 1", lambda t: (t * t, 2 * t, t + 1), 0),),
        (SolutionTriple(32, 16, 7), SolutionTriple(512, 16, 23)),
    ),
}


def _in_window(t: SolutionTriple, min_exp: int, max_exp: int) -> bool:
    return all(min_exp <= log2_exact(v) <= max_exp for v in (t.n, t.m))


def _canonical(kind: EquationKind, t: SolutionTriple) -> SolutionTriple:
    if kind.symmetric and t.n < t.m:
        return SolutionTriple(t.m, t.n, t.x)
    return t


def family_solutions(spec: FamilySpec, max_exp: int, min_exp: int = DEFAULT_MIN_EXP) -> set[SolutionTriple]:
    """Family members and sporadics whose n and m exponents lie in the window."""
    out = set()
    for fam in spec.families:
        # every generator has n, m >= t, so s beyond max_exp is out of window
        for s in range(fam.s_min, max_exp + 1):
            t = SolutionTriple(*fam.generator(1 << s))
            if _in_window(t, min_exp, max_exp):
                out.add(_canonical(spec.kind, t))
    for t in spec.sporadics:
        if _in_window(t, min_exp, max_exp):
            out.add(_canonical(spec.kind, t))
    return out


@dataclass(frozen=True)
class DiffReport:
    missing: tuple = ()
    extra: tuple = ()
    checked_exponent_cap: int = 0

    @property
    def agrees(self) -> bool:
        return not self.missing and not self.extra


def compare_sets(found: set, predicted: set, max_exp: int) -> DiffReport:
    return DiffReport(
        missing=tuple(sorted(predicted - found)),
        extra=tuple(sorted(found - predicted)),
        checked_exponent_cap=max_exp,
    )


@dataclass
class TheoremCheck:
    kind: EquationKind
    max_exp: int
    min_exp: int
    solutions: list[SolutionTriple]
    diff: DiffReport = field(default_factory=DiffReport)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "equation": self.kind.equation,
            "max_exp": self.max_exp,
            "min_exp": self.min_exp,
            "solutions": [t.to_json() for t in self.solutions],
            "missing": [SolutionTriple(*t).to_json() for t in self.diff.missing],
            "extra": [SolutionTriple(*t).to_json() for t in self.diff.extra],
        }


def check_theorem(kind: EquationKind, max_exp: int, min_exp: int = DEFAULT_MIN_EXP) -> TheoremCheck:
    found = solve_equation(kind, max_exp, min_exp)
    predicted = family_solutions(THEOREMS[kind], max_exp, min_exp)
    return TheoremCheck(kind, max_exp, min_exp, canonical_order(found),
                        compare_sets(found, predicted, max_exp))


# -- Lemma 1 and Lemma 2 -----------------------------------------------------

LEMMA1_PRINTED = frozenset({(2, 1), (4, 1), (8, 3), (4, 2)})


def lemma1_solutions(max_exp: int, relaxed: bool = False,
                     min_exp: int = DEFAULT_MIN_EXP) -> set[tuple[int, int]]:
    """Pairs (2^k, x), x >= 1, with ``0 < |2^k - x^2| < 4``.

    ``relaxed`` reads the lower bound as ``0 <=``, admitting exact squares.
    """
    out = set()
    for k in range(min_exp, max_exp + 1):
        p = 1 << k
        lo = isqrt(monus(p, 3))[0]
        hi = isqrt(p + 3)[0]
        for x in range(max(lo, 1), hi + 1):
            sq = x * x
            dist = monus(p, sq) + monus(sq, p)
            if dist < 4 and (relaxed or dist > 0):
                out.add((p, x))
    return out


def lemma2_solutions(p_exp: int, x_cap: int) -> set[tuple[int, int]]:
    """Pairs (x, y), ``1 < x <= x_cap``, ``y > 1``, with ``y^2 - 1 = p^2 (x^2 - 1)``."""
    if p_exp < 1 or x_cap < 2:
        raise ValueError("need p_exp >= 1 and x_cap >= 2")
    p2 = 1 << (2 * p_exp)
    out = set()
    for x in range(2, x_cap + 1):
        y, exact = isqrt(p2 * (x * x - 1) + 1)
        if exact and y > 1:
            out.add((x, y))
    return out


# -- B3: Ramanujan-Nagell and the multiple-solution scan ---------------------

def ramanujan_nagell(max_exp: int) -> set[tuple[int, int]]:
    """All (2^k, x) with 2^k - 7 = x^2, k <= max_exp."""
    out = set()
    for k in range(3, max_exp + 1):
        n = 1 << k
        x, exact = isqrt(n - 7)
        if exact:
            out.add((n, x))
    return out


def b3a_family(d: int) -> bool:
    """D in {7, 23} or D = 2^s - 1 with 2^s >= 16."""
    return d in (7, 23) or (d >= 15 and is_pow2(d + 1))


@dataclass(frozen=True)
class B3AEntry:
    d: int
    witnesses: tuple[tuple[int, int], ...]
    in_family: bool

    def to_json(self) -> dict:
        return {
            "D": str(self.d),
            "witnesses": [{"n": str(n), "x": str(x)} for n, x in self.witnesses],
            "in_family": self.in_family,
        }


def b3a_scan(max_exp: int, max_d: int, odd_only: bool = False, min_exp: int = 0) -> list[B3AEntry]:
    """Every D <= max_d for which n - D is a square for two distinct n = 2^k.

    The defaults take the axiom literally (any D >= 0, any k >= 0). Even D
    then escape the listed family (D = 28: 32 - 28 = 2^2, 64 - 28 = 6^2);
    ``odd_only=True, min_exp=1`` restricts to odd D and n >= 2.

    Walks (k, x) pairs with 0 <= 2^k - x^2 <= max_d rather than all D, so
    cost tracks the number of candidate squares near each power of two.
    """
    hits = defaultdict(list)
    for k in range(min_exp, max_exp + 1):
        n = 1 << k
        for x in range(isqrt(monus(n, max_d))[0], isqrt(n)[0] + 1):
            d = n - x * x
            if 0 <= d <= max_d and (d & 1 or not odd_only):
                hits[d].append((n, x))
    return [
        B3AEntry(d, tuple(sorted(w)), b3a_family(d))
        for d, w in sorted(hits.items())
        if len({n for n, _ in w}) >= 2
    ]


# -- B2 gap scan -------------------------------------------------------------

@dataclass(frozen=True)
class GapRow:
    """Nearest squares to p = 2^k: ``below = p - a^2``, ``above = b^2 - p``,
    with a < sqrt(p) < b the closest integers strictly either side."""
    k: int
    below: int
    above: int

    @property
    def gap(self) -> int:
        return min(self.below, self.above)

    @property
    def consistent(self) -> bool:
        # B2 forbids 0 < D < 2^96 once p >= 2^210
        return self.k < B2_EXPONENT or self.gap >= B2_GAP_FLOOR

    def to_json(self) -> dict:
        return {"k": self.k, "gap": str(self.gap), "below": str(self.below),
                "above": str(self.above), "consistent": self.consistent}


def gap_row(k: int) -> GapRow:
    p = 1 << k
    r, exact = isqrt(p)
    lower = r - 1 if exact else r
    return GapRow(k, p - lower * lower, (r + 1) ** 2 - p)


def b2_gap_scan(min_exp: int, max_exp: int) -> list[GapRow]:
    if min_exp > max_exp:
        raise ValueError("min_exp must not exceed max_exp")
    return [gap_row(k) for k in range(min_exp, max_exp + 1)]
