"""Checking the axioms A1-A21 and B1-B3 in the standard model.

A-axioms are checked by stratified sampling of their free variables. B1 is
evaluated exactly on a fixed grid plus samples, both as printed and with
its x^88 term repaired. B2 and B3 are checked exhaustively over scan
windows, evaluating the axiom formula at every witness the scan produces.
"""

from __future__ import annotations

import random
import time
import zlib
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import diophantine
from .numeric import DomainError, checked_sub, isqrt, pow2
from .parser import DomainConstraint, parse_fixture, parse_formula
from .syntax import EvalError, Formula, eval_formula, eval_term, free_vars

DEFAULT_SAMPLES = 10_000
DEFAULT_SEED = 42
B2_SCAN_MAX_EXP = 400
B3A_SCAN_MAX_EXP = 30
B3A_SCAN_MAX_D = 10**6
B3B_SCAN_MAX_EXP = 300


@dataclass(frozen=True)
class AxiomSpec:
    id: str
    formula: Formula
    domain: tuple[DomainConstraint, ...]
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        names = [d.var for d in self.domain]
        if len(set(names)) != len(names):
            raise ValueError(f"{self.id}: a variable has more than one domain constraint")
        missing = free_vars(self.formula) - set(names)
        if missing:
            raise ValueError(f"{self.id}: no domain for {sorted(missing)}")
        sampled = {d.var for d in self.domain if d.kind != "def"}
        for d in self.domain:
            if d.kind == "def" and not free_vars(d.term) <= sampled:
                raise ValueError(f"{self.id}: {d} refers to a non-sampled variable")


def load_registry(text: str) -> list[AxiomSpec]:
    return [AxiomSpec(s.id, s.formula, s.domain, s.notes) for s in parse_fixture(text)]


def default_fixture_text() -> str:
    return resources.files("aoecheck").joinpath("data/axioms.aoe").read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def _default_registry() -> tuple[AxiomSpec, ...]:
    return tuple(load_registry(default_fixture_text()))


def axiom_registry(path: Optional[Path] = None) -> list[AxiomSpec]:
    if path is None:
        return list(_default_registry())
    return load_registry(Path(path).read_text(encoding="utf-8"))


def get_axiom(axiom_id: str, registry: Optional[Sequence[AxiomSpec]] = None) -> AxiomSpec:
    for spec in registry if registry is not None else _default_registry():
        if spec.id == axiom_id:
            return spec
    raise KeyError(axiom_id)


def a21_restricted() -> AxiomSpec:
    """A21 with the extra premise n <= m."""
    base = get_axiom("A21")
    formula = parse_formula("pow2(n) /\\ pow2(m) /\\ n <= m -> divp2(m, n) * n = m")
    return AxiomSpec("A21R", formula, base.domain, ("A21 restricted to n <= m",))


# -- sampling ----------------------------------------------------------------

def _rng(spec_id: str, seed: int, index: int) -> random.Random:
    return random.Random((((seed << 32) | zlib.crc32(spec_id.encode())) << 40) | index)


def _draw(rng: random.Random, d: DomainConstraint) -> int:
    if d.kind == "pow2":
        return pow2(rng.randint(0, d.cap))
    # uniform bit length, then uniform within it
    bits = rng.randint(0, d.cap)
    value = (1 << (bits - 1)) | rng.getrandbits(bits - 1) if bits else 0
    return value | 1 if d.kind == "odd" else value


def sample_env(spec: AxiomSpec, seed: int, index: int) -> dict[str, int]:
    rng = _rng(spec.id, seed, index)
    env = {}
    for d in spec.domain:
        if d.kind != "def":
            env[d.var] = _draw(rng, d)
    for d in spec.domain:
        if d.kind == "def":
            env[d.var] = eval_term(d.term, env)
    return env


# -- reports -----------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    env: dict
    note: str

    def to_json(self) -> dict:
        return {"env": {k: str(v) for k, v in self.env.items()}, "note": self.note}


@dataclass
class CheckReport:
    axiom_id: str
    mode: str  # "sampled" | "exhaustive"
    samples_run: int
    seed: int
    violations: list[Violation] = field(default_factory=list)
    elapsed: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "axiom": self.axiom_id,
            "mode": self.mode,
            "samples": self.samples_run,
            "seed": self.seed,
            "passed": self.passed,
            "violation_count": len(self.violations),
            "violations": [v.to_json() for v in self.violations],
            "notes": list(self.notes),
        }
        if timings:
            out["elapsed_ms"] = round(self.elapsed * 1000, 3)
        return out


def _evaluate(spec: AxiomSpec, env: dict) -> Optional[Violation]:
    try:
        if eval_formula(spec.formula, env):
            return None
        return Violation(env, "false")
    except (EvalError, DomainError) as e:
        return Violation(env, f"eval-error: {e}")


def check_envs(spec: AxiomSpec, envs: Iterable[dict], seed: int = 0, mode: str = "exhaustive") -> CheckReport:
    start = time.perf_counter()
    report = CheckReport(spec.id, mode, 0, seed)
    for env in envs:
        report.samples_run += 1
        v = _evaluate(spec, env)
        if v is not None:
            report.violations.append(v)
    report.elapsed = time.perf_counter() - start
    return report


def check_axiom(spec: AxiomSpec, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> CheckReport:
    """Evaluate ``spec`` on ``samples`` sampled environments; never stops early."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    envs = (sample_env(spec, seed, i) for i in range(samples))
    return check_envs(spec, envs, seed, "sampled")


# -- B1 ----------------------------------------------------------------------

AS_WRITTEN = "as_written"
CORRECTED = "corrected"
B1_VARIANTS = (AS_WRITTEN, CORRECTED)

# (coefficient, q degree, x degree); the bracket totals are scaled below
_B1_LHS = (
    (2**5 * 11513, 26, 10),
    (2**6 * 1965, 24, 12),
    (2**4 * 1215, 22, 14),
    (2**4 * 75, 20, 16),
)
_B1_LHS_LAST = {AS_WRITTEN: (25, 18, 88), CORRECTED: (25, 18, 18)}
_B1_RHS_MAIN = (
    (2**10, 36, 0),
    (2**10 * 45, 34, 2),
    (2**8 * 2445, 32, 4),
    (2**10 * 2415, 30, 6),
    (2**7 * 31545, 28, 8),
    (2**7 * 23063, 26, 10),
    (2**5 * 31545, 24, 12),
    (2**6 * 2415, 22, 14),
    (2**2 * 2445, 20, 16),
    (2**2 * 45, 18, 18),
    (1, 16, 20),
)
_B1_RHS_SUB = (
    (2**5, 18, 0),
    (2**4 * 45, 16, 2),
    (2**4 * 105, 14, 4),
    (2**3 * 45, 10, 8),
    (1, 8, 10),
)

B1_GRID_Q_EXPONENTS = tuple(range(7))
B1_GRID_X = (0, 1, 2, 3, 5, 10)


def _poly(terms, q: int, x: int) -> int:
    return sum(c * q**dq * x**dx for c, dq, dx in terms)


@dataclass(frozen=True)
class B1Sides:
    lhs: int
    rhs: int
    variant: str
    q_exponent: int
    x: int

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs

    def to_json(self) -> dict:
        return {"variant": self.variant, "q_exponent": self.q_exponent, "x": str(self.x),
                "lhs": str(self.lhs), "rhs": str(self.rhs), "holds": self.holds}


def eval_b1_sides(q_exponent: int, x: int, variant: str = AS_WRITTEN) -> B1Sides:
    """Both sides of B1 at q = 2^q_exponent, exactly.

    Raises DomainError if the subtracted 2^439 bracket exceeds the rest of
    the right-hand side.
    """
    if variant not in B1_VARIANTS:
        raise ValueError(f"unknown B1 variant {variant!r}")
    q = pow2(q_exponent)
    lhs = 2**862 * _poly(_B1_LHS + (_B1_LHS_LAST[variant],), q, x)
    rhs = checked_sub(2**860 * _poly(_B1_RHS_MAIN, q, x), 2**439 * _poly(_B1_RHS_SUB, q, x)) + 1
    return B1Sides(lhs, rhs, variant, q_exponent, x)


def b1_grid(variant: str) -> list[B1Sides]:
    return [eval_b1_sides(e, x, variant) for e in B1_GRID_Q_EXPONENTS for x in B1_GRID_X]


def check_b1(spec: AxiomSpec, variant: str, samples: int, seed: int) -> CheckReport:
    """Grid plus sampled points; each point is evaluated twice, once from the
    coefficient tables and once from the parsed formula, and the routes must agree."""
    start = time.perf_counter()
    points = [(e, x) for e in B1_GRID_Q_EXPONENTS for x in B1_GRID_X]
    for i in range(samples):
        env = sample_env(spec, seed, i)
        points.append((env["q"].bit_length() - 1, env["x"]))
    lhs_term, rhs_term = spec.formula.right.left, spec.formula.right.right
    report = CheckReport(spec.id, "sampled", 0, seed)
    holding = 0
    for e, x in points:
        q = pow2(e)
        env = {"q": q, "x": x, "p": 2 * q * q}
        report.samples_run += 1
        try:
            sides = eval_b1_sides(e, x, variant)
        except DomainError as err:
            report.violations.append(Violation(env, f"eval-error: {err}"))
            continue
        if (eval_term(lhs_term, env), eval_term(rhs_term, env)) != (sides.lhs, sides.rhs):
            report.violations.append(Violation(env, "formula and coefficient tables disagree"))
        elif not sides.holds:
            report.violations.append(Violation(env, "lhs >= rhs"))
        else:
            holding += 1
    grid = b1_grid(variant)
    report.notes.append(f"variant {variant}: inequality holds at {holding}/{report.samples_run} points")
    report.notes.append(
        "grid x=" + ",".join(map(str, B1_GRID_X)) + " per q exponent 0..6: "
        + " ".join("".join("T" if s.holds else "F" for s in grid[i:i + len(B1_GRID_X)])
                   for i in range(0, len(grid), len(B1_GRID_X)))
    )
    report.elapsed = time.perf_counter() - start
    return report


# -- B2 / B3 -----------------------------------------------------------------

def check_b2(spec: AxiomSpec, max_exp: int = B2_SCAN_MAX_EXP, seed: int = DEFAULT_SEED) -> CheckReport:
    """Evaluate B2A/B2B at the nearest square on the relevant side of every
    2^k, k <= max_exp. Any other x only makes D larger, so this covers the window."""
    rows = diophantine.b2_gap_scan(0, max_exp)
    envs = []
    for row in rows:
        p = 1 << row.k
        r, exact = isqrt(p)
        if spec.id == "B2A":
            x = r - 1 if exact else r
            envs.append({"p": p, "x": x, "D": p - x * x})
        else:
            envs.append({"p": p, "x": r + 1, "D": (r + 1) ** 2 - p})
    report = check_envs(spec, envs, seed)
    side = [row.below if spec.id == "B2A" else row.above for row in rows if row.k >= diophantine.B2_EXPONENT]
    report.notes.append(f"consistent up to exponent {max_exp}; not a proof beyond it")
    if side:
        report.notes.append(f"smallest D for k >= 210 has bit length {min(side).bit_length()}")
    return report


def check_b3a(spec: AxiomSpec, max_exp: int = B3A_SCAN_MAX_EXP, max_d: int = B3A_SCAN_MAX_D,
              seed: int = DEFAULT_SEED) -> CheckReport:
    start = time.perf_counter()
    entries = diophantine.b3a_scan(max_exp, max_d)
    report = CheckReport(spec.id, "exhaustive", 0, seed)
    for entry in entries:
        (n, x), (m, y) = _two_distinct(entry.witnesses)
        env = {"n": n, "m": m, "x": x, "y": y, "D": entry.d}
        report.samples_run += 1
        v = _evaluate(spec, env)
        if (v is None) != entry.in_family:
            report.violations.append(Violation(env, "scan and formula disagree"))
        elif v is not None:
            report.violations.append(Violation(env, "D outside {7, 23, 2^s - 1 (2^s >= 16)}"))
    odd = diophantine.b3a_scan(max_exp, max_d, odd_only=True, min_exp=1)
    report.notes.append(f"window: n = 2^k with k <= {max_exp}, 0 <= D <= {max_d}")
    report.notes.append(
        f"{sum(not e.in_family for e in entries)} of {len(entries)} admissible D lie outside the family; "
        f"restricted to odd D and n >= 2: {sum(not e.in_family for e in odd)} of {len(odd)}"
    )
    report.elapsed = time.perf_counter() - start
    return report


def _two_distinct(witnesses):
    first = witnesses[0]
    second = next(w for w in witnesses if w[0] != first[0])
    return first, second


def check_b3b(spec: AxiomSpec, max_exp: int = B3B_SCAN_MAX_EXP, seed: int = DEFAULT_SEED) -> CheckReport:
    envs = []
    for k in range(3, max_exp + 1):
        n = 1 << k
        envs.append({"n": n, "x": isqrt(n - 7)[0]})
    report = check_envs(spec, envs, seed)
    exps = sorted(n.bit_length() - 1 for n, _ in diophantine.ramanujan_nagell(max_exp))
    report.notes.append(f"2^k - 7 is a square for k in {exps} (k <= {max_exp})")
    report.notes.append("the printed list has 32678; the solution is 32768 = 181^2 + 7")
    return report


def check_all(samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
              only: Optional[Iterable[str]] = None,
              registry: Optional[Sequence[AxiomSpec]] = None) -> list[CheckReport]:
    """One report per registry entry, in registry order."""
    specs = list(registry) if registry is not None else list(_default_registry())
    if only is not None:
        wanted = set(only)
        unknown = wanted - {s.id for s in specs}
        if unknown:
            raise KeyError(f"unknown axiom ids: {', '.join(sorted(unknown))}")
        specs = [s for s in specs if s.id in wanted]
    return [_check_one(s, samples, seed) for s in specs]


def _check_one(spec: AxiomSpec, samples: int, seed: int) -> CheckReport:
    if spec.id == "B1":
        return check_b1(spec, AS_WRITTEN, samples, seed)
    if spec.id == "B1C":
        return check_b1(spec, CORRECTED, samples, seed)
    if spec.id in ("B2A", "B2B"):
        return check_b2(spec, seed=seed)
    if spec.id == "B3A":
        return check_b3a(spec, seed=seed)
    if spec.id == "B3B":
        return check_b3b(spec, seed=seed)
    report = check_axiom(spec, samples, seed)
    if spec.id == "A21":
        restricted = check_axiom(a21_restricted(), samples, seed)
        outside = sum(1 for v in report.violations if v.env["n"] > v.env["m"])
        report.notes.append(f"{outside}/{len(report.violations)} violations have n > m")
        report.notes.append(
            f"restricted to n <= m: {len(restricted.violations)} violations in {restricted.samples_run} samples"
        )
    return report
