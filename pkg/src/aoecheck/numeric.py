"""Exact arithmetic on the naturals backing every symbol of the theory.

Naturals are plain Python ints (arbitrary precision, canonical by
construction); each function here assumes non-negative input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

Natural = int


class DomainError(ValueError):
    """An operation was applied outside the domain its axiom guards."""


def _require_natural(n: int, name: str = "n") -> None:
    if n < 0:
        raise DomainError(f"{name} must be a natural number, got {n}")


def isqrt(n: Natural) -> tuple[Natural, bool]:
    """Return ``(root, exact)`` with ``root**2 <= n < (root+1)**2``."""
    _require_natural(n)
    root = math.isqrt(n)
    return root, root * root == n


def is_square(n: Natural) -> bool:
    return n >= 0 and isqrt(n)[1]


def pow2(e: int) -> Natural:
    if e < 0:
        raise DomainError(f"exponent must be non-negative, got {e}")
    return 1 << e


def is_pow2(n: Natural) -> bool:
    """The predicate pow2(n): n >= 1 and n has no odd divisor above 1."""
    return n > 0 and n & (n - 1) == 0


def log2_exact(n: Natural) -> int:
    """Exponent of a power of two."""
    if not is_pow2(n):
        raise DomainError(f"{n} is not a power of two")
    return n.bit_length() - 1


@dataclass(frozen=True)
class Pow2:
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise DomainError(f"exponent must be non-negative, got {self.exponent}")

    @property
    def value(self) -> Natural:
        return 1 << self.exponent

    @classmethod
    def of(cls, n: Natural) -> "Pow2":
        return cls(log2_exact(n))


class TauOmega(NamedTuple):
    tau: Natural
    omega: Natural


def two_adic_valuation(n: Natural) -> int:
    if n <= 0:
        raise DomainError("2-adic valuation of 0 is undefined")
    return (n & -n).bit_length() - 1


def tau_omega(n: Natural) -> TauOmega:
    """Split ``n > 0`` as ``tau * omega`` with tau a power of two, omega odd."""
    if n <= 0:
        raise DomainError("tau/omega require 0 < n")
    v = two_adic_valuation(n)
    return TauOmega(1 << v, n >> v)


def half(n: Natural) -> Natural:
    _require_natural(n)
    return n >> 1


def monus(a: Natural, b: Natural) -> Natural:
    """Truncated subtraction: ``a - b`` if ``a >= b`` else 0."""
    return a - b if a >= b else 0


def checked_sub(a: Natural, b: Natural) -> Natural:
    if b > a:
        raise DomainError(f"subtraction would go negative ({a} - {b})")
    return a - b


def div_pow2(m: Natural, n: Natural) -> Natural:
    """Floor division of m by the power of two n.

    Non-divisible inputs are floored rather than rejected, so that the
    axiom ``divp2(m, n) * n = m`` can fail observably when n > m.
    """
    if not is_pow2(n):
        raise DomainError(f"divp2 denominator {n} is not a power of two")
    _require_natural(m, "m")
    return m >> (n.bit_length() - 1)


def square_mod4(y: Natural) -> int:
    return (y * y) & 3
