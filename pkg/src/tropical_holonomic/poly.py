"""Exact univariate polynomials over the rationals.

Coefficients are stored low degree first as :class:`fractions.Fraction`
values, always trimmed of trailing zeros so that equality is structural.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

RationalLike = Union[int, Fraction, str]

# degree of the zero polynomial
NEG_INF = float("-inf")


def to_rational(value: RationalLike) -> Fraction:
    """Parse ``value`` as an exact rational; floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}")
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        # Fraction() also accepts decimals and exponents; only p or p/q is allowed
        body = text[1:] if text[0] in "+-" else text
        num, _, den = body.partition("/")
        if not num.isdigit() or (den and not den.isdigit()):
            raise ValueError(f"malformed rational string {value!r}")
        return Fraction(text)
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    """Canonical ``p`` or ``p/q`` string."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _trim(coeffs: Iterable[Fraction]) -> tuple[Fraction, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[Fraction, ...] = ()

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        object.__setattr__(self, "coeffs", _trim(to_rational(c) for c in coeffs))

    @classmethod
    def constant(cls, c: RationalLike) -> "Polynomial":
        return cls([c])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, i: RationalLike) -> Fraction:
        x = to_rational(i)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return combine(self, other, 1)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return combine(self, other, -1)

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    def scale(self, k: RationalLike) -> "Polynomial":
        k = to_rational(k)
        return Polynomial(k * c for c in self.coeffs)

    def shift(self, c: int) -> "Polynomial":
        return shift(self, c)

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[RationalLike]) -> "Polynomial":
        if not isinstance(data, (list, tuple)):
            raise ValueError(f"polynomial must be a JSON array, got {type(data).__name__}")
        return cls(data)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Polynomial(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            s = format_rational(c)
            terms.append(s if k == 0 else f"{s}*x" if k == 1 else f"{s}*x^{k}")
        return "Polynomial(" + " + ".join(terms) + ")"


def evaluate(p: Polynomial, i: RationalLike) -> Fraction:
    return p(i)


def combine(p: Polynomial, q: Polynomial, sign: int) -> Polynomial:
    """Return ``p + q`` (``sign=1``) or ``p - q`` (``sign=-1``)."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    n = max(len(p.coeffs), len(q.coeffs))
    a = p.coeffs + (Fraction(0),) * (n - len(p.coeffs))
    b = q.coeffs + (Fraction(0),) * (n - len(q.coeffs))
    return Polynomial(x + sign * y for x, y in zip(a, b))


def shift(p: Polynomial, c: int) -> Polynomial:
    """Return the polynomial ``x -> p(x + c)``.

    Expanded with Horner's scheme in the ring, so the result is exact.
    """
    step = Polynomial([c, 1])
    acc = Polynomial()
    for coeff in reversed(p.coeffs):
        acc = acc * step + Polynomial([coeff])
    return acc


def eventual_sign(p: Polynomial) -> int:
    """Sign of ``p(j)`` for all large ``j``: the sign of the leading coefficient."""
    if p.is_zero():
        return 0
    return 1 if p.leading > 0 else -1


def eventual_sign_index(p: Polynomial) -> int:
    """An integer ``M >= 0`` such that ``p(i)`` has the eventual sign for all ``i >= M``.

    Uses the Cauchy root bound ``1 + max |a_k / a_d|`` over the non-leading
    coefficients; every real root lies strictly below it.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no eventual sign index")
    if p.degree == 0:
        return 0
    lead = abs(p.leading)
    bound = 1 + max(abs(a) for a in p.coeffs[:-1]) / lead
    return max(0, math.ceil(bound))
