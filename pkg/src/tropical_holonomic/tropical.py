"""Tropical holonomic relations, the second-order entropy classifier and
witness families.

A sequence ``w`` satisfies the vector ``(A_0, ..., A_n)`` when, for every
window ``j``, the minimum of ``w[j+k] + A_k(j)`` over ``k = 0..n`` is attained
at two or more positions ``k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .poly import (
    Polynomial,
    RationalLike,
    eventual_sign,
    eventual_sign_index,
    format_rational,
    to_rational,
)

CASE1 = "Case1"
CASE2 = "Case2"
CASE3 = "Case3"

ENTROPY = {CASE1: Fraction(1, 3), CASE2: Fraction(1, 4), CASE3: Fraction(0)}


@dataclass(frozen=True)
class HolonomicSystem:
    order: int
    coeffs: tuple[Polynomial, ...]

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise ValueError(f"order must be an integer >= 1, got {self.order!r}")
        coeffs = tuple(self.coeffs)
        if len(coeffs) != self.order + 1:
            raise ValueError(
                f"order {self.order} needs {self.order + 1} coefficient polynomials, "
                f"got {len(coeffs)}"
            )
        if not all(isinstance(p, Polynomial) for p in coeffs):
            raise TypeError("coefficients must be Polynomial instances")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def of(cls, *coeffs: Polynomial | RationalLike | Sequence[RationalLike]) -> "HolonomicSystem":
        """Build a system from polynomials, constants or coefficient lists."""
        polys = []
        for c in coeffs:
            if isinstance(c, Polynomial):
                polys.append(c)
            elif isinstance(c, (list, tuple)):
                polys.append(Polynomial(c))
            else:
                polys.append(Polynomial.constant(c))
        return cls(len(polys) - 1, tuple(polys))

    def window_values(self, w: Sequence[Fraction], j: int) -> list[Fraction]:
        return [w[j + k] + a(j) for k, a in enumerate(self.coeffs)]

    def to_json(self) -> dict[str, Any]:
        return {"order": self.order, "coeffs": [p.to_json() for p in self.coeffs]}

    @classmethod
    def from_json(cls, data: Any) -> "HolonomicSystem":
        if not isinstance(data, dict) or "order" not in data or "coeffs" not in data:
            raise ValueError('system JSON must be an object with "order" and "coeffs"')
        if not isinstance(data["coeffs"], list):
            raise ValueError('"coeffs" must be a JSON array')
        order = data["order"]
        if isinstance(order, bool) or not isinstance(order, int):
            raise ValueError('"order" must be an integer')
        return cls(order, tuple(Polynomial.from_json(c) for c in data["coeffs"]))


def as_sequence(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(to_rational(v) for v in values)


def sequence_to_json(w: Sequence[Fraction]) -> list[str]:
    return [format_rational(v) for v in w]


def sequence_from_json(data: Any) -> tuple[Fraction, ...]:
    if not isinstance(data, list):
        raise ValueError("a sequence must be a JSON array of rational strings")
    return as_sequence(data)


# ---------------------------------------------------------------------------
# relation semantics
# ---------------------------------------------------------------------------

def argmin_set(sys: HolonomicSystem, w: Sequence[Fraction], j: int) -> frozenset[int]:
    """Positions ``k`` at which window ``j`` attains its minimum."""
    if not 0 <= j <= len(w) - sys.order - 1:
        raise IndexError(f"window {j} out of range for a sequence of length {len(w)}")
    vals = sys.window_values(w, j)
    m = min(vals)
    return frozenset(k for k, v in enumerate(vals) if v == m)


def first_violation(sys: HolonomicSystem, w: Sequence[Fraction]) -> int | None:
    """Index of the first window whose minimum is attained only once, else None."""
    for j in range(len(w) - sys.order):
        if len(argmin_set(sys, w, j)) < 2:
            return j
    return None


def check_sequence(sys: HolonomicSystem, w: Sequence[Fraction]) -> bool:
    return first_violation(sys, w) is None


def extend_greedy(sys: HolonomicSystem, w: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Append the value that makes the last term tie with the window minimum."""
    n = sys.order
    if len(w) < n:
        raise ValueError(f"need at least {n} values to extend, got {len(w)}")
    w = as_sequence(w)
    bad = first_violation(sys, w)
    if bad is not None:
        raise ValueError(f"input fails the relation at window {bad}")
    j = len(w) - n
    lowest = min(w[j + k] + sys.coeffs[k](j) for k in range(n))
    return w + (lowest - sys.coeffs[n](j),)


# ---------------------------------------------------------------------------
# classifier
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EntropyClass:
    case_id: str
    entropy: Fraction
    D: Polynomial
    E: Polynomial
    j0: int = 0
    # indices below 4*j0 where D is not yet positive (Case2 only)
    exceptional: tuple[int, ...] = field(default=())

    def to_json(self) -> dict[str, Any]:
        return {
            "case": self.case_id,
            "entropy": format_rational(self.entropy),
            "D": self.D.to_json(),
            "E": self.E.to_json(),
            "j0": self.j0,
            "exceptional": list(self.exceptional),
        }


def diagnostics(A: Polynomial, B: Polynomial, C: Polynomial) -> tuple[Polynomial, Polynomial]:
    """``D(x) = B(x-1) + B(x) - A(x) - C(x-1)`` and
    ``E(x) = B(x+1) - B(x-1) - A(x+1) + A(x) - C(x) + C(x-1)``.

    ``E(x) == D(x+1) - D(x)`` identically.
    """
    D = B.shift(-1) + B - A - C.shift(-1)
    E = B.shift(1) - B.shift(-1) - A.shift(1) + A - C + C.shift(-1)
    return D, E


def threshold_j0(D: Polynomial) -> int:
    """Smallest ``j0`` with ``4*j0 >= eventual_sign_index(D)``; 0 for ``D == 0``."""
    if D.is_zero():
        return 0
    return math.ceil(eventual_sign_index(D) / 4)


def classify(A: Polynomial, B: Polynomial, C: Polynomial) -> EntropyClass:
    D, E = diagnostics(A, B, C)
    if D.is_zero():
        return EntropyClass(CASE1, ENTROPY[CASE1], D, E, 0)
    j0 = threshold_j0(D)
    if eventual_sign(D) > 0 and E.is_zero():
        exceptional = tuple(i for i in range(4 * j0) if D(i) <= 0)
        return EntropyClass(CASE2, ENTROPY[CASE2], D, E, j0, exceptional)
    return EntropyClass(CASE3, ENTROPY[CASE3], D, E, j0)


def classify_system(sys: HolonomicSystem) -> EntropyClass:
    if sys.order != 2:
        raise ValueError(f"the classifier covers order 2 only, got order {sys.order}")
    return classify(*sys.coeffs)


# ---------------------------------------------------------------------------
# witness families
# ---------------------------------------------------------------------------

def _check_slacks(slacks: Sequence[Fraction], needed: int) -> list[Fraction]:
    slacks = [to_rational(s) for s in slacks]
    if len(slacks) < needed:
        raise ValueError(f"need {needed} slacks, got {len(slacks)}")
    for s in slacks:
        if s < 0:
            raise ValueError(f"slacks must be nonnegative, got {format_rational(s)}")
    return slacks


def case1_free_count(N: int) -> int:
    """Number of indices ``3j + 2`` below ``N``."""
    return max(0, N) // 3


def witness_case1(
    A: Polynomial,
    B: Polynomial,
    C: Polynomial,
    N: int,
    u0: RationalLike = 0,
    slacks: Sequence[RationalLike] = (),
) -> tuple[Fraction, ...]:
    """A length-``N`` member of the one-in-three free family.

    Index ``3j + 2`` is the free coordinate; ``slacks[j] >= 0`` is how far it
    sits above its lower bound ``w[3j] + A(3j) - C(3j)``.
    """
    if classify(A, B, C).case_id != CASE1:
        raise ValueError("witness_case1 needs a Case1 system (D identically zero)")
    if N < 0:
        raise ValueError("N must be nonnegative")
    slacks = _check_slacks(slacks, case1_free_count(N))
    if N == 0:
        return ()
    w = [Fraction(0)] * N
    w[0] = to_rational(u0)
    j = 0
    while 3 * j < N:
        t = 3 * j
        # w[3j+1] and w[3j+2] both hang off w[3j]; w[3j+3] hangs off w[3j+1]
        v1 = w[t] + B(t - 1) - C(t - 1)
        if t + 1 < N:
            w[t + 1] = v1
        if t + 2 < N:
            w[t + 2] = w[t] + A(t) - C(t) + slacks[j]
        if t + 3 < N:
            w[t + 3] = v1 + A(t + 1) - C(t + 1)
        j += 1
    return tuple(w)


def case2_block_count(N: int, j0: int) -> int:
    """Number of free indices ``4j + 3`` (``j >= j0``) below ``N``."""
    start = 4 * j0 + 3
    return 0 if N <= start else (N - start + 3) // 4


def witness_case2(
    A: Polynomial,
    B: Polynomial,
    C: Polynomial,
    N: int,
    prefix: Sequence[RationalLike],
    slacks: Sequence[RationalLike] = (),
) -> tuple[Fraction, ...]:
    """Extend ``prefix`` (length ``4*j0 + 1``) to length ``N`` by blocks of four.

    Each block starting at ``4j`` has one free coordinate ``4j + 3``, placed
    ``slacks[j - j0] >= 0`` above its lower bound.

    Since ``E`` is the forward difference of ``D``, a Case2 system has a
    constant positive ``D`` and hence ``j0 == 0``: the prefix is one value.
    """
    cls = classify(A, B, C)
    if cls.case_id != CASE2:
        raise ValueError("witness_case2 needs a Case2 system")
    j0 = cls.j0
    prefix = as_sequence(prefix)
    if len(prefix) != 4 * j0 + 1:
        raise ValueError(f"prefix must have length 4*j0 + 1 = {4 * j0 + 1}, got {len(prefix)}")
    sys = HolonomicSystem.of(A, B, C)
    bad = first_violation(sys, prefix)
    if bad is not None:
        raise ValueError(f"prefix fails the relation at window {bad}")
    slacks = _check_slacks(slacks, case2_block_count(N, j0))
    if N <= len(prefix):
        return prefix[:N]
    w = list(prefix) + [Fraction(0)] * (N - len(prefix))
    j = j0
    while 4 * j + 1 < N:
        t = 4 * j
        v2 = w[t] + A(t) - C(t)
        vals = {
            t + 1: w[t] + B(t - 1) - C(t - 1),
            t + 2: v2,
            t + 4: v2 + A(t + 2) - C(t + 2),
        }
        if t + 3 < N:
            vals[t + 3] = v2 + B(t + 1) - C(t + 1) + slacks[j - j0]
        for k, v in vals.items():
            if k < N:
                w[k] = v
        j += 1
    return tuple(w)
