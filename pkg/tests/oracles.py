"""Independent reference routines used only by the tests.

Feasibility by Fourier-Motzkin elimination and ranks / null spaces by sympy;
none of this shares code with the simplex or the difference closure.
"""
from fractions import Fraction
from itertools import product

import sympy

from tropical_holonomic.dimension import tie_subsets


def _normalize(row, rhs):
    lead = next((abs(a) for a in row if a != 0), None)
    if lead is None:
        return row, rhs
    return tuple(a / lead for a in row), rhs / lead


def _tightest(cons):
    """Keep one bound per direction: the smallest rhs, strict winning ties."""
    best = {}
    for row, rhs, strict in cons:
        row, rhs = _normalize(row, rhs)
        cur = best.get(row)
        if cur is None or rhs < cur[0] or (rhs == cur[0] and strict):
            best[row] = (rhs, strict)
    return [(row, rhs, strict) for row, (rhs, strict) in best.items()]


def fm_feasible(n, equalities, stricts):
    """Decide ``E x = e, S x < s``: substitute the equalities away, then
    eliminate the remaining variables one by one."""
    eqs = [([Fraction(a) for a in row], Fraction(rhs)) for row, rhs in equalities]
    cons = [(tuple(Fraction(a) for a in row), Fraction(rhs), True) for row, rhs in stricts]
    while eqs:
        row, rhs = eqs.pop()
        k = next((i for i, a in enumerate(row) if a != 0), None)
        if k is None:
            if rhs != 0:
                return False
            continue
        def sub(r, b):
            f = r[k] / row[k]
            return [x - f * y for x, y in zip(r, row)], b - f * rhs
        eqs = [sub(r, b) for r, b in eqs]
        cons = [(tuple(sub(r, b)[0]), sub(r, b)[1], st) for r, b, st in cons]
    cons = _tightest(cons)
    for k in range(n):
        pos, neg, rest = [], [], []
        for c in cons:
            (pos if c[0][k] > 0 else neg if c[0][k] < 0 else rest).append(c)
        new = list(rest)
        for (rp, bp, sp), (rn, bn, sn) in product(pos, neg):
            fp, fn = 1 / rp[k], -1 / rn[k]
            row = tuple(a * fp + b * fn for a, b in zip(rp, rn))
            new.append((row, bp * fp + bn * fn, sp or sn))
        cons = _tightest(new)
    return all(b > 0 if s else b >= 0 for _, b, s in cons)


def sympy_rank(rows, n):
    if not rows:
        return 0
    return sympy.Matrix([[sympy.Rational(a.numerator, a.denominator) for a in r] for r in rows]).rank()


def nullspace(rows, n):
    if not rows:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    M = sympy.Matrix([[sympy.Rational(a.numerator, a.denominator) for a in r] for r in rows])
    out = []
    for v in M.nullspace():
        out.append([Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in v])
    return out


def perturbation_dimension(n, equalities, stricts, witness):
    """Count null-space directions along which ``witness`` stays strictly feasible."""
    for row, rhs in equalities:
        assert sum(a * x for a, x in zip(row, witness)) == rhs
    margins = [rhs - sum(a * x for a, x in zip(row, witness)) for row, rhs in stricts]
    assert all(m > 0 for m in margins)
    count = 0
    for z in nullspace([r for r, _ in equalities], n):
        slopes = [abs(sum(a * x for a, x in zip(row, z))) for row, _ in stricts]
        # a step smaller than every margin / slope keeps each inequality strict
        step = min([m / (2 * s) for m, s in zip(margins, slopes) if s] + [Fraction(1)])
        ok = True
        for sign in (1, -1):
            p = [x + sign * step * d for x, d in zip(witness, z)]
            if any(a != 0 for a in z):
                for row, rhs in equalities:
                    ok &= sum(a * x for a, x in zip(row, p)) == rhs
                for row, rhs in stricts:
                    ok &= sum(a * x for a, x in zip(row, p)) < rhs
        count += ok
    return count


def window_constraints(sys, pat, N):
    """Cell constraints written out from the definition, independent of the package."""
    eqs, stricts = [], []
    for j, S in enumerate(pat):
        vals = [sys.coeffs[k](j) for k in range(sys.order + 1)]
        S = sorted(S)
        for p in S[1:]:
            row = [Fraction(0)] * N
            row[j + S[0]] += 1
            row[j + p] -= 1
            eqs.append((row, vals[p] - vals[S[0]]))
        for r in range(sys.order + 1):
            if r not in S:
                for p in S:
                    row = [Fraction(0)] * N
                    row[j + p] += 1
                    row[j + r] -= 1
                    stricts.append((row, vals[r] - vals[p]))
    return eqs, stricts


def brute_force_dim(sys, N):
    """``dim W_N`` over all patterns, feasibility by elimination and rank by sympy."""
    if N <= sys.order:
        return N
    best = -1
    for pat in product(tie_subsets(sys.order), repeat=N - sys.order):
        eqs, stricts = window_constraints(sys, pat, N)
        if fm_feasible(N, eqs, stricts):
            best = max(best, N - sympy_rank([r for r, _ in eqs], N))
    return best


def brute_force_patterns(sys, N):
    out = []
    for pat in product(tie_subsets(sys.order), repeat=N - sys.order):
        eqs, stricts = window_constraints(sys, pat, N)
        if fm_feasible(N, eqs, stricts):
            out.append(pat)
    return out
