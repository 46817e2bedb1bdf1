"""Exact rational linear algebra and strict feasibility of polyhedral cells.

A cell is ``{w : E w = e, S w < s}``.  Strict feasibility is decided by the
auxiliary program ``max t  s.t.  E w = e,  S w + t <= s,  t <= 1``, solved with
a dense two-phase simplex over :class:`fractions.Fraction` using Bland's rule.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .poly import format_rational, to_rational

Row = tuple[Fraction, ...]
Constraint = tuple[Row, Fraction]

_ZERO = Fraction(0)


@dataclass(frozen=True)
class LinearSystem:
    ambient_dim: int
    equalities: tuple[Constraint, ...] = ()
    # each (row, rhs) encodes row . w < rhs
    strict_inequalities: tuple[Constraint, ...] = ()

    def __post_init__(self):
        if self.ambient_dim < 0:
            raise ValueError("ambient_dim must be nonnegative")
        for name in ("equalities", "strict_inequalities"):
            rows = tuple(
                (tuple(to_rational(a) for a in row), to_rational(rhs))
                for row, rhs in getattr(self, name)
            )
            for row, _ in rows:
                if len(row) != self.ambient_dim:
                    raise ValueError(
                        f"row of length {len(row)} in a system of dimension {self.ambient_dim}"
                    )
            object.__setattr__(self, name, rows)

    def with_equality(self, row: Sequence, rhs) -> "LinearSystem":
        return LinearSystem(self.ambient_dim, self.equalities + ((tuple(row), rhs),), self.strict_inequalities)

    def with_strict(self, row: Sequence, rhs) -> "LinearSystem":
        return LinearSystem(self.ambient_dim, self.equalities, self.strict_inequalities + ((tuple(row), rhs),))

    def to_json(self) -> str:
        """Debug dump for reproducing a failure."""
        def enc(cs):
            return [{"row": [format_rational(a) for a in row], "rhs": format_rational(r)} for row, r in cs]
        return json.dumps({
            "ambient_dim": self.ambient_dim,
            "equalities": enc(self.equalities),
            "strict_inequalities": enc(self.strict_inequalities),
        })

    @classmethod
    def from_json(cls, text: str) -> "LinearSystem":
        data = json.loads(text)
        dec = lambda cs: tuple((tuple(c["row"]), c["rhs"]) for c in cs)  # noqa: E731
        return cls(data["ambient_dim"], dec(data["equalities"]), dec(data["strict_inequalities"]))


@dataclass(frozen=True)
class CellResult:
    feasible: bool
    dimension: int | None = None
    witness: tuple[Fraction, ...] | None = field(default=None)


# ---------------------------------------------------------------------------
# linear algebra
# ---------------------------------------------------------------------------

def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the first ``ncols`` columns (in place)."""
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][col]
        if p != 1:
            rows[r] = [a / p for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(rows: Sequence[Sequence]) -> int:
    rows = [[to_rational(a) for a in row] for row in rows]
    if not rows:
        return 0
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("ragged rows")
    _, pivots = _rref(rows, width)
    return len(pivots)


def solve_equalities(equalities: Sequence[Constraint], n: int):
    """Parametrize ``{x : E x = e}`` as ``x0 + Z y``.

    Returns ``(x0, Z)`` with ``Z`` a list of ``n`` rows of length ``len(free)``,
    or ``None`` when the equalities are inconsistent.
    """
    rows = [list(row) + [rhs] for row, rhs in equalities]
    rows, pivots = _rref(rows, n)
    for row in rows[len(pivots):]:
        if row[n] != 0:
            return None
    free = [c for c in range(n) if c not in set(pivots)]
    x0 = [_ZERO] * n
    Z = [[_ZERO] * len(free) for _ in range(n)]
    for k, c in enumerate(free):
        Z[c][k] = Fraction(1)
    for i, c in enumerate(pivots):
        x0[c] = rows[i][n]
        for k, f in enumerate(free):
            Z[c][k] = -rows[i][f]
    return x0, Z


# ---------------------------------------------------------------------------
# simplex
# ---------------------------------------------------------------------------

class _Tableau:
    """Rows ``T[i] = [a_i1 .. a_in, b_i]`` in canonical form w.r.t. ``basis``."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.T = rows
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        p = T[r][c]
        T[r] = [a / p for a in T[r]]
        pr = T[r]
        for i in range(len(T)):
            if i != r:
                f = T[i][c]
                if f != 0:
                    T[i] = [a - f * b for a, b in zip(T[i], pr)]
        self.basis[r] = c

    def maximize(self, cost: Sequence[Fraction], allowed: Sequence[bool]) -> str:
        T, basis = self.T, self.basis
        while True:
            in_basis = set(basis)
            entering = None
            for j, ok in enumerate(allowed):
                if not ok or j in in_basis:
                    continue
                reduced = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(len(T)))
                if reduced > 0:
                    entering = j
                    break
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(T):
                a = row[entering]
                if a > 0:
                    key = (row[-1] / a, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)

    def values(self, nvars: int) -> list[Fraction]:
        x = [_ZERO] * nvars
        for i, b in enumerate(self.basis):
            if b < nvars:
                x[b] = self.T[i][-1]
        return x


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


def solve_lp(
    cost: Sequence,
    inequalities: Sequence[Constraint] = (),
    equalities: Sequence[Constraint] = (),
    n: int | None = None,
) -> LPResult:
    """Maximize ``cost . x`` over free ``x`` with ``A x <= b`` and ``E x = e``."""
    cost = [to_rational(c) for c in cost]
    n = len(cost) if n is None else n
    param = solve_equalities([(tuple(map(to_rational, r)), to_rational(b)) for r, b in equalities], n)
    if param is None:
        return LPResult("infeasible")
    x0, Z = param
    k = len(Z[0]) if Z else 0

    # reduced problem in y (free): G y <= h, objective g . y
    G, h = [], []
    for row, rhs in inequalities:
        row = [to_rational(a) for a in row]
        G.append([sum(row[i] * Z[i][c] for i in range(n)) for c in range(k)])
        h.append(to_rational(rhs) - sum(a * b for a, b in zip(row, x0)))
    g = [sum(cost[i] * Z[i][c] for i in range(n)) for c in range(k)]
    base_value = sum(a * b for a, b in zip(cost, x0))

    m = len(G)
    # columns: p (k), q (k), slack (m), artificial (one per negative row)
    neg = [i for i in range(m) if h[i] < 0]
    nart = len(neg)
    width = 2 * k + m + nart
    rows, basis = [], []
    art_col = {}
    for i in range(m):
        row = G[i] + [-a for a in G[i]] + [_ZERO] * (m + nart) + [h[i]]
        row[2 * k + i] = Fraction(1)
        if h[i] < 0:
            row = [-a for a in row]
            col = 2 * k + m + len(art_col)
            art_col[i] = col
            row[col] = Fraction(1)
            basis.append(col)
        else:
            basis.append(2 * k + i)
        rows.append(row)
    tab = _Tableau(rows, basis)

    if nart:
        phase1 = [_ZERO] * (2 * k + m) + [Fraction(-1)] * nart
        tab.maximize(phase1, [True] * width)
        if any(tab.T[i][-1] != 0 for i, b in enumerate(tab.basis) if b >= 2 * k + m):
            return LPResult("infeasible")
        # drive zero-level artificials out of the basis
        i = 0
        while i < len(tab.T):
            if tab.basis[i] >= 2 * k + m:
                c = next((j for j in range(2 * k + m) if tab.T[i][j] != 0), None)
                if c is None:
                    del tab.T[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, c)
            i += 1

    phase2 = g + [-a for a in g] + [_ZERO] * (m + nart)
    allowed = [True] * (2 * k + m) + [False] * nart
    status = tab.maximize(phase2, allowed)
    if status == "unbounded":
        return LPResult("unbounded")
    vals = tab.values(2 * k)
    y = [vals[c] - vals[k + c] for c in range(k)]
    x = tuple(x0[i] + sum(Z[i][c] * y[c] for c in range(k)) for i in range(n))
    value = base_value + sum(a * b for a, b in zip(g, y))
    return LPResult("optimal", x, value)


# ---------------------------------------------------------------------------
# cells
# ---------------------------------------------------------------------------

def _trivially_infeasible(sys: LinearSystem) -> bool:
    for row, rhs in sys.equalities:
        if not any(row) and rhs != 0:
            return True
    for row, rhs in sys.strict_inequalities:
        if not any(row) and rhs <= 0:
            return True
    return False


def strictly_feasible(sys: LinearSystem) -> tuple[bool, tuple[Fraction, ...] | None]:
    """Whether some rational point meets every equality and every strict inequality."""
    if _trivially_infeasible(sys):
        return False, None
    N = sys.ambient_dim
    eqs = [(row + (_ZERO,), rhs) for row, rhs in sys.equalities]
    ineqs = [(row + (Fraction(1),), rhs) for row, rhs in sys.strict_inequalities]
    ineqs.append(((_ZERO,) * N + (Fraction(1),), Fraction(1)))
    cost = [_ZERO] * N + [Fraction(1)]
    res = solve_lp(cost, ineqs, eqs, N + 1)
    if res.status != "optimal" or res.value <= 0:
        return False, None
    return True, res.x[:N]


def cell_dimension(sys: LinearSystem) -> CellResult:
    ok, witness = strictly_feasible(sys)
    if not ok:
        return CellResult(False)
    dim = sys.ambient_dim - rank([row for row, _ in sys.equalities])
    return CellResult(True, dim, witness)


# ---------------------------------------------------------------------------
# difference constraints
# ---------------------------------------------------------------------------

class DifferenceClosure:
    """Incremental shortest-path closure of constraints ``x[v] - x[u] <= c`` (or ``< c``).

    Bounds are pairs ``(c, -s)``: ``c`` minus ``s`` infinitesimals, compared
    lexicographically.  The constraints are strictly feasible iff no cycle has
    a bound below ``(0, 0)``.
    """

    __slots__ = ("n", "dist")

    def __init__(self, n: int, dist=None):
        self.n = n
        if dist is None:
            dist = [[(_ZERO, 0) if i == j else None for j in range(n)] for i in range(n)]
        self.dist = dist

    def copy(self) -> "DifferenceClosure":
        return DifferenceClosure(self.n, [row[:] for row in self.dist])

    def add(self, u: int, v: int, c: Fraction, strict: bool = False) -> bool:
        """Add ``x[v] - x[u] <= c`` (``<`` if strict); False if now infeasible."""
        w = (c, -1 if strict else 0)
        D = self.dist
        back = D[v][u]
        if back is not None and (back[0] + w[0], back[1] + w[1]) < (_ZERO, 0):
            return False
        into_u = [(i, D[i][u]) for i in range(self.n) if D[i][u] is not None]
        from_v = [(j, D[v][j]) for j in range(self.n) if D[v][j] is not None]
        for i, a in into_u:
            base = (a[0] + w[0], a[1] + w[1])
            row = D[i]
            for j, b in from_v:
                cand = (base[0] + b[0], base[1] + b[1])
                cur = row[j]
                if cur is None or cand < cur:
                    row[j] = cand
        return True

    def add_equal(self, a: int, b: int, c: Fraction) -> bool:
        """Add ``x[a] - x[b] == c``."""
        return self.add(b, a, c) and self.add(a, b, -c)
