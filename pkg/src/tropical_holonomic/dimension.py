"""Exact dimension of the prevariety ``W_N`` by enumerating attainment patterns.

Every point of ``W_N`` picks, per window, the set of positions attaining the
minimum.  Fixing those sets gives a relatively open polyhedral cell, so
``dim W_N`` is the largest dimension of a nonempty cell.  Patterns are
explored depth-first window by window; a prefix whose constraints are already
infeasible is dropped with all of its extensions.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Sequence

from .poly import eventual_sign, eventual_sign_index, format_rational
from .polyhedra import DifferenceClosure, LinearSystem, cell_dimension, strictly_feasible
from .tropical import (
    CASE1,
    CASE2,
    CASE3,
    HolonomicSystem,
    check_sequence,
    classify_system,
    sequence_to_json,
)

Pattern = tuple[frozenset[int], ...]


def tie_subsets(n: int) -> list[frozenset[int]]:
    """All subsets of ``{0..n}`` with two or more elements, in enumeration order.

    Ordered by size, then span, then smallest element; for ``n = 2`` this is
    ``{0,1}, {1,2}, {0,2}, {0,1,2}``.
    """
    subsets = [
        frozenset(c)
        for size in range(2, n + 2)
        for c in itertools.combinations(range(n + 1), size)
    ]
    return sorted(subsets, key=lambda s: (len(s), max(s) - min(s), min(s)))


def pattern_length(sys: HolonomicSystem, N: int) -> int:
    return max(0, N - sys.order)


def _coefficient_table(sys: HolonomicSystem, windows: int) -> list[list[Fraction]]:
    return [[a(j) for a in sys.coeffs] for j in range(windows)]


def _window_constraints(sys_order: int, coeffs_j: Sequence[Fraction], j: int, S: frozenset[int]):
    """Yield ``('eq', a, b, c)`` for ``w[a] - w[b] == c`` and ``('lt', a, b, c)`` for ``w[a] - w[b] < c``."""
    members = sorted(S)
    for p, q in zip(members, members[1:]):
        yield "eq", j + p, j + q, coeffs_j[q] - coeffs_j[p]
    p0 = members[0]
    for r in range(sys_order + 1):
        if r not in S:
            yield "lt", j + p0, j + r, coeffs_j[r] - coeffs_j[p0]


def _validate_pattern(sys: HolonomicSystem, pat: Sequence[frozenset[int]], N: int, partial: bool) -> None:
    expected = pattern_length(sys, N)
    if len(pat) > expected or (not partial and len(pat) != expected):
        raise ValueError(f"pattern has {len(pat)} windows, expected {expected} for N = {N}")
    for j, S in enumerate(pat):
        if len(S) < 2 or not set(S) <= set(range(sys.order + 1)):
            raise ValueError(f"window {j}: {sorted(S)} is not a tie set of size >= 2 in 0..{sys.order}")


def pattern_to_system(
    sys: HolonomicSystem, pat: Sequence[frozenset[int]], N: int, partial: bool = False
) -> LinearSystem:
    """The cell of ``W_N`` on which window ``j`` attains its minimum exactly on ``pat[j]``.

    With ``partial=True`` the pattern may cover only the first windows.
    """
    _validate_pattern(sys, pat, N, partial)
    table = _coefficient_table(sys, len(pat))
    eqs, strict = [], []
    for j, S in enumerate(pat):
        for kind, a, b, c in _window_constraints(sys.order, table[j], j, frozenset(S)):
            row = [0] * N
            row[a], row[b] = 1, -1
            (eqs if kind == "eq" else strict).append((tuple(row), c))
    return LinearSystem(N, tuple(eqs), tuple(strict))


# ---------------------------------------------------------------------------
# attainment graph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AttainmentGraph:
    vertex_count: int
    edges: frozenset[tuple[int, int]]

    def to_json(self) -> dict[str, Any]:
        return {"vertex_count": self.vertex_count, "edges": sorted(list(e) for e in self.edges)}


def attainment_graph(pat: Sequence[frozenset[int]], N: int) -> AttainmentGraph:
    edges = set()
    for j, S in enumerate(pat):
        for p, q in itertools.combinations(sorted(S), 2):
            edges.add((j + p, j + q))
    return AttainmentGraph(N, frozenset(edges))


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller root wins so labels are canonical
            self.parent[max(ra, rb)] = min(ra, rb)


def component_labels(g: AttainmentGraph) -> list[int]:
    """Smallest vertex of each vertex's component."""
    uf = UnionFind(g.vertex_count)
    for a, b in g.edges:
        uf.union(a, b)
    return [uf.find(v) for v in range(g.vertex_count)]


def components(g: AttainmentGraph) -> int:
    return len(set(component_labels(g)))


def intervals(g: AttainmentGraph) -> list[tuple[int, int]]:
    """Maximal runs ``(start, end)`` of >= 2 consecutive vertices in one component."""
    labels = component_labels(g)
    out = []
    start = 0
    for v in range(1, g.vertex_count + 1):
        if v == g.vertex_count or labels[v] != labels[v - 1]:
            if v - 1 > start:
                out.append((start, v - 1))
            start = v
    return out


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _closure_extend(state: DifferenceClosure, order: int, coeffs_j, j: int, S) -> DifferenceClosure | None:
    nxt = state.copy()
    for kind, a, b, c in _window_constraints(order, coeffs_j, j, S):
        ok = nxt.add_equal(a, b, c) if kind == "eq" else nxt.add(b, a, c, strict=True)
        if not ok:
            return None
    return nxt


def _dfs_difference(sys, N, table, subsets, depth, prefix, state) -> Iterator[Pattern]:
    if depth == len(table):
        yield tuple(prefix)
        return
    for S in subsets:
        nxt = _closure_extend(state, sys.order, table[depth], depth, S)
        if nxt is not None:
            prefix.append(S)
            yield from _dfs_difference(sys, N, table, subsets, depth + 1, prefix, nxt)
            prefix.pop()


def _dfs_lp(sys, N, subsets, depth, prefix, windows) -> Iterator[Pattern]:
    if depth == windows:
        yield tuple(prefix)
        return
    for S in subsets:
        prefix.append(S)
        ok, _ = strictly_feasible(pattern_to_system(sys, prefix, N, partial=True))
        if ok:
            yield from _dfs_lp(sys, N, subsets, depth + 1, prefix, windows)
        prefix.pop()


def feasible_patterns(
    sys: HolonomicSystem,
    N: int,
    method: str = "difference",
    prefix: Sequence[frozenset[int]] = (),
) -> Iterator[Pattern]:
    """Every pattern whose cell is nonempty, in the fixed enumeration order.

    ``method="difference"`` decides feasibility with an incremental
    shortest-path closure (all constraints are bounds on differences
    ``w[a] - w[b]``); ``method="lp"`` re-solves the slack program for each
    prefix; ``method="full"`` skips pruning and tests every complete pattern.
    Restricting to patterns that start with ``prefix`` splits the search.
    """
    windows = pattern_length(sys, N)
    subsets = tie_subsets(sys.order)
    prefix = list(prefix)
    if method == "difference":
        table = _coefficient_table(sys, windows)
        state = DifferenceClosure(N)
        for d, S in enumerate(prefix):
            state = _closure_extend(state, sys.order, table[d], d, S)
            if state is None:
                return
        yield from _dfs_difference(sys, N, table, subsets, len(prefix), prefix, state)
    elif method == "lp":
        if prefix and not strictly_feasible(pattern_to_system(sys, prefix, N, partial=True))[0]:
            return
        yield from _dfs_lp(sys, N, subsets, len(prefix), prefix, windows)
    elif method == "full":
        for tail in itertools.product(subsets, repeat=windows - len(prefix)):
            pat = tuple(prefix) + tail
            if strictly_feasible(pattern_to_system(sys, pat, N))[0]:
                yield pat
    else:
        raise ValueError(f"unknown method {method!r}")


def pattern_dimension(sys: HolonomicSystem, pat: Pattern, N: int) -> int:
    """Dimension of a feasible cell: its equalities are differences, so this is
    the number of components of the graph they span."""
    return components(attainment_graph(pat, N))


@dataclass(frozen=True)
class MaxCell:
    dimension: int
    pattern: Pattern
    witness: tuple[Fraction, ...]


def _best_in_subtree(args) -> tuple[int, Pattern] | None:
    sys, N, method, prefix = args
    best = None
    for pat in feasible_patterns(sys, N, method, prefix):
        d = pattern_dimension(sys, pat, N) if method == "difference" else cell_dimension(
            pattern_to_system(sys, pat, N)).dimension
        if best is None or d > best[0]:
            best = (d, pat)
    return best


def _split_prefixes(sys: HolonomicSystem, N: int, jobs: int) -> list[Pattern]:
    windows = pattern_length(sys, N)
    subsets = tie_subsets(sys.order)
    depth = 0
    while len(subsets) ** depth < 4 * jobs and depth < windows:
        depth += 1
    return [tuple(p) for p in itertools.product(subsets, repeat=depth)]


def max_cell(sys: HolonomicSystem, N: int, method: str = "difference", jobs: int = 1) -> MaxCell:
    """The first cell of largest dimension in enumeration order, with a witness point."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N <= sys.order:
        return MaxCell(N, (), (Fraction(0),) * N)
    if jobs > 1:
        # subtrees in enumeration order; combining by first-max keeps the result identical
        prefixes = _split_prefixes(sys, N, jobs)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_best_in_subtree, [(sys, N, method, p) for p in prefixes]))
        best = None
        for part in parts:
            if part is not None and (best is None or part[0] > best[0]):
                best = part
    else:
        best = _best_in_subtree((sys, N, method, ()))
    if best is None:
        # W_N is never empty (extend any point greedily); reaching here is a bug
        raise RuntimeError(f"no feasible pattern found for N = {N}")
    dim, pat = best
    cell = cell_dimension(pattern_to_system(sys, pat, N))
    if cell.dimension != dim:
        raise RuntimeError(f"dimension routes disagree on {pat}: {dim} vs {cell.dimension}")
    return MaxCell(dim, pat, cell.witness)


def dim_WN(sys: HolonomicSystem, N: int, method: str = "difference", jobs: int = 1) -> int:
    return max_cell(sys, N, method, jobs).dimension


# ---------------------------------------------------------------------------
# entropy scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    N: int
    dim: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.dim, self.N) if self.N else Fraction(0)


@dataclass(frozen=True)
class ScanReport:
    system: HolonomicSystem
    rows: tuple[ScanRow, ...]
    classified_entropy: Fraction | None

    def to_json(self) -> dict[str, Any]:
        ent = None if self.classified_entropy is None else format_rational(self.classified_entropy)
        return {
            "system": self.system.to_json(),
            "classified_entropy": ent,
            "rows": [
                {"N": r.N, "dim": r.dim, "ratio": format_rational(r.ratio)} for r in self.rows
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["N", "dim", "ratio_num", "ratio_den", "classified_entropy"])
        ent = "" if self.classified_entropy is None else format_rational(self.classified_entropy)
        for r in self.rows:
            out.writerow([r.N, r.dim, r.ratio.numerator, r.ratio.denominator, ent])
        return buf.getvalue()


def entropy_scan(
    sys: HolonomicSystem, N_min: int, N_max: int, method: str = "difference", jobs: int = 1
) -> ScanReport:
    if N_min < 2 or N_max < N_min:
        raise ValueError(f"need 2 <= N_min <= N_max, got {N_min}..{N_max}")
    rows = tuple(ScanRow(N, dim_WN(sys, N, method, jobs)) for N in range(N_min, N_max + 1))
    entropy = classify_system(sys).entropy if sys.order == 2 else None
    return ScanReport(sys, rows, entropy)


# ---------------------------------------------------------------------------
# lemma predicates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str
    pattern: Pattern
    graph: AttainmentGraph

    def to_json(self) -> dict[str, Any]:
        return {
            "rule": self.rule,
            "detail": self.detail,
            "pattern": [sorted(S) for S in self.pattern],
            "graph": self.graph.to_json(),
        }


@dataclass
class LemmaReport:
    case_id: str
    N: int
    threshold: int
    patterns_checked: int = 0
    violations: list[Violation] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return {
            "case": self.case_id,
            "N": self.N,
            "threshold": self.threshold,
            "patterns_checked": self.patterns_checked,
            "violations": [v.to_json() for v in self.violations],
        }


def check_interval_structure(
    labels: Sequence[int], ivs: Sequence[tuple[int, int]], case_id: str, threshold: int, N: int
) -> list[tuple[str, str]]:
    """Structural claims about one attainment graph; returns ``(rule, detail)`` pairs.

    ``threshold`` is the index past which the coefficient signs are settled.
    Intervals touching vertex 0 or ``N - 1`` are cut off by the ends of the
    sequence, so the length claim only applies to interior ones.
    """
    found = []
    if case_id in (CASE1, CASE2):
        for (s1, e1), (s2, e2) in zip(ivs, ivs[1:]):
            if s2 == e1 + 1:
                found.append(("adjacent", f"intervals {s1}..{e1} and {s2}..{e2} adjoin"))
                continue
            for v in range(e1, s2 - 1):
                if labels[v] != labels[v + 2]:
                    found.append(("alternation", f"between {s1}..{e1} and {s2}..{e2}: "
                                                 f"vertices {v} and {v + 2} in different components"))
                    break
    if case_id == CASE2:
        for s, e in ivs:
            if e == s + 1 and s > threshold and e < N - 1:
                found.append(("short", f"interior interval {s}..{e} of length 2"))
    if case_id == CASE3:
        late = [(s, e) for s, e in ivs if s > threshold]
        if len(late) > 1:
            found.append(("late-count", f"{len(late)} intervals start after {threshold}: {late}"))
        elif late and late[0][1] != N - 1:
            found.append(("late-end", f"interval {late[0][0]}..{late[0][1]} stops before {N - 1}"))
    return found


def lemma_threshold(sys: HolonomicSystem) -> tuple[str, int, bool]:
    """``(case, threshold, applicable)`` for the structural checks."""
    cls = classify_system(sys)
    threshold = 4 * cls.j0
    applicable = True
    if cls.case_id == CASE3:
        applicable = eventual_sign(cls.D) > 0 and not cls.E.is_zero()
        if applicable:
            threshold = max(threshold, eventual_sign_index(cls.E))
    return cls.case_id, threshold, applicable


def lemma_predicates(sys: HolonomicSystem, N: int, method: str = "difference") -> LemmaReport:
    if sys.order != 2:
        raise ValueError("lemma predicates are stated for order 2")
    case_id, threshold, applicable = lemma_threshold(sys)
    report = LemmaReport(case_id, N, threshold)
    if N <= sys.order:
        return report
    for pat in feasible_patterns(sys, N, method):
        report.patterns_checked += 1
        if not applicable:
            continue
        g = attainment_graph(pat, N)
        labels = component_labels(g)
        for rule, detail in check_interval_structure(labels, intervals(g), case_id, threshold, N):
            report.violations.append(Violation(rule, detail, pat, g))
    return report


def witness_passes(sys: HolonomicSystem, cell: MaxCell) -> bool:
    return check_sequence(sys, cell.witness)


def max_cell_to_json(cell: MaxCell) -> dict[str, Any]:
    return {
        "dim": cell.dimension,
        "pattern": [sorted(S) for S in cell.pattern],
        "witness": sequence_to_json(cell.witness),
    }
