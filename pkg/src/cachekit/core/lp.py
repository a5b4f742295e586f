"""Exact rational linear programming via two-phase simplex with Bland's rule.

All arithmetic is done in the backend rational type; no tolerances anywhere.
Bland's anti-cycling rule (lowest eligible index enters, lowest basic index
leaves on ratio ties) guarantees termination even on degenerate programs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from cachekit.core.rational import ZERO, ONE, Rat, as_rat

LE = "<="
GE = ">="
EQ = "=="

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


@dataclass
class Constraint:
    coeffs: Dict[int, object]  # var index -> rational coefficient (sparse)
    rel: str
    rhs: object

    def __post_init__(self):
        if self.rel not in (LE, GE, EQ):
            raise ValueError(f"unknown relation {self.rel!r}")
        self.coeffs = {j: as_rat(c) for j, c in self.coeffs.items() if as_rat(c) != 0}
        self.rhs = as_rat(self.rhs)


@dataclass
class LinearProgram:
    """maximize objective . x  subject to constraints, x >= 0 except free_vars."""

    num_vars: int
    objective: Dict[int, object]
    constraints: List[Constraint] = field(default_factory=list)
    free_vars: frozenset = frozenset()

    def __post_init__(self):
        self.objective = {j: as_rat(c) for j, c in self.objective.items()}
        for j in list(self.objective) + [j for c in self.constraints for j in c.coeffs]:
            if not 0 <= j < self.num_vars:
                raise ValueError(f"variable index {j} out of range")


@dataclass
class LPResult:
    status: str
    value: Optional[object] = None
    solution: Optional[List[object]] = None  # one value per original variable
    ray: Optional[List[object]] = None  # improving direction when unbounded
    residual: Optional[object] = None  # positive infeasibility gap


class _Tableau:
    """Dense simplex tableau over exact rationals."""

    def __init__(self, nrows: int, ncols: int):
        self.rows: List[List[object]] = [[ZERO] * (ncols + 1) for _ in range(nrows)]
        self.ncols = ncols
        self.basis: List[int] = [-1] * nrows

    def pivot(self, r: int, j: int) -> None:
        row = self.rows[r]
        piv = row[j]
        if piv != ONE:
            inv = ONE / piv
            self.rows[r] = row = [v * inv for v in row]
        support = [idx for idx, v in enumerate(row) if v != 0]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[j]
            if f != 0:
                for idx in support:
                    other[idx] = other[idx] - f * row[idx]
        self.basis[r] = j


def _run_simplex(t: _Tableau, cost: List[object], banned: frozenset) -> tuple[str, List[object]]:
    """Maximize cost over the tableau in place. Returns (status, final cost row).

    cost has ncols+1 entries; cost[-1] accumulates the negated objective value.
    banned columns never enter the basis (used to keep artificials out).
    Entering column: largest reduced cost, falling back to Bland's rule for
    good once the objective stalls long enough, which rules out cycling.
    """
    ncols = t.ncols
    # Make the cost row consistent with the current basis.
    for i, bj in enumerate(t.basis):
        f = cost[bj]
        if f != 0:
            row = t.rows[i]
            for j in range(ncols + 1):
                if row[j] != 0:
                    cost[j] = cost[j] - f * row[j]
    bland = False
    stall = 0
    stall_limit = 4 * len(t.rows) + 16
    while True:
        enter = -1
        if bland:
            for j in range(ncols):
                if j not in banned and cost[j] > 0:
                    enter = j
                    break
        else:
            best_cost = None
            for j in range(ncols):
                if j not in banned and cost[j] > 0 and (
                    best_cost is None or cost[j] > best_cost
                ):
                    best_cost = cost[j]
                    enter = j
        if enter < 0:
            return OPTIMAL, cost
        leave = -1
        best = None
        for i, row in enumerate(t.rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and t.basis[i] < t.basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED, cost
        t.pivot(leave, enter)
        f = cost[enter]
        if f != 0:
            prow = t.rows[leave]
            moved = prow[-1] != 0
            for j in range(ncols + 1):
                if prow[j] != 0:
                    cost[j] = cost[j] - f * prow[j]
            if not bland:
                stall = 0 if moved else stall + 1
                if stall > stall_limit:
                    bland = True


def lp_maximize(lp: LinearProgram) -> LPResult:
    """Solve the LP exactly. Witnesses: a point (optimal), a point plus an
    improving ray (unbounded), or the positive phase-one residual (infeasible)."""
    n = lp.num_vars
    # Column layout: split columns for each variable's negative part come first
    # after the positives so indices stay aligned with Bland ordering.
    col_of_pos = list(range(n))
    col_of_neg = {}
    next_col = n
    for j in sorted(lp.free_vars):
        col_of_neg[j] = next_col
        next_col += 1

    m = len(lp.constraints)
    nslack = sum(1 for c in lp.constraints if c.rel != EQ)
    total = next_col + nslack + m  # worst case: one artificial per row
    t = _Tableau(m, total)

    slack_at = next_col
    art_at = next_col + nslack
    artificials = []
    for i, con in enumerate(lp.constraints):
        sign = -ONE if con.rel == GE else ONE
        row = t.rows[i]
        for j, c in con.coeffs.items():
            row[col_of_pos[j]] = sign * c
            if j in col_of_neg:
                row[col_of_neg[j]] = -sign * c
        row[-1] = sign * con.rhs
        if con.rel != EQ:
            row[slack_at] = ONE
            slack_col = slack_at
            slack_at += 1
        else:
            slack_col = -1
        if row[-1] < 0:
            t.rows[i] = row = [-v for v in row]
        if slack_col >= 0 and row[slack_col] == ONE:
            t.basis[i] = slack_col
        else:
            row[art_at] = ONE
            t.basis[i] = art_at
            artificials.append(art_at)
            art_at += 1

    art_set = frozenset(artificials)

    if artificials:
        cost = [ZERO] * (total + 1)
        for a in artificials:
            cost[a] = -ONE
        status, cost = _run_simplex(t, cost, banned=frozenset())
        # status is always "optimal": the phase-one objective is bounded by 0.
        # The cost row stores the negated objective in its last cell.
        if cost[-1] > 0:
            return LPResult(status=INFEASIBLE, residual=cost[-1])
        # Pivot surviving artificials out of the basis; drop redundant rows.
        keep = []
        for i in range(len(t.rows)):
            if t.basis[i] in art_set:
                row = t.rows[i]
                enter = -1
                for j in range(total):
                    if j not in art_set and row[j] != 0:
                        enter = j
                        break
                if enter >= 0:
                    t.pivot(i, enter)
                    keep.append(i)
                # else: redundant row, drop it below
            else:
                keep.append(i)
        if len(keep) != len(t.rows):
            t.rows = [t.rows[i] for i in keep]
            t.basis = [t.basis[i] for i in keep]

    cost = [ZERO] * (total + 1)
    for j, c in lp.objective.items():
        cost[col_of_pos[j]] = cost[col_of_pos[j]] + c
        if j in col_of_neg:
            cost[col_of_neg[j]] = cost[col_of_neg[j]] - c
    status, cost = _run_simplex(t, cost, banned=art_set)

    def extract_point() -> List[object]:
        vals = [ZERO] * total
        for i, bj in enumerate(t.basis):
            vals[bj] = t.rows[i][-1]
        out = []
        for j in range(n):
            v = vals[col_of_pos[j]]
            if j in col_of_neg:
                v = v - vals[col_of_neg[j]]
            out.append(v)
        return out

    if status == UNBOUNDED:
        # Recover the entering column that certified unboundedness.
        enter = -1
        for j in range(total):
            if j not in art_set and cost[j] > 0:
                col_ok = all(row[j] <= 0 for row in t.rows)
                if col_ok:
                    enter = j
                    break
        direction = [ZERO] * total
        direction[enter] = ONE
        for i, row in enumerate(t.rows):
            if row[enter] != 0:
                direction[t.basis[i]] = -row[enter]
        ray = []
        for j in range(n):
            v = direction[col_of_pos[j]]
            if j in col_of_neg:
                v = v - direction[col_of_neg[j]]
            ray.append(v)
        return LPResult(status=UNBOUNDED, solution=extract_point(), ray=ray)

    point = extract_point()
    value = sum((c * point[j] for j, c in lp.objective.items()), ZERO)
    return LPResult(status=OPTIMAL, value=value, solution=point)
