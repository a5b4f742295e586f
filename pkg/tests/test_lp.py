"""Exact simplex tests.

The randomized sweep compares against a brute-force vertex enumerator
written here from scratch: every basic solution of the inequality system
is solved with Fraction Gaussian elimination and checked for feasibility,
so the oracle never touches the tableau code under test.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from cachekit.core import (
    EQ,
    GE,
    INFEASIBLE,
    LE,
    OPTIMAL,
    UNBOUNDED,
    Constraint,
    LinearProgram,
    lp_maximize,
    num_den,
)


def _as_fraction(x) -> Fraction:
    n, d = num_den(x)
    return Fraction(n, d)


def _solve_square(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Solve a square linear system exactly; None when singular."""
    n = len(rows)
    a = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def oracle_maximize(num_vars, objective, constraints):
    """Max of the objective over a BOUNDED region, or None when infeasible.

    constraints: list of (coeffs dict, rel, rhs) over variables 0..num_vars-1,
    all implicitly >= 0. The caller must supply explicit upper bounds so that
    the region is bounded; then the optimum (if any) sits on a vertex and
    enumerating all n-subsets of the tight-constraint candidates finds it.
    """
    ineqs: list[tuple[list[Fraction], Fraction]] = []  # a.x <= b

    def add(coeffs, rhs):
        row = [Fraction(0)] * num_vars
        for j, c in coeffs.items():
            row[j] += Fraction(c)
        ineqs.append((row, Fraction(rhs)))

    for coeffs, rel, rhs in constraints:
        if rel in (LE, EQ):
            add(coeffs, rhs)
        if rel in (GE, EQ):
            add({j: -c for j, c in coeffs.items()}, -rhs)
    for j in range(num_vars):
        add({j: -1}, 0)  # x_j >= 0

    obj = [Fraction(0)] * num_vars
    for j, c in objective.items():
        obj[j] += Fraction(c)

    best = None
    for combo in itertools.combinations(range(len(ineqs)), num_vars):
        point = _solve_square([ineqs[i][0] for i in combo], [ineqs[i][1] for i in combo])
        if point is None:
            continue
        if all(sum(a * x for a, x in zip(row, point)) <= b for row, b in ineqs):
            val = sum(c * x for c, x in zip(obj, point))
            if best is None or val > best:
                best = val
    return best


def test_two_variable_box():
    lp = LinearProgram(
        num_vars=2,
        objective={0: 1, 1: 1},
        constraints=[Constraint({0: 1}, LE, 2), Constraint({1: 1}, LE, 3)],
    )
    res = lp_maximize(lp)
    assert res.status == OPTIMAL
    assert _as_fraction(res.value) == 5
    assert [_as_fraction(v) for v in res.solution] == [2, 3]


def test_infeasible_reports_positive_residual():
    lp = LinearProgram(
        num_vars=1,
        objective={0: 1},
        constraints=[Constraint({0: 1}, LE, 1), Constraint({0: 1}, GE, 2)],
    )
    res = lp_maximize(lp)
    assert res.status == INFEASIBLE
    assert res.residual is not None and _as_fraction(res.residual) > 0
    assert res.solution is None


def test_unbounded_returns_improving_ray():
    # y is capped but nothing stops x from growing.
    lp = LinearProgram(
        num_vars=2,
        objective={0: 1},
        constraints=[Constraint({1: 1}, LE, 1)],
    )
    res = lp_maximize(lp)
    assert res.status == UNBOUNDED
    assert res.ray is not None
    ray = [_as_fraction(v) for v in res.ray]
    assert ray[0] > 0
    # The ray must keep every constraint slack: a . ray <= 0 for <= rows.
    assert ray[1] <= 0


def test_beale_degenerate_cycle_terminates():
    # Classic degenerate instance that cycles under the most-negative rule;
    # Bland's rule must grind through it and stop at 1/20.
    lp = LinearProgram(
        num_vars=4,
        objective={0: Fraction(3, 4), 1: -150, 2: Fraction(1, 50), 3: -6},
        constraints=[
            Constraint({0: Fraction(1, 4), 1: -60, 2: Fraction(-1, 25), 3: 9}, LE, 0),
            Constraint({0: Fraction(1, 2), 1: -90, 2: Fraction(-1, 50), 3: 3}, LE, 0),
            Constraint({2: 1}, LE, 1),
        ],
    )
    res = lp_maximize(lp)
    assert res.status == OPTIMAL
    assert _as_fraction(res.value) == Fraction(1, 20)
    point = [_as_fraction(v) for v in res.solution]
    assert point == [Fraction(1, 25), 0, 1, 0]


def test_equality_constraint():
    lp = LinearProgram(
        num_vars=2,
        objective={0: 1, 1: 2},
        constraints=[
            Constraint({0: 1, 1: 1}, EQ, 3),
            Constraint({0: 1, 1: -1}, LE, 1),
        ],
    )
    res = lp_maximize(lp)
    assert res.status == OPTIMAL
    assert _as_fraction(res.value) == 6
    assert [_as_fraction(v) for v in res.solution] == [0, 3]


def test_free_variable_goes_negative():
    lp = LinearProgram(
        num_vars=1,
        objective={0: -1},
        constraints=[Constraint({0: -1}, LE, 5)],
        free_vars=frozenset({0}),
    )
    res = lp_maximize(lp)
    assert res.status == OPTIMAL
    assert _as_fraction(res.value) == 5
    assert _as_fraction(res.solution[0]) == -5


def test_redundant_equalities_do_not_confuse_phase_one():
    # Same equality twice: phase one must pivot or drop the second artificial.
    lp = LinearProgram(
        num_vars=2,
        objective={0: 1},
        constraints=[
            Constraint({0: 1, 1: 1}, EQ, 2),
            Constraint({0: 1, 1: 1}, EQ, 2),
        ],
    )
    res = lp_maximize(lp)
    assert res.status == OPTIMAL
    assert _as_fraction(res.value) == 2


def _check_against_oracle(num_vars, objective, rows):
    lp = LinearProgram(
        num_vars=num_vars,
        objective=dict(objective),
        constraints=[Constraint(dict(c), rel, rhs) for c, rel, rhs in rows],
    )
    res = lp_maximize(lp)
    expected = oracle_maximize(num_vars, objective, rows)
    if expected is None:
        assert res.status == INFEASIBLE, (rows, res.status)
        return
    assert res.status == OPTIMAL, (rows, res.status)
    assert _as_fraction(res.value) == expected, (rows, res.value, expected)
    # The returned point must actually attain the value and satisfy every row.
    point = [_as_fraction(v) for v in res.solution]
    assert all(v >= 0 for v in point)
    got = sum(Fraction(objective.get(j, 0)) * point[j] for j in range(num_vars))
    assert got == expected
    for coeffs, rel, rhs in rows:
        lhs = sum(Fraction(c) * point[j] for j, c in coeffs.items())
        if rel == LE:
            assert lhs <= rhs
        elif rel == GE:
            assert lhs >= rhs
        else:
            assert lhs == rhs


def test_random_lps_match_vertex_enumeration():
    rng = random.Random(20260825)
    for _ in range(60):
        num_vars = rng.randint(1, 3)
        rows = []
        for _ in range(rng.randint(1, 3)):
            coeffs = {j: rng.randint(-3, 3) for j in range(num_vars)}
            coeffs = {j: c for j, c in coeffs.items() if c}
            if not coeffs:
                continue
            rel = rng.choice([LE, LE, GE, GE, EQ])
            rows.append((coeffs, rel, rng.randint(-4, 6)))
        for j in range(num_vars):
            rows.append(({j: 1}, LE, 10))  # keep the region bounded
        objective = {j: rng.randint(-3, 3) for j in range(num_vars)}
        _check_against_oracle(num_vars, objective, rows)
