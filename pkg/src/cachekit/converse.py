"""Lower bounds on the delivery load under uncoded placement.

The closed-form bound is a family of straight lines indexed by a corner
parameter q: the load at memory M is at least c_q + s_q*(K*M/N - q),
where c_q is the corner load and s_q the incremental slope. The general
LP bound replaces the closed form with an exact linear program over
sub-file lengths, using acyclic-set inequalities generated on demand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .caching import Placement, leaders
from .core import (
    EQ,
    LE,
    OPTIMAL,
    Constraint,
    LinearProgram,
    PiecewiseCurve,
    ZERO,
    as_rat,
    binom,
    lower_convex_envelope,
    lp_maximize,
    rat,
)
from .errors import ResourceLimitError

__all__ = [
    "GeneralInstance",
    "PlacementProfile",
    "bound_curve",
    "corner_coefficient",
    "corner_slope",
    "general_lp_bound",
    "line_corner_gap",
    "load_lower_bound",
    "profile_lower_bound",
    "size_profile",
    "symmetric_instance",
]


def corner_coefficient(N: int, K: int, q: int):
    """Corner load c_q = (binom(K-1,q) + .. + binom(K-min(K,N),q)) / binom(K,q).

    The sum telescopes to (binom(K,q+1) - binom(K-min(K,N),q+1)) / binom(K,q);
    the summed form is kept here so the delivery-side load formula stays an
    independent cross-check.
    """
    if not 0 <= q <= K:
        raise ValueError(f"q={q} outside [0..{K}]")
    if N < 1 or K < 1:
        raise ValueError("need at least one file and one user")
    total = sum(binom(K - i, q) for i in range(1, min(K, N) + 1))
    return rat(total, binom(K, q))


def corner_slope(N: int, K: int, q: int):
    """s_q = c_q - c_{q-1}, the slope of the q-th bounding line."""
    if not 1 <= q <= K:
        raise ValueError(f"q={q} outside [1..{K}]")
    return corner_coefficient(N, K, q) - corner_coefficient(N, K, q - 1)


def load_lower_bound(N: int, K: int, M):
    """Best of the K bounding lines at memory M (0 <= M <= N)."""
    M = as_rat(M)
    if M < 0 or M > N:
        raise ValueError(f"memory {M} outside [0, {N}]")
    best = None
    for q in range(1, K + 1):
        cq = corner_coefficient(N, K, q)
        sq = corner_slope(N, K, q)
        value = cq + sq * (rat(K) * M / rat(N) - rat(q))
        if best is None or value > best:
            best = value
    return best


def bound_curve(N: int, K: int) -> PiecewiseCurve:
    """The bound as a piecewise-linear curve with corners (q*N/K, c_q)."""
    points = [(rat(q * N, K), corner_coefficient(N, K, q)) for q in range(K + 1)]
    return lower_convex_envelope(points)


def line_corner_gap(N: int, K: int, q: int, i: int):
    """Height of corner i above the tangent line through corner q.

    w_{q,i} = c_i - c_q + (q-i)*s_q. Zero at i in {q-1, q} and nonnegative
    everywhere, which is what makes eliminating x_{q-1}, x_q from the
    aggregated bound legitimate.
    """
    if not 1 <= q <= K:
        raise ValueError(f"q={q} outside [1..{K}]")
    if not 0 <= i <= K:
        raise ValueError(f"i={i} outside [0..{K}]")
    cq = corner_coefficient(N, K, q)
    ci = corner_coefficient(N, K, i)
    return ci - cq + (q - i) * corner_slope(N, K, q)


@dataclass(frozen=True)
class PlacementProfile:
    """x_t = fraction of all file bits cached by exactly t users."""

    x: Tuple

    def __post_init__(self):
        vals = tuple(as_rat(v) for v in self.x)
        object.__setattr__(self, "x", vals)
        if not vals:
            raise ValueError("profile needs at least x_0")
        if any(v < 0 for v in vals):
            raise ValueError("profile entries must be nonnegative")
        if sum(vals, ZERO) != 1:
            raise ValueError("profile entries must sum to 1")

    @property
    def K(self) -> int:
        return len(self.x) - 1

    def mean_t(self):
        """First moment; at most K*M/N when the placement fits memory M."""
        return sum((rat(t) * v for t, v in enumerate(self.x)), ZERO)


def size_profile(p: Placement) -> PlacementProfile:
    """Aggregate a placement into its x profile."""
    inst = p.inst
    totals = [0] * (inst.K + 1)
    for (_, w), bits in p.lengths.items():
        totals[len(w)] += bits
    return PlacementProfile(tuple(rat(v, inst.N * inst.B) for v in totals))


def profile_lower_bound(profile: PlacementProfile, N: int):
    """Load bound for any placement with this profile.

    Averaging the acyclic-set inequality over all demands and user orders
    leaves one coefficient per subset size; the coefficient at t is
    exactly the pruned-delivery load at t.
    """
    K = profile.K
    total = ZERO
    for t, xt in enumerate(profile.x):
        num = binom(K, t + 1) - binom(K - min(K, N), t + 1)
        total += rat(num, binom(K, t)) * xt
    return total


@dataclass(frozen=True)
class GeneralInstance:
    """Per-user cache sizes and per-file lengths, in units of B bits."""

    cache_sizes: Tuple
    file_sizes: Tuple
    mode: str = "worst"

    def __post_init__(self):
        caches = tuple(as_rat(v) for v in self.cache_sizes)
        files = tuple(as_rat(v) for v in self.file_sizes)
        object.__setattr__(self, "cache_sizes", caches)
        object.__setattr__(self, "file_sizes", files)
        if not caches or not files:
            raise ValueError("need at least one user and one file")
        if any(v < 0 for v in caches) or any(v < 0 for v in files):
            raise ValueError("sizes must be nonnegative")
        if self.mode not in ("worst", "average"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def N(self) -> int:
        return len(self.file_sizes)

    @property
    def K(self) -> int:
        return len(self.cache_sizes)


def symmetric_instance(N: int, K: int, M, mode: str = "worst") -> GeneralInstance:
    return GeneralInstance((as_rat(M),) * K, (rat(1),) * N, mode)


def _perm_blocks(d, perm: Sequence[int], K: int) -> List[Tuple[int, int]]:
    """(file, availability mask) per position of the user order perm."""
    full = (1 << K) - 1
    excluded = 0
    out = []
    for k in perm:
        excluded |= 1 << (k - 1)
        out.append((d[k - 1], full & ~excluded))
    return out


def _rep_orders(d, K: int, strict: bool) -> Iterable[Tuple[int, ...]]:
    """User orders whose demands are pairwise distinct.

    Default: permutations of the lowest-index representative per file.
    Strict: permutations of every maximal distinct-demand user set.
    """
    if not strict:
        for perm in itertools.permutations(leaders(d)):
            yield perm
        return
    by_file: Dict[int, List[int]] = {}
    for k in range(1, K + 1):
        by_file.setdefault(d[k - 1], []).append(k)
    pools = [by_file[f] for f in sorted(by_file)]
    for combo in itertools.product(*pools):
        for perm in itertools.permutations(combo):
            yield perm


def general_lp_bound(
    g: GeneralInstance,
    strict: bool = False,
    cap: int = 20000,
):
    """Exact LP load bound for asymmetric caches/files, worst or average.

    Variables are sub-file lengths y_{j,W} (in units of B) plus the load.
    Acyclic-set rows are generated lazily: solve, look for the most
    violated user order per demand via subset-sum tables, add, repeat.
    The returned value is exact; cap bounds the potential row count.
    """
    N, K = g.N, g.K
    demands = list(itertools.product(range(1, N + 1), repeat=K))
    potential = len(demands) * factorial(min(N, K))
    if strict:
        potential = len(demands) * factorial(K)
    if potential > cap:
        raise ResourceLimitError(
            f"up to {potential} acyclic rows exceed the cap {cap}"
        )

    nsub = 1 << K
    ny = N * nsub

    def yvar(j: int, mask: int) -> int:
        return (j - 1) * nsub + mask

    if g.mode == "worst":
        rvar = {d: ny for d in demands}
        num_vars = ny + 1
        objective = {ny: rat(-1)}
    else:
        rvar = {d: ny + i for i, d in enumerate(demands)}
        num_vars = ny + len(demands)
        prob = rat(1, len(demands))
        objective = {v: -prob for v in rvar.values()}

    base: List[Constraint] = []
    for j in range(1, N + 1):
        base.append(
            Constraint(
                {yvar(j, m): rat(1) for m in range(nsub)}, EQ, g.file_sizes[j - 1]
            )
        )
    for u in range(1, K + 1):
        coeffs = {
            yvar(j, m): rat(1)
            for j in range(1, N + 1)
            for m in range(nsub)
            if m >> (u - 1) & 1
        }
        base.append(Constraint(coeffs, LE, g.cache_sizes[u - 1]))

    def order_row(d, perm) -> Constraint:
        coeffs: Dict[int, object] = {}
        for f, avail in _perm_blocks(d, perm, K):
            sub = avail
            while True:
                v = yvar(f, sub)
                coeffs[v] = coeffs.get(v, ZERO) + rat(1)
                if sub == 0:
                    break
                sub = (sub - 1) & avail
        coeffs[rvar[d]] = rat(-1)
        return Constraint(coeffs, LE, ZERO)

    active: Dict[Tuple, Constraint] = {}
    while True:
        lp = LinearProgram(
            num_vars=num_vars,
            objective=objective,
            constraints=base + list(active.values()),
        )
        res = lp_maximize(lp)
        if res.status != OPTIMAL:
            raise RuntimeError(f"load LP unexpectedly {res.status}")
        y = res.solution

        # subset sums T[j][mask] = sum over W inside mask of y_{j,W}
        tables = []
        for j in range(1, N + 1):
            t = [y[yvar(j, m)] for m in range(nsub)]
            for b in range(K):
                for m in range(nsub):
                    if m >> b & 1:
                        t[m] = t[m] + t[m ^ (1 << b)]
            tables.append(t)

        violations = []
        for d in demands:
            rd = y[rvar[d]]
            best = None
            for perm in _rep_orders(d, K, strict):
                val = sum(
                    (tables[f - 1][avail] for f, avail in _perm_blocks(d, perm, K)),
                    ZERO,
                )
                if best is None or val > best[0]:
                    best = (val, perm)
            if best is not None and best[0] > rd:
                violations.append((best[0] - rd, d, best[1]))
        if not violations:
            value = res.value
            return -value

        violations.sort(key=lambda v: (-v[0], v[1], v[2]))
        for _, d, perm in violations[:64]:
            active[(d, perm)] = order_row(d, perm)
        if len(active) > cap:
            raise ResourceLimitError(f"active rows exceed the cap {cap}")
