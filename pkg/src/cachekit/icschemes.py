"""Achievability engines for broadcast with side information.

Three independent routes to a symmetric rate, kept separate so they can
cross-check each other:

* composite_symmetric_rate: exact LP over composite rates S_P, maximized
  over joint decode-set selections by branch and bound, then improved by
  exact time sharing across selections. Every user must uniquely decode
  a superset K_j of its demand.
* novel_feasibility: rank certificates for one-shot linear codes where a
  user uniquely decodes only its demanded messages and treats the rest
  as interference it can cancel.
* bruteforce_linear_capacity: exhaustive search over scalar binary
  linear codes, small instances only.

composite_to_linear turns any composite solution into a one-shot linear
spec certified by novel_feasibility at the same rate, and yma_as_novel
does the same for the leader-pruned caching delivery.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .caching import Placement, yma_delivery
from .core import (
    BitMatrix,
    Constraint,
    LE,
    LinearProgram,
    OPTIMAL,
    Rat,
    as_rat,
    conditional_rank,
    lp_maximize,
    num_den,
    rat,
    solve_combination,
)
from .errors import ResourceLimitError
from .icmap import ICInstance, subfile_label, caching_to_ic

__all__ = [
    "CompositeAssignment",
    "KappaCheck",
    "LinearSpec",
    "RateCertificate",
    "bruteforce_linear_capacity",
    "certified_load",
    "clearing_scale",
    "composite_symmetric_rate",
    "composite_to_linear",
    "novel_feasibility",
    "oneshot_simulate",
    "yma_as_novel",
]

DEFAULT_LP_CAP = 10**6


def _ids_to_mask(ids) -> int:
    m = 0
    for i in ids:
        m |= 1 << (i - 1)
    return m


def _mask_to_ids(mask: int) -> Tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _submasks(mask: int) -> Iterator[int]:
    """All nonempty submasks of mask, descending."""
    s = mask
    while s:
        yield s
        s = (s - 1) & mask


@dataclass(frozen=True)
class CompositeAssignment:
    """A composite solution: decode set K_j per user and rates S_P.

    Only the positive rates are stored; subsets are sorted id tuples.
    symmetric_rate, when set, is the best symmetric rate this single
    assignment supports on its own.
    """

    decode_sets: Tuple[Tuple[int, ...], ...]
    rates: Dict[Tuple[int, ...], object]
    symmetric_rate: Optional[object] = None

    def __post_init__(self):
        object.__setattr__(
            self, "decode_sets", tuple(tuple(sorted(k)) for k in self.decode_sets)
        )
        clean: Dict[Tuple[int, ...], object] = {}
        for p, s in self.rates.items():
            key = tuple(sorted(p))
            if not key:
                raise ValueError("composite rate for the empty subset")
            if key[0] < 1:
                raise ValueError(f"message ids must be positive, got {key}")
            s = as_rat(s)
            if s < 0:
                raise ValueError(f"negative composite rate for {key}")
            if s != 0:
                clean[key] = clean.get(key, rat(0)) + s
        object.__setattr__(self, "rates", clean)
        if self.symmetric_rate is not None:
            object.__setattr__(self, "symmetric_rate", as_rat(self.symmetric_rate))


@dataclass(frozen=True)
class LinearSpec:
    """A one-shot linear code: per-message bit widths plus XOR composites.

    Columns are global: message 1 occupies bits [0, L_1), message 2 the
    next L_2 bits, and so on (LSB first). Each composite is a subset P
    with rows that may only touch columns of messages in P.
    """

    message_bits: Tuple[int, ...]
    composites: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.message_bits)
        if any(b < 0 for b in bits):
            raise ValueError("negative message bit width")
        object.__setattr__(self, "message_bits", bits)
        n = len(bits)
        comps = []
        seen = set()
        for subset, rows in self.composites:
            subset = tuple(sorted(subset))
            if not subset:
                raise ValueError("composite over the empty subset")
            if subset in seen:
                raise ValueError(f"duplicate composite subset {subset}")
            seen.add(subset)
            for i in subset:
                if not 1 <= i <= n:
                    raise ValueError(f"composite subset references message {i}")
            allowed = self.columns_mask(subset)
            rows = tuple(int(r) for r in rows)
            if not rows:
                raise ValueError(f"composite {subset} has no rows")
            for r in rows:
                if r < 0 or r & ~allowed:
                    raise ValueError(
                        f"row {r:#x} of composite {subset} leaves its columns"
                    )
            comps.append((subset, rows))
        object.__setattr__(self, "composites", tuple(comps))

    @property
    def total_bits(self) -> int:
        return sum(self.message_bits)

    def offset(self, i: int) -> int:
        """First global column of message i (1-based)."""
        if not 1 <= i <= len(self.message_bits):
            raise ValueError(f"message {i} out of range")
        return sum(self.message_bits[: i - 1])

    def columns_mask(self, ids) -> int:
        mask = 0
        for i in ids:
            off = self.offset(i)
            mask |= ((1 << self.message_bits[i - 1]) - 1) << off
        return mask

    def all_rows(self) -> List[int]:
        return [r for _, rows in self.composites for r in rows]


@dataclass(frozen=True)
class KappaCheck:
    """One decoding constraint: sum of demanded bits over J against kappa_J."""

    user: int
    subset: Tuple[int, ...]
    kappa: int
    needed: int

    @property
    def ok(self) -> bool:
        return self.needed <= self.kappa


@dataclass(frozen=True)
class RateCertificate:
    """Audit trail of a one-shot feasibility check.

    budgets[j] is the broadcast size user j+1 needs in bits; the whole
    broadcast must be max(budgets) bits. rate is message bits over that
    maximum when all messages share a common length, else None.
    """

    feasible: bool
    rate: Optional[object]
    budgets: Tuple[int, ...]
    checks: Tuple[KappaCheck, ...]
    violated: Optional[Tuple[int, Tuple[int, ...]]]

    @property
    def max_budget(self) -> int:
        return max(self.budgets, default=0)


def certified_load(cert: RateCertificate, total_bits: int):
    """Broadcast bits per file of total_bits bits, as an exact rational."""
    if total_bits <= 0:
        raise ValueError("total_bits must be positive")
    return rat(cert.max_budget, total_bits)


def _check_decode_sets(ic: ICInstance, decode_sets) -> List[Tuple[int, int]]:
    """Validate D_j <= K_j <= [N']\\A_j; return (amask, kmask) per user."""
    decode_sets = tuple(tuple(k) for k in decode_sets)
    if len(decode_sets) != len(ic.users):
        raise ValueError(
            f"{len(decode_sets)} decode sets for {len(ic.users)} users"
        )
    full = (1 << ic.num_messages) - 1
    out = []
    for j, (user, kset) in enumerate(zip(ic.users, decode_sets), start=1):
        kmask = _ids_to_mask(kset)
        if kmask & ~full:
            raise ValueError(f"decode set of user {j} references unknown messages")
        amask = _ids_to_mask(user.side)
        dmask = _ids_to_mask(user.demand)
        if dmask & ~kmask:
            raise ValueError(f"decode set of user {j} misses part of its demand")
        if kmask & amask:
            raise ValueError(f"decode set of user {j} overlaps its side information")
        out.append((amask, kmask))
    return out


def novel_feasibility(ic: ICInstance, spec: LinearSpec, decode_sets) -> RateCertificate:
    """Certify a one-shot linear code by rank accounting.

    For each user j, the budget H_j is the rank of the composite rows
    given the side-information columns. For every J within K_j meeting
    the demand, kappa_J is how much of that rank the messages in J carry
    once everything else in A_j and K_j is known; decoding needs the
    demanded bits of J to fit inside kappa_J. All checks are recorded,
    whether they pass or not.
    """
    if len(spec.message_bits) != ic.num_messages:
        raise ValueError("spec and instance disagree on the message count")
    masks = _check_decode_sets(ic, decode_sets)
    ncols = spec.total_bits
    vmat = BitMatrix(ncols, spec.all_rows())

    def units(mask: int) -> BitMatrix:
        rows = []
        for i in _mask_to_ids(mask):
            off = spec.offset(i)
            rows.extend(1 << (off + b) for b in range(spec.message_bits[i - 1]))
        return BitMatrix(ncols, rows)

    budgets = []
    checks: List[KappaCheck] = []
    violated = None
    for j, ((amask, kmask), user) in enumerate(zip(masks, ic.users), start=1):
        budgets.append(conditional_rank(vmat, units(amask)))
        dmask = _ids_to_mask(user.demand)
        base = conditional_rank(vmat, units(amask | kmask))
        subsets = sorted(
            (s for s in _submasks(kmask) if s & dmask),
            key=lambda s: (bin(s).count("1"), s),
        )
        for jmask in subsets:
            kappa = conditional_rank(vmat, units((amask | kmask) & ~jmask)) - base
            needed = sum(ic.lengths[i - 1] for i in _mask_to_ids(jmask))
            check = KappaCheck(j, _mask_to_ids(jmask), kappa, needed)
            checks.append(check)
            if not check.ok and violated is None:
                violated = (j, check.subset)

    feasible = violated is None
    rate = None
    if feasible and ic.users and len(set(ic.lengths)) == 1:
        common = ic.lengths[0]
        top = max(budgets)
        if common > 0 and top > 0:
            rate = rat(common, top)
    return RateCertificate(feasible, rate, tuple(budgets), tuple(checks), violated)


def _lp_cap(max_lps: Optional[int]) -> int:
    if max_lps is not None:
        return max_lps
    return int(os.environ.get("CACHEKIT_MAX_LPS", str(DEFAULT_LP_CAP)))


_ORACLE_BATCH = 16


def composite_symmetric_rate(
    ic: ICInstance, max_lps: Optional[int] = None
) -> Tuple[object, CompositeAssignment]:
    """Best symmetric rate of composite coding, allowing time sharing.

    Phase one enumerates joint decode-set selections (K_1, ..., K_{K'})
    by branch and bound and keeps the best one. Each selection is an
    exact LP in the composite rates S_P and a scalar symmetric rate; an
    undecided user contributes only the constraints shared by all of its
    selections, which upper-bounds every completion, so a node whose LP
    value does not beat the incumbent is pruned. Children are explored
    best bound first; ties keep the smallest decode sets. The winner
    becomes the returned assignment, its value its symmetric_rate.

    Phase two lets different stretches of the message stream use
    different selections, which can strictly beat every single one. The
    value max{R : (R, ..., R) in the convex hull of the union over
    selections, coordinates ranging over demanded messages} is computed
    exactly by column generation: a master LP proposes per-message
    weights mu minimizing the best weighted rate sum sigma seen so far,
    and the branch and bound, re-aimed at maximizing mu times the
    per-message rates, either proves no selection beats sigma (so sigma
    is the hull value) or returns vertices that grow the master. The
    returned rate is this time-shared optimum; it can exceed the
    returned assignment's own symmetric_rate.

    Raises ResourceLimitError after max_lps LP solves across both
    phases (default 10**6, or CACHEKIT_MAX_LPS).
    """
    n = ic.num_messages
    if n == 0 or not ic.users:
        raise ValueError("need at least one message and one user")
    if n > 16:
        raise ResourceLimitError(f"{n} messages means 2^{n} composite rates")
    cap = _lp_cap(max_lps)

    nv = (1 << n) - 1  # composite rate variables; subset mask P -> index P-1
    rvar = nv  # scalar phase: symmetric rate; vector phase: R_i at nv + i - 1
    users = ic.users
    amasks = [_ids_to_mask(u.side) for u in users]
    dmasks = [_ids_to_mask(u.demand) for u in users]
    demanded = 0
    for dmask in dmasks:
        demanded |= dmask
    options: List[List[int]] = []
    for amask, dmask in zip(amasks, dmasks):
        free = nv & ~amask & ~dmask
        opts = [dmask]
        for extra in _submasks(free):
            opts.append(dmask | extra)
        opts.sort(key=lambda m: (bin(m).count("1"), m))
        options.append(opts)
    order = sorted(range(len(users)), key=lambda j: (len(options[j]), j))

    base_rows: List[Constraint] = []
    for amask in amasks:
        coeffs = {p - 1: rat(1) for p in range(1, nv + 1) if p & ~amask}
        base_rows.append(Constraint(coeffs, LE, rat(1)))

    def rate_coeffs(jmask: int, vector: bool) -> Dict[int, object]:
        if vector:
            return {nv + i: rat(1) for i in range(n) if jmask >> i & 1}
        return {rvar: rat(bin(jmask).count("1"))}

    family_cache: Dict[Tuple[int, int, bool], List[Constraint]] = {}

    def decoded_rows(amask: int, kmask: int, vector: bool) -> List[Constraint]:
        key = (amask, kmask, vector)
        rows = family_cache.get(key)
        if rows is None:
            rows = []
            union = amask | kmask
            for jmask in _submasks(kmask):
                coeffs = rate_coeffs(jmask, vector)
                for p in _submasks(union):
                    if p & jmask:
                        coeffs[p - 1] = rat(-1)
                rows.append(Constraint(coeffs, LE, rat(0)))
            family_cache[key] = rows
        return rows

    def relaxed_rows(dmask: int, vector: bool) -> List[Constraint]:
        rows = []
        for jmask in _submasks(dmask):
            coeffs = rate_coeffs(jmask, vector)
            for p in range(1, nv + 1):
                if p & jmask:
                    coeffs[p - 1] = rat(-1)
            rows.append(Constraint(coeffs, LE, rat(0)))
        return rows

    relaxed = {
        vector: [relaxed_rows(dmask, vector) for dmask in dmasks]
        for vector in (False, True)
    }
    decided: List[Optional[int]] = [None] * len(users)
    solved = 0

    def count_lp() -> None:
        nonlocal solved
        if solved >= cap:
            raise ResourceLimitError(f"composite enumeration hit the {cap} LP cap")
        solved += 1

    def solve_node(vector: bool, objective: Dict[int, object]):
        count_lp()
        rows = list(base_rows)
        for j in range(len(users)):
            if decided[j] is None:
                rows.extend(relaxed[vector][j])
            else:
                rows.extend(decoded_rows(amasks[j], decided[j], vector))
        res = lp_maximize(
            LinearProgram(
                num_vars=nv + (n if vector else 1),
                objective=objective,
                constraints=rows,
            )
        )
        if res.status != OPTIMAL:
            raise RuntimeError(f"composite node LP came back {res.status}")
        return res.value, res.solution

    # Phase one: scalar branch and bound over joint selections.
    best_val = rat(0)
    best_sel: Optional[Tuple[int, ...]] = None
    best_sol: Optional[List[object]] = None
    scalar_obj = {rvar: rat(1)}

    def visit(depth: int, bound, sol) -> None:
        nonlocal best_val, best_sel, best_sol
        if best_sel is not None and bound <= best_val:
            return
        if depth == len(users):
            if best_sel is None or bound > best_val:
                best_val = bound
                best_sel = tuple(decided)  # type: ignore[arg-type]
                best_sol = sol
            return
        j = order[depth]
        kids = []
        for opt in options[j]:
            decided[j] = opt
            kids.append((*solve_node(False, scalar_obj), opt))
            decided[j] = None
        kids.sort(key=lambda kv: kv[0], reverse=True)
        for value, solution, opt in kids:
            if best_sel is not None and value <= best_val:
                break
            decided[j] = opt
            visit(depth + 1, value, solution)
            decided[j] = None

    visit(0, *solve_node(False, scalar_obj))
    assert best_sel is not None and best_sol is not None

    # Phase two: exact column generation for the time-shared optimum.
    dem_ids = [i for i in range(n) if demanded >> i & 1]
    zvar = len(dem_ids)
    pool: List[Tuple[object, ...]] = []
    seen_vertices = set()

    def add_vertex(vec) -> bool:
        key = tuple(vec)
        if key in seen_vertices:
            return False
        seen_vertices.add(key)
        pool.append(key)
        return True

    for i in dem_ids:
        unit = [rat(0)] * n
        unit[i] = rat(1)
        add_vertex(unit)
    add_vertex([as_rat(best_val)] * n)

    def master():
        count_lp()
        rows = [
            Constraint({k: rat(1) for k in range(len(dem_ids))}, LE, rat(1)),
            Constraint({k: rat(-1) for k in range(len(dem_ids))}, LE, rat(-1)),
        ]
        for vec in pool:
            coeffs: Dict[int, object] = {zvar: rat(-1)}
            for k, i in enumerate(dem_ids):
                if vec[i] != 0:
                    coeffs[k] = vec[i]
            rows.append(Constraint(coeffs, LE, rat(0)))
        res = lp_maximize(
            LinearProgram(
                num_vars=zvar + 1, objective={zvar: rat(-1)}, constraints=rows
            )
        )
        if res.status != OPTIMAL:
            raise RuntimeError(f"time-share master LP came back {res.status}")
        return -res.value, [res.solution[k] for k in range(len(dem_ids))]

    def oracle(mu, sigma) -> List[List[object]]:
        obj: Dict[int, object] = {}
        for k, i in enumerate(dem_ids):
            if mu[k] != 0:
                obj[nv + i] = mu[k]
        found: List[List[object]] = []

        def visit2(depth: int, bound, sol) -> None:
            if len(found) >= _ORACLE_BATCH or bound <= sigma:
                return
            if depth == len(users):
                found.append([as_rat(sol[nv + i]) for i in range(n)])
                return
            j = order[depth]
            kids = []
            for opt in options[j]:
                decided[j] = opt
                kids.append((*solve_node(True, obj), opt))
                decided[j] = None
            kids.sort(key=lambda kv: kv[0], reverse=True)
            for value, solution, opt in kids:
                if len(found) >= _ORACLE_BATCH or value <= sigma:
                    break
                decided[j] = opt
                visit2(depth + 1, value, solution)
                decided[j] = None

        visit2(0, *solve_node(True, obj))
        return found

    while True:
        sigma, mu = master()
        news = oracle(mu, sigma)
        if not news:
            break
        progressed = False
        for vec in news:
            progressed = add_vertex(vec) or progressed
        if not progressed:
            raise RuntimeError("time-share column generation stalled")

    rates = {
        _mask_to_ids(p): as_rat(best_sol[p - 1])
        for p in range(1, nv + 1)
        if best_sol[p - 1] != 0
    }
    ca = CompositeAssignment(
        decode_sets=tuple(_mask_to_ids(k) for k in best_sel),
        rates=rates,
        symmetric_rate=as_rat(best_val),
    )
    return as_rat(sigma), ca


def clearing_scale(ca: CompositeAssignment, *extra) -> int:
    """Smallest positive integer clearing every denominator in ca (and extras)."""
    scale = 1
    for value in list(ca.rates.values()) + [as_rat(x) for x in extra]:
        scale = math.lcm(scale, num_den(value)[1])
    return scale


def composite_to_linear(
    ic: ICInstance, ca: CompositeAssignment, scale: int
) -> LinearSpec:
    """Realize a composite solution as a one-shot linear spec.

    Message i gets one part of scale*S_P bits per subset P containing it
    (parts ordered by subset mask, ascending), and the composite for P is
    the bitwise XOR of the parts U_{i,P} over i in P. Conditioned on any
    message set B, the remaining composites stay independent, so all rank
    budgets match the composite sums exactly.
    """
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    n = ic.num_messages
    decompression = [rat(0)] * len(ic.users)
    amasks = [_ids_to_mask(u.side) for u in ic.users]
    sizes: Dict[int, int] = {}
    for subset, s in ca.rates.items():
        pmask = _ids_to_mask(subset)
        if pmask >= (1 << n):
            raise ValueError(f"composite subset {subset} exceeds the message count")
        scaled = as_rat(scale) * as_rat(s)
        numer, denom = num_den(scaled)
        if denom != 1:
            raise ValueError(f"scale {scale} does not clear S_{subset} = {s}")
        sizes[pmask] = int(numer)
        for j, amask in enumerate(amasks):
            if pmask & ~amask:
                decompression[j] = decompression[j] + as_rat(s)
    for j, total in enumerate(decompression, start=1):
        if total > 1:
            raise ValueError(f"composite rates overflow the channel at user {j}")

    part_offset: Dict[Tuple[int, int], int] = {}
    bits = [0] * n
    for pmask in sorted(sizes):
        for i in _mask_to_ids(pmask):
            part_offset[(i, pmask)] = bits[i - 1]
            bits[i - 1] += sizes[pmask]

    offsets = [0] * n
    run = 0
    for i in range(n):
        offsets[i] = run
        run += bits[i]

    composites = []
    for pmask in sorted(sizes):
        ids = _mask_to_ids(pmask)
        rows = []
        for r in range(sizes[pmask]):
            row = 0
            for i in ids:
                row |= 1 << (offsets[i - 1] + part_offset[(i, pmask)] + r)
            rows.append(row)
        composites.append((ids, tuple(rows)))
    return LinearSpec(message_bits=tuple(bits), composites=tuple(composites))


def oneshot_simulate(
    ic: ICInstance, spec: LinearSpec, messages: Sequence[int], decode_sets
) -> Tuple[bool, ...]:
    """Broadcast every composite row's value and let each user solve.

    messages[i] holds the bits of message i+1, spec.message_bits[i] wide.
    A user succeeds when each of its demanded bits is an XOR of received
    row values and known side bits; whether the helper messages in its
    decode set come out uniquely does not matter.
    """
    _check_decode_sets(ic, decode_sets)
    if len(messages) != ic.num_messages:
        raise ValueError("one value per message required")
    word = 0
    for i, value in enumerate(messages, start=1):
        width = spec.message_bits[i - 1]
        if not 0 <= value < (1 << width):
            raise ValueError(f"message {i} does not fit in {width} bits")
        word |= value << spec.offset(i)

    ncols = spec.total_bits
    vrows = spec.all_rows()
    flags = []
    for user in ic.users:
        rows = list(vrows)
        values = [bin(r & word).count("1") & 1 for r in rows]
        for i in user.side:
            off = spec.offset(i)
            for b in range(spec.message_bits[i - 1]):
                rows.append(1 << (off + b))
                values.append((word >> (off + b)) & 1)
        known = BitMatrix(ncols, rows)
        ok = True
        for i in user.demand:
            off = spec.offset(i)
            for b in range(spec.message_bits[i - 1]):
                coeffs = solve_combination(1 << (off + b), known)
                if coeffs is None:
                    ok = False
                    break
                got = 0
                for idx, v in enumerate(values):
                    if (coeffs >> idx) & 1:
                        got ^= v
                assert got == (word >> (off + b)) & 1, "inconsistent linear solve"
            if not ok:
                break
        flags.append(ok)
    return tuple(flags)


def yma_as_novel(p: Placement, d) -> Tuple[ICInstance, LinearSpec, Tuple[Tuple[int, ...], ...]]:
    """The leader-pruned delivery as a certified one-shot linear code.

    Messages are the demanded sub-files, the composites are exactly the
    retained XOR payloads, and every user decodes just its own demand
    (K_j = D_j). The resulting certificate's load, max budget over the
    file size, reproduces yma_load(N, K, t).
    """
    inst = p.inst
    sub = inst.subfile_bits
    expect = {
        (i, w): sub
        for i in range(1, inst.N + 1)
        for w in itertools.combinations(range(1, inst.K + 1), inst.t)
    }
    if p.lengths != expect:
        raise ValueError("placement is not the equal-split one")
    d = tuple(d)
    ic = caching_to_ic(p, d)
    tx = yma_delivery(p, d, [0] * inst.N)

    offsets = [0] * (ic.num_messages + 1)
    for i in range(1, ic.num_messages + 1):
        offsets[i] = offsets[i - 1] + ic.lengths[i - 1]

    composites = []
    for s, _ in tx.entries:
        ids = tuple(
            sorted(
                ic.index_of(subfile_label(d[k - 1], tuple(x for x in s if x != k)))
                for k in s
            )
        )
        rows = []
        for r in range(sub):
            row = 0
            for i in ids:
                row |= 1 << (offsets[i - 1] + r)
            rows.append(row)
        composites.append((ids, tuple(rows)))
    spec = LinearSpec(message_bits=ic.lengths, composites=tuple(composites))
    decode_sets = tuple(u.demand for u in ic.users)
    return ic, spec, decode_sets


def bruteforce_linear_capacity(ic: ICInstance, max_tx_bits: int):
    """Exhaust scalar binary linear codes of up to max_tx_bits rows.

    Messages must be one bit each. Candidate codes are enumerated once
    per row space via the reduced row echelon form: choose pivot columns,
    then fill the free positions (non-pivot columns right of each pivot)
    in every way. Returns 1/r for the smallest working row count r, or 0
    when no code within the budget serves every user.
    """
    n = ic.num_messages
    if n > 8:
        raise ResourceLimitError(f"{n} messages is past the exhaustive-search limit")
    if max_tx_bits > 4:
        raise ResourceLimitError(f"{max_tx_bits} rows is past the exhaustive-search limit")
    if any(length != 1 for length in ic.lengths):
        raise ValueError("exhaustive search expects unit-length messages")
    if max_tx_bits < 1:
        raise ValueError("need a positive transmission budget")

    side_units = [[1 << (i - 1) for i in u.side] for u in ic.users]
    demands = [[1 << (i - 1) for i in u.demand] for u in ic.users]

    def decodes(rows: List[int]) -> bool:
        for units, wanted in zip(side_units, demands):
            m = BitMatrix(n, rows + units)
            basis = []
            for row in m.rows:
                for b in basis:
                    if row & (b & -b):
                        row ^= b
                if row:
                    basis.append(row)
            for target in wanted:
                residue = target
                for b in basis:
                    if residue & (b & -b):
                        residue ^= b
                if residue:
                    return False
        return True

    for r in range(1, max_tx_bits + 1):
        for pivots in itertools.combinations(range(n), r):
            pivot_set = set(pivots)
            freepos = [
                (i, c)
                for i in range(r)
                for c in range(pivots[i] + 1, n)
                if c not in pivot_set
            ]
            for fill in range(1 << len(freepos)):
                rows = [1 << pivots[i] for i in range(r)]
                for idx, (i, c) in enumerate(freepos):
                    if (fill >> idx) & 1:
                        rows[i] |= 1 << c
                if decodes(rows):
                    return rat(1, r)
    return rat(0)
