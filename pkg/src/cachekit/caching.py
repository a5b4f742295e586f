"""Coded caching with uncoded placement and XOR broadcast delivery.

Files are plain ints of B bits. A placement splits every file into
sub-files indexed by user subsets W; user k stores the sub-files with
k in W. Delivery broadcasts one XOR payload per (t+1)-subset of users,
optionally pruned to the payloads that touch a leader user. Everything
here is bit-exact: decoding reconstructs the demanded file, not an
approximation of it.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple

from .core import (
    BitMatrix,
    PiecewiseCurve,
    binom,
    lower_convex_envelope,
    rat,
    solve_combination,
)
from .errors import DecodeError

__all__ = [
    "CachingInstance",
    "Placement",
    "TransmissionSet",
    "all_subsets",
    "decode",
    "leaders",
    "man_delivery",
    "man_load",
    "man_placement",
    "simulate_roundtrip",
    "tradeoff_curve",
    "worst_case_demand",
    "yma_delivery",
    "yma_load",
]

Subset = Tuple[int, ...]  # sorted 1-based user indices


def all_subsets(K: int) -> List[Subset]:
    """Every subset of [1..K] as a sorted tuple, in lexicographic order.

    This is the canonical sub-file order: the first subset in this list
    owns the lowest bit-range of each file.
    """
    out: List[Subset] = []
    for size in range(K + 1):
        out.extend(itertools.combinations(range(1, K + 1), size))
    out.sort()
    return out


@dataclass(frozen=True)
class CachingInstance:
    """A broadcast server with N files of B bits and K caching users.

    The memory parameter t in [0..K] fixes the per-user cache size
    M = t*N/K files. B must be divisible by binom(K, t) so that MAN
    sub-files have integer bit lengths.
    """

    N: int
    K: int
    B: int
    t: int

    def __post_init__(self):
        if self.N < 1 or self.K < 1:
            raise ValueError("need at least one file and one user")
        if not 0 <= self.t <= self.K:
            raise ValueError(f"t={self.t} outside [0..{self.K}]")
        if self.B < 1:
            raise ValueError("file length must be positive")
        if self.B % binom(self.K, self.t) != 0:
            raise ValueError(
                f"B={self.B} not divisible by binom({self.K},{self.t})="
                f"{binom(self.K, self.t)}"
            )

    @property
    def memory(self):
        """Cache size M in units of files: t*N/K."""
        return rat(self.t * self.N, self.K)

    @property
    def subfile_bits(self) -> int:
        return self.B // binom(self.K, self.t)

    @property
    def cache_bits(self) -> int:
        """M*B = t*N*B/K, always an integer for a valid instance."""
        return self.N * binom(self.K - 1, self.t - 1) * self.subfile_bits


@dataclass
class Placement:
    """An uncoded placement: a partition of every file into sub-files.

    lengths maps (file, W) to a positive bit count; pairs not present
    have length zero. Each file's sub-files occupy contiguous bit-ranges
    in the canonical subset order of all_subsets().
    """

    inst: CachingInstance
    lengths: Dict[Tuple[int, Subset], int]
    bit_range: Dict[Tuple[int, Subset], Tuple[int, int]] = field(init=False)

    def __post_init__(self):
        inst = self.inst
        users = set(range(1, inst.K + 1))
        clean: Dict[Tuple[int, Subset], int] = {}
        for (i, w), bits in self.lengths.items():
            w = tuple(sorted(w))
            if not 1 <= i <= inst.N:
                raise ValueError(f"file index {i} outside [1..{inst.N}]")
            if not set(w) <= users:
                raise ValueError(f"subset {w} not within [1..{inst.K}]")
            if bits < 0:
                raise ValueError("negative sub-file length")
            if bits:
                clean[(i, w)] = clean.get((i, w), 0) + bits
        self.lengths = clean

        order = all_subsets(inst.K)
        self.bit_range = {}
        for i in range(1, inst.N + 1):
            pos = 0
            for w in order:
                bits = clean.get((i, w), 0)
                if bits:
                    self.bit_range[(i, w)] = (pos, pos + bits)
                    pos += bits
            if pos != inst.B:
                raise ValueError(
                    f"sub-files of file {i} sum to {pos} bits, expected {inst.B}"
                )

        budget = inst.memory * inst.B
        for k in range(1, inst.K + 1):
            if self.cached_bits(k) > budget:
                raise ValueError(f"user {k} cache exceeds budget {budget} bits")

    def cached_bits(self, k: int) -> int:
        return sum(bits for (i, w), bits in self.lengths.items() if k in w)

    def subfile(self, files: List[int], i: int, w: Subset) -> int:
        """Bits of F_{i,W} extracted from the file contents."""
        w = tuple(sorted(w))
        if (i, w) not in self.bit_range:
            return 0
        start, stop = self.bit_range[(i, w)]
        return (files[i - 1] >> start) & ((1 << (stop - start)) - 1)

    def user_cache(self, files: List[int], k: int) -> Dict[Tuple[int, Subset], int]:
        """Everything user k stores: sub-file contents keyed by (file, W)."""
        return {
            (i, w): self.subfile(files, i, w)
            for (i, w) in self.lengths
            if k in w
        }


def man_placement(inst: CachingInstance) -> Placement:
    """Split every file into binom(K,t) equal sub-files, one per t-subset."""
    sub = inst.subfile_bits
    lengths = {
        (i, w): sub
        for i in range(1, inst.N + 1)
        for w in itertools.combinations(range(1, inst.K + 1), inst.t)
    }
    return Placement(inst, lengths)


@dataclass(frozen=True)
class TransmissionSet:
    """Broadcast payloads, each labeled by the (t+1)-subset it serves."""

    scheme: str
    subfile_bits: int
    entries: Tuple[Tuple[Subset, int], ...]
    pruned: Tuple[Subset, ...] = ()

    @property
    def total_bits(self) -> int:
        return len(self.entries) * self.subfile_bits


def _validate_demand(inst: CachingInstance, d) -> Tuple[int, ...]:
    d = tuple(d)
    if len(d) != inst.K:
        raise ValueError(f"demand vector has {len(d)} entries, expected {inst.K}")
    for x in d:
        if not 1 <= x <= inst.N:
            raise ValueError(f"demanded file {x} outside [1..{inst.N}]")
    return d


def _payload(p: Placement, files: List[int], d: Tuple[int, ...], s: Subset) -> int:
    out = 0
    for k in s:
        w = tuple(x for x in s if x != k)
        out ^= p.subfile(files, d[k - 1], w)
    return out


def man_delivery(p: Placement, d, files: List[int]) -> TransmissionSet:
    """One XOR payload per (t+1)-subset S: xor over s in S of F_{d_s, S\\{s}}."""
    inst = p.inst
    d = _validate_demand(inst, d)
    entries = tuple(
        (s, _payload(p, files, d, s))
        for s in itertools.combinations(range(1, inst.K + 1), inst.t + 1)
    )
    return TransmissionSet("man", inst.subfile_bits, entries)


def leaders(d: Iterable[int]) -> Subset:
    """The lowest-indexed user per distinct demanded file, sorted."""
    first: Dict[int, int] = {}
    for k, f in enumerate(d, start=1):
        if f not in first:
            first[f] = k
    return tuple(sorted(first.values()))


def yma_delivery(p: Placement, d, files: List[int]) -> TransmissionSet:
    """MAN delivery minus the payloads whose subset avoids every leader.

    The dropped payloads are redundant: each is an XOR of retained ones,
    so decode() can re-synthesize them. The retained count is
    binom(K,t+1) - binom(K-|N(d)|,t+1) where N(d) is the distinct demand set.
    """
    inst = p.inst
    d = _validate_demand(inst, d)
    lead = set(leaders(d))
    entries = []
    pruned = []
    for s in itertools.combinations(range(1, inst.K + 1), inst.t + 1):
        if lead.intersection(s):
            entries.append((s, _payload(p, files, d, s)))
        else:
            pruned.append(s)
    expect = binom(inst.K, inst.t + 1) - binom(inst.K - len(lead), inst.t + 1)
    assert len(entries) == expect, "leader pruning miscounted"
    return TransmissionSet("yma", inst.subfile_bits, tuple(entries), tuple(pruned))


def _symbol_rows(inst: CachingInstance, d: Tuple[int, ...], labels: Iterable[Subset]):
    """GF(2) rows describing payloads over the (file, W) symbol space.

    Payload X_S is the XOR of the symbols (d_s, S\\{s}) for s in S; two
    payloads are equal for every file realization iff their symbol rows
    are equal, which is what lets the pruned ones be re-synthesized.
    """
    symbols = {}
    for f in sorted(set(d)):
        for w in itertools.combinations(range(1, inst.K + 1), inst.t):
            symbols[(f, w)] = len(symbols)
    rows = []
    for s in labels:
        row = 0
        for k in s:
            w = tuple(x for x in s if x != k)
            row |= 1 << symbols[(d[k - 1], w)]
        rows.append(row)
    return len(symbols), rows


def _reconstruct_pruned(p: Placement, tx: TransmissionSet, d: Tuple[int, ...]):
    """Payloads for pruned labels as XORs of retained payloads."""
    inst = p.inst
    retained = [s for s, _ in tx.entries]
    values = [v for _, v in tx.entries]
    nsym, rows = _symbol_rows(inst, d, retained + list(tx.pruned))
    basis = BitMatrix(nsym, rows[: len(retained)])
    out = {}
    for idx, s in enumerate(tx.pruned):
        coeffs = solve_combination(rows[len(retained) + idx], basis)
        if coeffs is None:
            raise DecodeError(f"pruned payload {s} is not spanned by retained ones")
        v = 0
        for j in range(len(retained)):
            if coeffs >> j & 1:
                v ^= values[j]
        out[s] = v
    return out


def decode(p: Placement, user: int, cache, tx: TransmissionSet, d) -> int:
    """Rebuild user's demanded file from its cache and the broadcast.

    cache is the dict produced by Placement.user_cache. Raises DecodeError
    when a needed sub-file or payload is missing, which never happens for
    transmissions produced by man_delivery/yma_delivery on the same placement.
    """
    inst = p.inst
    d = _validate_demand(inst, d)
    if not 1 <= user <= inst.K:
        raise ValueError(f"user {user} outside [1..{inst.K}]")
    want = d[user - 1]

    payloads = dict(tx.entries)
    if tx.pruned:
        payloads.update(_reconstruct_pruned(p, tx, d))

    out = 0
    for (i, w), (start, stop) in p.bit_range.items():
        if i != want:
            continue
        if user in w:
            if (i, w) not in cache:
                raise DecodeError(f"cache for user {user} is missing F_{(i, w)}")
            piece = cache[(i, w)]
        else:
            s = tuple(sorted(w + (user,)))
            if s not in payloads:
                raise DecodeError(f"no payload for subset {s}")
            piece = payloads[s]
            for k in w:
                other = (d[k - 1], tuple(x for x in s if x != k))
                if other not in cache:
                    raise DecodeError(
                        f"cache for user {user} is missing F_{other}"
                    )
                piece ^= cache[other]
        out |= piece << start
    return out


def man_load(K: int, t: int):
    """Broadcast bits per file bit for MAN delivery: binom(K,t+1)/binom(K,t)."""
    if not 0 <= t <= K:
        raise ValueError(f"t={t} outside [0..{K}]")
    return rat(binom(K, t + 1), binom(K, t))


def yma_load(N: int, K: int, t: int):
    """MAN load minus the leader-pruning saving.

    (binom(K,t+1) - binom(K-min(K,N),t+1)) / binom(K,t); equals man_load
    when N >= K.
    """
    if N < 1 or K < 1:
        raise ValueError("need at least one file and one user")
    if not 0 <= t <= K:
        raise ValueError(f"t={t} outside [0..{K}]")
    num = binom(K, t + 1) - binom(K - min(K, N), t + 1)
    return rat(num, binom(K, t))


def tradeoff_curve(N: int, K: int, scheme: str) -> PiecewiseCurve:
    """Memory-load corners (t*N/K, load(t)) for t in [0..K], enveloped."""
    if scheme == "man":
        loads = [man_load(K, t) for t in range(K + 1)]
    elif scheme == "yma":
        loads = [yma_load(N, K, t) for t in range(K + 1)]
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    points = [(rat(t * N, K), loads[t]) for t in range(K + 1)]
    return lower_convex_envelope(points)


def worst_case_demand(N: int, K: int) -> Tuple[int, ...]:
    """A demand with min(N,K) distinct files: 1,2,..,N,1,2,.. cyclically."""
    return tuple((k % N) + 1 for k in range(K))


def simulate_roundtrip(inst: CachingInstance, d, seed: int, scheme: str = "both"):
    """Place, deliver, and decode random file contents end to end.

    File bits come from random.Random(seed).getrandbits(B), one file at a
    time in file order. Every user's decode is compared bit-for-bit with
    its demanded file. Returns (success, transmitted_bits) where the bit
    count is MAN's for scheme="man" and YMA's otherwise ("both" verifies
    the two schemes and reports the YMA count).
    """
    if scheme not in ("man", "yma", "both"):
        raise ValueError(f"unknown scheme {scheme!r}")
    d = _validate_demand(inst, d)
    rng = random.Random(seed)
    files = [rng.getrandbits(inst.B) for _ in range(inst.N)]
    p = man_placement(inst)

    runs = []
    if scheme in ("man", "both"):
        runs.append(man_delivery(p, d, files))
    if scheme in ("yma", "both"):
        runs.append(yma_delivery(p, d, files))

    success = True
    for tx in runs:
        for k in range(1, inst.K + 1):
            got = decode(p, k, p.user_cache(files, k), tx, d)
            if got != files[d[k - 1] - 1]:
                success = False
    bits = runs[0].total_bits if scheme == "man" else runs[-1].total_bits
    return success, bits
