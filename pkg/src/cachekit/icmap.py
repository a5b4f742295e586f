"""Index-coding view of a caching instance and the acyclic-set converse.

A delivery problem with fixed placement and demands is an index-coding
problem: every demanded sub-file is a message, every user wants the
sub-files of its file it does not cache and already knows the cached
ones. Any induced acyclic set of the side-information digraph gives a
lower bound on the broadcast size: the sum of its message lengths.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .caching import Placement, Subset, all_subsets
from .core import rat
from .errors import ResourceLimitError

__all__ = [
    "ICInstance",
    "ICUser",
    "SideInfoDigraph",
    "acyclic_bound",
    "build_digraph",
    "caching_to_ic",
    "is_acyclic",
    "max_acyclic_bound",
    "permutation_acyclic_set",
    "subfile_label",
    "subfile_messages",
]


def subfile_label(f: int, w: Subset) -> str:
    """Canonical vertex name for sub-file (file f, user subset W)."""
    return "F%d{%s}" % (f, ",".join(str(x) for x in sorted(w)))


@dataclass(frozen=True)
class ICUser:
    demand: Tuple[int, ...]
    side: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "demand", tuple(sorted(set(self.demand))))
        object.__setattr__(self, "side", tuple(sorted(set(self.side))))


@dataclass(frozen=True)
class ICInstance:
    """Broadcast with num_messages messages; user j wants demand, knows side.

    Message ids are 1-based. lengths defaults to one bit per message;
    labels default to the stringified ids.
    """

    num_messages: int
    users: Tuple[ICUser, ...]
    lengths: Optional[Tuple[int, ...]] = None
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.num_messages < 0:
            raise ValueError("negative message count")
        n = self.num_messages
        object.__setattr__(self, "users", tuple(self.users))
        if self.lengths is None:
            object.__setattr__(self, "lengths", (1,) * n)
        else:
            object.__setattr__(self, "lengths", tuple(self.lengths))
        if len(self.lengths) != n:
            raise ValueError("lengths must have one entry per message")
        if any(x < 0 for x in self.lengths):
            raise ValueError("negative message length")
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(1, n + 1)))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise ValueError("labels must be distinct, one per message")
        everything = set(range(1, n + 1))
        for j, u in enumerate(self.users, start=1):
            if not u.demand:
                raise ValueError(f"user {j} demands nothing")
            for x in u.demand + u.side:
                if not 1 <= x <= n:
                    raise ValueError(f"user {j} references message {x} outside [1..{n}]")
            if set(u.demand) & set(u.side):
                raise ValueError(f"user {j} both demands and knows a message")
            if set(u.side) == everything:
                raise ValueError(f"user {j} already knows every message")

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label) + 1
        except ValueError:
            raise KeyError(label) from None


def caching_to_ic(p: Placement, d, users: Optional[Iterable[int]] = None) -> ICInstance:
    """Messages are the positive-length sub-files demanded by the user set.

    users defaults to everyone; pass a representative subset with pairwise
    distinct demands to get a multiple-unicast instance when the demand
    vector repeats files. Users whose whole file is cached are dropped.
    """
    inst = p.inst
    d = tuple(d)
    if len(d) != inst.K:
        raise ValueError(f"demand vector has {len(d)} entries, expected {inst.K}")
    chosen = sorted(set(users)) if users is not None else list(range(1, inst.K + 1))
    for k in chosen:
        if not 1 <= k <= inst.K:
            raise ValueError(f"user {k} outside [1..{inst.K}]")

    msg_ids: Dict[Tuple[int, Subset], int] = {}
    labels: List[str] = []
    lengths: List[int] = []
    for f in sorted(set(d[k - 1] for k in chosen)):
        for w in all_subsets(inst.K):
            if (f, w) not in p.lengths:
                continue
            if any(d[k - 1] == f and k not in w for k in chosen):
                msg_ids[(f, w)] = len(labels) + 1
                labels.append(subfile_label(f, w))
                lengths.append(p.lengths[(f, w)])

    ic_users = []
    for k in chosen:
        demand = tuple(
            m for (f, w), m in msg_ids.items() if f == d[k - 1] and k not in w
        )
        side = tuple(m for (f, w), m in msg_ids.items() if k in w)
        if demand:
            ic_users.append(ICUser(demand=demand, side=side))
    return ICInstance(
        num_messages=len(labels),
        users=tuple(ic_users),
        lengths=tuple(lengths),
        labels=tuple(labels),
    )


@dataclass(frozen=True)
class SideInfoDigraph:
    """One vertex per message; edge i -> j iff j's demander knows i."""

    vertices: Tuple[int, ...]
    succ: Dict[int, Tuple[int, ...]]

    def check_vertices(self, s: Iterable[int]) -> Tuple[int, ...]:
        s = tuple(s)
        known = set(self.vertices)
        for v in s:
            if v not in known:
                raise ValueError(f"unknown vertex {v}")
        if len(set(s)) != len(s):
            raise ValueError("duplicate vertices in set")
        return s


def build_digraph(ic: ICInstance) -> SideInfoDigraph:
    """Side-information digraph of a multiple-unicast instance.

    Each message must be demanded by exactly one user (multi-demand users
    count once per demanded message; the virtual user splitting keeps the
    side set and nothing else, so demanding the same message twice would
    make the digraph ill-defined and raises instead).
    """
    demander: Dict[int, int] = {}
    for j, u in enumerate(ic.users):
        for m in u.demand:
            if m in demander:
                raise ValueError(f"message {m} demanded by more than one user")
            demander[m] = j
    missing = [m for m in range(1, ic.num_messages + 1) if m not in demander]
    if missing:
        raise ValueError(f"message {missing[0]} demanded by no user")

    vertices = tuple(range(1, ic.num_messages + 1))
    succ = {v: [] for v in vertices}
    for j_msg in vertices:
        knows = ic.users[demander[j_msg]].side
        for i_msg in knows:
            succ[i_msg].append(j_msg)
    return SideInfoDigraph(
        vertices=vertices,
        succ={v: tuple(sorted(out)) for v, out in succ.items()},
    )


def is_acyclic(g: SideInfoDigraph, s: Iterable[int]) -> bool:
    """Kahn's algorithm on the induced subgraph."""
    s = g.check_vertices(s)
    inside = set(s)
    indeg = {v: 0 for v in s}
    for v in s:
        for w in g.succ[v]:
            if w in inside:
                indeg[w] += 1
    queue = [v for v in s if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for w in g.succ[v]:
            if w in inside:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
    return seen == len(s)


def _is_acyclic_dfs(g: SideInfoDigraph, s: Iterable[int]) -> bool:
    """Colored depth-first search; cross-checks is_acyclic in the tests."""
    s = g.check_vertices(s)
    inside = set(s)
    color = {v: 0 for v in s}  # 0 unseen, 1 on stack, 2 done

    def visit(v: int) -> bool:
        color[v] = 1
        for w in g.succ[v]:
            if w not in inside:
                continue
            if color[w] == 1:
                return False
            if color[w] == 0 and not visit(w):
                return False
        color[v] = 2
        return True

    return all(color[v] != 0 or visit(v) for v in s)


def permutation_acyclic_set(d, u: Sequence[int]) -> Tuple[Tuple[int, Subset], ...]:
    """Sub-files guaranteed to induce an acyclic set, one block per user.

    For the i-th user u_i in the order u, take every (d_{u_i}, W) with
    W inside [K] minus {u_1..u_i}. Edges between blocks only point from
    earlier blocks to later ones (a later user can sit in an earlier W
    but never the other way around), so no cycle fits inside the set.
    The users in u must demand pairwise distinct files.
    """
    d = tuple(d)
    K = len(d)
    u = tuple(u)
    if len(set(u)) != len(u):
        raise ValueError("user order repeats a user")
    for k in u:
        if not 1 <= k <= K:
            raise ValueError(f"user {k} outside [1..{K}]")
    files = [d[k - 1] for k in u]
    if len(set(files)) != len(files):
        raise ValueError("users in u must demand distinct files")

    out: List[Tuple[int, Subset]] = []
    excluded: set = set()
    for k in u:
        excluded.add(k)
        rest = [x for x in range(1, K + 1) if x not in excluded]
        for size in range(len(rest) + 1):
            for w in itertools.combinations(rest, size):
                out.append((d[k - 1], w))
    return tuple(out)


def subfile_messages(ic: ICInstance, pairs: Iterable[Tuple[int, Subset]]) -> Tuple[int, ...]:
    """Message ids for (file, W) pairs; pairs with no message are dropped.

    A pair can be absent because its sub-file has zero length, in which
    case it contributes nothing to any bound anyway.
    """
    out = []
    for f, w in pairs:
        try:
            out.append(ic.index_of(subfile_label(f, w)))
        except KeyError:
            pass
    return tuple(out)


def acyclic_bound(ic: ICInstance, s: Iterable[int], g: Optional[SideInfoDigraph] = None):
    """Total bits of an acyclic message set: a broadcast-size lower bound."""
    if g is None:
        g = build_digraph(ic)
    s = tuple(s)
    if not is_acyclic(g, s):
        raise ValueError("set induces a directed cycle")
    return rat(sum(ic.lengths[m - 1] for m in s))


def max_acyclic_bound(
    ic: ICInstance,
    g: Optional[SideInfoDigraph] = None,
    cap: int = 20,
):
    """Best acyclic-set bound by exhaustive search; (value, witness ids).

    Vertices are tried in descending weight order with a branch-and-bound
    cut on the remaining weight, so instances near the cap stay fast.
    Ties go to the first maximum in search order.
    """
    if ic.num_messages > cap:
        raise ResourceLimitError(
            f"{ic.num_messages} messages exceed the search cap {cap}"
        )
    if g is None:
        g = build_digraph(ic)
    order = sorted(
        range(1, ic.num_messages + 1), key=lambda m: (-ic.lengths[m - 1], m)
    )
    suffix = [0] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + ic.lengths[order[i] - 1]

    best_value = -1
    best_set: Tuple[int, ...] = ()

    def closes_cycle(v: int, chosen: set) -> bool:
        # is there a path v -> ... -> v inside chosen + {v}?
        stack = [w for w in g.succ[v] if w in chosen]
        seen = set(stack)
        while stack:
            x = stack.pop()
            for w in g.succ[x]:
                if w == v:
                    return True
                if w in chosen and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    def walk(i: int, chosen: set, weight: int):
        nonlocal best_value, best_set
        if weight + suffix[i] <= best_value:
            return
        if i == len(order):
            if weight > best_value:
                best_value = weight
                best_set = tuple(sorted(chosen))
            return
        v = order[i]
        if not closes_cycle(v, chosen):
            chosen.add(v)
            walk(i + 1, chosen, weight + ic.lengths[v - 1])
            chosen.remove(v)
        walk(i + 1, chosen, weight)

    walk(0, set(), 0)
    return rat(best_value), best_set
