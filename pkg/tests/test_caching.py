from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from cachekit.caching import (
    CachingInstance,
    Placement,
    decode,
    leaders,
    man_delivery,
    man_load,
    man_placement,
    simulate_roundtrip,
    tradeoff_curve,
    worst_case_demand,
    yma_delivery,
    yma_load,
)
from cachekit.core import binom, num_den


def frac(x) -> Fraction:
    return Fraction(*num_den(x))


def random_files(inst, seed):
    rng = random.Random(seed)
    return [rng.getrandbits(inst.B) for _ in range(inst.N)]


def test_instance_validation():
    CachingInstance(N=3, K=3, B=3, t=1)
    with pytest.raises(ValueError):
        CachingInstance(N=0, K=3, B=3, t=1)
    with pytest.raises(ValueError):
        CachingInstance(N=3, K=3, B=3, t=4)
    with pytest.raises(ValueError):
        CachingInstance(N=3, K=3, B=4, t=1)  # 4 not divisible by binom(3,1)


def test_man_placement_small():
    # N=K=3, t=1, B=3: three 1-bit sub-files per file, user k holds F_{i,{k}}.
    inst = CachingInstance(N=3, K=3, B=3, t=1)
    p = man_placement(inst)
    assert sorted(p.lengths) == [
        (i, (k,)) for i in (1, 2, 3) for k in (1, 2, 3)
    ]
    assert all(bits == 1 for bits in p.lengths.values())
    for k in (1, 2, 3):
        assert p.cached_bits(k) == 3  # = M*B with M=1


def test_man_placement_cache_count():
    # N=2, K=4, t=2, B=6: six 1-bit sub-files; binom(3,1)=3 per file cached.
    inst = CachingInstance(N=2, K=4, B=6, t=2)
    p = man_placement(inst)
    assert inst.subfile_bits == 1
    for k in range(1, 5):
        per_file = sum(
            1 for (i, w) in p.lengths if i == 1 and k in w
        )
        assert per_file == binom(3, 1)
        assert p.cached_bits(k) == 6  # M=1


def test_t_zero_means_empty_caches():
    inst = CachingInstance(N=2, K=3, B=1, t=0)
    p = man_placement(inst)
    assert all(p.cached_bits(k) == 0 for k in (1, 2, 3))


def test_placement_rejects_bad_partition_and_budget():
    inst = CachingInstance(N=1, K=2, B=2, t=1)
    with pytest.raises(ValueError):
        Placement(inst, {(1, (1,)): 1})  # sums to 1, not B=2
    with pytest.raises(ValueError):
        # everything on user 1: 2 bits cached > M*B = 1
        Placement(inst, {(1, (1,)): 2})
    # a legal non-MAN split: one bit for user 1, one bit uncached
    p = Placement(inst, {(1, (1,)): 1, (1, ()): 1})
    assert p.cached_bits(1) == 1 and p.cached_bits(2) == 0


def test_subfile_bit_ranges_are_lexicographic():
    inst = CachingInstance(N=1, K=2, B=4, t=1)
    p = Placement(inst, {(1, (1,)): 1, (1, (2,)): 2, (1, ()): 1})
    # canonical order: () < (1,) < (1,2) < (2,)
    assert p.bit_range[(1, ())] == (0, 1)
    assert p.bit_range[(1, (1,))] == (1, 2)
    assert p.bit_range[(1, (2,))] == (2, 4)
    f = [0b1011]
    assert p.subfile(f, 1, ()) == 1
    assert p.subfile(f, 1, (1,)) == 1
    assert p.subfile(f, 1, (2,)) == 0b10


def test_man_delivery_labels_and_payloads():
    inst = CachingInstance(N=3, K=3, B=3, t=1)
    p = man_placement(inst)
    files = random_files(inst, 11)
    tx = man_delivery(p, (1, 2, 3), files)
    labels = [s for s, _ in tx.entries]
    assert labels == [(1, 2), (1, 3), (2, 3)]
    first = dict(tx.entries)[(1, 2)]
    assert first == p.subfile(files, 1, (2,)) ^ p.subfile(files, 2, (1,))


def test_man_delivery_repeated_demand():
    inst = CachingInstance(N=1, K=2, B=2, t=1)
    p = man_placement(inst)
    files = random_files(inst, 5)
    tx = man_delivery(p, (1, 1), files)
    assert len(tx.entries) == 1
    assert tx.entries[0][1] == p.subfile(files, 1, (2,)) ^ p.subfile(files, 1, (1,))


def test_man_delivery_total_bits():
    inst = CachingInstance(N=2, K=4, B=6, t=2)
    p = man_placement(inst)
    tx = man_delivery(p, (1, 2, 1, 2), random_files(inst, 1))
    assert tx.total_bits == 4  # 6 * binom(4,3)/binom(4,2)


def test_leaders():
    assert leaders((1, 2, 3)) == (1, 2, 3)
    assert leaders((2, 2, 1)) == (1, 3)
    assert leaders((1, 1, 1)) == (1,)


def test_yma_equals_man_when_demands_distinct_and_n_large():
    inst = CachingInstance(N=4, K=3, B=3, t=1)
    p = man_placement(inst)
    files = random_files(inst, 3)
    man = man_delivery(p, (2, 3, 4), files)
    yma = yma_delivery(p, (2, 3, 4), files)
    assert yma.entries == man.entries
    assert yma.pruned == ()


def test_yma_prunes_single_file_demand():
    inst = CachingInstance(N=1, K=2, B=2, t=1)
    p = man_placement(inst)
    tx = yma_delivery(p, (1, 1), random_files(inst, 9))
    assert len(tx.entries) == 1  # binom(2,2) - binom(1,2) = 1
    assert tx.entries[0][0] == (1, 2)


def test_yma_worst_case_bit_count():
    inst = CachingInstance(N=2, K=4, B=4, t=1)
    p = man_placement(inst)
    tx = yma_delivery(p, (1, 2, 1, 2), random_files(inst, 2))
    assert tx.total_bits == 5


def test_decode_man_basic():
    inst = CachingInstance(N=3, K=3, B=3, t=1)
    p = man_placement(inst)
    files = random_files(inst, 21)
    d = (1, 2, 3)
    tx = man_delivery(p, d, files)
    for k in (1, 2, 3):
        got = decode(p, k, p.user_cache(files, k), tx, d)
        assert got == files[d[k - 1] - 1]


def test_decode_full_cache_needs_no_transmission():
    inst = CachingInstance(N=2, K=2, B=2, t=2)
    p = man_placement(inst)
    files = random_files(inst, 13)
    d = (2, 1)
    tx = man_delivery(p, d, files)
    assert tx.total_bits == 0
    for k in (1, 2):
        assert decode(p, k, p.user_cache(files, k), tx, d) == files[d[k - 1] - 1]


def test_decode_yma_reconstructs_pruned_payloads():
    inst = CachingInstance(N=1, K=3, B=3, t=1)
    p = man_placement(inst)
    files = random_files(inst, 17)
    d = (1, 1, 1)
    tx = yma_delivery(p, d, files)
    assert tx.pruned == ((2, 3),)
    for k in (1, 2, 3):
        assert decode(p, k, p.user_cache(files, k), tx, d) == files[0]


def test_load_values():
    assert frac(man_load(3, 1)) == 1
    assert frac(yma_load(3, 3, 2)) == Fraction(1, 3)
    assert frac(man_load(4, 4)) == 0


def test_yma_load_matches_delivery_bit_count():
    # the closed form against an actual delivery, worst-case demand
    for N, K, t in [(2, 4, 1), (1, 3, 1), (2, 3, 0), (3, 5, 2), (2, 5, 3)]:
        B = binom(K, t)
        inst = CachingInstance(N=N, K=K, B=B, t=t)
        p = man_placement(inst)
        d = worst_case_demand(N, K)
        tx = yma_delivery(p, d, random_files(inst, 4))
        assert frac(yma_load(N, K, t)) == Fraction(tx.total_bits, B)
    assert frac(yma_load(2, 4, 1)) == Fraction(5, 4)


def test_man_load_matches_delivery_bit_count():
    for K, t in [(3, 1), (4, 2), (5, 0), (2, 2)]:
        B = binom(K, t)
        inst = CachingInstance(N=2, K=K, B=B, t=t)
        p = man_placement(inst)
        tx = man_delivery(p, worst_case_demand(2, K), random_files(inst, 8))
        assert frac(man_load(K, t)) == Fraction(tx.total_bits, B)


def test_yma_never_exceeds_man_and_strictness_rule():
    for N in range(1, 7):
        for K in range(1, 7):
            for t in range(K + 1):
                y = frac(yma_load(N, K, t))
                m = frac(man_load(K, t))
                assert y <= m
                strict = N < K and t + 1 <= K - N
                assert (y < m) == strict, (N, K, t)


def test_tradeoff_curve_corners():
    env = tradeoff_curve(3, 3, "yma")
    assert [(frac(x), frac(y)) for x, y in env.points] == [
        (0, 3),
        (1, 1),
        (2, Fraction(1, 3)),
        (3, 0),
    ]


def test_tradeoff_man_equals_yma_when_enough_files():
    a = tradeoff_curve(4, 3, "man")
    b = tradeoff_curve(4, 3, "yma")
    assert a.points == b.points


def test_tradeoff_small_single_file():
    env = tradeoff_curve(1, 2, "yma")
    assert [(frac(x), frac(y)) for x, y in env.points] == [
        (0, 1),
        (Fraction(1, 2), Fraction(1, 2)),
        (1, 0),
    ]


def test_simulate_roundtrip_examples():
    inst = CachingInstance(N=3, K=3, B=3, t=1)
    ok, bits = simulate_roundtrip(inst, (1, 2, 3), seed=42)
    assert ok and bits == 3

    inst = CachingInstance(N=2, K=2, B=2, t=2)
    ok, bits = simulate_roundtrip(inst, (1, 2), seed=0)
    assert ok and bits == 0

    inst = CachingInstance(N=2, K=4, B=4, t=1)
    ok, bits = simulate_roundtrip(inst, (1, 2, 1, 2), seed=3, scheme="yma")
    assert ok and bits == 5

    # deterministic given the seed
    assert simulate_roundtrip(inst, (1, 2, 1, 2), 3, "yma") == (ok, bits)


def test_roundtrip_sweep_small():
    # full N,K <= 5 sweep lives in the acceptance suite; this keeps the
    # unit run fast while still covering every demand pattern shape
    for N, K in [(1, 3), (2, 3), (3, 2), (3, 3)]:
        for t in range(K + 1):
            inst = CachingInstance(N=N, K=K, B=binom(K, t), t=t)
            for d in itertools.product(range(1, N + 1), repeat=K):
                for seed in (0, 1, 2):
                    ok, _ = simulate_roundtrip(inst, d, seed)
                    assert ok, (N, K, t, d, seed)


def test_worst_case_demand_maximizes_yma_bits():
    for N, K in [(2, 3), (3, 3), (2, 4), (4, 2)]:
        t = 1
        inst = CachingInstance(N=N, K=K, B=binom(K, t), t=t)
        p = man_placement(inst)
        files = random_files(inst, 6)
        best = max(
            yma_delivery(p, d, files).total_bits
            for d in itertools.product(range(1, N + 1), repeat=K)
        )
        wc = yma_delivery(p, worst_case_demand(N, K), files).total_bits
        assert wc == best


def test_demand_validation():
    inst = CachingInstance(N=2, K=2, B=2, t=1)
    p = man_placement(inst)
    files = random_files(inst, 0)
    with pytest.raises(ValueError):
        man_delivery(p, (1, 3), files)
    with pytest.raises(ValueError):
        man_delivery(p, (1,), files)
