from cachekit.core import binom


def test_small_values():
    assert binom(4, 2) == 6
    assert binom(5, 0) == 1
    assert binom(3, 3) == 1


def test_out_of_range_is_zero():
    assert binom(2, 3) == 0
    assert binom(-1, 0) == 0
    assert binom(-3, 2) == 0
    assert binom(0, 1) == 0
    assert binom(5, -1) == 0


def test_empty_choice():
    assert binom(0, 0) == 1
    for n in range(1, 10):
        assert binom(n, 0) == 1


def test_pascal_triangle_recurrence():
    for n in range(1, 30):
        for k in range(0, n + 1):
            assert binom(n, k) == binom(n - 1, k - 1) + binom(n - 1, k)


def test_hockey_stick_partial_sums():
    # sum_{i=1..m} binom(K-i, t) == binom(K, t+1) - binom(K-m, t+1),
    # including the edge cases that rely on binom(0, 0) == 1.
    for K in range(1, 9):
        for t in range(0, K + 1):
            for m in range(1, K + 1):
                lhs = sum(binom(K - i, t) for i in range(1, m + 1))
                rhs = binom(K, t + 1) - binom(K - m, t + 1)
                assert lhs == rhs, (K, t, m)
