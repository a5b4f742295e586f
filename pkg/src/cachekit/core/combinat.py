"""Integer combinatorics with the binomial convention used throughout."""

from __future__ import annotations

import math


def binom(n: int, k: int) -> int:
    """Binomial coefficient extended by: 0 when n < 0, k < 0 or k > n.

    In particular binom(0, 0) == 1 and binom(0, k) == 0 for k >= 1, which is
    exactly what makes the hockey-stick identities below hold at the edges:

        sum_{i=1..m} binom(K-i, t) == binom(K, t+1) - binom(K-m, t+1)
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)
