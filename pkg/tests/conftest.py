"""Shared fixtures, including the one slow composite computation.

The time-shared composite optimum of the six-message example takes many
minutes of exact LP enumeration, so it is computed once per session and
shared by every test that needs it.
"""

from __future__ import annotations

import pytest

from cachekit.icmap import ICInstance, ICUser
from cachekit.icschemes import composite_symmetric_rate

EXAMPLE1_SIDES = {
    1: (3, 4),
    2: (4, 5),
    3: (5, 6),
    4: (2, 3, 6),
    5: (1, 4, 6),
    6: (1, 2),
}


def make_example1() -> ICInstance:
    """Six unit messages, user j demands message j with the sides above."""
    return ICInstance(
        num_messages=6,
        users=tuple(
            ICUser(demand=(j,), side=EXAMPLE1_SIDES[j]) for j in range(1, 7)
        ),
    )


@pytest.fixture(scope="session")
def example1_ic() -> ICInstance:
    return make_example1()


@pytest.fixture(scope="session")
def example1_composite(example1_ic):
    """(time-shared value, best single assignment); minutes of runtime."""
    return composite_symmetric_rate(example1_ic)
