from __future__ import annotations

from fractions import Fraction

import pytest

from cachekit.core import PiecewiseCurve, lower_convex_envelope


def test_envelope_drops_dominated_corner():
    pts = [(0, 1), (1, 1), (2, 0)]
    env = lower_convex_envelope(pts)
    assert [(Fraction(x), Fraction(y)) for x, y in env.points] == [(0, 1), (2, 0)]


def test_envelope_keeps_collinear_corners():
    pts = [(1, 0), (0, 1), (Fraction(1, 2), Fraction(1, 2))]
    env = lower_convex_envelope(pts)
    assert len(env.points) == 3
    assert env.points[1] == (Fraction(1, 2), Fraction(1, 2))


def test_envelope_rejects_duplicate_memory():
    with pytest.raises(ValueError):
        lower_convex_envelope([(0, 1), (0, 2), (1, 0)])


def test_evaluate_interpolates_and_hits_corners():
    env = lower_convex_envelope([(0, 3), (1, 1), (3, 0)])
    assert env.evaluate(0) == 3
    assert env.evaluate(1) == 1
    assert env.evaluate(Fraction(1, 2)) == 2
    assert env.evaluate(2) == Fraction(1, 2)
    assert env.evaluate(3) == 0


def test_evaluate_outside_range_raises():
    env = lower_convex_envelope([(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        env.evaluate(-1)
    with pytest.raises(ValueError):
        env.evaluate(2)


def test_curve_validates_shape():
    with pytest.raises(ValueError):
        PiecewiseCurve(points=((0, 0), (0, 1)))  # memory not increasing
    with pytest.raises(ValueError):
        # slopes decrease: concave kink is not allowed
        PiecewiseCurve(points=((0, 0), (1, 2), (2, 2)))
    c = PiecewiseCurve(points=((0, 2), (1, 1), (2, 1)))
    assert list(c.slopes()) == [Fraction(-1), Fraction(0)]


def test_single_point_curve():
    c = PiecewiseCurve(points=((1, 5),))
    assert c.evaluate(1) == 5
    with pytest.raises(ValueError):
        c.evaluate(0)
