"""Piecewise-linear memory/load curves and their lower convex envelope."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from cachekit.core.rational import as_rat


@dataclass(frozen=True)
class PiecewiseCurve:
    """Corners (memory, load), memory strictly increasing, slopes non-decreasing."""

    points: Tuple[Tuple[object, object], ...]

    def __post_init__(self):
        pts = tuple((as_rat(m), as_rat(v)) for m, v in self.points)
        object.__setattr__(self, "points", pts)
        for (m1, _), (m2, _) in zip(pts, pts[1:]):
            if m2 <= m1:
                raise ValueError("memory coordinates must be strictly increasing")
        slopes = self.slopes()
        for s1, s2 in zip(slopes, slopes[1:]):
            if s2 < s1:
                raise ValueError("curve is not convex")

    def slopes(self) -> List[object]:
        return [
            (v2 - v1) / (m2 - m1)
            for (m1, v1), (m2, v2) in zip(self.points, self.points[1:])
        ]

    def evaluate(self, memory) -> object:
        """Exact value at `memory` by linear interpolation between corners."""
        m = as_rat(memory)
        pts = self.points
        if not pts:
            raise ValueError("empty curve")
        if m < pts[0][0] or m > pts[-1][0]:
            raise ValueError(f"memory {m} outside curve range [{pts[0][0]}, {pts[-1][0]}]")
        for (m1, v1), (m2, v2) in zip(pts, pts[1:]):
            if m1 <= m <= m2:
                return v1 + (v2 - v1) * (m - m1) / (m2 - m1)
        return pts[-1][1]  # m equals the last corner


def lower_convex_envelope(points: Sequence[Tuple[object, object]]) -> PiecewiseCurve:
    """Lower convex envelope of (memory, load) points.

    Points strictly above the envelope are dropped; points lying exactly on a
    segment between kept neighbours are kept, so e.g. three collinear corners
    all survive. Memory coordinates must be distinct.
    """
    pts = sorted((as_rat(m), as_rat(v)) for m, v in points)
    for (m1, _), (m2, _) in zip(pts, pts[1:]):
        if m1 == m2:
            raise ValueError("duplicate memory coordinate")
    hull: List[Tuple[object, object]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            x3, y3 = p
            # hull[-1] strictly above segment hull[-2] -> p: pop it.
            if (y2 - y1) * (x3 - x1) > (y3 - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return PiecewiseCurve(tuple(hull))
