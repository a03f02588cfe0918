"""Counting asymptotics and decomposability statistics.

The expected growth of the number of rational points of height below H on
one of these surfaces is C * H * (log H)^(r-1) with r the Picard rank, so
plotting N(H) divided by that denominator should flatten out.  The series
here feeds such plots as CSV; no fitting or rendering is done.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import IO, Sequence

from .composition import compose
from .enumeration import ExclusionPolicy, PointIndex, enumerate_points
from .surfaces import DiagonalSurface, ProjPoint, h_max


@dataclass(frozen=True)
class ManinRow:
    height: int
    count: int
    ratio: float


def manin_ratio(count: int, height: int, picard_rank: int) -> float:
    """count / (H * ln(H)^(rank-1)); natural log, which only rescales C."""
    return count / (height * math.log(height) ** (picard_rank - 1))


def manin_series(
    surface: DiagonalSurface,
    policy: ExclusionPolicy | None,
    heights: Sequence[int],
) -> list[ManinRow]:
    """One row per height bound, counting by h_max under the policy.

    Enumerates once at the largest bound and counts prefixes, which agrees
    with counting each bound separately.
    """
    if not heights:
        return []
    if any(h < 2 for h in heights):
        raise ValueError("height bounds must be >= 2")
    pts = enumerate_points(surface, max(heights))
    if policy is not None:
        pts = [p for p in pts if policy.allows(p)]
    hs = sorted(h_max(p) for p in pts)
    rows = []
    for height in heights:
        count = bisect_right(hs, height)
        rows.append(ManinRow(height, count, manin_ratio(count, height, surface.picard_rank)))
    return rows


@dataclass(frozen=True)
class DecomposabilityStat:
    """How many of the first n_bound points split as i = j o k with j, k < i."""

    n_bound: int
    decomposable: int
    fraction: float
    witnesses: dict[int, tuple[int, int]] = field(default_factory=dict, repr=False)


def strong_decomposability(index: PointIndex, n_bound: int) -> DecomposabilityStat:
    """Scan all pairs j < k <= n_bound and mark compositions landing above k.

    A point counts as strongly decomposable when it is the composition of
    two points of strictly smaller index.  ``witnesses`` holds one (j, k)
    pair per marked index.
    """
    if not 1 <= n_bound <= len(index):
        raise IndexError(f"bound {n_bound} outside 1..{len(index)}")
    surface = index.surface
    pts = index.points
    witnesses: dict[int, tuple[int, int]] = {}
    for k in range(2, n_bound + 1):
        pk = pts[k - 1]
        for j in range(1, k):
            out = compose(surface, pts[j - 1], pk)
            if type(out) is not ProjPoint:
                continue
            i = index.lookup(out)
            if i is not None and k < i <= n_bound and i not in witnesses:
                witnesses[i] = (j, k)
    dec = len(witnesses)
    return DecomposabilityStat(n_bound, dec, dec / n_bound, witnesses)


# -- CSV emission -----------------------------------------------------------

def write_manin_csv(rows: Sequence[ManinRow], out: IO[str]) -> None:
    out.write("H,count,ratio\n")
    for r in rows:
        out.write(f"{r.height},{r.count},{r.ratio:.6g}\n")


def write_decomposability_csv(stats: Sequence[DecomposabilityStat], out: IO[str]) -> None:
    out.write("N,decomposable,fraction\n")
    for s in stats:
        out.write(f"{s.n_bound},{s.decomposable},{s.fraction:.6g}\n")
