"""Exact enumeration of rational points up to an h_max bound.

The solver is meet-in-the-middle: split the form as

    a*x^3 + b*y^3  =  -(c*z^3 + d*u^3)

and look for equal values of the two pair-sum families over the coordinate
box.  Both families are consumed in increasing value order, one bounded
window of the value axis at a time, so memory stays proportional to the
window size rather than to the full H^2 table of pairs.  Within a window
the two sides are materialized with numpy, prefiltered against each other
through a bitmask on the low value bits, and joined exactly on equal
values.  Left pairs are restricted to x >= 0: every canonical point has a
nonnegative leading coordinate, and duplicates are collapsed through
``canonicalize`` anyway.

For coefficient/height combinations whose pair sums would overflow int64
the same window-free merge runs on Python integers (slow, but exact at any
size).
"""

from __future__ import annotations

import heapq
import itertools
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels
from .surfaces import (
    DiagonalSurface,
    ProjPoint,
    canonicalize,
    h_max,
    h_sum,
    is_trivial_line_point,
    order_key,
)

_WINDOW_TARGET = 6_000_000  # pairs per window and side, before materializing
_FLAG_BITS = 26


@dataclass(frozen=True)
class ExclusionPolicy:
    """Which enumerated points an index keeps.

    ``keep`` lists points retained even though they match the trivial-line
    pattern (x:-x:y:-y); a handful of those are needed as generators.
    """

    exclude_trivial_lines: bool = False
    keep: frozenset[ProjPoint] = frozenset()

    def __post_init__(self) -> None:
        for p in self.keep:
            if not is_trivial_line_point(p):
                raise ValueError(f"keep list entry {p} is not a trivial-line point")

    def allows(self, p: ProjPoint) -> bool:
        if not self.exclude_trivial_lines:
            return True
        return not is_trivial_line_point(p) or p in self.keep


NO_EXCLUSIONS = ExclusionPolicy()

# Kept trivial-line generators for the built-in registry.  Surfaces with
# a = b and c != d carry a single such point, (1:-1:0:0); surfaces with
# a = b and c = d carry whole rational lines, of which four specific points
# stay in the lists.
_KEEP_SMALL = frozenset({ProjPoint(1, -1, 0, 0)})
_KEEP_FULL = frozenset(
    {
        ProjPoint(1, -1, 0, 0),
        ProjPoint(0, 0, 1, -1),
        ProjPoint(1, -1, 1, -1),
        ProjPoint(1, -1, -1, 1),
    }
)


def standard_policy(label: str) -> ExclusionPolicy:
    """Default exclusion policy for a built-in registry label."""
    if label in {"7", "8", "9"}:
        return ExclusionPolicy(True, _KEEP_SMALL)
    if label in {"10", "11", "12", "13"}:
        return ExclusionPolicy(True, _KEEP_FULL)
    return NO_EXCLUSIONS


def _min_t(q: int, t_arr: np.ndarray, bound: int) -> np.ndarray:
    """Per element: smallest integer k with q*k^3 >= t, q > 0.

    t is clamped so results land in [-bound-1, bound+2]; the float cube
    root seeds the answer and exact integer comparisons fix it up.
    """
    lo = q * (-(bound + 1)) ** 3
    hi = q * (bound + 2) ** 3
    t = np.clip(t_arr, lo, hi)
    k = np.ceil(np.cbrt(t / q)).astype(np.int64)
    np.clip(k, -(bound + 1), bound + 2, out=k)
    for _ in range(2):
        k -= q * (k - 1) ** 3 >= t
    for _ in range(2):
        k += q * k**3 < t
    return k


class _PairSide:
    """Values cs*s^3 + ct*t^3 for s in [s_lo, s_hi], t in [-H, H]."""

    def __init__(self, cs: int, ct: int, s_lo: int, s_hi: int, H: int):
        self.ct = ct
        self.H = H
        self.s = np.arange(s_lo, s_hi + 1, dtype=np.int64)
        self.base = cs * self.s**3
        spread = abs(ct) * H**3
        self.vmin = int(self.base.min()) - spread
        self.vmax = int(self.base.max()) + spread
        self._ranges_key: tuple[int, int] | None = None
        self._ranges: tuple[np.ndarray, np.ndarray] | None = None

    def _t_ranges(self, v0: int, v1: int) -> tuple[np.ndarray, np.ndarray]:
        """Half-open t range per s with value in [v0, v1)."""
        if self._ranges_key == (v0, v1):
            return self._ranges  # type: ignore[return-value]
        H, ct = self.H, self.ct
        if ct > 0:
            lo = _min_t(ct, v0 - self.base, H)
            hi = _min_t(ct, v1 - self.base, H)
        else:
            # ct*t^3 == (-ct)*w^3 with w = -t, so solve for w and mirror.
            wlo = _min_t(-ct, v0 - self.base, H)
            whi = _min_t(-ct, v1 - self.base, H)
            lo, hi = 1 - whi, 1 - wlo
        np.clip(lo, -H, H + 1, out=lo)
        np.clip(hi, -H, H + 1, out=hi)
        self._ranges_key = (v0, v1)
        self._ranges = (lo, hi)
        return lo, hi

    def count(self, v0: int, v1: int) -> int:
        lo, hi = self._t_ranges(v0, v1)
        return int(np.maximum(hi - lo, 0).sum())

    def window(self, v0: int, v1: int) -> tuple[np.ndarray, np.ndarray]:
        """Clipped per-row t bounds for the window, for the fused kernels."""
        lo, hi = self._t_ranges(v0, v1)
        return lo, np.maximum(hi, lo)


def _exact_matches(
    vl: np.ndarray,
    xl: np.ndarray,
    yl: np.ndarray,
    vr: np.ndarray,
    zr: np.ndarray,
    ur: np.ndarray,
) -> Iterator[tuple[int, int, int, int]]:
    """Equality join of two small (value, coord, coord) sets."""
    ol = np.argsort(vl, kind="stable")
    orr = np.argsort(vr, kind="stable")
    svl, svr = vl[ol], vr[orr]
    uniq_l, start_l, count_l = np.unique(svl, return_index=True, return_counts=True)
    uniq_r, start_r, count_r = np.unique(svr, return_index=True, return_counts=True)
    _, ia, ib = np.intersect1d(uniq_l, uniq_r, assume_unique=True, return_indices=True)
    for k in range(ia.size):
        ls = int(start_l[ia[k]])
        le = ls + int(count_l[ia[k]])
        rs = int(start_r[ib[k]])
        re = rs + int(count_r[ib[k]])
        rights = [(int(zr[j]), int(ur[j])) for j in orr[rs:re]]
        for i in ol[ls:le]:
            xx, yy = int(xl[i]), int(yl[i])
            for zz, uu in rights:
                yield (xx, yy, zz, uu)


class _Probe:
    """Reusable candidate buffers for the probe kernel."""

    def __init__(self, capacity: int = 1 << 20):
        self._alloc(capacity)

    def _alloc(self, capacity: int) -> None:
        self.v = np.empty(capacity, dtype=np.int64)
        self.r = np.empty(capacity, dtype=np.int64)
        self.t = np.empty(capacity, dtype=np.int64)

    def run(self, side: _PairSide, lo, hi, v0: int, mask: int, flags) -> int:
        while True:
            k = _kernels.probe_window(
                side.base, lo, hi, side.ct, v0, mask, flags, self.v, self.r, self.t
            )
            if k <= self.v.size:
                return k
            self._alloc(2 * k)


def _blocked_solutions(
    a: int, b: int, c: int, d: int, H: int, target: int = _WINDOW_TARGET
) -> Iterator[tuple[int, int, int, int]]:
    """All integer solutions with |coords| <= H and x >= 0, as raw tuples."""
    left = _PairSide(a, b, 0, H, H)
    right = _PairSide(-c, -d, -H, H, H)
    lo = max(left.vmin, right.vmin)
    hi = min(left.vmax, right.vmax)
    if lo > hi:
        return
    mask = (1 << _FLAG_BITS) - 1
    flags = np.zeros(1 << _FLAG_BITS, dtype=np.uint8)
    probe = _Probe()
    est_total = 2 * (H + 1) * (2 * H + 1) + (2 * H + 1) ** 2
    width = max(1, (hi - lo + 1) * target // est_total)
    v0 = lo
    while v0 <= hi:
        while True:
            v1 = min(v0 + width, hi + 1)
            n_l = left.count(v0, v1)
            n_r = right.count(v0, v1)
            if n_l + n_r <= 3 * target or v1 - v0 <= 1:
                break
            width = max(1, width // 2)
        if n_l and n_r:
            lo_l, hi_l = left.window(v0, v1)
            lo_r, hi_r = right.window(v0, v1)
            # marking one side and probing the other (twice) leaves small
            # candidate sets that are matched exactly by sorting
            _kernels.mark_window(right.base, lo_r, hi_r, right.ct, v0, mask, flags)
            k = probe.run(left, lo_l, hi_l, v0, mask, flags)
            flags[:] = 0
            if k:
                vl = probe.v[:k].copy()
                xl = left.s[probe.r[:k]]
                yl = probe.t[:k].copy()
                _kernels.mark_values(vl, v0, mask, flags)
                k = probe.run(right, lo_r, hi_r, v0, mask, flags)
                flags[:] = 0
                if k:
                    vr = probe.v[:k].copy()
                    zr = right.s[probe.r[:k]]
                    ur = probe.t[:k].copy()
                    yield from _exact_matches(vl, xl, yl, vr, zr, ur)
        v0 = v1
        if n_l + n_r < target // 2:
            width *= 2


def _sorted_rows(cs: int, ct: int, s: int, H: int) -> Iterator[tuple[int, int, int]]:
    base = cs * s**3
    ts = range(-H, H + 1) if ct > 0 else range(H, -H - 1, -1)
    for t in ts:
        yield (base + ct * t**3, s, t)


def _grouped(stream: Iterator[tuple[int, int, int]]):
    for v, group in itertools.groupby(stream, key=lambda item: item[0]):
        yield v, [(s, t) for _, s, t in group]


def _merged_solutions(
    a: int, b: int, c: int, d: int, H: int
) -> Iterator[tuple[int, int, int, int]]:
    """Pure-integer variant of the merge, safe beyond int64 range."""
    left = _grouped(heapq.merge(*(_sorted_rows(a, b, x, H) for x in range(0, H + 1))))
    right = _grouped(
        heapq.merge(*(_sorted_rows(-c, -d, z, H) for z in range(-H, H + 1)))
    )
    lv = next(left, None)
    rv = next(right, None)
    while lv is not None and rv is not None:
        if lv[0] < rv[0]:
            lv = next(left, None)
        elif lv[0] > rv[0]:
            rv = next(right, None)
        else:
            for (x, y), (z, u) in itertools.product(lv[1], rv[1]):
                yield (x, y, z, u)
            lv = next(left, None)
            rv = next(right, None)


def _fits_int64(surface: DiagonalSurface, H: int) -> bool:
    weight = abs(surface.a) + abs(surface.b) + abs(surface.c) + abs(surface.d)
    return weight * (H + 2) ** 3 < 2**62


def enumerate_points(surface: DiagonalSurface, hmax_bound: int) -> list[ProjPoint]:
    """All canonical points on the surface with h_max <= hmax_bound, in order.

    No exclusion policy is applied here; callers filter afterwards.
    """
    if hmax_bound < 1:
        raise ValueError("height bound must be >= 1")
    a, b, c, d = surface.coefficients
    if _fits_int64(surface, hmax_bound):
        raw = _blocked_solutions(a, b, c, d, hmax_bound)
    else:
        raw = _merged_solutions(a, b, c, d, hmax_bound)
    seen: set[ProjPoint] = set()
    for quad in raw:
        if quad != (0, 0, 0, 0):
            seen.add(canonicalize(quad))
    return sorted(seen, key=order_key)


def count_points(
    surface: DiagonalSurface, hmax_bound: int, policy: ExclusionPolicy | None = None
) -> int:
    """Number of points with h_max <= hmax_bound surviving the policy."""
    pts = enumerate_points(surface, hmax_bound)
    if policy is None or not policy.exclude_trivial_lines:
        return len(pts)
    return sum(1 for p in pts if policy.allows(p))


class PointIndex:
    """Ordered, deduplicated, policy-filtered point list with 1-based lookup.

    ``hsum_bound`` is the h_sum ceiling up to which the list is provably
    complete: an enumeration bounded by h_max <= H contains every point
    with h_sum <= H because h_max <= h_sum.  Entries beyond that height are
    present but possibly incomplete, so descent runs must check their index
    range against the bound first.  Instances are immutable after build.
    """

    def __init__(
        self,
        surface: DiagonalSurface,
        points: Sequence[ProjPoint],
        hsum_bound: int,
        policy: ExclusionPolicy = NO_EXCLUSIONS,
    ):
        self.surface = surface
        self.points = list(points)
        self.hsum_bound = hsum_bound
        self.policy = policy
        self._reverse = {p: i for i, p in enumerate(self.points, 1)}

    def __len__(self) -> int:
        return len(self.points)

    def point(self, n: int) -> ProjPoint:
        if not 1 <= n <= len(self.points):
            raise IndexError(f"index {n} out of range 1..{len(self.points)}")
        return self.points[n - 1]

    def lookup(self, p: ProjPoint) -> int | None:
        """1-based index of a canonical point, or None if absent."""
        return self._reverse.get(p)

    def height_at(self, n: int) -> int:
        """h_sum of the n-th point."""
        return h_sum(self.point(n))

    def complete_through(self, n: int) -> bool:
        """Whether indices 1..n are guaranteed complete."""
        return 1 <= n <= len(self.points) and self.height_at(n) <= self.hsum_bound


def build_index(
    surface: DiagonalSurface,
    hmax_bound: int,
    policy: ExclusionPolicy | None = None,
) -> PointIndex:
    policy = policy or NO_EXCLUSIONS
    pts = enumerate_points(surface, hmax_bound)
    if policy.exclude_trivial_lines:
        pts = [p for p in pts if policy.allows(p)]
    return PointIndex(surface, pts, hmax_bound, policy)


def index_to_height_bound(index: PointIndex, n: int) -> int:
    return index.height_at(n)


def index_from_points(
    surface: DiagonalSurface,
    points: Iterable[ProjPoint],
    hsum_bound: int,
    policy: ExclusionPolicy | None = None,
) -> PointIndex:
    """Index over an externally supplied raw enumeration (e.g. a cache file)."""
    policy = policy or NO_EXCLUSIONS
    pts = [p for p in points if policy.allows(p)]
    pts.sort(key=order_key)
    return PointIndex(surface, pts, hsum_bound, policy)


def prefix_count(points: Sequence[ProjPoint], hmax_bound: int) -> int:
    """Points with h_max <= hmax_bound inside a larger sorted enumeration."""
    hs = sorted(h_max(p) for p in points)
    return bisect_right(hs, hmax_bound)


# -- point-list files -------------------------------------------------------

def write_point_list(
    path: str,
    label: str,
    surface: DiagonalSurface,
    hmax_bound: int,
    points: Sequence[ProjPoint],
) -> None:
    """Write a raw enumeration in the exchange format (policy-free)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# surface {label} {surface.a} {surface.b} {surface.c} {surface.d}\n")
        fh.write(f"# hmax_bound {hmax_bound}\n")
        for p in points:
            fh.write(f"{p.x} {p.y} {p.z} {p.u}\n")


def read_point_list(path: str) -> tuple[str, tuple[int, int, int, int], int, list[ProjPoint]]:
    """Read a point-list file; returns (label, coefficients, H, points)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 7 or header[:2] != ["#", "surface"]:
            raise ValueError(f"{path}: bad point-list header")
        label = header[2]
        coeffs = tuple(int(v) for v in header[3:7])
        bound_line = fh.readline().split()
        if len(bound_line) != 3 or bound_line[:2] != ["#", "hmax_bound"]:
            raise ValueError(f"{path}: bad hmax_bound line")
        hmax_bound = int(bound_line[2])
        points = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            x, y, z, u = (int(v) for v in line.split())
            points.append(ProjPoint(x, y, z, u))
    return label, coeffs, hmax_bound, points  # type: ignore[return-value]
