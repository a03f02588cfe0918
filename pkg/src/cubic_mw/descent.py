"""Generating-set descent over an ordered point index.

``test_generating_set`` checks which of the first n points can be reached
from a candidate set by repeatedly composing not-yet-generated points
against newly generated ones.  The bookkeeping follows the worklist shape:

  1. Decomp = {}, OldGeneratedSet = {}.
  2. JustAdded = GeneratedSet - OldGeneratedSet; OldGeneratedSet = GeneratedSet.
  3. Stop when JustAdded is empty.
  4. For every i in {1..n} outside GeneratedSet: first look in Decomp for a
     stored decomposition of i whose missing half is in JustAdded; otherwise
     compose i with every j in JustAdded.  A result k that is already in
     JustAdded proves i = j o k and i is added; a result with index <= n is
     remembered in Decomp for later passes.  Results outside the index (or
     beyond n) are discarded.
  5. Repeat.

A point i is added exactly when some j, k in the generated set satisfy
i o j = k; this includes the tangent case i o j = j, which is how points
lying in the tangent plane of a single generator are picked up.

``closure_oracle`` computes the same fixpoint by naive repeated scanning
with none of the Decomp/JustAdded machinery, as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .composition import compose
from .enumeration import PointIndex
from .surfaces import ProjPoint, h_sum


class IndexTooSmallError(ValueError):
    """The point index cannot support the requested bound n.

    Either it holds fewer than n points, or the n-th point lies beyond the
    height up to which the index is complete, so membership answers would
    be unreliable.
    """

    def __init__(self, message: str, required_hmax: int | None = None):
        super().__init__(message)
        self.required_hmax = required_hmax


def _check_bounds(index: PointIndex, n: int) -> None:
    if n < 1:
        raise ValueError("bound n must be >= 1")
    if n > len(index):
        raise IndexTooSmallError(
            f"index holds {len(index)} points, bound n={n} needs more; "
            f"re-enumerate with a larger h_max (> {index.hsum_bound})"
        )
    height = index.height_at(n)
    if height > index.hsum_bound:
        raise IndexTooSmallError(
            f"point {n} has height {height} beyond the completeness bound "
            f"{index.hsum_bound}; re-enumerate with h_max >= {height}",
            required_hmax=height,
        )


class CompositionCache:
    """Memoized composition over an index: pair of handles -> result index.

    Handles are 1-based point indices; extra generator points outside the
    index get negative handles.  The stored value is the result's index, or
    0 when the composition fails or the result is not an index point.
    Composition is symmetric, so pairs are keyed unordered.
    """

    def __init__(self, index: PointIndex, extra_points: Sequence[ProjPoint] = ()):
        self.index = index
        self._extras: dict[int, ProjPoint] = {}
        self._table: dict[tuple[int, int], int] = {}
        for i, p in enumerate(extra_points, 1):
            self._extras[-i] = p

    def add_extra(self, p: ProjPoint) -> int:
        handle = -(len(self._extras) + 1)
        self._extras[handle] = p
        return handle

    def point(self, handle: int) -> ProjPoint:
        if handle > 0:
            return self.index.point(handle)
        return self._extras[handle]

    def result_index(self, h1: int, h2: int) -> int:
        """Index of point(h1) o point(h2), or 0."""
        key = (h1, h2) if h1 <= h2 else (h2, h1)
        cached = self._table.get(key)
        if cached is not None:
            return cached
        out = compose(self.index.surface, self.point(h1), self.point(h2))
        res = 0
        if isinstance(out, ProjPoint):
            res = self.index.lookup(out) or 0
        self._table[key] = res
        return res

    def matrix(self, m: int) -> np.ndarray:
        """Dense (m+1) x (m+1) result table over index handles 1..m."""
        mat = np.zeros((m + 1, m + 1), dtype=np.int64)
        for i in range(1, m + 1):
            for j in range(i + 1, m + 1):
                r = self.result_index(i, j)
                mat[i, j] = r
                mat[j, i] = r
        return mat


@dataclass(frozen=True)
class TGSReport:
    """Outcome of one descent run at index bound n."""

    n: int
    initial: tuple[int, ...]
    generated: frozenset[int]
    per_iteration_added: tuple[int, ...]
    iterations: int
    first_bad: tuple[int, int] | None

    @property
    def generated_count(self) -> int:
        return sum(1 for i in self.generated if i <= self.n)

    @property
    def percentage(self) -> float:
        return 100.0 * self.generated_count / self.n

    def to_dict(
        self, surface_label: str = "", hsum_bound: int | None = None
    ) -> dict:
        return {
            "surface_label": surface_label,
            "n": self.n,
            "hsum_bound": hsum_bound,
            "initial_set": sorted(self.initial),
            "generated_count": self.generated_count,
            "percentage": self.percentage,
            "iterations": self.iterations,
            "first_bad": (
                None
                if self.first_bad is None
                else {"index": self.first_bad[0], "hsum": self.first_bad[1]}
            ),
            "per_iteration_added": list(self.per_iteration_added),
        }


def _resolve_handles(
    index: PointIndex,
    initial: Iterable[int],
    extra_points: Sequence[ProjPoint],
    cache: CompositionCache,
) -> set[int]:
    handles: set[int] = set()
    for g in initial:
        g = int(g)
        if not 1 <= g <= len(index):
            raise ValueError(f"initial index {g} outside 1..{len(index)}")
        handles.add(g)
    for p in extra_points:
        found = index.lookup(p)
        handles.add(found if found is not None else cache.add_extra(p))
    return handles


def test_generating_set(
    index: PointIndex,
    initial: Iterable[int],
    n: int,
    *,
    extra_points: Sequence[ProjPoint] = (),
    cache: CompositionCache | None = None,
) -> TGSReport:
    """Run the descent for an initial set of indices at bound n.

    ``extra_points`` are generators given as literal points; those found in
    the index join by index, the rest take part in compositions only.
    Iterations count the passes that added at least one point.
    """
    _check_bounds(index, n)
    if cache is None:
        cache = CompositionCache(index)
    generated = _resolve_handles(index, initial, extra_points, cache)
    initial_indices = tuple(sorted(h for h in generated if h > 0))

    old: set[int] = set()
    decomp: dict[int, list[tuple[int, int]]] = {}
    per_pass: list[int] = []
    while True:
        just_added = generated - old
        old = set(generated)
        if not just_added:
            break
        partners = sorted(just_added)
        added = 0
        for i in range(1, n + 1):
            if i in generated:
                continue
            hit = False
            for _, k in decomp.get(i, ()):
                if k in just_added:
                    hit = True
                    break
            if not hit:
                for j in partners:
                    k = cache.result_index(i, j)
                    if k == 0:
                        continue
                    if k in just_added:
                        hit = True
                        break
                    if k <= n:
                        decomp.setdefault(i, []).append((j, k))
            if hit:
                generated.add(i)
                added += 1
        if added:
            per_pass.append(added)

    first_bad = None
    for i in range(1, n + 1):
        if i not in generated:
            first_bad = (i, index.height_at(i))
            break
    return TGSReport(
        n=n,
        initial=initial_indices,
        generated=frozenset(h for h in generated if h > 0),
        per_iteration_added=tuple(per_pass),
        iterations=len(per_pass),
        first_bad=first_bad,
    )


def closure_oracle(
    index: PointIndex,
    initial: Iterable[int],
    n: int,
    *,
    extra_points: Sequence[ProjPoint] = (),
    cache: CompositionCache | None = None,
) -> set[int]:
    """Least fixpoint of the generation rule by naive repeated scanning.

    Every pass rescans all candidate/generator pairs; a candidate i joins
    when some generator j yields a composition landing in the current set.
    No Decomp or JustAdded bookkeeping is used, so this independently pins
    the descent's memoization.
    """
    _check_bounds(index, n)
    if cache is None:
        cache = CompositionCache(index)
    generated = _resolve_handles(index, initial, extra_points, cache)
    m = max([n, *(h for h in generated if h > 0)])
    table = cache.matrix(m)

    in_set = np.zeros(len(index) + 1, dtype=bool)
    for h in generated:
        if h > 0:
            in_set[h] = True
    extras = sorted(h for h in generated if h < 0)
    pending = [i for i in range(1, n + 1) if not in_set[i]]
    while pending:
        rows = np.array(pending, dtype=np.intp)
        cols = np.array(sorted(h for h in generated if h > 0), dtype=np.intp)
        hits = in_set[table[np.ix_(rows, cols)]].any(axis=1)
        new = set(rows[hits].tolist())
        for i in pending:
            if i in new:
                continue
            for j in extras:
                r = cache.result_index(i, j)
                if r and in_set[r]:
                    new.add(i)
                    break
        if not new:
            break
        for i in new:
            in_set[i] = True
        generated |= new
        pending = [i for i in pending if i not in new]
    return {h for h in generated if h > 0}


def remove_superfluous(
    index: PointIndex,
    initial: Iterable[int],
    n: int,
    *,
    cache: CompositionCache | None = None,
) -> set[int]:
    """Drop generators whose removal loses nothing, largest index first."""
    if cache is None:
        cache = CompositionCache(index)
    current = set(int(g) for g in initial)
    if not current:
        return current
    base = test_generating_set(index, current, n, cache=cache)
    for g in sorted(current, reverse=True):
        trial_set = current - {g}
        trial = test_generating_set(index, trial_set, n, cache=cache)
        if trial.generated >= base.generated:
            current = trial_set
            base = trial
    return current


def greedy_initial_set(
    index: PointIndex,
    n_small: int,
    threshold: float,
    *,
    max_prefix: int = 12,
    cache: CompositionCache | None = None,
) -> set[int] | None:
    """First prefix {1..m}, m = 4..max_prefix, whose descent percentage at
    n_small reaches the threshold; pruned of superfluous members.  None when
    no prefix qualifies."""
    if cache is None:
        cache = CompositionCache(index)
    for m in range(4, max_prefix + 1):
        if m > len(index):
            break
        candidate = set(range(1, m + 1))
        report = test_generating_set(index, candidate, n_small, cache=cache)
        if report.percentage >= 100.0 * threshold:
            return remove_superfluous(index, candidate, n_small, cache=cache)
    return None


def inject_bad_points(
    index: PointIndex,
    initial: Iterable[int],
    n: int,
    batch: int,
    rounds: int,
    *,
    cache: CompositionCache | None = None,
) -> tuple[set[int], list[TGSReport]]:
    """Grow a generating set by repeatedly adding the first bad points.

    Runs the descent, records the report, and if points are still missing
    adds the ``batch`` smallest non-generated indices; repeats for at most
    ``rounds`` injections.  The trace holds one report per descent run.
    """
    if batch < 1:
        raise ValueError("batch must be >= 1")
    if rounds < 0:
        raise ValueError("rounds must be >= 0")
    if cache is None:
        cache = CompositionCache(index)
    current = set(int(g) for g in initial)
    trace: list[TGSReport] = []
    for round_no in range(rounds + 1):
        report = test_generating_set(index, current, n, cache=cache)
        trace.append(report)
        if report.first_bad is None or round_no == rounds:
            break
        missing = [i for i in range(1, n + 1) if i not in report.generated]
        current |= set(missing[:batch])
    return current, trace
