from __future__ import annotations

import pytest

from cubic_mw import (
    DiagonalSurface,
    ExclusionPolicy,
    ProjPoint,
    build_index,
    count_points,
    enumerate_points,
    evaluate,
    h_max,
    h_sum,
    index_from_points,
    index_to_height_bound,
    is_canonical,
    order_key,
    read_point_list,
    standard_policy,
    write_point_list,
)
from cubic_mw.enumeration import NO_EXCLUSIONS, _merged_solutions, prefix_count
from cubic_mw.surfaces import canonicalize
from _oracles import brute_force_points


def test_height_one(registry):
    pts = enumerate_points(registry.get("1"), 1)
    assert pts == [ProjPoint(1, 0, 1, -1), ProjPoint(1, 1, -1, 0), ProjPoint(1, -1, -1, 1)]


def test_bound_precondition(registry):
    with pytest.raises(ValueError):
        enumerate_points(registry.get("1"), 0)


@pytest.mark.parametrize("label", ["1", "2", "5", "8", "11"])
def test_brute_force_agreement_small(registry, label):
    surface = registry.get(label)
    assert enumerate_points(surface, 25) == brute_force_points(surface, 25)


def test_python_merge_agrees_with_blocked(registry):
    # the big-integer fallback and the windowed path implement one contract
    for label in ("3", "10"):
        s = registry.get(label)
        fallback = sorted(
            {canonicalize(q) for q in _merged_solutions(s.a, s.b, s.c, s.d, 20) if q != (0, 0, 0, 0)},
            key=order_key,
        )
        assert enumerate_points(s, 20) == fallback


def test_fallback_used_beyond_int64(monkeypatch):
    import cubic_mw.enumeration as en

    monkeypatch.setattr(en, "_fits_int64", lambda s, H: False)
    s = DiagonalSurface(1, 2, 3, 4)
    assert en.enumerate_points(s, 8) == brute_force_points(s, 8)


def test_monotone_and_invariants(registry):
    surface = registry.get("6")
    small, big = enumerate_points(surface, 30), enumerate_points(surface, 60)
    assert set(small) <= set(big)
    assert prefix_count(big, 30) == len(small)
    for p in big:
        assert is_canonical(p)
        assert evaluate(surface, p) == 0
        assert h_max(p) <= 60
    assert big == sorted(big, key=order_key)


def test_count_points_policies(registry):
    s7 = registry.get("7")
    assert count_points(s7, 100) == 197
    assert count_points(s7, 100, ExclusionPolicy(True, frozenset())) == 196
    assert count_points(s7, 100, standard_policy("7")) == 197


def test_policy_validation():
    with pytest.raises(ValueError):
        ExclusionPolicy(True, frozenset({ProjPoint(1, 6, 4, -5)}))
    pol = ExclusionPolicy(True, frozenset({ProjPoint(1, -1, 0, 0)}))
    assert pol.allows(ProjPoint(1, -1, 0, 0))
    assert not pol.allows(ProjPoint(1, -1, 1, -1))
    assert pol.allows(ProjPoint(1, 6, 4, -5))


def test_index_basics(registry):
    s1 = registry.get("1")
    idx = build_index(s1, 400)
    assert idx.point(3) == ProjPoint(1, -1, -1, 1)
    assert idx.lookup(ProjPoint(1, -1, -1, 1)) == 3
    assert idx.lookup(ProjPoint(1, 0, 0, 0)) is None
    assert index_to_height_bound(idx, 100) == 317
    assert idx.complete_through(100)
    with pytest.raises(IndexError):
        idx.height_at(0)
    with pytest.raises(IndexError):
        idx.height_at(len(idx) + 1)


def test_index_completeness_properties(registry):
    s2 = registry.get("2")
    idx = build_index(s2, 80)
    pts = idx.points
    assert pts == sorted(pts, key=order_key)
    assert len(set(pts)) == len(pts)
    # every point below a member in the order and within the bound is present
    for n in (1, 5, len(pts) // 2):
        p = idx.point(n)
        earlier = [q for q in enumerate_points(s2, 80) if order_key(q) < order_key(p)]
        assert all(idx.lookup(q) is not None and idx.lookup(q) < n for q in earlier)


def test_excluded_points_not_indexed(registry):
    s10 = registry.get("10")
    idx = build_index(s10, 60, standard_policy("10"))
    assert idx.lookup(ProjPoint(1, -1, 0, 0)) == 2
    assert idx.lookup(ProjPoint(2, -2, 1, -1)) is None
    assert idx.lookup(ProjPoint(1, -1, 2, -2)) is None


def test_empty_index_is_valid():
    # no solutions at height 1: no signed subset of {1,2,4,8} sums to zero
    s = DiagonalSurface(1, 2, 4, 8)
    idx = build_index(s, 1)
    assert len(idx) == 0
    assert idx.lookup(ProjPoint(1, 0, 0, 0)) is None


def test_point_list_roundtrip(tmp_path, registry):
    s1 = registry.get("1")
    pts = enumerate_points(s1, 50)
    path = tmp_path / "pts.txt"
    write_point_list(str(path), "1", s1, 50, pts)
    label, coeffs, bound, back = read_point_list(str(path))
    assert (label, coeffs, bound) == ("1", (1, 2, 3, 4), 50)
    assert back == pts
    first = path.read_bytes()
    write_point_list(str(path), "1", s1, 50, back)
    assert path.read_bytes() == first
    idx = index_from_points(s1, back, 50)
    assert idx.points == build_index(s1, 50).points


def test_point_list_rejects_garbage(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("not a header\n")
    with pytest.raises(ValueError):
        read_point_list(str(path))
