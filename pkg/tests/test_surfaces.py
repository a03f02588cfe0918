from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from cubic_mw import (
    DiagonalSurface,
    ProjPoint,
    canonicalize,
    evaluate,
    h_max,
    h_sum,
    is_canonical,
    is_on_surface,
    is_trivial_line_point,
    order_key,
    point_order,
)
from cubic_mw.surfaces import parse_registry

quads = st.tuples(*[st.integers(-10**6, 10**6)] * 4).filter(lambda q: any(q))


def test_canonicalize_examples():
    assert canonicalize((0, -2, 2, -4)) == ProjPoint(0, 1, -1, 2)
    assert canonicalize((-1, 1, 1, -1)) == ProjPoint(1, -1, -1, 1)
    assert canonicalize((2, -2, 1, 1)) == ProjPoint(2, -2, 1, 1)


def test_canonicalize_zero_rejected():
    with pytest.raises(ValueError):
        canonicalize((0, 0, 0, 0))


@given(quads)
def test_canonicalize_idempotent(q):
    p = canonicalize(q)
    assert is_canonical(p)
    assert canonicalize(p) == p


@given(quads, st.integers(-20, 20).filter(bool))
def test_canonicalize_scale_invariant(q, lam):
    scaled = tuple(lam * v for v in q)
    assert canonicalize(scaled) == canonicalize(q)


@given(quads)
def test_height_sandwich(q):
    p = canonicalize(q)
    assert h_max(p) <= h_sum(p) <= 4 * h_max(p)


def test_heights_examples():
    assert h_max(ProjPoint(1, -1, -1, 1)) == 1
    assert h_max(ProjPoint(2, -2, 1, 1)) == 2
    assert h_max(ProjPoint(1, 6, 4, -5)) == 6
    assert h_sum(ProjPoint(1, -1, -1, 1)) == 4
    assert h_sum(ProjPoint(1, 6, 4, -5)) == 16
    assert h_sum(ProjPoint(1, -1, 0, 0)) == 2


def test_evaluate(registry):
    s1, s2 = registry.get("1"), registry.get("2")
    assert evaluate(s1, ProjPoint(1, -1, -1, 1)) == 0
    assert evaluate(s2, ProjPoint(1, 6, 4, -5)) == 0
    assert evaluate(s1, ProjPoint(1, 0, 0, 0)) == 1
    assert is_on_surface(s1, ProjPoint(1, -1, -1, 1))
    assert not is_on_surface(s1, ProjPoint(1, 0, 0, 0))
    assert is_on_surface(s2, ProjPoint(0, 1, 1, -1))


def test_trivial_line_pattern():
    assert is_trivial_line_point(ProjPoint(1, -1, 0, 0))
    assert is_trivial_line_point(ProjPoint(1, -1, 1, -1))
    assert is_trivial_line_point(ProjPoint(0, 0, 1, -1))
    assert not is_trivial_line_point(ProjPoint(1, 6, 4, -5))


def test_point_order_examples():
    a, b = ProjPoint(1, -1, 0, 0), ProjPoint(0, 0, 1, -1)
    assert point_order(b, a) == -1
    assert point_order(a, ProjPoint(1, -1, -1, 1)) == -1
    assert point_order(a, a) == 0


@given(quads, quads, quads)
def test_point_order_total(q1, q2, q3):
    p1, p2, p3 = (canonicalize(q) for q in (q1, q2, q3))
    # antisymmetry
    assert point_order(p1, p2) == -point_order(p2, p1)
    assert (point_order(p1, p2) == 0) == (p1 == p2)
    # transitivity via the key
    ordered = sorted([p1, p2, p3], key=order_key)
    assert point_order(ordered[0], ordered[1]) <= 0 <= point_order(ordered[2], ordered[1])


def test_surface_validation():
    with pytest.raises(ValueError):
        DiagonalSurface(1, 0, 3, 4)
    with pytest.raises(ValueError):
        DiagonalSurface(1, 2, 3, 4, picard_rank=4)
    assert DiagonalSurface(-17, 18, 19, -20).K == 20


def test_registry_contents(registry):
    assert len(registry) == 13
    assert registry.get("1").coefficients == (1, 2, 3, 4)
    assert registry.get("3").coefficients == (17, 18, 19, 20)
    assert registry.get("13").coefficients == (2, 2, 3, 3)
    ranks = [s.picard_rank for _, s in registry]
    assert ranks == [1] * 6 + [2] * 3 + [3] * 4


def test_registry_parsing_roundtrip():
    text = "# comment\nfoo 1 -2 3 4 2\n\nbar 5 6 7 8 1  # inline\n"
    reg = parse_registry(text)
    assert reg.labels() == ["foo", "bar"]
    assert reg.get("foo").picard_rank == 2
    with pytest.raises(KeyError):
        reg.get("baz")
    with pytest.raises(ValueError):
        parse_registry("dup 1 1 1 1 1\ndup 2 2 2 2 1\n")
