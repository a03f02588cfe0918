"""Secant composition of rational points on a diagonal cubic surface.

The line through two distinct surface points A1, A2 meets the surface in a
third point (with multiplicity).  Restricting the cubic form to
A1 + t*A2 gives 3*beta*t + 3*alpha*t^2 for points on the surface, so the
third intersection is alpha*A1 - beta*A2 with

    alpha = a*x1*x2^2 + b*y1*y2^2 + c*z1*z2^2 + d*u1*u2^2
    beta  = a*x1^2*x2 + b*y1^2*y2 + c*z1^2*z2 + d*u1^2*u2

Composition is undefined for a point with itself (the tangent section is a
whole curve) and degenerates exactly when the line lies on the surface
(alpha = beta = 0).  A result projectively equal to an input is a valid
success: it means the secant is tangent there, and such results are what
let a descent pick up points lying in the tangent plane of a generator.
"""

from __future__ import annotations

import enum
from typing import Iterable, NamedTuple, Sequence, Union

from .surfaces import DiagonalSurface, ProjPoint, canonicalize


class CompositionFailure(enum.Enum):
    COINCIDENT_POINTS = "coincident-points"
    LINE_ON_SURFACE = "line-on-surface"


CompositionOutcome = Union[ProjPoint, CompositionFailure]


def alpha_beta(surface: DiagonalSurface, p1: ProjPoint, p2: ProjPoint) -> tuple[int, int]:
    """Coefficients of the secant line's intersection with the surface."""
    a, b, c, d = surface.a, surface.b, surface.c, surface.d
    x1, y1, z1, u1 = p1
    x2, y2, z2, u2 = p2
    alpha = a * x1 * x2 * x2 + b * y1 * y2 * y2 + c * z1 * z2 * z2 + d * u1 * u2 * u2
    beta = a * x1 * x1 * x2 + b * y1 * y1 * y2 + c * z1 * z1 * z2 + d * u1 * u1 * u2
    return alpha, beta


def compose(surface: DiagonalSurface, p1: ProjPoint, p2: ProjPoint) -> CompositionOutcome:
    """Third intersection point of the secant through p1 and p2.

    Both points must be canonical and on the surface.  Returns a failure tag
    when p1 = p2 or when the whole line lies on the surface.
    """
    if p1 == p2:
        return CompositionFailure.COINCIDENT_POINTS
    alpha, beta = alpha_beta(surface, p1, p2)
    rx = alpha * p1[0] - beta * p2[0]
    ry = alpha * p1[1] - beta * p2[1]
    rz = alpha * p1[2] - beta * p2[2]
    ru = alpha * p1[3] - beta * p2[3]
    if rx == 0 and ry == 0 and rz == 0 and ru == 0:
        # alpha*p1 = beta*p2 with p1, p2 canonical and distinct forces
        # alpha = beta = 0: the form vanishes on the whole line.
        return CompositionFailure.LINE_ON_SURFACE
    return canonicalize((rx, ry, rz, ru))


class TangentPlane(NamedTuple):
    """Primitive coefficients (p, q, r, s) of p*x + q*y + r*z + s*u = 0."""

    p: int
    q: int
    r: int
    s: int

    def contains(self, pt: ProjPoint) -> bool:
        return self.p * pt[0] + self.q * pt[1] + self.r * pt[2] + self.s * pt[3] == 0


def tangent_plane(surface: DiagonalSurface, p: ProjPoint) -> TangentPlane:
    """Tangent plane at a surface point, as a primitive normal quadruple.

    The gradient is 3*(a*x^2, b*y^2, c*z^2, d*u^2); the factor 3 is dropped
    before reduction.  The base point satisfies the plane equation by the
    Euler relation for the cubic form.
    """
    raw = (
        surface.a * p[0] * p[0],
        surface.b * p[1] * p[1],
        surface.c * p[2] * p[2],
        surface.d * p[3] * p[3],
    )
    n = canonicalize(raw)
    return TangentPlane(n.x, n.y, n.z, n.u)


def tangent_section_points(
    surface: DiagonalSurface, p: ProjPoint, candidates: Iterable[ProjPoint]
) -> list[ProjPoint]:
    """Candidates (excluding p itself) lying on the tangent plane at p.

    This is the bounded-height part of the multivalued self-composition
    p o p; the tangent section is an entire cubic curve, so it can only be
    realized by filtering an already enumerated list.
    """
    plane = tangent_plane(surface, p)
    return [q for q in candidates if q != p and plane.contains(q)]
