"""Independent reference implementations used only by the tests.

These deliberately avoid the library's algorithms: enumeration by a plain
triple loop solving for the fourth coordinate, composition by symbolically
intersecting the line with the surface, collinearity by exact minors.
"""

from __future__ import annotations

from fractions import Fraction

from cubic_mw import DiagonalSurface, ProjPoint, canonicalize, order_key


def brute_force_points(surface: DiagonalSurface, hmax_bound: int) -> list[ProjPoint]:
    """All canonical points with h_max <= bound by exhausting x, y, z."""
    a, b, c, d = surface.coefficients
    rng = range(-hmax_bound, hmax_bound + 1)
    cubes = {v**3: v for v in rng}
    ax = {x: a * x**3 for x in rng}
    by = {y: b * y**3 for y in rng}
    cz = {z: c * z**3 for z in rng}
    found = set()
    for x in rng:
        sx = ax[x]
        for y in rng:
            sxy = sx + by[y]
            for z in rng:
                t = -(sxy + cz[z])
                q, r = divmod(t, d)
                if r:
                    continue
                u = cubes.get(q)
                if u is None:
                    continue
                if x or y or z or u:
                    found.add(canonicalize((x, y, z, u)))
    return sorted(found, key=order_key)


def line_intersection_compose(surface, p1: ProjPoint, p2: ProjPoint):
    """Third intersection of the line s*p1 + t*p2 with the surface.

    Expands the cubic form on the line with sympy, divides out the known
    roots at p1 and p2, and reads the third root off the remaining linear
    factor.  Returns None when the form vanishes identically on the line.
    """
    import sympy

    s, t = sympy.symbols("s t")
    a, b, c, d = surface.coefficients
    coords = [s * v1 + t * v2 for v1, v2 in zip(p1, p2)]
    form = sympy.expand(
        a * coords[0] ** 3 + b * coords[1] ** 3 + c * coords[2] ** 3 + d * coords[3] ** 3
    )
    if form == 0:
        return None
    poly = sympy.Poly(form, s, t)
    # form = s*t*(A*s + B*t) for surface points p1, p2
    quotient = sympy.simplify(form / (s * t))
    lin = sympy.Poly(quotient, s, t)
    A = lin.coeff_monomial(s)
    B = lin.coeff_monomial(t)
    s0, t0 = int(B), -int(A)
    raw = tuple(s0 * v1 + t0 * v2 for v1, v2 in zip(p1, p2))
    if all(v == 0 for v in raw):
        return None
    return canonicalize(raw)


def matrix_rank_le_2(rows) -> bool:
    """Exact rank check for a 3x4 integer matrix via its 3x3 minors."""

    def det3(m):
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    cols = range(4)
    for drop in cols:
        kept = [c for c in cols if c != drop]
        minor = [[rows[r][c] for c in kept] for r in range(3)]
        if det3(minor) != 0:
            return False
    return True
