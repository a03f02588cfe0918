"""Diagonal cubic surfaces and canonical projective rational points.

A surface is a*x^3 + b*y^3 + c*z^3 + d*u^3 = 0 with nonzero integer
coefficients.  A rational point is stored as a primitive integer quadruple
(gcd 1) whose first nonzero coordinate is positive; this canonical form is
unique per projective point.  Points are compared by h_sum first and then
lexicographically by signed coordinates, a total order that assigns every
point a stable 1-based index once a complete bounded list is built.

Coordinates are plain Python integers throughout: repeated secant
composition grows heights fast enough to leave 64-bit range, and exactness
matters more here than raw speed.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, NamedTuple


class ProjPoint(NamedTuple):
    """Projective point (x:y:z:u).  Construct via ``canonicalize`` unless the
    coordinates are already known to be in canonical form."""

    x: int
    y: int
    z: int
    u: int

    def __str__(self) -> str:
        return f"({self.x}:{self.y}:{self.z}:{self.u})"


def canonicalize(quad: Iterable[int]) -> ProjPoint:
    """Reduce an integer quadruple to the unique canonical representative.

    Divides out the gcd and flips the overall sign so the first nonzero
    coordinate is positive.  Raises ValueError on the zero quadruple.
    """
    x, y, z, u = (int(v) for v in quad)
    g = gcd(gcd(x, y), gcd(z, u))
    if g == 0:
        raise ValueError("zero quadruple has no projective point")
    if g != 1:
        x, y, z, u = x // g, y // g, z // g, u // g
    for v in (x, y, z, u):
        if v:
            if v < 0:
                x, y, z, u = -x, -y, -z, -u
            break
    return ProjPoint(x, y, z, u)


def is_canonical(p: ProjPoint) -> bool:
    if not any(p):
        return False
    if gcd(gcd(p.x, p.y), gcd(p.z, p.u)) != 1:
        return False
    for v in p:
        if v:
            return v > 0
    return False


def h_max(p: ProjPoint) -> int:
    return max(abs(p[0]), abs(p[1]), abs(p[2]), abs(p[3]))


def h_sum(p: ProjPoint) -> int:
    return abs(p[0]) + abs(p[1]) + abs(p[2]) + abs(p[3])


def order_key(p: ProjPoint) -> tuple[int, ProjPoint]:
    """Sort key realizing the point order: h_sum, then signed-lex coordinates."""
    return (h_sum(p), p)


def point_order(p: ProjPoint, q: ProjPoint) -> int:
    """Total order on canonical points: -1, 0 or 1 as p <, =, > q."""
    kp, kq = order_key(p), order_key(q)
    if kp < kq:
        return -1
    if kp > kq:
        return 1
    return 0


@dataclass(frozen=True)
class DiagonalSurface:
    """Coefficients of a*x^3 + b*y^3 + c*z^3 + d*u^3 = 0.

    ``picard_rank`` is user-supplied metadata (it only enters the counting
    asymptotics); it is never computed here.
    """

    a: int
    b: int
    c: int
    d: int
    picard_rank: int = 1

    def __post_init__(self) -> None:
        if 0 in (self.a, self.b, self.c, self.d):
            raise ValueError("surface coefficients must all be nonzero")
        if self.picard_rank not in (1, 2, 3):
            raise ValueError("picard_rank must be 1, 2 or 3")

    @property
    def K(self) -> int:
        """Largest absolute coefficient; controls the composition height bound."""
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    @property
    def coefficients(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __str__(self) -> str:
        return f"{self.a}x^3 + {self.b}y^3 + {self.c}z^3 + {self.d}u^3 = 0"


def evaluate(surface: DiagonalSurface, p: ProjPoint) -> int:
    """Exact value of the cubic form at p."""
    return (
        surface.a * p[0] ** 3
        + surface.b * p[1] ** 3
        + surface.c * p[2] ** 3
        + surface.d * p[3] ** 3
    )


def is_on_surface(surface: DiagonalSurface, p: ProjPoint) -> bool:
    return evaluate(surface, p) == 0


def is_trivial_line_point(p: ProjPoint) -> bool:
    """True for points of the shape (x:-x:y:-y).

    When a = b and c = d these sweep out rational lines contained in the
    surface; counts and indices usually leave them out.
    """
    return p[1] == -p[0] and p[3] == -p[2]


class SurfaceRegistry:
    """Ordered collection of labelled surfaces."""

    def __init__(self, entries: Iterable[tuple[str, DiagonalSurface]]):
        self._entries = tuple(entries)
        self._by_label = {label: s for label, s in self._entries}
        if len(self._by_label) != len(self._entries):
            raise ValueError("registry labels must be unique")

    def get(self, label: str) -> DiagonalSurface:
        try:
            return self._by_label[label]
        except KeyError:
            raise KeyError(f"unknown surface label {label!r}") from None

    def labels(self) -> list[str]:
        return [label for label, _ in self._entries]

    def __iter__(self) -> Iterator[tuple[str, DiagonalSurface]]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)


def parse_registry(text: str) -> SurfaceRegistry:
    """Parse a registry file: one ``label a b c d picard_rank`` per line,
    ``#`` comments and blank lines allowed."""
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ValueError(f"registry line {lineno}: expected 'label a b c d rank'")
        label = parts[0]
        a, b, c, d, rank = (int(v) for v in parts[1:])
        entries.append((label, DiagonalSurface(a, b, c, d, picard_rank=rank)))
    return SurfaceRegistry(entries)


def load_registry(path: str | None = None) -> SurfaceRegistry:
    """Load a registry file, or the built-in thirteen surfaces if no path."""
    if path is None:
        text = (
            importlib.resources.files("cubic_mw")
            .joinpath("data/surfaces.txt")
            .read_text(encoding="utf-8")
        )
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    return parse_registry(text)


_DEFAULT: SurfaceRegistry | None = None


def default_registry() -> SurfaceRegistry:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_registry()
    return _DEFAULT
