"""Closed-form convex functions that are not polyhedral.

The catalog is deliberately closed.  It holds the indicator of the
parabolic set ``C = {(x, y) : 2x + y^2 <= 0}`` and its conjugate.  The
half-plane indicator that pairs with them is polyhedral and is built by
:func:`halfplane_indicator`.

New entries subclass :class:`~dualgap.functions.AnalyticFn`, register a
tag in :data:`CATALOG`, and add any pair rules to :mod:`dualgap.calculus`.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exact import INF, ExtReal, MalformedInput, rational, vec
from .functions import AnalyticFn, PolyhedralFn
from .polyhedra import Polyhedron
from .regions import ParabolaEpsRegion, UnsupportedCombination


def _pair(x: Sequence):
    x = vec(x)
    if len(x) != 2:
        raise MalformedInput(f"catalog functions live on R^2, got a point of length {len(x)}")
    return x


class ParabolaIndicator(AnalyticFn):
    """Indicator of ``C = {(x, y) : 2x + y^2 <= 0}``."""

    tag = "parabola-indicator"
    dim = 2

    def evaluate(self, x) -> ExtReal:
        a, b = _pair(x)
        return Fraction(0) if 2 * a + b * b <= 0 else INF

    def conjugate(self) -> "ParabolaConjugate":
        return ParabolaConjugate()

    def on_boundary(self, x) -> bool:
        a, b = _pair(x)
        return 2 * a + b * b == 0

    def eps_subdiff(self, x, eps):
        x, eps = _pair(x), rational(eps)
        if eps < 0:
            raise MalformedInput("eps must be nonnegative")
        if self.evaluate(x) == INF:
            return Polyhedron.empty(2)
        if eps > 0:
            return ParabolaEpsRegion(x, eps)
        # eps = 0: the normal cone to C
        if not self.on_boundary(x):
            return Polyhedron.point((0, 0))
        if not any(x):
            return Polyhedron(2, [((-1, 0), 0)], [((0, 1), 0)])
        return Polyhedron.cone(2, [(1, x[1])])


class ParabolaConjugate(AnalyticFn):
    """``(a, b) -> b^2/(2a)`` for ``a > 0``, ``0`` at the origin, ``+inf`` elsewhere."""

    tag = "parabola-conjugate"
    dim = 2

    def evaluate(self, y) -> ExtReal:
        a, b = _pair(y)
        if a > 0:
            return b * b / (2 * a)
        if a == 0 and b == 0:
            return Fraction(0)
        return INF

    def conjugate(self) -> ParabolaIndicator:
        return ParabolaIndicator()

    def eps_subdiff(self, x, eps):
        raise UnsupportedCombination("eps-subdifferentials of the parabola conjugate are not cataloged")


def halfplane_indicator() -> PolyhedralFn:
    """Indicator of ``D = {(x, y) : x >= 0}``."""
    return PolyhedralFn.indicator(Polyhedron(2, [((-1, 0), 0)]))


def halfplane_conjugate() -> PolyhedralFn:
    """Indicator of ``(-inf, 0] x {0}``, the conjugate of :func:`halfplane_indicator`."""
    return PolyhedralFn.indicator(Polyhedron(2, [((1, 0), 0)], [((0, 1), 0)]))


CATALOG = {
    ParabolaIndicator.tag: ParabolaIndicator,
    ParabolaConjugate.tag: ParabolaConjugate,
    "halfplane-indicator": halfplane_indicator,
}


def from_tag(tag: str):
    try:
        return CATALOG[tag]()
    except KeyError:
        raise UnsupportedCombination(f"unknown catalog tag {tag!r}; known: {sorted(CATALOG)}") from None


def catalog_tag(f) -> str | None:
    """Tag of a catalog function, recognizing the polyhedral half-plane indicator too."""
    if isinstance(f, AnalyticFn):
        return f.tag
    if isinstance(f, PolyhedralFn) and f.dim == 2 and f.equals(halfplane_indicator()):
        return "halfplane-indicator"
    return None
