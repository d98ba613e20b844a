"""Sets in dual space: polyhedra and the parabolic regions of the catalog.

A region is either a :class:`~dualgap.polyhedra.Polyhedron`, a
:class:`ParabolaEpsRegion` (the epsilon-subdifferential of the parabola
indicator) or a :class:`SumRegion` (that region at the origin plus a
polyhedron).  Every kind supports exact membership, and all of them are
closed, so closure tests reduce to inclusion tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .exact import INF, ExtReal, MalformedInput, Vec, fmt, vec, zeros
from .polyhedra import Polyhedron, minkowski_sum


class UnsupportedCombination(NotImplementedError):
    """The requested operation has no exact rule for these operands."""


@dataclass(frozen=True)
class ParabolaEpsRegion:
    """``{(a, b) : a > 0, b^2/(2a) - a*x0 - b*y0 <= eps} | {(0, 0)}`` with ``eps > 0``.

    This is the eps-subdifferential of the indicator of
    ``{(x, y) : 2x + y^2 <= 0}`` at the point ``center = (x0, y0)``.
    """

    center: Vec
    eps: Fraction
    dim: int = 2

    def contains(self, y: Sequence) -> bool:
        a, b = vec(y)
        x0, y0 = self.center
        if a > 0:
            return b * b / (2 * a) - a * x0 - b * y0 <= self.eps
        return a == 0 and b == 0

    def as_sum(self) -> "SumRegion":
        if any(self.center):
            raise UnsupportedCombination("parabolic region arithmetic is implemented only at the origin")
        return SumRegion(self.eps, Polyhedron.point(zeros(2)))


@dataclass(frozen=True)
class SumRegion:
    """``R + P`` where ``R = {(a, b) : a >= 0, b^2 <= 2*eps*a}`` and ``P`` is a polyhedron in R^2."""

    eps: Fraction
    poly: Polyhedron
    dim: int = 2

    @property
    def is_whole_plane(self) -> bool:
        return not self.poly.is_empty and self.poly.contains_direction((-1, 0))

    def contains(self, y: Sequence) -> bool:
        v1, v2 = vec(y)
        if self.poly.is_empty:
            return False
        m = min_parabolic(self.poly, v2, self.eps)
        return m is None or m <= 2 * self.eps * v1

    def support(self, h: Sequence) -> ExtReal:
        h = vec(h)
        return _parabola_support(h, self.eps) + self.poly.support(h)

    def recession_cone(self) -> Polyhedron:
        if self.is_whole_plane:
            return Polyhedron.universe(2)
        return Polyhedron.cone(2, [(1, 0), *self.poly.vrep.rays])


Region = Union[Polyhedron, ParabolaEpsRegion, SumRegion]


def _parabola_support(h: Vec, eps: Fraction) -> ExtReal:
    h1, h2 = h
    if h1 < 0:
        return eps * h2 * h2 / (2 * -h1)
    if h1 == 0 and h2 == 0:
        return Fraction(0)
    return INF


def min_parabolic(P: Polyhedron, v: Fraction, eps: Fraction, *, argmin: bool = False):
    """``min {(v - q2)^2 + 2*eps*q1 : q in P}`` for ``eps > 0``; None if unbounded below.

    Works on the lower envelope ``q1 >= l(q2)`` of ``P + cone{(1, 0)}``,
    which is piecewise linear: the minimum sits at a breakpoint, an end of
    the q2-range, or a stationary point of one linear piece.  With
    ``argmin`` the result is ``(value, minimizer)``.
    """
    if eps <= 0:
        raise MalformedInput("min_parabolic needs eps > 0")
    Q = minkowski_sum(P, Polyhedron.cone(2, [(1, 0)]))
    if Q.is_empty:
        raise MalformedInput("min_parabolic over an empty set")
    if Q.contains_direction((-1, 0)):
        return None
    lo, hi = None, None
    pieces = []
    for (a1, a2), b in Q.ineqs:
        if a1 < 0:
            # q1 >= (b - a2*q2)/a1
            pieces.append((b / a1, -a2 / a1))
        elif a2 > 0:
            hi = b / a2 if hi is None else min(hi, b / a2)
        elif a2 < 0:
            lo = b / a2 if lo is None else max(lo, b / a2)
    for (e1, e2), d in Q.eqs:
        lo = hi = d / e2
    if not pieces:
        return None

    def env(q2):
        return max(c + s * q2 for c, s in pieces)

    cands = {p[1] for p in Q.vrep.vertices}
    cands.update(x for x in (lo, hi) if x is not None)
    for _, s in pieces:
        cands.add(v - eps * s)
    cands = sorted(q for q in cands if (lo is None or q >= lo) and (hi is None or q <= hi))
    value, q2 = min(((v - q) ** 2 + 2 * eps * env(q), q) for q in cands)
    if not argmin:
        return value
    # the envelope point may lie in Q \ P; the LP finds a point of P on the same level
    from .exact import Optimal
    row = P.intersect(Polyhedron(2, [], [((0, 1), q2)]))
    out = row.lp((1, 0), "min")
    point = out.point if isinstance(out, Optimal) else (env(q2), q2)
    return value, tuple(point)


# -- generic region operations ---------------------------------------------------

def _as_sum(R) -> SumRegion | None:
    if isinstance(R, SumRegion):
        return R
    if isinstance(R, ParabolaEpsRegion):
        return R.as_sum()
    return None


def region_contains(R: Region, y: Sequence) -> bool:
    return R.contains(y)


def region_closed(R: Region) -> bool:
    """All region kinds are closed (see the module docstring)."""
    return True


def region_in_closure(R: Region, y: Sequence) -> bool:
    return R.contains(y)


def region_sum(A: Region, B: Region) -> Region:
    if A.dim != B.dim:
        raise MalformedInput(f"dimension mismatch: {A.dim} vs {B.dim}")
    if isinstance(A, Polyhedron) and isinstance(B, Polyhedron):
        return minkowski_sum(A, B)
    if isinstance(A, Polyhedron):
        A, B = B, A
    sa = _as_sum(A)
    if isinstance(B, Polyhedron):
        if B.is_empty:
            return Polyhedron.empty(B.dim)
        return SumRegion(sa.eps, minkowski_sum(sa.poly, B))
    raise UnsupportedCombination("sum of two parabolic regions")


def region_includes(outer: Region, inner: Region) -> bool:
    """``inner`` is a subset of ``outer``."""
    if outer.dim != inner.dim:
        raise MalformedInput(f"dimension mismatch: {outer.dim} vs {inner.dim}")
    if isinstance(outer, Polyhedron) and isinstance(inner, Polyhedron):
        return outer.includes(inner)
    if isinstance(outer, Polyhedron):
        si = _as_sum(inner)
        if si.poly.is_empty:
            return True
        for a, b in outer.ineqs:
            if si.support(a) > b:
                return False
        for e, d in outer.eqs:
            if si.support(e) > d or si.support(tuple(-c for c in e)) > -d:
                return False
        return True
    so = _as_sum(outer)
    if isinstance(inner, Polyhedron):
        if inner.is_empty:
            return True
        if so.is_whole_plane:
            return True
        rec = so.recession_cone()
        return all(so.contains(p) for p in inner.vrep.vertices) and all(
            rec.contains_direction(r) for r in inner.vrep.rays
        )
    si = _as_sum(inner)
    if so.is_whole_plane:
        return True
    if si.is_whole_plane:
        return False
    if si.eps <= so.eps and so.poly.includes(si.poly):
        return True
    raise UnsupportedCombination("inclusion between these parabolic regions is not decided exactly")


def region_equals(A: Region, B: Region) -> bool:
    return region_includes(A, B) and region_includes(B, A)


def region_violation(outer: Region, inner: Region):
    """A generator of polyhedral ``inner`` outside ``outer``, else None."""
    if isinstance(inner, Polyhedron):
        if isinstance(outer, Polyhedron):
            return outer.violation(inner)
        for p in inner.vrep.vertices:
            if not outer.contains(p):
                return ("vertex", p)
    return None


def describe(R: Region) -> str:
    if isinstance(R, Polyhedron):
        return R.describe()
    if isinstance(R, ParabolaEpsRegion):
        return f"parabolic eps-region(center={fmt(R.center)}, eps={R.eps})"
    if R.is_whole_plane:
        return "R^2"
    return f"parabolic region(eps={R.eps}) + {R.poly.describe()}"


def support_value(R: Region, h: Sequence) -> ExtReal:
    if isinstance(R, Polyhedron):
        return R.support(h)
    return _as_sum(R).support(h)


__all__ = [
    "ParabolaEpsRegion",
    "Region",
    "SumRegion",
    "UnsupportedCombination",
    "describe",
    "min_parabolic",
    "region_closed",
    "region_contains",
    "region_equals",
    "region_in_closure",
    "region_includes",
    "region_sum",
    "region_violation",
    "support_value",
]
