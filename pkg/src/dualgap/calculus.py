"""Sums, conjugates, infimal convolutions and conjugate-epigraph sums.

Polyhedral operands are handled in general.  Operands from the analytic
catalog go through a short list of pair rules; anything else raises
:class:`UnsupportedCombination`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

from .catalog import ParabolaConjugate, ParabolaIndicator, halfplane_conjugate, halfplane_indicator
from .exact import (
    INF, NEG_INF, ExtReal, LpProblem, MalformedInput, Optimal, Unbounded, Vec, dot, lp_solve, rational, vec, zeros,
)
from .functions import (
    AnalyticFn,
    ConvexFn,
    ImproperFunction,
    PolyhedralFn,
    conjugate_epigraph,
    inf_conv_epigraph,
    polyhedral_sum,
)
from .polyhedra import Polyhedron
from .regions import UnsupportedCombination


def evaluate(f: ConvexFn, x: Sequence) -> ExtReal:
    return f.evaluate(x)


def conjugate(f: ConvexFn) -> ConvexFn:
    return f.conjugate()


def _check_dims(fs: Sequence[ConvexFn]) -> int:
    if not fs:
        raise MalformedInput("at least one function is required")
    d = fs[0].dim
    if any(f.dim != d for f in fs):
        raise MalformedInput("functions live on spaces of different dimensions")
    return d


def _split(fs):
    poly = [(i, f) for i, f in enumerate(fs) if isinstance(f, PolyhedralFn)]
    ana = [(i, f) for i, f in enumerate(fs) if isinstance(f, AnalyticFn)]
    return poly, ana


# -- sums -----------------------------------------------------------------------------

def fn_sum(fs: Sequence[ConvexFn]) -> ConvexFn:
    """Pointwise sum.

    Raises :class:`ImproperFunction` when the domains do not meet.
    """
    return _fn_sum(tuple(fs))


@lru_cache(maxsize=512)
def _fn_sum(fs: tuple[ConvexFn, ...]) -> ConvexFn:
    d = _check_dims(fs)
    poly, ana = _split(fs)
    polys = [f for _, f in poly if not f.is_zero()]
    if not ana:
        return polyhedral_sum(polys or [PolyhedralFn.zero(d)])
    if len(ana) > 1:
        raise UnsupportedCombination("sums of two or more analytic functions are not cataloged")
    g = ana[0][1]
    if not polys:
        return g
    h = polyhedral_sum(polys)
    if isinstance(g, ParabolaIndicator) and halfplane_indicator().domain.includes(h.domain):
        # C meets {x >= 0} only at the origin
        origin = zeros(2)
        if not h.in_domain(origin):
            raise ImproperFunction("summands have disjoint domains")
        return PolyhedralFn.from_pieces(2, [(origin, h.evaluate(origin))], Polyhedron.point(origin))
    raise UnsupportedCombination(
        f"no exact rule for {type(g).__name__} plus a polyhedral function whose domain leaves {{x >= 0}}"
    )


# -- infimal convolution -----------------------------------------------------------

@dataclass(frozen=True)
class InfConv:
    """Value of ``(g_1 [] ... [] g_m)(y)`` with an attainment verdict.

    ``witness`` is a minimizing split when attained.  ``certificate``
    explains non-attainment (or the convention used for ``+inf``).
    """

    value: ExtReal
    attained: bool
    witness: tuple[Vec, ...] | None = None
    certificate: str = ""


def _stacked_lp(gs: Sequence[PolyhedralFn], y: Vec, lexmin: bool):
    d = gs[0].dim
    m = len(gs)
    n = m * (d + 1)
    ineqs, rhs, eqs, erhs = [], [], [], []
    for i, g in enumerate(gs):
        off = i * (d + 1)

        def place(a, off=off):
            row = [Fraction(0)] * n
            row[off:off + d + 1] = a
            return tuple(row)

        for a, b in g.epi.ineqs:
            ineqs.append(place(a))
            rhs.append(b)
        for e, c in g.epi.eqs:
            eqs.append(place(e))
            erhs.append(c)
    for j in range(d):
        row = [Fraction(0)] * n
        for i in range(m):
            row[i * (d + 1) + j] = Fraction(1)
        eqs.append(tuple(row))
        erhs.append(y[j])
    obj = [Fraction(0)] * n
    for i in range(m):
        obj[i * (d + 1) + d] = Fraction(1)
    out = lp_solve(LpProblem(tuple(obj), tuple(ineqs), tuple(rhs), tuple(eqs), tuple(erhs)), lexmin=lexmin)
    return out, d, m


def _parabola_pair(gs):
    """Index of the parabola conjugate when ``gs`` is it plus the half-line indicator."""
    if len(gs) != 2:
        return None
    for i in (0, 1):
        if isinstance(gs[i], ParabolaConjugate) and isinstance(gs[1 - i], PolyhedralFn) and gs[1 - i].equals(
            halfplane_conjugate()
        ):
            return i
    return None


def inf_conv_value(gs: Sequence[ConvexFn], y: Sequence, lexmin: bool = True) -> InfConv:
    y = vec(y)
    d = _check_dims(gs)
    if len(y) != d:
        raise MalformedInput(f"point of length {len(y)} in R^{d}")
    if len(gs) == 1:
        v = gs[0].evaluate(y)
        return InfConv(v, True, (y,) if v != INF else None, "" if v != INF else "value +inf by convention attained")
    poly, ana = _split(gs)
    if not ana:
        out, d, m = _stacked_lp(gs, y, lexmin)
        if isinstance(out, Optimal):
            split = tuple(out.point[i * (d + 1):i * (d + 1) + d] for i in range(m))
            return InfConv(out.value, True, split, "LP optimum")
        if isinstance(out, Unbounded):
            return InfConv(NEG_INF, False, None, "LP unbounded below")
        return InfConv(INF, True, None, "no split lies in the product of domains; value +inf")
    k = _parabola_pair(gs)
    if k is None:
        raise UnsupportedCombination("no infimal-convolution rule for this analytic combination")
    p, q = y
    if q == 0:
        a = max(p, Fraction(0))
        parts = [(a, Fraction(0)), (p - a, Fraction(0))]
        if k == 1:
            parts.reverse()
        return InfConv(Fraction(0), True, tuple(parts), "split with b = 0 has value 0")
    return InfConv(
        Fraction(0), False, None,
        f"every split ((a, {q}), ({p} - a, 0)) with a >= max({p}, 0), a > 0 has value {q * q}/(2a) > 0; "
        "the infimum 0 is approached only as a -> +inf",
    )


def near_minimizer(gs: Sequence[ConvexFn], y: Sequence, eta) -> tuple[Vec, ...]:
    """A split of ``y`` whose total value is within ``eta`` of the infimum (finite case)."""
    y = vec(y)
    eta = rational(eta)
    if eta <= 0:
        raise MalformedInput("eta must be positive")
    res = inf_conv_value(gs, y, lexmin=False)
    if res.value == INF or res.value == NEG_INF:
        raise ValueError(f"infimal convolution is {res.value} at {tuple(map(str, y))}")
    if res.attained:
        return res.witness
    k = _parabola_pair(gs)
    p, q = y
    a = max(p, q * q / (2 * eta))
    parts = [(a, q), (p - a, Fraction(0))]
    if k == 1:
        parts.reverse()
    return tuple(parts)


# -- conjugate epigraph sums -----------------------------------------------------

@dataclass(frozen=True)
class ParabolaEpiSum:
    """``epi f* + epi g*`` for the parabola indicator and the half-plane indicator.

    Equals ``{(p, q, r) : r > 0} | {(p, q, r) : q = 0, r >= 0}``.
    """

    dim: int = 3

    def contains(self, z) -> bool:
        p, q, r = vec(z)
        return r > 0 or (q == 0 and r >= 0)

    def in_closure(self, z) -> bool:
        return vec(z)[2] >= 0


@dataclass(frozen=True)
class EpiSum:
    region: object
    closed: bool
    witness: Vec | None = None
    certificate: str = ""


def epi_conj_sum(fs: Sequence[ConvexFn]) -> EpiSum:
    _check_dims(fs)
    poly, ana = _split(fs)
    if not ana:
        total = inf_conv_epigraph([f.conjugate() for f in fs])
        return EpiSum(total, True, None, "Minkowski sum of polyhedra is closed")
    if len(fs) == 2 and len(ana) == 1 and isinstance(ana[0][1], ParabolaIndicator):
        h = poly[0][1]
        if h.equals(halfplane_indicator()):
            w = vec(1, 1, 0)
            return EpiSum(
                ParabolaEpiSum(), False, w,
                "(1,1,0) lies in the closure (take a -> +inf in ((a,1),1/(2a)) + ((1-a,0),0)) "
                "but every split of (1,1) has height 1/(2a) > 0",
            )
    raise UnsupportedCombination("no conjugate-epigraph-sum rule for this analytic combination")


# -- biconjugation ------------------------------------------------------------------

def default_grid(dim: int) -> list[Vec]:
    vals = [Fraction(v) for v in (-2, -1, Fraction(-1, 2), 0, Fraction(1, 2), 1, 2)]
    pts: list[Vec] = [()]
    for _ in range(dim):
        pts = [p + (v,) for p in pts for v in vals]
    return pts


def biconjugate_check(f: ConvexFn, grid: Sequence[Sequence] | None = None) -> bool:
    """``f** == f``: epigraph equality (polyhedral) or agreement on a grid (analytic)."""
    if isinstance(f, PolyhedralFn):
        once = conjugate_epigraph(f.epi)
        twice = conjugate_epigraph(PolyhedralFn(once).epi)
        return twice.equals(f.epi)
    pts = default_grid(f.dim) if grid is None else [vec(p) for p in grid]
    ff = f.conjugate().conjugate()
    return all(ff.evaluate(p) == f.evaluate(p) for p in pts)


def fenchel_young_gap(f: ConvexFn, x: Sequence, y: Sequence) -> ExtReal:
    """``f(x) + f*(y) - <x, y>``; nonnegative, zero iff ``y`` is a subgradient at ``x``."""
    x, y = vec(x), vec(y)
    fx = f.evaluate(x)
    fy = f.conjugate().evaluate(y)
    if fx == INF or fy == INF:
        return INF
    return fx + fy - dot(x, y)


__all__ = [
    "EpiSum",
    "InfConv",
    "ParabolaEpiSum",
    "biconjugate_check",
    "conjugate",
    "default_grid",
    "epi_conj_sum",
    "evaluate",
    "fenchel_young_gap",
    "fn_sum",
    "inf_conv_value",
    "near_minimizer",
]
