"""Proper lower semicontinuous convex functions.

:class:`ConvexFn` is the abstract interface.  :class:`PolyhedralFn` is the
general polyhedral case, stored as its epigraph; closed-form functions
live in :mod:`dualgap.catalog` and subclass :class:`AnalyticFn`.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .exact import (
    INF,
    ExtReal,
    MalformedInput,
    Vec,
    dot,
    rational,
    vec,
    zeros,
)
from .polyhedra import Polyhedron, minkowski_sum
from .regions import Region, UnsupportedCombination


class ImproperFunction(ValueError):
    """The data describe a function that is identically +inf or takes -inf."""


class ConvexFn(ABC):
    """A proper lsc convex function on R^dim."""

    dim: int

    @abstractmethod
    def evaluate(self, x: Sequence) -> ExtReal: ...

    @abstractmethod
    def conjugate(self) -> "ConvexFn": ...

    @abstractmethod
    def eps_subdiff(self, x: Sequence, eps) -> Region: ...

    def __call__(self, x):
        return self.evaluate(x)


class AnalyticFn(ConvexFn):
    """Base class for closed-form catalog entries.

    Subclasses set ``tag`` and ``dim`` and implement the abstract methods.
    Composite rules (sums, infimal convolutions) are registered in
    :mod:`dualgap.calculus`.
    """

    tag: str = ""

    def in_domain(self, x: Sequence) -> bool:
        return self.evaluate(x) != INF

    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return f"{type(self).__name__}()"


class PolyhedralFn(ConvexFn):
    """Convex function whose epigraph is a polyhedron in R^(dim+1).

    The last coordinate of the epigraph is the height ``t``.

    >>> f = PolyhedralFn.from_pieces(1, [((1,), 0), ((-1,), 0)])  # |x|
    >>> f(vec(-3))
    Fraction(3, 1)
    """

    def __init__(self, epi: Polyhedron):
        d = epi.dim - 1
        if d < 1:
            raise MalformedInput("epigraph must live in R^(d+1) with d >= 1")
        if epi.is_empty:
            raise ImproperFunction("empty epigraph: function is identically +inf")
        up = zeros(d) + (Fraction(1),)
        if not epi.contains_direction(up):
            raise ImproperFunction("set is not an epigraph: (0, ..., 0, 1) is not a recession direction")
        if epi.contains_direction(zeros(d) + (Fraction(-1),)):
            raise ImproperFunction("function takes the value -inf")
        self.dim = d
        self.epi = epi.canonical()
        self._pieces = [(a[:d], -a[d], b) for a, b in self.epi.ineqs if a[d] < 0]
        self._dom_rows = [(a[:d], b) for a, b in self.epi.ineqs if a[d] == 0]
        self._dom_eqs = [(e[:d], c) for e, c in self.epi.eqs]
        self._subdiff_cache: dict = {}

    # constructors
    @classmethod
    def from_pieces(cls, dim: int, pieces: Iterable, domain: Polyhedron | None = None) -> "PolyhedralFn":
        """``max_j (a_j . x + c_j)`` restricted to ``domain``."""
        rows = []
        for a, c in pieces:
            a = vec(a)
            if len(a) != dim:
                raise MalformedInput(f"piece of length {len(a)} in R^{dim}")
            rows.append((a + (Fraction(-1),), -rational(c)))
        if not rows:
            raise ImproperFunction("at least one affine piece is required")
        eqs = []
        if domain is not None:
            if domain.dim != dim:
                raise MalformedInput(f"domain in R^{domain.dim}, function in R^{dim}")
            rows += [(a + (Fraction(0),), b) for a, b in domain.ineqs]
            eqs = [(e + (Fraction(0),), d) for e, d in domain.eqs]
        return cls(Polyhedron(dim + 1, rows, eqs))

    @classmethod
    def indicator(cls, P: Polyhedron) -> "PolyhedralFn":
        return cls.from_pieces(P.dim, [(zeros(P.dim), 0)], P)

    @classmethod
    def zero(cls, dim: int) -> "PolyhedralFn":
        return cls.from_pieces(dim, [(zeros(dim), 0)])

    @classmethod
    def abs(cls) -> "PolyhedralFn":
        return cls.from_pieces(1, [((1,), 0), ((-1,), 0)])

    @classmethod
    def support_function(cls, P: Polyhedron) -> "PolyhedralFn":
        """``x -> max_{p in P} p . x`` for a nonempty polytope ``P``."""
        v = P.vrep
        if v.empty or v.rays:
            raise MalformedInput("support functions are built for nonempty polytopes only")
        return cls.from_pieces(P.dim, [(p, 0) for p in v.vertices])

    # queries
    @cached_property
    def domain(self) -> Polyhedron:
        return Polyhedron(self.dim, self._dom_rows, self._dom_eqs)

    def in_domain(self, x: Sequence) -> bool:
        x = vec(x)
        return all(dot(a, x) <= b for a, b in self._dom_rows) and all(dot(e, x) == c for e, c in self._dom_eqs)

    def evaluate(self, x: Sequence) -> ExtReal:
        x = vec(x)
        if len(x) != self.dim:
            raise MalformedInput(f"point of length {len(x)} for a function on R^{self.dim}")
        if not self.in_domain(x):
            return INF
        # a.x - s*t <= b  with s > 0  gives  t >= (a.x - b)/s
        return max((dot(a, x) - b) / s for a, s, b in self._pieces)

    def conjugate(self) -> "PolyhedralFn":
        return self._conjugate

    @cached_property
    def _conjugate(self) -> "PolyhedralFn":
        g = PolyhedralFn(conjugate_epigraph(self.epi))
        g.__dict__["_conjugate"] = self
        return g

    def eps_subdiff(self, x: Sequence, eps) -> Polyhedron:
        x, eps = vec(x), rational(eps)
        if eps < 0:
            raise MalformedInput("eps must be nonnegative")
        key = (x, eps)
        if key not in self._subdiff_cache:
            self._subdiff_cache[key] = self._eps_subdiff(x, eps)
        return self._subdiff_cache[key]

    def _eps_subdiff(self, x: Vec, eps: Fraction) -> Polyhedron:
        fx = self.evaluate(x)
        if fx == INF:
            return Polyhedron.empty(self.dim)
        d = self.dim
        conj = self.conjugate().epi
        # y is in the set iff (y, <x,y> + eps - f(x)) lies in epi f*
        shift = eps - fx
        ineqs = [(tuple(a[j] + a[d] * x[j] for j in range(d)), b - a[d] * shift) for a, b in conj.ineqs]
        eqs = [(tuple(e[j] + e[d] * x[j] for j in range(d)), c - e[d] * shift) for e, c in conj.eqs]
        return Polyhedron(d, ineqs, eqs).canonical()

    def lift(self, offset: int, total: int) -> "PolyhedralFn":
        """The function ``z -> f(z[offset:offset+dim])`` on R^total."""
        d = self.dim
        pre, post = offset, total - offset - d
        if pre < 0 or post < 0:
            raise MalformedInput("block does not fit in the product space")

        def widen(a):
            return zeros(pre) + a[:d] + zeros(post) + (a[d],)

        return PolyhedralFn(Polyhedron(total + 1, [(widen(a), b) for a, b in self.epi.ineqs],
                                       [(widen(e), c) for e, c in self.epi.eqs]))

    def equals(self, other: "PolyhedralFn") -> bool:
        return self.dim == other.dim and self.epi.equals(other.epi)

    def is_zero(self) -> bool:
        # the canonical epigraph of the zero function is the single row -t <= 0
        if self._dom_rows or self._dom_eqs or len(self._pieces) != 1:
            return False
        a, _, b = self._pieces[0]
        return not any(a) and b == 0

    def __repr__(self):
        return f"PolyhedralFn(dim={self.dim}, epi={self.epi!r})"


def conjugate_epigraph(epi: Polyhedron) -> Polyhedron:
    """Epigraph of the conjugate, one inequality per epigraph generator.

    A vertex ``(v, tau)`` gives ``<v, y> - s <= tau``; a ray ``(r, rho)``
    gives ``<r, y> <= rho``.
    """
    d = epi.dim - 1
    v = epi.vrep
    rows = [(p[:d] + (Fraction(-1),), p[d]) for p in v.vertices]
    rows += [(r[:d] + (Fraction(0),), r[d]) for r in v.rays]
    return Polyhedron(d + 1, rows)


def polyhedral_sum(fs: Sequence[PolyhedralFn]) -> PolyhedralFn:
    """Pointwise sum, built by lifting epigraphs into R^(d+m) and projecting."""
    if not fs:
        raise MalformedInput("empty sum")
    d = fs[0].dim
    if any(f.dim != d for f in fs):
        raise MalformedInput("summands have different dimensions")
    if len(fs) == 1:
        return fs[0]
    m = len(fs)
    ineqs, eqs = [], []
    for i, f in enumerate(fs):
        def widen(a, i=i):
            return a[:d] + tuple(a[d] if j == i else Fraction(0) for j in range(m))
        ineqs += [(widen(a), b) for a, b in f.epi.ineqs]
        eqs += [(widen(e), c) for e, c in f.epi.eqs]
    lifted = Polyhedron(d + m, ineqs, eqs)
    if lifted.is_empty:
        raise ImproperFunction("summands have disjoint domains")
    proj = [tuple(Fraction(int(j == i)) for j in range(d + m)) for i in range(d)]
    proj.append(zeros(d) + (Fraction(1),) * m)
    return PolyhedralFn(lifted.image(proj, d + 1))


def inf_conv_epigraph(gs: Sequence[PolyhedralFn]) -> Polyhedron:
    """Epigraph of the infimal convolution: the Minkowski sum of epigraphs."""
    out = gs[0].epi
    for g in gs[1:]:
        out = minkowski_sum(out, g.epi)
    return out


__all__ = [
    "AnalyticFn",
    "ConvexFn",
    "ImproperFunction",
    "PolyhedralFn",
    "UnsupportedCombination",
    "conjugate_epigraph",
    "inf_conv_epigraph",
    "polyhedral_sum",
]
