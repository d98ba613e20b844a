"""Exact convex polyhedra with dual H/V descriptions.

A :class:`Polyhedron` is stored by its H-representation
``{x : a.x <= b (ineqs), e.x = d (eqs)}``; the V-representation
``conv(vertices) + cone(rays)`` is computed on demand with the double
description method and cached.  Lines of the lineality space appear in the
V-representation as a pair of opposite rays, and "vertices" are then points
of the minimal faces.

Conversions run entirely in integer arithmetic: every row and generator is
scaled to a primitive integer vector before entering the kernel.
Dimensions up to 6 are exercised by the test suite; beyond that the
double description method still works but may get slow.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .exact import (
    LpProblem,
    MalformedInput,
    Optimal,
    Unbounded,
    Vec,
    add,
    dot,
    integerize,
    lp_solve,
    neg,
    primitive,
    rational,
    rref,
    vec,
    zeros,
)

MAX_DIM = 12


# -- double description kernel ------------------------------------------------

def _idot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _comb(p: Sequence[int], cp: int, q: Sequence[int], cq: int) -> tuple[int, ...]:
    return tuple(primitive([cp * x + cq * y for x, y in zip(p, q)]))


def cone_dd(n: int, ineqs: Iterable[Sequence[int]], eqs: Iterable[Sequence[int]] = ()):
    """Generators of ``{y in R^n : a.y <= 0, e.y = 0}``.

    Returns ``(lines, rays)`` of primitive integer tuples; rays are the
    extreme rays of the cone modulo its lineality space.
    """
    lines: list[tuple[int, ...]] = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays: list[tuple[int, ...]] = []
    zsets: list[int] = []  # bitmask of processed inequalities tight at each ray

    for e in eqs:
        if not any(e):
            continue
        piv = next((l for l in lines if _idot(e, l) != 0), None)
        if piv is not None:
            s = _idot(e, piv)
            sg = 1 if s > 0 else -1
            lines = [_comb(l, s * sg, piv, -_idot(e, l) * sg) for l in lines if l is not piv]
            rays = [_comb(r, s * sg, piv, -_idot(e, r) * sg) for r in rays]
            continue
        rays, zsets = _dd_step(rays, zsets, e, keep_neg=False, bit=0)

    bit = 1
    for a in ineqs:
        if not any(a):
            continue
        piv = next((l for l in lines if _idot(a, l) != 0), None)
        if piv is not None:
            s = _idot(a, piv)
            sg = 1 if s > 0 else -1
            lines = [_comb(l, s * sg, piv, -_idot(a, l) * sg) for l in lines if l is not piv]
            rays = [_comb(r, s * sg, piv, -_idot(a, r) * sg) for r in rays]
            # all old rays become tight at the new inequality
            zsets = [z | bit for z in zsets]
            rays.append(tuple(-sg * c for c in piv))
            zsets.append(bit - 1)  # tight at every earlier inequality
        else:
            rays, zsets = _dd_step(rays, zsets, a, keep_neg=True, bit=bit)
        bit <<= 1
    if lines:
        # canonical representatives: zero out the pivot columns of the lineality space
        red, pivots = rref(lines, n)
        lines = [tuple(integerize(r)) for r in red]
        reduced = []
        for r in rays:
            v = [Fraction(c) for c in r]
            for row, pc in zip(red, pivots):
                if v[pc]:
                    f = v[pc]
                    v = [x - f * y for x, y in zip(v, row)]
            reduced.append(tuple(integerize(v)))
        rays = list(dict.fromkeys(reduced))
    return lines, rays


def _dd_step(rays, zsets, a, keep_neg, bit):
    vals = [_idot(a, r) for r in rays]
    pos = [i for i, v in enumerate(vals) if v > 0]
    negs = [i for i, v in enumerate(vals) if v < 0]
    zero = [i for i, v in enumerate(vals) if v == 0]
    new_rays = [rays[i] for i in zero]
    new_z = [zsets[i] | bit for i in zero]
    if keep_neg:
        new_rays += [rays[i] for i in negs]
        new_z += [zsets[i] for i in negs]
    seen = set(new_rays)
    nr = len(rays)
    for i in pos:
        for j in negs:
            common = zsets[i] & zsets[j]
            adjacent = True
            for k in range(nr):
                if k != i and k != j and (zsets[k] & common) == common:
                    adjacent = False
                    break
            if not adjacent:
                continue
            r = _comb(rays[j], vals[i], rays[i], -vals[j])
            if r in seen or not any(r):
                continue
            seen.add(r)
            new_rays.append(r)
            new_z.append(common | bit)
    return new_rays, new_z


# -- representations ------------------------------------------------------------

@dataclass(frozen=True)
class HRep:
    ineqs: tuple[tuple[Vec, Fraction], ...] = ()
    eqs: tuple[tuple[Vec, Fraction], ...] = ()


@dataclass(frozen=True)
class VRep:
    """``conv(vertices) + cone(rays)``; no vertices means the empty set."""

    vertices: tuple[Vec, ...] = ()
    rays: tuple[Vec, ...] = ()

    @property
    def empty(self) -> bool:
        return not self.vertices


def _norm_row(a: Sequence[Fraction], b: Fraction) -> tuple[Vec, Fraction]:
    ints = integerize(list(a) + [b])
    return tuple(Fraction(c) for c in ints[:-1]), Fraction(ints[-1])


def _canon_eqs(eqs: Sequence[tuple[Vec, Fraction]], n: int) -> tuple[tuple[Vec, Fraction], ...]:
    if not eqs:
        return ()
    red, _ = rref([list(e) + [d] for e, d in eqs], n + 1)
    return tuple(_norm_row(r[:n], r[n]) for r in red)


class Polyhedron:
    """Closed convex polyhedron in R^dim, immutable.

    >>> P = Polyhedron(1, ineqs=[((1,), 1), ((-1,), 0)])
    >>> P.vrep.vertices
    ((Fraction(0, 1),), (Fraction(1, 1),))
    """

    def __init__(self, dim: int, ineqs: Iterable = (), eqs: Iterable = (), *, vrep: VRep | None = None,
                 _canonical: bool = False):
        if dim < 0 or dim > MAX_DIM:
            raise MalformedInput(f"dimension {dim} outside supported range 0..{MAX_DIM}")
        self.dim = dim
        iq, eq = [], []
        for a, b in ineqs:
            a = vec(a)
            if len(a) != dim:
                raise MalformedInput(f"inequality of length {len(a)} in R^{dim}")
            iq.append((a, rational(b)))
        for e, d in eqs:
            e = vec(e)
            if len(e) != dim:
                raise MalformedInput(f"equality of length {len(e)} in R^{dim}")
            eq.append((e, rational(d)))
        self._ineqs = tuple(iq)
        self._eqs = tuple(eq)
        self._canonical = _canonical
        if vrep is not None:
            self.__dict__["vrep"] = vrep

    # constructors
    @classmethod
    def from_vrep(cls, dim: int, vertices: Iterable = (), rays: Iterable = ()) -> "Polyhedron":
        vs = tuple(dict.fromkeys(vec(v) for v in vertices))
        rs = tuple(dict.fromkeys(r for r in (vec(r) for r in rays) if any(r)))
        for v in (*vs, *rs):
            if len(v) != dim:
                raise MalformedInput(f"generator of length {len(v)} in R^{dim}")
        h = to_hrep(VRep(vs, rs), dim)
        return cls(dim, h.ineqs, h.eqs, _canonical=True)

    @classmethod
    def empty(cls, dim: int) -> "Polyhedron":
        return cls(dim, [(zeros(dim), -1)], vrep=VRep(), _canonical=True)

    @classmethod
    def universe(cls, dim: int) -> "Polyhedron":
        rays = [tuple(Fraction(s if j == i else 0) for j in range(dim)) for i in range(dim) for s in (1, -1)]
        return cls(dim, vrep=VRep((zeros(dim),), tuple(rays)), _canonical=True)

    @classmethod
    def point(cls, p: Sequence) -> "Polyhedron":
        p = vec(p)
        n = len(p)
        return cls(n, eqs=[(tuple(Fraction(int(j == i)) for j in range(n)), p[i]) for i in range(n)],
                   vrep=VRep((p,), ()))

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "Polyhedron":
        lo, hi = vec(lo), vec(hi)
        n = len(lo)
        rows = []
        for i in range(n):
            e = tuple(Fraction(int(j == i)) for j in range(n))
            rows += [(e, hi[i]), (neg(e), -lo[i])]
        return cls(n, rows)

    @classmethod
    def span(cls, dim: int, basis: Iterable) -> "Polyhedron":
        rays = []
        for b in basis:
            b = vec(b)
            rays += [b, neg(b)]
        return cls.from_vrep(dim, [zeros(dim)], rays)

    @classmethod
    def cone(cls, dim: int, generators: Iterable) -> "Polyhedron":
        return cls.from_vrep(dim, [zeros(dim)], generators)

    # representations
    @property
    def hrep(self) -> HRep:
        return HRep(self._ineqs, self._eqs)

    @cached_property
    def vrep(self) -> VRep:
        return to_vrep(self)

    @property
    def ineqs(self):
        return self._ineqs

    @property
    def eqs(self):
        return self._eqs

    @property
    def is_empty(self) -> bool:
        return self.vrep.empty

    @property
    def is_bounded(self) -> bool:
        return not self.vrep.rays

    def canonical(self) -> "Polyhedron":
        """Irredundant H-representation (facets plus an RREF equality block)."""
        if self._canonical:
            return self
        v = self.vrep
        if v.empty:
            return Polyhedron.empty(self.dim)
        h = to_hrep(v, self.dim)
        return Polyhedron(self.dim, h.ineqs, h.eqs, vrep=v, _canonical=True)

    # queries
    def contains(self, x: Sequence) -> bool:
        x = vec(x)
        if len(x) != self.dim:
            raise MalformedInput(f"point of length {len(x)} in R^{self.dim}")
        return all(dot(a, x) <= b for a, b in self._ineqs) and all(dot(e, x) == d for e, d in self._eqs)

    def contains_direction(self, r: Sequence) -> bool:
        """True when ``r`` lies in the recession cone."""
        r = vec(r)
        return all(dot(a, r) <= 0 for a, _ in self._ineqs) and all(dot(e, r) == 0 for e, _ in self._eqs)

    def includes(self, other: "Polyhedron") -> bool:
        """``other`` is a subset of ``self``."""
        _check_dims(self, other)
        v = other.vrep
        if v.empty:
            return True
        if self.is_empty:
            return False
        return all(self.contains(p) for p in v.vertices) and all(self.contains_direction(r) for r in v.rays)

    def equals(self, other: "Polyhedron") -> bool:
        return self.includes(other) and other.includes(self)

    def violation(self, other: "Polyhedron"):
        """A generator of ``other`` outside ``self`` as ``("vertex"|"ray", vector)``, or None."""
        _check_dims(self, other)
        v = other.vrep
        if v.empty:
            return None
        for p in v.vertices:
            if not self.contains(p):
                return ("vertex", p)
        for r in v.rays:
            if not self.contains_direction(r):
                return ("ray", r)
        return None

    def recession_cone(self) -> "Polyhedron":
        return Polyhedron(self.dim, [(a, 0) for a, _ in self._ineqs], [(e, 0) for e, _ in self._eqs])

    def lineality_basis(self) -> list[Vec]:
        from .exact import nullspace
        return nullspace([a for a, _ in self._ineqs] + [e for e, _ in self._eqs], self.dim)

    # constructions
    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        _check_dims(self, other)
        return Polyhedron(self.dim, self._ineqs + other._ineqs, self._eqs + other._eqs)

    def __add__(self, other: "Polyhedron") -> "Polyhedron":
        return minkowski_sum(self, other)

    def negate(self) -> "Polyhedron":
        return Polyhedron(self.dim, [(neg(a), b) for a, b in self._ineqs], [(neg(e), d) for e, d in self._eqs])

    def translate(self, t: Sequence) -> "Polyhedron":
        t = vec(t)
        return Polyhedron(self.dim, [(a, b + dot(a, t)) for a, b in self._ineqs],
                          [(e, d + dot(e, t)) for e, d in self._eqs])

    def product(self, other: "Polyhedron") -> "Polyhedron":
        n, k = self.dim, other.dim
        z1, z2 = zeros(k), zeros(n)
        return Polyhedron(
            n + k,
            [(a + z1, b) for a, b in self._ineqs] + [(z2 + a, b) for a, b in other._ineqs],
            [(e + z1, d) for e, d in self._eqs] + [(z2 + e, d) for e, d in other._eqs],
        )

    def image(self, matrix: Sequence[Sequence], out_dim: int | None = None) -> "Polyhedron":
        """Linear image ``{M x : x in self}`` computed from generators."""
        rows = [vec(r) for r in matrix]
        if out_dim is None:
            out_dim = len(rows)
        v = self.vrep
        if v.empty:
            return Polyhedron.empty(out_dim)
        apply = lambda x: tuple(dot(r, x) for r in rows)  # noqa: E731
        return Polyhedron.from_vrep(out_dim, [apply(p) for p in v.vertices], [apply(r) for r in v.rays])

    def preimage(self, matrix: Sequence[Sequence], in_dim: int) -> "Polyhedron":
        """``{x in R^in_dim : M x in self}``."""
        rows = [vec(r) for r in matrix]

        def pull(a):
            return tuple(sum((a[i] * rows[i][j] for i in range(len(rows))), Fraction(0)) for j in range(in_dim))

        return Polyhedron(in_dim, [(pull(a), b) for a, b in self._ineqs], [(pull(e), d) for e, d in self._eqs])

    # LP helpers
    def support(self, h: Sequence):
        """``sup {h.x : x in self}`` as an extended real (``-inf`` if empty)."""
        from .exact import INF, NEG_INF
        h = vec(h)
        v = self.vrep
        if v.empty:
            return NEG_INF
        if any(dot(h, r) > 0 for r in v.rays):
            return INF
        return max(dot(h, p) for p in v.vertices)

    def lp(self, objective: Sequence, sense: str = "min", lexmin: bool = False):
        p = LpProblem(vec(objective), tuple(a for a, _ in self._ineqs), tuple(b for _, b in self._ineqs),
                      tuple(e for e, _ in self._eqs), tuple(d for _, d in self._eqs), sense)
        return lp_solve(p, lexmin=lexmin)

    def interior_point(self):
        """A point strictly inside every inequality, or None.

        Equalities make the interior (in R^dim) empty.
        """
        if self._eqs:
            return None
        n = self.dim
        rows = [(a + (Fraction(1),), b) for a, b in self._ineqs] + [(zeros(n) + (Fraction(1),), Fraction(1))]
        P = Polyhedron(n + 1, rows)
        out = P.lp(zeros(n) + (Fraction(1),), "max", lexmin=True)
        if isinstance(out, Optimal) and out.value > 0:
            return out.point[:n]
        return None

    def __repr__(self):
        if self.__dict__.get("vrep") is not None:
            v = self.vrep
            return f"Polyhedron(dim={self.dim}, vertices={len(v.vertices)}, rays={len(v.rays)})"
        return f"Polyhedron(dim={self.dim}, ineqs={len(self._ineqs)}, eqs={len(self._eqs)})"

    def describe(self) -> str:
        from .exact import fmt
        v = self.vrep
        if v.empty:
            return "empty"
        return "conv{" + ", ".join(fmt(p) for p in v.vertices) + "} + cone{" + ", ".join(fmt(r) for r in v.rays) + "}"


def _check_dims(P: Polyhedron, Q: Polyhedron):
    if P.dim != Q.dim:
        raise MalformedInput(f"dimension mismatch: {P.dim} vs {Q.dim}")


# -- conversions ------------------------------------------------------------------

def to_vrep(P: Polyhedron) -> VRep:
    """Vertices and rays of ``P`` via double description of its homogenization."""
    n = P.dim
    ineqs = [[0] * n + [-1]]
    ineqs += [integerize(list(a) + [-b]) for a, b in P.ineqs]
    eqs = [integerize(list(e) + [-d]) for e, d in P.eqs]
    lines, rays = cone_dd(n + 1, ineqs, eqs)
    vertices, out_rays = [], []
    for r in rays:
        t = r[n]
        if t > 0:
            vertices.append(tuple(Fraction(c, t) for c in r[:n]))
        else:
            out_rays.append(tuple(Fraction(c) for c in r[:n]))
    if not vertices:
        return VRep()
    for l in lines:
        out_rays.append(tuple(Fraction(c) for c in l[:n]))
        out_rays.append(tuple(Fraction(-c) for c in l[:n]))
    return VRep(tuple(sorted(vertices)), tuple(sorted(out_rays)))


def to_hrep(V: VRep, dim: int) -> HRep:
    """Irredundant inequalities and an RREF equality block for ``V``."""
    n = dim
    if V.empty:
        return HRep(((tuple([Fraction(0)] * n), Fraction(-1)),), ())
    ineqs = []
    for v in V.vertices:
        ineqs.append(integerize(list(v) + [Fraction(1)]))
    for r in V.rays:
        ineqs.append(integerize(list(r) + [Fraction(0)]))
    lines, rays = cone_dd(n + 1, ineqs)
    # polar generator (a, c) encodes a.x <= -c
    eqs = [(tuple(Fraction(x) for x in l[:n]), Fraction(-l[n])) for l in lines]
    iq = []
    for r in rays:
        if not any(r[:n]):
            continue
        iq.append((tuple(Fraction(x) for x in r[:n]), Fraction(-r[n])))
    return HRep(tuple(sorted(iq)), _canon_eqs(eqs, n))


# -- operations -------------------------------------------------------------------

def minkowski_sum(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    """``P + Q`` from pairwise vertex sums and the union of rays."""
    _check_dims(P, Q)
    vp, vq = P.vrep, Q.vrep
    if vp.empty or vq.empty:
        return Polyhedron.empty(P.dim)
    pts = [add(p, q) for p in vp.vertices for q in vq.vertices]
    return Polyhedron.from_vrep(P.dim, pts, vp.rays + vq.rays).canonical()


def minkowski_sum_all(polys: Sequence[Polyhedron], dim: int) -> Polyhedron:
    out = Polyhedron.point(zeros(dim))
    for P in polys:
        out = minkowski_sum(out, P)
    return out


def contains_point(P: Polyhedron, x: Sequence) -> bool:
    return P.contains(x)


def includes(P: Polyhedron, Q: Polyhedron) -> bool:
    return P.includes(Q)


def equals(P: Polyhedron, Q: Polyhedron) -> bool:
    return P.equals(Q)


def is_cone(C: Polyhedron) -> bool:
    v = C.vrep
    return not v.empty and all(not any(p) for p in v.vertices)


def dual_cone(C: Polyhedron) -> Polyhedron:
    """``{y : y.c >= 0 for all c in C}`` for a polyhedral cone ``C``."""
    if not is_cone(C):
        raise MalformedInput("dual_cone requires a cone (all vertices at the origin)")
    return Polyhedron(C.dim, [(neg(r), 0) for r in C.vrep.rays]).canonical()


def lp_value(P: Polyhedron, objective: Sequence, sense: str = "min"):
    """Optimal value of a linear objective over ``P`` as an extended real."""
    from .exact import INF, NEG_INF
    out = P.lp(objective, sense)
    if isinstance(out, Optimal):
        return out.value
    if isinstance(out, Unbounded):
        return NEG_INF if sense == "min" else INF
    return INF if sense == "min" else NEG_INF
