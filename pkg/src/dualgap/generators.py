"""Seeded random instances for demos and property suites."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exact import Vec, zeros
from .functions import PolyhedralFn
from .polyhedra import Polyhedron


@dataclass(frozen=True)
class PolyFamilyMember:
    """A list of polyhedral functions on R^dim whose domains all contain the origin."""

    index: int
    dim: int
    functions: tuple[PolyhedralFn, ...]
    points: tuple[Vec, ...]


def random_polyhedral_fn(rng: random.Random, dim: int, max_rows: int = 6) -> PolyhedralFn:
    """``max`` of 1-3 integer affine pieces on a random domain through the origin.

    At most ``max_rows`` epigraph inequalities are drawn in total.
    """
    n_pieces = rng.randint(1, 3)
    pieces = [(tuple(rng.randint(-2, 2) for _ in range(dim)), rng.randint(-2, 2)) for _ in range(n_pieces)]
    rows = []
    for _ in range(rng.randint(0, min(3, max_rows - n_pieces))):
        a = tuple(rng.randint(-2, 2) for _ in range(dim))
        if any(a):
            rows.append((a, rng.randint(0, 3)))
    domain = Polyhedron(dim, rows) if rows else None
    return PolyhedralFn.from_pieces(dim, pieces, domain)


def polyhedral_family(seed: int, count: int, max_dim: int = 3, max_m: int = 3) -> list[PolyFamilyMember]:
    rng = random.Random(seed)
    out = []
    for k in range(count):
        d = rng.randint(1, max_dim)
        m = rng.randint(1, max_m) if k % 5 == 4 else rng.randint(2, max_m)
        fs = tuple(random_polyhedral_fn(rng, d) for _ in range(m))
        dom = fs[0].domain
        for f in fs[1:]:
            dom = dom.intersect(f.domain)
        pts = [zeros(d)]
        pts += [p for p in dom.vrep.vertices if any(p)][:1]
        out.append(PolyFamilyMember(k, d, fs, tuple(pts)))
    return out


def random_polytope(rng: random.Random, dim: int, n_points: int | None = None) -> Polyhedron:
    """Convex hull of 2-5 random integer points in ``[-3, 3]^dim``."""
    n = n_points or rng.randint(2, 5)
    pts = [tuple(Fraction(rng.randint(-3, 3)) for _ in range(dim)) for _ in range(n)]
    return Polyhedron.from_vrep(dim, pts)


def sublinear_family(seed: int, count: int, max_dim: int = 2, max_m: int = 3):
    """Lists of support functions of random polytopes, with the polytopes."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        d = rng.randint(1, max_dim)
        m = rng.randint(1, max_m)
        polys = [random_polytope(rng, d) for _ in range(m)]
        out.append((d, polys, [PolyhedralFn.support_function(P) for P in polys]))
    return out
