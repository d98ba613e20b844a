"""Hypothesis strategies for small exact instances."""
from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from dualgap.functions import PolyhedralFn
from dualgap.polyhedra import Polyhedron

small_int = st.integers(-3, 3)
rationals = st.builds(Fraction, st.integers(-6, 6), st.sampled_from([1, 2, 3]))
nonneg = st.builds(Fraction, st.integers(0, 6), st.sampled_from([1, 2, 4]))


def vectors(n, elements=rationals):
    return st.tuples(*[elements] * n)


dims = st.integers(1, 3)


@st.composite
def boxed_rows(draw, n, max_rows=5):
    """Random inequality rows plus the box [-4, 4]^n (so the set is bounded)."""
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append((tuple(e), Fraction(4)))
        e = [0] * n
        e[i] = -1
        rows.append((tuple(e), Fraction(4)))
    for _ in range(draw(st.integers(0, max_rows))):
        a = draw(st.tuples(*[small_int] * n))
        if any(a):
            rows.append((a, Fraction(draw(st.integers(-2, 4)))))
    return rows


@st.composite
def polytopes(draw, n=None):
    n = draw(dims) if n is None else n
    pts = draw(st.lists(st.tuples(*[small_int] * n), min_size=1, max_size=5))
    return Polyhedron.from_vrep(n, [tuple(map(Fraction, p)) for p in pts])


@st.composite
def polyhedra(draw, n=None):
    """Polyhedra with rays and lines as well: polytope + cone of random directions."""
    n = draw(dims) if n is None else n
    pts = draw(st.lists(st.tuples(*[small_int] * n), min_size=1, max_size=4))
    rays = draw(st.lists(st.tuples(*[small_int] * n), max_size=2))
    return Polyhedron.from_vrep(n, [tuple(map(Fraction, p)) for p in pts], [tuple(map(Fraction, r)) for r in rays])


@st.composite
def boxed_functions(draw, n=None):
    """``(f, pieces, lo, hi)``: max of affine pieces on a box."""
    n = draw(dims) if n is None else n
    pieces = draw(st.lists(st.tuples(st.tuples(*[small_int] * n), small_int), min_size=1, max_size=3))
    lo = tuple(Fraction(draw(st.integers(-2, 0))) for _ in range(n))
    hi = tuple(Fraction(draw(st.integers(0, 2))) for _ in range(n))
    f = PolyhedralFn.from_pieces(n, pieces, Polyhedron.box(lo, hi))
    return f, pieces, lo, hi


@st.composite
def polyhedral_functions(draw, n=None):
    """Max of affine pieces, optionally restricted to a domain through the origin."""
    n = draw(dims) if n is None else n
    pieces = draw(st.lists(st.tuples(st.tuples(*[small_int] * n), small_int), min_size=1, max_size=3))
    rows = []
    for _ in range(draw(st.integers(0, 2))):
        a = draw(st.tuples(*[small_int] * n))
        if any(a):
            rows.append((a, Fraction(draw(st.integers(0, 3)))))
    return PolyhedralFn.from_pieces(n, pieces, Polyhedron(n, rows) if rows else None)
