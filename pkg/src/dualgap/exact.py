"""Exact rational scalars, vectors, linear algebra and a simplex LP solver.

Scalars are :class:`fractions.Fraction`; vectors are tuples of fractions.
Nothing in here ever touches a float.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from math import gcd
from typing import Iterable, Sequence, Union

Vec = tuple[Fraction, ...]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class MalformedInput(ValueError):
    """Raised for dimension mismatches and unparsable data."""


def rational(value) -> Fraction:
    """Coerce ``value`` to a Fraction without ever going through a float.

    Accepts ints, Fractions and strings of the form ``"p"`` or ``"p/q"``.
    Decimal strings and floats are rejected.
    """
    if isinstance(value, bool):
        raise MalformedInput(f"boolean is not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if not m:
            raise MalformedInput(f"exact rational 'p/q' required, got {value!r}")
        num, den = m.groups()
        if den is not None and int(den) == 0:
            raise MalformedInput(f"zero denominator in {value!r}")
        return Fraction(int(num), int(den) if den else 1)
    raise MalformedInput(f"exact rational required, got {type(value).__name__} {value!r}")


def vec(*coords) -> Vec:
    """Build a vector; ``vec(1, "1/2")`` or ``vec([1, "1/2"])``."""
    if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
        coords = tuple(coords[0])
    return tuple(rational(c) for c in coords)


def zeros(n: int) -> Vec:
    return (Fraction(0),) * n


def unit(n: int, i: int, sign: int = 1) -> Vec:
    return tuple(Fraction(sign if j == i else 0) for j in range(n))


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise MalformedInput(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence, v: Sequence) -> Vec:
    if len(u) != len(v):
        raise MalformedInput(f"dimension mismatch: {len(u)} vs {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vec:
    if len(u) != len(v):
        raise MalformedInput(f"dimension mismatch: {len(u)} vs {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vec:
    c = rational(c)
    return tuple(c * a for a in v)


def neg(v: Sequence) -> Vec:
    return tuple(-a for a in v)


def vsum(vs: Iterable[Sequence], n: int) -> Vec:
    out = zeros(n)
    for v in vs:
        out = add(out, v)
    return out


def fmt(x) -> str:
    """Canonical text form: ``p/q`` for rationals, ``+inf``/``-inf``."""
    if isinstance(x, (tuple, list)):
        return "(" + ", ".join(fmt(c) for c in x) + ")"
    return str(x)


# -- extended reals -----------------------------------------------------------

@total_ordering
class Infinity:
    """Signed infinity that orders and adds correctly against Fractions."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = 1 if sign > 0 else -1

    def __repr__(self):
        return "INF" if self.sign > 0 else "NEG_INF"

    def __str__(self):
        return "+inf" if self.sign > 0 else "-inf"

    def __hash__(self):
        return hash(("inf", self.sign))

    def __eq__(self, other):
        return isinstance(other, Infinity) and other.sign == self.sign

    def __lt__(self, other):
        if isinstance(other, Infinity):
            return self.sign < other.sign
        if isinstance(other, (int, Fraction)):
            return self.sign < 0
        return NotImplemented

    def __neg__(self):
        return Infinity(-self.sign)

    def __add__(self, other):
        if isinstance(other, Infinity):
            if other.sign != self.sign:
                raise ArithmeticError("+inf + -inf is undefined")
            return self
        if isinstance(other, (int, Fraction)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other


INF = Infinity(1)
NEG_INF = Infinity(-1)
ExtReal = Union[Fraction, Infinity]


def is_finite(x: ExtReal) -> bool:
    return not isinstance(x, Infinity)


# -- integer helpers used by the polyhedral kernel ----------------------------

def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else max(a, b, 1)


def integerize(row: Sequence[Fraction]) -> list[int]:
    """Scale a rational row by a positive factor to a primitive integer row."""
    row = [c if isinstance(c, Fraction) else Fraction(c) for c in row]
    den = 1
    for c in row:
        d = c.denominator
        if d != 1:
            den = den * d // gcd(den, d)
    ints = [c.numerator * (den // c.denominator) for c in row]
    return primitive(ints)


def primitive(ints: Sequence[int]) -> list[int]:
    g = 0
    for c in ints:
        g = gcd(g, c)
    if g > 1:
        return [c // g for c in ints]
    return list(ints)


# -- linear algebra -----------------------------------------------------------

def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [a / pv for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def _normalize_direction(v: Sequence[Fraction]) -> Vec:
    ints = integerize(v)
    lead = next((c for c in ints if c != 0), 0)
    if lead < 0:
        ints = [-c for c in ints]
    return tuple(Fraction(c) for c in ints)


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vec]:
    """Basis of {x : row . x = 0 for every row}, primitive integer vectors."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[fc]
        basis.append(_normalize_direction(x))
    return basis


def orthogonal_complement(basis: Sequence[Sequence], dim: int | None = None) -> list[Vec]:
    """Basis of the orthogonal complement of span(basis) in R^dim.

    Vectors are primitive integer vectors whose first nonzero entry is
    positive, so the output is deterministic.
    """
    if dim is None:
        if not basis:
            raise MalformedInput("cannot infer dimension from an empty basis")
        dim = len(basis[0])
    if dim <= 0:
        raise MalformedInput("dimension must be positive")
    for b in basis:
        if len(b) != dim:
            raise MalformedInput(f"basis vector of length {len(b)} in R^{dim}")
    return nullspace([vec(b) for b in basis], dim)


def span_basis(vectors: Sequence[Sequence], dim: int) -> list[Vec]:
    """A canonical basis (RREF rows) of span(vectors)."""
    red, _ = rref([vec(v) for v in vectors], dim)
    return [tuple(r) for r in red]


def same_span(a: Sequence[Sequence], b: Sequence[Sequence], dim: int) -> bool:
    return span_basis(a, dim) == span_basis(b, dim)


def solve_linear(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], ncols: int) -> Vec | None:
    """One solution of rows . x = rhs (free variables set to 0), or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return tuple(x)


# -- linear programming -------------------------------------------------------

@dataclass(frozen=True)
class LpProblem:
    """``sense`` of ``objective . x`` subject to ineq rows <= rhs and eq rows = rhs."""

    objective: Vec
    ineq_matrix: tuple[Vec, ...] = ()
    ineq_rhs: tuple[Fraction, ...] = ()
    eq_matrix: tuple[Vec, ...] = ()
    eq_rhs: tuple[Fraction, ...] = ()
    sense: str = "min"

    def __post_init__(self):
        n = len(self.objective)
        if self.sense not in ("min", "max"):
            raise MalformedInput(f"sense must be 'min' or 'max', got {self.sense!r}")
        if len(self.ineq_matrix) != len(self.ineq_rhs) or len(self.eq_matrix) != len(self.eq_rhs):
            raise MalformedInput("row count and rhs length differ")
        for r in (*self.ineq_matrix, *self.eq_matrix):
            if len(r) != n:
                raise MalformedInput(f"constraint row of length {len(r)}, objective has {n}")

    @property
    def dim(self) -> int:
        return len(self.objective)

    def feasible(self, x: Sequence[Fraction]) -> bool:
        return all(dot(a, x) <= b for a, b in zip(self.ineq_matrix, self.ineq_rhs)) and all(
            dot(e, x) == d for e, d in zip(self.eq_matrix, self.eq_rhs)
        )


@dataclass(frozen=True)
class Optimal:
    point: Vec
    value: Fraction


@dataclass(frozen=True)
class Infeasible:
    """Farkas certificate: ``ineq_mult >= 0`` and

    ineq_mult . A + eq_mult . E = 0 while ineq_mult . b + eq_mult . d < 0.
    """

    ineq_mult: Vec = field(default=())
    eq_mult: Vec = field(default=())


@dataclass(frozen=True)
class Unbounded:
    """A feasible point plus a recession direction that strictly improves."""

    point: Vec
    ray: Vec


LpOutcome = Union[Optimal, Infeasible, Unbounded]


def _primitive_row(row: list[int]) -> list[int]:
    g = gcd(*row)
    return [v // g for v in row] if g > 1 else row


class _Tableau:
    """Fraction-free dense tableau for min c.z, A z = b, z >= 0 with b >= 0.

    Each constraint row is a list of ints with the right-hand side last; a
    row may be rescaled by any positive factor without changing its
    meaning.  Cost rows are ``[ints, den]`` standing for ``ints / den``,
    whose last entry is minus the objective value.
    """

    def __init__(self, rows: list[list[int]], ncols: int):
        self.rows = rows
        self.ncols = ncols
        self.basis: list[int] = []

    def pivot(self, r, c, cost_rows):
        R = self.rows[r]
        p = R[c]
        if p < 0:
            R = [-v for v in R]
            self.rows[r] = R
            p = -p
        nz = [(j, v) for j, v in enumerate(R) if v]
        for i, row in enumerate(self.rows):
            f = row[c]
            if i == r or not f:
                continue
            new = [v * p for v in row]
            for j, v in nz:
                new[j] -= f * v
            self.rows[i] = _primitive_row(new)
        for cr in cost_rows:
            f = cr[0][c]
            if not f:
                continue
            new = [v * p for v in cr[0]]
            for j, v in nz:
                new[j] -= f * v
            den = cr[1] * p
            g = gcd(den, *new)
            cr[0] = [v // g for v in new]
            cr[1] = den // g
        self.basis[r] = c

    def run(self, cost, allowed):
        """Bland's rule on ``cost``; returns None at optimum or the entering column of an unbounded ray."""
        while True:
            C = cost[0]
            enter = next((j for j in range(self.ncols) if allowed[j] and C[j] < 0), None)
            if enter is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a <= 0:
                    continue
                num = row[-1]
                if best is None:
                    best = (num, a, self.basis[i], i)
                    continue
                bn, ba, bb, _ = best
                lhs, rhs = num * ba, bn * a
                if lhs < rhs or (lhs == rhs and self.basis[i] < bb):
                    best = (num, a, self.basis[i], i)
            if best is None:
                return enter
            self.pivot(best[3], enter, [cost])

    def value_of(self, i: int) -> Fraction:
        row = self.rows[i]
        return Fraction(row[-1], row[self.basis[i]])


def _cost_row(tab: _Tableau, c: Sequence[Fraction]):
    rc = [Fraction(v) for v in c] + [Fraction(0)]
    for i, bj in enumerate(tab.basis):
        cb = c[bj]
        if cb:
            row = tab.rows[i]
            f = Fraction(cb) / row[bj]
            for j, a in enumerate(row):
                if a:
                    rc[j] -= f * a
    den = 1
    for v in rc:
        den = lcm(den, v.denominator)
    return [[int(v * den) for v in rc], den]


def _simplex(p: LpProblem) -> LpOutcome:
    n = p.dim
    k = len(p.ineq_matrix)
    q = len(p.eq_matrix)
    sgn = 1 if p.sense == "min" else -1
    # columns: x+ (n), x- (n), slacks (k), artificials (as needed)
    nstruct = 2 * n + k
    rows, flip = [], []
    for i, (a, b) in enumerate(zip(p.ineq_matrix, p.ineq_rhs)):
        r = list(a) + [-c for c in a] + [Fraction(0)] * k
        r[2 * n + i] = Fraction(1)
        rows.append(r + [Fraction(b)])
    for e, d in zip(p.eq_matrix, p.eq_rhs):
        rows.append(list(e) + [-c for c in e] + [Fraction(0)] * k + [Fraction(d)])
    for i in range(k + q):
        if rows[i][-1] < 0:
            rows[i] = [-c for c in rows[i]]
            flip.append(-1)
        else:
            flip.append(1)
    # identity column per row: the slack if usable, else a fresh artificial
    ident_col, ident_cost = [], []
    nart = 0
    for i in range(k + q):
        if i < k and flip[i] == 1:
            ident_col.append(2 * n + i)
            ident_cost.append(Fraction(0))
        else:
            ident_col.append(nstruct + nart)
            ident_cost.append(Fraction(1))
            nart += 1
    ncols = nstruct + nart
    int_rows = []
    for i in range(k + q):
        body = rows[i][:-1] + [Fraction(0)] * nart
        if ident_col[i] >= nstruct:
            body[ident_col[i]] = Fraction(1)
        int_rows.append(integerize(body + [rows[i][-1]]))
    tab = _Tableau(int_rows, ncols)
    tab.basis = list(ident_col)

    c1 = [Fraction(0)] * nstruct + [Fraction(1)] * nart
    cost1 = _cost_row(tab, c1)
    tab.run(cost1, [True] * ncols)
    C, den = cost1
    if C[-1] < 0:  # phase-one optimum -C[-1]/den is positive
        y = [ident_cost[i] - Fraction(C[ident_col[i]], den) for i in range(k + q)]
        y = [yi * f for yi, f in zip(y, flip)]
        return Infeasible(tuple(-yi for yi in y[:k]), tuple(-yi for yi in y[k:]))

    # drive remaining artificials out of the basis
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= nstruct:
            c = next((j for j in range(nstruct) if tab.rows[r][j] != 0), None)
            if c is None:
                del tab.rows[r], tab.basis[r]
                continue
            tab.pivot(r, c, [])
        r += 1
    allowed = [True] * nstruct + [False] * nart
    c2 = [sgn * c for c in p.objective] + [-sgn * c for c in p.objective] + [Fraction(0)] * (k + nart)
    cost2 = _cost_row(tab, c2)
    enter = tab.run(cost2, allowed)

    z = [Fraction(0)] * ncols
    for i, bj in enumerate(tab.basis):
        z[bj] = tab.value_of(i)
    point = tuple(z[j] - z[n + j] for j in range(n))
    if enter is not None:
        d = [Fraction(0)] * ncols
        d[enter] = Fraction(1)
        for i, bj in enumerate(tab.basis):
            d[bj] = -Fraction(tab.rows[i][enter], tab.rows[i][bj])
        ray = tuple(d[j] - d[n + j] for j in range(n))
        return Unbounded(point, ray)
    return Optimal(point, dot(p.objective, point))


def lp_solve(p: LpProblem, lexmin: bool = True) -> LpOutcome:
    """Solve ``p`` exactly with a two-phase simplex under Bland's rule.

    With ``lexmin`` the optimal point is refined to the lexicographically
    smallest optimal solution (coordinates unbounded below on the optimal
    face are left where the previous refinement put them).
    """
    out = _simplex(p)
    if not lexmin or not isinstance(out, Optimal):
        return out
    n = p.dim
    eq_m = list(p.eq_matrix) + [p.objective]
    eq_r = list(p.eq_rhs) + [out.value]
    best = out.point
    for i in range(n):
        sub_p = LpProblem(unit(n, i), p.ineq_matrix, p.ineq_rhs, tuple(eq_m), tuple(eq_r))
        r = _simplex(sub_p)
        if isinstance(r, Optimal):
            best = r.point
            eq_m.append(unit(n, i))
            eq_r.append(r.value)
    return Optimal(best, dot(p.objective, best))
