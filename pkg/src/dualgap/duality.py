"""Separable programs over a subspace or a polyhedral cone, and their duals.

The primal problem minimizes ``sum_i g_i(x_i)`` subject to
``(x_1, ..., x_m)`` in a subspace ``S`` (or a cone ``C``).  The dual
maximizes ``-sum_i g_i*(y_i)`` over ``S``'s orthogonal complement (or the
dual cone ``C*``).

For the checks that need one function list on one space, the program is
rewritten as ``iota_S + sum_i g_i(z_i)`` on the product space.  When ``S``
is the diagonal ``{(x, ..., x)}`` the shorter list ``g_1, ..., g_m`` on the
block space is used instead; that form is what lets catalog functions in.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .calculus import epi_conj_sum, fn_sum, inf_conv_value
from .catalog import ParabolaIndicator
from .exact import (
    INF,
    NEG_INF,
    ExtReal,
    LpProblem,
    MalformedInput,
    Optimal,
    Unbounded,
    Vec,
    fmt,
    lp_solve,
    orthogonal_complement,
    rational,
    same_span,
    span_basis,
    unit,
    vec,
    zeros,
)
from .functions import AnalyticFn, ConvexFn, ImproperFunction, PolyhedralFn
from .polyhedra import Polyhedron, dual_cone, is_cone, minkowski_sum
from .regions import UnsupportedCombination, describe, min_parabolic, region_closed
from .subdiff import Verdict, condition_ii_check, sum_eps_subdiffs


@dataclass(frozen=True)
class Subspace:
    dim: int
    basis: tuple[Vec, ...]

    def polyhedron(self) -> Polyhedron:
        return Polyhedron.span(self.dim, self.basis)

    @classmethod
    def diagonal(cls, block_dim: int, copies: int) -> "Subspace":
        """``{(x, ..., x)}`` with ``copies`` blocks of length ``block_dim``."""
        n = block_dim * copies
        return cls(n, tuple(tuple(Fraction(int(k % block_dim == j)) for k in range(n)) for j in range(block_dim)))


@dataclass(frozen=True)
class PolyCone:
    cone: Polyhedron

    @property
    def dim(self) -> int:
        return self.cone.dim

    def polyhedron(self) -> Polyhedron:
        return self.cone


Constraint = Union[Subspace, PolyCone]


@dataclass(frozen=True)
class MonotropicInstance:
    blocks: tuple[ConvexFn, ...]
    constraint: Constraint
    name: str = ""

    def __post_init__(self):
        if not self.blocks:
            raise MalformedInput("an instance needs at least one block")
        if sum(f.dim for f in self.blocks) != self.constraint.dim:
            raise MalformedInput(
                f"block dimensions add to {sum(f.dim for f in self.blocks)}, constraint lives in R^{self.constraint.dim}"
            )
        if isinstance(self.constraint, PolyCone) and not is_cone(self.constraint.cone):
            raise MalformedInput("cone constraint is not a cone")

    @property
    def dim(self) -> int:
        return self.constraint.dim

    @property
    def offsets(self) -> list[int]:
        out, k = [], 0
        for f in self.blocks:
            out.append(k)
            k += f.dim
        return out

    def split(self, z: Sequence) -> list[Vec]:
        z = vec(z)
        return [z[o:o + f.dim] for o, f in zip(self.offsets, self.blocks)]

    @property
    def all_polyhedral(self) -> bool:
        return all(isinstance(f, PolyhedralFn) for f in self.blocks)

    @property
    def is_diagonal(self) -> bool:
        if not isinstance(self.constraint, Subspace):
            return False
        d = self.blocks[0].dim
        if any(f.dim != d for f in self.blocks):
            return False
        m = len(self.blocks)
        diag = [tuple(Fraction(int(k % d == j)) for k in range(m * d)) for j in range(d)]
        return same_span(list(self.constraint.basis), diag, m * d)


@dataclass(frozen=True)
class DualView:
    blocks: tuple[ConvexFn, ...]
    constraint: Constraint


@dataclass(frozen=True)
class Solution:
    value: ExtReal
    attained: bool
    witness: Vec | None = None


@dataclass
class GapReport:
    primal_value: ExtReal
    dual_value: ExtReal
    gap: ExtReal
    primal_attained: bool
    dual_attained: bool
    primal_witness: Vec | None
    dual_witness: Vec | None
    cq_diagnostics: dict[str, Verdict] = field(default_factory=dict)
    cross_check: dict[str, ExtReal] = field(default_factory=dict)


# -- dual construction -----------------------------------------------------------

def dual_constraint(c: Constraint) -> Constraint:
    if isinstance(c, Subspace):
        if not c.basis:
            return Subspace(c.dim, tuple(unit(c.dim, i) for i in range(c.dim)))
        return Subspace(c.dim, tuple(orthogonal_complement(list(c.basis), c.dim)))
    return PolyCone(dual_cone(c.cone))


def build_dual(inst: MonotropicInstance) -> DualView:
    return DualView(tuple(f.conjugate() for f in inst.blocks), dual_constraint(inst.constraint))


def reformulate(inst: MonotropicInstance) -> list[ConvexFn]:
    """One function list on one space with the same optimal value (see the module docstring)."""
    if inst.is_diagonal:
        return list(inst.blocks)
    if not inst.all_polyhedral:
        raise UnsupportedCombination("catalog blocks are supported only under the diagonal constraint")
    N = inst.dim
    head = PolyhedralFn.indicator(inst.constraint.polyhedron())
    return [head] + [f.lift(o, N) for f, o in zip(inst.blocks, inst.offsets)]


# -- solvers ----------------------------------------------------------------------

def _block_lp(funcs: Sequence[PolyhedralFn], region: Polyhedron, offsets: Sequence[int]):
    """min sum t_i over (z, t) with (z_i, t_i) in epi f_i and z in region."""
    N = region.dim
    m = len(funcs)
    n = N + m
    ineqs, rhs, eqs, erhs = [], [], [], []

    def place(a, off, d, i):
        row = [Fraction(0)] * n
        row[off:off + d] = a[:d]
        row[N + i] = a[d]
        return tuple(row)

    for i, (f, off) in enumerate(zip(funcs, offsets)):
        for a, b in f.epi.ineqs:
            ineqs.append(place(a, off, f.dim, i))
            rhs.append(b)
        for e, c in f.epi.eqs:
            eqs.append(place(e, off, f.dim, i))
            erhs.append(c)
    for a, b in region.ineqs:
        ineqs.append(tuple(a) + zeros(m))
        rhs.append(b)
    for e, c in region.eqs:
        eqs.append(tuple(e) + zeros(m))
        erhs.append(c)
    obj = zeros(N) + (Fraction(1),) * m
    out = lp_solve(LpProblem(obj, tuple(ineqs), tuple(rhs), tuple(eqs), tuple(erhs)))
    return out, N


def solve_primal(inst: MonotropicInstance) -> Solution:
    if inst.all_polyhedral:
        out, N = _block_lp(inst.blocks, inst.constraint.polyhedron(), inst.offsets)
        if isinstance(out, Optimal):
            return Solution(out.value, True, out.point[:N])
        if isinstance(out, Unbounded):
            return Solution(NEG_INF, False, None)
        return Solution(INF, False, None)
    if not inst.is_diagonal:
        raise UnsupportedCombination("catalog blocks are supported only under the diagonal constraint")
    try:
        h = fn_sum(list(inst.blocks))
    except ImproperFunction:
        return Solution(INF, False, None)
    if not isinstance(h, PolyhedralFn):
        raise UnsupportedCombination("sum of catalog blocks does not reduce to a polyhedral function")
    out = h.epi.lp(zeros(h.dim) + (Fraction(1),), "min", lexmin=True)
    if isinstance(out, Unbounded):
        return Solution(NEG_INF, False, None)
    x = out.point[:h.dim]
    return Solution(out.value, True, x * len(inst.blocks))


def solve_dual(inst: MonotropicInstance) -> Solution:
    dual = build_dual(inst)
    if inst.all_polyhedral:
        out, N = _block_lp(dual.blocks, dual.constraint.polyhedron(), inst.offsets)
        if isinstance(out, Optimal):
            return Solution(-out.value, True, out.point[:N])
        if isinstance(out, Unbounded):
            return Solution(INF, False, None)
        return Solution(NEG_INF, False, None)
    if not inst.is_diagonal:
        raise UnsupportedCombination("catalog blocks are supported only under the diagonal constraint")
    res = inf_conv_value(list(dual.blocks), zeros(inst.blocks[0].dim))
    value = -res.value
    if not res.attained or res.witness is None:
        return Solution(value, False, None)
    return Solution(value, True, tuple(c for part in res.witness for c in part))


def duality_gap(p: ExtReal, d: ExtReal) -> ExtReal:
    """``p - d`` with the convention that equal values (even infinite) give 0."""
    if p == d:
        return Fraction(0)
    return p - d


def conjugate_route(inst: MonotropicInstance) -> tuple[ExtReal, ExtReal]:
    """``p = -(sum f)*(0)`` and ``d = -(f_1* [] ... [] f_m*)(0)`` on the reformulated list."""
    fs = reformulate(inst)
    origin = zeros(fs[0].dim)
    try:
        p = -fn_sum(fs).conjugate().evaluate(origin)
    except ImproperFunction:
        p = INF
    d = -inf_conv_value([f.conjugate() for f in fs], origin, lexmin=False).value
    return p, d


# -- constraint qualifications ----------------------------------------------------

def interiority_check(fs: Sequence[ConvexFn]) -> Verdict:
    """Is there a point of ``dom f_1`` interior to every other domain?"""
    head, rest = fs[0], list(fs[1:])
    if any(isinstance(f, AnalyticFn) for f in rest):
        raise UnsupportedCombination("interiority with a catalog function after the first position")
    d = head.dim
    inner = Polyhedron(d)
    for f in rest:
        inner = inner.intersect(f.domain)
    if isinstance(head, PolyhedralFn):
        if not rest:
            out = head.domain.lp(zeros(d), lexmin=True)
            return Verdict(isinstance(out, Optimal), out.point if isinstance(out, Optimal) else None, "single block")
        if inner.eqs:
            return Verdict(False, None, "an equality constraint leaves the other domains without interior")
        # maximize a common slack s <= 1 with a.x + s <= b on the later domains
        rows = [(a + (Fraction(0),), b) for a, b in head.domain.ineqs]
        rows += [(a + (Fraction(1),), b) for a, b in inner.ineqs]
        rows.append((zeros(d) + (Fraction(1),), Fraction(1)))
        eqs = [(e + (Fraction(0),), c) for e, c in head.domain.eqs]
        out = Polyhedron(d + 1, rows, eqs).lp(zeros(d) + (Fraction(1),), "max", lexmin=True)
        if isinstance(out, Optimal) and out.value > 0:
            return Verdict(True, out.point[:d], f"slack {out.value}")
        slack = out.value if isinstance(out, Optimal) else None
        return Verdict(False, None, f"best slack {slack}" if slack is not None else "domains do not meet")
    if isinstance(head, ParabolaIndicator):
        centre = inner.interior_point() if not inner.eqs else None
        if centre is None:
            return Verdict(False, None, "the later domains have empty interior")
        res = min_parabolic(inner, Fraction(0), Fraction(1), argmin=True)
        if res is None:
            # the later domains recede along (-1, 0); walk the interior point that way
            c1, c2 = centre
            z = (c1 - max(Fraction(0), (2 * c1 + c2 * c2) / 2) - 1, c2)
            return Verdict(True, z, "2x + y^2 is unbounded below on the later domains")
        value, q = res
        if value >= 0:
            return Verdict(False, None, f"min of 2x + y^2 over the later domains is {value} >= 0")
        # slide from the minimizer toward an interior point until both strict conditions hold
        lam = Fraction(1, 2)
        while True:
            z = tuple((1 - lam) * a + lam * b for a, b in zip(q, centre))
            if 2 * z[0] + z[1] ** 2 < 0:
                return Verdict(True, z, f"min of 2x + y^2 is {value} < 0")
            lam /= 2
    raise UnsupportedCombination(f"interiority for {type(head).__name__}")


def transversality_check(f: ConvexFn, g: ConvexFn) -> Verdict:
    """Is the cone generated by ``dom f - dom g`` a linear subspace?  Witness: a basis of it."""
    if not (isinstance(f, PolyhedralFn) and isinstance(g, PolyhedralFn)):
        raise UnsupportedCombination("transversality needs polyhedral domains")
    diff = minkowski_sum(f.domain, g.domain.negate())
    d = f.dim
    if not diff.contains(zeros(d)):
        return Verdict(False, None, "0 is not in dom f - dom g")
    v = diff.vrep
    cone = Polyhedron.cone(d, [p for p in v.vertices if any(p)] + list(v.rays))
    if cone.includes(cone.negate()):
        return Verdict(True, tuple(span_basis(list(cone.vrep.rays), d)), "cone is a subspace")
    return Verdict(False, None, f"cone {cone.describe()} is not a subspace")


def bertsekas_cq_check(inst: MonotropicInstance, x: Sequence, eps) -> Verdict:
    """Closedness of ``(constraint normal set) + product of block eps-subdifferentials`` at ``x``."""
    x = vec(x)
    eps = rational(eps)
    if len(x) != inst.dim:
        raise MalformedInput(f"point of length {len(x)} in R^{inst.dim}")
    if not inst.constraint.polyhedron().contains(x):
        raise MalformedInput("point violates the coupling constraint")
    parts = inst.split(x)
    if inst.all_polyhedral:
        prod = None
        for f, xi in zip(inst.blocks, parts):
            r = f.eps_subdiff(xi, eps)
            if r.is_empty:
                raise MalformedInput("point is outside a block domain")
            prod = r if prod is None else prod.product(r)
        normal = PolyhedralFn.indicator(inst.constraint.polyhedron()).eps_subdiff(x, eps)
        total = minkowski_sum(normal, prod)
        return Verdict(region_closed(total), describe(total), "polyhedral sums are closed")
    if not inst.is_diagonal:
        raise UnsupportedCombination("catalog blocks are supported only under the diagonal constraint")
    # on the diagonal, S-perp + A is closed iff its image under (y_i) -> sum y_i is closed
    region = sum_eps_subdiffs(list(inst.blocks), parts[0], eps)
    return Verdict(region_closed(region), describe(region), "closed after quotienting by the orthogonal complement")


def feasible_points(inst: MonotropicInstance, limit: int = 5) -> list[Vec]:
    """Up to ``limit`` distinct points of ``constraint ∩ product of domains``."""
    if inst.all_polyhedral:
        F = inst.constraint.polyhedron()
        for f, off in zip(inst.blocks, inst.offsets):
            F = F.intersect(f.lift(off, inst.dim).domain)
        v = F.vrep
        pts = list(v.vertices)
        for p in v.vertices:
            for r in v.rays:
                pts.append(tuple(a + b for a, b in zip(p, r)))
        for i in range(len(v.vertices)):
            for j in range(i + 1, len(v.vertices)):
                pts.append(tuple((a + b) / 2 for a, b in zip(v.vertices[i], v.vertices[j])))
        return list(dict.fromkeys(pts))[:limit]
    sol = solve_primal(inst)
    return [sol.witness] if sol.witness is not None else []


def sample_duals(d: int) -> list[Vec]:
    out = [zeros(d)]
    for i in range(d):
        out += [unit(d, i), unit(d, i, -1)]
    out.append((Fraction(1),) * d)
    out.append(tuple(Fraction(1 if i % 2 == 0 else -2) for i in range(d)))
    return list(dict.fromkeys(out))


def _guard(fn, *args) -> Verdict:
    try:
        return fn(*args)
    except UnsupportedCombination as exc:
        return Verdict(None, None, f"unsupported: {exc}")


def exactness_check(fs: Sequence[ConvexFn], duals: Sequence[Sequence]) -> Verdict:
    """Inf-convolution of conjugates is attained at every finite sample."""
    conjs = [f.conjugate() for f in fs]
    for y in duals:
        res = inf_conv_value(conjs, y, lexmin=False)
        if res.value != INF and not res.attained:
            return Verdict(False, tuple(vec(y)), res.certificate)
    return Verdict(True, None, f"attained at {len(duals)} sample points")


def closed_epigraph_check(fs: Sequence[ConvexFn]) -> Verdict:
    res = epi_conj_sum(fs)
    return Verdict(res.closed, res.witness, res.certificate)


def cq_battery(inst: MonotropicInstance) -> dict[str, Verdict]:
    fs = reformulate(inst)
    d = fs[0].dim
    duals = sample_duals(d)
    if inst.is_diagonal and d == 2:
        duals = list(dict.fromkeys(duals + [vec(1, 1)]))
    out: dict[str, Verdict] = {}
    out["interiority"] = _guard(interiority_check, fs)
    pts = feasible_points(inst)
    bert = []
    for x in pts:
        for eps in (Fraction(1, 2), Fraction(1)):
            v = _guard(bertsekas_cq_check, inst, x, eps)
            bert.append(v.holds)
    if not pts:
        out["bertsekas"] = Verdict(None, None, "no feasible point")
    else:
        out["bertsekas"] = Verdict(all(bert), pts[0], f"{len(pts)} feasible point{'s' if len(pts) != 1 else ''} x 2 eps values")
    out["closed_epigraph"] = _guard(closed_epigraph_check, fs)
    try:
        out["condition_ii"] = condition_ii_check(fs, duals)
    except (UnsupportedCombination, ImproperFunction) as exc:
        out["condition_ii"] = Verdict(None, None, f"unavailable: {exc}")
    out["exactness"] = _guard(exactness_check, fs, duals)
    if len(fs) == 2:
        out["transversality"] = _guard(transversality_check, fs[0], fs[1])
    return out


def gap_report(inst: MonotropicInstance, diagnostics: bool = True) -> GapReport:
    p = solve_primal(inst)
    d = solve_dual(inst)
    report = GapReport(
        p.value, d.value, duality_gap(p.value, d.value), p.attained, d.attained, p.witness, d.witness,
    )
    try:
        cp, cd = conjugate_route(inst)
        report.cross_check = {"primal": cp, "dual": cd}
    except UnsupportedCombination:
        pass
    if diagnostics:
        report.cq_diagnostics = cq_battery(inst)
    return report


def format_solution(s: Solution) -> str:
    w = fmt(s.witness) if s.witness is not None else "-"
    return f"{s.value} attained={s.attained} witness={w}"
