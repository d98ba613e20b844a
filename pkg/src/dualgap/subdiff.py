"""Epsilon-subdifferentials of sums and the checks built on them.

Every ``*_check`` function returns a :class:`Verdict` whose ``witness``
explains the outcome: a point outside an inclusion, a list of splits, or
the regions that were compared.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, NamedTuple, Sequence

from .calculus import default_grid, fn_sum, inf_conv_value, near_minimizer
from .exact import INF, LpProblem, MalformedInput, Optimal, Vec, dot, lp_solve, rational, vec, vsum
from .functions import AnalyticFn, ConvexFn, PolyhedralFn, inf_conv_epigraph
from .polyhedra import Polyhedron
from .regions import Region, region_equals, region_includes, region_sum, region_violation


class Verdict(NamedTuple):
    holds: bool
    witness: Any = None
    detail: str = ""


@dataclass(frozen=True)
class EpsSplit:
    """``point = sum(y_i)`` with ``y_i`` in the ``eps_i``-subdifferential of ``f_i``.

    For a ray split (``ray=True``) the parts are recession directions and
    every ``eps_i`` is 0.
    """

    point: Vec
    parts: tuple[tuple[Vec, Fraction], ...]
    ray: bool = False

    @property
    def total_eps(self) -> Fraction:
        return sum((e for _, e in self.parts), Fraction(0))


class DecompositionError(ValueError):
    """No split meets the budget; ``gap`` is how far the inf-convolution exceeds the conjugate of the sum."""

    def __init__(self, message: str, gap):
        super().__init__(message)
        self.gap = gap


def eps_subdiff(f: ConvexFn, x: Sequence, eps) -> Region:
    return f.eps_subdiff(vec(x), rational(eps))


def subdiff(f: ConvexFn, x: Sequence) -> Region:
    return f.eps_subdiff(vec(x), Fraction(0))


def sum_eps_subdiffs(fs: Sequence[ConvexFn], x: Sequence, eps) -> Region:
    return sum_of_subdiffs(fs, x, [rational(eps)] * len(fs))


def sum_of_subdiffs(fs: Sequence[ConvexFn], x: Sequence, epss: Sequence) -> Region:
    x = vec(x)
    regions = [f.eps_subdiff(x, rational(e)) for f, e in zip(fs, epss)]
    # polyhedral pieces first keeps the fold inside the supported region algebra
    regions.sort(key=lambda r: not isinstance(r, Polyhedron))
    out = regions[0]
    for r in regions[1:]:
        out = region_sum(out, r)
    return out


def fy_residual(f: ConvexFn, x: Vec, y: Vec):
    """``f(x) + f*(y) - <x, y>``."""
    fx, fy = f.evaluate(x), f.conjugate().evaluate(y)
    if fx == INF or fy == INF:
        return INF
    return fx + fy - dot(x, y)


# -- condition (i) ---------------------------------------------------------------------

def condition_i_check(fs: Sequence[ConvexFn], x: Sequence, eps, K) -> Verdict:
    """Closure of the eps-sum lies inside the (K*eps)-sum.

    Every region kind is closed, so the closure is the set itself.
    """
    x, eps, K = vec(x), rational(eps), rational(K)
    if eps <= 0 or K < 1:
        raise MalformedInput("condition (i) needs eps > 0 and K >= 1")
    lhs = sum_eps_subdiffs(fs, x, eps)
    rhs = sum_eps_subdiffs(fs, x, K * eps)
    if region_includes(rhs, lhs):
        return Verdict(True, None, "closure of the eps-sum is inside the K*eps-sum")
    return Verdict(False, region_violation(rhs, lhs), "closure of the eps-sum escapes the K*eps-sum")


def least_sufficient_K(fs: Sequence[ConvexFn], x: Sequence, eps) -> int | None:
    """Smallest integer K in 1..m+1 for which condition (i) holds at ``(x, eps)``."""
    for K in range(1, len(fs) + 2):
        if condition_i_check(fs, x, eps, K).holds:
            return K
    return None


# -- condition (ii) ---------------------------------------------------------------------

def condition_ii_check(fs: Sequence[ConvexFn], duals: Sequence[Sequence]) -> Verdict:
    """Conjugate of the sum agrees with the inf-convolution of conjugates.

    Pointwise at ``duals``; for polyhedral lists also as epigraph equality.
    """
    if not duals:
        raise MalformedInput("condition (ii) needs at least one sample dual point")
    if len(fs) == 1:
        return Verdict(True, None, "single function")
    conj_sum = fn_sum(fs).conjugate()
    conjs = [f.conjugate() for f in fs]
    for y in duals:
        y = vec(y)
        lhs = conj_sum.evaluate(y)
        rhs = inf_conv_value(conjs, y, lexmin=False).value
        if lhs != rhs:
            return Verdict(False, y, f"(sum f)*(y) = {lhs} but inf-convolution = {rhs}")
    if all(isinstance(f, PolyhedralFn) for f in fs):
        if not conj_sum.epi.equals(inf_conv_epigraph(conjs)):
            return Verdict(False, None, "epigraphs differ")
        return Verdict(True, None, "epigraphs coincide")
    return Verdict(True, None, f"agrees at {len(duals)} sample points")


# -- condition (iv) and splits ---------------------------------------------------------

def decompose_subgradient(fs: Sequence[ConvexFn], x: Sequence, y: Sequence, eps, eta) -> EpsSplit:
    """Split ``y`` in the eps-subdifferential of the sum into a budget of ``eps + eta``."""
    x, y, eps, eta = vec(x), vec(y), rational(eps), rational(eta)
    if eta <= 0:
        raise MalformedInput("eta must be positive")
    total = fn_sum(fs)
    r = fy_residual(total, x, y)
    if r == INF or r > eps:
        raise MalformedInput(f"{tuple(map(str, y))} is not in the {eps}-subdifferential of the sum")
    if len(fs) == 1:
        return EpsSplit(y, ((y, eps + eta),))
    conjs = [f.conjugate() for f in fs]
    parts = near_minimizer(conjs, y, eta)
    gammas = [fy_residual(f, x, p) for f, p in zip(fs, parts)]
    eps1 = eps + eta - sum(gammas[1:], Fraction(0))
    if eps1 < gammas[0]:
        gap = inf_conv_value(conjs, y, lexmin=False).value - total.conjugate().evaluate(y)
        raise DecompositionError(f"split needs {sum(gammas, Fraction(0))} > budget {eps + eta}", gap)
    return EpsSplit(y, ((parts[0], eps1),) + tuple(zip(parts[1:], gammas[1:])))


def decompose_direction(fs: Sequence[PolyhedralFn], x: Sequence, r: Sequence) -> EpsSplit:
    """Split a recession direction of the sum's eps-subdifferential into block recession directions."""
    x, r = vec(x), vec(r)
    d = len(r)
    m = len(fs)
    n = m * d
    ineqs, rhs, eqs, erhs = [], [], [], []
    for i, f in enumerate(fs):
        rec = f.eps_subdiff(x, 1).recession_cone()
        for a, _ in rec.ineqs:
            row = [Fraction(0)] * n
            row[i * d:(i + 1) * d] = a
            ineqs.append(tuple(row))
            rhs.append(Fraction(0))
        for e, _ in rec.eqs:
            row = [Fraction(0)] * n
            row[i * d:(i + 1) * d] = e
            eqs.append(tuple(row))
            erhs.append(Fraction(0))
    for j in range(d):
        eqs.append(tuple(Fraction(int(k % d == j)) for k in range(n)))
        erhs.append(r[j])
    out = lp_solve(LpProblem((Fraction(0),) * n, tuple(ineqs), tuple(rhs), tuple(eqs), tuple(erhs)), lexmin=False)
    if not isinstance(out, Optimal):
        raise DecompositionError(f"direction {tuple(map(str, r))} does not split into block recession directions", None)
    parts = tuple((out.point[i * d:(i + 1) * d], Fraction(0)) for i in range(m))
    return EpsSplit(r, parts, ray=True)


def verify_split(fs: Sequence[ConvexFn], x: Sequence, split: EpsSplit, budget=None) -> bool:
    """Parts add up, each part sits in its block's eps_i-subdifferential (or recession cone), and the budget matches."""
    x = vec(x)
    d = len(split.point)
    if vsum((p for p, _ in split.parts), d) != split.point:
        return False
    if split.ray:
        return all(f.eps_subdiff(x, 1).contains_direction(p) for f, (p, _) in zip(fs, split.parts))
    if any(e < 0 for _, e in split.parts):
        return False
    if budget is not None and split.total_eps != budget:
        return False
    return all(fy_residual(f, x, p) <= e for f, (p, e) in zip(fs, split.parts))


def _sample_points(T: Polyhedron, d: int) -> list[Vec]:
    pts = [p for p in default_grid(d) if T.contains(p)]
    pts += [p for p in T.vrep.vertices if p not in pts]
    return pts


def condition_iv_check(fs: Sequence[ConvexFn], x: Sequence, eps, eta) -> Verdict:
    """Constructive sandwich for one ``(eps, eta)``.

    Every generator of the eps-subdifferential of the sum is split into a
    total budget of ``eps + eta`` (directions into block recession cones).
    Each assembled point is then checked to lie in the
    ``(eps + eta)``-subdifferential of the sum, and so is each sum of block
    subdifferentials at the split budgets.  With analytic members the
    generators are replaced by grid samples.
    """
    x, eps, eta = vec(x), rational(eps), rational(eta)
    total = fn_sum(fs)
    T = total.eps_subdiff(x, eps)
    if not isinstance(T, Polyhedron):
        raise MalformedInput("sum of this list has a non-polyhedral subdifferential")
    outer = total.eps_subdiff(x, eps + eta)
    analytic = any(isinstance(f, AnalyticFn) for f in fs)
    budget = eps + eta
    splits: list[EpsSplit] = []
    points = _sample_points(T, len(x)) if analytic else list(T.vrep.vertices)
    for v in points:
        s = decompose_subgradient(fs, x, v, eps, eta)
        if not verify_split(fs, x, s, budget) or not outer.contains(v):
            return Verdict(False, s, f"split of {tuple(map(str, v))} fails verification")
        splits.append(s)
    if not analytic:
        for r in T.vrep.rays:
            s = decompose_direction(fs, x, r)
            if not verify_split(fs, x, s) or not outer.contains_direction(r):
                return Verdict(False, s, f"direction {tuple(map(str, r))} fails verification")
            splits.append(s)
    seen = set()
    for s in splits:
        if s.ray or len(fs) == 1:
            continue
        key = tuple(e for _, e in s.parts)
        if key in seen:
            continue
        seen.add(key)
        if not region_includes(outer, sum_of_subdiffs(fs, x, key)):
            return Verdict(False, s, "sum at split budgets escapes the (eps+eta)-subdifferential")
    return Verdict(True, splits, f"{len(splits)} splits verified")


# -- sum rule and the sandwich ------------------------------------------------------

def sum_rule_check(fs: Sequence[ConvexFn], x: Sequence) -> Verdict:
    """Subdifferential of the sum versus the sum of subdifferentials; witness is ``(lhs, rhs)``."""
    x = vec(x)
    lhs = subdiff(fn_sum(fs), x)
    rhs = sum_eps_subdiffs(fs, x, 0)
    return Verdict(region_equals(lhs, rhs), (lhs, rhs))


def hup_sandwich_check(fs: Sequence[ConvexFn], x: Sequence, eta) -> Verdict:
    """``d(sum)(x)`` inside ``sum of d_eta f_i(x)`` inside ``d_{m*eta}(sum)(x)``."""
    x, eta = vec(x), rational(eta)
    total = fn_sum(fs)
    exact = subdiff(total, x)
    middle = sum_eps_subdiffs(fs, x, eta)
    outer = eps_subdiff(total, x, len(fs) * eta)
    if not region_includes(middle, exact):
        return Verdict(False, region_violation(middle, exact), "subdifferential of the sum escapes the eta-sum")
    if not region_includes(outer, middle):
        return Verdict(False, region_violation(outer, middle), "eta-sum escapes the (m*eta)-subdifferential")
    return Verdict(True, None, "both inclusions hold")


def general_inclusion_check(fs: Sequence[ConvexFn], x: Sequence, epss: Sequence) -> Verdict:
    """``sum d_{eps_i} f_i(x)`` inside ``d_{sum eps_i}(sum f)(x)``; needs no qualification."""
    x = vec(x)
    epss = [rational(e) for e in epss]
    inner = sum_of_subdiffs(fs, x, epss)
    outer = eps_subdiff(fn_sum(fs), x, sum(epss, Fraction(0)))
    ok = region_includes(outer, inner)
    return Verdict(ok, None if ok else region_violation(outer, inner))
