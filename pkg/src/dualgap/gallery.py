"""Reproduction gallery: the parabola/half-plane example, seeded polyhedral
sweeps, sublinear sweeps, and the qualification evidence matrix.

Each entry returns a :class:`Report`; the gallery passes when no row fails.
"""
from __future__ import annotations

from fractions import Fraction

from .calculus import default_grid, epi_conj_sum, fn_sum, inf_conv_value, near_minimizer
from .duality import (
    MonotropicInstance,
    Subspace,
    closed_epigraph_check,
    exactness_check,
    gap_report,
    sample_duals,
)
from .exact import INF, NEG_INF, fmt, unit, zeros
from .functions import PolyhedralFn, conjugate_epigraph, inf_conv_epigraph
from .generators import polyhedral_family, sublinear_family
from .instance import loads, packaged, packaged_corpus
from .polyhedra import Polyhedron, minkowski_sum_all
from .regions import region_closed, region_contains, region_equals, region_sum
from .report import Report, row
from .subdiff import (
    condition_i_check,
    condition_ii_check,
    condition_iv_check,
    eps_subdiff,
    hup_sandwich_check,
    least_sufficient_K,
    subdiff,
    sum_of_subdiffs,
    sum_rule_check,
)

GALLERIES = ("example33", "polyhedral-demo", "sublinear-demo", "cq-matrix")


class UnknownGallery(ValueError):
    pass


def run_gallery(name: str, seed: int = 0, count: int | None = None) -> Report:
    if name == "example33":
        return parabola_example()
    if name == "polyhedral-demo":
        return polyhedral_demo(seed, 10 if count is None else count)
    if name == "sublinear-demo":
        return sublinear_demo(seed, 8 if count is None else count)
    if name == "cq-matrix":
        return cq_matrix()
    raise UnknownGallery(f"unknown gallery {name!r}; expected one of {', '.join(GALLERIES)}")


# -- the parabola / half-plane example -------------------------------------------

_BOUNDARY_EPS = (Fraction(1, 8), Fraction(1, 2), Fraction(9, 8), Fraction(2))
_EPS = (Fraction(1, 2), Fraction(1), Fraction(2))


def _sqrt(q: Fraction) -> Fraction:
    from math import isqrt

    n, d = isqrt(q.numerator), isqrt(q.denominator)
    assert Fraction(n, d) ** 2 == q
    return Fraction(n, d)


def parabola_example() -> Report:
    parsed = loads(packaged("example33.json"))
    f, g = parsed.instance.blocks
    origin = zeros(2)
    rep = Report("parabola indicator and half-plane indicator")

    # (a) (1, s) is in the eps-subdifferential of f at 0 iff s^2 <= 2 eps
    tested, bad = 0, None
    for eps in _BOUNDARY_EPS:
        R = eps_subdiff(f, origin, eps)
        s = _sqrt(2 * eps)
        for t in (s, -s, s + Fraction(1, 100), s + 1, Fraction(0), s / 2):
            tested += 1
            if region_contains(R, (Fraction(1), t)) != (t * t <= 2 * eps):
                bad = bad or (eps, t)
        for a in (Fraction(1, 2), Fraction(2)):
            for b in (Fraction(-3), Fraction(-1), Fraction(1, 3), Fraction(2)):
                tested += 1
                if region_contains(R, (a, b)) != (b * b <= 2 * eps * a):
                    bad = bad or (eps, (a, b))
    rep.add(row("a_parabolic_membership", bad is None, f"{tested} memberships agree" if bad is None else "mismatch",
                bad if bad is not None else (Fraction(1), Fraction(1)),
                "boundary points (1, sqrt(2 eps)) at eps in {1/8, 1/2, 9/8, 2}; witness is the boundary point at eps = 1/2"))

    # (b) eps-subdifferential of g at 0 is (-inf, 0] x {0}
    half_line = Polyhedron(2, [((1, 0), 0)], [((0, 1), 0)])
    ok = all(region_equals(eps_subdiff(g, origin, e), half_line) for e in _EPS + (Fraction(0),))
    rep.add(row("b_halfline_subdifferential", ok, half_line.describe(), None, "checked at eps in {0, 1/2, 1, 2}"))

    # (c) the eps-sum is the whole plane
    plane = Polyhedron.universe(2)
    ok = all(region_equals(region_sum(eps_subdiff(g, origin, e), eps_subdiff(f, origin, e)), plane) for e in _EPS)
    rep.add(row("c_eps_sum_is_plane", ok, "R^2", None, "checked at eps in {1/2, 1, 2}"))

    # (d) conjugate of the sum and the inf-convolution vanish; no minimizer at (1, 1)
    conj_sum = fn_sum([f, g]).conjugate()
    conjs = [f.conjugate(), g.conjugate()]
    grid = default_grid(2)
    ok = all(conj_sum.evaluate(y) == 0 and inf_conv_value(conjs, y).value == 0 for y in grid)
    at11 = inf_conv_value(conjs, (Fraction(1), Fraction(1)))
    split = near_minimizer(conjs, (Fraction(1), Fraction(1)), Fraction(1, 100))
    ok = ok and not at11.attained and sum(c.evaluate(p) for c, p in zip(conjs, split)) == Fraction(1, 100)
    rep.add(row("d_conjugates_and_non_attainment", ok, f"0 on {len(grid)} grid points; attained at (1, 1): false",
                split, at11.certificate + "; witness is a split of (1, 1) with value 1/100"))

    # (e) the sum rule fails at the origin
    lhs = subdiff(fn_sum([f, g]), origin)
    rhs = sum_of_subdiffs([f, g], origin, [0, 0])
    line = Polyhedron(2, eqs=[((0, 1), 0)])
    ok = region_equals(lhs, plane) and region_equals(rhs, line) and not region_equals(lhs, rhs)
    rep.add(row("e_sum_rule_fails", ok, "R^2 vs R x {0}", (0, 1),
                "(0, 1) is a subgradient of the sum but not a sum of subgradients"))

    # (f) the conjugate-epigraph sum is not closed
    es = epi_conj_sum([f, g])
    w = es.witness
    ok = not es.closed and es.region.in_closure(w) and not es.region.contains(w)
    rep.add(row("f_epigraph_sum_not_closed", ok, "not closed", w, es.certificate))
    return rep


# -- seeded polyhedral sweep -----------------------------------------------------------

def _diagonal_instance(fs, name: str) -> MonotropicInstance:
    return MonotropicInstance(tuple(fs), Subspace.diagonal(fs[0].dim, len(fs)), name)


def polyhedral_checks(fs, points) -> dict[str, bool]:
    """Condition battery, sandwich, sum rule and exactness for one polyhedral list."""
    m = len(fs)
    d = fs[0].dim
    duals = sample_duals(d)
    out = {"condition_ii": condition_ii_check(fs, duals).holds, "exactness": exactness_check(fs, duals).holds}
    flags = {"condition_i": True, "K_m_plus_1": True, "condition_iv": True, "sandwich": True, "sum_rule": True}
    for x in points:
        flags["condition_i"] &= condition_i_check(fs, x, 1, 1).holds
        K = least_sufficient_K(fs, x, Fraction(1, 2))
        flags["K_m_plus_1"] &= K is not None and K <= m + 1
        for eps in (Fraction(0), Fraction(1, 2)):
            for eta in (Fraction(1), Fraction(1, 4)):
                flags["condition_iv"] &= condition_iv_check(fs, x, eps, eta).holds
        flags["sandwich"] &= hup_sandwich_check(fs, x, Fraction(1, 2)).holds
        flags["sum_rule"] &= sum_rule_check(fs, x).holds
    out.update(flags)
    return out


def polyhedral_demo(seed: int = 0, count: int = 10) -> Report:
    rep = Report(f"polyhedral sweep (seed {seed}, {count} instances)")
    shipped = loads(packaged("poly_demo.json"))
    g = gap_report(shipped.instance, diagnostics=False)
    rep.add(row("shipped_poly_demo_gap", g.gap == 0, f"p={g.primal_value} d={g.dual_value} gap={g.gap}",
                {"primal": g.primal_witness, "dual": g.dual_witness}, "LP values on both sides"))
    for member in polyhedral_family(seed, count):
        flags = polyhedral_checks(member.functions, member.points)
        g = gap_report(_diagonal_instance(member.functions, f"sweep {member.index}"), diagnostics=False)
        bounded = g.primal_value not in (INF, NEG_INF)
        flags["zero_gap"] = g.gap == 0 if bounded else True
        failed = [k for k, v in flags.items() if not v]
        rep.add(row(
            f"instance_{member.index}", not failed,
            f"d={member.dim} m={len(member.functions)} p={g.primal_value} d*={g.dual_value}",
            failed or [fmt(p) for p in member.points],
            ("failed: " + ", ".join(failed)) if failed else "passed: " + ", ".join(flags),
        ))
    return rep


# -- sublinear sweep ------------------------------------------------------------------

SUBLINEAR_FLAGS = (
    "i_condition_i", "ii_sum_at_origin_closed", "iii_conjugate_identity", "iv_infconv_lsc",
    "v_eps_sum_formula", "vi_epigraph_sum_closed", "vii_identity_and_exact", "viii_sum_rule",
)


def sublinear_flags(d: int, polys, fs) -> dict[str, bool]:
    origin = zeros(d)
    points = [origin, unit(d, 0)]
    duals = sample_duals(d)
    flags = {}
    flags["i_condition_i"] = all(
        condition_i_check(fs, x, e, 1).holds for x in points for e in (Fraction(1, 2), Fraction(1))
    )
    at0 = sum_of_subdiffs(fs, origin, [0] * len(fs))
    flags["ii_sum_at_origin_closed"] = region_closed(at0) and region_equals(at0, minkowski_sum_all(polys, d))
    ii = condition_ii_check(fs, duals).holds
    flags["iii_conjugate_identity"] = ii
    conv = inf_conv_epigraph([f.conjugate() for f in fs])
    flags["iv_infconv_lsc"] = conjugate_epigraph(PolyhedralFn(conjugate_epigraph(conv)).epi).equals(conv)
    flags["v_eps_sum_formula"] = all(
        condition_iv_check(fs, x, e, Fraction(1, 4)).holds for x in points for e in (Fraction(0), Fraction(1, 2))
    )
    flags["vi_epigraph_sum_closed"] = closed_epigraph_check(fs).holds
    flags["vii_identity_and_exact"] = ii and exactness_check(fs, duals).holds
    flags["viii_sum_rule"] = all(sum_rule_check(fs, x).holds for x in points)
    return flags


def sublinear_demo(seed: int = 0, count: int = 8) -> Report:
    rep = Report(f"sublinear sweep (seed {seed}, {count} instances)")
    for k, (d, polys, fs) in enumerate(sublinear_family(seed, count)):
        flags = sublinear_flags(d, polys, fs)
        bits = "".join("T" if flags[n] else "F" for n in SUBLINEAR_FLAGS)
        consistent = len(set(flags.values())) == 1
        rep.add(row(f"instance_{k}", consistent and all(flags.values()), f"d={d} m={len(fs)} flags={bits}",
                    [p.describe() for p in polys], "flag order: " + ", ".join(SUBLINEAR_FLAGS)))
    return rep


# -- qualification evidence -------------------------------------------------------------

def _corpus():
    yield "example33.json", loads(packaged("example33.json"))
    yield "poly_demo.json", loads(packaged("poly_demo.json"))
    for name, text in packaged_corpus():
        yield name, loads(text)


def _flag(v) -> str:
    return "-" if v is None else ("T" if v else "F")


MATRIX_COLUMNS = ("interiority", "bertsekas", "closed_epigraph", "condition_ii", "exactness", "transversality")


def cq_matrix() -> Report:
    """Joint flags per corpus instance; a row fails only if a known implication is violated."""
    rep = Report("constraint qualification evidence")
    separating = None
    for name, parsed in _corpus():
        inst = parsed.instance
        g = gap_report(inst, diagnostics=True)
        flags = {k: g.cq_diagnostics[k].holds if k in g.cq_diagnostics else None for k in MATRIX_COLUMNS}
        broken = []
        if flags["interiority"] and flags["bertsekas"] is False:
            broken.append("interiority without bertsekas")
        feasible = g.primal_value != INF
        # the polyhedral implication presumes the domains share a point
        if inst.all_polyhedral and feasible and not (flags["closed_epigraph"] and flags["condition_ii"] and flags["exactness"]):
            broken.append("polyhedral instance without closed epigraph sum, condition_ii and exactness")
        if flags["closed_epigraph"] and flags["condition_ii"] is False:
            broken.append("closed epigraph sum without condition_ii")
        finite = g.primal_value not in (INF, NEG_INF)
        if finite and (flags["bertsekas"] or flags["closed_epigraph"]) and g.gap != 0:
            broken.append("qualified instance with a duality gap")
        text = " ".join(f"{k}={_flag(flags[k])}" for k in MATRIX_COLUMNS) + f" gap={g.gap}"
        rep.add(row(name, not broken, text, broken or None, inst.name))
        if flags["bertsekas"] and flags["closed_epigraph"] is False:
            separating = separating or name
    rep.add(row("separating_instance", separating == "example33.json", separating or "none",
                None, "bertsekas holds while the epigraph sum is not closed"))
    return rep
