from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dualgap.calculus import inf_conv_value
from dualgap.catalog import ParabolaIndicator, halfplane_indicator
from dualgap.exact import INF, NEG_INF, MalformedInput, same_span
from dualgap.duality import (
    MonotropicInstance,
    PolyCone,
    Subspace,
    bertsekas_cq_check,
    build_dual,
    conjugate_route,
    duality_gap,
    gap_report,
    interiority_check,
    reformulate,
    solve_dual,
    solve_primal,
    transversality_check,
)
from dualgap.functions import PolyhedralFn
from dualgap.polyhedra import Polyhedron
from dualgap.regions import UnsupportedCombination
from oracles import lp_by_vertices
from strategies import boxed_functions, polyhedral_functions

F = Fraction
C = ParabolaIndicator()
D = halfplane_indicator()
ABS = PolyhedralFn.abs()


def ind(lo, hi):
    return PolyhedralFn.indicator(Polyhedron.box([lo], [hi]))


def halfline(sign):
    return PolyhedralFn.indicator(Polyhedron(1, [((-sign,), 0)]))


def diagonal(*fs):
    return MonotropicInstance(tuple(fs), Subspace.diagonal(fs[0].dim, len(fs)))


EX33 = diagonal(C, D)


class TestBuildDual:
    def test_diagonal_complement(self):
        dv = build_dual(diagonal(ABS, ind(1, 2)))
        assert same_span(list(dv.constraint.basis), [(1, -1)], 2)

    def test_orthant_is_self_dual(self):
        orthant = Polyhedron(2, [((-1, 0), 0), ((0, -1), 0)])
        inst = MonotropicInstance((ABS, ABS), PolyCone(orthant))
        assert build_dual(inst).constraint.cone.equals(orthant)

    def test_parabola_embedding(self):
        dv = build_dual(EX33)
        assert same_span(list(dv.constraint.basis), [(1, 0, -1, 0), (0, 1, 0, -1)], 4)
        assert isinstance(dv.blocks[0], type(C.conjugate()))

    def test_blocks_are_conjugated(self):
        dv = build_dual(diagonal(ABS, ABS))
        assert all(g.equals(ind(-1, 1)) for g in dv.blocks)

    def test_dimension_mismatch(self):
        with pytest.raises(MalformedInput):
            MonotropicInstance((ABS,), Subspace.diagonal(1, 2))


class TestValues:
    def test_abs_with_interval(self):
        inst = diagonal(ABS, ind(1, 2))
        p, d = solve_primal(inst), solve_dual(inst)
        assert p.value == 1 and p.attained and p.witness == (1, 1)
        assert d.value == 1 and d.attained
        # the dual optimum pairs y with -y across the two blocks
        y = d.witness
        assert y[0] + y[1] == 0 and -ABS.conjugate().evaluate(y[:1]) - ind(1, 2).conjugate().evaluate(y[1:]) == 1

    def test_dual_closed_form(self):
        # sup over |y| <= 1 of min(y, 2y)
        grid = [F(k, 100) for k in range(-100, 101)]
        assert max(min(y, 2 * y) for y in grid) == solve_dual(diagonal(ABS, ind(1, 2))).value

    def test_parabola_pair(self):
        p, d = solve_primal(EX33), solve_dual(EX33)
        assert p.value == 0 and p.attained and p.witness == (0, 0, 0, 0)
        assert d.value == 0 and d.attained and d.witness == (0, 0, 0, 0)

    def test_zero_functions(self):
        inst = diagonal(PolyhedralFn.zero(2), PolyhedralFn.zero(2))
        assert solve_primal(inst).value == 0 and solve_dual(inst).value == 0

    def test_infeasible(self):
        inst = diagonal(ind(0, 1), ind(2, 3))
        rep = gap_report(inst)
        assert rep.primal_value == INF
        assert rep.dual_value == INF
        assert rep.gap == 0

    def test_gap_arithmetic(self):
        assert duality_gap(F(3), F(1)) == 2
        assert duality_gap(INF, F(0)) == INF
        assert duality_gap(F(0), NEG_INF) == INF
        assert duality_gap(INF, INF) == 0

    def test_cone_instance(self):
        orthant = Polyhedron(2, [((-1, 0), 0), ((0, -1), 0)])
        inst = MonotropicInstance((ABS, ind(-3, 5)), PolyCone(orthant))
        rep = gap_report(inst)
        assert rep.primal_value == 0 == rep.dual_value

    def test_gap_report_example(self):
        rep = gap_report(EX33)
        assert rep.gap == 0
        assert rep.cross_check == {"primal": 0, "dual": 0}


class TestConstraintQualifications:
    def test_bertsekas_polyhedral(self):
        inst = diagonal(ABS, halfline(1))
        assert bertsekas_cq_check(inst, (0, 0), 1).holds

    @pytest.mark.parametrize("eps", [F(1, 2), F(1), F(5)])
    def test_bertsekas_parabola_pair(self, eps):
        v = bertsekas_cq_check(EX33, (0, 0, 0, 0), eps)
        assert v.holds and "R^2" in v.witness

    def test_bertsekas_single_zero(self):
        inst = MonotropicInstance((PolyhedralFn.zero(2),), Subspace(2, ((F(1), F(0)), (F(0), F(1)))))
        assert bertsekas_cq_check(inst, (0, 0), 1).holds

    def test_bertsekas_rejects_infeasible_point(self):
        with pytest.raises(MalformedInput):
            bertsekas_cq_check(diagonal(ABS, halfline(1)), (0, 1), 1)

    def test_interiority(self):
        v = interiority_check([ABS, halfline(1)])
        assert v.holds and v.witness[0] > 0
        assert not interiority_check([C, D]).holds
        assert not interiority_check([ind(0, 1), ind(1, 2)]).holds

    def test_interiority_parabola_positive_case(self):
        v = interiority_check([C, PolyhedralFn.zero(2)])
        assert v.holds and 2 * v.witness[0] + v.witness[1] ** 2 < 0

    def test_interiority_analytic_later_is_unsupported(self):
        with pytest.raises(UnsupportedCombination):
            interiority_check([D, C])

    def test_transversality(self):
        whole = PolyhedralFn.zero(2)
        v = transversality_check(whole, whole)
        assert v.holds and len(v.witness) == 2
        assert transversality_check(ind(0, 1), ind(0, 1)).holds
        origin = PolyhedralFn.indicator(Polyhedron.point((0,)))
        assert not transversality_check(halfline(1), origin).holds

    def test_transversality_analytic_unsupported(self):
        with pytest.raises(UnsupportedCombination):
            transversality_check(C, D)


class TestCounterexamplePin:
    def test_four_flags(self):
        rep = gap_report(EX33)
        cq = rep.cq_diagnostics
        assert cq["bertsekas"].holds is True
        assert cq["closed_epigraph"].holds is False
        assert cq["closed_epigraph"].witness == (1, 1, 0)
        assert rep.gap == 0
        res = inf_conv_value([f.conjugate() for f in reformulate(EX33)], (1, 1))
        assert res.value == 0 and not res.attained
        assert cq["exactness"].holds is False
        w = cq["exactness"].witness
        assert not inf_conv_value([f.conjugate() for f in reformulate(EX33)], w).attained
        assert cq["condition_ii"].holds is True
        assert cq["interiority"].holds is False


def _pair_primal_oracle(a, b):
    """min over x of f(x) + g(x) for two boxed piecewise functions of one variable."""
    (fa, pa, la, ha), (fb, pb, lb, hb) = a, b
    big = F(10 ** 6)
    # variables (x, s, t): s >= pieces of f, t >= pieces of g
    rows = [((1, 0, 0), F(min(ha[0], hb[0]))), ((-1, 0, 0), -F(max(la[0], lb[0])))]
    rows += [((sl[0], -1, 0), -F(c)) for sl, c in pa]
    rows += [((sl[0], 0, -1), -F(c)) for sl, c in pb]
    rows += [((0, 1, 0), big), ((0, 0, 1), big)]
    best = lp_by_vertices((0, 1, 1), 3, rows)
    return INF if best is None else best


class TestProperties:
    @given(boxed_functions(1), boxed_functions(1))
    def test_primal_matches_oracle(self, a, b):
        inst = diagonal(a[0], b[0])
        assert solve_primal(inst).value == _pair_primal_oracle(a, b)

    @given(st.lists(polyhedral_functions(1), min_size=1, max_size=3))
    def test_weak_duality_and_routes_diagonal(self, fs):
        inst = diagonal(*fs)
        p, d = solve_primal(inst).value, solve_dual(inst).value
        assert d <= p
        cp, cd = conjugate_route(inst)
        assert (cp, cd) == (p, d)
        if p != INF and d != NEG_INF:
            assert p == d

    @given(st.lists(polyhedral_functions(1), min_size=2, max_size=3), st.data())
    def test_weak_duality_cone(self, fs, data):
        m = len(fs)
        gens = data.draw(st.lists(st.tuples(*[st.integers(-2, 2)] * m), min_size=1, max_size=3))
        inst = MonotropicInstance(tuple(fs), PolyCone(Polyhedron.cone(m, [tuple(map(F, g)) for g in gens])))
        p, d = solve_primal(inst).value, solve_dual(inst).value
        assert d <= p
        assert conjugate_route(inst) == (p, d)

    @given(st.lists(polyhedral_functions(1), min_size=2, max_size=2))
    def test_implication_chain(self, fs):
        inst = diagonal(*fs)
        if solve_primal(inst).value == INF:
            return
        cq = gap_report(inst).cq_diagnostics
        if cq["interiority"].holds:
            assert cq["bertsekas"].holds
        assert cq["closed_epigraph"].holds
        assert cq["condition_ii"].holds and cq["exactness"].holds
