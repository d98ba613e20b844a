from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dualgap.calculus import (
    biconjugate_check,
    default_grid,
    epi_conj_sum,
    fenchel_young_gap,
    fn_sum,
    inf_conv_value,
    near_minimizer,
)
from dualgap.catalog import ParabolaConjugate, ParabolaIndicator, halfplane_indicator
from dualgap.exact import INF
from dualgap.functions import ImproperFunction, PolyhedralFn
from dualgap.polyhedra import Polyhedron
from dualgap.regions import UnsupportedCombination, region_contains
from dualgap.subdiff import subdiff
from oracles import conjugate_on_box, piecewise_value
from strategies import boxed_functions, polyhedral_functions, rationals, vectors

F = Fraction
C = ParabolaIndicator()
D = halfplane_indicator()


def ind(lo, hi):
    return PolyhedralFn.indicator(Polyhedron.box([lo], [hi]))


def halfline(sign):
    # sign=+1: [0, inf); sign=-1: (-inf, 0]
    return PolyhedralFn.indicator(Polyhedron(1, [((-sign,), 0)]))


class TestEvaluate:
    def test_parabola_indicator(self):
        assert C.evaluate((0, 0)) == 0
        assert C.evaluate((F(-1, 2), 1)) == 0
        assert C.evaluate((F(-1, 2), 2)) == INF

    def test_abs(self):
        assert PolyhedralFn.abs().evaluate((-3,)) == 3

    def test_improper_rejected(self):
        with pytest.raises(ImproperFunction):
            PolyhedralFn.indicator(Polyhedron(1, [((1,), -1), ((-1,), -1)]))


class TestConjugate:
    def test_halfline_indicators_are_polar(self):
        assert halfline(1).conjugate().equals(halfline(-1))

    def test_abs_gives_interval_indicator(self):
        assert PolyhedralFn.abs().conjugate().equals(ind(-1, 1))

    @pytest.mark.parametrize("a,b", [(1, 1), (2, -3), (F(1, 2), 1), (3, 0), (1, F(-1, 2))])
    def test_parabola_closed_form_against_grid(self, a, b):
        a, b = F(a), F(b)
        closed = ParabolaConjugate().evaluate((a, b))
        # sup of a x + b y over C is approached on the boundary x = -y^2/2; sample y on a fine grid
        grid = [F(k, 12) for k in range(-120, 121)]
        best = max(a * (-y * y / 2) + b * y for y in grid)
        assert best <= closed
        assert best == closed  # b/a lies on the grid for these duals

    @pytest.mark.parametrize("a,b", [(0, 1), (-1, 0), (-1, 2), (0, -3)])
    def test_parabola_conjugate_infinite(self, a, b):
        assert ParabolaConjugate().evaluate((a, b)) == INF
        a, b = F(a), F(b)
        # the objective is unbounded on C: grows past any bound along the boundary
        y = F(1000) * (1 if b >= 0 else -1)
        x = -y * y / 2 if a >= 0 else F(-10 ** 6)
        assert a * x + b * y > 100

    def test_parabola_conjugate_at_origin(self):
        assert ParabolaConjugate().evaluate((0, 0)) == 0

    @given(boxed_functions(), st.data())
    def test_polyhedral_conjugate_matches_vertex_oracle(self, fn, data):
        f, pieces, lo, hi = fn
        y = data.draw(vectors(f.dim))
        assert f.conjugate().evaluate(y) == conjugate_on_box(pieces, lo, hi, y)

    @given(boxed_functions(), st.data())
    def test_evaluate_matches_pieces(self, fn, data):
        f, pieces, lo, hi = fn
        x = data.draw(vectors(f.dim))
        inside = all(l <= c <= h for l, c, h in zip(lo, x, hi))
        assert f.evaluate(x) == (piecewise_value(pieces, x) if inside else INF)


class TestBiconjugate:
    def test_examples(self):
        assert biconjugate_check(PolyhedralFn.abs())
        assert biconjugate_check(PolyhedralFn.indicator(Polyhedron.box([0, 0], [1, 1])))
        assert biconjugate_check(C)

    @given(polyhedral_functions())
    def test_polyhedral(self, f):
        assert biconjugate_check(f)


class TestSum:
    def test_abs_plus_halfline(self):
        h = fn_sum([PolyhedralFn.abs(), halfline(1)])
        for x in (F(-1), F(0), F(1, 2), F(3)):
            assert h.evaluate((x,)) == (x if x >= 0 else INF)

    def test_zero_is_neutral(self):
        f = PolyhedralFn.abs()
        assert fn_sum([f, PolyhedralFn.zero(1)]).equals(f)

    def test_parabola_plus_halfplane_is_origin_indicator(self):
        h = fn_sum([C, D])
        assert h.equals(PolyhedralFn.indicator(Polyhedron.point((0, 0))))

    def test_zero_is_neutral_for_analytic(self):
        assert fn_sum([C, PolyhedralFn.zero(2)]) is C

    def test_unsupported_analytic_mixture(self):
        with pytest.raises(UnsupportedCombination):
            fn_sum([C, PolyhedralFn.indicator(Polyhedron.box([-1, -1], [1, 1]))])
        with pytest.raises(UnsupportedCombination):
            fn_sum([C, C])

    def test_disjoint_domains(self):
        with pytest.raises(ImproperFunction):
            fn_sum([ind(0, 1), ind(2, 3)])


class TestInfConv:
    def test_parabola_pair_not_attained(self):
        res = inf_conv_value([C.conjugate(), D.conjugate()], (1, 1))
        assert res.value == 0 and not res.attained and res.witness is None

    @pytest.mark.parametrize("eta", [F(1), F(1, 4), F(1, 100)])
    def test_near_minimizer_within_eta(self, eta):
        gs = [C.conjugate(), D.conjugate()]
        split = near_minimizer(gs, (1, 1), eta)
        assert tuple(a + b for a, b in zip(*split)) == (1, 1)
        assert sum(g.evaluate(p) for g, p in zip(gs, split)) <= eta

    def test_origin_indicator_is_unit(self):
        unit = PolyhedralFn.indicator(Polyhedron.point((0,)))
        for y in (F(-2), F(-1), F(1, 2), F(2)):
            res = inf_conv_value([ind(-1, 1), unit], (y,))
            assert res.value == ind(-1, 1).evaluate((y,))
            assert res.attained

    def test_interval_and_halfline(self):
        res = inf_conv_value([ind(-1, 1), halfline(-1)], (F(1, 2),))
        assert res.value == 0 and res.attained
        assert res.witness == ((F(1, 2),), (F(0),))
        assert inf_conv_value([ind(-1, 1), halfline(-1)], (2,)).value == INF

    @given(st.lists(polyhedral_functions(2), min_size=2, max_size=3), vectors(2))
    def test_inf_conv_dominates_conjugate_of_sum(self, fs, y):
        try:
            s = fn_sum(fs)
        except ImproperFunction:
            return
        conjs = [f.conjugate() for f in fs]
        res = inf_conv_value(conjs, y)
        assert res.value >= s.conjugate().evaluate(y)
        # all-polyhedral lists: equality and attainment wherever finite
        assert res.value == s.conjugate().evaluate(y)
        if res.value != INF:
            assert res.attained
            assert sum(g.evaluate(p) for g, p in zip(conjs, res.witness)) == res.value


class TestEpigraphSum:
    def test_polyhedral_closed(self):
        assert epi_conj_sum([PolyhedralFn.abs(), halfline(1)]).closed

    def test_parabola_pair_not_closed(self):
        es = epi_conj_sum([C, D])
        assert not es.closed
        assert es.witness == (1, 1, 0)
        assert es.region.in_closure(es.witness) and not es.region.contains(es.witness)


class TestFenchelYoung:
    @given(polyhedral_functions(), st.data())
    def test_inequality_and_equality_case(self, f, data):
        x = data.draw(vectors(f.dim))
        y = data.draw(vectors(f.dim))
        gap = fenchel_young_gap(f, x, y)
        assert gap >= 0
        if f.evaluate(x) != INF:
            assert (gap == 0) == subdiff(f, x).contains(y)

    def test_parabola_grid(self):
        for x in [(F(-1, 2), F(1)), (F(0), F(0)), (F(-2), F(1))]:
            for y in default_grid(2):
                gap = fenchel_young_gap(C, x, y)
                assert gap >= 0
                assert (gap == 0) == region_contains(C.eps_subdiff(x, 0), y)


class TestOrderReversal:
    @given(polyhedral_functions(1), rationals, st.data())
    def test_adding_a_constant(self, f, c, data):
        # f <= f + |c| pointwise, so the conjugates reverse the order
        up = abs(c)
        g = PolyhedralFn(Polyhedron(2, [(a, b + a[1] * up) for a, b in f.epi.ineqs],
                                    [(e, d + e[1] * up) for e, d in f.epi.eqs]))
        assert g.evaluate((F(0),)) == f.evaluate((F(0),)) + up
        y = data.draw(vectors(1))
        assert f.conjugate().evaluate(y) >= g.conjugate().evaluate(y)

    @given(polyhedral_functions(1), st.data())
    def test_restricting_the_domain(self, f, data):
        g = fn_sum([f, ind(-1, 1)])
        y = data.draw(vectors(1))
        assert all(f.evaluate((x,)) <= g.evaluate((x,)) for x in (F(-1), F(0), F(1, 2)))
        assert f.conjugate().evaluate(y) >= g.conjugate().evaluate(y)
