from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dualgap.calculus import default_grid, fn_sum
from dualgap.catalog import ParabolaIndicator, halfplane_indicator
from dualgap.exact import INF, MalformedInput
from dualgap.functions import ImproperFunction, PolyhedralFn
from dualgap.polyhedra import Polyhedron
from dualgap.regions import region_contains, region_equals, region_includes
from dualgap.subdiff import (
    DecompositionError,
    condition_i_check,
    condition_ii_check,
    condition_iv_check,
    decompose_subgradient,
    eps_subdiff,
    fy_residual,
    general_inclusion_check,
    hup_sandwich_check,
    least_sufficient_K,
    subdiff,
    sum_eps_subdiffs,
    sum_rule_check,
    verify_split,
)
from strategies import nonneg, polyhedral_functions, polytopes, vectors

F = Fraction
C = ParabolaIndicator()
D = halfplane_indicator()
ABS = PolyhedralFn.abs()
ORIGIN = (F(0), F(0))


def halfline(sign):
    return PolyhedralFn.indicator(Polyhedron(1, [((-sign,), 0)]))


def ray_to(hi):
    """(-inf, hi] on the line."""
    return Polyhedron(1, [((1,), F(hi))])


PAIR = [ABS, halfline(1)]


class TestEpsSubdiff:
    @pytest.mark.parametrize("eps,edge", [(F(1, 2), 1), (F(2), 2), (F(9, 2), 3)])
    def test_parabola_membership(self, eps, edge):
        # edge = sqrt(2 eps) at u = 1
        R = eps_subdiff(C, ORIGIN, eps)
        assert region_contains(R, (1, edge)) and region_contains(R, (1, -edge))
        assert not region_contains(R, (1, edge + 1))

    def test_halfplane_at_origin(self):
        for eps in (F(0), F(1)):
            assert eps_subdiff(D, ORIGIN, eps).equals(Polyhedron(2, [((1, 0), 0)], [((0, 1), 0)]))

    @pytest.mark.parametrize("eps", [F(0), F(1, 3), F(2)])
    def test_halfline_at_one_by_brute_force(self, eps):
        R = eps_subdiff(halfline(1), (1,), eps)
        assert R.equals(Polyhedron.box([-eps], [0]))
        probes = [F(k, 3) for k in range(0, 91)]
        for y in [F(k, 6) for k in range(-18, 7)]:
            inside = all(y * (xp - 1) <= eps for xp in probes)
            assert R.contains((y,)) == inside

    def test_outside_domain_is_empty(self):
        assert eps_subdiff(halfline(1), (-1,), 1).is_empty


class TestSubdiff:
    def test_abs_at_zero(self):
        assert subdiff(ABS, (0,)).equals(Polyhedron.box([-1], [1]))

    def test_parabola_at_origin(self):
        R = subdiff(C, ORIGIN)
        expected = Polyhedron(2, [((-1, 0), 0)], [((0, 1), 0)])
        assert region_equals(R, expected)

    def test_point_indicator_is_everything(self):
        f = PolyhedralFn.indicator(Polyhedron.point(ORIGIN))
        assert subdiff(f, ORIGIN).equals(Polyhedron.universe(2))


class TestSums:
    @pytest.mark.parametrize("eps", [F(1, 4), F(1), F(3)])
    def test_parabola_pair_is_the_plane(self, eps):
        S = sum_eps_subdiffs([C, D], ORIGIN, eps)
        assert S.is_whole_plane
        assert region_includes(S, Polyhedron.universe(2))

    def test_parabola_pair_at_zero_is_a_line(self):
        S = sum_eps_subdiffs([C, D], ORIGIN, 0)
        assert region_equals(S, Polyhedron(2, eqs=[((0, 1), 0)]))

    def test_abs_and_halfline(self):
        assert sum_eps_subdiffs(PAIR, (0,), 0).equals(ray_to(1))

    @given(polyhedral_functions(1), nonneg)
    def test_single_function(self, f, eps):
        x = (F(0),)
        if not f.in_domain(x):
            return
        assert sum_eps_subdiffs([f], x, eps).equals(eps_subdiff(f, x, eps))


class TestConditionI:
    @pytest.mark.parametrize("eps", [F(1, 2), F(2)])
    def test_parabola_pair_holds_with_K_one(self, eps):
        assert condition_i_check([C, D], ORIGIN, eps, 1).holds

    def test_polyhedral_pair(self):
        assert condition_i_check(PAIR, (0,), F(1, 2), 1).holds
        assert least_sufficient_K(PAIR, (0,), F(1, 2)) == 1

    def test_bad_parameters(self):
        with pytest.raises(MalformedInput):
            condition_i_check(PAIR, (0,), 0, 1)
        with pytest.raises(MalformedInput):
            condition_i_check(PAIR, (0,), 1, F(1, 2))

    @given(st.lists(polyhedral_functions(1), min_size=1, max_size=3), nonneg)
    def test_K_bounded_by_m_plus_one(self, fs, eps):
        x = (F(0),)
        if eps == 0 or not all(f.in_domain(x) for f in fs):
            return
        K = least_sufficient_K(fs, x, eps)
        assert K is not None and K <= len(fs) + 1


class TestConditionII:
    def test_parabola_pair(self):
        assert condition_ii_check([C, D], default_grid(2)).holds

    def test_polyhedral_pair_globally(self):
        v = condition_ii_check(PAIR, [(F(0),), (F(1),), (F(-3),)])
        assert v.holds and "epigraphs" in v.detail

    def test_single(self):
        assert condition_ii_check([ABS], [(F(5),)]).holds

    def test_needs_samples(self):
        with pytest.raises(MalformedInput):
            condition_ii_check(PAIR, [])


class TestDecomposition:
    @pytest.mark.parametrize("eta", [F(1), F(1, 10)])
    def test_polyhedral_exact_split(self, eta):
        s = decompose_subgradient(PAIR, (0,), (1,), 0, eta)
        assert s.point == (1,)
        assert verify_split(PAIR, (0,), s, eta)
        assert all(fy_residual(f, (F(0),), p) == 0 for f, (p, _) in zip(PAIR, s.parts))

    @pytest.mark.parametrize("eta", [F(1, 2), F(1, 4), F(1, 100), F(2)])
    def test_parabola_split_within_budget(self, eta):
        s = decompose_subgradient([C, D], ORIGIN, (1, 1), 0, eta)
        assert verify_split([C, D], ORIGIN, s, eta)
        (p1, e1), (p2, e2) = s.parts
        assert p2[1] == 0 and p1[1] == 1
        assert e2 == 0 and e1 == eta
        assert fy_residual(C, ORIGIN, p1) <= eta

    def test_single_part(self):
        s = decompose_subgradient([ABS], (0,), (F(1, 2),), 0, F(1, 3))
        assert s.parts == (((F(1, 2),), F(1, 3)),)

    def test_rejects_non_subgradient(self):
        with pytest.raises(MalformedInput):
            decompose_subgradient(PAIR, (0,), (2,), 0, 1)
        with pytest.raises(MalformedInput):
            decompose_subgradient(PAIR, (0,), (1,), 0, 0)

    def test_error_type_carries_gap(self):
        err = DecompositionError("no split", F(1))
        assert err.gap == 1 and isinstance(err, ValueError)

    @given(st.lists(polyhedral_functions(1), min_size=1, max_size=3), vectors(1), nonneg,
           st.sampled_from([F(1), F(1, 2), F(1, 7)]))
    def test_round_trip(self, fs, y, eps, eta):
        x = (F(0),)
        try:
            total = fn_sum(fs)
        except ImproperFunction:
            return
        r = fy_residual(total, x, y)
        if r == INF or r > eps:
            return
        s = decompose_subgradient(fs, x, y, eps, eta)
        assert s.point == y
        assert sum((p[0] for p, _ in s.parts), F(0)) == y[0]
        assert s.total_eps == eps + eta
        assert all(fy_residual(f, x, p) <= e for f, (p, e) in zip(fs, s.parts))


class TestConditionIV:
    def test_polyhedral_pair(self):
        v = condition_iv_check(PAIR, (0,), 0, F(1, 2))
        assert v.holds
        vertex_splits = [s for s in v.witness if not s.ray]
        ray_splits = [s for s in v.witness if s.ray]
        assert [s.point for s in vertex_splits] == [(F(1),)]
        assert [s.point for s in ray_splits] == [(F(-1),)]

    @pytest.mark.parametrize("eta", [F(1), F(1, 4), F(1, 100)])
    def test_parabola_pair(self, eta):
        v = condition_iv_check([C, D], ORIGIN, 0, eta)
        assert v.holds and len(v.witness) >= 1
        assert all(verify_split([C, D], ORIGIN, s, eta) for s in v.witness)

    def test_single(self):
        assert condition_iv_check([ABS], (0,), F(1, 2), F(1, 2)).holds


class TestSumRule:
    def test_parabola_pair_fails(self):
        v = sum_rule_check([C, D], ORIGIN)
        lhs, rhs = v.witness
        assert not v.holds
        assert region_equals(lhs, Polyhedron.universe(2))
        assert region_equals(rhs, Polyhedron(2, eqs=[((0, 1), 0)]))

    def test_polyhedral_pair(self):
        v = sum_rule_check(PAIR, (0,))
        assert v.holds and v.witness[0].equals(ray_to(1))

    def test_single(self):
        assert sum_rule_check([ABS], (F(2),)).holds

    @given(st.lists(polyhedral_functions(2), min_size=1, max_size=3), vectors(2))
    def test_polyhedral_always_holds(self, fs, x):
        if not all(f.in_domain(x) for f in fs):
            return
        assert sum_rule_check(fs, x).holds


class TestSandwich:
    def test_polyhedral_pair(self):
        assert hup_sandwich_check(PAIR, (0,), F(1, 4)).holds

    @pytest.mark.parametrize("eta", [F(1, 8), F(1)])
    def test_parabola_pair(self, eta):
        assert hup_sandwich_check([C, D], ORIGIN, eta).holds

    def test_single(self):
        assert hup_sandwich_check([ABS], (0,), F(1, 3)).holds


class TestProperties:
    @given(polyhedral_functions(), nonneg, nonneg, st.data())
    def test_eps_monotone(self, f, e1, e2, data):
        x = data.draw(vectors(f.dim))
        lo, hi = sorted((e1, e2))
        assert eps_subdiff(f, x, hi).includes(eps_subdiff(f, x, lo))

    @given(polyhedral_functions(2), nonneg, vectors(2))
    def test_fenchel_young_characterization(self, f, eps, x):
        R = eps_subdiff(f, x, eps)
        for y in default_grid(2):
            assert R.contains(y) == (fy_residual(f, x, y) <= eps)

    @pytest.mark.parametrize("x", [ORIGIN, (F(-1, 2), F(1)), (F(-2), F(-2))])
    @pytest.mark.parametrize("eps", [F(0), F(1, 2), F(2)])
    def test_fenchel_young_characterization_parabola(self, x, eps):
        R = eps_subdiff(C, x, eps)
        for y in default_grid(2):
            assert region_contains(R, y) == (fy_residual(C, x, y) <= eps)

    @given(polytopes(), nonneg)
    def test_sublinear_pin(self, P, eps):
        f = PolyhedralFn.support_function(P)
        assert eps_subdiff(f, (0,) * P.dim, eps).equals(P)
        assert f.conjugate().equals(PolyhedralFn.indicator(P))

    @given(st.lists(polyhedral_functions(2), min_size=1, max_size=3), st.data())
    def test_general_inclusion(self, fs, data):
        x = data.draw(vectors(2))
        if not all(f.in_domain(x) for f in fs):
            return
        epss = data.draw(st.lists(nonneg, min_size=len(fs), max_size=len(fs)))
        assert general_inclusion_check(fs, x, epss).holds

    @pytest.mark.parametrize("epss", [(0, 0), (F(1, 2), 0), (1, 2)])
    def test_general_inclusion_parabola(self, epss):
        assert general_inclusion_check([C, D], ORIGIN, epss).holds
