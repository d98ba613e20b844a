"""Evaluate instance-file queries and turn the results into report rows.

Points ``x`` and ``y`` live in the working space of the instance: the
block space when the constraint is the diagonal subspace, otherwise the
full product space.  The exception is ``bertsekas``, whose ``x`` is always
a point of the product space.
"""
from __future__ import annotations

from fractions import Fraction

from .calculus import fn_sum, inf_conv_value
from .duality import (
    MonotropicInstance,
    bertsekas_cq_check,
    closed_epigraph_check,
    feasible_points,
    gap_report,
    interiority_check,
    reformulate,
    sample_duals,
    transversality_check,
)
from .exact import MalformedInput, fmt, zeros
from .functions import ConvexFn, ImproperFunction
from .instance import InstanceError, ParsedInstance, Query
from .regions import UnsupportedCombination, describe, region_contains
from .report import FAIL, UNSUPPORTED, Report, Row, row, show
from .subdiff import (
    condition_i_check,
    condition_ii_check,
    condition_iv_check,
    eps_subdiff,
    hup_sandwich_check,
    sum_rule_check,
)

DEFAULTS = {"eps": Fraction(1), "eta": Fraction(1, 4), "K": Fraction(1)}

_SUBCOMMAND = {
    "conjugate": "conjugate", "epssub": "epssub", "infconv": "infconv", "sumrule": "sumrule",
    "duality": "duality", "interiority": "duality", "closed_epigraph": "duality",
    "transversality": "duality", "bertsekas": "duality",
}


class QueryError(InstanceError):
    code = "E_QUERY"


def _followup(q: Query, source: str) -> str:
    cmd = _SUBCOMMAND.get(q.check, "verify")
    parts = ["dualgap", cmd, "--instance", source]
    for key in ("x", "y"):
        if key in q.params:
            parts += [f"--{key}", ",".join(str(c) for c in q.params[key])]
    for key in ("eps", "eta", "K"):
        if key in q.params:
            parts += [f"--{key}", str(q.params[key])]
    if "function" in q.params:
        parts += ["--function", q.params["function"]]
    return " ".join(parts)


def _plural(n: int, noun: str) -> str:
    return f"{n} {noun}" if n == 1 else f"{n} {noun}s"


def _compare(expect, got) -> bool:
    return expect is None or expect == got


class Runner:
    """Evaluates queries against one parsed instance."""

    def __init__(self, parsed: ParsedInstance, source: str = "<instance>"):
        self.parsed = parsed
        self.inst: MonotropicInstance = parsed.instance
        self.source = source
        self._fs = None

    @property
    def functions(self) -> list[ConvexFn]:
        if self._fs is None:
            self._fs = reformulate(self.inst)
        return self._fs

    @property
    def working_dim(self) -> int:
        return self.functions[0].dim

    def _named(self, name: str | None) -> ConvexFn:
        if name is None:
            return fn_sum(self.functions)
        if name not in self.parsed.names:
            raise QueryError("function", f"no function named {name!r}; known: {', '.join(self.parsed.names)}")
        return self.inst.blocks[self.parsed.names.index(name)]

    def _point(self, q: Query, key: str, dim: int | None = None):
        dim = self.working_dim if dim is None else dim
        p = q.params.get(key)
        if p is None:
            return zeros(dim)
        if len(p) != dim:
            raise QueryError(f"{q.name}.{key}", f"expected a point of length {dim}, got {len(p)}")
        return p

    def run(self, q: Query) -> Row:
        try:
            r = getattr(self, f"_q_{q.check}")(q)
        except UnsupportedCombination as exc:
            return Row(q.name, UNSUPPORTED, "-", "-", f"{exc}; reproduce: {_followup(q, self.source)}")
        except ImproperFunction as exc:
            return Row(q.name, FAIL, "-", "-", f"{exc}; reproduce: {_followup(q, self.source)}")
        except MalformedInput as exc:
            raise QueryError(q.name, str(exc)) from None
        if r.verdict == FAIL:
            r = Row(r.query, r.verdict, r.value, r.witness,
                    (r.certificate + "; " if r.certificate else "") + f"reproduce: {_followup(q, self.source)}")
        return r

    def run_all(self, title: str, queries=None) -> Report:
        rep = Report(title)
        for q in self.parsed.queries if queries is None else queries:
            rep.add(self.run(q))
        return rep

    # -- single operations ---------------------------------------------------------------

    def _q_conjugate(self, q: Query) -> Row:
        f = self._named(q.params.get("function"))
        y = self._point(q, "y", f.dim)
        v = f.conjugate().evaluate(y)
        expect = q.params.get("expect")
        ok = None if expect is None else str(v) == expect
        target = q.params.get("function", "sum")
        return row(q.name, ok, v, y, f"conjugate of {target} at {fmt(y)}")

    def _q_epssub(self, q: Query) -> Row:
        f = self._named(q.params.get("function"))
        x = self._point(q, "x", f.dim)
        eps = q.params.get("eps", DEFAULTS["eps"])
        R = eps_subdiff(f, x, eps)
        label = f"{eps}-subdifferential of {q.params.get('function', 'sum')} at {fmt(x)}"
        if "y" not in q.params:
            return row(q.name, None, describe(R), x, label)
        y = self._point(q, "y", f.dim)
        inside = region_contains(R, y)
        expect = q.params.get("expect")
        ok = None if expect is None else inside == expect
        return row(q.name, ok, inside, y, f"membership of {fmt(y)} in {label} = {describe(R)}")

    def _q_infconv(self, q: Query) -> Row:
        y = self._point(q, "y")
        res = inf_conv_value([f.conjugate() for f in self.functions], y, lexmin=True)
        expect = q.params.get("expect") or {}
        ok = _compare(expect.get("value"), str(res.value)) and _compare(expect.get("attained"), res.attained)
        value = f"{res.value} attained={show(res.attained)}"
        return row(q.name, ok if expect else None, value, res.witness, res.certificate)

    def _q_sumrule(self, q: Query) -> Row:
        x = self._point(q, "x")
        v = sum_rule_check(self.functions, x)
        lhs, rhs = v.witness
        return self._bool(q, v.holds, f"subdifferential of sum = {describe(lhs)}; sum of subdifferentials = {describe(rhs)}")

    def _q_duality(self, q: Query) -> Row:
        g = gap_report(self.inst, diagnostics=False)
        value = f"p={g.primal_value} d={g.dual_value} gap={g.gap}"
        weak = not (g.dual_value > g.primal_value)
        cross = g.cross_check
        agree = not cross or (cross["primal"] == g.primal_value and cross["dual"] == g.dual_value)
        expect = q.params.get("expect") or {}
        ok = weak and agree and _compare(expect.get("primal"), str(g.primal_value)) and _compare(
            expect.get("dual"), str(g.dual_value)
        ) and _compare(expect.get("gap"), str(g.gap))
        witness = {"primal": g.primal_witness, "dual": g.dual_witness}
        cert = (f"primal attained={show(g.primal_attained)}, dual attained={show(g.dual_attained)}; "
                f"conjugate route {show(cross) if cross else 'unavailable'}")
        return row(q.name, ok, value, witness, cert)

    # -- conditions --------------------------------------------------------------------------

    def _bool(self, q: Query, holds, witness, detail: str = "") -> Row:
        expect = q.params.get("expect")
        if holds is None:
            return Row(q.name, UNSUPPORTED, "-", show(witness), detail)
        ok = holds if expect is None else holds == expect
        return row(q.name, ok, holds, witness, detail)

    def _q_condition_i(self, q: Query) -> Row:
        eps = q.params.get("eps", DEFAULTS["eps"])
        K = q.params.get("K", DEFAULTS["K"])
        v = condition_i_check(self.functions, self._point(q, "x"), eps, K)
        return self._bool(q, v.holds, v.witness, f"eps={eps} K={K}: {v.detail}")

    def _q_condition_ii(self, q: Query) -> Row:
        duals = q.params.get("duals") or sample_duals(self.working_dim)
        for y in duals:
            if len(y) != self.working_dim:
                raise QueryError(f"{q.name}.duals", f"expected points of length {self.working_dim}")
        v = condition_ii_check(self.functions, duals)
        return self._bool(q, v.holds, v.witness, v.detail)

    def _q_condition_iv(self, q: Query) -> Row:
        eps = q.params.get("eps", DEFAULTS["eps"])
        eta = q.params.get("eta", DEFAULTS["eta"])
        v = condition_iv_check(self.functions, self._point(q, "x"), eps, eta)
        witness = v.witness[:3] if v.holds else v.witness
        more = f" (first 3 of {len(v.witness)} shown)" if v.holds and len(v.witness) > 3 else ""
        return self._bool(q, v.holds, witness, f"eps={eps} eta={eta}: {v.detail}{more}")

    def _q_hup(self, q: Query) -> Row:
        eta = q.params.get("eta", DEFAULTS["eta"])
        v = hup_sandwich_check(self.functions, self._point(q, "x"), eta)
        return self._bool(q, v.holds, v.witness, f"eta={eta}: {v.detail}")

    def _q_interiority(self, q: Query) -> Row:
        v = interiority_check(self.functions)
        return self._bool(q, v.holds, v.witness, v.detail)

    def _q_closed_epigraph(self, q: Query) -> Row:
        v = closed_epigraph_check(self.functions)
        return self._bool(q, v.holds, v.witness, v.detail)

    def _q_transversality(self, q: Query) -> Row:
        if len(self.functions) != 2:
            raise QueryError(q.name, "transversality needs exactly two functions in the working list")
        v = transversality_check(*self.functions)
        return self._bool(q, v.holds, v.witness, v.detail)

    def _q_bertsekas(self, q: Query) -> Row:
        if "x" in q.params:
            pts = [self._point(q, "x", self.inst.dim)]
        else:
            pts = feasible_points(self.inst)
        if not pts:
            return Row(q.name, UNSUPPORTED, "-", "-", "no feasible point")
        epss = [q.params["eps"]] if "eps" in q.params else [Fraction(1, 2), Fraction(1)]
        for x in pts:
            for eps in epss:
                v = bertsekas_cq_check(self.inst, x, eps)
                if not v.holds:
                    return self._bool(q, False, x, f"eps={eps}: {v.witness} is not closed")
        return self._bool(q, True, pts, f"{_plural(len(pts), 'feasible point')} x {_plural(len(epss), 'eps value')}")


def verify_queries(x, eps, eta, K) -> list[Query]:
    """Condition battery (i), (ii), (iii), (iv) at one ``(x, eps, eta, K)``."""
    base = {"x": x, "eps": eps}
    return [
        Query("condition_i", "condition_i", {**base, "K": K}),
        Query("condition_ii", "condition_ii", {}),
        Query("condition_iii", "condition_ii", {}),
        Query("condition_iv", "condition_iv", {**base, "eta": eta}),
    ]


def verify_report(runner: Runner, x=None, eps=None, eta=None, K=None) -> Report:
    x = zeros(runner.working_dim) if x is None else x
    eps = DEFAULTS["eps"] if eps is None else eps
    eta = DEFAULTS["eta"] if eta is None else eta
    K = DEFAULTS["K"] if K is None else K
    rep = Report(f"condition battery at x={fmt(x)} eps={eps} eta={eta} K={K}")
    for q in verify_queries(x, eps, eta, K):
        r = runner.run(q)
        if q.name == "condition_iii":
            r = Row(r.query, r.verdict, r.value, r.witness,
                    "lower semicontinuity of the inf-convolution, decided through its equivalence with condition_ii")
        rep.add(r)
    return rep


def gap_table(runner: Runner) -> Report:
    """Values, witnesses and the constraint-qualification battery."""
    inst = runner.inst
    g = gap_report(inst, diagnostics=True)
    rep = Report(f"duality gap{': ' + inst.name if inst.name else ''}")
    weak = not (g.dual_value > g.primal_value)
    feas = runner.parsed.feasible
    rep.add(row("feasibility", None, "unknown" if feas is None else feas, None,
                "constraint meets the product of block domains"))
    rep.add(row("primal", None, g.primal_value, g.primal_witness, f"attained={show(g.primal_attained)}"))
    rep.add(row("dual", None, g.dual_value, g.dual_witness, f"attained={show(g.dual_attained)}"))
    rep.add(row("weak_duality", weak, g.gap, None, "d <= p"))
    if g.cross_check:
        agree = g.cross_check["primal"] == g.primal_value and g.cross_check["dual"] == g.dual_value
        rep.add(row("conjugate_route", agree, show(g.cross_check), None,
                    "p = -(sum f)*(0) and d = -(inf-convolution of conjugates)(0)"))
    for name, v in g.cq_diagnostics.items():
        if v.holds is None:
            rep.add(row(name, None, "unsupported", None, v.detail))
        else:
            # a qualification that fails is a finding, not an error
            rep.add(row(name, None, v.holds, v.witness, v.detail))
    return rep

