"""A zero duality gap that no inf-convolution attains.

Pairs the indicator of {2x + y^2 <= 0} with the indicator of {x >= 0}.
Their domains touch only at the origin, so there is no interior point,
yet the primal and dual values agree.  Run: python3 demos/parabola_and_halfplane.py
"""
from fractions import Fraction

from dualgap.calculus import epi_conj_sum, fn_sum, inf_conv_value, near_minimizer
from dualgap.catalog import ParabolaIndicator, halfplane_indicator
from dualgap.duality import MonotropicInstance, Subspace, gap_report
from dualgap.exact import fmt
from dualgap.report import show
from dualgap.subdiff import eps_subdiff, sum_eps_subdiffs, sum_rule_check

f, g = ParabolaIndicator(), halfplane_indicator()
origin = (0, 0)

print("eps-subdifferentials at the origin")
for eps in (Fraction(1, 2), Fraction(2)):
    print(f"  eps={eps}: f -> {show(eps_subdiff(f, origin, eps))}")
    print(f"          g -> {show(eps_subdiff(g, origin, eps))}")
    print(f"          sum -> {show(sum_eps_subdiffs([f, g], origin, eps))}")

v = sum_rule_check([f, g], origin)
print(f"\nsum rule at the origin holds? {v.holds}: {show(v.witness[0])} vs {show(v.witness[1])}")

conjs = [f.conjugate(), g.conjugate()]
print(f"\n(f+g)* at (1,1) = {fn_sum([f, g]).conjugate().evaluate((1, 1))}")
res = inf_conv_value(conjs, (1, 1))
print(f"(f* [] g*)(1,1) = {res.value}, attained: {res.attained}")
print(f"  {res.certificate}")
for eta in (Fraction(1), Fraction(1, 10), Fraction(1, 1000)):
    parts = near_minimizer(conjs, (1, 1), eta)
    total = sum(h.evaluate(p) for h, p in zip(conjs, parts))
    print(f"  eta={eta}: split {' + '.join(fmt(p) for p in parts)} costs {total}")

es = epi_conj_sum([f, g])
print(f"\nepi f* + epi g* closed? {es.closed}; {fmt(es.witness)} is a limit point outside it")

rep = gap_report(MonotropicInstance((f, g), Subspace.diagonal(2, 2)))
print(f"\np = {rep.primal_value}, d = {rep.dual_value}, gap = {rep.gap}")
for name, verdict in rep.cq_diagnostics.items():
    print(f"  {name:16s} {verdict.holds}")
