"""Support functions of polytopes: subdifferentials at the origin.

For the support function of a polytope P, every eps-subdifferential at 0
equals P and the conjugate is the indicator of P.  Summing several such
functions gives the support function of the Minkowski sum, and the sum
rule holds.  Run: python3 demos/support_functions.py
"""
from fractions import Fraction

from dualgap.calculus import fn_sum
from dualgap.functions import PolyhedralFn
from dualgap.polyhedra import Polyhedron, minkowski_sum
from dualgap.subdiff import eps_subdiff, sum_rule_check

square = Polyhedron.box([-1, -1], [1, 1])
triangle = Polyhedron.from_vrep(2, [(0, 0), (2, 0), (0, 1)])
s1, s2 = PolyhedralFn.support_function(square), PolyhedralFn.support_function(triangle)

for eps in (Fraction(0), Fraction(1, 2), Fraction(5)):
    print(f"eps={eps}: subdifferential of the square's support function at 0 is the square?",
          eps_subdiff(s1, (0, 0), eps).equals(square))
print("conjugate is the indicator of the square?", s1.conjugate().equals(PolyhedralFn.indicator(square)))

total = fn_sum([s1, s2])
msum = minkowski_sum(square, triangle)
print("\nMinkowski sum:", msum.describe())
print("subdifferential of the sum at 0 equals it?", eps_subdiff(total, (0, 0), 0).equals(msum))
print("sum rule at 0:", sum_rule_check([s1, s2], (0, 0)).holds)
print("support in direction (1, 1):", total.evaluate((1, 1)), "=", square.support((1, 1)), "+", triangle.support((1, 1)))
