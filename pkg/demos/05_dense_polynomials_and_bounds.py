"""Dense polynomials: explicit formulas, the all-monomials circuit, bounds.

Any degree-d polynomial in n variables admits a weighted formula of skinny
size at most C(n+d+1, n+1) - C(n+d-1, n+1) - 2, hence a symmetric
determinantal representation of dimension at most 4*C(n+d-1, n) - 2.  The
sum of all monomials of degree <= d even has a skew circuit of size
2nd - n + d - 1.  Fixed-dimension constructions win asymptotically in the
dense worst case but lose badly whenever a small circuit exists.
"""

import random

from symdet import (
    bounds_report,
    classify,
    evaluate,
    expand_circuit,
    measure,
    monomial_sum_circuit,
    poly_to_formula,
    sym_matrix,
)
from symdet.fields import RATIONAL
from symdet.polynomials import random_dense_polynomial

rng = random.Random(1)
p = random_dense_polynomial(3, 3, rng)
print("random dense polynomial:", p.render())
f = poly_to_formula(p)
rep = measure(f)
bound = bounds_report(3, 3).formula_bound
print(f"formula: skinny {rep.skinny} <= F(3,3) = {bound}, "
      f"round-trips: {expand_circuit(f, variables=p.variables)[0] == p}")
m = sym_matrix(f, "green")
print(f"symmetric representation: dimension {m.dim}")

c = monomial_sum_circuit(3, 4)
rep = measure(c)
ones = {v: RATIONAL.one() for v in c.variables}
print(f"\nall monomials of degree <= 4 in 3 variables: "
      f"skinny {rep.skinny} (= 2nd-n+d-1 = {2 * 3 * 4 - 3 + 4 - 1}), "
      f"weakly skew: {classify(c).is_weakly_skew}, "
      f"count check at all-ones: {evaluate(c, ones)[0].render()} (= C(7,4) = 35)")

print("\nbound table (n, d, formula, sym dimension, fixed-dimension, naive monomials):")
for n in range(1, 5):
    for d in range(1, 5):
        r = bounds_report(n, d)
        print(f"  n={n} d={d}: F={r.formula_bound:5d}  S={r.sym_dimension_bound:5d}  "
              f"fixed={r.quarez_dimension:6d}  naive={r.monomial_formula_size:5d}")
