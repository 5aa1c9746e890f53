"""Certification: why you can trust an emitted matrix.

Three independent layers check every construction: exact symbolic oracles
(cofactor expansion vs. cycle-cover enumeration vs. inclusion-exclusion),
structural certificate audits on the gadget graphs, and Schwartz-Zippel
identity testing at random points of a 61-bit prime field.  This demo shows
the identity test passing on a correct matrix and producing a reproducible
witness on a corrupted one.
"""

from symdet import identity_test, parse_expression, sym_matrix
from symdet.fields import RATIONAL
from symdet.graphs import Weight

f = parse_expression("(x+y)*(x - z) + 3*y*z - 1")
m = sym_matrix(f, "green")
print(f"built a {m.dim}x{m.dim} symmetric representation")

verdict = identity_test(f, m, seed=42)
print(f"honest matrix: {verdict.status} after {verdict.trials} trials over {verdict.field}")

# corrupt one entry (and its mirror, to keep the matrix symmetric)
i, j = next(
    (i, j)
    for i in range(m.dim)
    for j in range(i + 1, m.dim)
    if m.entry(i, j).render() == "1"
)
bad = m.with_entry(i, j, Weight.const(-RATIONAL.one()))
bad = bad.with_entry(j, i, Weight.const(-RATIONAL.one()))
verdict = identity_test(f, bad, seed=42)
print(f"\ncorrupted entry ({i},{j}): {verdict.status}")
print("witness point:", {k: v for k, v in sorted(verdict.witness_point.items())})
print("lhs (circuit) =", verdict.lhs)
print("rhs (det)     =", verdict.rhs)

again = identity_test(f, bad, seed=42)
print("witness reproduces with the same seed:", again.witness_point == verdict.witness_point)

# the odds of a wrong matrix surviving: (deg / |field|) per trial
print("\nescape probability per trial is at most deg/2^61;"
      " twenty independent trials make survival astronomically unlikely")
