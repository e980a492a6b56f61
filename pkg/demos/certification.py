"""Exact certificates behind the algebra.

1. The commutator of the two integrals, written through Q and S, equals the
   forward difference of F in A (checked on random rational systems).
2. The caged raising operator shifts the energy by 2 hbar k omega, and
   [A, A'] written in H equals Q(H + lam) - Q(H).
3. Negative controls: a wrong step and a perturbed Q both fail.

Run with ``python3 demos/certification.py``.
"""

import random
from fractions import Fraction

from superalg import certify_difference_form, certify_ladder, random_ladder_system
from superalg.models import CagedParams, caged_axis_certificates, caged_derived_Q, caged_ladder_ops
from superalg.polycore import Poly

rng = random.Random(7)
certs = [certify_difference_form(random_ladder_system(rng)) for _ in range(20)]
print(f"difference form on 20 random systems: {sum(c.passed for c in certs)}/20 pass")
print("  e.g.", certs[0].name, certs[0].detail)

p = CagedParams(omega=Fraction(3, 2), kx=2, ky=3, l1=Fraction(5, 4), l2=0, hbar=Fraction(1, 2))
for axis in ("x", "y"):
    for c in caged_axis_certificates(p, axis):
        print(f"{c.name:28s} {'pass' if c.passed else 'FAIL'}  {c.detail}")

_, Ad, H = caged_ladder_ops(p, "x")
wrong = certify_ladder(H, Ad, p.hbar * p.kx * p.omega, "ladder with half the step")
print(f"\n{wrong.name}: passed={wrong.passed}, residual={wrong.residual}")
bad_Q = caged_derived_Q(p, "x") + Poly([0, Fraction(1, 7)])
bad = {c.name: c for c in caged_axis_certificates(p, "x", Q=bad_Q)}
print(f"perturbed Q: commutator_difference passed={bad['commutator_difference[x]'].passed}")
