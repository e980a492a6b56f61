from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superalg.polycore import (
    BiPoly,
    DegenerateInputError,
    Poly,
    Surd,
    bivar_expand,
    exact_roots,
    poly_add,
    poly_eval,
    poly_mul,
    poly_roots,
    poly_shift,
)
from conftest import fractions

F = Fraction
x = Poly([0, 1])


def test_shift_square():
    assert poly_shift(x**2, 1) == Poly([1, 2, 1])
    assert poly_shift(x**2, 0) == x**2


def test_shift_difference_of_caged_q():
    Q = Poly([F(3, 16), F(-1, 2), F(1, 4)])
    assert poly_shift(Q, 2) - Q == x


def test_ring_examples():
    assert poly_eval(x**2 + 1, 2) == 5
    assert poly_mul(x + 1, x - 1) == x**2 - 1
    assert poly_add(x, Poly([1])) == x + 1


def test_rational_coefficients_stay_reduced():
    p = Poly([F(2, 4), F(-6, -3)])
    for c in p.coeffs:
        assert isinstance(c, Fraction) and c.denominator > 0
    assert p.coeffs == (F(1, 2), F(2))


def test_zero_polynomial_is_empty():
    z = Poly([0, 0, 0])
    assert z.is_zero() and z.coeffs == () and z.degree == -1


def test_roots_symmetric():
    roots = poly_roots(x**2 - 1)
    assert sorted(float(r) for r, _ in roots) == [-1.0, 1.0]


def test_roots_caged_q():
    Q = Poly([F(3, 16), F(-1, 2), F(1, 4)])
    assert [(r, k) for r, k in exact_roots(Q)] == [(Surd(F(1, 2)), 1), (Surd(F(3, 2)), 1)]


def test_roots_painleve_cubic():
    # 8 (z - 4/3) ((z - 1)^2 - 1/9) after dividing out 8
    Q = Poly.from_roots([F(4, 3), F(1), F(2, 3)]) * 8
    roots = exact_roots(Q * F(1, 8))
    assert [r for r, _ in roots] == [Surd(F(2, 3)), Surd(1), Surd(F(4, 3))]
    for r, _ in roots:
        assert Q(r) == 0


def test_roots_degenerate_input():
    with pytest.raises(DegenerateInputError, match="degenerate input"):
        poly_roots(Poly([]))
    with pytest.raises(DegenerateInputError):
        poly_roots(Poly([3]))


def test_double_root_multiplicity():
    p = (x - 2) ** 2 * (x + 1)
    assert dict((float(r), k) for r, k in poly_roots(p)) == {-1.0: 1, 2.0: 2}
    fl = poly_roots(p.to_float(), exact=False)
    assert sorted(k for _, k in fl) == [1, 2]


def test_irrational_roots_are_surds():
    roots = exact_roots(x**2 - 2)
    assert {r for r, _ in roots} == {Surd.sqrt(2), -Surd.sqrt(2)}
    assert Surd.sqrt(2) ** 2 == 2


def test_conjugate_pairs_adjacent():
    p = (x - 1) * (x**2 + 1) * (x**2 + 2 * x + 5)
    roots = [complex(r) for r, _ in poly_roots(p.to_float(), exact=False)]
    assert roots[0] == pytest.approx(1)
    for a, b in zip(roots[1::2], roots[2::2]):
        assert a == pytest.approx(b.conjugate())


def test_bivar_expand_toy():
    # (H/2 + A)(H/2 - A + 1)
    got = bivar_expand([(x, F(1, 2), 1, 0), (x, F(1, 2), -1, 1)])
    want = BiPoly({(2, 0): F(1, 4), (1, 0): F(1, 2), (0, 2): -1, (0, 1): 1})
    assert got == want


# -- properties -----------------------------------------------------------

polys = st.lists(fractions(), min_size=0, max_size=6).map(Poly)


@given(polys, fractions(), fractions())
def test_shift_composes(P, c, d):
    assert poly_shift(poly_shift(P, c), d) == poly_shift(P, c + d)


@given(polys, polys, polys)
def test_exact_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p


@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=7))
def test_root_residuals(coeffs):
    coeffs[-1] = coeffs[-1] if abs(coeffs[-1]) > 0.1 else 1.0
    p = Poly(coeffs)
    scale = max(abs(c) for c in p.coeffs)
    for r, _ in poly_roots(p, exact=False):
        bound = 1e-10 * scale * max(1.0, abs(r)) ** p.degree
        # clustered multiple roots are only accurate to ~sqrt(eps)
        assert abs(p(r)) <= bound or _near_cluster(p, r)


def _near_cluster(p, r):
    dp = p.derivative()
    return abs(complex(dp(r))) < 1e-4 * max(abs(c) for c in p.coeffs) * max(1.0, abs(r)) ** p.degree


@given(st.lists(fractions(), min_size=1, max_size=3))
def test_exact_roots_vanish(rs):
    p = Poly.from_roots(rs)
    for r, _ in exact_roots(p):
        assert p(r) == 0
