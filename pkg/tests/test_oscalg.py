import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superalg.models import CagedParams, caged_system, toy_system
from superalg.oscalg import (
    LadderSystem,
    build_F,
    certify_difference_form,
    commutator_poly,
    phi_factors,
    random_ladder_system,
    structure_function,
)
from superalg.polycore import BiPoly, Poly, Surd

F = Fraction
z = Poly([0, 1])


def test_build_F_toy():
    want = BiPoly({(2, 0): F(1, 4), (1, 0): F(1, 2), (0, 2): -1, (0, 1): 1})
    assert build_F(toy_system()) == want


def test_build_F_constant():
    one = Poly([1])
    assert build_F(LadderSystem(one, one, F(1), F(1), 1, 1)) == BiPoly.const(1)


def test_build_F_caged_degree():
    sys_ = caged_system(CagedParams(1, 2, 1))
    assert (sys_.m, sys_.n) == (1, 2)
    assert build_F(sys_).degree_A == 2 * (sys_.m + sys_.n)


def test_commutator_toy():
    assert commutator_poly(toy_system()) == BiPoly({(0, 1): -2})


def test_commutator_constant():
    one = Poly([1])
    assert commutator_poly(LadderSystem(one, one, F(1), F(1), 1, 1)).is_zero()


def test_certify_toy():
    cert = certify_difference_form(toy_system())
    assert cert.passed and cert.residual == 0


def test_certify_rejects_corrupted_F():
    sys_ = caged_system(CagedParams(1, 2, 1, 1, 2))
    Fp = build_F(sys_)
    # a pure-H monomial would cancel in the difference; flip one carrying A
    key = max(Fp.terms, key=lambda k: (k[1], k[0]))
    bad = BiPoly(Fp.terms | {key: -Fp.terms[key]})
    cert = certify_difference_form(sys_, bad)
    assert not cert.passed and cert.residual > 0


def test_certify_needs_exact():
    with pytest.raises(ValueError, match="exact"):
        certify_difference_form(toy_system().to_float())


def test_fifty_random_systems():
    rng = random.Random(1234)
    for _ in range(50):
        sys_ = random_ladder_system(rng)
        assert sys_.m * sys_.lam_x == sys_.n * sys_.lam_y
        assert certify_difference_form(sys_).passed


def test_gcd_reduction_warns():
    with pytest.warns(UserWarning, match="reduced by gcd 2"):
        sys_ = LadderSystem(z, z, F(1, 4), F(1, 2), 4, 2)
    assert (sys_.m, sys_.n) == (2, 1)


def test_mismatched_steps_rejected():
    with pytest.raises(ValueError, match="m\\*lam_x"):
        LadderSystem(z, z, F(1), F(2), 1, 1)


def test_phi_factors_toy():
    const, facs = phi_factors(toy_system(), F(3))
    assert const == 1
    got = sorted((s, off) for _, s, off in facs)
    assert got == [(-1, F(3, 2) + 1), (1, F(3, 2))]


def test_phi_factors_caged_roots():
    sys_ = caged_system(CagedParams())
    roots = sorted(f.root for f, _, _ in phi_factors(sys_, 0)[1] if f.side == "Q")
    assert roots == [Surd(F(1, 2)), Surd(F(3, 2))]


def test_phi_factors_double_root_listed_twice():
    Q = (z - 1) ** 2
    sys_ = LadderSystem(Q, z, F(1), F(1), 1, 1)
    roots = [f.root for f, _, _ in phi_factors(sys_, 0)[1] if f.side == "Q"]
    assert roots == [Surd(1), Surd(1)]


def test_phi_constant_is_positive_scale():
    sys_ = caged_system(CagedParams(1, 3, 2, 1, 2))
    const, _ = phi_factors(sys_, 0)
    lam = sys_.lam
    want = sys_.Q.lc**sys_.m * sys_.S.lc**sys_.n * lam ** (sys_.m * 2 + sys_.n * 2)
    assert const == want and const > 0


# -- properties -----------------------------------------------------------

seeds = st.integers(0, 2**32 - 1)


@given(seeds)
def test_difference_form_random(seed):
    assert certify_difference_form(random_ladder_system(random.Random(seed))).passed


@given(seeds)
def test_commutator_degree_drops(seed):
    sys_ = random_ladder_system(random.Random(seed))
    bound = sys_.m * sys_.Q.degree + sys_.n * sys_.S.degree - 1
    C = commutator_poly(sys_)
    assert C.is_zero() or C.degree_A <= bound


@given(seeds)
def test_factored_product_matches_F(seed):
    rng = random.Random(seed)
    sys_ = random_ladder_system(rng, max_deg=3, max_mn=3).to_float()
    Fp = build_F(sys_)
    sf = structure_function(sys_, exact=False)
    for _ in range(6):
        E, t = rng.uniform(-3, 3), rng.uniform(-3, 3)
        want = Fp(E, t)
        got = complex(sf.value(t, E))
        scale = abs(float(sf.constant)) * np.prod(
            [max(1.0, abs(complex(f.value(t, E, sf.lam)))) for f in sf.factors]
        )
        assert abs(got - want) <= 1e-9 * max(scale, abs(want), 1.0)
