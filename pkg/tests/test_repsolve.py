import random
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from superalg.models import CagedParams, caged_oracle_spectrum, caged_system, toy_system
from superalg.oscalg import LadderSystem, random_ladder_system
from superalg.polycore import Poly
from superalg.repsolve import algebraic_spectrum, enumerate_reps, validate_family
from superalg.specnum import compare_spectra

F = Fraction
z = Poly([0, 1])


def _data(reps):
    return sorted((fam.energy(N), fam.u(N), N) for fam in reps for N in fam.valid_N)


def test_toy_family():
    reps = enumerate_reps(toy_system(), 4)
    fams = [f for f in reps if f.uE == F(-1, 2) and f.u0 == 0]
    assert len(fams) == 1
    fam = fams[0]
    assert fam.valid_N == [0, 1, 2, 3, 4]
    for N in fam.valid_N:
        assert fam.energy(N) == N
        assert fam.phi_values[N] == [x * (N + 1 - x) for x in range(1, N + 1)]


def test_toy_spectrum():
    table = algebraic_spectrum(toy_system(), 3)
    assert table.pairs() == [(0.0, 1), (1.0, 2), (2.0, 3), (3.0, 4)]


def test_caged_isotropic_spectrum():
    table = algebraic_spectrum(caged_system(CagedParams()), E_max=F(11))
    assert [(e, k) for e, k in table.pairs()] == [(3.0, 1), (5.0, 2), (7.0, 3), (9.0, 4), (11.0, 5)]


def test_caged_anisotropic_matches_oracle():
    p = CagedParams(1, 2, 1)
    table = algebraic_spectrum(caged_system(p), E_max=F(30))
    oracle = caged_oracle_spectrum(p, F(30))
    assert [lv.energy for lv in table] == [lv.energy for lv in oracle]
    assert table.multiplicities == oracle.multiplicities
    assert compare_spectra(table, oracle, 1e-12).passed


def test_negative_factor_rejected():
    # a negative leading coefficient flips the sign of Phi everywhere
    bad = LadderSystem(-z, z, F(1), F(1), 1, 1, lowest_weight="all")
    reps = enumerate_reps(bad, 4)
    assert all(fam.valid_N == [0] for fam in reps)


def test_empty_table():
    sys_ = LadderSystem(Poly([1]), Poly([1]), F(1), F(1), 1, 1)
    assert len(algebraic_spectrum(sys_, 5)) == 0


def test_nmax_zero_gives_singlets():
    reps = enumerate_reps(caged_system(CagedParams(1, 2, 1)), 0)
    assert reps.families and all(fam.valid_N == [0] for fam in reps)


def test_families_validate_exactly():
    for p in (CagedParams(), CagedParams(1, 3, 2, 1, 2), CagedParams(F(1, 2), 2, 1, F(3, 8), 0, 2)):
        sys_ = caged_system(p)
        reps = enumerate_reps(sys_, e_max=F(40) * p.omega * p.hbar)
        assert reps.families
        for fam in reps:
            assert fam.exact
            assert validate_family(sys_, fam) == []


def test_validate_flags_broken_family():
    sys_ = toy_system()
    fam = enumerate_reps(sys_, 2)[0]
    fam.E0 += F(1, 3)
    assert validate_family(sys_, fam)


# -- properties -----------------------------------------------------------

pos = st.builds(F, st.integers(1, 20), st.integers(1, 7))


@given(pos, pos, st.sampled_from([(1, 1), (2, 1), (1, 3)]), st.integers(0, 2))
def test_positive_scaling_changes_nothing(cq, cs, ks, l1):
    p = CagedParams(1, ks[0], ks[1], l1, 1)
    sys_ = caged_system(p)
    scaled = LadderSystem(sys_.Q * cq, sys_.S * cs, sys_.lam_x, sys_.lam_y, sys_.m, sys_.n,
                          sys_.hbar, "scaled", sys_.lowest_weight)
    e_max = F(24)
    assert _data(enumerate_reps(sys_, e_max=e_max)) == _data(enumerate_reps(scaled, e_max=e_max))


@given(st.integers(0, 2**32 - 1))
def test_random_families_validate(seed):
    sys_ = random_ladder_system(random.Random(seed), max_deg=2, max_mn=2)
    sys_ = LadderSystem(sys_.Q, sys_.S, sys_.lam_x, sys_.lam_y, sys_.m, sys_.n, lowest_weight="all")
    for fam in enumerate_reps(sys_, 3):
        assert validate_family(sys_, fam) == []
