import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superalg.models import CagedParams, caged_exact_level
from superalg.specnum import Grid1D, assemble_2d, compare_spectra, eigen_1d
from superalg.spectrum import SpectrumTable

F = Fraction


def test_oscillator_levels():
    res = eigen_1d(lambda x: x**2 / 2, Grid1D(-10, 10, 4000), count=3)
    assert np.allclose(res.levels, [0.5, 1.5, 2.5], rtol=0, atol=1e-6)
    assert np.all(np.diff(res.levels) > 0)


def test_singular_oscillator_ground_state():
    res = eigen_1d(lambda x: x**2 / 2 + 1 / x**2, Grid1D.half_line(14, 4000), count=1)
    assert res.levels[0] == pytest.approx(2.5, rel=1e-5)


def test_box():
    # the walls are the physics here, so the truncation heuristic fires
    with pytest.warns(UserWarning, match="domain truncation"):
        res = eigen_1d(lambda x: 0 * x, Grid1D(0, 1, 2000), count=3)
    want = [(n * math.pi) ** 2 / 2 for n in (1, 2, 3)]
    assert np.allclose(res.levels, want, rtol=1e-5)


def test_caged_levels_match_formula():
    for l1, hbar in ((0, 1), (2, 1), (F(3, 4), F(1, 2))):
        p = CagedParams(1, 2, 1, l1, 0, hbar)
        k, w, l, hb = 2, 1.0, float(l1), float(hbar)
        V = lambda x: (w * k * x) ** 2 / 2 + l / x**2  # noqa: E731
        exact = [float(caged_exact_level(p, "x", n)) for n in range(5)]
        x_max = 1.1 * math.sqrt(6 * exact[-1]) / (k * w)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            res = eigen_1d(V, Grid1D.half_line(x_max, 2000), count=5, hbar=hb, refinements=2)
        assert np.allclose(res.levels, exact, rtol=1e-5)


def test_nonfinite_potential_names_node():
    with pytest.raises(ValueError, match=r"not finite at grid node x=0\.0"):
        eigen_1d(lambda x: 1 / x**2, Grid1D(-1, 1, 9), count=1, refinements=0)


def test_truncation_warning():
    with pytest.warns(UserWarning, match="domain truncation"):
        eigen_1d(lambda x: x**2 / 2, Grid1D(-2, 2, 200), count=5, refinements=0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        eigen_1d(lambda x: x**2 / 2, Grid1D(-10, 10, 200), count=3, refinements=0)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid1D(0, 1, 2)
    with pytest.raises(ValueError):
        Grid1D(1, 0, 10)
    g = Grid1D.half_line(1.0, 4)
    assert np.allclose(g.nodes, [0.125, 0.375, 0.625, 0.875])
    assert g.refined().h == g.h / 2
    s = Grid1D(0, 1, 3)
    assert s.refined().h == s.h / 2


def test_richardson_estimate_bounds_error():
    res = eigen_1d(lambda x: x**2 / 2, Grid1D(-10, 10, 500), count=4)
    err = np.abs(res.levels - (np.arange(4) + 0.5))
    assert np.all(err <= res.richardson_estimate)
    assert res.finest_points == 1001
    assert np.all(np.isinf(eigen_1d(lambda x: x**2 / 2, Grid1D(-10, 10, 50), 2, refinements=0).richardson_estimate))


def test_assemble_examples():
    e = [F(3, 2), F(7, 2), F(11, 2)]
    t = assemble_2d(e, e, 12)
    assert t.pairs() == [(3.0, 1), (5.0, 2), (7.0, 3), (9.0, 2), (11.0, 1)]
    assert t[0].provenance == "oracle"
    assert assemble_2d([0], [1, 2], 10).pairs() == [(1.0, 1), (2.0, 1)]


def test_assemble_merges_within_tolerance():
    t = assemble_2d([0.0, 1.0], [1.0, 2.0 + 1e-12], 5)
    assert t.multiplicities == [1, 2, 1]
    assert np.allclose(t.energies, [1, 2, 3])
    assert t[0].provenance == "numeric"


def test_compare_identical():
    t = assemble_2d([F(1, 2), F(3, 2)], [F(1, 2), F(3, 2)], 10)
    r = compare_spectra(t, t)
    assert r.passed and r.max_abs_deviation == 0 and r.offset == 0


def test_compare_constant_offset():
    a = SpectrumTable.from_entries([(1.0, 1), (2.0, 2), (3.0, 3)])
    b = a.shifted(-0.75)
    r = compare_spectra(a, b, 1e-9)
    assert r.offset == pytest.approx(0.75) and r.offset_residual <= 1e-15
    assert r.offset_passed and not r.passed


def test_compare_flags_multiplicity_and_length():
    a = SpectrumTable.from_entries([(1.0, 1), (2.0, 2)])
    b = SpectrumTable.from_entries([(1.0, 1), (2.0, 3), (3.0, 1)])
    r = compare_spectra(a, b)
    assert r.multiplicity_mismatches == [(1, 2, 3)] and r.unmatched_b == 1
    assert not r.passed
    assert r.to_dict()["passed"] is False


# -- properties -----------------------------------------------------------

levels = st.lists(st.integers(0, 40), min_size=1, max_size=8, unique=True).map(
    lambda v: sorted(F(k, 4) for k in v)
)


@given(levels, levels, st.integers(0, 25))
def test_assemble_conserves_states(ex, ey, cut):
    t = assemble_2d(ex, ey, cut)
    pairs = sum(1 for a in ex for b in ey if a + b <= cut)
    assert t.total_states == pairs


@given(
    st.lists(st.tuples(st.floats(0, 50), st.integers(1, 4)), min_size=1, max_size=6),
    st.lists(st.tuples(st.floats(0, 50), st.integers(1, 4)), min_size=1, max_size=6),
)
def test_compare_symmetric(a, b):
    ta, tb = SpectrumTable.from_entries(a), SpectrumTable.from_entries(b)
    r1, r2 = compare_spectra(ta, tb), compare_spectra(tb, ta)
    assert r1.deviations == [-d for d in r2.deviations]
    assert r1.max_abs_deviation == r2.max_abs_deviation
    assert r1.offset == -r2.offset
    assert (r1.unmatched_a, r1.unmatched_b) == (r2.unmatched_b, r2.unmatched_a)


@given(st.floats(0.5, 3.0), st.integers(100, 400))
def test_richardson_brackets(w, pts):
    res = eigen_1d(lambda x: (w * x) ** 2 / 2, Grid1D(-12 / math.sqrt(w), 12 / math.sqrt(w), pts), count=3)
    coarse, fine = res.raw
    # both grids sit on the same side of the extrapolated value, coarse further out
    assert np.all(np.sign(fine - coarse) == np.sign(res.levels - fine))
    assert np.all(np.abs(res.levels - coarse) >= np.abs(res.levels - fine))
