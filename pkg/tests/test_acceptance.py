"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that pytest prints in an "acceptance
criteria" section at the end of the run; the assertions use the same
thresholds as the recorded lines.
"""

import math
import random
import time
from fractions import Fraction
from functools import lru_cache

import numpy as np

from superalg.audit import CLASSES, audit_printed_forms
from superalg.diffop import certify_ladder, express_in_H, op_commutator
from superalg.models import (
    CagedParams,
    PainleveParams,
    caged_exact_level,
    caged_ladder_ops,
    caged_oracle_spectrum,
    caged_system,
    painleve_potential,
    painleve_system,
    rational_p4,
    toy_system,
)
from superalg.oscalg import certify_difference_form, random_ladder_system
from superalg.p4ode import integrate_p4
from superalg.repsolve import algebraic_spectrum, enumerate_reps, validate_family
from superalg.specnum import Grid1D, assemble_2d, compare_spectra, eigen_1d

F = Fraction
CAGED_KS = [(1, 1), (2, 1), (3, 2)]
LS = [0, 1, 2]


def _rational_tuples(seed: int, count: int = 10):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        out.append(CagedParams(
            omega=F(rng.randint(1, 9), rng.randint(1, 4)),
            kx=rng.randint(1, 4),
            ky=rng.randint(1, 4),
            l1=F(rng.randint(0, 12), rng.randint(1, 5)),
            l2=F(rng.randint(0, 12), rng.randint(1, 5)),
            hbar=F(rng.randint(1, 5), rng.randint(1, 3)),
        ))
    return out


@lru_cache(maxsize=None)
def _caged_case(kx, ky, l1, l2):
    p = CagedParams(1, kx, ky, l1, l2)
    e_max = F(10)
    while len(caged_oracle_spectrum(p, e_max)) < 26:
        e_max *= 2
    sys_ = caged_system(p)
    reps = enumerate_reps(sys_, e_max=e_max)
    table = algebraic_spectrum(sys_, E_max=e_max, reps=reps)
    return sys_, reps, table, caged_oracle_spectrum(p, e_max)


PAINLEVE_CASES = [(F(3), F(1)), (F(3, 2), F(1, 2)), (F(6), F(2))]


@lru_cache(maxsize=None)
def _painleve_case(omega, hbar, levels=8):
    p = PainleveParams(omega1=omega, omega2=omega, hbar=hbar)
    s = rational_p4("minus2x_over3")
    w, hb = float(omega), float(hbar)
    top = hb * w / 3 * (levels + 0.5)
    x_max = 1.1 * math.sqrt(6 * top) / (w / 3)
    grid = Grid1D(-x_max, x_max, 1999)
    V = lambda x: painleve_potential(p, "x", s.f, s.fprime, x)  # noqa: E731
    xs = grid.refined().refined().nodes
    pot_dev = float(np.max(np.abs(V(xs) - (w / 3) ** 2 * xs**2 / 2)))
    res = eigen_1d(V, grid, levels, hb, refinements=2)
    sys_ = painleve_system(p)
    reps = enumerate_reps(sys_, e_max=F(12) * omega * hbar)
    return p, pot_dev, res, sys_, reps


def test_1_difference_form(acceptance):
    t0 = time.perf_counter()
    rng = random.Random(2024)
    systems = [random_ladder_system(rng, max_deg=3, max_mn=4) for _ in range(50)]
    certs = [certify_difference_form(s) for s in systems]
    dt = time.perf_counter() - t0
    passed = sum(c.passed for c in certs)
    ok = passed == 50 and dt <= 10
    assert acceptance(1, "difference form on 50 random exact systems", ok, f"{passed}/50 certified", dt)
    assert all(s.exact for s in systems)


def test_2_ladder_certification(acceptance):
    t0 = time.perf_counter()
    n_ok = n = 0
    for axis, seed in (("x", 11), ("y", 12)):
        for p in _rational_tuples(seed):
            A, Ad, H = caged_ladder_ops(p, axis)
            k, _ = p.axis(axis)
            lam = 2 * p.hbar * k * p.omega
            ladder = certify_ladder(H, Ad, lam).passed
            comm = op_commutator(A, Ad) == H * (1 / (p.hbar * k * p.omega))
            n += 1
            n_ok += ladder and comm
    dt = time.perf_counter() - t0
    ok = n_ok == n == 20 and dt <= 5
    assert acceptance(2, "ladder relations, 10 rational tuples per axis", ok, f"{n_ok}/{n} exact identities", dt)


def test_3_factorization_consistency(acceptance):
    t0 = time.perf_counter()
    n_ok = n = 0
    params = _rational_tuples(11) + _rational_tuples(12)
    params += [CagedParams(1, kx, ky, l1, l2) for kx, ky in CAGED_KS for l1 in LS for l2 in LS]
    for p in params:
        for axis in ("x", "y"):
            A, Ad, H = caged_ladder_ops(p, axis)
            k, _ = p.axis(axis)
            lam = 2 * p.hbar * k * p.omega
            Q = express_in_H(Ad * A, H)
            n += 1
            n_ok += Q.shift(lam) - Q == express_in_H(op_commutator(A, Ad), H)
    dt = time.perf_counter() - t0
    ok = n_ok == n
    assert acceptance(3, "Q(z+lam) - Q(z) equals [A, A'] in H", ok, f"{n_ok}/{n} axes exact", dt)


def test_4_caged_oracle(acceptance):
    t0 = time.perf_counter()
    bad = []
    worst = 0.0
    for kx, ky in CAGED_KS:
        for l1 in LS:
            for l2 in LS:
                _, _, table, oracle = _caged_case(kx, ky, l1, l2)
                a, b = table.first(25), oracle.first(25)
                r = compare_spectra(a, b, 1e-10)
                worst = max(worst, r.max_rel_deviation)
                if not (len(a) == len(b) == 25 and r.passed):
                    bad.append((kx, ky, l1, l2))
    dt = time.perf_counter() - t0
    ok = not bad and dt <= 30
    detail = f"27 cases, 25 levels each, max rel dev {worst:.1e}, mismatches {bad or 'none'}"
    assert acceptance(4, "caged algebraic spectrum equals separable oracle", ok, detail, dt)


def _check_1d(V, grid, exact, hbar=1.0):
    t0 = time.perf_counter()
    res = eigen_1d(V, grid, 5, hbar, refinements=1)
    rel = float(np.max(np.abs(res.levels - exact) / np.abs(exact)))
    return rel, res.finest_points, time.perf_counter() - t0


def test_5_numerical_oracle(acceptance):
    t0 = time.perf_counter()
    rows = []
    # oscillators
    for w, hb in ((1.0, 1.0), (2.5, 0.5)):
        exact = hb * w * (np.arange(5) + 0.5)
        L = 1.1 * math.sqrt(6 * exact[-1]) / w
        rows.append(("osc", *_check_1d(lambda x: w * w * x * x / 2, Grid1D(-L, L, 3999), exact, hb)))
    # singular oscillators against the closed-form levels
    for kx, l1, hb in ((1, 1, 1), (2, 2, 1), (1, F(3, 4), F(1, 2))):
        p = CagedParams(1, kx, 1, l1, 0, hb)
        exact = np.array([float(caged_exact_level(p, "x", n)) for n in range(5)])
        k, l, h = float(kx), float(l1), float(hb)
        L = 1.1 * math.sqrt(6 * exact[-1]) / k
        V = lambda x, k=k, l=l: k * k * x * x / 2 + l / x**2  # noqa: E731
        rows.append(("singular", *_check_1d(V, Grid1D.half_line(L, 3999), exact, h)))
    dt = time.perf_counter() - t0
    worst = max(r[1] for r in rows)
    ok = all(r[1] <= 1e-5 and r[2] <= 8000 and r[3] <= 20 for r in rows)
    detail = f"{len(rows)} potentials, worst rel err {worst:.1e}, finest grid {max(r[2] for r in rows)} points"
    assert acceptance(5, "eigen_1d reproduces analytic 1D levels", ok, detail, dt)


def test_6_printed_form_audit(acceptance):
    t0 = time.perf_counter()
    nu = audit_printed_forms("caged", CagedParams(l1=2))
    pre = audit_printed_forms("caged", CagedParams(1, 1, 2, 2, 0))
    pain = audit_printed_forms("painleve", PainleveParams())
    classified = all(e.classification in CLASSES for r in (nu, pre, pain) for e in r.entries)
    ratios = nu.patterns.get("nu_coefficient_ratio", {})
    nu_ok = bool(ratios) and all(abs(v - 2) <= 1e-9 for v in ratios.values())
    pref = pre.patterns.get("prefactor", {})
    pref_ok = pref.get("classification") == "uniform_scale"
    gammas = pain.patterns.get("gamma_scale", {})
    dt = time.perf_counter() - t0
    ok = classified and nu_ok and pref_ok and len(gammas) == 6
    detail = (f"nu ratio {sorted(set(round(v, 9) for v in ratios.values()))}, "
              f"prefactor {pref.get('classification')} x{pref.get('ratio')}, "
              f"{sum(len(r.entries) for r in (nu, pre, pain))} entries classified")
    assert acceptance(6, "printed closed forms audited", ok, detail, dt)


def test_7_p4_anchors(acceptance):
    t0 = time.perf_counter()
    cases = [("minus2x", 1.0, 4.5), ("minus2x_over3", -2.0, 1.5), ("one_over_x", 0.5, 3.5),
             ("one_over_x", -3.5, -0.5)]
    worst_dev = worst_res = 0.0
    for kind, a, b in cases:
        s = rational_p4(kind)
        z0 = a if kind != "one_over_x" or a > 0 else b
        tr = integrate_p4(float(s.alpha), float(s.beta), z0, float(s.f(z0)), float(s.fprime(z0)), (a, b))
        z = tr.samples[:, 0]
        assert z.min() == a and z.max() == b and not tr.poles
        worst_dev = max(worst_dev, float(np.max(np.abs(tr.samples[:, 1] - s.f(z)))))
        worst_res = max(worst_res, tr.max_residual)
    dt = time.perf_counter() - t0
    ok = worst_dev <= 1e-8 and worst_res <= 1e-8
    detail = f"3 rational solutions, intervals of length 3, max dev {worst_dev:.1e}, max residual {worst_res:.1e}"
    assert acceptance(7, "Painleve IV integration tracks rational solutions", ok, detail, dt)


def test_8_painleve_end_to_end(acceptance):
    t0 = time.perf_counter()
    pot = lev = resid = 0.0
    offsets = []
    for omega, hbar in PAINLEVE_CASES:
        p, pot_dev, res, sys_, reps = _painleve_case(omega, hbar)
        w, hb = float(omega), float(hbar)
        want = hb * w / 3 * (np.arange(len(res.levels)) + 0.5)
        pot = max(pot, pot_dev)
        lev = max(lev, float(np.max(np.abs(res.levels - want) / want)))
        ex = list(res.levels)
        numeric = assemble_2d(ex, ex, ex[-1] + ex[0] - 1e-9 * ex[-1])
        alg = algebraic_spectrum(sys_, E_max=F(12) * omega * hbar, reps=reps).first(len(numeric))
        r = compare_spectra(numeric, alg, 1e-9)
        resid = max(resid, r.offset_residual)
        offsets.append(r.offset / (hb * w))
        assert not r.multiplicity_mismatches and r.unmatched_a == r.unmatched_b == 0
    dt = time.perf_counter() - t0
    ok = pot <= 1e-12 and lev <= 1e-5 and resid <= 1e-9
    detail = (f"potential dev {pot:.1e}, level rel err {lev:.1e}, post-offset residual {resid:.1e}, "
              f"offset/(hbar*omega) {sorted(set(round(o, 9) for o in offsets))}")
    assert acceptance(8, "Painleve f = -2z/3 potential, levels and algebraic offset", ok, detail, dt)


def test_9_representation_validity(acceptance):
    t0 = time.perf_counter()
    checked = violations = 0
    runs = [(toy_system(), enumerate_reps(toy_system(), 6))]
    runs += [_caged_case(kx, ky, l1, l2)[:2] for kx, ky in CAGED_KS for l1 in LS for l2 in LS]
    runs += [_painleve_case(o, h)[3:] for o, h in PAINLEVE_CASES]
    for sys_, reps in runs:
        for fam in reps:
            assert fam.exact
            checked += len(fam.valid_N)
            violations += len(validate_family(sys_, fam))
    dt = time.perf_counter() - t0
    ok = violations == 0 and checked > 0
    detail = f"{checked} representations re-checked exactly, {violations} violations"
    assert acceptance(9, "Phi(0) = 0, Phi(N+1) = 0, Phi > 0 on every family", ok, detail, dt)
