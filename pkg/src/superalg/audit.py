"""Cross-check of hand-written closed forms against the generic engine.

Each model carries a set of closed-form expressions for the structure
function factors, the representation parameter ``u`` and the energy, written
the way they are usually quoted for that model. :func:`audit_printed_forms`
evaluates them verbatim over a sweep of the free variables and compares with
the values produced by :mod:`superalg.oscalg` and :mod:`superalg.repsolve`.
Every difference is classified as

* ``none``: equal on the whole sweep;
* ``constant_offset``: the difference is one constant;
* ``uniform_scale``: the ratio is one constant (possibly a fixed power of a
  physical scale such as ``hbar*omega1``);
* ``structural``: neither.
"""

from __future__ import annotations

import cmath
import itertools
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .models import CagedParams, PainleveParams, caged_system, painleve_system, toy_system
from .oscalg import LadderSystem, LinearFactor, structure_function
from .repsolve import Branch, branch_solution

__all__ = ["Discrepancy", "DiscrepancyReport", "audit_printed_forms", "classify"]

CLASSES = ("none", "constant_offset", "uniform_scale", "structural")
TOL = 1e-9


def _enc(z: complex):
    z = complex(z)
    if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)):
        return float(z.real)
    return [float(z.real), float(z.imag)]


@dataclass
class Discrepancy:
    item: str
    classification: str
    offset: complex | None = None
    scale: complex | None = None
    scale_law: str | None = None
    max_abs_diff: float = 0.0
    samples: int = 0
    detail: str = ""

    def to_dict(self) -> dict:
        d = {
            "item": self.item,
            "classification": self.classification,
            "max_abs_diff": self.max_abs_diff,
            "samples": self.samples,
        }
        if self.offset is not None:
            d["offset"] = _enc(self.offset)
        if self.scale is not None:
            d["scale"] = _enc(self.scale)
        if self.scale_law:
            d["scale_law"] = self.scale_law
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class DiscrepancyReport:
    model: str
    params: dict
    entries: list[Discrepancy] = field(default_factory=list)
    patterns: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def by_item(self, item: str) -> Discrepancy:
        for e in self.entries:
            if e.item == item:
                return e
        raise KeyError(item)

    def counts(self) -> dict[str, int]:
        out = {c: 0 for c in CLASSES}
        for e in self.entries:
            out[e.classification] += 1
        return out

    @property
    def all_none(self) -> bool:
        return all(e.classification == "none" for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "params": self.params,
            "summary": self.counts(),
            "entries": [e.to_dict() for e in self.entries],
            "patterns": self.patterns,
            "notes": list(self.notes),
        }


def classify(printed: Iterable[complex], engine: Iterable[complex], tol: float = TOL) -> Discrepancy:
    """Classify ``printed`` against ``engine`` sampled at the same points."""
    p = [complex(v) for v in printed]
    e = [complex(v) for v in engine]
    if len(p) != len(e) or not p:
        raise ValueError("need equally many printed and engine samples")
    ref = max(1.0, max(abs(v) for v in p + e))
    d = [a - b for a, b in zip(p, e)]
    worst = max(abs(v) for v in d)
    out = Discrepancy("", "structural", max_abs_diff=worst, samples=len(p))
    if worst <= tol * ref:
        out.classification = "none"
        return out
    if all(abs(v - d[0]) <= tol * ref for v in d):
        out.classification, out.offset = "constant_offset", d[0]
        return out
    if all(abs(b) > tol * ref for b in e):
        r = [a / b for a, b in zip(p, e)]
        if all(abs(v - r[0]) <= tol * max(1.0, abs(r[0])) for v in r):
            out.classification, out.scale = "uniform_scale", r[0]
    return out


def _entry(report: DiscrepancyReport, item: str, printed, engine, detail: str = ""):
    d = classify(printed, engine)
    d.item, d.detail = item, detail
    report.entries.append(d)
    return d


def _nearest(factors: list[LinearFactor], side: str, index: int, target: complex) -> LinearFactor:
    cands = [f for f in factors if f.side == side and f.index == index]
    return min(cands, key=lambda f: abs(complex(f.root) - target))


def _val(f: LinearFactor, t, E, lam) -> complex:
    return complex(f.value(t, E, lam))


def _sweep_tE(lam):
    ts = [0.0, 0.5, 1.0, 2.25, -1.5]
    Es = [float(lam) * k for k in (0.5, 1.0, 3.0, 7.5)]
    return list(itertools.product(ts, Es))


# ---------------------------------------------------------------------------
# generic closed forms (the self-consistent reference used for the toy model)


def _audit_generic(report: DiscrepancyReport, sys: LadderSystem):
    sf = structure_function(sys, exact=False)
    lam = float(sf.lam)
    m, n = sys.m, sys.n
    q_f = [f for f in sf.factors if f.side == "Q"]
    s_f = [f for f in sf.factors if f.side == "S"]
    grid = _sweep_tE(lam)
    for f in q_f:
        r = complex(f.root)
        pv = [t + E / (2 * lam) - 1 + f.index / m - r / lam for t, E in grid]
        _entry(report, f"Phi.Q[{f.index},{_enc(r)}]", pv, [_val(f, t, E, lam) for t, E in grid])
    for f in s_f:
        s = complex(f.root)
        pv = [-t + E / (2 * lam) + f.index / n - s / lam for t, E in grid]
        _entry(report, f"Phi.S[{f.index},{_enc(s)}]", pv, [_val(f, t, E, lam) for t, E in grid])
    for fq, fs in itertools.product(q_f, s_f):
        r, s, p, q = complex(fq.root), complex(fs.root), fq.index, fs.index
        E0, dE, uE, u0 = branch_solution(Branch(fq, fs), lam)
        Ns = range(6)
        pe = [lam * (N + 2 - p / m - q / n) + r + s for N in Ns]
        _entry(report, f"E[{fq.label}|{fs.label}]", pe, [E0 + dE * N for N in Ns])
        Es = [lam * k for k in (0.5, 2.0, 5.0)]
        pu = [-E / (2 * lam) + r / lam + (m - p) / m for E in Es]
        _entry(report, f"u[{fq.label}]", pu, [uE * E + u0 for E in Es])


# ---------------------------------------------------------------------------
# caged oscillator


def _audit_caged(report: DiscrepancyReport, p: CagedParams):
    sys = caged_system(p, "derived")
    sf = structure_function(sys, exact=False)
    lam = float(sf.lam)
    hb, w = float(p.hbar), float(p.omega)
    # symbols as they appear in the closed forms: m pairs with the x axis
    # product (index i), k with the y axis product (index j)
    M, K = p.ky, p.kx
    m, n = sys.m, sys.n
    nu1, nu2 = float(p.nu("x")), float(p.nu("y"))
    r = {e: hb * w * p.kx * (1 + e * nu1 / 2) for e in (1, -1)}
    s = {e: hb * w * p.ky * (1 + e * nu2 / 2) for e in (1, -1)}
    if (M, K) != (m, n):
        report.notes.append(
            f"(kx, ky) = ({p.kx}, {p.ky}) is not coprime; closed forms use the unreduced "
            f"exponents ({M}, {K}), the engine the reduced ({m}, {n})"
        )
    fac = list(sf.factors)
    c = 4 * M * K * hb * w
    grid = _sweep_tE(lam)
    ratios: dict[str, complex] = {}

    # structure function factors; the "-nu" factor belongs to the root 1 + nu/2
    printed_Q = {e: lambda t, E, i, e=e: E / c + t - 1 + i / M - 1 / (2 * M) - e * nu1 / (2 * M) for e in (1, -1)}
    printed_S = {e: lambda t, E, j, e=e: E / c - t + j / K - 1 / (2 * K) - e * nu2 / (2 * K) for e in (1, -1)}
    for side, printed, roots, count in (("Q", printed_Q, r, m), ("S", printed_S, s, n)):
        vals = {}
        for e in (1, -1):
            pv, ev = [], []
            for idx in range(1, count + 1):
                f = _nearest(fac, side, idx, roots[e])
                for t, E in grid:
                    pv.append(printed[e](t, E, idx))
                    ev.append(_val(f, t, E, lam))
            vals[e] = (pv, ev)
            tag = "-nu" if e == 1 else "+nu"
            _entry(report, f"Phi.{side}[{tag}]", pv, ev, "factor offsets against t = x + u and E")
        ratios[f"Phi.{side}"] = _nu_ratio(vals)

    # u and E per lowest-weight sign
    Es = [lam * k for k in (0.5, 2.0, 5.0)]
    uvals = {}
    for e1 in (1, -1):
        pv, ev = [], []
        for pp in range(1, m + 1):
            fq = _nearest(fac, "Q", pp, r[e1])
            fs = _nearest(fac, "S", 1, s[1])
            _, _, uE, u0 = branch_solution(Branch(fq, fs), lam)
            for E in Es:
                pv.append(-E / c + (M - pp) / M + 1 / (2 * M) + e1 * nu1 / (2 * M))
                ev.append(uE * E + u0)
        uvals[e1] = (pv, ev)
        _entry(report, f"u[eps1={e1:+d}]", pv, ev)
    ratios["u"] = _nu_ratio(uvals)

    Evals = {}
    for e1, e2 in itertools.product((1, -1), repeat=2):
        pv, ev = [], []
        for pp, qq in itertools.product(range(1, m + 1), range(1, n + 1)):
            fq = _nearest(fac, "Q", pp, r[e1])
            fs = _nearest(fac, "S", qq, s[e2])
            E0, dE, _, _ = branch_solution(Branch(fq, fs), lam)
            for N in range(6):
                pv.append(2 * M * K * hb * w * (N + 2 + (1 - 2 * pp + e1 * nu1) / (2 * M)
                                                + (1 - 2 * qq + e2 * nu2) / (2 * K)))
                ev.append(E0 + dE * N)
        Evals[(e1, e2)] = (pv, ev)
        _entry(report, f"E[eps1={e1:+d},eps2={e2:+d}]", pv, ev)
    dp = [a - b for a, b in zip(Evals[(1, 1)][0], Evals[(-1, 1)][0])]
    de = [a - b for a, b in zip(Evals[(1, 1)][1], Evals[(-1, 1)][1])]
    ratios["E"] = dp[0] / de[0]

    # constrained structure function, one entry per factor role and sign
    first = {}
    for e1 in (1, -1):
        for role in ("bottom", "partner"):
            pv, ev = [], []
            for pp, qq, N in itertools.product(range(1, m + 1), range(1, n + 1), range(4)):
                fq = _nearest(fac, "Q", pp, r[e1])
                fs = _nearest(fac, "S", qq, s[1])
                E0, dE, uE, u0 = branch_solution(Branch(fq, fs), lam)
                E = E0 + dE * N
                u = uE * E + u0
                for i in range(1, m + 1):
                    g = _nearest(fac, "Q", i, r[e1] if role == "bottom" else r[-e1])
                    for x in range(N + 2):
                        shift = 0 if role == "bottom" else e1 * nu1 / M
                        pv.append(x + (i - pp) / M + shift)
                        ev.append(_val(g, x + u, E, lam))
            _entry(report, f"Phi_constrained.Q_{role}[eps1={e1:+d}]", pv, ev)
            first[(e1, role)] = (pv[0], ev[0])
    (pb, eb), (pq, eq) = first[(1, "bottom")], first[(1, "partner")]
    ratios["Phi_constrained.Q_partner"] = (pq - pb) / (eq - eb)
    for e2 in (1, -1):
        for role in ("top", "partner"):
            pv, ev = [], []
            for pp, qq, N in itertools.product(range(1, m + 1), range(1, n + 1), range(4)):
                fq = _nearest(fac, "Q", pp, r[1])
                fs = _nearest(fac, "S", qq, s[e2])
                E0, dE, uE, u0 = branch_solution(Branch(fq, fs), lam)
                E = E0 + dE * N
                u = uE * E + u0
                for j in range(1, n + 1):
                    g = _nearest(fac, "S", j, s[e2] if role == "top" else s[-e2])
                    for x in range(N + 2):
                        if role == "top":
                            pv.append(N + 1 + (j - qq) / K - x)
                        else:
                            pv.append(N + 1 + (j - qq) / K + e2 * nu2 / K)
                        ev.append(_val(g, x + u, E, lam))
            _entry(report, f"Phi_constrained.S_{role}[eps2={e2:+d}]", pv, ev,
                   "closed form has no x dependence" if role == "partner" else "")

    # overall constant
    printed_c = float(M * M * K * K)
    engine_c = float(sf.constant)
    d = _entry(report, "prefactor", [printed_c], [engine_c])
    if d.classification == "constant_offset":
        d.classification, d.offset, d.scale = "uniform_scale", None, printed_c / engine_c
    if d.scale is not None:
        d.detail = "positive overall factor; no effect on zeros or positivity"
    report.patterns["nu_coefficient_ratio"] = {k: _enc(v) for k, v in ratios.items()}
    report.patterns["nu_factor_uniform"] = all(abs(complex(v) - 2) <= 1e-9 for v in ratios.values())
    report.patterns["prefactor"] = {
        "printed": printed_c,
        "engine": engine_c,
        "ratio": printed_c / engine_c,
        "classification": d.classification,
        "effect": "none on zeros or positivity",
    }


def _nu_ratio(vals: dict) -> complex:
    """Ratio of the nu-dependent splitting between the +-nu forms, closed form over engine."""
    (pp, ep), (pm, em) = vals[1], vals[-1]
    num = pp[0] - pm[0]
    den = ep[0] - em[0]
    return num / den


# ---------------------------------------------------------------------------
# Painleve IV family


def _painleve_roots(hbar, omega, alpha, beta, eps) -> list[complex]:
    """Roots of the cubic in the order linear, minus-i, plus-i."""
    a = hbar * omega / 3 * (-alpha + eps + 3)
    cc = hbar * omega / 3 * (alpha / 2 + 4 * eps - 1.5)
    sq = hbar * omega * cmath.sqrt(2 * beta) / 4
    return [complex(a), cc - 1j * sq, cc + 1j * sq]


def _printed_gammas(p: PainleveParams) -> list[complex]:
    hb, w1 = float(p.hbar), float(p.omega1)
    a1, b1, e1 = float(p.alpha1), float(p.beta1), p.eps1
    a2, b2, e2 = float(p.alpha2), float(p.beta2), p.eps2
    m, n = p.m, p.n
    r1, r2 = cmath.sqrt(2 * b1), cmath.sqrt(2 * b2)
    return [
        -(-3 + a1 - e1) / (3 * m),
        hb * w1 / (12 * m) * (-6 + 2 * a1 - 3j * r1 + 16 * e1),
        hb * w1 / (12 * m) * (-6 + 2 * a1 + 3j * r1 + 16 * e1),
        (-3 + a2 - e2) / (3 * n),
        hb * w1 / (12 * n) * (-6 + 2 * a2 - 3j * r2 + 16 * e2),
        hb * w1 / (12 * n) * (-6 + 2 * a2 + 3j * r2 + 16 * e2),
    ]


def _engine_gammas(p: PainleveParams):
    sys = painleve_system(p)
    sf = structure_function(sys, exact=False)
    lam = float(sf.lam)
    fac = list(sf.factors)
    hb = float(p.hbar)
    rq = _painleve_roots(hb, float(p.omega1), float(p.alpha1), float(p.beta1), p.eps1)
    rs = _painleve_roots(hb, float(p.omega2), float(p.alpha2), float(p.beta2), p.eps2)
    qf = [_nearest(fac, "Q", 1, z) for z in rq]
    sfs = [_nearest(fac, "S", 1, z) for z in rs]
    g = [complex(f.root) / lam for f in qf + sfs]
    return sys, sf, lam, fac, rq, rs, g


def _variant(p: PainleveParams, k, da) -> PainleveParams:
    """Frequencies scaled by ``k`` and both alphas shifted by ``da``."""
    return PainleveParams(p.omega1 * k, p.omega2 * k, p.m, p.n, p.alpha1 + da, p.beta1,
                          p.alpha2 + da, p.beta2, p.eps1, p.eps2, p.hbar)


GAMMA_SWEEP = [(1, 0), (2, 0), (3, 0), (1, 1), (2, Fraction(5, 2))]


def _audit_painleve(report: DiscrepancyReport, p: PainleveParams):
    sys, sf, lam, fac, rq, rs, g_eng = _engine_gammas(p)
    g_pr = _printed_gammas(p)
    hb, w1 = float(p.hbar), float(p.omega1)
    m, n = sys.m, sys.n
    wt = hb * w1  # the closed forms write lam_x = hbar*omega1 as omega-tilde
    report.notes.append("the cubics are read with omega1 in Q and omega2 in S")

    # gammas: compared over a sweep of frequency scale and alpha, so a factor
    # of hbar*omega1 shows up as a scale law rather than a coincidence at 1
    variants = [_variant(p, k, da) for k, da in GAMMA_SWEEP]
    sweep = [(_printed_gammas(v), _engine_gammas(v)[-1]) for v in variants]
    unit = [hb * float(v.omega1) for v in variants]
    for idx in range(6):
        pv = [row[0][idx] for row in sweep]
        ev = [row[1][idx] for row in sweep]
        d = _entry(report, f"gamma{idx + 1}", pv, ev, "root / lam against the closed form")
        if d.classification == "structural" and all(abs(b) > 1e-12 for b in ev):
            r = [a / b / u for a, b, u in zip(pv, ev, unit)]
            if all(abs(v - r[0]) <= TOL * max(1.0, abs(r[0])) for v in r):
                d.classification = "uniform_scale"
                d.scale = complex(pv[0] / ev[0])
                d.scale_law = f"{complex(r[0]).real:.12g} * hbar*omega1"

    # rewritten structure function factors
    grid = _sweep_tE(lam)
    for k in range(3):
        pv, ev = [], []
        for i in range(1, m + 1):
            f = _nearest(fac, "Q", i, rq[k])
            for t, E in grid:
                pv.append(E / (2 * hb * wt) + t - 1 + i / m - g_pr[k])
                ev.append(_val(f, t, E, lam))
        _entry(report, f"Phi.Q[gamma{k + 1}]", pv, ev)
    for k in range(3):
        pv, ev = [], []
        for j in range(1, n + 1):
            f = _nearest(fac, "S", j, rs[k])
            jj = j / m if k == 1 else j / n  # the middle factor is written with j/m
            for t, E in grid:
                pv.append(E / (2 * hb * wt) - t + jj - g_pr[k + 3])
                ev.append(_val(f, t, E, lam))
        _entry(report, f"Phi.S[gamma{k + 4}]", pv, ev,
               "middle factor uses j/m" if k == 1 and m != n else "")

    # u for each Q root
    Es = [lam * v for v in (0.5, 2.0, 5.0)]
    top = _nearest(fac, "S", 1, rs[0])
    for k in range(3):
        pv, ev = [], []
        for pp in range(1, m + 1):
            f = _nearest(fac, "Q", pp, rq[k])
            _, _, uE, u0 = branch_solution(Branch(f, top), lam)
            for E in Es:
                pv.append(-E / (2 * hb * wt) + 1 - pp / m + g_pr[k])
                ev.append(uE * E + u0)
        _entry(report, f"u{k + 1}", pv, ev)

    # energy of the gamma1/gamma4 branch
    pv, ev = [], []
    for pp, qq in itertools.product(range(1, m + 1), range(1, n + 1)):
        fq = _nearest(fac, "Q", pp, rq[0])
        fs = _nearest(fac, "S", qq, rs[0])
        E0, dE, _, _ = branch_solution(Branch(fq, fs), lam)
        for N in range(6):
            pv.append(hb * wt * (N + 2 - pp / m - qq / n + g_pr[0] + g_pr[3]))
            ev.append(E0 + dE * N)
    _entry(report, "E[gamma1,gamma4]", pv, ev)

    # constrained factors of the gamma1/gamma4 representation
    roles = [("Q", 0, "bottom"), ("Q", 1, "partner2"), ("Q", 2, "partner3"),
             ("S", 0, "top"), ("S", 1, "partner5"), ("S", 2, "partner6")]
    for side, k, name in roles:
        pv, ev = [], []
        for pp, qq, N in itertools.product(range(1, m + 1), range(1, n + 1), range(4)):
            fq = _nearest(fac, "Q", pp, rq[0])
            fs = _nearest(fac, "S", qq, rs[0])
            E0, dE, uE, u0 = branch_solution(Branch(fq, fs), lam)
            E = E0 + dE * N
            u = uE * E + u0
            count = m if side == "Q" else n
            for idx in range(1, count + 1):
                g = _nearest(fac, side, idx, (rq if side == "Q" else rs)[k])
                for x in range(N + 2):
                    if side == "Q":
                        pv.append(x + (idx - pp) / m + g_pr[0] - g_pr[k])
                    else:
                        pv.append(N + 1 - x + (idx - qq) / n + g_pr[3] - g_pr[3 + k])
                    ev.append(_val(g, x + u, E, lam))
        _entry(report, f"Phi_constrained.{side}_{name}", pv, ev)

    # overall constant: (hbar*omega-tilde)^6 per Q index
    printed_c = (hb * wt) ** (6 * m)
    engine_c = float(sf.constant)
    d = _entry(report, "prefactor", [printed_c], [engine_c])
    if d.classification == "constant_offset":
        d.classification, d.offset, d.scale = "uniform_scale", None, printed_c / engine_c
    if d.scale is not None:
        d.detail = "positive overall factor; no effect on zeros or positivity"
    report.patterns["gamma_scale"] = {}
    for i in range(6):
        d_g = report.by_item(f"gamma{i + 1}")
        if d_g.scale_law:
            law = d_g.scale_law
        elif d_g.scale is not None:
            law = f"{complex(d_g.scale).real:.12g}"
        else:
            law = d_g.classification
        report.patterns["gamma_scale"][f"gamma{i + 1}"] = law
    report.patterns["prefactor"] = {
        "printed": printed_c,
        "engine": engine_c,
        "ratio": printed_c / engine_c,
        "classification": d.classification,
        "effect": "none on zeros or positivity",
    }


def _params_dict(p) -> dict:
    out = {}
    for k, v in vars(p).items():
        out[k] = str(v) if not isinstance(v, int) else v
    return out


def audit_printed_forms(model: str, params=None) -> DiscrepancyReport:
    """Compare the closed forms for ``model`` with the engine.

    Parameters
    ----------
    model : {"toy", "caged", "painleve"}
    params : CagedParams or PainleveParams, optional
        Defaults to the unit-frequency parameter set of the model.

    Returns
    -------
    DiscrepancyReport
        ``to_dict()`` gives the machine-readable form.
    """
    runners: dict[str, tuple[Callable, Callable]] = {
        "caged": (CagedParams, _audit_caged),
        "painleve": (PainleveParams, _audit_painleve),
    }
    if model == "toy":
        report = DiscrepancyReport("toy", {})
        _audit_generic(report, toy_system())
        return report
    if model not in runners:
        raise ValueError(f"unknown model {model!r}")
    make, run = runners[model]
    if params is None:
        params = make()
    report = DiscrepancyReport(model, _params_dict(params))
    run(report, params)
    return report
