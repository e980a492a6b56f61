"""Finite-dimensional unitary representations of the deformed oscillator algebra.

A representation of dimension ``N + 1`` needs a structure function with

    Phi(0) = 0,   Phi(N + 1) = 0,   Phi(x) > 0 for x = 1..N.

``Phi(0) = 0`` is imposed on one Q-side linear factor (fixing ``u`` as an
affine function of ``E``) and ``Phi(N + 1) = 0`` on one S-side factor (fixing
``E`` as an affine function of ``N``). Positivity is then checked directly.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .oscalg import LadderSystem, LinearFactor, build_F, lowest_weight_roots, structure_function
from .polycore import BiPoly, Surd, is_exact, is_real, sign
from .spectrum import DEFAULT_MERGE_RTOL, SpectrumTable, encode_scalar

__all__ = [
    "Branch",
    "RepresentationFamily",
    "RepresentationSet",
    "branch_solution",
    "enumerate_reps",
    "algebraic_spectrum",
    "validate_family",
]

log = logging.getLogger(__name__)

# N bound for mirrored branches when only e_max is given (their energies fall with N)
MIRROR_N_MAX = 64


@dataclass(frozen=True)
class Branch:
    bottom: LinearFactor
    top: LinearFactor
    mirrored: bool = False

    @property
    def id(self) -> str:
        tag = "mirror:" if self.mirrored else ""
        return f"{tag}{self.bottom.label}|{self.top.label}"


@dataclass
class RepresentationFamily:
    """One solution branch: ``E(N) = E0 + dE*N`` and ``u(E) = uE*E + u0``."""

    branch: Branch
    E0: object
    dE: object
    uE: object
    u0: object
    valid_N: list[int] = field(default_factory=list)
    phi_values: dict[int, list] = field(default_factory=dict)

    def energy(self, N: int):
        return self.E0 + self.dE * N

    def u(self, N: int):
        return self.uE * self.energy(N) + self.u0

    @staticmethod
    def dimension(N: int) -> int:
        return N + 1

    @property
    def exact(self) -> bool:
        return is_exact(self.E0) and is_exact(self.u0)

    def to_dict(self) -> dict:
        return {
            "branch": self.branch.id,
            "u": {"coef_E": encode_scalar(self.uE), "const": encode_scalar(self.u0)},
            "E_of_N": {"E0": encode_scalar(self.E0), "dE": encode_scalar(self.dE)},
            "dims": [self.dimension(N) for N in self.valid_N],
        }


@dataclass
class RepresentationSet:
    families: list[RepresentationFamily]
    skipped_complex: int = 0
    system: LadderSystem | None = None

    def __iter__(self) -> Iterator[RepresentationFamily]:
        return iter(self.families)

    def __len__(self):
        return len(self.families)

    def __getitem__(self, k):
        return self.families[k]


def _positive(v, scale: float, exact: bool) -> bool:
    if exact:
        return is_real(v) and sign(v) > 0
    z = complex(v)
    tol = 1e-9 * scale
    return abs(z.imag) <= tol and z.real > tol


def _key(vals, exact: bool):
    if exact:
        return tuple(vals)
    return tuple(round(float(complex(v).real), 8) for v in vals)


def branch_solution(br: Branch, lam):
    """``(E0, dE, uE, u0)`` solving ``Phi(0) = 0`` on ``br.bottom`` and
    ``Phi(N+1) = 0`` on ``br.top``: ``E(N) = E0 + dE*N``, ``u = uE*E + u0``."""
    half_inv = 1 / (2 * lam)
    if not br.mirrored:
        bq, bs = br.bottom.base, br.top.base
        return lam * (1 - bq - bs), lam, -half_inv, -bq
    bs, bq = br.bottom.base, br.top.base
    return -lam * (1 + bq + bs), -lam, half_inv, bs


def enumerate_reps(
    sys: LadderSystem,
    N_max: int | None = None,
    *,
    e_max=None,
    exact: bool | None = None,
    mirrored: bool = False,
) -> RepresentationSet:
    """Enumerate representation families of ``sys``.

    Parameters
    ----------
    sys : LadderSystem
    N_max : int, optional
        Largest ``N`` tried per branch (dimension ``N + 1``). Without it,
        ordinary branches run until ``E(N) > e_max`` and mirrored ones stop at
        ``MIRROR_N_MAX``.
    e_max : scalar, optional
        Stop a branch once ``E(N)`` exceeds this. One of ``N_max``/``e_max`` is
        required.
    exact : bool, optional
        Exact arithmetic on :class:`Surd` roots; defaults to ``sys.exact``.
    mirrored : bool
        Also try ``Phi(0) = 0`` on S-side and ``Phi(N+1) = 0`` on Q-side
        factors.

    Returns
    -------
    RepresentationSet
        Families with at least one admitted ``N``; branches needing complex
        ``E`` or ``u`` are counted in ``skipped_complex``.
    """
    if N_max is None and e_max is None:
        raise ValueError("need N_max or e_max")
    if exact is None:
        exact = sys.exact
    sf = structure_function(sys, exact=exact)
    lam = sf.lam
    const = sf.constant

    bottoms_q = _allowed(sys.Q, sys.lam_x, sys.lowest_weight, exact)
    bottoms_s = _allowed(sys.S, sys.lam_y, sys.lowest_weight, exact)
    q_factors = [f for f in sf.factors if f.side == "Q"]
    s_factors = [f for f in sf.factors if f.side == "S"]

    candidates: list[Branch] = []
    for fq, fs in itertools.product(q_factors, s_factors):
        if _member(fq.root, bottoms_q, exact) and _member(fs.root, bottoms_s, exact):
            candidates.append(Branch(fq, fs))
        if mirrored and _member(fs.root, bottoms_s, exact) and _member(fq.root, bottoms_q, exact):
            candidates.append(Branch(fs, fq, mirrored=True))
    seen_branch = set()
    uniq = []
    for br in candidates:
        k = (br.mirrored, _key([br.bottom.base, br.top.base], exact), br.bottom.side)
        if k not in seen_branch:
            seen_branch.add(k)
            uniq.append(br)

    families: list[RepresentationFamily] = []
    skipped = 0
    seen: list[tuple] = []
    for br in uniq:
        E0, dE, uE, u0 = branch_solution(br, lam)
        if not (is_real(E0) and is_real(u0)):
            skipped += 1
            continue
        if not exact:
            E0, u0 = complex(E0).real, complex(u0).real
        fam = RepresentationFamily(br, E0, dE, uE, u0)
        if N_max is not None:
            limit = N_max
        elif dE > 0:
            limit = max(0, int((float(e_max) - float(E0)) / float(dE)) + 1)
        else:
            limit = MIRROR_N_MAX
        for N in range(limit + 1):
            E = fam.energy(N)
            if e_max is not None and _above(E, e_max):
                if dE > 0:
                    break
                continue
            u = uE * E + u0
            values = _positive_profile(sf, const, E, u, N, exact)
            if values is None:
                continue
            key = _key([E, u, N], exact)
            if _seen(key, seen, exact):
                continue
            seen.append(key)
            fam.valid_N.append(N)
            fam.phi_values[N] = values
        if fam.valid_N:
            families.append(fam)
    log.debug("%s: %d families, %d complex branches skipped", sys.label, len(families), skipped)
    return RepresentationSet(families, skipped, sys)


def _above(E, e_max) -> bool:
    return float(E) > float(e_max) * (1 + 1e-12) + 1e-12


def _positive_profile(sf, const, E, u, N, exact):
    """``[Phi(1), ..., Phi(N)]`` if all positive, else ``None``."""
    values = []
    for x in range(1, N + 1):
        t = x + u
        v = const
        scale = abs(float(const))
        for f in sf.factors:
            fv = f.value(t, E, sf.lam)
            v = v * fv
            scale *= max(1.0, abs(complex(fv)))
        if not _positive(v, scale, exact):
            return None
        values.append(v)
    return values


def _seen(key, seen, exact) -> bool:
    if exact:
        return key in seen
    return any(
        all(abs(a - b) <= 1e-8 * max(1.0, abs(a)) for a, b in zip(key, k2)) for k2 in seen
    )


def _allowed(P, lam_axis, policy, exact):
    if P.degree < 1:
        return []
    return lowest_weight_roots(P, lam_axis, policy, exact=exact)


def _member(r, pool, exact) -> bool:
    if exact:
        return any(r == p for p in pool)
    return any(abs(complex(r) - complex(p)) <= 1e-8 * max(1.0, abs(complex(p))) for p in pool)


def algebraic_spectrum(
    sys: LadderSystem,
    N_max: int | None = None,
    E_max=None,
    *,
    exact: bool | None = None,
    mirrored: bool = False,
    reps: RepresentationSet | None = None,
) -> SpectrumTable:
    """Energy levels from the representation families.

    A family member of dimension ``N + 1`` contributes its energy with
    multiplicity ``N + 1``; identical representations reached from different
    branches are counted once (see :func:`enumerate_reps`).
    """
    if reps is None:
        reps = enumerate_reps(sys, N_max, e_max=E_max, exact=exact, mirrored=mirrored)
    entries = []
    for fam in reps:
        for N in fam.valid_N:
            E = fam.energy(N)
            if E_max is not None and float(E) > float(E_max) * (1 + 1e-12) + 1e-12:
                continue
            entries.append((E, fam.dimension(N), f"{fam.branch.id}@N={N}"))
    return SpectrumTable.from_entries(entries, "algebraic", DEFAULT_MERGE_RTOL)


class _PowerCache:
    def __init__(self, x):
        self.p = [Surd(1) if isinstance(x, Surd) else 1, x]

    def __getitem__(self, k):
        while len(self.p) <= k:
            self.p.append(self.p[-1] * self.p[1])
        return self.p[k]


def _eval_F(F: BiPoly, H, A):
    hp, ap = _PowerCache(H), _PowerCache(A)
    acc = 0
    for (a, b), v in F.terms.items():
        acc = acc + hp[a] * ap[b] * v
    return acc


def _F_scale(F: BiPoly, H, A) -> float:
    h, a = abs(complex(H)), abs(complex(A))
    return sum(abs(complex(v)) * h**i * a**j for (i, j), v in F.terms.items()) or 1.0


def validate_family(sys: LadderSystem, fam: RepresentationFamily, F: BiPoly | None = None) -> list[str]:
    """Re-check the representation conditions on the expanded ``F``.

    Uses ``Phi(x) = F(E, x + u)`` from :func:`~superalg.oscalg.build_F`, which
    is independent of the factored form used during enumeration. Exact when
    the family data are exact. Returns a list of violations (empty on success).
    """
    if F is None:
        F = build_F(sys)
    problems = []
    for N in fam.valid_N:
        E, u = fam.energy(N), fam.u(N)
        if isinstance(E, Fraction):
            E, u = Surd(E), Surd(u)
        exact = is_exact(E)

        def phi(x):
            return _eval_F(F, E, u + x)

        def zero(v, x):
            if exact:
                return v == 0
            return abs(complex(v)) <= 1e-9 * _F_scale(F, E, u + x)

        if not zero(phi(0), 0):
            problems.append(f"{fam.branch.id} N={N}: Phi(0) != 0")
        if not zero(phi(N + 1), N + 1):
            problems.append(f"{fam.branch.id} N={N}: Phi(N+1) != 0")
        for x in range(1, N + 1):
            v = phi(x)
            if exact:
                good = is_real(v) and sign(v) > 0
            else:
                good = complex(v).real > 0
            if not good:
                problems.append(f"{fam.branch.id} N={N}: Phi({x}) not positive")
    return problems
