"""Polynomial symmetry algebra of a separable ladder system and its
deformed-oscillator realisation.

Given ladder data ``(Q, S, lam_x, lam_y, m, n)`` with ``m*lam_x == n*lam_y``,
the integrals ``I+ = Ax'^m Ay^n`` and ``I- = Ax^m Ay'^n`` close on

    [A, I+-] = +-I+-,   [I-, I+] = F(H, A+1) - F(H, A),

with the structure polynomial

    F(H, A) = prod_{i=1..m} Q(H/2 + m lam_x A - (m-i) lam_x)
              * prod_{j=1..n} S(H/2 - n lam_y A + j lam_y).
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from .diffop import Certificate
from .polycore import BiPoly, Poly, Surd, bivar_expand, is_exact, poly_roots, sign

__all__ = [
    "LadderSystem",
    "LinearFactor",
    "StructureFunction",
    "DeformedOscillator",
    "build_F",
    "commutator_poly",
    "certify_difference_form",
    "phi_factors",
    "structure_function",
    "lowest_weight_roots",
    "random_ladder_system",
]

LowestWeight = Literal["all", "admissible", "largest"]


@dataclass(frozen=True)
class LadderSystem:
    """Ladder data driving the whole construction.

    ``lowest_weight`` says which roots of ``Q`` (resp. ``S``) may serve as the
    bottom of a one-dimensional ladder:

    * ``"all"``: every root;
    * ``"admissible"``: real roots ``r`` with ``Q(r + k*lam) > 0`` for all
      ``k >= 1`` (the norms of descending states stay positive);
    * ``"largest"``: only the largest admissible root, which is the regular
      solution selected by a hard wall at the origin.
    """

    Q: Poly
    S: Poly
    lam_x: object
    lam_y: object
    m: int
    n: int
    hbar: object = 1
    label: str = ""
    lowest_weight: LowestWeight = "admissible"

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive integers")
        if not (self.lam_x > 0 and self.lam_y > 0):
            raise ValueError("lam_x and lam_y must be positive")
        lhs, rhs = self.m * self.lam_x, self.n * self.lam_y
        if self.exact:
            ok = lhs == rhs
        else:
            ok = math.isclose(float(lhs), float(rhs), rel_tol=1e-12)
        if not ok:
            raise ValueError(f"m*lam_x != n*lam_y ({lhs} vs {rhs})")
        g = math.gcd(self.m, self.n)
        if g > 1:
            warnings.warn(
                f"non-minimal ratio (m, n) = ({self.m}, {self.n}) reduced by gcd {g}",
                stacklevel=3,
            )
            object.__setattr__(self, "m", self.m // g)
            object.__setattr__(self, "n", self.n // g)
        if self.lowest_weight not in ("all", "admissible", "largest"):
            raise ValueError(f"unknown lowest_weight policy {self.lowest_weight!r}")

    @property
    def exact(self) -> bool:
        return (
            self.Q.exact
            and self.S.exact
            and is_exact(self.lam_x)
            and is_exact(self.lam_y)
        )

    @property
    def lam(self):
        """Common step ``m*lam_x == n*lam_y``."""
        return self.m * self.lam_x

    def with_Q(self, Q: Poly) -> LadderSystem:
        return LadderSystem(Q, self.S, self.lam_x, self.lam_y, self.m, self.n,
                            self.hbar, self.label, self.lowest_weight)

    def to_float(self) -> LadderSystem:
        return LadderSystem(self.Q.to_float(), self.S.to_float(), float(self.lam_x),
                            float(self.lam_y), self.m, self.n, float(self.hbar),
                            self.label, self.lowest_weight)


def build_F(sys: LadderSystem) -> BiPoly:
    half = Fraction(1, 2) if sys.exact else 0.5
    m, n, lx, ly = sys.m, sys.n, sys.lam_x, sys.lam_y
    factors = [(sys.Q, half, m * lx, -(m - i) * lx) for i in range(1, m + 1)]
    factors += [(sys.S, half, -n * ly, j * ly) for j in range(1, n + 1)]
    return bivar_expand(factors)


def commutator_poly(sys: LadderSystem) -> BiPoly:
    """Right-hand side of ``[I-, I+]`` expanded from the two product terms."""
    half = Fraction(1, 2) if sys.exact else 0.5
    m, n, lx, ly = sys.m, sys.n, sys.lam_x, sys.lam_y
    first = [(sys.Q, half, m * lx, l * lx) for l in range(1, m + 1)]
    first += [(sys.S, half, -n * ly, -(n - k) * ly) for k in range(1, n + 1)]
    second = [(sys.Q, half, m * lx, -(m - i) * lx) for i in range(1, m + 1)]
    second += [(sys.S, half, -n * ly, j * ly) for j in range(1, n + 1)]
    return bivar_expand(first) - bivar_expand(second)


def certify_difference_form(sys: LadderSystem, F: BiPoly | None = None) -> Certificate:
    """Check ``commutator_poly(sys) == F(H, A+1) - F(H, A)`` exactly.

    ``F`` may be supplied to certify a candidate other than ``build_F(sys)``.
    """
    if not sys.exact:
        raise ValueError("difference-form certification requires exact arithmetic")
    if F is None:
        F = build_F(sys)
    diff = commutator_poly(sys) - (F.shift_A(1) - F)
    residual = max((abs(v) for v in diff.terms.values()), default=0)
    return Certificate(
        f"difference_form[{sys.label or 'system'}]",
        diff.is_zero(),
        float(residual),
        f"m={sys.m} n={sys.n} degQ={sys.Q.degree} degS={sys.S.degree}",
    )


@dataclass(frozen=True)
class LinearFactor:
    """Factor ``sign*t + E/(2*lam) + base`` of the structure function in ``t = x + u``."""

    side: Literal["Q", "S"]
    index: int
    root: object
    base: object

    @property
    def sign(self) -> int:
        return 1 if self.side == "Q" else -1

    def offset(self, E, lam):
        return E / (2 * lam) + self.base

    def value(self, t, E, lam):
        return self.sign * t + self.offset(E, lam)

    @property
    def label(self) -> str:
        return f"{self.side}{self.index}:{self.root}"


@dataclass(frozen=True)
class StructureFunction:
    """Factored ``Phi(x) = constant * prod factor(x + u)`` at fixed energy."""

    constant: object
    factors: tuple[LinearFactor, ...]
    lam: object

    def value(self, t, E):
        acc = self.constant
        for f in self.factors:
            acc = acc * f.value(t, E, self.lam)
        return acc

    def __call__(self, x, u, E):
        return self.value(x + u, E)


def _roots_list(P: Poly, exact: bool):
    out = []
    for r, mult in poly_roots(P, exact=exact):
        out += [r] * mult
    return out


def structure_function(sys: LadderSystem, exact: bool | None = None) -> StructureFunction:
    """Energy-independent factor data of ``F``.

    Each root ``r`` of ``Q`` and index ``i`` contributes
    ``t + (E/2 - r)/lam - (m-i)/m``; each root ``s`` of ``S`` and index ``j``
    contributes ``-t + (E/2 - s)/lam + j/n``. The constant is
    ``lc(Q)^m lc(S)^n lam^(m degQ + n degS)``.
    """
    if exact is None:
        exact = sys.exact
    lam = sys.lam if exact else float(sys.lam)
    one = Fraction(1) if exact else 1.0
    factors = []
    for r in (_roots_list(sys.Q, exact) if sys.Q.degree > 0 else []):
        for i in range(1, sys.m + 1):
            factors.append(LinearFactor("Q", i, r, -r / lam - one * (sys.m - i) / sys.m))
    for s in (_roots_list(sys.S, exact) if sys.S.degree > 0 else []):
        for j in range(1, sys.n + 1):
            factors.append(LinearFactor("S", j, s, -s / lam + one * j / sys.n))
    dq, ds = max(sys.Q.degree, 0), max(sys.S.degree, 0)
    const = sys.Q.lc**sys.m * sys.S.lc**sys.n * lam ** (sys.m * dq + sys.n * ds)
    if not exact:
        const = float(const)
    return StructureFunction(const, tuple(factors), lam)


def phi_factors(sys: LadderSystem, E, exact: bool | None = None) -> tuple[object, list[tuple[LinearFactor, int, object]]]:
    """Factors of ``Phi`` at energy ``E`` as ``(factor, sign, offset)``.

    Each factor's value is ``sign*t + offset`` with ``t = x + u``; the first
    element of the returned pair is the positive overall constant.
    """
    sf = structure_function(sys, exact)
    return sf.constant, [(f, f.sign, f.offset(E, sf.lam)) for f in sf.factors]


def lowest_weight_roots(P: Poly, lam, policy: LowestWeight = "admissible", exact: bool | None = None) -> list:
    """Roots of ``P`` allowed to sit at the bottom of a one-dimensional ladder."""
    if P.degree < 1:
        return []
    if exact is None:
        exact = P.exact
    roots = [r for r, _ in poly_roots(P, exact=exact)]
    if policy == "all":
        return roots
    real = []
    for r in roots:
        if isinstance(r, Surd):
            if r.is_real:
                real.append(r)
        elif abs(complex(r).imag) <= 1e-9 * max(1.0, abs(r)):
            real.append(complex(r).real)
    top = max(real, default=None)
    admissible = []
    for r in real:
        if _ladder_positive(P, r, lam, top):
            admissible.append(r)
    if policy == "largest":
        return [max(admissible)] if admissible else []
    return admissible


def _ladder_positive(P: Poly, r, lam, top) -> bool:
    if sign(P.lc) <= 0:
        return False
    k = 1
    while True:
        z = r + k * lam
        s = sign(P(z), tol=1e-9 * max(1.0, abs(float(P.lc))))
        if s <= 0:
            return False
        if z > top:
            return True
        k += 1


@dataclass
class DeformedOscillator:
    """``b' = I+``, ``b = I-``, ``N = A - u`` with ``Phi(H, N) = F(H, N + u)``."""

    system: LadderSystem
    F: BiPoly = field(default=None)
    u: object = 0

    def __post_init__(self):
        if self.F is None:
            self.F = build_F(self.system)

    def phi(self, E, x):
        return self.F(E, x + self.u)


def _rand_frac(rng: random.Random, lo: int = -9, hi: int = 9, den: int = 7) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_ladder_system(rng: random.Random, max_deg: int = 3, max_mn: int = 4) -> LadderSystem:
    """Random exact ladder data: rational ``Q``, ``S`` of degree ``<= max_deg``
    and coprime ``m, n <= max_mn`` with ``m*lam_x == n*lam_y``."""

    def poly() -> Poly:
        deg = rng.randint(0, max_deg)
        coeffs = [_rand_frac(rng) for _ in range(deg)]
        lead = Fraction(0)
        while lead == 0:
            lead = _rand_frac(rng)
        return Poly(coeffs + [lead])

    while True:
        m, n = rng.randint(1, max_mn), rng.randint(1, max_mn)
        if math.gcd(m, n) == 1:
            break
    lam = Fraction(rng.randint(1, 12), rng.randint(1, 5))
    return LadderSystem(poly(), poly(), lam / m, lam / n, m, n, label=f"random(m={m},n={n})")
