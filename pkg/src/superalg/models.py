"""System catalog: caged anisotropic oscillator and the Painleve IV family.

Caged oscillator::

    H = Px^2/2 + Py^2/2 + omega^2 (kx^2 x^2 + ky^2 y^2)/2 + l1/x^2 + l2/y^2

with second-order ladder operators per axis (steps ``2 hbar kx omega`` and
``2 hbar ky omega``). The Painleve IV family uses third-order ladders whose
commutator data ``Q``, ``S`` are cubic polynomials supplied in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Literal

import numpy as np

from .diffop import Certificate, DifferentialOperator, certify_ladder, express_in_H, op_commutator
from .oscalg import LadderSystem
from .polycore import Poly, Surd, as_exact
from .spectrum import SpectrumTable

__all__ = [
    "CagedParams",
    "PainleveParams",
    "RationalP4Solution",
    "PoleInGridError",
    "toy_system",
    "caged_hamiltonian",
    "caged_ladder_ops",
    "caged_printed_Q",
    "caged_derived_Q",
    "caged_system",
    "caged_axis_certificates",
    "caged_exact_level",
    "caged_exact_levels",
    "caged_oracle_spectrum",
    "painleve_Q",
    "painleve_system",
    "painleve_potential",
    "rational_p4",
    "p4_rhs",
    "MODELS",
]

MODELS = {
    "toy": "Q = S = z, lam_x = lam_y = 1, m = n = 1",
    "caged": "caged anisotropic oscillator (kx, ky, l1, l2, omega, hbar)",
    "painleve": "Painleve IV potentials (omega1, omega2, m, n, alpha_i, beta_i, eps_i, hbar)",
}


def toy_system() -> LadderSystem:
    """``Q = S = z`` with unit steps: ``E = N`` with degeneracy ``N + 1``."""
    z = Poly([0, 1])
    return LadderSystem(z, z, Fraction(1), Fraction(1), 1, 1, Fraction(1), "toy", "all")


class PoleInGridError(ValueError):
    def __init__(self, poles):
        self.poles = list(poles)
        super().__init__(f"f has poles inside the grid at {self.poles}")


@dataclass(frozen=True)
class CagedParams:
    omega: Fraction = Fraction(1)
    kx: int = 1
    ky: int = 1
    l1: Fraction = Fraction(0)
    l2: Fraction = Fraction(0)
    hbar: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("omega", "l1", "l2", "hbar"):
            object.__setattr__(self, name, as_exact(getattr(self, name)))
        if self.omega <= 0 or self.hbar <= 0:
            raise ValueError("omega and hbar must be positive")
        if not (isinstance(self.kx, int) and isinstance(self.ky, int)) or self.kx < 1 or self.ky < 1:
            raise ValueError("kx and ky must be positive integers")
        if self.l1 < 0 or self.l2 < 0:
            raise ValueError("l1 and l2 must be non-negative")

    def axis(self, axis: str) -> tuple[int, Fraction]:
        if axis == "x":
            return self.kx, self.l1
        if axis == "y":
            return self.ky, self.l2
        raise ValueError(f"axis must be 'x' or 'y', not {axis!r}")

    def nu(self, axis: str) -> Surd:
        _, l = self.axis(axis)
        return Surd.sqrt(1 + 8 * l / self.hbar**2)


def caged_hamiltonian(p: CagedParams, axis: str = "x") -> DifferentialOperator:
    k, l = p.axis(axis)
    w, hb = p.omega, p.hbar
    return DifferentialOperator.from_terms({(2, 0): -hb**2 / 2, (0, 2): w**2 * k**2 / 2, (0, -2): l})


def caged_ladder_ops(p: CagedParams, axis: str = "x"):
    """``(A, A_dagger, H_axis)`` for one axis of the caged oscillator.

    Both axes use the same form; ``A_dagger`` raises the energy by
    ``2 hbar k omega``.
    """
    k, l = p.axis(axis)
    w, hb = p.omega, p.hbar
    a = hb / (w * k)
    b = w * k / hb
    c = -2 * l / (w * k * hb)
    quarter = Fraction(-1, 4)
    raising = DifferentialOperator.from_terms({(2, 0): a, (1, 1): -2, (0, 2): b, (0, -2): c, (0, 0): -1})
    lowering = DifferentialOperator.from_terms({(2, 0): a, (1, 1): 2, (0, 2): b, (0, -2): c, (0, 0): 1})
    return lowering * quarter, raising * quarter, caged_hamiltonian(p, axis)


def caged_printed_Q(p: CagedParams, axis: str = "x") -> Poly:
    k, l = p.axis(axis)
    w, hb = p.omega, p.hbar
    return Poly([Fraction(3, 16) - l / (2 * hb**2), -1 / (2 * hb * k * w), 1 / (4 * hb**2 * k**2 * w**2)])


def caged_derived_Q(p: CagedParams, axis: str = "x") -> Poly:
    A, Ad, H = caged_ladder_ops(p, axis)
    return express_in_H(Ad * A, H)


def caged_system(p: CagedParams, source: Literal["derived", "printed"] = "derived") -> LadderSystem:
    """Ladder data for the caged oscillator.

    The integral exponents follow ``m*lam_x == n*lam_y`` with
    ``lam_x = 2 hbar kx omega``: ``m = ky/g``, ``n = kx/g``, ``g = gcd(kx, ky)``.
    The hard wall at the origin selects the regular (largest admissible)
    lowest weight on each axis.
    """
    if source == "derived":
        Q, S = caged_derived_Q(p, "x"), caged_derived_Q(p, "y")
    elif source == "printed":
        Q, S = caged_printed_Q(p, "x"), caged_printed_Q(p, "y")
    else:
        raise ValueError(f"unknown Q source {source!r}")
    lam_x = 2 * p.hbar * p.kx * p.omega
    lam_y = 2 * p.hbar * p.ky * p.omega
    return LadderSystem(Q, S, lam_x, lam_y, p.ky, p.kx, p.hbar,
                        f"caged(kx={p.kx},ky={p.ky},l1={p.l1},l2={p.l2},{source})", "largest")


def caged_axis_certificates(p: CagedParams, axis: str = "x", Q: Poly | None = None) -> list[Certificate]:
    """Exact checks of one axis of the caged oscillator.

    * ``[H, A_dagger] == lam * A_dagger`` with ``lam = 2 hbar k omega``;
    * ``[A, A_dagger]`` written in ``H`` equals ``Q(H + lam) - Q(H)``, for ``Q``
      (default: the derived ``express_in_H(A_dagger A)``);
    * the derived ``Q`` coincides with the closed-form ``Q``.
    """
    k, _ = p.axis(axis)
    A, Ad, H = caged_ladder_ops(p, axis)
    lam = 2 * p.hbar * k * p.omega
    derived = express_in_H(Ad * A, H)
    if Q is None:
        Q = derived
    certs = [certify_ladder(H, Ad, lam, f"ladder[{axis}]")]
    comm = express_in_H(op_commutator(A, Ad), H)
    diff = comm - (Q.shift(lam) - Q)
    certs.append(Certificate(f"commutator_difference[{axis}]", diff.is_zero(),
                             float(max((abs(c) for c in diff.coeffs), default=0)),
                             f"[A,A'] = {comm}"))
    gap = derived - caged_printed_Q(p, axis)
    certs.append(Certificate(f"closed_form_Q[{axis}]", gap.is_zero(),
                             float(max((abs(c) for c in gap.coeffs), default=0)),
                             f"Q = {derived}"))
    return certs


def caged_exact_level(p: CagedParams, axis: str, nq: int) -> Surd:
    """Singular-oscillator level ``hbar*k*omega*(2 nq + 1 + nu/2)``."""
    if nq < 0:
        raise ValueError("quantum number must be >= 0")
    k, _ = p.axis(axis)
    return p.hbar * k * p.omega * (2 * nq + 1 + p.nu(axis) / 2)


def caged_exact_levels(p: CagedParams, axis: str, e_max) -> list[Surd]:
    out = []
    nq = 0
    while True:
        e = caged_exact_level(p, axis, nq)
        if e > e_max:
            return out
        out.append(e)
        nq += 1


def caged_oracle_spectrum(p: CagedParams, e_max) -> SpectrumTable:
    """Separable oracle: all sums of exact 1D levels up to ``e_max``."""
    from .specnum import assemble_2d

    ex = caged_exact_levels(p, "x", e_max)
    ey = caged_exact_levels(p, "y", e_max)
    return assemble_2d(ex, ey, e_max, merge_tol=0.0)


# ---------------------------------------------------------------------------
# Painleve IV family


@dataclass(frozen=True)
class PainleveParams:
    omega1: Fraction = Fraction(1)
    omega2: Fraction = Fraction(1)
    m: int = 1
    n: int = 1
    alpha1: Fraction = Fraction(0)
    beta1: Fraction = Fraction(-2, 9)
    alpha2: Fraction = Fraction(0)
    beta2: Fraction = Fraction(-2, 9)
    eps1: int = 1
    eps2: int = 1
    hbar: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("omega1", "omega2", "alpha1", "beta1", "alpha2", "beta2", "hbar"):
            object.__setattr__(self, name, as_exact(getattr(self, name)))
        if self.omega1 <= 0 or self.omega2 <= 0 or self.hbar <= 0:
            raise ValueError("frequencies and hbar must be positive")
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive integers")
        if self.m * self.omega1 != self.n * self.omega2:
            raise ValueError(f"m*omega1 != n*omega2 ({self.m}*{self.omega1} vs {self.n}*{self.omega2})")
        if self.eps1 not in (1, -1) or self.eps2 not in (1, -1):
            raise ValueError("eps1 and eps2 must be +1 or -1")

    def axis(self, axis: str):
        if axis == "x":
            return self.omega1, self.alpha1, self.beta1, self.eps1
        if axis == "y":
            return self.omega2, self.alpha2, self.beta2, self.eps2
        raise ValueError(f"axis must be 'x' or 'y', not {axis!r}")


def painleve_Q(hbar, omega, alpha, beta, eps) -> Poly:
    """Cubic ``8 (z - a)((z - c)^2 + omega^2 hbar^2 beta / 8)``."""
    a = hbar * omega / 3 * (-alpha + eps + 3)
    c = hbar * omega / 3 * (alpha / 2 + 4 * eps - Fraction(3, 2))
    lin = Poly([-a, 1])
    quad = Poly([-c, 1]) ** 2 + omega**2 * hbar**2 * beta / 8
    return lin * quad * 8


def painleve_system(p: PainleveParams) -> LadderSystem:
    # the frequency in each cubic is that of its own axis
    Q = painleve_Q(p.hbar, p.omega1, p.alpha1, p.beta1, p.eps1)
    S = painleve_Q(p.hbar, p.omega2, p.alpha2, p.beta2, p.eps2)
    return LadderSystem(Q, S, p.hbar * p.omega1, p.hbar * p.omega2, p.m, p.n, p.hbar,
                        f"painleve(m={p.m},n={p.n})", "admissible")


@dataclass(frozen=True)
class RationalP4Solution:
    kind: str
    f: Callable
    fprime: Callable
    alpha: Fraction
    beta: Fraction
    poles: tuple[float, ...] = ()


def rational_p4(kind: str) -> RationalP4Solution:
    """Closed-form special solutions used as anchors."""
    if kind == "minus2x":
        return RationalP4Solution(kind, lambda z: -2 * np.asarray(z, float),
                                  lambda z: np.full_like(np.asarray(z, float), -2.0),
                                  Fraction(0), Fraction(-2))
    if kind == "minus2x_over3":
        return RationalP4Solution(kind, lambda z: -2 * np.asarray(z, float) / 3,
                                  lambda z: np.full_like(np.asarray(z, float), -2 / 3),
                                  Fraction(0), Fraction(-2, 9))
    if kind == "one_over_x":
        return RationalP4Solution(kind, lambda z: 1 / np.asarray(z, float),
                                  lambda z: -1 / np.asarray(z, float) ** 2,
                                  Fraction(2), Fraction(-2), poles=(0.0,))
    raise ValueError(f"unknown rational solution {kind!r}")


def p4_rhs(z, f, fp, alpha, beta):
    """``f'' = f'^2/(2f) + 3/2 f^3 + 4 z f^2 + 2 (z^2 - alpha) f + beta/f``."""
    return fp * fp / (2 * f) + 3 * f**3 / 2 + 4 * z * f * f + 2 * (z * z - alpha) * f + beta / f


def painleve_potential(
    p: PainleveParams,
    axis: str,
    f: Callable,
    fprime: Callable,
    x: np.ndarray,
    poles=(),
) -> np.ndarray:
    """Pointwise ``g(x)`` on the grid ``x`` for transcendent values ``f(z)``.

    ``z = sqrt(omega/hbar) x``; ``fprime`` is the derivative with respect to
    ``z``. Raises :class:`PoleInGridError` if a pole of ``f`` lies in the grid
    span or ``f`` is not finite on a node.
    """
    omega, alpha, _, eps = p.axis(axis)
    w, hb = float(omega), float(p.hbar)
    x = np.asarray(x, dtype=float)
    scale = math.sqrt(w / hb)
    z = scale * x
    inside = [q for q in poles if z.min() <= q <= z.max()]
    if inside:
        raise PoleInGridError([q / scale for q in inside])
    with np.errstate(all="ignore"):
        fv = np.asarray(f(z), dtype=float)
        fpv = np.asarray(fprime(z), dtype=float)
    bad = ~(np.isfinite(fv) & np.isfinite(fpv))
    if bad.any():
        raise PoleInGridError(x[bad].tolist())
    return (
        w**2 * x**2 / 2
        + hb * w * eps / 2 * fpv
        + w * hb / 2 * fv**2
        + w * math.sqrt(hb * w) * x * fv
        + hb * w / 3 * (-float(alpha) + eps)
    )
