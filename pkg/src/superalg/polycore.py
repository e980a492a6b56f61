"""Univariate and bivariate polynomial arithmetic over exact or float scalars.

Exact mode uses :class:`fractions.Fraction` coefficients. Roots of low-degree
factors are returned as :class:`Surd` values, i.e. exact elements of a
multi-quadratic extension of the rationals, so that zero tests and sign tests
on structure functions stay exact even when the roots are irrational or
complex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from numbers import Number, Rational
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Surd",
    "Poly",
    "BiPoly",
    "DegenerateInputError",
    "NotSolvableError",
    "as_exact",
    "is_exact",
    "is_real",
    "sign",
    "poly_shift",
    "poly_eval",
    "poly_add",
    "poly_mul",
    "poly_roots",
    "exact_roots",
    "bivar_expand",
]


class DegenerateInputError(ValueError):
    pass


class NotSolvableError(ValueError):
    """Raised when exact roots cannot be expressed with square roots."""


# ---------------------------------------------------------------------------
# scalar helpers


def as_exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot make {x!r} exact")


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, Surd))


def is_real(x, tol: float = 1e-9) -> bool:
    if isinstance(x, Surd):
        return x.is_real
    if isinstance(x, complex):
        return abs(x.imag) <= tol * max(1.0, abs(x.real))
    return True


def sign(x, tol: float = 0.0) -> int:
    """Sign of a real scalar; for floats values within ``tol`` count as zero."""
    if isinstance(x, Surd):
        return x.sign()
    if isinstance(x, complex):
        x = x.real
    if abs(x) <= tol:
        return 0
    return 1 if x > 0 else -1


def _squarefree(n: int) -> tuple[int, int]:
    """Return (g, r) with n = g**2 * r and r squarefree (sign kept in r)."""
    s = -1 if n < 0 else 1
    n = abs(n)
    g, r = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            g *= p ** (e // 2)
            if e % 2:
                r *= p
        p += 1 if p == 2 else 2
    r *= n
    return g, s * r


class Surd:
    """Exact number ``sum_k c_k * sqrt(k)`` with rational ``c_k``.

    Keys are squarefree integers; ``1`` is the rational part and negative keys
    are imaginary radicals (``sqrt(-3) = i*sqrt(3)``). Distinct squarefree
    radicals are linearly independent over the rationals, so the stored form is
    canonical and equality is structural.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = {1: as_exact(terms)}
        self._terms = {k: Fraction(v) for k, v in terms.items() if v != 0}

    @classmethod
    def sqrt(cls, x) -> Surd:
        x = as_exact(x)
        if x == 0:
            return cls()
        # sqrt(p/q) = sqrt(p*q)/q
        g, r = _squarefree(x.numerator * x.denominator)
        return cls({r: Fraction(g, x.denominator)})

    @classmethod
    def coerce(cls, x) -> Surd:
        if isinstance(x, Surd):
            return x
        return cls(as_exact(x))

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    @property
    def is_rational(self) -> bool:
        return all(k == 1 for k in self._terms)

    @property
    def is_real(self) -> bool:
        return all(k > 0 for k in self._terms)

    def rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self._terms.get(1, Fraction(0))

    @property
    def real(self) -> Surd:
        return Surd({k: v for k, v in self._terms.items() if k > 0})

    @property
    def imag(self) -> Surd:
        # i*c*sqrt(s) -> c*sqrt(s)
        return Surd({-k: v for k, v in self._terms.items() if k < 0})

    def conjugate(self) -> Surd:
        return Surd({k: (-v if k < 0 else v) for k, v in self._terms.items()})

    def __add__(self, other):
        if isinstance(other, float):
            return float(self) + other
        if isinstance(other, complex):
            return complex(self) + other
        other = Surd.coerce(other)
        t = dict(self._terms)
        for k, v in other._terms.items():
            t[k] = t.get(k, 0) + v
        return Surd(t)

    __radd__ = __add__

    def __neg__(self):
        return Surd({k: -v for k, v in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, float):
            return float(self) * other if self.is_real else complex(self) * other
        if isinstance(other, complex):
            return complex(self) * other
        other = Surd.coerce(other)
        t: dict[int, Fraction] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                g = math.gcd(abs(a), abs(b))
                r = (a // g) * (b // g)
                c = ca * cb * g
                if a < 0 and b < 0:
                    # i*i = -1; (a/g)*(b/g) already positive
                    c = -c
                t[r] = t.get(r, 0) + c
        return Surd(t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) / other if not self.is_real else float(self) / other
        other = Surd.coerce(other)
        if other.is_rational:
            d = other.rational()
            if d == 0:
                raise ZeroDivisionError("division by zero surd")
            return Surd({k: v / d for k, v in self._terms.items()})
        # rationalise the denominator one radical at a time
        num, den = self, other
        while not den.is_rational:
            key = next(k for k in den._terms if k != 1)
            p = _prime_factor(abs(key)) if abs(key) != 1 else -1
            flip = _flip_radical(den, p)
            num, den = num * flip, den * flip
        return num / den

    def __rtruediv__(self, other):
        return Surd.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Surd(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) == other
        if isinstance(other, Number) or isinstance(other, Surd):
            try:
                other = Surd.coerce(other)
            except TypeError:
                return NotImplemented
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self.is_rational:
            return hash(self.rational())
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def _bounds(self, digits: int) -> tuple[Fraction, Fraction]:
        scale = 10**digits
        lo = hi = Fraction(0)
        for k, c in self._terms.items():
            if k == 1:
                lo += c
                hi += c
                continue
            r = math.isqrt(k * scale * scale)
            a, b = Fraction(r, scale), Fraction(r + 1, scale)
            if c > 0:
                lo, hi = lo + c * a, hi + c * b
            else:
                lo, hi = lo + c * b, hi + c * a
        return lo, hi

    def sign(self) -> int:
        """Exact sign of a real surd, using rigorous rational bounds."""
        if not self.is_real:
            raise ValueError(f"sign of non-real value {self}")
        if not self._terms:
            return 0
        digits = 20
        while True:
            lo, hi = self._bounds(digits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            digits *= 2

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        if not self.is_real:
            raise TypeError(f"{self} is not real")
        return float(sum(float(c) * math.sqrt(k) for k, c in self._terms.items()))

    def __complex__(self):
        z = 0j
        for k, c in self._terms.items():
            if k > 0:
                z += float(c) * math.sqrt(k)
            else:
                z += 1j * float(c) * math.sqrt(-k)
        return z

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for k in sorted(self._terms, key=lambda k: (k != 1, abs(k), k)):
            c = self._terms[k]
            parts.append(str(c) if k == 1 else f"{c}*sqrt({k})")
        return " + ".join(parts)

    def __repr__(self):
        return f"Surd({self})"

    @classmethod
    def parse(cls, text: str) -> Surd:
        """Inverse of ``str``."""
        out = cls()
        text = text.strip()
        if text == "0":
            return out
        for part in text.split(" + "):
            if "*sqrt(" in part:
                c, r = part.split("*sqrt(")
                out = out + Surd({int(r.rstrip(")")): Fraction(c)})
            else:
                out = out + Fraction(part)
        return out


def _prime_factor(n: int) -> int:
    p = 2
    while p * p <= n:
        if n % p == 0:
            return p
        p += 1
    return n


def _flip_radical(x: Surd, p: int) -> Surd:
    """Conjugate ``x`` under sqrt(p) -> -sqrt(p) (p = -1 flips i)."""
    t = {}
    for k, v in x.terms.items():
        if p == -1:
            flip = k < 0
        else:
            flip = k % p == 0
        t[k] = -v if flip else v
    return Surd(t)


# ---------------------------------------------------------------------------
# univariate


def _trim(coeffs: Iterable) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies ``x**k``."""

    coeffs: tuple = ()

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @classmethod
    def x(cls) -> Poly:
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> Poly:
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> Poly:
        p = cls((lead,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            raise DegenerateInputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def to_exact(self) -> Poly:
        return Poly(as_exact(c) for c in self.coeffs)

    def to_float(self) -> Poly:
        return Poly(float(c) for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly((1,))
        for _ in range(k):
            out = out * self
        return out

    def shift(self, c) -> Poly:
        """Return ``P(x + c)`` (Horner composition with ``x + c``)."""
        out = Poly()
        lin = Poly((c, 1))
        for a in reversed(self.coeffs):
            out = out * lin + a
        return out

    def derivative(self) -> Poly:
        return Poly(k * c for k, c in enumerate(self.coeffs) if k)

    def scale(self, c) -> Poly:
        return Poly(c * a for a in self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"{c}" if k == 0 else f"{c}*z" if k == 1 else f"{c}*z^{k}")
        return " + ".join(terms)


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly((x,))


def poly_shift(p: Poly, c) -> Poly:
    return p.shift(c)


def poly_eval(p: Poly, x):
    return p(x)


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


# ---------------------------------------------------------------------------
# roots

_CLUSTER_RTOL = 1e-8
# a k-fold root splits by ~eps**(1/k); wider neighbours merge only if p and p' both
# vanish at their centroid (the centroid of a split multiple root is accurate)
_MULTIPLE_RTOL = 1e-4


def _float_roots(p: Poly) -> list[complex]:
    c = np.array([complex(x) for x in p.coeffs])
    n = p.degree
    if n == 1:
        return [-c[0] / c[1]]
    # companion matrix of the monic polynomial
    comp = np.zeros((n, n), dtype=complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    roots = np.linalg.eigvals(comp)
    dp = p.derivative()
    polished = []
    for r in roots:
        r = complex(r)
        d = complex(dp(r))
        if d != 0:
            step = complex(p(r)) / d
            cand = r - step
            if abs(complex(p(cand))) <= abs(complex(p(r))):
                r = cand
        polished.append(r)
    return polished


def _cluster(roots: Sequence[complex], p: Poly | None = None) -> list[tuple[complex, int]]:
    groups: list[list[complex]] = []
    for r in sorted(roots, key=lambda z: (z.real, z.imag)):
        for grp in groups:
            centre = sum(grp) / len(grp)
            if abs(centre - r) <= _CLUSTER_RTOL * max(1.0, abs(r)):
                grp.append(r)
                break
        else:
            groups.append([r])
    if p is not None:
        groups = _merge_multiple(groups, p)
    res = []
    for members in groups:
        z = sum(members) / len(members)
        if abs(z.imag) <= _MULTIPLE_RTOL * max(1.0, abs(z)) and len(members) > 1:
            z = complex(z.real, 0.0)
        elif abs(z.imag) <= _CLUSTER_RTOL * max(1.0, abs(z)):
            z = complex(z.real, 0.0)
        res.append((z, len(members)))
    return res


def _merge_multiple(groups: list[list[complex]], p: Poly) -> list[list[complex]]:
    dp = p.derivative()
    scale = max(abs(complex(c)) for c in p.coeffs)
    merged = True
    while merged:
        merged = False
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                joint = groups[a] + groups[b]
                c = sum(joint) / len(joint)
                if abs(sum(groups[a]) / len(groups[a]) - sum(groups[b]) / len(groups[b])) > _MULTIPLE_RTOL * max(1.0, abs(c)):
                    continue
                bound = scale * max(1.0, abs(c)) ** p.degree
                if abs(complex(p(c))) <= 1e-12 * bound and abs(complex(dp(c))) <= 1e-6 * bound:
                    groups[a] = joint
                    del groups[b]
                    merged = True
                    break
            if merged:
                break
    return groups


def _order_pairs(roots: list[tuple]) -> list[tuple]:
    """Real roots first (ascending), then conjugate pairs adjacent (+imag first)."""

    def key(item):
        z = complex(item[0])
        return (abs(z.imag) > 0, round(z.real, 12), -z.imag)

    return sorted(roots, key=key)


def poly_roots(p: Poly, exact: bool | None = None) -> list[tuple]:
    """Roots of ``p`` with multiplicities.

    Parameters
    ----------
    p : Poly
        Polynomial of degree >= 1.
    exact : bool, optional
        ``True`` demands exact roots (:class:`Surd` values) and raises
        :class:`NotSolvableError` when they are out of reach; ``False`` returns
        complex floats from the companion matrix with one Newton polish step.
        ``None`` tries exact first for exact input.

    Returns
    -------
    list of (root, multiplicity)
        Real roots ascending, then complex-conjugate pairs adjacent.
    """
    if p.is_zero():
        raise DegenerateInputError("degenerate input: zero polynomial")
    if p.degree < 1:
        raise DegenerateInputError("degenerate input: constant polynomial has no roots")
    if exact is None:
        exact = p.exact
        if exact:
            try:
                return exact_roots(p)
            except NotSolvableError:
                return _order_pairs(_cluster(_float_roots(p), p))
    if exact:
        return exact_roots(p)
    return _order_pairs(_cluster(_float_roots(p), p))


def _deflate(p: Poly, r) -> Poly:
    """Synthetic division by (x - r); remainder is discarded."""
    c = p.coeffs
    out = [0] * (len(c) - 1)
    acc = 0
    for k in range(len(c) - 1, 0, -1):
        acc = acc * r + c[k]
        out[k - 1] = acc
    return Poly(out)


def _rational_candidates(p: Poly) -> list[Fraction]:
    cands = set()
    for z in _float_roots(p):
        if abs(z.imag) > 1e-6 * max(1.0, abs(z)):
            continue
        for lim in (10**3, 10**6, 10**9):
            cands.add(Fraction(z.real).limit_denominator(lim))
    return sorted(cands)


def exact_roots(p: Poly) -> list[tuple[Surd, int]]:
    """Exact roots of a rational polynomial.

    Rational roots are peeled off first (candidates suggested by the float
    roots, each confirmed by exact evaluation); what remains must have degree
    at most two and is solved by radicals.
    """
    p = p.to_exact()
    if p.degree < 1:
        raise DegenerateInputError("degenerate input: constant polynomial has no roots")
    found: dict[Fraction, int] = {}
    progress = True
    while p.degree > 2 and progress:
        progress = False
        for c in _rational_candidates(p):
            if p(c) == 0:
                p = _deflate(p, c)
                found[c] = found.get(c, 0) + 1
                progress = True
                break
    if p.degree > 2:
        raise NotSolvableError(f"cannot solve degree-{p.degree} factor by radicals: {p}")
    rest: list[Surd] = []
    if p.degree == 1:
        rest.append(Surd(-p.coeffs[0] / p.coeffs[1]))
    elif p.degree == 2:
        c0, c1, c2 = p.coeffs
        disc = c1 * c1 - 4 * c2 * c0
        sq = Surd.sqrt(disc)
        rest += [(Surd(-c1) + sq) / (2 * c2), (Surd(-c1) - sq) / (2 * c2)]
    out: dict[Surd, int] = {Surd(k): v for k, v in found.items()}
    for r in rest:
        out[r] = out.get(r, 0) + 1
    return _order_pairs(list(out.items()))


# ---------------------------------------------------------------------------
# bivariate in (H, A)


class BiPoly:
    """Sparse polynomial in two commuting variables ``H`` and ``A``.

    Stored as ``{(a, b): coeff}`` for monomials ``H**a * A**b``; zero
    coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def const(cls, c) -> BiPoly:
        return cls({(0, 0): c})

    @classmethod
    def affine(cls, cH, cA, c0) -> BiPoly:
        return cls({(1, 0): cH, (0, 1): cA, (0, 0): c0})

    def __add__(self, other):
        other = other if isinstance(other, BiPoly) else BiPoly.const(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return BiPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-(other if isinstance(other, BiPoly) else BiPoly.const(other)))

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            return BiPoly({k: v * other for k, v in self.terms.items()})
        t: dict = {}
        for (a1, b1), v1 in self.terms.items():
            for (a2, b2), v2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                t[k] = t.get(k, 0) + v1 * v2
        return BiPoly(t)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            other = BiPoly.const(other)
        return self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree_A(self) -> int:
        return max((b for _, b in self.terms), default=-1)

    @property
    def degree_H(self) -> int:
        return max((a for a, _ in self.terms), default=-1)

    def __call__(self, H, A):
        acc = 0
        for (a, b), v in self.terms.items():
            acc = acc + (H**a) * (A**b) * v
        return acc

    def shift_A(self, c) -> BiPoly:
        """Return ``F(H, A + c)``."""
        out = BiPoly()
        lin = BiPoly({(0, 1): 1, (0, 0): c})
        cache = {0: BiPoly.const(1)}
        for (a, b), v in self.terms.items():
            if b not in cache:
                p = BiPoly.const(1)
                for _ in range(b):
                    p = p * lin
                cache[b] = p
            out = out + cache[b] * BiPoly({(a, 0): v})
        return out

    def compose(self, p: Poly) -> BiPoly:
        """Return ``p(self)`` via Horner."""
        out = BiPoly()
        for c in reversed(p.coeffs):
            out = out * self + c
        return out

    def __repr__(self):
        items = sorted(self.terms.items())
        return "BiPoly(" + ", ".join(f"H^{a}A^{b}:{v}" for (a, b), v in items) + ")"


def bivar_expand(factors: Iterable[tuple[Poly, object, object, object]]) -> BiPoly:
    """Expand ``prod P(cH*H + cA*A + c0)`` over ``(P, cH, cA, c0)`` tuples."""
    return reduce(
        lambda acc, f: acc * BiPoly.affine(f[1], f[2], f[3]).compose(f[0]),
        factors,
        BiPoly.const(1),
    )
