"""Formal one-dimensional differential operators with Laurent-polynomial coefficients.

An operator is ``sum_j c_j(x) (d/dx)**j`` with each ``c_j`` a finite Laurent
polynomial in ``x``. Everything is exact (``Fraction`` coefficients); physical
parameters are bound to rational values before any operator is built.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .polycore import Poly, as_exact

__all__ = [
    "EXPONENT_FLOOR",
    "SingularityOrderError",
    "NotPolynomialInHError",
    "LaurentPoly",
    "DifferentialOperator",
    "Certificate",
    "op_compose",
    "op_commutator",
    "express_in_H",
    "certify_ladder",
]

EXPONENT_FLOOR = -6


class SingularityOrderError(ArithmeticError):
    pass


class NotPolynomialInHError(ValueError):
    def __init__(self, message: str, residual_norm):
        super().__init__(f"{message} (residual norm {residual_norm})")
        self.residual_norm = residual_norm


class LaurentPoly:
    """``sum_k a_k x**k`` over integer ``k >= EXPONENT_FLOOR``."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        t = {}
        for k, v in (terms or {}).items():
            if v == 0:
                continue
            if k < EXPONENT_FLOOR:
                raise SingularityOrderError(
                    f"singularity order exceeded: x^{k} below floor x^{EXPONENT_FLOOR}"
                )
            t[k] = as_exact(v)
        self.terms = t

    @classmethod
    def monomial(cls, k: int, c=1) -> LaurentPoly:
        return cls({k: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return LaurentPoly(t)

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly({k: v * other for k, v in self.terms.items()})
        t: dict[int, Fraction] = {}
        for a, va in self.terms.items():
            for b, vb in other.terms.items():
                t[a + b] = t.get(a + b, 0) + va * vb
        return LaurentPoly(t)

    __rmul__ = __mul__

    def derivative(self, r: int = 1) -> LaurentPoly:
        out = self
        for _ in range(r):
            out = LaurentPoly({k - 1: k * v for k, v in out.terms.items() if k != 0})
        return out

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    __hash__ = None

    def __call__(self, x):
        return sum(v * x**k for k, v in self.terms.items())

    def __repr__(self):
        return " + ".join(f"{v}*x^{k}" for k, v in sorted(self.terms.items())) or "0"


class DifferentialOperator:
    """``sum_j c_j(x) D**j`` stored as ``{j: LaurentPoly}``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, LaurentPoly] | None = None):
        self.coeffs = {j: c for j, c in (coeffs or {}).items() if not c.is_zero()}

    @classmethod
    def identity(cls) -> DifferentialOperator:
        return cls({0: LaurentPoly({0: 1})})

    @classmethod
    def d(cls, order: int = 1) -> DifferentialOperator:
        return cls({order: LaurentPoly({0: 1})})

    @classmethod
    def mult(cls, terms: dict[int, object]) -> DifferentialOperator:
        """Multiplication by the Laurent polynomial ``sum terms[k] x**k``."""
        return cls({0: LaurentPoly(terms)})

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], object]) -> DifferentialOperator:
        """Build from ``{(derivative order, x exponent): coeff}``."""
        out: dict[int, dict[int, object]] = {}
        for (j, k), v in terms.items():
            out.setdefault(j, {})[k] = v
        return cls({j: LaurentPoly(t) for j, t in out.items()})

    @property
    def order(self) -> int:
        return max(self.coeffs, default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def items(self):
        """Flattened ``((j, k), coeff)`` pairs, sorted."""
        for j in sorted(self.coeffs):
            for k in sorted(self.coeffs[j].terms):
                yield (j, k), self.coeffs[j].terms[k]

    def norm(self) -> Fraction:
        return max((abs(v) for _, v in self.items()), default=Fraction(0))

    def __add__(self, other: DifferentialOperator) -> DifferentialOperator:
        out = dict(self.coeffs)
        for j, c in other.coeffs.items():
            out[j] = out[j] + c if j in out else c
        return DifferentialOperator(out)

    def __neg__(self):
        return DifferentialOperator({j: -c for j, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, DifferentialOperator):
            return op_compose(self, other)
        return DifferentialOperator({j: c * as_exact(other) for j, c in self.coeffs.items()})

    def __rmul__(self, other):
        return DifferentialOperator({j: c * as_exact(other) for j, c in self.coeffs.items()})

    def __pow__(self, k: int):
        out = DifferentialOperator.identity()
        for _ in range(k):
            out = op_compose(out, self)
        return out

    def __eq__(self, other):
        return isinstance(other, DifferentialOperator) and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        parts = [f"({c})*D^{j}" for j, c in sorted(self.coeffs.items())]
        return "DifferentialOperator(" + " + ".join(parts) + ")"


def op_compose(L: DifferentialOperator, R: DifferentialOperator) -> DifferentialOperator:
    """``L o R`` by the Leibniz rule ``D^j d = sum_r C(j,r) d^(r) D^(j-r)``."""
    out: dict[int, LaurentPoly] = {}
    for j, cl in L.coeffs.items():
        for k, cr in R.coeffs.items():
            for r in range(j + 1):
                dr = cr.derivative(r)
                if dr.is_zero():
                    break
                term = cl * dr * comb(j, r)
                order = j - r + k
                out[order] = out[order] + term if order in out else term
    return DifferentialOperator(out)


def op_commutator(L: DifferentialOperator, R: DifferentialOperator) -> DifferentialOperator:
    return op_compose(L, R) - op_compose(R, L)


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> tuple[list[Fraction], bool]:
    """Exact solve of a possibly overdetermined linear system.

    Gauss-Jordan elimination over the rationals. Returns the solution (free
    unknowns set to zero) and whether the system is consistent.
    """
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, len(aug)) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        p = aug[row][col]
        aug[row] = [v / p for v in aug[row]]
        for i in range(len(aug)):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    consistent = all(r[-1] == 0 for r in aug[row:])
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = aug[i][-1]
    return x, consistent


def express_in_H(T: DifferentialOperator, H: DifferentialOperator, max_deg: int | None = None) -> Poly:
    """Find the polynomial ``Q`` with ``Q(H) = T`` as operators.

    Parameters
    ----------
    T, H : DifferentialOperator
    max_deg : int, optional
        Highest power of ``H`` to try. Defaults to ``order(T) // order(H)``.

    Raises
    ------
    NotPolynomialInHError
        If no exact representation exists up to ``max_deg``.
    """
    if max_deg is None:
        max_deg = max(T.order, 0) // max(H.order, 1)
    powers = [DifferentialOperator.identity()]
    for _ in range(max_deg):
        powers.append(op_compose(powers[-1], H))
    keys = sorted({k for P in powers + [T] for k, _ in P.items()})
    index = {k: i for i, k in enumerate(keys)}
    cols = []
    for P in powers:
        col = [Fraction(0)] * len(keys)
        for k, v in P.items():
            col[index[k]] = v
        cols.append(col)
    rhs = [Fraction(0)] * len(keys)
    for k, v in T.items():
        rhs[index[k]] = v
    rows = [[cols[a][i] for a in range(len(powers))] for i in range(len(keys))]
    sol, _ = _solve_exact(rows, rhs)
    Q = Poly(sol)
    residual = T - _poly_of_op(Q, powers)
    if not residual.is_zero():
        raise NotPolynomialInHError("not polynomial in H", residual.norm())
    return Q


def _poly_of_op(Q: Poly, powers: list[DifferentialOperator]) -> DifferentialOperator:
    out = DifferentialOperator()
    for c, P in zip(Q.coeffs, powers):
        if c != 0:
            out = out + P * c
    return out


@dataclass(frozen=True)
class Certificate:
    name: str
    passed: bool
    residual: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "residual": self.residual, "detail": self.detail}


def certify_ladder(H: DifferentialOperator, Aplus: DifferentialOperator, lam, name: str = "ladder") -> Certificate:
    """Check ``[H, Aplus] == lam * Aplus`` exactly."""
    residual = op_commutator(H, Aplus) - Aplus * as_exact(lam)
    return Certificate(name, residual.is_zero(), float(residual.norm()), f"lambda={as_exact(lam)}")
