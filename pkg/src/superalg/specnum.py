"""Finite-difference spectra of one-dimensional Hamiltonians and their
separable two-dimensional sums.

The 1D solver discretises ``-(hbar^2/2) d^2/dx^2 + V`` with the 3-point
Laplacian and Dirichlet ends, diagonalises the tridiagonal matrix with
LAPACK, and Richardson-extrapolates the ``O(h^2)`` error away using a
sequence of halved grids.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .polycore import is_exact
from .spectrum import DEFAULT_MERGE_RTOL, SpectrumTable

__all__ = [
    "Grid1D",
    "EigenResult",
    "ComparisonReport",
    "eigen_1d",
    "assemble_2d",
    "compare_spectra",
]

# V(x_max) should exceed the top requested level by this factor
TRUNCATION_FACTOR = 3.0


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid with Dirichlet conditions at ``x_min`` and ``x_max``.

    With ``offset=False`` the nodes are the ``points`` interior points
    ``x_min + k*h``, ``h = (x_max - x_min)/(points + 1)``. With ``offset=True``
    they sit at cell centres ``x_min + (k + 1/2) h``, ``h = (x_max -
    x_min)/points``, so a potential singular at ``x_min`` is never evaluated
    there; the walls are imposed through odd-reflected ghost nodes.
    """

    x_min: float
    x_max: float
    points: int
    offset: bool = False

    def __post_init__(self):
        if self.points < 3:
            raise ValueError("a grid needs at least 3 points")
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be below x_max")

    @classmethod
    def half_line(cls, x_max: float, points: int) -> Grid1D:
        """Offset grid on ``(0, x_max)`` for potentials with an ``x^-2`` wall."""
        return cls(0.0, x_max, points, offset=True)

    @property
    def boundary(self) -> str:
        return "dirichlet"

    @property
    def h(self) -> float:
        span = self.x_max - self.x_min
        return span / self.points if self.offset else span / (self.points + 1)

    @property
    def nodes(self) -> np.ndarray:
        k = np.arange(self.points)
        if self.offset:
            return self.x_min + (k + 0.5) * self.h
        return self.x_min + (k + 1) * self.h

    def refined(self) -> Grid1D:
        """Same interval, half the spacing."""
        pts = 2 * self.points if self.offset else 2 * self.points + 1
        return Grid1D(self.x_min, self.x_max, pts, self.offset)


@dataclass
class EigenResult:
    """Extrapolated levels with the raw per-grid values behind them.

    ``richardson_estimate`` is the size of the last extrapolation correction
    for each level, a conservative error estimate for ``levels``.
    """

    levels: np.ndarray
    grid: Grid1D
    richardson_estimate: np.ndarray
    raw: list[np.ndarray] = field(default_factory=list)

    def __len__(self):
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    def __getitem__(self, k):
        return self.levels[k]

    @property
    def finest_points(self) -> int:
        g = self.grid
        for _ in range(len(self.raw) - 1):
            g = g.refined()
        return g.points


def _fd_levels(V: Callable, grid: Grid1D, count: int, hbar: float) -> np.ndarray:
    x = grid.nodes
    with np.errstate(all="ignore"):
        v = np.asarray(V(x), dtype=float) * np.ones_like(x)
    bad = ~np.isfinite(v)
    if bad.any():
        raise ValueError(f"potential is not finite at grid node x={float(x[bad][0])!r}")
    t = hbar * hbar / (2 * grid.h * grid.h)
    d = v + 2 * t
    if grid.offset:
        d[0] += t
        d[-1] += t
    e = np.full(len(x) - 1, -t)
    return eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, count - 1))


def eigen_1d(
    V: Callable,
    grid: Grid1D,
    count: int = 5,
    hbar: float = 1.0,
    refinements: int = 1,
) -> EigenResult:
    """Lowest ``count`` levels of ``-(hbar^2/2) d^2 + V``.

    Parameters
    ----------
    V : callable
        Vectorised potential.
    grid : Grid1D
        Coarsest grid; each refinement halves its spacing.
    count : int
        Number of levels.
    hbar : float
    refinements : int
        Number of halvings. One gives the ``(h, h/2)`` extrapolation; two
        add ``h/4`` and cancel the ``h^4`` term as well.

    Returns
    -------
    EigenResult

    Warns
    -----
    UserWarning
        When ``V`` at a truncation wall is below ``TRUNCATION_FACTOR`` times
        the top computed level.
    """
    if count < 1 or count > grid.points:
        raise ValueError(f"count must be in 1..{grid.points}")
    if refinements < 0:
        raise ValueError("refinements must be >= 0")
    hbar = float(hbar)
    grids = [grid]
    for _ in range(refinements):
        grids.append(grids[-1].refined())
    raw = [_fd_levels(V, g, count, hbar) for g in grids]

    # Richardson table on h^2, h^4, ...
    table = list(raw)
    last = table[-1]
    for order in range(1, len(raw)):
        f = 4.0**order
        last = table[-1]
        table = [(f * table[i + 1] - table[i]) / (f - 1) for i in range(len(table) - 1)]
    levels = table[-1]
    correction = np.abs(levels - last) if len(raw) > 1 else np.full(count, np.inf)

    top = float(levels[-1])
    walls = []
    if not (grid.offset and grid.x_min == 0.0):
        walls.append(grid.x_min)
    walls.append(grid.x_max)
    with np.errstate(all="ignore"):
        vw = [float(np.asarray(V(np.array([w])), dtype=float).ravel()[0]) for w in walls]
    for w, val in zip(walls, vw):
        if math.isfinite(val) and val < TRUNCATION_FACTOR * top:
            warnings.warn(
                f"domain truncation: V({w}) = {val:.4g} is below {TRUNCATION_FACTOR:g}x the "
                f"top level {top:.4g}",
                stacklevel=2,
            )
    return EigenResult(levels, grid, correction, raw)


def assemble_2d(
    ex: Sequence,
    ey: Sequence,
    e_max,
    merge_tol: float = DEFAULT_MERGE_RTOL,
) -> SpectrumTable:
    """Separable 2D spectrum: every sum ``ex[i] + ey[j] <= e_max``.

    Exact inputs are summed and merged exactly (provenance ``"oracle"``);
    floats are merged when they agree to ``merge_tol`` relative (provenance
    ``"numeric"``). Multiplicities count index pairs. The table is complete
    only if each input holds every 1D level up to ``e_max`` minus the other
    axis's ground level.
    """
    ex, ey = list(ex), list(ey)
    exact = all(is_exact(v) for v in ex + ey)
    if not exact:
        ex, ey = [float(v) for v in ex], [float(v) for v in ey]
    cut = float(e_max) * (1 + 1e-12) + 1e-12
    entries = []
    for a in ex:
        for b in ey:
            s = a + b
            if (s <= e_max) if exact and is_exact(e_max) else (float(s) <= cut):
                entries.append((s, 1))
    return SpectrumTable.from_entries(entries, "oracle" if exact else "numeric", merge_tol)


@dataclass
class ComparisonReport:
    """Level-by-level comparison of two spectra, ``a`` against ``b``.

    Deviations are ``E_a - E_b`` on levels paired in sorted order.
    """

    n_compared: int
    max_abs_deviation: float
    max_rel_deviation: float
    multiplicity_mismatches: list[tuple[int, int, int]]
    unmatched_a: int
    unmatched_b: int
    offset: float
    offset_residual: float
    tol: float
    deviations: list[float] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        """Energies within ``tol`` relative, multiplicities and lengths equal."""
        return (
            self.max_rel_deviation <= self.tol
            and not self.multiplicity_mismatches
            and self.unmatched_a == 0
            and self.unmatched_b == 0
        )

    @property
    def offset_passed(self) -> bool:
        """Equal up to a constant shift."""
        return (
            self.offset_residual <= self.tol
            and not self.multiplicity_mismatches
            and self.unmatched_a == 0
            and self.unmatched_b == 0
        )

    def to_dict(self) -> dict:
        return {
            "n_compared": self.n_compared,
            "max_abs_deviation": self.max_abs_deviation,
            "max_rel_deviation": self.max_rel_deviation,
            "multiplicity_mismatches": [list(t) for t in self.multiplicity_mismatches],
            "unmatched_a": self.unmatched_a,
            "unmatched_b": self.unmatched_b,
            "offset": self.offset,
            "offset_residual": self.offset_residual,
            "tol": self.tol,
            "passed": self.passed,
            "offset_passed": self.offset_passed,
        }


def compare_spectra(a: SpectrumTable, b: SpectrumTable, tol: float = 1e-9) -> ComparisonReport:
    """Pair the levels of ``a`` and ``b`` in sorted order and report differences.

    The best-fit offset is the mean of ``E_a - E_b``; ``offset_residual`` is
    the largest deviation left after removing it.
    """
    k = min(len(a), len(b))
    dev, rel, mism = [], [], []
    for i in range(k):
        ea, eb = a[i].energy, b[i].energy
        d = float(ea - eb) if is_exact(ea) and is_exact(eb) else float(ea) - float(eb)
        dev.append(d)
        rel.append(abs(d) / max(abs(float(ea)), abs(float(eb)), 1e-300))
        if a[i].multiplicity != b[i].multiplicity:
            mism.append((i, a[i].multiplicity, b[i].multiplicity))
    arr = np.array(dev)
    offset = float(arr.mean()) if k else 0.0
    resid = float(np.abs(arr - offset).max()) if k else 0.0
    return ComparisonReport(
        n_compared=k,
        max_abs_deviation=float(np.abs(arr).max()) if k else 0.0,
        max_rel_deviation=max(rel, default=0.0),
        multiplicity_mismatches=mism,
        unmatched_a=len(a) - k,
        unmatched_b=len(b) - k,
        offset=offset,
        offset_residual=resid,
        tol=tol,
        deviations=dev,
    )
