"""Numerical Painleve IV transcendents.

Integrates

    f'' = f'^2/(2f) + 3/2 f^3 + 4 z f^2 + 2 (z^2 - alpha) f + beta/f

along the real axis with an adaptive Runge-Kutta 4(5) pair. Solutions are
meromorphic with simple poles of residue +-1; when ``|f|`` grows past
``VAULT_TRIGGER`` with ``|f'| ~ f^2`` the pole position is estimated from the Laurent leading
terms and the integration continues along a half circle in the complex
plane, rejoining the real axis on the far side. Zeros of ``f`` (where the
equation itself is singular) are stepped around the same way.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .models import p4_rhs

__all__ = [
    "POLE_THRESHOLD",
    "SingularInitialCondition",
    "P4Trajectory",
    "integrate_p4",
]

POLE_THRESHOLD = 1e6
VAULT_TRIGGER = 4.0
ZERO_TRIGGER = 1e-2
# keeps steps short enough for the |f| events to be seen
MAX_STEP = 0.05
# the solver runs this much tighter than the requested residual, floored near 100 eps
RTOL_FACTOR = 3e-3
RTOL_FLOOR = 3e-14


class SingularInitialCondition(ValueError):
    pass


@dataclass
class _Segment:
    lo: float
    hi: float
    sol: object  # scipy OdeSolution on the real axis

    def contains(self, z):
        return (z >= self.lo) & (z <= self.hi)


@dataclass
class P4Trajectory:
    alpha: float
    beta: float
    samples: np.ndarray  # rows (z, f, f')
    pole_intervals: list[tuple[float, float]] = field(default_factory=list)
    poles: list[float] = field(default_factory=list)
    zero_intervals: list[tuple[float, float]] = field(default_factory=list)
    max_residual: float = 0.0
    segments: list[_Segment] = field(default_factory=list, repr=False)

    def _eval(self, z, k: int):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        out = np.full(z.shape, np.nan)
        for seg in self.segments:
            mask = seg.contains(z)
            if mask.any():
                out[mask] = seg.sol(z[mask])[k]
        return out

    def f(self, z):
        """Interpolated ``f``; ``nan`` inside skipped (pole or zero) intervals."""
        return self._eval(z, 0)

    def fprime(self, z):
        return self._eval(z, 1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["z", "f", "fprime"])
        for z, f, fp in self.samples:
            w.writerow([f"{z:.17g}", f"{f:.17g}", f"{fp:.17g}"])
        return buf.getvalue()

    def metadata(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "n_samples": int(len(self.samples)),
            "poles": self.poles,
            "pole_intervals": [list(p) for p in self.pole_intervals],
            "zero_intervals": [list(p) for p in self.zero_intervals],
            "max_residual": self.max_residual,
        }

    def to_json(self) -> str:
        return json.dumps(self.metadata(), sort_keys=True, indent=2)


def _real_rhs(alpha, beta):
    def rhs(z, y):
        f, fp = y
        return [fp, p4_rhs(z, f, fp, alpha, beta)]

    return rhs


def _arc(alpha, beta, centre, start, y0, tol):
    """Carry ``(f, f')`` from ``start`` to the mirror point ``2*centre - start``
    along the upper half circle around ``centre``."""
    rho = abs(start - centre)
    th0, th1 = (math.pi, 0.0) if start < centre else (0.0, math.pi)

    def rhs(th, y):
        z = centre + rho * np.exp(1j * th)
        dz = 1j * rho * np.exp(1j * th)
        f, fp = y
        return [fp * dz, p4_rhs(z, f, fp, alpha, beta) * dz]

    sol = solve_ivp(rhs, (th0, th1), np.asarray(y0, dtype=complex), method="RK45",
                    rtol=tol, atol=tol * 1e-2)
    if not sol.success:
        raise RuntimeError(f"complex detour around {centre} failed: {sol.message}")
    y = sol.y[:, -1]
    return 2 * centre - start, np.array([y[0].real, y[1].real])


def _pole_centre(z, f, fp):
    c = 1.0 if -fp / (f * f) > 0 else -1.0
    z0 = z - c / f
    for _ in range(20):
        z0 = z - c / (f + z0)
    return z0, c


def _residual(z, sol, alpha, beta, h=2.5e-4):
    """Relative ODE residual with ``f''`` from a 5-point difference of ``f'``.

    The step shrinks where ``f`` is large or varies fast, keeping the
    difference truncation error below the interpolation error being measured.
    """
    f, fpz = sol(z)
    h = h / max(1.0, abs(fpz / f), abs(f))
    zs = z + h * np.array([-2, -1, 1, 2])
    fp = sol(zs)[1]
    fpp = (fp[0] - 8 * fp[1] + 8 * fp[2] - fp[3]) / (12 * h)
    terms = np.array([fpz * fpz / (2 * f), 1.5 * f**3, 4 * z * f * f, 2 * (z * z - alpha) * f, beta / f])
    scale = max(1.0, abs(fpp), float(np.abs(terms).sum()))
    return abs(fpp - terms.sum()) / scale


def _integrate_direction(alpha, beta, z0, y0, z_end, tol, traj: P4Trajectory, max_detours=200):
    rhs = _real_rhs(alpha, beta)
    direction = 1.0 if z_end > z0 else -1.0
    z, y = z0, np.asarray(y0, dtype=float)

    def big(t, y):
        # large and pole-like (f' ~ -+f^2), so fast-growing regular solutions are left alone
        return min(abs(y[0]) - VAULT_TRIGGER, abs(y[1]) - 0.5 * y[0] * y[0])

    def small(t, y):
        return abs(y[0]) - ZERO_TRIGGER

    big.terminal = True
    big.direction = 1
    small.terminal = True
    small.direction = -1

    for _ in range(max_detours):
        if direction * (z_end - z) <= 0:
            return
        sol = solve_ivp(rhs, (z, z_end), y, method="RK45", rtol=tol, atol=tol * 1e-2,
                        dense_output=True, events=(big, small), max_step=MAX_STEP)
        if sol.status == -1:
            raise RuntimeError(f"Painleve IV integration failed near z={sol.t[-1]}: {sol.message}")
        zl = float(sol.t[-1])
        lo, hi = sorted((z, zl))
        if hi > lo:
            traj.segments.append(_Segment(lo, hi, sol.sol))
        if sol.status == 0:
            return
        zl, yl = float(sol.t[-1]), sol.y[:, -1]
        if len(sol.t_events[0]):
            centre, _ = _pole_centre(zl, yl[0], yl[1])
            if direction * (centre - zl) <= 0:
                centre = zl + direction * abs(1.0 / yl[0])
            z, y = _arc(alpha, beta, centre, zl, yl, tol)
            rho = abs(centre - zl)
            traj.poles.append(float(centre))
            traj.pole_intervals.append((float(centre - rho), float(centre + rho)))
        else:
            fp = yl[1]
            centre = zl - yl[0] / fp if fp != 0 else zl + direction * ZERO_TRIGGER
            if direction * (centre - zl) <= 0:
                centre = zl + direction * ZERO_TRIGGER
            z, y = _arc(alpha, beta, centre, zl, yl, tol)
            rho = abs(centre - zl)
            traj.zero_intervals.append((float(centre - rho), float(centre + rho)))
    raise RuntimeError("too many singularities along the integration path")


def integrate_p4(
    alpha: float,
    beta: float,
    z0: float,
    f0: float,
    f0p: float,
    z_range: tuple[float, float],
    tol: float = 1e-11,
    samples_per_unit: int = 200,
) -> P4Trajectory:
    """Integrate Painleve IV from ``(z0, f0, f0')`` across ``z_range``.

    Parameters
    ----------
    alpha, beta : float
        Equation parameters.
    z0, f0, f0p : float
        Initial point and data; ``f0`` must be nonzero.
    z_range : (float, float)
        Interval to cover; ``z0`` may lie inside it (both directions are
        integrated) or at an end.
    tol : float
        Target for the relative ODE residual. The Runge-Kutta pair runs at
        ``max(tol * RTOL_FACTOR, RTOL_FLOOR)``. Below about ``1e-11`` the
        floor takes over and the residual settles near ``1e-10``.
    samples_per_unit : int
        Density of the uniform sample table.

    Returns
    -------
    P4Trajectory
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not np.isfinite([z0, f0, f0p]).all() or f0 == 0 or abs(f0) >= POLE_THRESHOLD:
        raise SingularInitialCondition(f"singular initial condition at z0={z0}: f0={f0}")
    a, b = sorted(z_range)
    if not a <= z0 <= b:
        raise ValueError(f"z0={z0} outside {z_range}")
    alpha, beta = float(alpha), float(beta)
    traj = P4Trajectory(alpha, beta, np.empty((0, 3)))
    y0 = (float(f0), float(f0p))
    rtol = max(tol * RTOL_FACTOR, RTOL_FLOOR)
    if b > z0:
        _integrate_direction(alpha, beta, z0, y0, b, rtol, traj)
    if a < z0:
        _integrate_direction(alpha, beta, z0, y0, a, rtol, traj)
    traj.segments.sort(key=lambda s: s.lo)
    traj.poles.sort()
    traj.pole_intervals.sort()
    traj.zero_intervals.sort()

    n = max(2, int(round((b - a) * samples_per_unit)) + 1)
    zs = np.linspace(a, b, n)
    f = traj.f(zs)
    keep = np.isfinite(f)
    traj.samples = np.column_stack([zs[keep], f[keep], traj.fprime(zs)[keep]])

    worst = 0.0
    for seg in traj.segments:
        h = min(2.5e-4, (seg.hi - seg.lo) / 8)
        if h <= 0:
            continue
        inner = traj.samples[(traj.samples[:, 0] >= seg.lo + 2 * h) & (traj.samples[:, 0] <= seg.hi - 2 * h), 0]
        for z in inner:
            if abs(seg.sol(z)[0]) < ZERO_TRIGGER:
                continue  # the equation is singular at zeros of f
            worst = max(worst, _residual(z, seg.sol, alpha, beta, h))
    traj.max_residual = float(worst)
    return traj
