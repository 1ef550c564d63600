"""Derivatives of the separatrix height with respect to alpha, beta and delta.

Writing h = g/f for the slope field, z = ds/dxi solves the linear equation

    z' = a(x) z + b(x),    z(A) = dB/dxi - m dA/dxi,

with a = dh/dy and b = dh/dxi evaluated on the curve. Both coefficients have
a simple pole at the saddle (f and g vanish there to first order), with
residue c_a < 0 for a. The bounded solution is the one analytic at A; every
other solution carries a |x - A|**c_a term that decays as the integration
moves away from A, so integrating outward is stable once the start is seeded
from the regular expansion z = C + z1 (x - A) + z2 (x - A)**2.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import InvalidParameters, NumericalFailure, SingularCoefficient
from .integrator import IntegrationConfig
from .model import NondimParams, require_strong, saddle_spectrum
from .separatrix import (SeparatrixBuildConfig, SeparatrixCurve, compute_separatrix,
                         eval_s)

PARAM_NAMES = ("alpha", "beta", "delta")


def dAB_dparam(q: NondimParams):
    """(dA/dalpha, dB/dalpha, dA/dbeta, dB/dbeta)."""
    require_strong(q)
    al, be = q.alpha, q.beta
    d2 = (al * be - 1.0) ** 2
    return ((be - 1.0) / d2, -be * (be - 1.0) / d2,
            -al * (al - 1.0) / d2, (al - 1.0) / d2)


def initial_value_C(q: NondimParams, name: str) -> float:
    _check_name(name)
    if name == "delta":
        return 0.0
    dA_da, dB_da, dA_db, dB_db = dAB_dparam(q)
    m = saddle_spectrum(q).m
    if name == "alpha":
        return dB_da - m * dA_da
    return dB_db - m * dA_db


def _check_name(name):
    if name not in PARAM_NAMES:
        raise InvalidParameters(f"parameter must be one of {PARAM_NAMES}, got {name!r}")


def coefficient_a(q: NondimParams, x, y):
    """dh/dy for h = g/f."""
    f = x * (1.0 - x - q.alpha * y)
    g = q.delta * y * (1.0 - y - q.beta * x)
    g_y = q.delta * (1.0 - 2.0 * y - q.beta * x)
    f_y = -q.alpha * x
    return (g_y * f - g * f_y) / (f * f)


def coefficient_b(q: NondimParams, name: str, x, y):
    """dh/dxi at fixed (x, y)."""
    w = 1.0 - x - q.alpha * y
    if name == "alpha":
        return q.delta * y * y * (1.0 - y - q.beta * x) / (x * w * w)
    if name == "beta":
        return -q.delta * y / w
    if name == "delta":
        return y * (1.0 - y - q.beta * x) / (x * w)
    _check_name(name)


@dataclass(frozen=True)
class SensitivitySolution:
    param_name: str
    base_params: NondimParams
    x: np.ndarray
    z: np.ndarray
    C: float

    @property
    def samples(self):
        return list(zip(self.x.tolist(), self.z.tolist()))


def regular_expansion(c: SeparatrixCurve, name: str, C: float, probe: float = 1e-4):
    """Coefficients (z1, z2) of the analytic solution z = C + z1 u + z2 u**2, u = x - A.

    With u a(u) = c_a + a0 u + ... and F(u) = a(u) C + b(u) = F0 + F1 u + ...
    (the 1/u parts cancel for the right C), matching powers gives
    z1 = F0 / (1 - c_a) and z2 = (F1 + a0 z1) / (2 - c_a). Symmetric probes at
    A +- u give each coefficient to O(u**2).
    """
    q, A = c.params, c.A
    u = min(probe, 1e-3 * A)
    xs = np.array([A - u, A + u])
    ys = eval_s(c, xs)
    a = coefficient_a(q, xs, ys)
    b = coefficient_b(q, name, xs, ys)
    G = np.array([-u, u]) * a
    F = a * C + b
    c_a = 0.5 * (G[0] + G[1])
    a0 = (G[1] - G[0]) / (2.0 * u)
    F0 = 0.5 * (F[0] + F[1])
    F1 = (F[1] - F[0]) / (2.0 * u)
    z1 = F0 / (1.0 - c_a)
    z2 = (F1 + a0 * z1) / (2.0 - c_a)
    return z1, z2


def separatrix_sensitivity(c: SeparatrixCurve, name: str, x_grid, h_start: float = 1e-4,
                           rtol: float = 1e-12, atol: float = 1e-15) -> SensitivitySolution:
    _check_name(name)
    q, A = c.params, c.A
    xg = np.asarray(x_grid, dtype=float)
    if np.any(xg <= 0) or np.any(xg > c.x_max):
        raise InvalidParameters(f"grid points must lie in (0, {c.x_max}]")
    C = initial_value_C(q, name)
    z1, z2 = regular_expansion(c, name, C)
    z = np.empty_like(xg)

    def rhs(x, zz):
        y = eval_s(c, x)
        w = 1.0 - x - q.alpha * y
        if abs(w) < 1e-14:
            raise SingularCoefficient(f"1 - x - alpha s(x) vanishes at x={x}")
        return [coefficient_a(q, x, y) * zz[0] + coefficient_b(q, name, x, y)]

    near = np.abs(xg - A) <= h_start
    u = xg[near] - A
    z[near] = C + u * (z1 + z2 * u)
    for side in (-1.0, 1.0):
        mask = ~near & (np.sign(xg - A) == side)
        if not mask.any():
            continue
        targets = xg[mask]
        x0 = A + side * h_start
        for xt in targets:
            w = 1.0 - xt - q.alpha * eval_s(c, xt)
            if abs(w) < 1e-12:
                raise SingularCoefficient(f"1 - x - alpha s(x) vanishes at grid point x={xt}")
        end = targets.min() if side < 0 else targets.max()
        order = np.argsort(side * targets)
        u0 = x0 - A
        sol = solve_ivp(rhs, (x0, end), [C + u0 * (z1 + z2 * u0)], method="DOP853",
                        t_eval=targets[order], rtol=rtol, atol=atol)
        if not sol.success:
            raise NumericalFailure(f"variational solve failed: {sol.message}")
        vals = np.empty_like(targets)
        vals[order] = sol.y[0]
        z[mask] = vals
    return SensitivitySolution(param_name=name, base_params=q, x=xg, z=z, C=C)


def finite_difference_sensitivity(q: NondimParams, name: str, x_grid, rel_step: float = 1e-4,
                                  cfg: SeparatrixBuildConfig | None = None,
                                  icfg: IntegrationConfig | None = None) -> np.ndarray:
    """Central difference of freshly computed curves at xi (1 +- rel_step)."""
    _check_name(name)
    xi = getattr(q, name)
    h = rel_step * xi
    up = compute_separatrix(q.replace(**{name: xi + h}), cfg, icfg)
    dn = compute_separatrix(q.replace(**{name: xi - h}), cfg, icfg)
    xg = np.asarray(x_grid, dtype=float)
    return (eval_s(up, xg) - eval_s(dn, xg)) / (2.0 * h)


def expected_sign(name: str, x: float, A: float) -> int:
    if name == "alpha":
        return -1
    if name == "beta":
        return 1
    if x == A:
        return 0
    return -1 if x < A else 1


@dataclass(frozen=True)
class SignRow:
    x: float
    param: str
    z: float
    expected: int
    ok: bool


def monotonicity_report(q: NondimParams, x_grid, curve: SeparatrixCurve | None = None):
    """Sign of ds/dxi per grid point and parameter against the expected pattern.

    For delta the expected signs are negative left of A and positive right of
    it, which is what the variational equation (b > 0, z(A) = 0) forces.
    """
    c = curve or compute_separatrix(q)
    rows = []
    for name in PARAM_NAMES:
        sol = separatrix_sensitivity(c, name, x_grid)
        for x, z in zip(sol.x, sol.z):
            exp = expected_sign(name, x, c.A)
            rows.append(SignRow(float(x), name, float(z), exp, int(np.sign(z)) == exp))
    return rows


def sensitivity_table(c: SeparatrixCurve, x_grid):
    """Columns x, ds/dalpha, ds/dbeta, ds/ddelta on a common grid."""
    xg = np.asarray(x_grid, dtype=float)
    cols = [separatrix_sensitivity(c, name, xg).z for name in PARAM_NAMES]
    return np.column_stack([xg, *cols])

