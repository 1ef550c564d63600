"""Basin boundary y = s(x) as the stable manifold of the coexistence saddle.

Both branches are traced by integrating the reversed flow from points placed
a small distance along the stable eigenvector, where the manifold is
attracting. The accepted steps form the interpolation knots of a monotone
cubic Hermite curve whose knot slopes are the exact field slopes g/f.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate as spi
from scipy.optimize import brentq

from .errors import (FCloseToZero, InvalidParameters, ManifoldEscape, NumericalFailure,
                     OracleStall, OutOfDomain, QuadratureFailure)
from .integrator import (Direction, IntegrationConfig, StopKind, classify_codes,
                         integrate)
from .interp import MonotoneHermite
from .model import NondimParams, SaddleSpectrum, require_strong, saddle_spectrum

CONFINEMENT_SLACK = 1e-6

# Curve construction is cheap, so it runs tighter than the classifier defaults.
# A negligible absolute tolerance keeps relative accuracy near the origin, where
# the curve is steep for delta < 1.
SEPARATRIX_INTEGRATION = IntegrationConfig(rel_tol=1e-11, abs_tol=1e-16)


@dataclass(frozen=True)
class SeparatrixBuildConfig:
    eigen_offset: float = 1e-7
    x_max: float = 3.0
    resample_count: int = 512
    # right branch stops once s(x) exceeds this; the domain then ends earlier than x_max
    y_cap: float = 1e4
    # per-step displacement cap relative to max(1, |state|), keeps knots dense
    max_disp: float = 5e-3

    def __post_init__(self):
        if not (0 < self.eigen_offset <= 1e-3):
            raise InvalidParameters("eigen_offset must lie in (0, 1e-3]")
        if not (math.isfinite(self.x_max) and self.x_max > 0):
            raise InvalidParameters("x_max must be positive and finite")
        if self.resample_count < 4:
            raise InvalidParameters("resample_count must be at least 4")
        if not (self.y_cap > 1 and self.max_disp > 0):
            raise InvalidParameters("y_cap must exceed 1 and max_disp must be positive")


@dataclass(frozen=True, eq=False)
class SeparatrixCurve:
    params: NondimParams
    spectrum: SaddleSpectrum
    x: np.ndarray
    y: np.ndarray
    x_max: float
    left_count: int
    resample_count: int = 512

    def __post_init__(self):
        slopes = _knot_slopes(self.x, self.y, self.params, self.spectrum)
        object.__setattr__(self, "_interp", MonotoneHermite(self.x, self.y, slopes))

    @property
    def A(self):
        return self.spectrum.A

    @property
    def B(self):
        return self.spectrum.B

    @property
    def samples(self):
        return list(zip(self.x.tolist(), self.y.tolist()))

    @property
    def left_branch(self):
        """Samples of the heteroclinic branch from the origin to the saddle (exclusive)."""
        return self.x[1:self.left_count + 1], self.y[1:self.left_count + 1]

    @property
    def right_branch(self):
        i = self.left_count + 2
        return self.x[i:], self.y[i:]

    def __call__(self, x):
        return eval_s(self, x)

    def knots(self, count: int | None = None) -> np.ndarray:
        """Export grid: log-spaced toward the origin, uniform beyond, always containing 0 and A."""
        return knot_grid(self.A, self.x_max, count or self.resample_count)

    def resample(self, count: int | None = None):
        xk = self.knots(count)
        return xk, eval_s(self, xk)


def knot_grid(A, x_max, count):
    n_log = count // 4
    n_lin = count - n_log - 1
    lo = min(A, x_max) * 1e-6
    grid = np.concatenate([
        [0.0, A],
        np.geomspace(lo, min(A, x_max), n_log + 1)[:-1],
        np.linspace(0.0, x_max, n_lin + 1)[1:],
    ])
    grid = np.unique(grid[grid <= x_max])
    while grid.size < count:
        k = int(np.argmax(np.diff(grid)))
        grid = np.insert(grid, k + 1, 0.5 * (grid[k] + grid[k + 1]))
    keep = {0.0, A, x_max}
    while grid.size > count:
        # thin the densest spot, never dropping 0, A or x_max
        gaps = np.diff(grid)
        for k in np.argsort(gaps, kind="stable"):
            victim = k + 1 if grid[k + 1] not in keep else k
            if grid[victim] not in keep:
                grid = np.delete(grid, victim)
                break
        else:
            break
    return grid


def _knot_slopes(x, y, q, spec):
    f = x * (1.0 - x - q.alpha * y)
    g = q.delta * y * (1.0 - y - q.beta * x)
    with np.errstate(divide="ignore", invalid="ignore"):
        slopes = g / f
    near = (np.abs(f) < 1e-14) | (x == spec.A)
    slopes[near] = spec.m
    if x[0] == 0.0:
        # slope at the origin is infinite for delta < 1; the limiter clips it
        slopes[0] = 3.0 * (y[1] - y[0]) / (x[1] - x[0]) if q.delta < 1 else (
            spec.B / spec.A if q.delta == 1 else 0.0)
    return slopes


def _unit(v):
    n = math.hypot(v[0], v[1])
    return v[0] / n, v[1] / n


def compute_separatrix(q: NondimParams, cfg: SeparatrixBuildConfig | None = None,
                       icfg: IntegrationConfig | None = None) -> SeparatrixCurve:
    cfg = cfg or SeparatrixBuildConfig()
    icfg = icfg or SEPARATRIX_INTEGRATION
    require_strong(q)
    spec = saddle_spectrum(q)
    A, B = spec.A, spec.B
    if cfg.x_max <= A:
        raise InvalidParameters(f"x_max={cfg.x_max} must exceed A={A}")
    ux, uy = _unit(spec.v1)
    eps = cfg.eigen_offset

    left = integrate((A - eps * ux, B - eps * uy), q, Direction.BACKWARD, icfg,
                     max_disp=cfg.max_disp, stop_on_axis=True)
    reason = left.stop_reason
    if not (reason.kind is StopKind.LEFT_DOMAIN
            or (reason.kind is StopKind.REACHED_EQUILIBRIUM and reason.which == "P0")):
        raise NumericalFailure(f"left branch did not reach the origin: {reason}")
    lx, ly = left.x, left.y
    if (lx.min() < -CONFINEMENT_SLACK or ly.min() < -CONFINEMENT_SLACK
            or lx.max() > A + CONFINEMENT_SLACK or ly.max() > B + CONFINEMENT_SLACK):
        raise ManifoldEscape("left branch left the rectangle (0, A) x (0, B)")

    right = integrate((A + eps * ux, B + eps * uy), q, Direction.BACKWARD, icfg,
                      x_box=cfg.x_max, y_box=cfg.y_cap, max_disp=cfg.max_disp)
    if right.stop_reason.kind is not StopKind.LEFT_DOMAIN:
        raise NumericalFailure(f"right branch did not leave the domain: {right.stop_reason}")
    rx, ry = right.x, right.y
    if rx.min() < A - CONFINEMENT_SLACK or ry.min() < B - CONFINEMENT_SLACK:
        raise ManifoldEscape("right branch left the quadrant (A, inf) x (B, inf)")

    # the left branch runs toward the origin; keep points off the axes
    keep = (lx > 0) & (ly > 0)
    lx, ly = lx[keep][::-1], ly[keep][::-1]
    x = np.concatenate([[0.0], lx, [A], rx])
    y = np.concatenate([[0.0], ly, [B], ry])
    ok = np.concatenate([[True], np.diff(x) > 0])
    if not np.all(ok):
        # drop any sample that does not advance in x (round-off at the seeds)
        x, y = x[ok], y[ok]
    left_count = int(np.count_nonzero(x < A)) - 1
    x_max = cfg.x_max if rx[-1] >= cfg.x_max else float(rx[-1])
    return SeparatrixCurve(params=q, spectrum=spec, x=x, y=y, x_max=x_max,
                           left_count=left_count, resample_count=cfg.resample_count)


def offset_discrepancy(q: NondimParams, cfg: SeparatrixBuildConfig | None = None,
                       icfg: IntegrationConfig | None = None, coarse_offset: float = 1e-6,
                       x_hi: float = 1.0) -> float:
    """Sup-distance on the export grid (up to ``x_hi``) between curves seeded at two offsets."""
    cfg = cfg or SeparatrixBuildConfig()
    fine = compute_separatrix(q, cfg, icfg)
    coarse = compute_separatrix(q, SeparatrixBuildConfig(
        eigen_offset=coarse_offset, x_max=cfg.x_max, resample_count=cfg.resample_count,
        y_cap=cfg.y_cap, max_disp=cfg.max_disp), icfg)
    hi = min(x_hi, fine.x_max, coarse.x_max)
    xs = fine.knots()
    xs = xs[xs <= hi]
    return float(np.max(np.abs(eval_s(fine, xs) - eval_s(coarse, xs))))


def eval_s(c: SeparatrixCurve, x):
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(xa > c.x_max) or np.any(np.isnan(xa)):
        raise OutOfDomain(f"x must lie in [0, {c.x_max}]")
    out = c._interp(xa)
    return float(out) if out.ndim == 0 else out


def inverse_s(c: SeparatrixCurve, y):
    """x such that s(x) = y, from the monotone curve."""
    ys = np.atleast_1d(np.asarray(y, dtype=float))
    y_top = eval_s(c, c.x_max)
    if np.any(ys < 0) or np.any(ys > y_top):
        raise OutOfDomain(f"y must lie in [0, {y_top}]")
    xs = np.empty_like(ys)
    for i, v in enumerate(ys):
        if v == 0.0:
            xs[i] = 0.0
            continue
        k = int(np.searchsorted(c.y, v))
        lo = c.x[max(k - 1, 0)]
        hi = min(c.x[min(k, c.x.size - 1)], c.x_max)
        xs[i] = brentq(lambda t: eval_s(c, t) - v, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return float(xs[0]) if np.ndim(y) == 0 else xs


def model_separatrix(q: NondimParams, x):
    """Power-law model curve B (x/A)**delta through the origin and the saddle."""
    spec = saddle_spectrum(q)
    xa = np.asarray(x, dtype=float)
    out = spec.B * np.power(xa / spec.A, q.delta)
    return float(out) if out.ndim == 0 else out


def slope_field(s, q: NondimParams) -> float:
    """dy/dx = g/f along trajectories; the removable value m at the saddle."""
    x, y = float(s[0]), float(s[1])
    spec = saddle_spectrum(q)
    if math.hypot(x - spec.A, y - spec.B) < 1e-9:
        return spec.m
    f = x * (1.0 - x - q.alpha * y)
    if abs(f) < 1e-13:
        raise FCloseToZero(f"f vanishes at ({x}, {y}): the point lies on a nullcline")
    return q.delta * y * (1.0 - y - q.beta * x) / f


def residual_integrand(c: SeparatrixCurve, t):
    """[(alpha-1) s - (beta-1) t] / [t (1 - t - alpha s)] along the curve.

    Within 1e-7 of the saddle the removable limit is returned.
    """
    q, spec = c.params, c.spectrum
    if abs(t - spec.A) < 1e-7:
        num = (q.alpha - 1.0) * spec.m - (q.beta - 1.0)
        den = spec.A * (-1.0 - q.alpha * spec.m)
        return num / den
    s = eval_s(c, t)
    return ((q.alpha - 1.0) * s - (q.beta - 1.0) * t) / (t * (1.0 - t - q.alpha * s))


def integral_residual(c: SeparatrixCurve, x: float) -> float:
    """s(x) - s*(x) exp(delta * integral from A to x of the residual integrand)."""
    if not (0 < x <= c.x_max):
        raise OutOfDomain(f"x must lie in (0, {c.x_max}]")
    q = c.params
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", spi.IntegrationWarning)
        val, _, info, *rest = spi.quad(lambda t: residual_integrand(c, t), c.A, x,
                                       epsabs=1e-13, epsrel=1e-11, limit=200,
                                       full_output=1)
    if rest and info.get("last", 0) >= 200:
        raise QuadratureFailure(f"adaptive quadrature hit its subdivision limit at x={x}: {rest[0]}")
    return eval_s(c, x) - model_separatrix(q, x) * math.exp(q.delta * val)


def _straddle(q, x, mid, lo, hi, tol, icfg):
    """Shrink [lo, hi] around a midpoint that classified as undecided (on the numerical separatrix)."""
    w = tol / 4
    while w <= 0.5 * (hi - lo):
        pair = classify_codes(np.array([x, x]), np.array([mid - w, mid + w]), q, icfg)
        new_lo = mid - w if pair[0] == 0 else lo
        new_hi = mid + w if pair[1] == 1 else hi
        if new_lo != lo or new_hi != hi:
            return new_lo, new_hi
        w *= 2.0
    raise OracleStall(f"undecided classification persists at x={x}")


def bisection_oracle_many(q: NondimParams, xs, icfg: IntegrationConfig | None = None,
                          tol: float = 1e-7, y_start: float | None = None,
                          workers: int = 1) -> np.ndarray:
    """Separatrix heights from classification alone, bisecting all ``xs`` in lockstep.

    The bracket is [0, y_hi] with y_hi doubled until the invader wins; each
    iteration classifies every midpoint in one batched call.
    """
    require_strong(q)
    icfg = icfg or IntegrationConfig()
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs <= 0):
        raise InvalidParameters("oracle abscissae must be positive")
    B = (q.beta - 1.0) / (q.alpha * q.beta - 1.0)
    lo = np.zeros_like(xs)
    hi = np.full_like(xs, y_start if y_start is not None else max(B, 1e-3))
    pending = np.ones(xs.size, dtype=bool)
    for _ in range(200):
        codes = classify_codes(xs[pending], hi[pending], q, icfg, workers)
        idx = np.flatnonzero(pending)
        grow = codes != 1
        lo[idx[grow & (codes == 0)]] = hi[idx[grow & (codes == 0)]]
        hi[idx[grow]] *= 2.0
        pending[idx[~grow]] = False
        if not pending.any():
            break
        if np.any(hi > 1e12):
            raise OracleStall("no invader-winning height found below 1e12")
    else:
        raise OracleStall("bracket growth did not terminate")

    for _ in range(400):
        idx = np.flatnonzero((hi - lo) > tol)
        if idx.size == 0:
            break
        mid = 0.5 * (lo[idx] + hi[idx])
        stuck = (mid <= lo[idx]) | (mid >= hi[idx])
        if stuck.any():
            # bracket already at floating-point resolution
            lo[idx[stuck]] = hi[idx[stuck]] = mid[stuck]
            idx, mid = idx[~stuck], mid[~stuck]
        codes = classify_codes(xs[idx], mid, q, icfg, workers)
        for j in np.flatnonzero(codes == 2):
            i = idx[j]
            lo[i], hi[i] = _straddle(q, xs[i], mid[j], lo[i], hi[i], tol, icfg)
        hi[idx[codes == 1]] = mid[codes == 1]
        lo[idx[codes == 0]] = mid[codes == 0]
    return 0.5 * (lo + hi)


def bisection_oracle(q: NondimParams, x: float, icfg: IntegrationConfig | None = None,
                     tol: float = 1e-7) -> float:
    return float(bisection_oracle_many(q, [x], icfg, tol)[0])

