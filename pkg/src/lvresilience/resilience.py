"""Precariousness and latitude of the native basin, with a Monte-Carlo check.

Latitude is the area of the native basin inside the unit square, so the
curve height is clipped at 1 before integrating.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import InvalidParameters, OutOfDomain, QuadratureFailure
from .integrator import LABEL_CODES, IntegrationConfig, classify_codes
from .io import csv_text, json_text
from .model import NondimParams, require_strong
from .separatrix import SeparatrixCurve, eval_s, inverse_s


def precariousness(c: SeparatrixCurve, x0):
    """Smallest invader density that flips the outcome at native density ``x0``."""
    return eval_s(c, x0)


def latitude(c: SeparatrixCurve) -> float:
    """Area fraction of [0,1]^2 lying under the separatrix."""
    top = eval_s(c, c.x_max)
    if c.x_max < 1.0 and top < 1.0:
        raise OutOfDomain(f"curve ends at x={c.x_max} below height 1; cannot cover [0, 1]")
    # the clip at 1 is a kink; integrate the smooth part only
    x1 = 1.0 if top <= 1.0 else min(1.0, inverse_s(c, 1.0))
    if x1 <= 0.0:
        return 1.0
    pts = [c.A] if 0.0 < c.A < x1 else None
    val, err, info = _quad(lambda t: eval_s(c, t), 0.0, x1, pts)
    out = val + (1.0 - x1)
    return min(1.0, max(0.0, out))


def _quad(fn, a, b, points):
    res = quad(fn, a, b, points=points, epsabs=1e-13, epsrel=1e-11, limit=400, full_output=1)
    val, err = res[0], res[1]
    if len(res) > 3 and "limit" in str(res[3]).lower() and err > 1e-8:
        raise QuadratureFailure(f"quadrature did not converge: {res[3]}")
    return val, err, res[2]


@dataclass(frozen=True)
class MonteCarloLatitude:
    estimate: float
    se: float
    n: int
    seed: int
    undecided: int

    def as_dict(self):
        return {"estimate": self.estimate, "se": self.se, "n": self.n, "seed": self.seed,
                "undecided": self.undecided}


def sample_points(n: int, seed: int) -> np.ndarray:
    """n uniform points of (0,1)^2 from PCG64 seeded with ``seed``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.random((n, 2))


def latitude_monte_carlo(q: NondimParams, n: int = 10000, seed: int = 0,
                         icfg: IntegrationConfig | None = None,
                         workers: int = 1) -> MonteCarloLatitude:
    """Fraction of random initial conditions that end at the native equilibrium.

    Undecided points are dropped from the ratio and reported separately.
    """
    if n < 100:
        raise InvalidParameters("n must be at least 100")
    require_strong(q)
    pts = sample_points(n, seed)
    codes = classify_codes(pts[:, 0], pts[:, 1], q, icfg, workers=workers)
    native = int(np.count_nonzero(codes == 0))
    undecided = int(np.count_nonzero(codes == 2))
    m = n - undecided
    if m == 0:
        return MonteCarloLatitude(math.nan, math.nan, n, seed, undecided)
    p = native / m
    return MonteCarloLatitude(p, math.sqrt(p * (1.0 - p) / m), n, seed, undecided)


def cell_centers(resolution: int) -> np.ndarray:
    return (np.arange(resolution) + 0.5) / resolution


def basin_grid(q: NondimParams, resolution: int, icfg: IntegrationConfig | None = None,
               workers: int = 1) -> np.ndarray:
    """int8 label codes at cell centers; row index is y, column index is x."""
    if resolution < 2:
        raise InvalidParameters("resolution must be at least 2")
    c = cell_centers(resolution)
    X, Y = np.meshgrid(c, c)
    codes = classify_codes(X.ravel(), Y.ravel(), q, icfg, workers=workers)
    return codes.reshape(resolution, resolution)


def basin_grid_rows(grid: np.ndarray):
    r = grid.shape[0]
    c = cell_centers(r)
    for iy in range(r):
        for ix in range(r):
            yield c[ix], c[iy], LABEL_CODES[grid[iy, ix]].value


@dataclass(frozen=True)
class ResilienceReport:
    params: NondimParams
    precariousness_samples: list
    latitude_quadrature: float
    latitude_mc: MonteCarloLatitude
    basin_grid: np.ndarray | None = field(default=None, compare=False)

    @property
    def mc_agrees(self) -> bool:
        mc = self.latitude_mc
        return abs(self.latitude_quadrature - mc.estimate) <= 4.0 * mc.se

    def as_dict(self):
        return {
            "params": self.params.as_dict(),
            "latitude": self.latitude_quadrature,
            "latitude_mc": self.latitude_mc.as_dict(),
            "precariousness": [[x, p] for x, p in self.precariousness_samples],
        }

    def to_json(self) -> str:
        return json_text(self.as_dict())

    def basin_csv(self) -> str:
        if self.basin_grid is None:
            raise ValueError("report has no basin grid")
        return csv_text(("x", "y", "label"), basin_grid_rows(self.basin_grid))


def resilience_report(c: SeparatrixCurve, x0_grid=None, mc_n: int = 10000, seed: int = 0,
                      grid_resolution: int | None = None,
                      icfg: IntegrationConfig | None = None, workers: int = 1) -> ResilienceReport:
    q = c.params
    xs = np.linspace(0.0, min(1.0, c.x_max), 11) if x0_grid is None else np.asarray(x0_grid, float)
    pr = [(float(x), float(eval_s(c, x))) for x in xs]
    lat = latitude(c)
    mc = latitude_monte_carlo(q, mc_n, seed, icfg, workers)
    grid = basin_grid(q, grid_resolution, icfg, workers) if grid_resolution else None
    return ResilienceReport(q, pr, lat, mc, grid)
