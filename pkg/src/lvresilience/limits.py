"""Behavior of the separatrix in the singular limits of the time-scale ratio.

As delta -> 0 the curve flattens onto y = B; as delta -> infinity it
straightens onto x = A. Both limits exclude a neighborhood of the origin,
so distances are measured on a window bounded away from 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidParameters, OutOfDomain
from .integrator import IntegrationConfig
from .io import csv_text
from .model import NondimParams, require_strong, saddle_spectrum
from .separatrix import SeparatrixBuildConfig, compute_separatrix, eval_s, inverse_s


class LimitDirection(str, Enum):
    DELTA_TO_ZERO = "DeltaToZero"
    DELTA_TO_INFINITY = "DeltaToInfinity"


DEFAULT_LADDERS = {
    LimitDirection.DELTA_TO_ZERO: (1.0, 0.3, 0.1, 0.03, 0.01),
    LimitDirection.DELTA_TO_INFINITY: (1.0, 3.0, 10.0, 30.0, 100.0),
}
DEFAULT_WINDOW = (0.2, 0.8)
WINDOW_SAMPLES = 401


def _direction(direction) -> LimitDirection:
    try:
        return LimitDirection(direction)
    except ValueError:
        raise InvalidParameters(f"unknown limit direction {direction!r}") from None


def deviation_from_limit(q: NondimParams, direction, window=DEFAULT_WINDOW,
                         cfg: SeparatrixBuildConfig | None = None,
                         icfg: IntegrationConfig | None = None, curve=None) -> float:
    """Sup distance between the curve and its limiting line over ``window``.

    The sup is taken over a uniform sample of the window with the endpoints
    included.
    """
    require_strong(q)
    d = _direction(direction)
    lo, hi = float(window[0]), float(window[1])
    if not (0.0 < lo < hi):
        raise InvalidParameters("window must satisfy 0 < lo < hi")
    c = curve or compute_separatrix(q, cfg, icfg)
    grid = np.linspace(lo, hi, WINDOW_SAMPLES)
    if d is LimitDirection.DELTA_TO_ZERO:
        if hi > c.x_max:
            raise OutOfDomain(f"x window exceeds the curve domain [0, {c.x_max}]")
        return float(np.max(np.abs(eval_s(c, grid) - c.B)))
    if hi > eval_s(c, c.x_max):
        raise OutOfDomain("y window exceeds the range of the curve")
    return float(np.max(np.abs(inverse_s(c, grid) - c.A)))


def slow_manifold_reduced_flow(q: NondimParams, direction, coordinate: float) -> float:
    """Vector field of the one-dimensional flow on the limiting slow manifold.

    For delta -> 0 the fast variable x sits on 1 - x - alpha y = 0 and
    dy/dt = y (1 - y - beta (1 - alpha y)). For delta -> infinity, y sits on
    1 - y - beta x = 0 and dx/dt = x (1 - x - alpha (1 - beta x)).
    """
    d = _direction(direction)
    u = float(coordinate)
    if d is LimitDirection.DELTA_TO_ZERO:
        if not (0.0 < u < 1.0 / q.alpha):
            raise OutOfDomain("coordinate must lie in (0, 1/alpha)")
        return u * (1.0 - u - q.beta * (1.0 - q.alpha * u))
    if not (0.0 < u < 1.0 / q.beta):
        raise OutOfDomain("coordinate must lie in (0, 1/beta)")
    return u * (1.0 - u - q.alpha * (1.0 - q.beta * u))


def reduced_flow_zero(q: NondimParams, direction) -> float:
    """Interior zero of the reduced flow: B for delta -> 0, A for delta -> infinity."""
    spec = saddle_spectrum(q)
    d = _direction(direction)
    return spec.B if d is LimitDirection.DELTA_TO_ZERO else spec.A


@dataclass(frozen=True)
class LimitStudy:
    direction: LimitDirection
    ladder: tuple
    deviations: tuple
    window: tuple

    def __post_init__(self):
        if len(self.ladder) != len(self.deviations):
            raise InvalidParameters("ladder and deviations differ in length")
        if any(v < 0 for v in self.deviations):
            raise InvalidParameters("deviations must be nonnegative")

    @property
    def monotone(self) -> bool:
        return all(b < a for a, b in zip(self.deviations, self.deviations[1:]))

    def to_csv(self) -> str:
        return csv_text(("delta", "deviation"), zip(self.ladder, self.deviations))


def check_ladder(direction, ladder) -> tuple:
    d = _direction(direction)
    lad = tuple(float(v) for v in ladder)
    if len(lad) < 1 or any(not (v > 0) for v in lad):
        raise InvalidParameters("ladder entries must be positive")
    steps = np.diff(lad)
    toward = steps < 0 if d is LimitDirection.DELTA_TO_ZERO else steps > 0
    if not np.all(toward):
        raise InvalidParameters(f"ladder must move strictly toward the {d.value} limit")
    return lad


def limit_study(q: NondimParams, direction, ladder=None, window=DEFAULT_WINDOW,
                cfg: SeparatrixBuildConfig | None = None,
                icfg: IntegrationConfig | None = None) -> LimitStudy:
    """Deviation from the limiting line for each delta in ``ladder`` (alpha, beta from ``q``)."""
    d = _direction(direction)
    lad = check_ladder(d, DEFAULT_LADDERS[d] if ladder is None else ladder)
    devs = tuple(deviation_from_limit(q.replace(delta=v), d, window, cfg, icfg) for v in lad)
    return LimitStudy(d, lad, devs, (float(window[0]), float(window[1])))
