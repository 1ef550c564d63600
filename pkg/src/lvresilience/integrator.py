"""Adaptive Dormand-Prince 5(4) integration of the competition system and basin labels.

The stepping loop lives in the kernels (compiled when available); this module
wraps it in value types and handles chunked, order-stable parallel
classification.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .errors import InvalidParameters
from .model import NondimParams, State


class Direction(Enum):
    FORWARD = 1.0
    BACKWARD = -1.0


class StopKind(str, Enum):
    REACHED_EQUILIBRIUM = "ReachedEquilibrium"
    MAX_TIME = "MaxTime"
    LEFT_DOMAIN = "LeftDomain"
    STEP_UNDERFLOW = "StepUnderflow"


EQUILIBRIUM_NAMES = ("P0", "PN", "PI", "PC")


@dataclass(frozen=True)
class StopReason:
    kind: StopKind
    which: str | None = None

    def __str__(self):
        return f"{self.kind.value}({self.which})" if self.which else self.kind.value


class BasinLabel(str, Enum):
    NATIVE_WINS = "NativeWins"
    INVADER_WINS = "InvaderWins"
    UNDECIDED = "Undecided"


LABEL_CODES = (BasinLabel.NATIVE_WINS, BasinLabel.INVADER_WINS, BasinLabel.UNDECIDED)


@dataclass(frozen=True)
class IntegrationConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-11
    max_time: float = 1e4
    min_step: float = 1e-12
    equilibrium_radius: float = 1e-8

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_time", "min_step", "equilibrium_radius"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidParameters(f"{name} must be positive and finite, got {v!r}")
        if self.equilibrium_radius <= self.abs_tol:
            raise InvalidParameters("equilibrium_radius must exceed abs_tol")

    def kernel_args(self):
        return (self.rel_tol, self.abs_tol, self.max_time, self.min_step,
                self.equilibrium_radius)


@dataclass(frozen=True)
class Trajectory:
    """Accepted steps of one integration. ``t`` is signed (negative when backward)."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    stop_reason: StopReason

    @property
    def samples(self):
        return [(float(t), State(float(x), float(y))) for t, x, y in zip(self.t, self.x, self.y)]

    @property
    def final(self) -> State:
        return State(float(self.x[-1]), float(self.y[-1]))

    def __len__(self):
        return len(self.t)


def _stop_reason(status, which):
    if status == kernels.EQUILIBRIUM:
        return StopReason(StopKind.REACHED_EQUILIBRIUM, EQUILIBRIUM_NAMES[which])
    if status == kernels.MAX_TIME:
        return StopReason(StopKind.MAX_TIME)
    if status == kernels.STEP_UNDERFLOW:
        return StopReason(StopKind.STEP_UNDERFLOW)
    # LEFT_DOMAIN and HIT_AXIS both mean the trajectory left the region of interest
    return StopReason(StopKind.LEFT_DOMAIN)


def _check_start(s0):
    x, y = float(s0[0]), float(s0[1])
    if not (math.isfinite(x) and math.isfinite(y)) or x < 0 or y < 0:
        raise InvalidParameters(f"initial state must lie in the closed first quadrant, got {s0!r}")
    return x, y


def integrate(s0, q: NondimParams, direction: Direction = Direction.FORWARD,
              cfg: IntegrationConfig | None = None, *, x_box: float = math.inf,
              y_box: float = math.inf, max_disp: float = 0.0,
              stop_on_axis: bool = False) -> Trajectory:
    """Integrate from ``s0`` until an equilibrium, the time cap, or a box exit.

    ``x_box``/``y_box`` bound the domain (LeftDomain when exceeded),
    ``max_disp`` caps the per-step displacement relative to ``max(1, |state|)``,
    and ``stop_on_axis`` ends the run as soon as a coordinate snaps to zero.
    """
    cfg = cfg or IntegrationConfig()
    x, y = _check_start(s0)
    samples, status, which = kernels.integrate_path(
        x, y, q.alpha, q.beta, q.delta, direction.value, *cfg.kernel_args(),
        x_box, y_box, max_disp, stop_on_axis)
    return Trajectory(t=samples[:, 0], x=samples[:, 1], y=samples[:, 2],
                      stop_reason=_stop_reason(status, which))


def classify_initial_condition(s0, q: NondimParams,
                               cfg: IntegrationConfig | None = None) -> BasinLabel:
    cfg = cfg or IntegrationConfig()
    x, y = _check_start(s0)
    code = kernels.classify_points(np.array([x]), np.array([y]), q.alpha, q.beta, q.delta,
                                   *cfg.kernel_args())[0]
    return LABEL_CODES[code]


def classify_codes(xs, ys, q: NondimParams, cfg: IntegrationConfig | None = None,
                   workers: int = 1, chunk: int = 2048) -> np.ndarray:
    """Vectorized classification returning int8 codes (0 native, 1 invader, 2 undecided).

    Results are gathered by chunk index, so the output does not depend on
    ``workers``.
    """
    cfg = cfg or IntegrationConfig()
    xs = np.asarray(xs, dtype=np.float64).ravel()
    ys = np.asarray(ys, dtype=np.float64).ravel()
    if xs.shape != ys.shape:
        raise InvalidParameters("xs and ys must have the same length")
    args = (q.alpha, q.beta, q.delta, *cfg.kernel_args())
    if workers <= 1 or xs.size <= chunk:
        return kernels.classify_points(xs, ys, *args)
    bounds = [(i, min(i + chunk, xs.size)) for i in range(0, xs.size, chunk)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda b: kernels.classify_points(xs[b[0]:b[1]], ys[b[0]:b[1]],
                                                                *args), bounds))
    return np.concatenate(parts)


def classify_many(xs, ys, q: NondimParams, cfg: IntegrationConfig | None = None,
                  workers: int = 1) -> list[BasinLabel]:
    return [LABEL_CODES[c] for c in classify_codes(xs, ys, q, cfg, workers)]
