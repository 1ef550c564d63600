"""Lotka-Volterra competition model: parameters, vector field, equilibria, saddle spectrum.

The nondimensional system is::

    dx/dt = x (1 - x - alpha y)
    dy/dt = delta y (1 - y - beta x)

with x the native density and y the invader density, both scaled by their
carrying capacities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameters, NotStrongCompetition


def _check_positive(**values):
    for name, v in values.items():
        if not (isinstance(v, (int, float, np.floating, np.integer)) and math.isfinite(v) and v > 0):
            raise InvalidParameters(f"{name} must be a positive finite number, got {v!r}")


@dataclass(frozen=True)
class DimensionalParams:
    r_N: float
    r_I: float
    K_N: float
    K_I: float
    a: float
    b: float

    def __post_init__(self):
        _check_positive(r_N=self.r_N, r_I=self.r_I, K_N=self.K_N, K_I=self.K_I,
                        a=self.a, b=self.b)


@dataclass(frozen=True)
class NondimParams:
    alpha: float
    beta: float
    delta: float

    def __post_init__(self):
        _check_positive(alpha=self.alpha, beta=self.beta, delta=self.delta)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "delta", float(self.delta))

    def replace(self, **changes) -> "NondimParams":
        values = {"alpha": self.alpha, "beta": self.beta, "delta": self.delta}
        values.update(changes)
        return NondimParams(**values)

    def as_dict(self):
        return {"alpha": self.alpha, "beta": self.beta, "delta": self.delta}


class State(NamedTuple):
    x: float
    y: float


class Regime(str, Enum):
    STRONG = "StrongCompetition"
    OTHER = "Other"


@dataclass(frozen=True)
class RegimeClass:
    kind: Regime
    condition: str | None = None

    @property
    def is_strong(self) -> bool:
        return self.kind is Regime.STRONG


def classify_regime(q: NondimParams) -> RegimeClass:
    failing = []
    if q.alpha <= 1:
        failing.append("alpha <= 1")
    if q.beta <= 1:
        failing.append("beta <= 1")
    if failing:
        return RegimeClass(Regime.OTHER, " and ".join(failing))
    return RegimeClass(Regime.STRONG)


def require_strong(q: NondimParams) -> None:
    regime = classify_regime(q)
    if not regime.is_strong:
        raise NotStrongCompetition(
            f"strong competition regime requires alpha > 1 and beta > 1 ({regime.condition})",
            condition=regime.condition,
        )


def nondimensionalize(p: DimensionalParams) -> NondimParams:
    return NondimParams(alpha=p.a * p.K_I / p.K_N,
                        beta=p.b * p.K_N / p.K_I,
                        delta=p.r_I / p.r_N)


def vector_field(s, q: NondimParams):
    """Return ``(dx/dt, dy/dt)``; works elementwise on arrays."""
    x, y = s
    return (x * (1.0 - x - q.alpha * y),
            q.delta * y * (1.0 - y - q.beta * x))


def jacobian(s, q: NondimParams) -> np.ndarray:
    x, y = s
    return np.array([
        [1.0 - 2.0 * x - q.alpha * y, -q.alpha * x],
        [-q.delta * q.beta * y, q.delta * (1.0 - 2.0 * y - q.beta * x)],
    ])


def coexistence_point(q: NondimParams) -> tuple[float, float]:
    """Return ``(A, B)``. Raises ZeroDivisionError when alpha*beta == 1."""
    d = q.alpha * q.beta - 1.0
    return (q.alpha - 1.0) / d, (q.beta - 1.0) / d


def stability_label(jac: np.ndarray) -> str:
    ev = np.linalg.eigvals(jac)
    re = ev.real
    if np.any(re == 0.0):
        return "non-hyperbolic"
    if np.all(re < 0):
        return "stable node" if np.all(ev.imag == 0) else "stable focus"
    if np.all(re > 0):
        return "unstable node" if np.all(ev.imag == 0) else "unstable focus"
    return "saddle"


@dataclass(frozen=True)
class EquilibriumSet:
    P0: State
    PN: State
    PI: State
    PC: State | None
    labels: dict = field(default_factory=dict)
    warning: str | None = None

    def points(self):
        pts = {"P0": self.P0, "PN": self.PN, "PI": self.PI}
        if self.PC is not None:
            pts["PC"] = self.PC
        return pts


def equilibria(q: NondimParams, strict: bool = False) -> EquilibriumSet:
    """Four equilibria with stability labels.

    Outside the strong competition regime the coexistence point is dropped
    when it is not in the open first quadrant and ``warning`` names the failing
    condition; with ``strict=True`` a NotStrongCompetition is raised instead.
    """
    regime = classify_regime(q)
    if strict and not regime.is_strong:
        require_strong(q)
    pts = {"P0": State(0.0, 0.0), "PN": State(1.0, 0.0), "PI": State(0.0, 1.0)}
    pc = None
    if q.alpha * q.beta != 1.0:
        a, b = coexistence_point(q)
        if a > 0 and b > 0:
            pc = State(a, b)
    if pc is not None:
        pts["PC"] = pc
    labels = {name: stability_label(jacobian(p, q)) for name, p in pts.items()}
    return EquilibriumSet(P0=pts["P0"], PN=pts["PN"], PI=pts["PI"], PC=pc,
                          labels=labels, warning=regime.condition)


@dataclass(frozen=True)
class SaddleSpectrum:
    lambda1: float
    lambda2: float
    m: float
    m_u: float
    Delta: float
    kappa: float
    eta: float
    A: float
    B: float
    v1: tuple[float, float]
    v2: tuple[float, float]

    def as_dict(self):
        return {
            "lambda1": self.lambda1, "lambda2": self.lambda2, "m": self.m, "m_u": self.m_u,
            "Delta": self.Delta, "kappa": self.kappa, "eta": self.eta,
            "A": self.A, "B": self.B, "v1": list(self.v1), "v2": list(self.v2),
        }


def saddle_spectrum(q: NondimParams) -> SaddleSpectrum:
    """Closed-form eigen-structure of the Jacobian at the coexistence saddle.

    The textbook expressions lose digits when one eigenvalue is much smaller
    than the other (small or large delta); the cancelling differences are
    rewritten through ``Delta - eta**2 = 4 alpha beta delta (alpha-1)(beta-1)``
    and ``Delta - kappa**2 = 4 delta (alpha-1)(beta-1)(alpha beta - 1)``.
    """
    require_strong(q)
    al, be, de = q.alpha, q.beta, q.delta
    a1, b1, ab1 = al - 1.0, be - 1.0, al * be - 1.0
    kappa = a1 + de * b1
    eta = a1 - de * b1
    Delta = kappa * kappa + 4.0 * de * a1 * b1 * ab1
    root = math.sqrt(Delta)
    lambda1 = (-kappa - root) / (2.0 * ab1)
    lambda2 = 2.0 * de * a1 * b1 / (root + kappa)
    prod = 4.0 * al * be * de * a1 * b1  # = Delta - eta**2
    if eta >= 0:
        root_minus_eta = prod / (root + eta)
        root_plus_eta = root + eta
    else:
        root_minus_eta = root - eta
        root_plus_eta = prod / (root - eta)
    m = root_minus_eta / (2.0 * al * a1)
    m_u = -root_plus_eta / (2.0 * al * a1)
    v11 = root_plus_eta / (2.0 * de * be * b1)
    v21 = -root_minus_eta / (2.0 * de * be * b1)
    A, B = coexistence_point(q)
    return SaddleSpectrum(lambda1=lambda1, lambda2=lambda2, m=m, m_u=m_u, Delta=Delta,
                          kappa=kappa, eta=eta, A=A, B=B, v1=(v11, 1.0), v2=(v21, 1.0))


def tangent_lines(spec: SaddleSpectrum, x):
    """Tangent lines of the stable and unstable manifolds at the saddle."""
    return spec.B + spec.m * (x - spec.A), spec.B + spec.m_u * (x - spec.A)
