"""Moebius automorphisms of the unit ball and the Poincare-ball distance.

The metric normalization is fixed at curvature -1 (density 2 / (1 - |t|^2))
on both the source ball and the target interval, so contraction constants
are normalization-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import fd_gradient
from .poisson import TransformField, transform, transform_gradient


@dataclass(frozen=True, eq=False)
class MobiusMap:
    """The involutive automorphism phi_x of B^n exchanging 0 and x."""

    n: int
    x: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"center must have shape ({self.n},), got {x.shape}")
        if np.linalg.norm(x) >= 1.0:
            raise ValueError("Moebius center must be an interior point")
        object.__setattr__(self, "x", x)

    def __call__(self, y: np.ndarray) -> np.ndarray:
        return apply(self, y)


def apply(m: MobiusMap, y: np.ndarray) -> np.ndarray:
    """phi_x(y) = (|y-x|^2 x - (1-|x|^2)(y-x)) / (1 - 2<y,x> + |y|^2 |x|^2).

    Maps the closed ball onto itself: interior to interior, sphere to sphere;
    phi_x(0) = x and phi_x(x) = 0.
    """
    x = m.x
    y = np.asarray(y, dtype=float)
    if y.shape != x.shape:
        raise ValueError(f"point must have shape {x.shape}, got {y.shape}")
    if np.linalg.norm(y) > 1.0 + 1e-12:
        raise ValueError("Moebius maps are defined on the closed unit ball")
    d = y - x
    x2 = float(x @ x)
    denom = 1.0 - 2.0 * float(y @ x) + float(y @ y) * x2
    return (float(d @ d) * x - (1.0 - x2) * d) / denom


def _artanh(t: float) -> float:
    # log1p form keeps accuracy near 0 and near 1.
    return 0.5 * math.log1p(2.0 * t / (1.0 - t))


def hyperbolic_distance(n: int, x1: np.ndarray, x2: np.ndarray) -> float:
    """Distance of the Poincare ball metric: 2 artanh |phi_{x1}(x2)|.

    Symmetric, Moebius-invariant, rejects boundary points.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.linalg.norm(x1) >= 1.0 or np.linalg.norm(x2) >= 1.0:
        raise ValueError("hyperbolic distance requires interior points")
    t = float(np.linalg.norm(apply(MobiusMap(n, x1), x2)))
    return 2.0 * _artanh(t)


def poincare_distance_1d(a: float, b: float) -> float:
    """Disc distance between two real points: |2 artanh a - 2 artanh b|."""
    if not (-1.0 < a < 1.0 and -1.0 < b < 1.0):
        raise ValueError("1-d Poincare distance requires points in (-1, 1)")

    def signed(t: float) -> float:
        return math.copysign(_artanh(abs(t)), t)

    return abs(2.0 * signed(a) - 2.0 * signed(b))


def chain_rule_check(field: TransformField, x: np.ndarray, step: float = 1e-5) -> float:
    """Residual of grad(h o phi_x)(0) = -(1 - |x|^2) grad h(x).

    Returns |FD-gradient of the composition at 0 + (1-|x|^2) grad h(x)|,
    which should sit at finite-difference noise level.
    """
    x = np.asarray(x, dtype=float)
    m = MobiusMap(field.n, x)
    composed = lambda y: transform(field, apply(m, y))
    lhs = fd_gradient(composed, np.zeros(field.n), step)
    rhs = (1.0 - float(x @ x)) * transform_gradient(field, x)
    return float(np.linalg.norm(lhs + rhs))
