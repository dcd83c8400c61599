"""Shared numerical kernels: adaptive Gauss-Legendre quadrature, bracketed
root finding, uniform sphere sampling, and finite-difference operators.

The quadrature core accepts vectorized integrands returning either a scalar
row ``f(x) -> (k,)`` or a stack of components ``f(x) -> (m, k)``; adaptive
bisection refines any panel whose two-level estimates disagree in any
component.  All randomness goes through a counter-based generator (Philox),
so a fixed seed reproduces bit-identical streams regardless of scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np


class QuadratureError(RuntimeError):
    """Adaptive refinement hit max_depth without meeting the tolerance."""


@dataclass(frozen=True)
class QuadratureConfig:
    nodes_1d: int = 64
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_depth: int = 30

    def __post_init__(self) -> None:
        if self.nodes_1d < 2:
            raise ValueError(f"nodes_1d must be >= 2, got {self.nodes_1d}")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")


@dataclass(frozen=True)
class RandomSeed:
    """Seed for the counter-based deterministic generator."""

    seed: int = 0

    def __post_init__(self) -> None:
        if not (0 <= self.seed < 2**64):
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


DEFAULT_QUADRATURE = QuadratureConfig()


@lru_cache(maxsize=64)
def gauss_legendre(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of k-point Gauss-Legendre quadrature on [-1, 1].

    Exact for polynomials of degree <= 2k - 1.
    """
    if k < 1:
        raise ValueError(f"node count must be >= 1, got {k}")
    x, w = np.polynomial.legendre.leggauss(k)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _as_vectorized(f: Callable, a: float, b: float) -> Callable:
    """Wrap f so that it maps an x-array to an array of values."""
    probe = np.array([a + 0.3 * (b - a), a + 0.7 * (b - a)])
    try:
        out = np.asarray(f(probe), dtype=float)
        if out.shape and out.shape[-1] == 2:
            return f
    except Exception:
        pass
    return lambda xs: np.array([f(float(x)) for x in np.atleast_1d(xs)], dtype=float)


def integrate_1d(
    f: Callable,
    a: float,
    b: float,
    cfg: QuadratureConfig | None = None,
    breakpoints: Sequence[float] = (),
) -> float:
    """Integral of f over [a, b] by adaptive panel-based Gauss-Legendre.

    f may be scalar or vectorized over numpy arrays.  Interior non-smooth
    points (kinks, jumps) should be declared in ``breakpoints`` so panels
    never straddle them.  Raises QuadratureError on non-convergence.
    """
    if float(b) == float(a):
        return 0.0
    return float(_integrate_core(_as_vectorized(f, a, b), a, b, cfg or DEFAULT_QUADRATURE, breakpoints))


def integrate_vector(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    cfg: QuadratureConfig | None = None,
    breakpoints: Sequence[float] = (),
) -> np.ndarray:
    """Componentwise integral of a vectorized integrand f(x) -> (m, len(x)).

    All components share one panel structure; a panel is accepted only when
    every component meets the tolerance.
    """
    return _integrate_core(f, a, b, cfg or DEFAULT_QUADRATURE, breakpoints)


def _integrate_core(fvec, a, b, cfg, breakpoints):
    a, b = float(a), float(b)
    if b < a:
        raise ValueError(f"integration requires a <= b, got [{a}, {b}]")
    if a == b:
        out = fvec(np.array([a]))
        return np.zeros(out.shape[:-1]) if np.ndim(out) > 1 else 0.0

    x0, w0 = gauss_legendre(cfg.nodes_1d)
    length = b - a

    def panel(lo, hi):
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        return half * (fvec(mid + half * x0) @ w0)

    pts = sorted({a, b, *(float(p) for p in breakpoints if a < float(p) < b)})
    stack = [(lo, hi, panel(lo, hi), 0) for lo, hi in zip(pts[:-1], pts[1:])]
    total = np.sum([s[2] for s in stack], axis=0)
    scale = np.max(np.abs(total))
    acc = None
    while stack:
        lo, hi, coarse, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left, right = panel(lo, mid), panel(mid, hi)
        fine = left + right
        err = np.max(np.abs(fine - coarse))
        frac = (hi - lo) / length
        if err <= max(cfg.abs_tol * frac, cfg.rel_tol * scale * frac):
            acc = fine if acc is None else acc + fine
            continue
        if depth >= cfg.max_depth:
            raise QuadratureError(
                f"quadrature did not converge on [{lo}, {hi}] "
                f"(residual {err:.3e} at depth {depth})"
            )
        stack.append((lo, mid, left, depth + 1))
        stack.append((mid, hi, right, depth + 1))
        scale = max(scale, float(np.max(np.abs(acc)))) if acc is not None else scale
    return acc


def find_root_bracketed(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Root of f in [lo, hi] by a guaranteed-convergent bisection/secant hybrid.

    Requires f(lo) * f(hi) <= 0.  Terminates when the bracket width drops
    below tol; the secant step is taken whenever it lands strictly inside
    the bracket, otherwise the step bisects.
    """
    lo, hi = float(lo), float(hi)
    if not (lo <= hi):
        raise ValueError(f"bracket must satisfy lo <= hi, got [{lo}, {hi}]")
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ValueError(f"not a bracketing interval: f({lo})={flo:g}, f({hi})={fhi:g}")
    for _ in range(200):
        if hi - lo <= tol:
            break
        denom = fhi - flo
        x = lo - flo * (hi - lo) / denom if denom != 0 else 0.5 * (lo + hi)
        # Reject secant points outside or hugging the bracket ends.
        margin = 0.01 * (hi - lo)
        if not (lo + margin < x < hi - margin):
            x = 0.5 * (lo + hi)
        fx = f(x)
        if fx == 0.0:
            return x
        if flo * fx < 0:
            hi, fhi = x, fx
        else:
            lo, flo = x, fx
    return 0.5 * (lo + hi)


def _generator(seed: RandomSeed | int) -> np.random.Generator:
    key = seed.seed if isinstance(seed, RandomSeed) else int(seed)
    if not (0 <= key < 2**64):
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {key}")
    return np.random.Generator(np.random.Philox(key=key))


def sample_sphere(n: int, count: int, seed: RandomSeed | int = 0) -> np.ndarray:
    """count i.i.d. uniform points on S^{n-1}, shape (count, n).

    Normalized Gaussian vectors from a counter-based stream; a fixed seed
    reproduces the exact sample set.
    """
    if n < 2:
        raise ValueError(f"sphere sampling requires n >= 2, got {n}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    y = _generator(seed).standard_normal((count, n))
    norms = np.linalg.norm(y, axis=1, keepdims=True)
    # A zero row has probability zero; nudge instead of dividing by zero.
    norms[norms == 0.0] = 1.0
    return y / norms


def sample_ball(n: int, count: int, seed: RandomSeed | int = 0, radius: float = 1.0) -> np.ndarray:
    """count i.i.d. uniform points in the ball of the given radius."""
    if not (0 < radius):
        raise ValueError(f"radius must be positive, got {radius}")
    rng = _generator(seed)
    y = rng.standard_normal((count, n))
    norms = np.linalg.norm(y, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    r = rng.random((count, 1)) ** (1.0 / n)
    return radius * r * y / norms


def _fd_step(x: np.ndarray, step: float) -> float:
    r = float(np.linalg.norm(x))
    if r >= 1.0:
        raise ValueError(f"finite differences need an interior point, got |x| = {r:g}")
    # Shrink near the boundary so the whole stencil stays inside the ball.
    return min(step, (1.0 - r) / 10.0)


def fd_gradient(h: Callable[[np.ndarray], float], x: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of a scalar field at an interior point."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    x = np.asarray(x, dtype=float)
    s = _fd_step(x, step)
    g = np.empty(x.size)
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = s
        g[i] = (h(x + e) - h(x - e)) / (2.0 * s)
    return g


def fd_laplacian(h: Callable[[np.ndarray], float], x: np.ndarray, step: float = 1e-5) -> float:
    """(2n+1)-point second-difference Laplacian at an interior point."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    x = np.asarray(x, dtype=float)
    s = _fd_step(x, step)
    center = h(x)
    acc = 0.0
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = s
        acc += h(x + e) + h(x - e) - 2.0 * center
    return acc / (s * s)


def fd_gradient_and_laplacian(
    h: Callable[[np.ndarray], float], x: np.ndarray, step: float = 1e-5
) -> tuple[np.ndarray, float]:
    """Gradient and Laplacian from one shared 2n+1 stencil evaluation."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    x = np.asarray(x, dtype=float)
    s = _fd_step(x, step)
    center = h(x)
    g = np.empty(x.size)
    lap = 0.0
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = s
        up, dn = h(x + e), h(x - e)
        g[i] = (up - dn) / (2.0 * s)
        lap += up + dn - 2.0 * center
    return g, lap / (s * s)
