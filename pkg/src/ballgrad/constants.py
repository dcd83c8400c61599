"""The sharp constants: the gradient bound D_n(gamma, beta) at the origin,
its normalized form C_n(gamma), per-kind bounds at zero and at interior
points, the Khavinson radial profile Phi_n, and the dimension-3 radial
derivative envelope.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .cap import a0, cap_angle, cap_area
from .geometry import ball_constants
from .numerics import QuadratureConfig, integrate_1d


class BoundKind(enum.Enum):
    """Which elliptic operator the bound refers to.

    Harmonic pairs with beta = n/2 and zero-point coefficient 2 omega_star(n);
    hyperbolic-harmonic with beta = n - 1 and coefficient 4 sigma_star(n).
    """

    HARMONIC = "harmonic"
    HYPERBOLIC_HARMONIC = "hyperbolic_harmonic"

    def beta(self, n: int) -> float:
        return n / 2.0 if self is BoundKind.HARMONIC else n - 1.0

    def grad0_coefficient(self, n: int) -> float:
        c = ball_constants(n)
        if self is BoundKind.HARMONIC:
            return 2.0 * c.omega_star
        return 4.0 * c.sigma_star


def d_n(n: int, gamma: float, beta: float) -> float:
    """D_n(gamma, beta) = (4 beta / n) omega_star(n) sin^{n-1}(gamma).

    The sharp bound on |grad h(0)| over transforms of [-1, 1]-valued data
    whose value at 0 pins the cap angle gamma.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    if not (beta > 0):
        raise ValueError(f"beta must be positive, got {beta}")
    if not (0.0 <= gamma <= math.pi):
        raise ValueError(f"gamma must lie in [0, pi], got {gamma}")
    return (4.0 * beta / n) * ball_constants(n).omega_star * math.sin(gamma) ** (n - 1)


def c_n(n: int, gamma: float) -> float:
    """C_n(gamma) = sin^{n-1}(gamma) / ((n-1) A_0(gamma) (1 - A(gamma))).

    Satisfies D_n(gamma, beta) = beta C_n(gamma) (1 - h(0)^2) and tends to 1
    as gamma -> 0+.  The endpoints gamma in {0, pi} are 0/0 and rejected;
    sweep callers use one-sided grids.
    """
    if not (0.0 < gamma < math.pi):
        raise ValueError(f"C_n is defined on the open interval (0, pi), got {gamma}")
    area = cap_area(n, gamma)
    return math.sin(gamma) ** (n - 1) / ((n - 1) * a0(n, gamma) * (1.0 - area))


def grad0_bound(n: int, a: float, kind: BoundKind) -> float:
    """Sharp |grad h(0)| bound given h(0) = a: coefficient(kind) sin^{n-1}(gamma_a)."""
    if not (-1.0 <= a <= 1.0):
        raise ValueError(f"h(0) must lie in [-1, 1], got {a}")
    return kind.grad0_coefficient(n) * math.sin(cap_angle(n, a)) ** (n - 1)


def beta_bound(n: int, a: float, beta: float) -> float:
    """The bound |grad h(0)| <= beta (1 - a^2), stated for n >= 3."""
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"the beta bound is stated for n >= 3, got {n!r}")
    if not (-1.0 <= a <= 1.0):
        raise ValueError(f"h(0) must lie in [-1, 1], got {a}")
    if not (beta > 0):
        raise ValueError(f"beta must be positive, got {beta}")
    return beta * (1.0 - a * a)


def pointwise_bound(n: int, a: float, x_norm: float, kind: BoundKind) -> float:
    """Interior gradient bound at |x| = x_norm given h(x) = a.

    harmonic:            (n/2) (1 - a^2) / (1 - x_norm)
    hyperbolic-harmonic: (n-1) (1 - a^2) / (1 - x_norm^2)
    """
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"pointwise bounds are stated for n >= 3, got {n!r}")
    if not (-1.0 <= a <= 1.0):
        raise ValueError(f"h(x) must lie in [-1, 1], got {a}")
    if not (0.0 <= x_norm < 1.0):
        raise ValueError(f"|x| must lie in [0, 1), got {x_norm}")
    if kind is BoundKind.HARMONIC:
        return (n / 2.0) * (1.0 - a * a) / (1.0 - x_norm)
    return (n - 1.0) * (1.0 - a * a) / (1.0 - x_norm * x_norm)


# Quadrature for the Phi_n profile; the integrand is analytic after the
# t = sin(u) substitution apart from the declared kink.
_PHI_CFG = QuadratureConfig(nodes_1d=64, abs_tol=1e-13, rel_tol=1e-13)

# Below this radius the n = 3 closed form is a 0/0 expression; use the
# integral there and the closed form elsewhere.
_PHI3_CROSSOVER = 1e-3


def khavinson_phi(n: int, r: float) -> float:
    """The radial profile Phi_n(r) of the sharp harmonic gradient bound.

        Phi_n(r) = integral over t in [-1, 1] of
                   |t - (n-2) r / n| (1 - t^2)^((n-3)/2) (1 - 2 t r + r^2)^(-(n-2)/2)

    Phi_n(0) = 2/(n-1); Phi_3 is increasing on [0, 1] with the closed form

        Phi_3(r) = (2/3) ((1 + r^2/3)^(3/2) - 1 + r^2) / r^2,

    while Phi_n is decreasing for n >= 4.  The kink sits at t = (n-2) r / n.
    """
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"the profile is defined for n >= 3, got {n!r}")
    if not (0.0 <= r <= 1.0):
        raise ValueError(f"radius must lie in [0, 1], got {r}")
    if n == 3 and r > _PHI3_CROSSOVER:
        return _phi3_closed_form(r)
    return _phi_integral(n, r)


def _phi3_closed_form(r: float) -> float:
    return (2.0 / 3.0) * ((1.0 + r * r / 3.0) ** 1.5 - 1.0 + r * r) / (r * r)


def _phi_integral(n: int, r: float) -> float:
    """Direct quadrature of the profile, valid for all n >= 3, r in [0, 1]."""
    kink = (n - 2) * r / n
    power = (n - 2) / 2.0

    def integrand(u: np.ndarray) -> np.ndarray:
        t = np.sin(u)
        # substitution t = sin u: (1 - t^2)^((n-3)/2) dt = cos^{n-2}(u) du;
        # the kernel 1 - 2 t r + r^2 is summed in nonnegative parts so the
        # endpoint r = 1, u = pi/2 cannot cancel to zero prematurely.
        q = (1.0 - r) ** 2 + 4.0 * r * np.sin(math.pi / 4.0 - u / 2.0) ** 2
        return np.abs(t - kink) * np.cos(u) ** (n - 2) / q**power

    breaks = [math.asin(kink)] if abs(kink) < 1.0 else []
    return integrate_1d(integrand, -math.pi / 2.0, math.pi / 2.0, _PHI_CFG, breaks)


def khavinson_gradient_bound(n: int, r: float) -> float:
    """Sharp bound (n-1) omega_star(n) Phi_n(r) / (1 - r^2) on |grad u| at radius r."""
    if not (0.0 <= r < 1.0):
        raise ValueError(f"radius must lie in [0, 1), got {r}")
    return (n - 1) * ball_constants(n).omega_star * khavinson_phi(n, r) / (1.0 - r * r)


def khavinson_hyperbolic_bound(n: int, r: float) -> float:
    """Gradient bound 4 sigma_star(n) / (1 - r^2) for hyperbolic-harmonic maps."""
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"the bound is stated for n >= 3, got {n!r}")
    if not (0.0 <= r < 1.0):
        raise ValueError(f"radius must lie in [0, 1), got {r}")
    return 4.0 * ball_constants(n).sigma_star / (1.0 - r * r)


def thyp3_envelope(x_norm: float, u: float) -> tuple[float, float]:
    """Radial-derivative envelope on B^3 for harmonic u with |u| < 1:

        (-3 - |x| u) / (1 - |x|^2) * (1 - u^2)/2
            <= D_r u(x) <=
        (3 - |x| u) / (1 - |x|^2) * (1 - u^2)/2.
    """
    if not (0.0 <= x_norm < 1.0):
        raise ValueError(f"|x| must lie in [0, 1), got {x_norm}")
    if not (-1.0 < u < 1.0):
        raise ValueError(f"u must lie in (-1, 1), got {u}")
    om = 1.0 - x_norm * x_norm
    half = (1.0 - u * u) / 2.0
    return ((-3.0 - x_norm * u) / om * half, (3.0 - x_norm * u) / om * half)
