"""Closed-form volumes and surface areas of the unit ball and sphere in R^n.

omega_n is the n-volume of the unit ball B^n, sigma_n the (n-1)-volume of the
unit sphere S^{n-1} (so sigma_n = n * omega_n).  The consecutive ratios

    omega_star(n) = omega_{n-1} / omega_n
    sigma_star(n) = sigma_{n-1} / sigma_n = (n-1)/n * omega_star(n)

drive every sharp constant in this library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

# Above this dimension the half-integer gamma recursion works in log space;
# gamma(n/2 + 1) itself overflows float64 near n = 340.
_LOG_DOMAIN = 170


def _gamma_half(m: int) -> float:
    """Gamma(m/2) for positive integer m, by exact recursion.

    Even m reduces to an integer factorial; odd m recurses down to
    Gamma(1/2) = sqrt(pi).  Exact to the ulp for moderate m.
    """
    if m <= 0:
        raise ValueError(f"gamma argument m/2 must be positive, got m={m}")
    if m % 2 == 0:
        return float(math.factorial(m // 2 - 1))
    val = math.sqrt(math.pi)
    for k in range(1, m - 1, 2):
        val *= k / 2.0
    return val


def _log_gamma_half(m: int) -> float:
    """log Gamma(m/2), same recursion as _gamma_half carried in logs."""
    if m <= 0:
        raise ValueError(f"gamma argument m/2 must be positive, got m={m}")
    if m % 2 == 0:
        return math.lgamma(m // 2)  # log((m/2 - 1)!) without overflow
    val = 0.5 * math.log(math.pi)
    for k in range(1, m - 1, 2):
        val += math.log(k / 2.0)
    return val


def _log_omega(n: int) -> float:
    """log of the n-volume of B^n."""
    return 0.5 * n * math.log(math.pi) - _log_gamma_half(n + 2)


def _omega(n: int) -> float:
    if n == 0:
        return 1.0
    if n <= _LOG_DOMAIN:
        return math.pi ** (n / 2.0) / _gamma_half(n + 2)
    return math.exp(_log_omega(n))


@dataclass(frozen=True)
class BallConstants:
    """Immutable record of the ball/sphere constants for one dimension."""

    n: int
    omega_n: float
    sigma_n: float
    omega_star: float
    sigma_star: float


def _omega_star(n: int) -> float:
    """omega_{n-1} / omega_n through the two-step recurrence

        omega_star(n) = omega_star(n-2) * n / (n-1),

    anchored at omega_star(1) = 1/2 and omega_star(2) = 2/pi.  Odd dimensions
    come out as exact dyadic products (3/4, 15/16, ...), and no intermediate
    value can overflow.
    """
    val = 0.5 if n % 2 == 1 else 2.0 / math.pi
    for k in range(3 if n % 2 == 1 else 4, n + 1, 2):
        val *= k / (k - 1.0)
    return val


@lru_cache(maxsize=None)
def ball_constants(n: int) -> BallConstants:
    """Constants of B^n: omega_n = pi^(n/2) / Gamma(n/2 + 1) and its ratios.

    Raises ValueError for n <= 0 or non-integer n.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"dimension must be an integer, got {n!r}")
    if n <= 0:
        raise ValueError(f"dimension must be >= 1, got {n}")
    omega_n = _omega(n)
    return BallConstants(
        n=n,
        omega_n=omega_n,
        sigma_n=n * omega_n,
        omega_star=_omega_star(n),
        sigma_star=(n - 1) / n * _omega_star(n),
    )


def ratio_bounds(n: int, method: str) -> tuple[float, float]:
    """Literature bracketing interval (lo, hi) for omega_star(n), n >= 2.

    method "borgwardt": sqrt(n/2pi) <= omega_star(n) <= sqrt((n+1)/2pi).
    method "alzer": the refinement sqrt((n+A)/2pi) <= . <= sqrt((n+B)/2pi)
    with the best constants A = 1/2 and B = pi/2 - 1.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"ratio bounds require integer n >= 2, got {n!r}")
    two_pi = 2.0 * math.pi
    if method == "borgwardt":
        return math.sqrt(n / two_pi), math.sqrt((n + 1) / two_pi)
    if method == "alzer":
        return math.sqrt((n + 0.5) / two_pi), math.sqrt((n + math.pi / 2 - 1) / two_pi)
    raise ValueError(f"unknown method {method!r}; expected 'borgwardt' or 'alzer'")


def sigma_star_bounds_check(n: int) -> bool:
    """True iff 1/2 < sqrt((n-1)/8) < sigma_star(n) < (n-1)/4 holds strictly.

    The chain is only asserted for n >= 4; smaller n is rejected.
    """
    if not isinstance(n, int) or n < 4:
        raise ValueError(f"bounds chain is stated for n >= 4, got {n!r}")
    s = ball_constants(n).sigma_star
    lo = math.sqrt((n - 1) / 8.0)
    return 0.5 < lo < s < (n - 1) / 4.0
