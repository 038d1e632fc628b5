"""Kinematics of the piecewise-affine fold.

A fold of bend angle ``alpha`` is parametrized by the slope angle ``beta``
of its down-slope. Two scalars follow from continuity of the deformation:
the down-slope width factor ``zeta`` and the opening factor ``d``. Layers do
not interpenetrate iff ``d cos(beta) >= 1``, which holds exactly for
``beta <= beta_eq(alpha)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import bisect

from .core import DomainError

HALF_PI = math.pi / 2
_EDGE = 1e-14 * math.pi


def _check_pair(alpha: float, beta: float, beta_max: float = HALF_PI) -> None:
    if not (0 < alpha < HALF_PI):
        raise DomainError(f"alpha must lie in (0, pi/2), got {alpha}")
    if not (alpha < beta <= beta_max):
        raise DomainError(f"beta must lie in (alpha, {beta_max:.17g}], got beta={beta}, alpha={alpha}")


def _denominator(alpha: float, beta: float) -> float:
    # cos(alpha) - cos(beta), free of cancellation for beta close to alpha
    return 2.0 * math.sin((alpha + beta) / 2) * math.sin((beta - alpha) / 2)


def f_alpha(alpha: float, beta: float) -> float:
    """Non-interpenetration function; strictly decreasing in ``beta``, zero at pi/2."""
    _check_pair(alpha, beta)
    return math.sin((alpha + beta) / 2) / math.sin((beta - alpha) / 2) * math.cos(beta)


def f_alpha_unreduced(alpha: float, beta: float) -> float:
    """``f_alpha`` from its defining ratio, before trigonometric simplification."""
    _check_pair(alpha, beta)
    ca, sa, cb, sb = math.cos(alpha), math.sin(alpha), math.cos(beta), math.sin(beta)
    return (1 - ca * cb + sa * sb) / (ca - cb) * cb


def beta_eq(alpha: float, tol: float = 1e-12) -> float:
    """Largest admissible fold angle: the root of ``f_alpha(beta) = 1``.

    Bisection on the bracket (alpha, pi/2), where f_alpha decreases strictly
    from +inf to 0.
    """
    if not (0 < alpha < HALF_PI):
        raise DomainError(f"alpha must lie in (0, pi/2), got {alpha}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    lo, hi = alpha + _EDGE, HALF_PI - _EDGE
    return bisect(lambda b: f_alpha(alpha, b) - 1.0, lo, hi, xtol=tol, rtol=8.9e-16, maxiter=400)


def zeta(alpha: float, beta: float) -> float:
    return math.sin(alpha) / _denominator(alpha, beta)


def opening(alpha: float, beta: float) -> float:
    # (1 - cos a cos b + sin a sin b) / (cos a - cos b) = sin((a+b)/2) / sin((b-a)/2)
    return math.sin((alpha + beta) / 2) / math.sin((beta - alpha) / 2)


@dataclass(frozen=True)
class FoldKinematics:
    alpha: float
    beta: float
    zeta: float
    d: float

    @property
    def contact(self) -> float:
        """``d cos(beta)``; at least one for an admissible fold."""
        return self.d * math.cos(self.beta)

    @property
    def admissible(self) -> bool:
        return self.contact >= 1.0


def kinematics(alpha: float, beta: float) -> FoldKinematics:
    if not (alpha < beta < HALF_PI):
        raise DomainError(f"kinematics needs alpha < beta < pi/2, got alpha={alpha}, beta={beta}")
    _check_pair(alpha, beta)
    return FoldKinematics(alpha, beta, zeta(alpha, beta), opening(alpha, beta))


def beta_for_zeta(alpha: float, zeta_max: float, tol: float = 1e-13) -> float:
    """Smallest ``beta`` with ``zeta(alpha, beta) <= zeta_max`` (zeta decreases in beta)."""
    if zeta(alpha, HALF_PI - _EDGE) > zeta_max:
        return HALF_PI
    lo = alpha + _EDGE
    if zeta(alpha, lo) <= zeta_max:
        return lo
    root = bisect(lambda b: zeta(alpha, b) - zeta_max, lo, HALF_PI - _EDGE, xtol=tol, maxiter=400)
    # step to the feasible side of the bracket
    return min(root + 2 * tol, HALF_PI - _EDGE)
