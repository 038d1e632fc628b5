"""Domain types and 2x2 matrix primitives shared across the package."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np


class PlyfoldError(ValueError):
    """Base class for all package errors."""


class DomainError(PlyfoldError):
    """An argument lies outside the domain of a function."""


class AdmissibilityError(PlyfoldError):
    """The fold angle is not admissible for the prescribed bend angle."""


class ConstraintError(PlyfoldError):
    """A geometric constraint of the layered construction is violated."""


class RegimeError(PlyfoldError):
    """A parameter point lies outside the regime a formula was derived for."""


@dataclass(frozen=True)
class MaterialSpec:
    """Geometry and material of a paperboard strip.

    Parameters
    ----------
    h : float
        Total thickness.
    L : float
        Half-length of the strip; the reference domain is (-L, L) x (0, h).
    N : int
        Number of plies.
    gamma : float
        Delamination energy per unit interface length (a length).
    """

    h: float
    L: float
    N: int
    gamma: float
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.h, self.L, self.gamma)):
            raise DomainError("h, L and gamma must be finite")
        if self.h <= 0 or self.L <= 0 or self.gamma <= 0:
            raise DomainError("h, L and gamma must be positive")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be an integer >= 1, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        if self.validate and self.h > self.L / 4:
            raise DomainError(f"h={self.h} exceeds L/4={self.L / 4}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("validate")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MaterialSpec":
        return cls(h=d["h"], L=d["L"], N=d["N"], gamma=d["gamma"])


def check_alpha(alpha: float, upper: float = math.pi / 2) -> float:
    """Validate a bend angle in (0, upper]."""
    if not math.isfinite(alpha) or not (0 < alpha <= upper):
        raise DomainError(f"alpha must lie in (0, {upper:.6g}], got {alpha}")
    return float(alpha)


@dataclass(frozen=True)
class EnergyBreakdown:
    elastic: float
    delamination: float
    total: float
    jump_lengths: tuple[float, ...] = ()

    @classmethod
    def from_parts(cls, elastic: float, gamma: float, jump_lengths) -> "EnergyBreakdown":
        lengths = tuple(float(v) for v in jump_lengths)
        delam = gamma * math.fsum(lengths)
        return cls(float(elastic), delam, float(elastic) + delam, lengths)

    def scaled(self, factor: int) -> "EnergyBreakdown":
        """Breakdown of ``factor`` identical copies of this construction."""
        return EnergyBreakdown(
            factor * self.elastic,
            factor * self.delamination,
            factor * self.total,
            self.jump_lengths * factor,
        )

    def to_dict(self) -> dict:
        return {
            "elastic": self.elastic,
            "delamination": self.delamination,
            "total": self.total,
            "jump_lengths": list(self.jump_lengths),
        }


def rotation(phi) -> np.ndarray:
    """Counterclockwise rotation matrix; vectorizes over ``phi`` (shape ``(..., 2, 2)``)."""
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def perp(v: np.ndarray) -> np.ndarray:
    """Rotate vectors (last axis) by +90 degrees: (a1, a2) -> (-a2, a1)."""
    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0]], -1)


def dist_so2_squared(F) -> np.ndarray:
    """Squared Frobenius distance of 2x2 matrices to SO(2).

    With singular values s1 >= s2 this equals (s1-1)^2 + (s2 -+ 1)^2, the sign
    following det F. Both cases reduce to |F - R*|^2 where R* is the rotation
    by atan2(F21 - F12, F11 + F22); evaluating that residual directly keeps
    full relative precision for nearly rigid gradients.
    """
    F = np.asarray(F, dtype=float)
    a, b = F[..., 0, 0], F[..., 0, 1]
    c, d = F[..., 1, 0], F[..., 1, 1]
    p = a + d
    q = c - b
    r = np.hypot(p, q)
    safe = np.where(r > 0, r, 1.0)
    co = np.where(r > 0, p / safe, 1.0)
    si = np.where(r > 0, q / safe, 0.0)
    return (a - co) ** 2 + (b + si) ** 2 + (c - si) ** 2 + (d - co) ** 2


def dist_so2_squared_svd(F) -> np.ndarray:
    """Same quantity from the closed-form singular values (|F|^2, det F)."""
    F = np.asarray(F, dtype=float)
    fro2 = np.sum(F**2, axis=(-2, -1))
    det = F[..., 0, 0] * F[..., 1, 1] - F[..., 0, 1] * F[..., 1, 0]
    ssum = np.sqrt(np.maximum(fro2 + 2 * np.abs(det), 0.0))
    sdiff = np.sqrt(np.maximum(fro2 - 2 * np.abs(det), 0.0))
    s1, s2 = (ssum + sdiff) / 2, (ssum - sdiff) / 2
    return np.where(det >= 0, (s1 - 1) ** 2 + (s2 - 1) ** 2, (s1 - 1) ** 2 + (s2 + 1) ** 2)
