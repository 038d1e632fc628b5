"""Arc-length parametrized planar curves made of straight segments and circular arcs.

A curve is given by its breakpoints ``t_1 < ... < t_m`` and a constant
curvature on each of the ``m + 1`` pieces ``(-inf, t_1), [t_1, t_2), ...,
[t_m, inf)``. Its tangent angle is continuous and piecewise linear, so
positions are integrated in closed form: over a piece of length ``s`` with
curvature ``k`` the chord is ``s * sinc(k s / 2)`` in the direction of the
mid-piece angle. No numerical ODE integration is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _chord(theta0, kappa, s):
    half = kappa * s / 2
    length = s * np.sinc(half / np.pi)
    ang = theta0 + half
    return np.stack([length * np.cos(ang), length * np.sin(ang)], -1)


@dataclass(frozen=True)
class ArcCurve:
    """Planar curve with piecewise constant curvature.

    Attributes
    ----------
    knots : ndarray, shape (m,)
        Strictly increasing breakpoints.
    kappa : ndarray, shape (m + 1,)
        Curvature on each piece.
    theta : ndarray, shape (m,)
        Tangent angle at each knot.
    points : ndarray, shape (m, 2)
        Position at each knot.
    """

    knots: np.ndarray
    kappa: np.ndarray
    theta: np.ndarray
    points: np.ndarray

    @classmethod
    def from_anchor(cls, knots, kappa, anchor: float, point, angle: float) -> "ArcCurve":
        """Integrate outwards from a known position and tangent angle at ``anchor``."""
        knots = np.asarray(knots, dtype=float)
        kappa = np.asarray(kappa, dtype=float)
        if knots.ndim != 1 or kappa.shape != (knots.size + 1,):
            raise ValueError("need m knots and m + 1 curvatures")
        if np.any(np.diff(knots) <= 0):
            raise ValueError("knots must be strictly increasing")
        m = knots.size
        theta = np.empty(m)
        points = np.empty((m, 2))
        point = np.asarray(point, dtype=float)
        i0 = int(np.searchsorted(knots, anchor, side="right"))  # piece holding the anchor
        # march right
        x, th, p = anchor, angle, point
        for i in range(i0, m):
            s = knots[i] - x
            p = p + _chord(th, kappa[i], s)
            th = th + kappa[i] * s
            x = knots[i]
            theta[i], points[i] = th, p
        # march left
        x, th, p = anchor, angle, point
        for i in range(i0 - 1, -1, -1):
            s = knots[i] - x
            piece = i + 1
            p = p + _chord(th, kappa[piece], s)
            th = th + kappa[piece] * s
            x = knots[i]
            theta[i], points[i] = th, p
        return cls(knots, kappa, theta, points)

    def _locate(self, x):
        x = np.asarray(x, dtype=float)
        piece = np.searchsorted(self.knots, x, side="right")
        ref = np.maximum(piece - 1, 0)
        return x, piece, ref, x - self.knots[ref]

    def angle(self, x) -> np.ndarray:
        x, piece, ref, s = self._locate(x)
        return self.theta[ref] + self.kappa[piece] * s

    def curvature(self, x) -> np.ndarray:
        _, piece, _, _ = self._locate(x)
        return self.kappa[piece]

    def point(self, x) -> np.ndarray:
        x, piece, ref, s = self._locate(x)
        return self.points[ref] + _chord(self.theta[ref], self.kappa[piece], s)

    def tangent(self, x) -> np.ndarray:
        th = self.angle(x)
        return np.stack([np.cos(th), np.sin(th)], -1)

    def second_derivative(self, x) -> np.ndarray:
        th = self.angle(x)
        k = self.curvature(x)
        return np.stack([-k * np.sin(th), k * np.cos(th)], -1)

    def pieces(self, lo: float, hi: float) -> list[tuple[float, float, float]]:
        """``(start, end, curvature)`` for every piece meeting [lo, hi]."""
        edges = np.concatenate([[lo], self.knots[(self.knots > lo) & (self.knots < hi)], [hi]])
        out = []
        for a, b in zip(edges[:-1], edges[1:]):
            out.append((float(a), float(b), float(self.curvature(0.5 * (a + b)))))
        return out
