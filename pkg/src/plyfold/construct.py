"""Explicit deformation fields of a bent strip.

Three families are provided:

* :func:`build_plate` - a single circular arc over |x1| < L/2, no delamination;
* :func:`build_cpa` - the continuous piecewise-affine fold (limit of infinitely
  many plies, not isometric);
* :func:`build_multilayer` - the rounded fold in which ``n`` ply packets slide
  past each other along ``n - 1`` interfaces.

:func:`build_two_fold` joins two half-angle multilayer folds on quarter-length
domains, which extends the layered construction to bend angles above pi/4.

Every field evaluates ``u(x1, x2)`` and its gradient in closed form. Arrays are
accepted and broadcast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .angles import beta_eq, kinematics
from .core import (
    AdmissibilityError,
    ConstraintError,
    DomainError,
    MaterialSpec,
    check_alpha,
    perp,
    rotation,
)
from .curves import ArcCurve

_REL = 1e-12


@dataclass(frozen=True)
class ConstructionParams:
    """Free parameters of the rounded multilayer fold.

    ``boundaries`` holds ``b_0 = 0 < b_1 < ... < b_n = h``; delamination can
    only occur on the interior ordinates.
    """

    beta: float
    n: int
    l_arc: float
    boundaries: tuple[float, ...]

    @property
    def thicknesses(self) -> np.ndarray:
        return np.diff(np.asarray(self.boundaries, dtype=float))

    def to_dict(self) -> dict:
        return {"beta": self.beta, "n": self.n, "l_arc": self.l_arc, "boundaries": list(self.boundaries)}

    @classmethod
    def from_dict(cls, d: dict) -> "ConstructionParams":
        return cls(float(d["beta"]), int(d["n"]), float(d["l_arc"]), tuple(float(b) for b in d["boundaries"]))


def choose_boundaries(spec: MaterialSpec, n: int) -> tuple[float, ...]:
    """Interface ordinates for ``n`` packets on the ply grid ``h/N * Z``.

    Each ``b_j`` is the grid point nearest to ``j h / n`` (ties go down), so
    every packet is at most ``h/n + h/N <= 2h/n`` thick.
    """
    if not (1 <= n <= spec.N):
        raise DomainError(f"n must lie in 1..{spec.N}, got {n}")
    idx = [math.ceil(j * spec.N / n - 0.5) for j in range(1, n)]
    return (0.0, *(k * spec.h / spec.N for k in idx), float(spec.h))


def check_params(spec: MaterialSpec, alpha: float, params: ConstructionParams) -> None:
    """Raise if ``params`` are not admissible for the multilayer construction."""
    check_alpha(alpha, math.pi / 4)
    beta, n, la = params.beta, params.n, params.l_arc
    if not (1 <= n <= spec.N):
        raise ConstraintError(f"n must lie in 1..{spec.N}, got {n}")
    if not (alpha < beta < math.pi / 2):
        raise AdmissibilityError(f"beta={beta} must lie in (alpha, pi/2)")
    beq = beta_eq(alpha)
    if beta > beq * (1 + _REL):
        raise AdmissibilityError(f"beta={beta} exceeds beta_eq(alpha)={beq}")
    b = np.asarray(params.boundaries, dtype=float)
    if b.size != n + 1 or b[0] != 0.0 or not math.isclose(b[-1], spec.h, rel_tol=_REL):
        raise ConstraintError("boundaries must run from 0 to h with n + 1 entries")
    if np.any(np.diff(b) <= 0):
        raise ConstraintError("boundaries must be strictly increasing")
    grid = b[1:-1] * spec.N / spec.h
    if np.any(np.abs(grid - np.round(grid)) > 1e-9):
        raise ConstraintError("interior boundaries must be multiples of h/N")
    if np.any(np.diff(b) > 2 * spec.h / n * (1 + _REL)):
        raise ConstraintError("packet thickness h_j <= 2h/n violated")
    if 2 * beta * spec.h / n > la * (1 + _REL):
        raise ConstraintError(f"2*beta*h/n <= l_arc violated: {2 * beta * spec.h / n} > {la}")
    if la > spec.L / 8 * (1 + _REL):
        raise ConstraintError(f"l_arc <= L/8 violated: {la} > {spec.L / 8}")
    ell = kinematics(alpha, beta).zeta * spec.h
    if ell > spec.L / 4 * (1 + _REL):
        raise ConstraintError(f"zeta*h <= L/4 violated: {ell} > {spec.L / 4}")


class DeformationField:
    """Common interface of the constructed deformations."""

    kind: str
    spec: MaterialSpec
    alpha: float
    #: whether x1 breakpoints of the integrand depend on x2 within a layer
    row_dependent_breaks = False

    def _check(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        L, h = self.spec.L, self.spec.h
        tol = 1e-12 * L
        if np.any(np.abs(x1) > L + tol) or np.any(x2 < -1e-12 * h) or np.any(x2 > h * (1 + 1e-12)):
            raise DomainError("point outside [-L, L] x [0, h]")
        return np.broadcast_arrays(x1, x2)

    def eval(self, x1, x2) -> np.ndarray:
        x1, x2 = self._check(x1, x2)
        return self._eval(x1, x2)

    def grad(self, x1, x2) -> np.ndarray:
        x1, x2 = self._check(x1, x2)
        return self._grad(x1, x2)

    def layer_bounds(self) -> list[tuple[float, float]]:
        return [(0.0, self.spec.h)]

    def interfaces(self) -> list[float]:
        return []

    def trace_gap(self, k: int, x1) -> np.ndarray:
        raise IndexError("field has no interfaces")

    def x1_breaks(self, layer: int, x2=None) -> np.ndarray:
        return np.empty(0)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "spec": self.spec.to_dict(), "alpha": self.alpha}


class LayeredField(DeformationField):
    """``u = f_j(x1) + (x2 - b_j) f_j'(x1)^perp`` on each packet ``[b_j, b_{j+1})``."""

    def __init__(self, kind, spec, alpha, boundaries, curves, params=None):
        self.kind = kind
        self.spec = spec
        self.alpha = float(alpha)
        self.boundaries = np.asarray(boundaries, dtype=float)
        self.curves = list(curves)
        self.params = params

    @property
    def n_layers(self) -> int:
        return len(self.curves)

    def layer_of(self, x2) -> np.ndarray:
        # b_j belongs to packet j (half-open [b_j, b_{j+1})); x2 = h goes to the top packet
        return np.searchsorted(self.boundaries[1:-1], x2, side="right")

    def _eval(self, x1, x2):
        out = np.empty(x1.shape + (2,))
        layer = self.layer_of(x2)
        for j in np.unique(layer):
            m = layer == j
            c = self.curves[j]
            lam = (x2[m] - self.boundaries[j])[..., None]
            out[m] = c.point(x1[m]) + lam * perp(c.tangent(x1[m]))
        return out

    def _grad(self, x1, x2):
        out = np.empty(x1.shape + (2, 2))
        layer = self.layer_of(x2)
        for j in np.unique(layer):
            m = layer == j
            c = self.curves[j]
            th = c.angle(x1[m])
            stretch = 1.0 - (x2[m] - self.boundaries[j]) * c.curvature(x1[m])
            co, si = np.cos(th), np.sin(th)
            out[m] = np.stack([np.stack([co * stretch, -si], -1), np.stack([si * stretch, co], -1)], -2)
        return out

    def layer_bounds(self):
        b = self.boundaries
        return [(float(b[j]), float(b[j + 1])) for j in range(self.n_layers)]

    def interfaces(self):
        return [float(b) for b in self.boundaries[1:-1]]

    def trace_gap(self, k: int, x1) -> np.ndarray:
        """``u(x1, b_k+) - u(x1, b_k-)`` for interface ``k = 1 .. n-1``."""
        if not (1 <= k < self.n_layers):
            raise IndexError(k)
        x1 = np.asarray(x1, dtype=float)
        lower, upper = self.curves[k - 1], self.curves[k]
        hk = self.boundaries[k] - self.boundaries[k - 1]
        return upper.point(x1) - lower.point(x1) - hk * perp(lower.tangent(x1))

    def x1_breaks(self, layer, x2=None):
        knots = self.curves[layer].knots
        L = self.spec.L
        return knots[(knots > -L) & (knots < L)]

    def to_dict(self):
        d = super().to_dict()
        if self.params is not None:
            d["params"] = self.params.to_dict()
            d["boundaries"] = list(self.params.boundaries)
        return d


class CpaField(DeformationField):
    """Continuous piecewise-affine fold with a sheared, opened core."""

    row_dependent_breaks = True

    def __init__(self, spec, alpha, beta):
        self.kind = "Cpa"
        self.spec = spec
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.kin = kinematics(alpha, beta)

    def core_gradient(self, sign=1.0) -> np.ndarray:
        cb, sb = math.cos(self.beta), math.sin(self.beta)
        return np.array([[cb, 0.0], [sign * sb, self.kin.d]])

    def _inner(self, x1, x2):
        return np.abs(x1) < self.kin.zeta * (self.spec.h - x2)

    def _eval(self, x1, x2):
        a, b, h, d = self.alpha, self.beta, self.spec.h, self.kin.d
        sgn = np.sign(x1)
        inner = np.stack([x1 * math.cos(b), np.abs(x1) * math.sin(b) + d * x2], -1)
        outer = np.stack(
            [
                x1 * math.cos(a) + (x2 - h) * math.sin(a) * sgn,
                -np.abs(x1) * math.sin(a) + (x2 - h) * math.cos(a) + d * h,
            ],
            -1,
        )
        return np.where(self._inner(x1, x2)[..., None], inner, outer)

    def _grad(self, x1, x2):
        a = self.alpha
        sgn = np.sign(x1)
        cb, sb = math.cos(self.beta), math.sin(self.beta)
        inner = np.empty(x1.shape + (2, 2))
        inner[..., 0, 0], inner[..., 0, 1] = cb, 0.0
        inner[..., 1, 0], inner[..., 1, 1] = sgn * sb, self.kin.d
        outer = rotation(-a * np.where(sgn == 0, 1.0, sgn))
        return np.where(self._inner(x1, x2)[..., None, None], inner, outer)

    def branch_gap(self, x2) -> np.ndarray:
        """Jump of the two closed-form branches across |x1| = zeta (h - x2)."""
        x2 = np.asarray(x2, dtype=float)
        a, b, h, d = self.alpha, self.beta, self.spec.h, self.kin.d
        out = []
        for s in (1.0, -1.0):
            x1 = s * self.kin.zeta * (h - x2)
            inner = np.stack([x1 * math.cos(b), np.abs(x1) * math.sin(b) + d * x2], -1)
            outer = np.stack(
                [x1 * math.cos(a) + (x2 - h) * math.sin(a) * s, -np.abs(x1) * math.sin(a) + (x2 - h) * math.cos(a) + d * h],
                -1,
            )
            out.append(np.linalg.norm(inner - outer, axis=-1))
        return np.maximum(*out)

    def x1_breaks(self, layer, x2=None):
        w = self.kin.zeta * (self.spec.h - float(x2))
        w = min(w, self.spec.L)
        return np.array([-w, w]) if w > 0 else np.empty(0)

    def to_dict(self):
        d = super().to_dict()
        d["params"] = {"beta": self.beta}
        return d


class TwoFoldField(DeformationField):
    """Two half-angle folds centred at x1 = -L/4 and x1 = L/4.

    The left fold takes the slope from alpha to 0, the right one from 0 to
    -alpha; each is a multilayer fold of angle alpha/2 on a strip of
    half-length L/4, rotated into place.
    """

    def __init__(self, spec, alpha, half: LayeredField):
        self.kind = "TwoFold"
        self.spec = spec
        self.alpha = float(alpha)
        self.half = half
        self.params = half.params
        q = spec.L / 4
        self._q = q
        self._rl = rotation(alpha / 2)
        self._rr = rotation(-alpha / 2)
        v = self._rr @ half._eval(np.array(-q), np.array(0.0))
        self._tr = np.array([-v[0], 0.0])
        self._tl = np.array([v[0], 0.0])

    def _eval(self, x1, x2):
        q = self._q
        left = x1 < 0
        out = np.empty(x1.shape + (2,))
        if np.any(left):
            out[left] = self.half._eval(x1[left] + q, x2[left]) @ self._rl.T + self._tl
        if np.any(~left):
            out[~left] = self.half._eval(x1[~left] - q, x2[~left]) @ self._rr.T + self._tr
        return out

    def _grad(self, x1, x2):
        q = self._q
        left = x1 < 0
        out = np.empty(x1.shape + (2, 2))
        if np.any(left):
            out[left] = self._rl @ self.half._grad(x1[left] + q, x2[left])
        if np.any(~left):
            out[~left] = self._rr @ self.half._grad(x1[~left] - q, x2[~left])
        return out

    def layer_bounds(self):
        return self.half.layer_bounds()

    def interfaces(self):
        return self.half.interfaces()

    def trace_gap(self, k, x1):
        x1 = np.asarray(x1, dtype=float)
        q = self._q
        gl = self.half.trace_gap(k, x1 + q) @ self._rl.T
        gr = self.half.trace_gap(k, x1 - q) @ self._rr.T
        return np.where((x1 < 0)[..., None], gl, gr)

    def x1_breaks(self, layer, x2=None):
        kn = self.half.curves[layer].knots
        L = self.spec.L
        pts = np.concatenate([kn - self._q, [0.0], kn + self._q])
        return np.unique(pts[(pts > -L) & (pts < L)])

    def to_dict(self):
        d = super().to_dict()
        d["params"] = self.params.to_dict()
        d["boundaries"] = list(self.params.boundaries)
        return d


def build_plate(spec: MaterialSpec, alpha: float) -> LayeredField:
    """Constant-curvature bend over |x1| < L/2 with rigid ends; no jump set."""
    if not (0 <= alpha <= math.pi / 2):
        raise DomainError(f"alpha must lie in [0, pi/2], got {alpha}")
    L = spec.L
    kappa = -2 * alpha / L
    curve = ArcCurve.from_anchor([-L / 2, L / 2], [0.0, kappa, 0.0], 0.0, (0.0, 0.0), 0.0)
    return LayeredField("Plate", spec, alpha, [0.0, spec.h], [curve])


def build_cpa(spec: MaterialSpec, alpha: float, beta: float) -> CpaField:
    if not (0 < alpha < math.pi / 2):
        raise DomainError(f"alpha must lie in (0, pi/2), got {alpha}")
    if not (alpha < beta < math.pi / 2):
        raise AdmissibilityError(f"beta={beta} must lie in (alpha, pi/2)")
    beq = beta_eq(alpha)
    if beta > beq * (1 + _REL):
        raise AdmissibilityError(f"beta={beta} exceeds beta_eq(alpha)={beq}")
    z = kinematics(alpha, beta).zeta
    if z > spec.L / (2 * spec.h) * (1 + _REL):
        raise AdmissibilityError(f"zeta={z} exceeds L/(2h)={spec.L / (2 * spec.h)}")
    return CpaField(spec, alpha, beta)


def layer_curve(alpha: float, beta: float, l_arc: float, down_slope: float, base: float, d: float) -> ArcCurve:
    """Bottom curve of one packet: arcs of length ``l_arc`` rounding the corners
    of the down-slope of half-width ``down_slope``; anchored at ``(0, d*base)``."""
    la, lj = l_arc, down_slope
    knots = [-(lj + 2 * la), -(lj + la), -la, la, lj + la, lj + 2 * la]
    k_out = -(alpha + beta) / la
    kappa = [0.0, k_out, 0.0, beta / la, 0.0, k_out, 0.0]
    return ArcCurve.from_anchor(knots, kappa, 0.0, (0.0, d * base), 0.0)


def build_multilayer(
    spec: MaterialSpec, alpha: float, params: ConstructionParams, validate: bool = True
) -> LayeredField:
    """Rounded fold with ``params.n`` packets.

    ``validate=False`` skips the admissibility checks; used to build negative
    controls for the certification machinery.
    """
    if validate:
        check_params(spec, alpha, params)
    kin = kinematics(alpha, params.beta)
    b = np.asarray(params.boundaries, dtype=float)
    curves = [
        layer_curve(alpha, params.beta, params.l_arc, kin.zeta * (spec.h - b[j]), b[j], kin.d)
        for j in range(params.n)
    ]
    field = LayeredField("Multilayer", spec, alpha, b, curves, params)
    field.kin = kin
    return field


def half_spec(spec: MaterialSpec) -> MaterialSpec:
    """Material of one of the two quarter-length folds."""
    return replace(spec, L=spec.L / 4, validate=False)


def build_two_fold(
    spec: MaterialSpec, alpha: float, params: ConstructionParams, validate: bool = True
) -> TwoFoldField:
    """Two folds of angle alpha/2; ``params`` refer to the half fold on (-L/4, L/4)."""
    check_alpha(alpha)
    half = build_multilayer(half_spec(spec), alpha / 2, params, validate=validate)
    return TwoFoldField(spec, alpha, half)


def eval_field(field: DeformationField, x1, x2) -> np.ndarray:
    return field.eval(x1, x2)


def eval_grad(field: DeformationField, x1, x2) -> np.ndarray:
    return field.grad(x1, x2)


def field_from_dict(d: dict) -> DeformationField:
    spec = MaterialSpec.from_dict(d["spec"])
    kind, alpha = d["kind"], float(d["alpha"])
    if kind == "Plate":
        return build_plate(spec, alpha)
    if kind == "Cpa":
        return build_cpa(spec, alpha, float(d["params"]["beta"]))
    params = ConstructionParams.from_dict(d["params"])
    if kind == "Multilayer":
        return build_multilayer(spec, alpha, params)
    if kind == "TwoFold":
        return build_two_fold(spec, alpha, params)
    raise ValueError(f"unknown field kind {kind!r}")


def layer_outlines(field: DeformationField, samples: int = 400) -> list[np.ndarray]:
    """Deformed images of every packet boundary line, for plotting."""
    x1 = np.linspace(-field.spec.L, field.spec.L, samples)
    out = []
    for lo, hi in field.layer_bounds():
        out.append(field.eval(x1, np.full_like(x1, lo)))
        top = hi - 1e-12 * field.spec.h
        out.append(field.eval(x1, np.full_like(x1, top)))
    return out
