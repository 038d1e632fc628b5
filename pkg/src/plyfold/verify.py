"""Numeric certificates for constructed fields.

A multilayer field is injective when neighbouring packet bottoms stay at least
one packet thickness apart, ``|f_j(s) - f_{j+1}(t)| >= h_j``. The distance from
a point to a curve made of segments and circular arcs is computed exactly per
piece, so only the outer variable ``s`` is sampled and then refined.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .angles import beta_eq, kinematics
from .construct import ConstructionParams, CpaField, DeformationField, LayeredField, TwoFoldField, check_params
from .core import PlyfoldError, rotation
from .curves import ArcCurve
from .parallel import thread_map

BOUNDARY_TOL = 1e-12
SEPARATION_TOL = 1e-9


def check_boundary(field: DeformationField, samples: int = 200) -> float:
    """Max Frobenius deviation of Du from R(-+alpha) for L/2 < |x1| <= L.

    x1 = L/2 itself is left out: a bend may end exactly there, and Du has
    no value on that line.
    """
    L, h = field.spec.L, field.spec.h
    s = L / 2 + (L / 2) * np.arange(1, samples + 1) / samples
    worst = 0.0
    for lo, hi in field.layer_bounds():
        ys = np.linspace(lo, hi, 4, endpoint=False)[1:] if hi > lo else [lo]
        ys = np.concatenate([[lo], ys])
        X, Y = np.meshgrid(s, ys)
        right = field.grad(X, Y) - rotation(-field.alpha)
        left = field.grad(-X, Y) - rotation(field.alpha)
        worst = max(worst, float(np.max(np.linalg.norm(right, axis=(-2, -1)))))
        worst = max(worst, float(np.max(np.linalg.norm(left, axis=(-2, -1)))))
    return worst


def check_central_radius(params: ConstructionParams) -> bool:
    """Every packet fits inside the radius of the central arc: h_j <= l_arc / beta."""
    return bool(np.all(params.thicknesses * params.beta <= params.l_arc * (1 + 1e-12)))


def downslope_contact(alpha: float, params: ConstructionParams) -> bool:
    """Whether some pair of packets touches along the down-slope.

    Packet j+1 sits d h_j above packet j, so along the down-slope its straight
    part starts d h_j sin(beta) further on. If the upper straight part, of
    length l_{j+1}, reaches past that offset, the two straight parts face each
    other at distance d h_j cos(beta), which is h_j at beta_eq. Packets may
    also touch near the corners; that is not covered here.
    """
    kin = kinematics(alpha, params.beta)
    b = np.asarray(params.boundaries)
    upper = kin.zeta * (b[-1] - b[1:-1])
    return bool(np.any(upper >= np.diff(b)[:-1] * kin.d * math.sin(params.beta)))


def _piece_distance(P, start, theta0, kappa, length):
    """Exact distance from points P (m, 2) to one segment or circular arc."""
    t0 = np.array([math.cos(theta0), math.sin(theta0)])
    if kappa == 0.0:
        tt = np.clip((P - start) @ t0, 0.0, length)
        return np.linalg.norm(P - (start + tt[:, None] * t0), axis=-1)
    n0 = np.array([-t0[1], t0[0]])
    centre = start + n0 / kappa
    r = 1.0 / abs(kappa)
    w = P - centre
    rho = np.linalg.norm(w, axis=-1)
    sg = math.copysign(1.0, kappa)
    # tangent angle of the arc point radially aligned with P
    th = np.arctan2(sg * w[:, 0], -sg * w[:, 1])
    t_star = np.mod(sg * (th - theta0), 2 * math.pi) / abs(kappa)
    inside = t_star <= length
    end_ang = theta0 + kappa * length
    end = centre - np.array([-math.sin(end_ang), math.cos(end_ang)]) / kappa
    d_end = np.minimum(np.linalg.norm(P - start, axis=-1), np.linalg.norm(P - end, axis=-1))
    return np.where(inside, np.minimum(np.abs(rho - r), d_end), d_end)


def point_curve_distance(P, curve: ArcCurve, lo: float, hi: float) -> np.ndarray:
    """min over t in [lo, hi] of |P - curve(t)|."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    best = np.full(P.shape[0], np.inf)
    for a, b, k in curve.pieces(lo, hi):
        start = curve.point(np.array(a))
        th = float(curve.angle(np.array(a)))
        best = np.minimum(best, _piece_distance(P, start, th, k, b - a))
    return best


@dataclass(frozen=True)
class SeparationResult:
    ratio: float  # minimum over the fold core, |s| <= l_{j+1} + l_arc
    global_ratio: float  # minimum over the whole strip; 1 on the straight arms
    witness: tuple[int, float]  # (pair index j, s) realising ``ratio``


def _pair_min(lower: ArcCurve, upper: ArcCurve, hj: float, s_lo: float, s_hi: float, t_lo: float, t_hi: float, per_piece: int):
    def dist(s):
        return point_curve_distance(lower.point(np.atleast_1d(s)), upper, t_lo, t_hi)

    grid = np.unique(
        np.concatenate([np.linspace(a, b, per_piece) for a, b, _ in lower.pieces(s_lo, s_hi)])
    )
    vals = dist(grid)
    i = int(np.argmin(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    best_s, best = float(grid[i]), float(vals[i])
    if b > a:
        res = minimize_scalar(lambda s: float(dist(s)[0]), bounds=(a, b), method="bounded", options={"xatol": 1e-12 * (b - a + 1)})
        if res.fun < best:
            best_s, best = float(res.x), float(res.fun)
    return best / hj, best_s


def check_layer_separation(field: LayeredField, samples: int = 256) -> SeparationResult:
    """Minimum of |f_j(s) - f_{j+1}(t)| / h_j over adjacent packets.

    ``samples`` is the number of s-points per curve piece before refinement.
    """
    if isinstance(field, TwoFoldField):
        field = field.half
    if not isinstance(field, LayeredField) or field.n_layers < 2:
        return SeparationResult(math.inf, math.inf, (-1, math.nan))
    L = field.spec.L
    p = field.params
    b = field.boundaries
    z = field.kin.zeta

    def pair(j):
        lower, upper = field.curves[j], field.curves[j + 1]
        hj = b[j + 1] - b[j]
        core = min(z * (field.spec.h - b[j + 1]) + p.l_arc, L)
        r_core, s_core = _pair_min(lower, upper, hj, -core, core, -L, L, samples)
        r_all, _ = _pair_min(lower, upper, hj, -L, L, -L, L, samples)
        return r_core, s_core, r_all

    results = thread_map(pair, range(field.n_layers - 1))
    j = int(np.argmin([r[0] for r in results]))
    return SeparationResult(results[j][0], min(r[2] for r in results), (j, results[j][1]))


@dataclass
class CertificateReport:
    kind: str
    checks: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, value=None, witness=None):
        self.checks[name] = {"passed": bool(passed), "value": value, "witness": witness}

    @property
    def certified(self) -> bool:
        return all(c["passed"] for c in self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, c in self.checks.items() if not c["passed"]]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "certified": self.certified, "checks": self.checks}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=float)


def certify(field: DeformationField, samples: int = 256) -> CertificateReport:
    rep = CertificateReport(field.kind)
    res = check_boundary(field)
    rep.add("boundary", res < BOUNDARY_TOL, res)
    if isinstance(field, CpaField):
        gap = float(np.max(field.branch_gap(np.linspace(0, field.spec.h, 100))))
        rep.add("continuity", gap < 1e-12, gap)
        contact = field.kin.contact
        rep.add("admissibility", contact >= 1 - 1e-12, contact)
        return rep
    if field.kind == "Plate":
        r = 2 * field.alpha * field.spec.h / field.spec.L
        rep.add("curvature_radius", r <= 1, r)
        return rep
    layered = field.half if isinstance(field, TwoFoldField) else field
    p = layered.params
    try:
        check_params(layered.spec, layered.alpha, p)
        rep.add("constraints", True)
    except PlyfoldError as exc:
        rep.add("constraints", False, str(exc))
    rep.add("admissibility", layered.kin.contact >= 1 - 1e-12, layered.kin.contact)
    rep.add("central_radius", check_central_radius(p), float(np.max(p.thicknesses) * p.beta / p.l_arc))
    sep = check_layer_separation(layered, samples)
    ok = min(sep.ratio, sep.global_ratio) >= 1 - SEPARATION_TOL
    val = None if math.isinf(sep.ratio) else sep.ratio
    glob = None if math.isinf(sep.global_ratio) else sep.global_ratio
    rep.add("layer_separation", ok, val, {"pair": sep.witness[0], "s": sep.witness[1], "global_ratio": glob})
    return rep
