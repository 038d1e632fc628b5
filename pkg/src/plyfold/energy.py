"""Energies of constructed fields: quadrature, jump measurement and closed forms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angles import kinematics
from .construct import ConstructionParams, DeformationField
from .core import DomainError, EnergyBreakdown, MaterialSpec, dist_so2_squared

JUMP_THRESHOLD = 1e-10


@dataclass(frozen=True)
class QuadratureSettings:
    nx: int = 2048
    ny_per_layer: int = 16

    def __post_init__(self):
        if self.nx < 16 or self.ny_per_layer < 4:
            raise DomainError("need nx >= 16 and ny_per_layer >= 4")


def _cells(breaks, L, nx):
    """Midpoint nodes and weights on [-L, L] split at ``breaks`` and at 0.

    Splitting at 0 keeps nodes off the symmetry line, where sign(x1) = 0.
    """
    edges = np.unique(np.concatenate([[-L, 0.0], np.asarray(breaks, dtype=float), [L]]))
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        m = max(1, int(round(nx * (b - a) / (2 * L))))
        w = (b - a) / m
        nodes.append(a + w * (np.arange(m) + 0.5))
        weights.append(np.full(m, w))
    return np.concatenate(nodes), np.concatenate(weights)


def elastic_energy(field: DeformationField, q: QuadratureSettings | None = None) -> float:
    """Midpoint tensor quadrature of dist^2(Du, SO(2)), one packet strip at a time."""
    q = q or QuadratureSettings()
    L = field.spec.L
    parts = []
    for j, (lo, hi) in enumerate(field.layer_bounds()):
        dy = (hi - lo) / q.ny_per_layer
        ys = lo + dy * (np.arange(q.ny_per_layer) + 0.5)
        if field.row_dependent_breaks:
            for y in ys:
                xs, wx = _cells(field.x1_breaks(j, y), L, q.nx)
                dens = dist_so2_squared(field.grad(xs, np.full_like(xs, y)))
                parts.append(np.sum(dens * wx) * dy)
        else:
            xs, wx = _cells(field.x1_breaks(j), L, q.nx)
            X, Y = np.meshgrid(xs, ys)
            dens = dist_so2_squared(field.grad(X, Y))
            parts.append(np.sum(dens * wx[None, :]) * dy)
    return float(np.sum(parts))


def _interface_nodes(field, k, samples):
    L = field.spec.L
    brk = np.concatenate([field.x1_breaks(k - 1), field.x1_breaks(k)])
    edges = np.unique(np.concatenate([[-L], brk, [L]]))
    per = max(8, samples // (edges.size - 1))
    return np.unique(np.concatenate([np.linspace(a, b, per) for a, b in zip(edges[:-1], edges[1:])]))


def jump_length(field: DeformationField, k: int, samples: int = 4096, threshold: float = JUMP_THRESHOLD) -> float:
    """Length of {x1 : |trace gap at interface k| > threshold}.

    Sampled on a grid that contains every breakpoint of the two adjacent
    packets, then each sign change is bisected down to 1e-8 L.
    """
    L = field.spec.L
    xs = _interface_nodes(field, k, samples)

    def is_open(x):
        return np.linalg.norm(field.trace_gap(k, x), axis=-1) > threshold

    on = is_open(xs)
    if not on.any():
        return 0.0
    flips = np.nonzero(on[:-1] != on[1:])[0]
    lo, hi = xs[flips].copy(), xs[flips + 1].copy()
    left_on = on[flips]
    while np.any(hi - lo > 1e-8 * L):
        mid = 0.5 * (lo + hi)
        same = is_open(mid) == left_on
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    cut = 0.5 * (lo + hi)
    # walk the boundary points in order, accumulating open stretches
    pts = np.concatenate([[-L], cut, [L]])
    state = np.concatenate([[on[0]], ~left_on])
    total = math.fsum(float(b - a) for a, b, s in zip(pts[:-1], pts[1:], state) if s)
    return total


def delamination_energy(field: DeformationField, samples_per_interface: int = 4096, threshold: float = JUMP_THRESHOLD):
    """``(gamma * total length, per-interface lengths)``; zero for continuous fields."""
    lengths = [jump_length(field, k, samples_per_interface, threshold) for k in range(1, len(field.interfaces()) + 1)]
    return field.spec.gamma * math.fsum(lengths), lengths


def total_energy(field: DeformationField, q: QuadratureSettings | None = None, samples_per_interface: int = 4096) -> EnergyBreakdown:
    el = elastic_energy(field, q)
    _, lengths = delamination_energy(field, samples_per_interface)
    return EnergyBreakdown.from_parts(el, field.spec.gamma, lengths)


# closed forms ---------------------------------------------------------------


def plate_energy_exact(spec: MaterialSpec, alpha: float) -> float:
    return 4 * alpha**2 * spec.h**3 / (3 * spec.L)


def multilayer_elastic_exact(alpha: float, params: ConstructionParams) -> float:
    """Bending energy of the rounded fold: each packet of thickness h_j carries
    h_j^3 kappa^2 l / 3 on every arc; the arcs have curvatures beta/l_arc
    (centre, length 2 l_arc) and (alpha+beta)/l_arc (two corners)."""
    hj = params.thicknesses
    k = 2 * params.beta**2 + 2 * (alpha + params.beta) ** 2
    return math.fsum(hj**3) * k / (3 * params.l_arc)


def multilayer_jump_lengths_exact(spec: MaterialSpec, alpha: float, params: ConstructionParams) -> list[float]:
    """Interface k opens over |x1| < l_{k-1} + 2 l_arc."""
    z = kinematics(alpha, params.beta).zeta
    b = params.boundaries
    return [2 * (z * (spec.h - b[k - 1]) + 2 * params.l_arc) for k in range(1, params.n)]


def multilayer_energy_exact(spec: MaterialSpec, alpha: float, params: ConstructionParams) -> EnergyBreakdown:
    return EnergyBreakdown.from_parts(
        multilayer_elastic_exact(alpha, params), spec.gamma, multilayer_jump_lengths_exact(spec, alpha, params)
    )


def cpa_elastic_exact(spec: MaterialSpec, alpha: float, beta: float) -> float:
    """The core triangle has area zeta h^2 and carries the constant gradient F*."""
    kin = kinematics(alpha, beta)
    F = np.array([[math.cos(beta), 0.0], [math.sin(beta), kin.d]])
    return float(dist_so2_squared(F)) * kin.zeta * spec.h**2


def construction_bound(spec: MaterialSpec, alpha: float, params: ConstructionParams) -> float:
    """gamma n (zeta h + l_arc) + beta^2 h^3 / (l_arc n^2), constant set to one."""
    from .construct import check_params

    check_params(spec, alpha, params)
    z = kinematics(alpha, params.beta).zeta
    n, la = params.n, params.l_arc
    return spec.gamma * n * (z * spec.h + la) + params.beta**2 * spec.h**3 / (la * n**2)


def fit_constant(measured, bound) -> float:
    """Smallest C with measured <= C * bound across a sweep."""
    m = np.asarray(measured, dtype=float)
    b = np.asarray(bound, dtype=float)
    return float(np.max(m / b))
