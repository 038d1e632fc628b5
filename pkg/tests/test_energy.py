import math

import numpy as np
import pytest

from _gen import random_admissible
from plyfold import ConstructionParams, MaterialSpec, build_cpa, build_multilayer, build_plate, choose_boundaries
from plyfold.energy import (
    QuadratureSettings,
    construction_bound,
    cpa_elastic_exact,
    delamination_energy,
    elastic_energy,
    fit_constant,
    jump_length,
    multilayer_elastic_exact,
    multilayer_energy_exact,
    multilayer_jump_lengths_exact,
    plate_energy_exact,
    total_energy,
)
from plyfold.core import DomainError, dist_so2_squared
from plyfold.angles import beta_eq


def test_plate_hand_value():
    spec = MaterialSpec(1.0, 10.0, 8, 1e-6)
    e = elastic_energy(build_plate(spec, 0.1), QuadratureSettings(2048, 64))
    assert plate_energy_exact(spec, 0.1) == pytest.approx(4e-3 / 3, rel=1e-15)
    assert e == pytest.approx(1.3333e-3, rel=5e-3)


def test_plate_random_oracle(rng):
    for _ in range(5):
        h = rng.uniform(0.2, 2)
        spec = MaterialSpec(h, h * rng.uniform(4, 100), 4, 1e-6)
        a = rng.uniform(0.01, math.pi / 2)
        e = elastic_energy(build_plate(spec, a), QuadratureSettings(2048, 64))
        assert e == pytest.approx(plate_energy_exact(spec, a), rel=5e-3)


def test_quadrature_settings_validation():
    with pytest.raises(DomainError):
        QuadratureSettings(8, 16)
    with pytest.raises(DomainError):
        QuadratureSettings(64, 2)


def test_zero_angle_gives_zero(fig4):
    assert elastic_energy(build_plate(fig4, 0.0)) == 0.0


def test_rigid_arms_zero_density(fig4):
    # the arms |x1| >= L/2 are rotated rigidly
    f = build_plate(fig4, 0.3)
    xs = np.linspace(fig4.L / 2 + 0.01, fig4.L, 50)
    g = f.grad(*np.meshgrid(xs, np.linspace(0, fig4.h, 7)))
    assert np.max(dist_so2_squared(g)) < 1e-14


def test_multilayer_oracle(rng):
    for _ in range(6):
        spec, a, p = random_admissible(rng)
        f = build_multilayer(spec, a, p)
        e = elastic_energy(f, QuadratureSettings(1024, 16))
        assert e == pytest.approx(multilayer_elastic_exact(a, p), rel=1e-2)


def test_multilayer_jump_lengths(rng):
    for _ in range(6):
        spec, a, p = random_admissible(rng, N=int(rng.integers(2, 10)))
        if p.n < 2:
            continue
        f = build_multilayer(spec, a, p)
        _, lengths = delamination_energy(f)
        exact = multilayer_jump_lengths_exact(spec, a, p)
        assert len(lengths) == p.n - 1
        for m, x in zip(lengths, exact):
            assert m <= x + 1e-6 * spec.L
            assert m == pytest.approx(x, rel=1e-6)


def test_total_combines_oracles(rng):
    spec, a, p = random_admissible(rng, N=6)
    f = build_multilayer(spec, a, p)
    bd = total_energy(f, QuadratureSettings(1024, 16))
    ref = multilayer_energy_exact(spec, a, p)
    assert bd.total == pytest.approx(ref.total, rel=1e-2)
    assert bd.total == bd.elastic + bd.delamination


def test_plate_has_no_delamination(fig4):
    bd = total_energy(build_plate(fig4, 0.2))
    assert bd.delamination == 0.0 and len(bd.jump_lengths) == 0


def test_single_packet_no_interfaces():
    spec = MaterialSpec(1.0, 40.0, 8, 1e-6)
    p = ConstructionParams(0.4, 1, 2.0, choose_boundaries(spec, 1))
    f = build_multilayer(spec, 0.2, p)
    assert delamination_energy(f) == (0.0, [])


def test_cpa_oracle():
    spec = MaterialSpec(1.0, 20.0, 4, 1e-6)
    for a in (0.05, 0.2, 0.5):
        b = 0.5 * (a + beta_eq(a))
        e = elastic_energy(build_cpa(spec, a, b), QuadratureSettings(2048, 64))
        assert e == pytest.approx(cpa_elastic_exact(spec, a, b), rel=1e-2)


def _halvings(field):
    vals = [elastic_energy(field, QuadratureSettings(n, max(4, n // 16))) for n in (64, 128, 256, 512)]
    return vals, np.abs(np.diff(vals))


def test_quadrature_convergence_order(rng):
    spec = MaterialSpec(1.0, 20.0, 4, 1e-6)
    spec2, a, p = random_admissible(rng, N=4)
    for f in (build_plate(spec, 0.3), build_cpa(spec, 0.2, 0.5 * (0.2 + beta_eq(0.2))), build_multilayer(spec2, a, p)):
        vals, d = _halvings(f)
        for prev, nxt in zip(d[:-1], d[1:]):
            # second order: each halving cuts the change by about 4
            assert nxt <= prev / 4 * 1.5 + 1e-15 or nxt < 1e-12 * abs(vals[-1])


def test_jump_threshold_monotone(rng):
    spec, a, p = random_admissible(rng, N=5)
    if p.n < 2:
        p = ConstructionParams(p.beta, 2, max(p.l_arc, 2 * p.beta * spec.h / 2), choose_boundaries(spec, 2))
    f = build_multilayer(spec, a, p)
    lengths = [jump_length(f, 1, threshold=t) for t in (1e-12, 1e-10, 1e-6, 1e-3, 1e-1)]
    assert all(x >= y - 1e-12 for x, y in zip(lengths, lengths[1:]))


def test_construction_bound_n1_substitution():
    spec = MaterialSpec(1.0, 40.0, 8, 1e-3)
    a, b, la = 0.2, 0.4, 2.0
    p = ConstructionParams(b, 1, la, choose_boundaries(spec, 1))
    z = math.sin(a) / (math.cos(a) - math.cos(b))
    assert construction_bound(spec, a, p) == pytest.approx(spec.gamma * (z * spec.h + la) + b**2 * spec.h**3 / la, rel=1e-14)


def test_construction_bound_term_monotonicity():
    spec = MaterialSpec(1.0, 40.0, 8, 1e-3)
    a, b, n = 0.2, 0.4, 4
    las = np.linspace(2 * b / n, spec.L / 8, 20)
    vals = []
    for la in las:
        p = ConstructionParams(b, n, la, choose_boundaries(spec, n))
        tot = construction_bound(spec, a, p)
        elastic = b**2 / (la * n**2)
        vals.append((tot - elastic, elastic))
    first, second = np.array(vals).T
    assert np.all(np.diff(first) > 0) and np.all(np.diff(second) < 0)


def test_fitted_constant_over_sweep(rng):
    measured, bounds = [], []
    for _ in range(100):
        spec, a, p = random_admissible(rng)
        bd = total_energy(build_multilayer(spec, a, p), QuadratureSettings(256, 4), samples_per_interface=512)
        measured.append(bd.total)
        bounds.append(construction_bound(spec, a, p))
    C = fit_constant(measured, bounds)
    assert np.all(np.array(measured) <= C * np.array(bounds) * (1 + 1e-12))
    # packets are at most 2h/n thick, so the ratio cannot blow up
    assert 0 < C < 100
