import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plyfold.core import (
    DomainError,
    EnergyBreakdown,
    MaterialSpec,
    dist_so2_squared,
    dist_so2_squared_svd,
    perp,
    rotation,
)


def brute_dist2(F, m=100_000):
    th = np.linspace(0, 2 * np.pi, m, endpoint=False)
    c, s = np.cos(th), np.sin(th)
    return np.min((F[0, 0] - c) ** 2 + (F[0, 1] + s) ** 2 + (F[1, 0] - s) ** 2 + (F[1, 1] - c) ** 2)


def test_rotation_examples():
    assert np.array_equal(rotation(0.0), np.eye(2))
    assert np.allclose(rotation(math.pi / 2), [[0, -1], [1, 0]], atol=1e-16)
    assert np.allclose(rotation(0.3) @ rotation(0.4), rotation(0.7), atol=1e-15)
    assert np.linalg.det(rotation(1.234)) == pytest.approx(1.0, abs=1e-15)


def test_rotation_vectorises():
    R = rotation(np.array([0.0, 1.0, 2.0]))
    assert R.shape == (3, 2, 2)
    assert np.allclose(R[2], rotation(2.0))


def test_perp_is_quarter_turn():
    v = np.array([[0.3, -1.2], [2.0, 0.5]])
    assert np.allclose(perp(v), v @ rotation(math.pi / 2).T)


def test_dist_examples():
    assert dist_so2_squared(rotation(0.7)) == pytest.approx(0.0, abs=1e-15)
    assert dist_so2_squared(np.diag([0.75, 1.0])) == pytest.approx(0.0625, rel=1e-14)
    F = np.diag([2.0, 0.5])
    assert dist_so2_squared(F) == pytest.approx(1.25, rel=1e-14)
    assert brute_dist2(F) == pytest.approx(1.25, abs=1e-6)


def test_dist_reflection_branch():
    # det < 0: nearest rotation cannot undo the flip
    F = np.diag([1.0, -1.0])
    assert dist_so2_squared(F) == pytest.approx(4.0, rel=1e-14)
    assert dist_so2_squared_svd(F) == pytest.approx(4.0, rel=1e-14)
    assert brute_dist2(F) == pytest.approx(4.0, abs=1e-9)


def test_dist_matches_brute_force(rng):
    for F in rng.uniform(-2, 2, size=(40, 2, 2)):
        assert abs(dist_so2_squared(F) - brute_dist2(F)) < 1e-6


def test_dist_routes_agree(rng):
    F = rng.uniform(-2, 2, size=(500, 2, 2))
    assert np.allclose(dist_so2_squared(F), dist_so2_squared_svd(F), rtol=1e-10, atol=1e-12)


def test_dist_zero_only_on_rotations(rng):
    for phi in rng.uniform(0, 2 * np.pi, 20):
        assert dist_so2_squared(rotation(phi)) < 1e-24
        bumped = rotation(phi) + 1e-6 * np.array([[1.0, 0.0], [0.0, 0.0]])
        assert dist_so2_squared(bumped) > 1e-14


def test_nearly_rigid_keeps_relative_precision():
    t = 1e-9
    assert dist_so2_squared(np.diag([1 - t, 1.0])) == pytest.approx(t * t, rel=1e-6)


mats = st.lists(st.floats(-3, 3, allow_nan=False), min_size=4, max_size=4).map(lambda v: np.array(v).reshape(2, 2))


@settings(max_examples=100, deadline=None)
@given(mats, st.floats(0, 2 * math.pi))
def test_dist_rotation_invariance(F, phi):
    R = rotation(phi)
    d = dist_so2_squared(F)
    assert abs(dist_so2_squared(R @ F) - d) <= 1e-12 * max(1, d)
    assert abs(dist_so2_squared(F @ R) - d) <= 1e-12 * max(1, d)


def test_material_spec_validation():
    MaterialSpec(1, 4, 1, 1e-3)
    with pytest.raises(DomainError):
        MaterialSpec(1.1, 4, 1, 1e-3)
    with pytest.raises(DomainError):
        MaterialSpec(-1, 10, 2, 1e-3)
    with pytest.raises(DomainError):
        MaterialSpec(1, 10, 0, 1e-3)
    with pytest.raises(DomainError):
        MaterialSpec(1, 10, 2.5, 1e-3)
    with pytest.raises(DomainError):
        MaterialSpec(1, 10, 2, 0.0)
    s = MaterialSpec(1, 10, 8, 1e-6)
    assert MaterialSpec.from_dict(s.to_dict()) == s


def test_energy_breakdown_identity():
    b = EnergyBreakdown.from_parts(0.25, 1e-3, [1.5, 2.0, 0.5])
    assert b.delamination == 1e-3 * 4.0
    assert b.total == b.elastic + b.delamination
    twice = b.scaled(2)
    assert twice.total == 2 * b.total and len(twice.jump_lengths) == 6
    assert b.to_dict()["jump_lengths"] == [1.5, 2.0, 0.5]
