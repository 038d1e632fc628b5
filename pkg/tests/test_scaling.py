import json
import math

import numpy as np
import pytest

from plyfold import MaterialSpec
from plyfold.core import DomainError, RegimeError
from plyfold.scaling import (
    RegimeLabel,
    analytic_crossing,
    analytic_energy,
    log_slope,
    lower_bound,
    moment_curve,
    optimal_delam_length,
    optimize_construction,
    optimized_energy,
    ordered_case,
    regime_of,
    sorted_regimes,
    sweep_grid,
    thresholds,
    upper_bound,
    verify_scaling,
)

E, SF, LF, SAT, TD = (
    RegimeLabel.ELASTIC,
    RegimeLabel.SHARP_FOLD_PARTIAL,
    RegimeLabel.LOCALIZED_FULL,
    RegimeLabel.SMALL_ANGLE_TOTAL,
    RegimeLabel.TOTAL_DELAM,
)
LF_SPEC = MaterialSpec(1.0, 1e5, 64, 1e-13)


def table_label(spec, a):
    """The explicit piecewise tables, written out case by case."""
    h, L, N, g = spec.h, spec.L, spec.N, spec.gamma
    a3 = g**0.5 * L * N**1.5 / h**1.5
    if g * L**4 < h**5 * N**5:
        if a < g**0.4 * L**0.6 / h:
            return E
        if a < g**0.25 * N**0.75 / h**0.25:
            return SF
        return LF if a < a3 else TD
    if a < g**0.5 * L * N**-0.5 / h**1.5:
        return E
    return LF if a < a3 else TD


def formula(label, spec, a):
    h, L, N, g = spec.h, spec.L, spec.N, spec.gamma
    return {
        E: a**2 * h**3 / L,
        SF: a ** (1 / 3) * g ** (2 / 3) * h ** (4 / 3),
        LF: a * g**0.5 * h**1.5 / N**0.5,
        SAT: a * h**4 / (L**2 * N**2),
        TD: a**2 * h**3 / (L * N**2),
    }[label]


def random_spec(rng):
    h = rng.uniform(0.2, 3)
    return MaterialSpec(h, h * 10 ** rng.uniform(0.7, 4), int(rng.integers(1, 200)), 10 ** rng.uniform(-14, 0))


def test_fig4_elastic_value(fig4):
    v, lab = upper_bound(fig4, 0.001)
    assert lab == E and v == pytest.approx(1e-7, rel=1e-12)


def test_fig4_thresholds(fig4):
    t = thresholds(fig4)
    assert t["alpha1"] == pytest.approx(1.585e-2, rel=1e-3)
    assert t["alpha2"] == pytest.approx(1.504e-1, rel=1e-3)
    assert t["alpha3"] == pytest.approx(2.263e-1, rel=1e-3)
    assert ordered_case(fig4)


def test_fig4_sorted_regimes(fig4):
    iv = sorted_regimes(fig4)
    assert [i.label for i in iv] == [E, SF, LF, TD]
    t = thresholds(fig4)
    for got, want in zip([i.hi for i in iv[:-1]], (t["alpha1"], t["alpha2"], t["alpha3"])):
        assert got == pytest.approx(want, rel=1e-12)
    assert iv[0].lo == 0.0 and iv[-1].hi == math.pi / 2


def test_three_regime_case():
    # gamma L^4 >= h^5 N^5: no alpha^(1/3) regime
    spec = MaterialSpec(1.0, 100.0, 2, 1e-6)
    assert spec.gamma * spec.L**4 >= spec.h**5 * spec.N**5
    labels = [i.label for i in sorted_regimes(spec)]
    assert SF not in labels and labels == [E, LF, TD][: len(labels)]


def test_small_h_two_regimes():
    spec = MaterialSpec(1.0, 10.0, 8, 0.01)
    assert spec.h <= spec.gamma * spec.N**3
    assert {i.label for i in sorted_regimes(spec)} == {E, SF}


def test_sorted_regimes_match_tables(rng):
    checked = 0
    while checked < 300:
        spec = random_spec(rng)
        h, L, N, g = spec.h, spec.L, spec.N, spec.gamma
        # the tables assume h > gamma N^3 and h^5 <= gamma L^4 N^3
        if spec.h > spec.L / 4 or h <= g * N**3 or h**5 > g * L**4 * N**3:
            continue
        for a in np.exp(rng.uniform(math.log(1e-8), math.log(math.pi / 2), 5)):
            assert regime_of(spec, a) == table_label(spec, a)
        checked += 1


def test_branch_consistency(rng):
    for _ in range(1000):
        spec = random_spec(rng)
        if spec.h > spec.L / 4:
            continue
        a = float(np.exp(rng.uniform(math.log(1e-6), math.log(math.pi / 2))))
        v, lab = upper_bound(spec, a)
        h, N, g = spec.h, spec.N, spec.gamma
        delam = [SF] if h <= g * N**3 else [SF, LF, SAT, TD]
        ref = min(formula(E, spec, a), max(formula(k, spec, a) for k in delam))
        assert v == pytest.approx(ref, rel=1e-12)
        assert v == pytest.approx(formula(lab, spec, a), rel=1e-12)
        assert regime_of(spec, a) == lab or any(iv.lo == pytest.approx(a, rel=1e-9) for iv in sorted_regimes(spec))


def test_upper_bound_domain():
    with pytest.raises(DomainError):
        upper_bound(MaterialSpec(1.0, 3.0, 2, 1e-3), 0.1)
    with pytest.raises(DomainError):
        upper_bound(MaterialSpec(1.0, 10.0, 2, 1e-3), 2.0)


def test_lower_bound_example(fig4):
    assert lower_bound(fig4, 0.001) == pytest.approx(1e-7, rel=1e-12)
    assert lower_bound(fig4, 1e-12) < 1e-20


def test_lower_below_upper(rng):
    for _ in range(1000):
        spec = random_spec(rng)
        if spec.h > spec.L / 4:
            continue
        a = float(np.exp(rng.uniform(math.log(1e-6), math.log(math.pi / 2))))
        # the floor is a sum of two branches the ceiling takes the max of
        assert lower_bound(spec, a) <= 2 * upper_bound(spec, a)[0] * (1 + 1e-12)


def test_lower_bound_n_assumed(fig4):
    assert lower_bound(fig4, 0.3, n_assumed=2) >= lower_bound(fig4, 0.3)
    with pytest.raises(DomainError):
        lower_bound(fig4, 0.3, n_assumed=0)


def test_optimal_delam_length(fig4):
    t = thresholds(fig4)
    assert optimal_delam_length(fig4, 0.5 * t["alpha1"]) == 0.0
    assert optimal_delam_length(fig4, 1.0) == fig4.L
    assert optimal_delam_length(fig4, 0.2) == pytest.approx(0.2 * 1e3 * 8**-1.5, rel=1e-12)
    assert optimal_delam_length(fig4, 0.2) == pytest.approx(8.84, rel=1e-3)
    with pytest.raises(RegimeError):
        optimal_delam_length(MaterialSpec(1.0, 10.0, 8, 0.01), 0.2)


def test_analytic_crossing(fig4):
    a = analytic_crossing(fig4)
    v = analytic_energy(fig4, a)
    assert v == pytest.approx(a**2 * fig4.h**3 / fig4.L, rel=1e-10)
    assert thresholds(fig4)["alpha1"] < a < thresholds(fig4)["alpha2"]


def test_optimizer_plate_below_onset(fig4):
    r = optimize_construction(fig4, 0.001, measure=False)
    assert r.kind == "Plate" and r.regime == E and r.delaminated_length == 0.0


def test_optimizer_localized_full_arc_length():
    h, N, g = LF_SPEC.h, LF_SPEC.N, LF_SPEC.gamma
    for a in sweep_grid(0.22, 1.0, 5):
        r = optimize_construction(LF_SPEC, a, measure=False)
        assert r.regime == LF
        assert r.params.n == N
        ref = 2 * a * g**-0.5 * h**1.5 * N**-1.5
        assert ref / 3 <= r.params.l_arc <= 3 * ref


def test_optimizer_never_worse_than_seed(rng):
    seen = 0
    for _ in range(40):
        spec = MaterialSpec(1.0, float(10 ** rng.uniform(1, 4)), int(rng.integers(2, 64)), float(10 ** rng.uniform(-12, -4)))
        a = float(rng.uniform(0.01, math.pi / 4))
        r = optimize_construction(spec, a, measure=False)
        if r.seed_energy is not None:
            seen += 1
            assert r.predicted.total <= r.seed_energy * (1 + 1e-12)
    assert seen > 5


def test_optimizer_measured_matches_prediction():
    r = optimize_construction(LF_SPEC, 0.3)
    assert r.energy == pytest.approx(r.predicted.total, rel=2e-2)


def test_optimizer_two_fold():
    spec = MaterialSpec(1.0, 1000.0, 8, 1e-13)
    r = optimize_construction(spec, 1.2, measure=False)
    assert r.kind == "TwoFold" and r.multiplicity == 2


def test_moment_single_jump_at_crossing(fig4):
    mc = moment_curve(fig4, np.logspace(-3, math.log10(math.pi / 2), 400))
    jumps = mc.discontinuities()
    assert len(jumps) == 1
    i = jumps[0]
    assert mc.alpha[i] < mc.crossing < mc.alpha[i + 1]


def test_moment_elastic_branch(fig4):
    grid = np.linspace(1e-3, 1e-2, 20)
    mc = moment_curve(fig4, grid)
    assert np.allclose(mc.moment, 2 * grid * fig4.h**3 / fig4.L, rtol=1e-6)


def test_moment_localized_full_nearly_constant():
    grid = sweep_grid(0.22, 1.0, 12)
    mc = moment_curve(LF_SPEC, grid)
    assert all(l == LF for l in mc.regime)
    assert mc.moment.max() / mc.moment.min() < 1.05


def test_moment_grid_validation(fig4):
    with pytest.raises(DomainError):
        moment_curve(fig4, [0.1])
    with pytest.raises(DomainError):
        moment_curve(fig4, [0.2, 0.1])


@pytest.mark.parametrize("mode", ["analytic", "measured"])
def test_energy_monotone_in_N_and_gamma(mode):
    grid = [0.05, 0.2, 0.5]
    e = [moment_curve(MaterialSpec(1.0, 100.0, n, 1e-8), grid, mode).energy for n in (8, 16, 32)]
    assert np.all(e[0] >= e[1] * (1 - 1e-12)) and np.all(e[1] >= e[2] * (1 - 1e-12))
    e = [moment_curve(MaterialSpec(1.0, 100.0, 16, g), grid, mode).energy for g in (1e-9, 1e-8, 1e-7)]
    assert np.all(e[0] <= e[1] * (1 + 1e-12)) and np.all(e[1] <= e[2] * (1 + 1e-12))


def test_measured_and_analytic_slopes_agree():
    grid = sweep_grid(0.22, 1.0, 8)
    ana = [analytic_energy(LF_SPEC, a) for a in grid]
    mea = [optimized_energy(LF_SPEC, a) for a in grid]
    assert abs(log_slope(grid, ana)[0] - log_slope(grid, mea)[0]) < 0.1


def test_verify_scaling_flags_regime_change(fig4):
    rep = verify_scaling(fig4, None, "alpha", np.logspace(-3, -0.1, 8), "elastic")
    assert not rep.regime_ok and not rep.passed


def test_verify_scaling_grid_checks(fig4):
    with pytest.raises(DomainError):
        verify_scaling(fig4, None, "alpha", [0.1], "elastic")
    with pytest.raises(DomainError):
        verify_scaling(fig4, None, "alpha", [0.2, 0.1], "elastic")


def test_scaling_report_serialises(fig4):
    rep = verify_scaling(fig4, None, "alpha", sweep_grid(1.1e-3, 1.0, 8), "elastic")
    assert rep.passed
    d = json.loads(rep.to_json())
    assert d["slope"] == pytest.approx(2.0, abs=0.05)
    lines = rep.to_csv("note").splitlines()
    assert lines[0].startswith("# note") and len(lines) == 2 + 8


def test_sweep_grid():
    g = sweep_grid(64, 1.0, 8, integer=True)
    assert g.dtype.kind == "i" and np.all(np.diff(g) > 0)
    assert sweep_grid(1.0, 2.0, 3) == pytest.approx([0.1, 1.0, 10.0])
    with pytest.raises(DomainError):
        sweep_grid(1.0, 1.0, 1)
