import math

import numpy as np
import pytest

from triq import (
    NoiseModel,
    RateSet,
    SpinSystem,
    check_density,
    decay_times,
    evolve_markovian,
    ghz_analytic,
    prepare_ghz,
    prepare_w,
    prepare_wwbar,
    tripartite_negativity,
    w_analytic,
    wwbar_analytic,
)
from conftest import T1, T2

FAMILIES = {"ghz": ghz_analytic, "w": w_analytic, "wwbar": wwbar_analytic}
PREPARED = {"ghz": prepare_ghz, "w": prepare_w, "wwbar": prepare_wwbar}


def test_rateset_validation():
    with pytest.raises(ValueError, match="three entries"):
        RateSet(kx=(1.0, 1.0), kz=(1.0, 1.0, 1.0))
    with pytest.raises(ValueError, match="non-negative"):
        RateSet(kx=(1.0, -0.1, 1.0), kz=(1.0, 1.0, 1.0))
    r = RateSet.from_spins(SpinSystem())
    assert r.kx == tuple(1.0 / t for t in T1)
    assert r.kz == tuple(1.0 / t for t in T2)


def test_families_start_at_prepared_states(rates):
    for name, family in FAMILIES.items():
        assert np.allclose(family(0.0, rates), PREPARED[name](), atol=1e-15)


def test_families_reject_negative_time(rates):
    for family in FAMILIES.values():
        with pytest.raises(ValueError, match="non-negative"):
            family(-0.01, rates)


def test_trace_and_hermiticity_random_rates(rng):
    for _ in range(20):
        r = RateSet(kx=tuple(rng.uniform(0.05, 3.0, 3)),
                    kz=tuple(rng.uniform(0.05, 3.0, 3)))
        t = float(rng.uniform(0.0, 1.5))
        for family in FAMILIES.values():
            rho = family(t, r)
            assert abs(np.trace(rho) - 1.0) < 1e-14
            assert np.allclose(rho, rho.conj().T, atol=1e-15)


def test_physicality_on_millisecond_grid(rates):
    for family in FAMILIES.values():
        for t in np.arange(0.0, 1.0005, 0.001):
            check_density(family(float(t), rates))


def test_sector_structure(rates):
    # the damping model never populates sectors absent from the start:
    # GHZ keeps diagonal + antidiagonal, W and WWbar stay inside the
    # sectors their initial coherences occupy
    masks = {
        "ghz": {0, 7},
        "w": {0, 3, 5, 6},
        "wwbar": {0, 1, 2, 3, 4, 5, 6, 7},
    }
    for name, family in FAMILIES.items():
        rho = family(0.23, rates)
        for a in range(8):
            for b in range(8):
                if (a ^ b) not in masks[name]:
                    assert rho[a, b] == 0.0, (name, a, b)


def test_oracle_matches_integrator_random_rates(spins, rng):
    for _ in range(5):
        r = RateSet(kx=tuple(rng.uniform(0.1, 2.5, 3)),
                    kz=tuple(rng.uniform(0.1, 2.5, 3)))
        noise = NoiseModel(kappa_x=r.kx, kappa_z=r.kz)
        for name, family in FAMILIES.items():
            curve = evolve_markovian(PREPARED[name](), spins, noise, 0.4,
                                     dt=1e-4, sample_every=400)
            worst = max(
                np.max(np.abs(family(float(t), r) - s))
                for t, s in zip(curve.times, curve.states)
            )
            assert worst < 1e-9, (name, worst)


def test_corrected_offdiagonal_placements(rates):
    # the three placements that differ from the published tabulation
    # (see CONFORMANCE.md), written out with explicit exponentials
    t = 0.3
    z1, z2, z3 = rates.kz
    g1, g2, g3 = (math.exp(-k * t) for k in rates.kx)
    w = w_analytic(t, rates)
    assert w[0, 6] == pytest.approx(
        math.exp(-(z1 + z2) * t) * (1 - g1 * g2) * (1 + g3) / 12.0, rel=1e-12)
    ww = wwbar_analytic(t, rates)
    assert ww[4, 5] == pytest.approx(
        math.exp(-z3 * t) * (1 + g1 * g2) / 12.0, rel=1e-12)
    assert ww[4, 7] == pytest.approx(
        math.exp(-(z2 + z3) * t) * (1 - g2 * g3) / 12.0, rel=1e-12)


def test_ghz_sign_flag(rates):
    minus = ghz_analytic(0.2, rates)
    plus = ghz_analytic(0.2, rates, sign=+1)
    assert minus[0, 7].real < 0 < plus[0, 7].real
    assert np.array_equal(np.diag(minus), np.diag(plus))
    assert tripartite_negativity(minus) == pytest.approx(
        tripartite_negativity(plus), abs=1e-14)
    with pytest.raises(ValueError, match="sign"):
        ghz_analytic(0.2, rates, sign=2)


def test_long_time_limit_is_maximally_mixed(rates):
    for family in FAMILIES.values():
        assert np.allclose(family(200.0, rates), np.eye(8) / 8.0, atol=1e-12)


def test_tripartite_negativity_monotone(rates):
    for family in FAMILIES.values():
        grid = [tripartite_negativity(family(t, rates))
                for t in np.arange(0.0, 0.7, 0.01)]
        assert all(b <= a + 1e-12 for a, b in zip(grid, grid[1:]))


def test_decay_times_frozen_and_inside_quoted_windows(rates):
    times = decay_times(rates)
    assert times["ghz"] == pytest.approx(0.5014, abs=2e-3)
    assert times["w"] == pytest.approx(0.5948, abs=2e-3)
    assert times["wwbar"] == pytest.approx(0.4723, abs=2e-3)
    assert 0.50 <= times["ghz"] <= 0.56
    assert 0.59 <= times["w"] <= 0.65
    assert 0.47 <= times["wwbar"] <= 0.53
    # ordering: the WWbar state dies first, the W state last
    assert times["wwbar"] < times["ghz"] < times["w"]


def test_decay_times_resolution(rates):
    coarse = decay_times(rates)
    fine = decay_times(rates, resolution=1e-4)
    for name in FAMILIES:
        assert abs(coarse[name] - fine[name]) < 1.5e-3


def test_decay_times_raises_when_state_never_dies():
    quiet = RateSet(kx=(0.0, 0.0, 0.0), kz=(0.0, 0.0, 0.0))
    with pytest.raises(ValueError, match="still positive"):
        decay_times(quiet, t_max=0.5)
