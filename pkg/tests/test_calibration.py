"""Calibration loop against simulated plants with known ground truth."""
import numpy as np
import pytest

from voxelskin.errors import ValidationError
from voxelskin import calibration as cal
from voxelskin.calibration import (CALIBRATION_PLANT_NOMINAL,
                                   CalibrationStore, OpenCircuitFault,
                                   PlantModel, calibrate_all, duty_sweep,
                                   fit_inverse_map, make_plants,
                                   measure_resistance, step_identify)
from voxelskin.thermal import HeaterParams


def nominal_plant(address=(0, 0), noise=0.0, seed=1):
    return PlantModel(address=address, heater=HeaterParams(),
                      thermal=CALIBRATION_PLANT_NOMINAL, sensor_noise_c=noise,
                      rng=np.random.default_rng(seed))


def test_measure_resistance_median():
    p = nominal_plant()
    r_tot, r_h = measure_resistance(p)
    assert r_tot == pytest.approx(30.0, rel=1e-9)
    assert r_h == pytest.approx(27.0, rel=1e-9)


def test_measure_resistance_open_circuit():
    p = nominal_plant()
    p.open_circuit = True
    with pytest.raises(OpenCircuitFault):
        measure_resistance(p)


def test_duty_sweep_steady_states():
    # steady state T = T_amb + eta d P(1) / G_th = 25 + d * 21.6 for the
    # nominal rig plant (eta=1, G=0.2, P(1)=4.32); dwell termination leaves a
    # small settle bias below the asymptote
    p = nominal_plant()
    samples = duty_sweep(p, D=[0.0, 0.5])
    assert samples[0].T_mean == pytest.approx(25.0, abs=0.2)
    assert samples[1].T_mean == pytest.approx(35.8, abs=0.6)
    assert all(s.settled for s in samples)


def test_duty_sweep_unsettled_flag():
    p = nominal_plant()
    samples = duty_sweep(p, D=[0.3], epsilon=1e-6, t_max=1.0)
    assert not samples[0].settled


def test_duty_sweep_rejects_unsorted_grid():
    with pytest.raises(ValidationError):
        duty_sweep(nominal_plant(), D=[0.5, 0.1])


def test_inverse_map_inverts_linear_plant():
    p = nominal_plant()
    samples = duty_sweep(p)
    inv = fit_inverse_map(samples)
    # T(d) = 25 + 21.6 d  =>  d*(35.8) ~ 0.5
    assert inv(35.8) == pytest.approx(0.5, abs=0.02)
    lo, hi = inv.t_range
    assert inv(lo) == pytest.approx(inv.d_range[0], abs=1e-6)
    with pytest.raises(ValidationError, match="outside"):
        inv(60.0)   # ceiling for the capped duty grid is ~37.9 degC


def test_inverse_map_consistency_and_monotonicity():
    p = nominal_plant(noise=0.5, seed=7)
    inv = fit_inverse_map(duty_sweep(p))
    lo, hi = inv.t_range
    targets = np.linspace(lo, hi, 17)
    last_d = -1.0
    for t in targets:
        d = inv(t)
        assert d >= last_d - 1e-9
        last_d = d
        assert abs(inv.temperature_of(d) - t) <= 0.1
    assert all(np.diff(inv.temps) >= -1e-12)


def test_pava_restores_monotonicity():
    noisy = np.array([25.0, 26.2, 26.0, 27.5, 27.4, 29.0])
    out = cal._pava_nondecreasing(noisy)
    assert np.all(np.diff(out) >= -1e-12)
    assert out.sum() == pytest.approx(noisy.sum())  # PAVA preserves the mean


def test_step_identify_noiseless_recovers_tau():
    tau = step_identify(nominal_plant())
    assert tau == pytest.approx(45.0, rel=0.01)


def test_step_identify_degenerate_step():
    with pytest.raises(ValidationError, match="d1 > d0"):
        step_identify(nominal_plant(), d0=0.3, d1=0.3)


def test_step_identify_noise_monte_carlo():
    errs = []
    for seed in range(20):
        tau = step_identify(nominal_plant(noise=0.5, seed=seed))
        errs.append(abs(tau - 45.0) / 45.0)
    assert max(errs) < 0.10


def test_calibrate_all_isolation_of_faults():
    plants = make_plants(10, seed=5, open_circuit=[3])
    store = calibrate_all(plants)
    assert len(store.records) == 9
    assert store.faults == [(0, 3)]


def test_make_plants_perturbation_bounds():
    plants = make_plants(50, seed=11, perturb_fraction=0.2)
    for p in plants:
        assert abs(p.r_h - 27.0) / 27.0 <= 0.2 + 1e-9
        assert abs(p.thermal.C_th - 9.0) / 9.0 <= 0.2 + 1e-9


def test_calibration_determinism():
    a = calibrate_all(make_plants(6, seed=7)).to_json()
    b = calibrate_all(make_plants(6, seed=7)).to_json()
    assert a == b
    c = calibrate_all(make_plants(6, seed=8)).to_json()
    assert a != c


def test_store_json_round_trip():
    store = calibrate_all(make_plants(4, seed=2))
    back = CalibrationStore.from_json(store.to_json())
    assert back.to_json() == store.to_json()
    rec = next(iter(back.records.values()))
    assert rec.duty_for(rec.inverse_map.t_range[0] + 0.5) > 0


def test_noiseless_population_recovery():
    plants = make_plants(20, seed=3, sensor_noise_c=0.0)
    for p in plants:
        _, r_h = measure_resistance(p)
        assert abs(r_h - p.r_h) / p.r_h <= 0.03


def test_closed_loop_uniformity():
    plants = make_plants(30, seed=9)
    store = calibrate_all(plants)
    temps = []
    for p in make_plants(30, seed=9):
        d = store.records[p.address].duty_for(34.0)
        temps.append(p.steady_temp(d))
    assert max(temps) - min(temps) <= 2.0
