"""Per-voxel thermal calibration against simulated plants.

Each plant is a first-order lump below the melt plateau, so the simulated
response is stepped with the exact exponential solution and sampled with
sensor noise; calibration never drives a plant near T_m (the duty grid is
capped for exactly that reason).  The procedure per voxel: measure R_tot from
low-duty (V, I) samples, sweep a duty grid waiting for the measured slope to
settle, fit an increasing duty-to-temperature map (isotonic + piecewise
linear), invert it by bisection, and identify tau_th from a small duty step.

Plant nominals here (eta = 1, G_th = 0.2 W/K, C_th = 9 J/K) describe the
calibration rig's sub-melt regime; they are distinct from the melt-capable
thermal defaults.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.optimize import curve_fit

from .errors import ValidationError
from .state import Address
from .thermal import HeaterParams, ThermalParams, heater_resistance, joule_power


class OpenCircuitFault(RuntimeError):
    """The voxel draws no current; it is excluded from the calibration batch."""


CALIBRATION_PLANT_NOMINAL = ThermalParams(
    C_th=9.0, G_th=0.2, Q_melt=400.0, T_m=62.0, eta=1.0, T_amb=25.0
)


@dataclass(frozen=True)
class CalibrationSettings:
    duty_grid: tuple[float, ...] = tuple(round(0.05 * i, 2) for i in range(1, 13))
    epsilon: float = 0.02          # settle threshold [degC/s]
    t_max: float = 600.0           # max dwell per duty [s]
    f_s: float = 10.0              # sample rate [Hz]
    tail_fraction: float = 0.1     # of the dwell, averaged for T_bar
    # a 5 s window cannot certify a 0.02 degC/s slope under 0.5 degC sensor
    # noise (slope sigma ~0.05); 20 s brings it to ~0.006
    slope_window_s: float = 20.0
    slope_consecutive: int = 2     # windows below epsilon required
    r_ser_estimate: float = 3.0    # assumed harness resistance [ohm]
    vi_samples: int = 5
    low_duty: float = 0.05
    step_d0: float = 0.2
    step_d1: float = 0.4
    step_duration_s: float = 240.0


@dataclass
class PlantModel:
    """Ground-truth voxel with fabrication perturbations and noisy sensors."""
    address: Address
    heater: HeaterParams
    thermal: ThermalParams
    S_0: float = 18.0
    sensor_noise_c: float = 0.5
    current_noise_a: float = 0.0
    open_circuit: bool = False
    rng: np.random.Generator = field(default_factory=lambda: np.random.default_rng(0))
    T: float = field(init=False)

    def __post_init__(self):
        self.T = self.thermal.T_amb

    @property
    def r_h(self) -> float:
        return heater_resistance(self.heater, self.S_0)

    @property
    def r_tot(self) -> float:
        return self.r_h + self.heater.R_ser

    @property
    def tau(self) -> float:
        return self.thermal.C_th / self.thermal.G_th

    def steady_temp(self, duty: float) -> float:
        p = joule_power(self.heater, self.S_0, duty)
        return self.thermal.T_amb + self.thermal.eta * p / self.thermal.G_th

    def advance(self, duty: float, dt: float) -> None:
        t_inf = self.steady_temp(duty)
        self.T = t_inf + (self.T - t_inf) * math.exp(-dt / self.tau)
        if self.T >= self.thermal.T_m - 1.0:
            raise ValidationError(
                "calibration drove the plant into the melt plateau; cap the duty grid")

    def sample_temperature(self) -> float:
        return self.T + self.rng.normal(0.0, self.sensor_noise_c)

    def measure_vi(self, duty: float) -> tuple[float, float]:
        if self.open_circuit:
            return self.heater.V, 0.0
        i = self.heater.V / self.r_tot + self.rng.normal(0.0, self.current_noise_a)
        return self.heater.V, i


def make_plants(n: int, seed: int,
                heater: HeaterParams = HeaterParams(),
                thermal: ThermalParams = CALIBRATION_PLANT_NOMINAL,
                S_0: float = 18.0,
                perturb_fraction: float = 0.2,
                sensor_noise_c: float = 0.5,
                current_noise_a: float = 0.0,
                open_circuit: Sequence[int] = ()) -> list[PlantModel]:
    """Population with +/-perturb_fraction uniform spread on R_h (via R_s) and C_th."""
    streams = np.random.SeedSequence(seed).spawn(n)
    plants = []
    for i, ss in enumerate(streams):
        rng = np.random.default_rng(ss)
        f_r = 1.0 + perturb_fraction * float(rng.uniform(-1, 1))
        f_c = 1.0 + perturb_fraction * float(rng.uniform(-1, 1))
        plants.append(PlantModel(
            address=(0, i),
            heater=replace(heater, R_s=heater.R_s * f_r),
            thermal=replace(thermal, C_th=thermal.C_th * f_c),
            S_0=S_0,
            sensor_noise_c=sensor_noise_c,
            current_noise_a=current_noise_a,
            open_circuit=i in set(open_circuit),
            rng=rng,
        ))
    return plants


def measure_resistance(plant: PlantModel,
                       settings: CalibrationSettings = CalibrationSettings(),
                       ) -> tuple[float, float]:
    """(R_tot, R_h estimate) from the median of low-duty V/I samples."""
    ratios = []
    for _ in range(max(settings.vi_samples, 5)):
        v, i = plant.measure_vi(settings.low_duty)
        if i <= 1e-9:
            raise OpenCircuitFault(f"voxel {plant.address}: no current at low duty")
        ratios.append(v / i)
    r_tot = float(np.median(ratios))
    return r_tot, r_tot - settings.r_ser_estimate


@dataclass(frozen=True)
class DutySample:
    duty: float
    T_mean: float
    settled: bool
    dwell_s: float


def _dwell(plant: PlantModel, duty: float,
           settings: CalibrationSettings) -> DutySample:
    dt = 1.0 / settings.f_s
    win = max(int(settings.slope_window_s * settings.f_s), 2)
    samples: list[float] = []
    below = 0
    t = 0.0
    settled = False
    tw = np.arange(win) * dt
    while t < settings.t_max:
        plant.advance(duty, dt)
        samples.append(plant.sample_temperature())
        t += dt
        if len(samples) >= win and len(samples) % win == 0:
            slope = float(np.polyfit(tw, samples[-win:], 1)[0])
            below = below + 1 if abs(slope) < settings.epsilon else 0
            if below >= settings.slope_consecutive:
                settled = True
                break
    tail = max(int(len(samples) * settings.tail_fraction), 1)
    return DutySample(duty=duty, T_mean=float(np.mean(samples[-tail:])),
                      settled=settled, dwell_s=t)


def duty_sweep(plant: PlantModel, D: Sequence[float] | None = None,
               epsilon: float | None = None, t_max: float | None = None,
               settings: CalibrationSettings = CalibrationSettings(),
               ) -> list[DutySample]:
    """Steady-state temperature samples over a sorted duty grid."""
    if D is not None or epsilon is not None or t_max is not None:
        settings = replace(
            settings,
            duty_grid=tuple(D) if D is not None else settings.duty_grid,
            epsilon=epsilon if epsilon is not None else settings.epsilon,
            t_max=t_max if t_max is not None else settings.t_max,
        )
    grid = settings.duty_grid
    if list(grid) != sorted(grid) or any(not 0 <= d <= 1 for d in grid):
        raise ValidationError("duty grid must be sorted within [0, 1]")
    return [_dwell(plant, d, settings) for d in grid]


def _pava_nondecreasing(y: np.ndarray) -> np.ndarray:
    """Pool-adjacent-violators: closest nondecreasing sequence (uniform weights)."""
    vals = y.astype(float).copy()
    weights = np.ones_like(vals)
    blocks = [[i] for i in range(len(vals))]
    i = 0
    while i < len(vals) - 1:
        if vals[i] > vals[i + 1] + 1e-15:
            total_w = weights[i] + weights[i + 1]
            merged = (vals[i] * weights[i] + vals[i + 1] * weights[i + 1]) / total_w
            vals[i] = merged
            weights[i] = total_w
            blocks[i] = blocks[i] + blocks[i + 1]
            del blocks[i + 1]
            vals = np.delete(vals, i + 1)
            weights = np.delete(weights, i + 1)
            i = max(i - 1, 0)
        else:
            i += 1
    out = np.empty(sum(len(b) for b in blocks))
    for v, b in zip(vals, blocks):
        out[b] = v
    return out


@dataclass(frozen=True)
class InverseDutyMap:
    """Monotone duty <-> temperature map; inversion by bisection."""
    duties: tuple[float, ...]
    temps: tuple[float, ...]     # isotonic-fitted, nondecreasing

    @property
    def t_range(self) -> tuple[float, float]:
        return self.temps[0], self.temps[-1]

    @property
    def d_range(self) -> tuple[float, float]:
        return self.duties[0], self.duties[-1]

    def temperature_of(self, duty: float) -> float:
        return float(np.interp(duty, self.duties, self.temps))

    def __call__(self, T: float) -> float:
        lo_t, hi_t = self.t_range
        if not lo_t - 1e-9 <= T <= hi_t + 1e-9:
            raise ValidationError(
                f"target {T:.2f} degC outside the calibrated range "
                f"[{lo_t:.2f}, {hi_t:.2f}]; no extrapolation")
        lo, hi = self.d_range
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if self.temperature_of(mid) < T:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def to_dict(self) -> dict:
        return {"duties": list(self.duties), "temps": list(self.temps)}


def fit_inverse_map(samples: Sequence[DutySample]) -> InverseDutyMap:
    good = [s for s in samples if s.settled]
    if len(good) < 3:
        raise ValidationError("inverse map needs at least 3 settled samples")
    duties = np.array([s.duty for s in good])
    temps = _pava_nondecreasing(np.array([s.T_mean for s in good]))
    return InverseDutyMap(duties=tuple(duties.tolist()), temps=tuple(temps.tolist()))


def step_identify(plant: PlantModel, d0: float | None = None,
                  d1: float | None = None, f_s: float | None = None,
                  settings: CalibrationSettings = CalibrationSettings()) -> float:
    """First-order time constant from a small duty step response."""
    d0 = settings.step_d0 if d0 is None else d0
    d1 = settings.step_d1 if d1 is None else d1
    f_s = settings.f_s if f_s is None else f_s
    if not d1 > d0:
        raise ValidationError("step requires d1 > d0")
    dt = 1.0 / f_s
    # pre-condition at d0 for several time constants
    for _ in range(int(5 * plant.tau / dt)):
        plant.advance(d0, dt)
    n = int(settings.step_duration_s * f_s)
    ts = np.arange(n) * dt
    ys = np.empty(n)
    for i in range(n):
        plant.advance(d1, dt)
        ys[i] = plant.sample_temperature()

    def model(t, t_inf, t_0, tau):
        return t_inf + (t_0 - t_inf) * np.exp(-t / tau)

    p0 = (ys[-1], ys[0], max(settings.step_duration_s / 4, 1.0))
    try:
        popt, _ = curve_fit(model, ts, ys, p0=p0, maxfev=20000)
    except RuntimeError as exc:
        raise ValidationError(f"step response fit failed: {exc}") from exc
    t_inf, t_0, tau = popt
    if tau <= 0 or t_inf <= t_0:
        raise ValidationError("step response not a rising first-order transient")
    return float(tau)


@dataclass(frozen=True)
class CalibrationRecord:
    address: Address
    R_h: float
    R_tot: float
    tau_th: float
    inverse_map: InverseDutyMap

    def duty_for(self, T: float) -> float:
        return self.inverse_map(T)

    def to_dict(self) -> dict:
        return {
            "address": list(self.address),
            "R_h": self.R_h,
            "R_tot": self.R_tot,
            "tau_th": self.tau_th,
            "inverse_map": self.inverse_map.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CalibrationRecord":
        return cls(
            address=tuple(d["address"]),
            R_h=d["R_h"],
            R_tot=d["R_tot"],
            tau_th=d["tau_th"],
            inverse_map=InverseDutyMap(
                duties=tuple(d["inverse_map"]["duties"]),
                temps=tuple(d["inverse_map"]["temps"]),
            ),
        )


@dataclass
class CalibrationStore:
    records: dict[Address, CalibrationRecord]
    faults: list[Address]

    def to_dict(self) -> dict:
        return {
            "records": {
                f"{a[0]},{a[1]}": r.to_dict() for a, r in sorted(self.records.items())
            },
            "faults": [list(a) for a in sorted(self.faults)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "CalibrationStore":
        records = {}
        for key, rec in d["records"].items():
            r, c = (int(x) for x in key.split(","))
            records[(r, c)] = CalibrationRecord.from_dict(rec)
        return cls(records=records, faults=[tuple(a) for a in d["faults"]])

    @classmethod
    def from_json(cls, text: str) -> "CalibrationStore":
        return cls.from_dict(json.loads(text))


def calibrate_all(plants: Sequence[PlantModel],
                  settings: CalibrationSettings = CalibrationSettings(),
                  ) -> CalibrationStore:
    """Run the full calibration loop per voxel; faults are collected, not fatal."""
    records: dict[Address, CalibrationRecord] = {}
    faults: list[Address] = []
    for plant in plants:
        try:
            r_tot, r_h = measure_resistance(plant, settings)
            samples = duty_sweep(plant, settings=settings)
            inv = fit_inverse_map(samples)
            tau = step_identify(plant, settings=settings)
        except OpenCircuitFault:
            faults.append(plant.address)
            continue
        records[plant.address] = CalibrationRecord(
            address=plant.address, R_h=r_h, R_tot=r_tot, tau_th=tau, inverse_map=inv)
    return CalibrationStore(records=records, faults=faults)
