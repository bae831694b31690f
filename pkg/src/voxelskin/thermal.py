"""Per-voxel heater electrical model and lumped enthalpy thermal model.

The voxel is a single thermal lump with a latent plateau at the alloy melt
temperature: away from T_m the state follows

    C_th dT/dt = eta * P_in - G_th (T - T_amb)

and at T_m the net input advances the liquid fraction until the latent budget
Q_melt - C_th (T_m - T_amb) is absorbed (or released while cooling).  PWM is
modelled by its average power only; f_pwm >> 1/tau_th for every design here.

Default constants are tuned so the nominal 18 mm voxel heats in ~30 s
(closed form) and fully solidifies in ~43 s, and are configuration values
rather than measured physics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ValidationError

DutySchedule = Sequence[tuple[float, float]]  # (start time s, duty) breakpoints


@dataclass(frozen=True)
class HeaterParams:
    R_s: float = 1.0      # sheet resistance [ohm/sq]
    kappa: float = 1.0    # meander factor >= 1
    omega: float = 2.0    # trace width [mm]
    R_ser: float = 3.0    # series (harness) resistance [ohm]
    V: float = 12.0       # drive voltage [V]
    f_pwm: float = 1000.0 # PWM frequency [Hz]

    def validate(self) -> "HeaterParams":
        if min(self.R_s, self.omega, self.V, self.f_pwm) <= 0:
            raise ValidationError("heater parameters must be positive")
        if self.R_ser < 0:
            raise ValidationError("series resistance must be >= 0")
        if self.kappa < 1.0:
            raise ValidationError("meander factor kappa must be >= 1")
        return self


@dataclass(frozen=True)
class ThermalParams:
    C_th: float = 1.665   # heat capacity [J/K]
    G_th: float = 0.037   # conductance to ambient [W/K]
    Q_melt: float = 120.0 # total latent+sensible melt energy at ref_S0 [J]
    T_m: float = 62.0     # melt temperature [degC]
    eta: float = 0.8      # heating efficiency
    T_amb: float = 25.0   # ambient [degC]
    ref_S0: float = 18.0  # edge length the Q_melt value refers to [mm]

    def validate(self) -> "ThermalParams":
        if min(self.C_th, self.G_th, self.Q_melt, self.ref_S0) <= 0:
            raise ValidationError("thermal parameters must be positive")
        if not 0.0 < self.eta <= 1.0:
            raise ValidationError("eta must lie in (0, 1]")
        if self.T_m <= self.T_amb:
            raise ValidationError("melt temperature must exceed ambient")
        return self

    def q_latent(self, S_0: float, t_f_scale: float = 1.0) -> float:
        q = self.q_melt_at(S_0, t_f_scale) - self.C_th * (self.T_m - self.T_amb)
        if q <= 0:
            raise ValidationError(
                "Q_melt must exceed the sensible energy C_th*(T_m - T_amb)")
        return q

    def q_melt_at(self, S_0: float, t_f_scale: float = 1.0) -> float:
        """Melt energy scales with planform area (and ligament thickness for
        sacrificial overrides)."""
        return self.Q_melt * (S_0 / self.ref_S0) ** 2 * t_f_scale


def heater_resistance(h: HeaterParams, S_0: float) -> float:
    """Perimeter heater resistance kappa * R_s * (3 S_0 / omega)."""
    h.validate()
    if S_0 <= 0:
        raise ValidationError("S_0 must be positive")
    return h.kappa * h.R_s * (3.0 * S_0 / h.omega)


def joule_power(h: HeaterParams, S_0: float, duty: float) -> float:
    """Average power dissipated in the heater under PWM at the given duty."""
    if not 0.0 <= duty <= 1.0:
        raise ValidationError("duty must lie in [0, 1]")
    r_h = heater_resistance(h, S_0)
    return duty * h.V ** 2 * r_h / (r_h + h.R_ser) ** 2


@dataclass(frozen=True)
class TransientTrace:
    t: np.ndarray
    T: np.ndarray
    phase_fraction: np.ndarray
    P_in: np.ndarray

    def melt_completion_time(self) -> float | None:
        hits = np.flatnonzero(self.phase_fraction >= 1.0 - 1e-12)
        return float(self.t[hits[0]]) if hits.size else None

    def solidification_time(self) -> float | None:
        """Time of full solidification after the trace was last fully melted."""
        pf = self.phase_fraction
        melted = np.flatnonzero(pf >= 1.0 - 1e-12)
        if not melted.size:
            start = 0
        else:
            start = melted[-1]
        solid = np.flatnonzero(pf[start:] <= 1e-12)
        return float(self.t[start + solid[0]]) if solid.size else None

    def rows(self) -> list[tuple[float, float, float, float]]:
        return list(zip(self.t.tolist(), self.T.tolist(),
                        self.phase_fraction.tolist(), self.P_in.tolist()))


def duty_at(schedule: DutySchedule, time: float) -> float:
    d = 0.0
    for start, duty in schedule:
        if time >= start:
            d = duty
        else:
            break
    return d


def simulate_transient(t: ThermalParams, h: HeaterParams, S_0: float,
                       duty_schedule: DutySchedule, dt: float, horizon: float,
                       T0: float | None = None, phase0: float = 0.0,
                       t_f_scale: float = 1.0) -> TransientTrace:
    """Explicit enthalpy-method integration of the lumped voxel."""
    t.validate()
    h.validate()
    if dt <= 0:
        raise ValidationError("dt must be positive")
    if dt > min(t.C_th / t.G_th, 1.0) / 20.0:
        raise ValidationError("dt too large for stability: dt <= min(C/G, 1)/20")
    for start, duty in duty_schedule:
        if not 0.0 <= duty <= 1.0:
            raise ValidationError("duty must lie in [0, 1]")

    q_lat = t.q_latent(S_0, t_f_scale)
    c, g = t.C_th, t.G_th
    u_melt_lo = c * (t.T_m - t.T_amb)          # enthalpy where plateau starts
    u_melt_hi = u_melt_lo + q_lat
    T0 = t.T_amb if T0 is None else T0
    if T0 <= t.T_m:
        u = c * (T0 - t.T_amb) + phase0 * q_lat
    else:
        u = u_melt_hi + c * (T0 - t.T_m)

    n = int(math.floor(horizon / dt)) + 1
    times = np.arange(n) * dt
    temps = np.empty(n)
    fracs = np.empty(n)
    pins = np.empty(n)

    def state(u_val: float) -> tuple[float, float]:
        if u_val <= u_melt_lo:
            return t.T_amb + u_val / c, 0.0
        if u_val >= u_melt_hi:
            return t.T_m + (u_val - u_melt_hi) / c, 1.0
        return t.T_m, (u_val - u_melt_lo) / q_lat

    for i in range(n):
        temp, frac = state(u)
        duty = duty_at(duty_schedule, times[i])
        p_in = joule_power(h, S_0, duty)
        temps[i], fracs[i], pins[i] = temp, frac, p_in
        if not math.isfinite(u):
            raise ValidationError("thermal integration diverged (NaN guard)")
        u = u + dt * (t.eta * p_in - g * (temp - t.T_amb))
        u = max(u, c * (-60.0))  # physical floor well below any ambient

    return TransientTrace(t=times, T=temps, phase_fraction=fracs, P_in=pins)


def energy_audit(trace: TransientTrace, t: ThermalParams, S_0: float,
                 t_f_scale: float = 1.0) -> float:
    """|input - losses - stored| as a fraction of the total input energy."""
    dt = float(trace.t[1] - trace.t[0]) if len(trace.t) > 1 else 0.0
    e_in = float(np.sum(t.eta * trace.P_in[:-1]) * dt)
    e_loss = float(np.sum(t.G_th * (trace.T[:-1] - t.T_amb)) * dt)
    q_lat = t.q_latent(S_0, t_f_scale)
    du = (t.C_th * (trace.T[-1] - trace.T[0])
          + q_lat * (trace.phase_fraction[-1] - trace.phase_fraction[0]))
    return abs(e_in - e_loss - du) / max(abs(e_in), 1e-12)


class MeltTime(NamedTuple):
    closed_form_s: float
    simulated_s: float


class CoolTime(NamedTuple):
    time_constant_s: float
    simulated_s: float


def min_melt_voltage(t: ThermalParams, h: HeaterParams, S_0: float) -> float:
    """Smallest drive voltage whose duty-1 heating beats the losses at T_m."""
    r_h = heater_resistance(h, S_0)
    return (r_h + h.R_ser) * math.sqrt(
        t.G_th * (t.T_m - t.T_amb) / (t.eta * r_h))


def melt_time(t: ThermalParams, h: HeaterParams, S_0: float,
              dt: float = 0.02, t_f_scale: float = 1.0) -> MeltTime:
    """Closed-form estimate Q_melt (R_h + R_ser) / (eta V^2) plus the simulated
    time to full melt at duty 1."""
    t.validate()
    h.validate()
    r_h = heater_resistance(h, S_0)
    p_full = joule_power(h, S_0, 1.0)
    loss_at_melt = t.G_th * (t.T_m - t.T_amb)
    if t.eta * p_full <= loss_at_melt:
        raise ValidationError(
            "insufficient power: melt unreachable at duty 1; "
            f"needs V >= {min_melt_voltage(t, h, S_0):.2f} V")
    closed = t.q_melt_at(S_0, t_f_scale) * (r_h + h.R_ser) / (t.eta * h.V ** 2)
    horizon = 6.0 * closed + 4.0 * t.C_th / t.G_th
    trace = simulate_transient(t, h, S_0, [(0.0, 1.0)], dt, horizon,
                               t_f_scale=t_f_scale)
    sim = trace.melt_completion_time()
    if sim is None:
        raise ValidationError("simulation did not reach full melt within horizon")
    return MeltTime(closed_form_s=closed, simulated_s=sim)


def cool_time(t: ThermalParams, h: HeaterParams | None = None,
              S_0: float = 18.0, dt: float = 0.02) -> CoolTime:
    """Lumped time constant C_th/G_th and the simulated full-solidification
    time starting from a fully melted voxel at T_m."""
    t.validate()
    h = (h or HeaterParams()).validate()
    tau = t.C_th / t.G_th
    q_lat = t.q_latent(S_0)
    horizon = 4.0 * q_lat / (t.G_th * (t.T_m - t.T_amb)) + 2.0 * tau
    trace = simulate_transient(t, h, S_0, [(0.0, 0.0)], dt, horizon,
                               T0=t.T_m, phase0=1.0)
    sim = trace.solidification_time()
    if sim is None:
        raise ValidationError("voxel did not solidify within horizon")
    return CoolTime(time_constant_s=tau, simulated_s=sim)
