"""Design parameter sweeps with fitted scaling exponents.

Sweep protocols (the response the exponent is fitted on is chosen per
parameter so the fit measures the law it is meant to check):

    t_f      ligament thickness at fixed t_sheet; exponent fitted on the
             out-of-plane fold stiffness (the bending-dominated case)
    t_sheet  sheet thickness at fixed t_f; exponent fitted on the axial
             stiffness of the fully activated grid (the membrane law), with
             the stand-off zeroed so no always-solid plumbing sits in series
    N_theta  voxels per turn at fixed radius; exponent fitted on the
             area-normalized axial stiffness
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import geometry, mechanics
from .errors import ValidationError
from .mechanics import DEFAULT_CONFIG, MechanicsConfig
from .params import DesignParams
from .state import build_grid
from .thermal import HeaterParams, ThermalParams, melt_time

SWEEP_PARAMS = ("t_f", "t_sheet", "N_theta")


@dataclass(frozen=True)
class SweepRow:
    value: float
    axial: float
    shear: float
    bending: float
    torsion: float
    k_area: float
    response: float     # the quantity the exponent is fitted on

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class SweepResult:
    parameter: str
    response_name: str
    rows: list[SweepRow]
    exponent: float
    r_squared: float

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "response": self.response_name,
            "rows": [r.to_dict() for r in self.rows],
            "exponent": self.exponent,
            "r_squared": self.r_squared,
        }


def _design_for(base: DesignParams, parameter: str, value: float) -> DesignParams:
    if parameter == "t_f":
        return dataclasses.replace(base, t_f=value, phi_f=value / base.t_sheet)
    if parameter == "t_sheet":
        return dataclasses.replace(base, t_sheet=value, phi_f=base.t_f / value, h_0=0.0)
    if parameter == "N_theta":
        n = int(value)
        s0 = 2.0 * math.pi * base.R / n
        scale = s0 / base.S_0
        return dataclasses.replace(base, N_theta=n, S_0=s0, S_L=base.S_L * scale)
    raise ValidationError(f"unknown sweep parameter {parameter!r}; "
                          f"choose from {SWEEP_PARAMS}")


def _response(parameter: str, grid, params: DesignParams,
              config: MechanicsConfig) -> tuple[str, float]:
    if parameter == "t_f":
        return "fold", mechanics.mode_stiffness(grid, (), "fold", 0.0, config)
    if parameter == "t_sheet":
        melted = set(grid.cells)
        return ("axial_melted",
                mechanics.mode_stiffness(grid, melted, "axial", 0.0, config))
    k = mechanics.mode_stiffness(grid, (), "axial", 0.0, config)
    return "axial_per_area", geometry.normalize_stiffness(k, params)


def design_sweep(parameter: str, values: Sequence[float],
                 base: DesignParams,
                 config: MechanicsConfig = DEFAULT_CONFIG) -> SweepResult:
    """Sweep one design parameter, reporting the four modes plus the fitted
    log-log exponent of the protocol response."""
    if parameter not in SWEEP_PARAMS:
        raise ValidationError(f"unknown sweep parameter {parameter!r}; "
                              f"choose from {SWEEP_PARAMS}")
    values = list(values)
    if any(v <= 0 for v in values):
        raise ValidationError("sweep values must be positive")
    rows = []
    name = ""
    for v in values:
        params = _design_for(base, parameter, v).validate()
        grid = build_grid(params)
        report = mechanics.stiffness_report(grid, (), 0.0, config)
        name, resp = _response(parameter, grid, params, config)
        rows.append(SweepRow(
            value=float(v), axial=report.axial, shear=report.shear,
            bending=report.bending, torsion=report.torsion,
            k_area=report.axial_area, response=resp,
        ))
    if len(rows) < 3:
        raise ValidationError("exponent fit needs at least 3 sweep points")
    exponent, r2 = mechanics.fit_scaling_exponent(
        [(r.value, r.response) for r in rows])
    return SweepResult(parameter=parameter, response_name=name, rows=rows,
                       exponent=exponent, r_squared=r2)


def sweep_values(lo: float, hi: float, steps: int) -> list[float]:
    if steps < 1 or hi < lo or lo <= 0:
        raise ValidationError("sweep range must be positive with steps >= 1")
    if steps == 1:
        return [lo]
    return list(np.linspace(lo, hi, steps))


@dataclass(frozen=True)
class IsoStiffnessPoint:
    t_f: float
    t_sheet: float
    stiffness: float


def iso_stiffness_curve(level: float, base: DesignParams,
                        t_f_values: Sequence[float],
                        config: MechanicsConfig = DEFAULT_CONFIG,
                        ) -> list[IsoStiffnessPoint]:
    """(t_f, t_sheet) pairs holding the solid fold stiffness at `level`.

    For each t_f, t_sheet is found by bisection (the fold response grows
    monotonically with the membrane thickness).  Pairs outside the reachable
    band are skipped.
    """
    points = []
    for t_f in t_f_values:
        lo, hi = t_f, 8.0 * t_f

        def k_of(ts: float) -> float:
            p = dataclasses.replace(base, t_f=t_f, t_sheet=ts, phi_f=t_f / ts)
            return mechanics.mode_stiffness(build_grid(p), (), "fold", 0.0, config)

        k_lo, k_hi = k_of(lo), k_of(hi)
        if not k_lo <= level <= k_hi:
            continue
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if k_of(mid) < level:
                lo = mid
            else:
                hi = mid
        ts = 0.5 * (lo + hi)
        points.append(IsoStiffnessPoint(t_f=float(t_f), t_sheet=float(ts),
                                        stiffness=level))
    return points


def melt_time_scaling(thermal: ThermalParams, heater: HeaterParams,
                      s0_values: Sequence[float]) -> list[tuple[float, float]]:
    """Closed-form melt time against voxel edge length (tau ~ S0^3 at R_ser=0)."""
    out = []
    for s0 in s0_values:
        r_h = s0 * 3.0 * heater.kappa * heater.R_s / heater.omega
        closed = thermal.q_melt_at(s0) * (r_h + heater.R_ser) / (
            thermal.eta * heater.V ** 2)
        out.append((float(s0), closed))
    return out
