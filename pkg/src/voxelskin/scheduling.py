"""Power-budget-aware heating schedules and melt-front equalization.

Heating jobs are non-preemptive (an interrupted melt would re-solidify), so
each voxel gets one contiguous heat interval.  The planner is greedy
longest-job-first with earliest-fit placement; `brute_force_schedule`
enumerates placement orders exhaustively and is the optimality oracle for
small instances.  Cooling draws no electrical power and never constrains the
budget; cooldown is appended to reports only.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .calibration import CalibrationRecord
from .errors import InfeasibleError, ValidationError
from .state import Address
from .thermal import HeaterParams, ThermalParams, heater_resistance


@dataclass(frozen=True)
class HeatJob:
    address: Address
    power_w: float
    duration_s: float

    @property
    def energy_j(self) -> float:
        return self.power_w * self.duration_s


@dataclass(frozen=True)
class ActivationRequest:
    addresses: frozenset[Address]
    target: str = "melted"            # melted | solid
    deadline_s: Optional[float] = None

    def __post_init__(self):
        if self.target not in ("melted", "solid"):
            raise ValidationError("target must be 'melted' or 'solid'")


@dataclass(frozen=True)
class PowerBudget:
    peak_w: float
    per_branch: tuple[tuple[frozenset[Address], float], ...] = ()

    def __post_init__(self):
        if self.peak_w <= 0 or any(w <= 0 for _, w in self.per_branch):
            raise ValidationError("power budgets must be positive")


@dataclass(frozen=True)
class ScheduleEntry:
    address: Address
    start_s: float
    end_s: float
    duty: float
    power_w: float


@dataclass
class Schedule:
    entries: list[ScheduleEntry]
    makespan_s: float
    deadline_violations: list[Address] = field(default_factory=list)
    cooldown_s: float = 0.0

    def to_dict(self) -> dict:
        return {
            "entries": [
                {
                    "address": list(e.address),
                    "start_s": e.start_s,
                    "end_s": e.end_s,
                    "duty": e.duty,
                    "power_w": e.power_w,
                }
                for e in self.entries
            ],
            "makespan_s": self.makespan_s,
            "deadline_violations": [list(a) for a in self.deadline_violations],
            "cooldown_s": self.cooldown_s,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def events(self) -> list[tuple[float, Address, float, float]]:
        """(t, voxel, duty, cumulative power) at every interval boundary."""
        times = sorted({e.start_s for e in self.entries} | {e.end_s for e in self.entries})
        out = []
        for t in times:
            power = sum(e.power_w for e in self.entries if e.start_s <= t < e.end_s)
            for e in self.entries:
                if e.start_s == t or e.end_s == t:
                    out.append((t, e.address, e.duty if e.start_s == t else 0.0, power))
        return out


def full_duty_power(heater: HeaterParams, S_0: float,
                    record: Optional[CalibrationRecord] = None) -> float:
    """Heater power at duty 1, from the calibration record when available."""
    r_h = record.R_h if record is not None else heater_resistance(heater, S_0)
    return heater.V ** 2 * r_h / (r_h + heater.R_ser) ** 2


def _melt_duration(thermal: ThermalParams, heater: HeaterParams, S_0: float,
                   duty: float, record: Optional[CalibrationRecord]) -> float:
    r_h = record.R_h if record is not None else heater_resistance(heater, S_0)
    if duty <= 0:
        raise ValidationError("melt duty must be positive")
    return thermal.q_melt_at(S_0) * (r_h + heater.R_ser) / (thermal.eta * duty * heater.V ** 2)


def build_jobs(requests: Iterable[ActivationRequest], thermal: ThermalParams,
               heater: HeaterParams, S_0: float,
               records: Optional[Mapping[Address, CalibrationRecord]] = None,
               duties: Optional[Mapping[Address, float]] = None) -> list[HeatJob]:
    jobs = []
    seen: set[Address] = set()
    for req in requests:
        if req.target != "melted":
            continue
        for addr in sorted(req.addresses):
            if addr in seen:
                raise ValidationError(f"voxel {addr} requested twice")
            seen.add(addr)
            rec = records.get(addr) if records else None
            duty = duties.get(addr, 1.0) if duties else 1.0
            power = duty * full_duty_power(heater, S_0, rec)
            jobs.append(HeatJob(address=addr, power_w=power,
                                duration_s=_melt_duration(thermal, heater, S_0, duty, rec)))
    return jobs


def _earliest_fit(placed: list[ScheduleEntry], job: HeatJob,
                  budget: PowerBudget) -> float:
    """Earliest start so the running power stays within every budget."""
    def ok(t0: float) -> bool:
        t1 = t0 + job.duration_s
        checks = [(None, budget.peak_w)] + [
            (grp, w) for grp, w in budget.per_branch
        ]
        boundary = sorted({t0} | {e.start_s for e in placed if t0 <= e.start_s < t1})
        for grp, limit in checks:
            if grp is not None and job.address not in grp:
                continue
            for t in boundary:
                load = job.power_w
                for e in placed:
                    if e.start_s <= t < e.end_s and (grp is None or e.address in grp):
                        load += e.power_w
                if load > limit + 1e-9:
                    return False
        return True

    candidates = sorted({0.0} | {e.end_s for e in placed})
    for t0 in candidates:
        if ok(t0):
            return t0
    return max(e.end_s for e in placed)  # unreachable for feasible jobs


def _place_in_order(jobs: Sequence[HeatJob], budget: PowerBudget) -> list[ScheduleEntry]:
    placed: list[ScheduleEntry] = []
    for job in jobs:
        if job.power_w > budget.peak_w + 1e-9:
            raise InfeasibleError(
                f"voxel {job.address} needs {job.power_w:.2f} W, over the "
                f"{budget.peak_w:.2f} W budget")
        for grp, w in budget.per_branch:
            if job.address in grp and job.power_w > w + 1e-9:
                raise InfeasibleError(
                    f"voxel {job.address} exceeds its branch budget {w:.2f} W")
        t0 = _earliest_fit(placed, job, budget)
        # duty is filled in by the caller, which knows the per-voxel commands
        placed.append(ScheduleEntry(address=job.address, start_s=t0,
                                    end_s=t0 + job.duration_s,
                                    duty=0.0, power_w=job.power_w))
    return placed


def plan_schedule(requests: Iterable[ActivationRequest], budget: PowerBudget,
                  thermal: ThermalParams, heater: HeaterParams, S_0: float,
                  records: Optional[Mapping[Address, CalibrationRecord]] = None,
                  duties: Optional[Mapping[Address, float]] = None) -> Schedule:
    """Greedy longest-job-first staggering under the power budget."""
    requests = list(requests)
    jobs = build_jobs(requests, thermal, heater, S_0, records, duties)
    order = sorted(jobs, key=lambda j: (-j.energy_j, j.address))
    duty_of = {j.address: (duties.get(j.address, 1.0) if duties else 1.0) for j in order}
    placed = _place_in_order(order, budget)
    entries = [
        ScheduleEntry(e.address, e.start_s, e.end_s, duty_of[e.address], e.power_w)
        for e in placed
    ]
    entries.sort(key=lambda e: (e.start_s, e.address))
    makespan = max((e.end_s for e in entries), default=0.0)
    violations = []
    for req in requests:
        if req.deadline_s is None:
            continue
        for e in entries:
            if e.address in req.addresses and e.end_s > req.deadline_s + 1e-9:
                violations.append(e.address)
    cooldown = thermal.q_latent(S_0) / (thermal.G_th * (thermal.T_m - thermal.T_amb))
    return Schedule(entries=entries, makespan_s=makespan,
                    deadline_violations=sorted(set(violations)),
                    cooldown_s=cooldown if entries else 0.0)


def brute_force_schedule(requests: Iterable[ActivationRequest], budget: PowerBudget,
                         thermal: ThermalParams, heater: HeaterParams, S_0: float,
                         records: Optional[Mapping[Address, CalibrationRecord]] = None,
                         duties: Optional[Mapping[Address, float]] = None) -> Schedule:
    """Minimal makespan over all placement orders (earliest-fit per order)."""
    jobs = build_jobs(list(requests), thermal, heater, S_0, records, duties)
    if len(jobs) > 6:
        raise ValidationError("brute force limited to 6 voxels")
    duty_of = {j.address: (duties.get(j.address, 1.0) if duties else 1.0) for j in jobs}
    best: Optional[list[ScheduleEntry]] = None
    best_span = float("inf")
    for order in itertools.permutations(jobs):
        placed = _place_in_order(order, budget)
        span = max((e.end_s for e in placed), default=0.0)
        if span < best_span - 1e-12:
            best, best_span = placed, span
    entries = [
        ScheduleEntry(e.address, e.start_s, e.end_s, duty_of[e.address], e.power_w)
        for e in (best or [])
    ]
    entries.sort(key=lambda e: (e.start_s, e.address))
    return Schedule(entries=entries, makespan_s=0.0 if best is None else best_span)


def equalize_melt_fronts(group: Iterable[Address],
                         records: Mapping[Address, CalibrationRecord],
                         thermal: ThermalParams, heater: HeaterParams,
                         S_0: float) -> dict[Address, float]:
    """Per-voxel duty scale making predicted melt completions equal.

    duty_i is proportional to Q_melt,i / P_i(duty=1), normalized so the
    slowest voxel runs at duty 1.
    """
    group = sorted(group)
    if not group:
        return {}
    missing = [a for a in group if a not in records]
    if missing:
        raise ValidationError(f"voxels not calibrated: {missing[:4]}")
    q = thermal.q_melt_at(S_0)
    powers = {a: full_duty_power(heater, S_0, records[a]) for a in group}
    ratio = {a: q / powers[a] for a in group}
    peak = max(ratio.values())
    duties = {a: ratio[a] / peak for a in group}
    loss = thermal.G_th * (thermal.T_m - thermal.T_amb)
    for a, d in duties.items():
        if thermal.eta * d * powers[a] <= loss:
            raise InfeasibleError(
                f"voxel {a} cannot melt at equalized duty {d:.2f}")
    return duties


def validate_schedule(schedule: Schedule, budget: PowerBudget) -> list[str]:
    """Instantaneous power at every boundary event plus per-voxel disjointness.

    Violations are returned, never raised.
    """
    issues: list[str] = []
    entries = schedule.entries
    times = sorted({e.start_s for e in entries})
    for t in times:
        load = sum(e.power_w for e in entries if e.start_s <= t < e.end_s)
        if load > budget.peak_w + 1e-9:
            issues.append(f"power {load:.2f} W over budget at t={t:.2f}s")
        for grp, w in budget.per_branch:
            gload = sum(e.power_w for e in entries
                        if e.start_s <= t < e.end_s and e.address in grp)
            if gload > w + 1e-9:
                issues.append(f"branch power {gload:.2f} W over {w:.2f} W at t={t:.2f}s")
    by_addr: dict[Address, list[ScheduleEntry]] = {}
    for e in entries:
        by_addr.setdefault(e.address, []).append(e)
    for addr, evs in by_addr.items():
        evs = sorted(evs, key=lambda e: e.start_s)
        for a, b in zip(evs, evs[1:]):
            if b.start_s < a.end_s - 1e-9:
                issues.append(f"voxel {addr} has overlapping heat intervals")
    return issues
