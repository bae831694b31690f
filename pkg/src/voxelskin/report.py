"""Demo pipeline rendering: runs the main toolkit paths on the reference
design and writes figures next to the delimited data files."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import geometry, joints, scheduling, sweeps, thermal, topologies
from .artifacts import write_csv, write_json
from .calibration import CalibrationSettings, calibrate_all, make_plants
from .params import DEFAULT_DESIGN
from .state import build_grid
from .thermal import HeaterParams, ThermalParams

ACTIVATED = "#8c5a2b"     # brown, matching the activation-matrix encoding
DEACTIVATED = "#b9b9b9"   # gray


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return path


def render_pattern(grid, pattern, path: Path) -> Path:
    """Activation matrix: brown = activated, gray = deactivated."""
    fig, ax = plt.subplots(figsize=(8, 3))
    for addr, rec in sorted(grid.cells.items()):
        verts = geometry.tri_vertices(grid.params, *addr)
        face = ACTIVATED if addr in pattern.addresses else DEACTIVATED
        if not rec.active:
            face = "white"
        ax.fill(*zip(*verts), facecolor=face, edgecolor="k", linewidth=0.4)
    ax.set_aspect("equal")
    ax.set_title(pattern.label or "pattern")
    ax.set_xlabel("unwrapped x [mm]")
    ax.set_ylabel("y [mm]")
    return _save(fig, path)


def render_sweep(result: sweeps.SweepResult, path: Path) -> Path:
    xs = [r.value for r in result.rows]
    ys = [r.response for r in result.rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(xs, ys, "o", label="response")
    fit = np.exp(np.polyval(
        np.polyfit(np.log(xs), np.log(ys), 1), np.log(xs)))
    ax.loglog(xs, fit, "-",
              label=f"fit exponent {result.exponent:.2f}")
    ax.set_xlabel(result.parameter)
    ax.set_ylabel(result.response_name)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    return _save(fig, path)


def render_trace(trace, path: Path) -> Path:
    fig, ax1 = plt.subplots(figsize=(6, 4))
    ax1.plot(trace.t, trace.T, "r-", label="T")
    ax1.set_xlabel("t [s]")
    ax1.set_ylabel("T [degC]", color="r")
    ax2 = ax1.twinx()
    ax2.plot(trace.t, trace.phase_fraction, "b-", label="liquid fraction")
    ax2.set_ylabel("phase fraction", color="b")
    ax2.set_ylim(-0.05, 1.05)
    return _save(fig, path)


def render_schedule(schedule, budget_w: float, path: Path) -> Path:
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 5), sharex=True,
                                   height_ratios=[2, 1])
    for i, e in enumerate(schedule.entries):
        ax1.barh(i, e.end_s - e.start_s, left=e.start_s, height=0.7)
    ax1.set_yticks(range(len(schedule.entries)))
    ax1.set_yticklabels([f"{e.address}" for e in schedule.entries], fontsize=7)
    ax1.set_ylabel("voxel")
    times = sorted({e.start_s for e in schedule.entries}
                   | {e.end_s for e in schedule.entries})
    tt, pp = [0.0], [0.0]
    for t in times:
        p = sum(e.power_w for e in schedule.entries if e.start_s <= t < e.end_s)
        tt.extend([t, t])
        pp.extend([pp[-1], p])
    ax2.plot(tt, pp, "-")
    ax2.axhline(budget_w, color="r", linestyle="--", label="budget")
    ax2.set_xlabel("t [s]")
    ax2.set_ylabel("power [W]")
    ax2.legend()
    return _save(fig, path)


def render_topologies(cmp: topologies.TopologyComparison, path: Path) -> Path:
    modes = ("axial", "shear", "bending", "torsion")
    names = sorted(cmp.values)
    x = np.arange(len(names))
    w = 0.2
    fig, ax = plt.subplots(figsize=(8, 4))
    for i, mode in enumerate(modes):
        ax.bar(x + (i - 1.5) * w, [cmp.normalized[n][mode] for n in names],
               width=w, label=mode)
    ax.set_xticks(x)
    ax.set_xticklabels(names, rotation=30, ha="right")
    ax.set_ylabel("normalized stiffness")
    ax.legend()
    return _save(fig, path)


def render_calibration(store, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 4))
    for rec in store.records.values():
        ax.plot(rec.inverse_map.duties, rec.inverse_map.temps, "-",
                alpha=0.4, linewidth=0.8)
    ax.set_xlabel("duty")
    ax.set_ylabel("steady temperature [degC]")
    ax.set_title(f"{len(store.records)} calibrated voxels")
    return _save(fig, path)


def render_full_report(out: Path, seed: int = 0) -> list[Path]:
    """Run the demo pipeline on the reference design; data + figures."""
    written: list[Path] = []
    data, figs = out / "data", out / "figures"
    base = DEFAULT_DESIGN
    grid = build_grid(base)
    cfg = {"design": base.to_dict(), "seed": seed}

    sweep = sweeps.design_sweep("t_f", sweeps.sweep_values(0.5, 2.0, 8), base)
    write_csv(data / "sweep_t_f.csv",
              ["value", "axial", "shear", "bending", "torsion", "k_area", "response"],
              [[r.value, r.axial, r.shear, r.bending, r.torsion, r.k_area, r.response]
               for r in sweep.rows], cfg)
    written.append(data / "sweep_t_f.csv")
    written.append(render_sweep(sweep, figs / "sweep_t_f.png"))

    t, h = ThermalParams(), HeaterParams()
    trace = thermal.simulate_transient(t, h, base.S_0, [(0.0, 1.0)], 0.02, 80.0)
    write_csv(data / "trace.csv", ["t", "T", "phase_fraction", "P_in"],
              [list(r) for r in trace.rows()], cfg)
    written.append(data / "trace.csv")
    written.append(render_trace(trace, figs / "transient.png"))

    plants = make_plants(12, seed=seed)
    store = calibrate_all(plants, CalibrationSettings())
    write_json(data / "calibration.json", store.to_dict(), cfg)
    written.append(data / "calibration.json")
    written.append(render_calibration(store, figs / "calibration.png"))

    presets = joints.six_presets(grid)
    for pattern in presets[:2] + presets[4:]:
        name = pattern.label
        write_json(data / f"pattern_{name}.json", pattern.to_dict(), cfg)
        written.append(data / f"pattern_{name}.json")
        written.append(render_pattern(grid, pattern, figs / f"pattern_{name}.png"))

    addresses = frozenset((0, c) for c in range(3))
    budget = scheduling.PowerBudget(peak_w=9.0)
    schedule = scheduling.plan_schedule(
        [scheduling.ActivationRequest(addresses=addresses)], budget, t, h, base.S_0)
    write_json(data / "schedule.json", schedule.to_dict(), cfg)
    written.append(data / "schedule.json")
    written.append(render_schedule(schedule, 9.0, figs / "schedule.png"))

    cmp = topologies.topology_compare()
    write_csv(data / "topologies.csv", ["topology", "mode", "value", "normalized"],
              [[r["topology"], r["mode"], r["value"], r["normalized"]]
               for r in cmp.to_rows()], cfg)
    written.append(data / "topologies.csv")
    written.append(render_topologies(cmp, figs / "topologies.png"))
    return written
