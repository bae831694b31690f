"""Command-line front door.

Subcommands: design, simulate, calibrate, synth, schedule, serve, report.
The five data commands emit plot-ready JSON/CSV only; `report` runs a demo
pipeline and renders matplotlib figures next to the delimited output.

Exit codes: 0 ok, 2 validation, 3 infeasible, 4 I/O.  Errors are written to
stderr as machine-readable JSON.  All outputs are byte-identical across runs
at a fixed seed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, joints, scheduling, sweeps, thermal
from .artifacts import write_csv, write_json
from .calibration import (CalibrationSettings, CalibrationStore,
                          calibrate_all, make_plants)
from .errors import InfeasibleError, SingularSystemError, ValidationError
from .params import DEFAULT_DESIGN, DesignParams
from .state import build_grid
from .thermal import HeaterParams, ThermalParams


def _load_design(path: str | None) -> DesignParams:
    if path is None:
        return DEFAULT_DESIGN
    return DesignParams.from_json(Path(path).read_text())


def _load_thermal(path: str | None) -> tuple[ThermalParams, HeaterParams]:
    if path is None:
        return ThermalParams(), HeaterParams()
    doc = json.loads(Path(path).read_text())
    return (ThermalParams(**doc.get("thermal", {})).validate(),
            HeaterParams(**doc.get("heater", {})).validate())


def cmd_design(args) -> int:
    base = _load_design(args.config)
    values = ([float(v) for v in args.values.split(",")] if args.values
              else sweeps.sweep_values(args.min, args.max, args.steps))
    result = sweeps.design_sweep(args.param, values, base)
    out = Path(args.out)
    cfg = {"param": args.param, "values": values, "design": base.to_dict()}
    payload = result.to_dict()
    if args.iso_level is not None:
        iso = sweeps.iso_stiffness_curve(
            args.iso_level, base, [r.value for r in result.rows]
            if args.param == "t_f" else [base.t_f * f for f in (0.5, 0.75, 1.0, 1.5, 2.0)])
        payload["iso_stiffness"] = [
            {"t_f": p.t_f, "t_sheet": p.t_sheet, "stiffness": p.stiffness}
            for p in iso
        ]
    write_json(out / "sweep.json", payload, cfg)
    if args.format == "csv":
        header = ["value", "axial", "shear", "bending", "torsion", "k_area", "response"]
        rows = [[r.value, r.axial, r.shear, r.bending, r.torsion, r.k_area, r.response]
                for r in result.rows]
        write_csv(out / "sweep.csv", header, rows, cfg)
    print(f"sweep {args.param}: exponent {result.exponent:.4f} "
          f"(R^2 {result.r_squared:.5f}) -> {out}")
    return 0


def cmd_simulate(args) -> int:
    t, h = _load_thermal(args.thermal_config)
    base = _load_design(args.config)
    schedule = [(0.0, args.duty)]
    trace = thermal.simulate_transient(t, h, base.S_0, schedule,
                                       dt=args.dt, horizon=args.horizon)
    cfg = {"duty": args.duty, "dt": args.dt, "horizon": args.horizon,
           "S_0": base.S_0}
    out = Path(args.out)
    write_csv(out / "trace.csv", ["t", "T", "phase_fraction", "P_in"],
              [list(r) for r in trace.rows()], cfg)
    mt = thermal.melt_time(t, h, base.S_0) if args.duty >= 1.0 else None
    ct = thermal.cool_time(t, h, base.S_0)
    write_json(out / "transient.json", {
        "melt_closed_form_s": None if mt is None else mt.closed_form_s,
        "melt_simulated_s": None if mt is None else mt.simulated_s,
        "cool_time_constant_s": ct.time_constant_s,
        "cool_simulated_s": ct.simulated_s,
        "energy_audit": thermal.energy_audit(trace, t, base.S_0),
    }, cfg)
    print(f"transient written -> {out}")
    return 0


def cmd_calibrate(args) -> int:
    plants = make_plants(args.voxels, seed=args.seed,
                         sensor_noise_c=args.sensor_noise)
    store = calibrate_all(plants, CalibrationSettings())
    cfg = {"voxels": args.voxels, "seed": args.seed,
           "sensor_noise": args.sensor_noise}
    out = Path(args.out)
    write_json(out / "calibration.json", store.to_dict(), cfg)
    if args.format == "csv":
        rows = [[f"{a[0]},{a[1]}", r.R_h, r.R_tot, r.tau_th]
                for a, r in sorted(store.records.items())]
        write_csv(out / "calibration.csv", ["address", "R_h", "R_tot", "tau_th"],
                  rows, cfg)
    print(f"calibrated {len(store.records)} voxels "
          f"({len(store.faults)} faults) -> {out}")
    return 0


def cmd_synth(args) -> int:
    base = _load_design(args.config)
    grid = build_grid(base)
    anchors = {
        "bend_unilateral": (0, grid.cols // 2 - 2),
        "hinge_bilateral": (2, 0),
        "twist": (0, 0),
        "shear": (0, grid.cols // 5),
        "axial_compress": (0, 0),
    }
    default_r, default_c = anchors[args.joint]
    spec = joints.JointSpec(
        kind=args.joint,
        location=(args.row if args.row is not None else default_r,
                  args.col if args.col is not None else default_c),
        magnitude=args.size,
        rows_activated=args.rows_activated,
    )
    pattern = joints.synthesize_pattern(spec, grid)
    report = joints.evaluate_pattern(grid, pattern)
    loc = joints.localization_metric(grid, pattern)
    cfg = {"design": base.to_dict(), "spec": spec.to_dict()}
    out = Path(args.out)
    write_json(out / "pattern.json", pattern.to_dict(), cfg)
    write_json(out / "joint_report.json",
               {**report.to_dict(), "localization": loc}, cfg)
    if args.format == "csv":
        rows = [[r["mode"], r["value"], r["unit"], r["normalized"]]
                for r in report.after.to_rows()]
        write_csv(out / "joint_report.csv", ["mode", "value", "unit", "normalized"],
                  rows, cfg)
    print(f"{pattern.label}: dominant {report.dominant_mode}, "
          f"localization {loc:.3f} -> {out}")
    return 0


def cmd_schedule(args) -> int:
    t, h = _load_thermal(args.thermal_config)
    base = _load_design(args.config)
    if args.pattern:
        pattern = joints.ActivationPattern.from_json(Path(args.pattern).read_text())
        addresses = frozenset(pattern.addresses)
    else:
        addresses = frozenset((0, c) for c in range(args.demo_voxels))
    records = None
    if args.records:
        records = CalibrationStore.from_json(Path(args.records).read_text()).records
    duties = None
    if args.equalize:
        if not records:
            raise ValidationError("--equalize requires --records")
        duties = scheduling.equalize_melt_fronts(addresses, records, t, h, base.S_0)
    request = scheduling.ActivationRequest(addresses=addresses)
    budget = scheduling.PowerBudget(peak_w=args.budget)
    schedule = scheduling.plan_schedule([request], budget, t, h, base.S_0,
                                        records, duties)
    issues = scheduling.validate_schedule(schedule, budget)
    if issues:
        raise ValidationError("; ".join(issues))
    cfg = {"budget": args.budget, "voxels": sorted(list(addresses)),
           "equalize": args.equalize}
    out = Path(args.out)
    write_json(out / "schedule.json", schedule.to_dict(), cfg)
    write_csv(out / "schedule_events.csv",
              ["t", "voxel", "duty", "cumulative_power"],
              [[t_, f"{a[0]}:{a[1]}", d, p] for t_, a, d, p in schedule.events()],
              cfg)
    print(f"schedule makespan {schedule.makespan_s:.2f} s -> {out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(_load_design(args.config)),
                host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_report(args) -> int:
    from . import report as report_mod

    out = Path(args.out)
    written = report_mod.render_full_report(out, seed=args.seed)
    print(f"report: {len(written)} files -> {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voxelskin",
        description="variable-stiffness voxel lattice skin toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="design parameters JSON")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "csv"), default="csv")

    p = sub.add_parser("design", help="parameter sweep with fitted exponent")
    common(p)
    p.add_argument("--param", required=True, choices=sweeps.SWEEP_PARAMS)
    p.add_argument("--min", type=float, default=0.5)
    p.add_argument("--max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--values", help="explicit comma-separated values")
    p.add_argument("--iso-level", type=float, default=None,
                   help="emit iso-stiffness (t_f, t_sheet) pairs at this level")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", help="lumped thermal transient")
    common(p)
    p.add_argument("--thermal-config")
    p.add_argument("--duty", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=0.02)
    p.add_argument("--horizon", type=float, default=120.0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("calibrate", help="calibrate a simulated voxel population")
    common(p)
    p.add_argument("--voxels", type=int, default=80)
    p.add_argument("--sensor-noise", type=float, default=0.5)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("synth", help="synthesize and evaluate a joint pattern")
    common(p)
    p.add_argument("--joint", required=True, choices=joints.JOINT_KINDS)
    p.add_argument("--size", choices=("small", "large"), default=None)
    p.add_argument("--row", type=int, default=None,
                   help="anchor row (default: the joint's canonical anchor)")
    p.add_argument("--col", type=int, default=None,
                   help="anchor column (default: the joint's canonical anchor)")
    p.add_argument("--rows-activated", type=int, default=4)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("schedule", help="plan a power-budget heating schedule")
    common(p)
    p.add_argument("--thermal-config")
    p.add_argument("--pattern", help="pattern JSON to heat")
    p.add_argument("--demo-voxels", type=int, default=3)
    p.add_argument("--budget", type=float, default=9.0)
    p.add_argument("--records", help="calibration store JSON")
    p.add_argument("--equalize", action="store_true")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("serve", help="run the JSON/HTTP service")
    common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8077)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("report", help="demo pipeline with figures")
    common(p)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, SingularSystemError) as exc:
        _err(exc)
        return 2
    except InfeasibleError as exc:
        _err(exc)
        return 3
    except OSError as exc:
        _err(exc)
        return 4


def _err(exc: Exception) -> None:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
          file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
