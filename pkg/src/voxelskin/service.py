"""JSON-over-HTTP facade for the pattern studio.

Single-session, optimistic concurrency: every mutation carries the version it
was computed against and bumps the counter; stale mutations get 409.  Trim
counts as two mutations (grid change plus pattern reconciliation).  Schema
violations return 400, infeasible plans 422.  Mutations apply to copies and
swap in atomically, so no request ever partially applies.
"""
from __future__ import annotations

import threading
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import joints, scheduling, sweeps
from .errors import InfeasibleError, SingularSystemError, ValidationError
from .params import DEFAULT_DESIGN, DesignParams
from .state import VoxelGrid, build_grid, grid_to_dict, trim
from .thermal import HeaterParams, ThermalParams


class PatternBody(BaseModel):
    version: int
    addresses: list[tuple[int, int]]
    label: str = ""


class TrimBody(BaseModel):
    version: int
    addresses: list[tuple[int, int]]


class EvaluateBody(BaseModel):
    addresses: Optional[list[tuple[int, int]]] = None


class ScheduleBody(BaseModel):
    budget_w: float = Field(gt=0)
    addresses: Optional[list[tuple[int, int]]] = None
    equalized: bool = False


class SweepBody(BaseModel):
    parameter: str
    values: list[float]


class Session:
    def __init__(self, design: DesignParams):
        self.grid: VoxelGrid = build_grid(design)
        self.pattern: joints.ActivationPattern = joints.ActivationPattern(
            addresses=frozenset(), label="empty")
        self.version: int = 0
        self.lock = threading.Lock()


def create_app(design: DesignParams = DEFAULT_DESIGN) -> FastAPI:
    app = FastAPI(title="voxelskin", version="0.1.0")
    session = Session(design)
    t_params, h_params = ThermalParams(), HeaterParams()

    @app.exception_handler(RequestValidationError)
    async def schema_violation(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content={"error": "schema", "detail": exc.errors()})

    @app.exception_handler(ValidationError)
    async def domain_violation(request: Request, exc: ValidationError):
        return JSONResponse(status_code=400,
                            content={"error": "validation", "detail": str(exc)})

    @app.exception_handler(InfeasibleError)
    async def infeasible(request: Request, exc: InfeasibleError):
        return JSONResponse(status_code=422,
                            content={"error": "infeasible", "detail": str(exc)})

    @app.exception_handler(SingularSystemError)
    async def singular(request: Request, exc: SingularSystemError):
        return JSONResponse(status_code=422,
                            content={"error": "singular", "detail": str(exc)})

    def _check_version(expected: int) -> Optional[JSONResponse]:
        if expected != session.version:
            return JSONResponse(
                status_code=409,
                content={"error": "stale_version", "current": session.version})
        return None

    @app.get("/grid")
    def get_grid():
        return {"version": session.version, **grid_to_dict(session.grid)}

    @app.get("/pattern")
    def get_pattern():
        return {"version": session.version, **session.pattern.to_dict()}

    @app.put("/pattern")
    def put_pattern(body: PatternBody):
        with session.lock:
            stale = _check_version(body.version)
            if stale:
                return stale
            pattern = joints.ActivationPattern(
                addresses=frozenset(tuple(a) for a in body.addresses),
                label=body.label)
            active = {a for a, v in session.grid.cells.items() if v.active}
            bad = pattern.addresses - active
            if bad:
                raise ValidationError(f"pattern references inactive voxels: "
                                      f"{sorted(bad)[:4]}")
            session.pattern = pattern
            session.version += 1
            return {"version": session.version, **session.pattern.to_dict()}

    @app.post("/evaluate")
    def evaluate(body: EvaluateBody):
        pattern = session.pattern
        if body.addresses is not None:
            pattern = joints.ActivationPattern(
                addresses=frozenset(tuple(a) for a in body.addresses),
                label="ad hoc")
        report = joints.evaluate_pattern(session.grid, pattern)
        loc = (joints.localization_metric(session.grid, pattern)
               if pattern.addresses else None)
        return {"version": session.version, "report": report.to_dict(),
                "localization": loc}

    @app.post("/trim")
    def post_trim(body: TrimBody):
        with session.lock:
            stale = _check_version(body.version)
            if stale:
                return stale
            new_grid = trim(session.grid, [tuple(a) for a in body.addresses])
            pruned = frozenset(
                a for a in session.pattern.addresses
                if new_grid.cells[a].active)
            session.grid = new_grid
            session.pattern = joints.ActivationPattern(
                addresses=pruned, spec=session.pattern.spec,
                label=session.pattern.label)
            session.version += 2   # grid mutation + pattern reconciliation
            return {"version": session.version,
                    "active_voxels": len(new_grid.active_addresses())}

    @app.get("/presets/joints")
    def presets():
        patterns = joints.six_presets(session.grid)
        return {"version": session.version,
                "presets": [p.to_dict() for p in patterns]}

    @app.post("/schedule/plan")
    def schedule_plan(body: ScheduleBody):
        addresses = (frozenset(tuple(a) for a in body.addresses)
                     if body.addresses is not None
                     else session.pattern.addresses)
        if not addresses:
            return {"version": session.version,
                    "schedule": scheduling.Schedule([], 0.0).to_dict(),
                    "power_timeline": []}
        request = scheduling.ActivationRequest(addresses=addresses)
        budget = scheduling.PowerBudget(peak_w=body.budget_w)
        schedule = scheduling.plan_schedule(
            [request], budget, t_params, h_params, session.grid.params.S_0)
        timeline = [
            {"t": t_, "voxel": list(a), "duty": d, "cumulative_power": p}
            for t_, a, d, p in schedule.events()
        ]
        return {"version": session.version, "schedule": schedule.to_dict(),
                "power_timeline": timeline}

    @app.post("/design/sweep")
    def design_sweep(body: SweepBody):
        result = sweeps.design_sweep(body.parameter, body.values,
                                     session.grid.params)
        return {"version": session.version, **result.to_dict()}

    @app.get("/schema")
    def schema():
        return app.openapi()

    return app
