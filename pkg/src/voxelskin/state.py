"""Per-voxel lifecycle state and the addressed grid with trim/fracture/reset ops.

State machine: phase cycles solid -> melting -> melted -> cooling -> solid;
health goes healthy -> fractured (overload) -> healthy (full thermal cycle);
trimmed is absorbing.  A trimmed voxel never contributes stiffness, heat
capacity or power draw.  Operations are pure: they return new records/grids,
so concurrent readers always observe a consistent snapshot.
"""
from __future__ import annotations

import dataclasses
import json
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional

from . import geometry
from .errors import TrimDisconnectionWarning, ValidationError
from .params import DesignParams

Address = tuple[int, int]


class Phase(str, Enum):
    SOLID = "solid"
    MELTING = "melting"
    MELTED = "melted"
    COOLING = "cooling"


class Health(str, Enum):
    HEALTHY = "healthy"
    FRACTURED = "fractured"
    TRIMMED = "trimmed"


@dataclass(frozen=True)
class VoxelRecord:
    address: Address
    phase: Phase = Phase.SOLID
    health: Health = Health.HEALTHY
    temperature: float = 25.0
    phase_fraction: float = 0.0
    # optional (t_f, alpha) override for sacrificial voxels; applies to both
    # the mechanics cross-section and the melt energy
    geometry_override: Optional[tuple[float, float]] = None
    calibration: Optional[object] = None

    def __post_init__(self):
        pf = self.phase_fraction
        if not 0.0 <= pf <= 1.0:
            raise ValidationError("phase_fraction must lie in [0, 1]")
        if self.phase is Phase.SOLID and pf != 0.0:
            raise ValidationError("solid voxel must have phase_fraction 0")
        if self.phase is Phase.MELTED and pf != 1.0:
            raise ValidationError("melted voxel must have phase_fraction 1")

    @property
    def active(self) -> bool:
        return self.health is not Health.TRIMMED

    @property
    def compliant(self) -> bool:
        """True when the ligaments behave as elastomer (melted or fractured)."""
        return self.phase is Phase.MELTED or self.health is Health.FRACTURED


@dataclass(frozen=True)
class VoxelGrid:
    params: DesignParams
    cells: Mapping[Address, VoxelRecord] = field(repr=False)

    @property
    def rows(self) -> int:
        return self.params.rows

    @property
    def cols(self) -> int:
        return self.params.cols

    def cell(self, address: Address) -> VoxelRecord:
        return self.cells[address]

    def active_addresses(self) -> list[Address]:
        return sorted(a for a, v in self.cells.items() if v.active)

    def replace(self, records: Iterable[VoxelRecord]) -> "VoxelGrid":
        cells = dict(self.cells)
        for rec in records:
            if rec.address not in cells:
                raise ValidationError(f"address {rec.address} outside grid")
            cells[rec.address] = rec
        return VoxelGrid(params=self.params, cells=cells)


def build_grid(params: DesignParams) -> VoxelGrid:
    """All-solid, all-healthy grid of N_z rows by N_theta * m columns."""
    params.validate()
    cells = {
        (r, c): VoxelRecord(address=(r, c))
        for r in range(params.rows)
        for c in range(params.cols)
    }
    return VoxelGrid(params=params, cells=cells)


def orientation(grid: VoxelGrid, address: Address) -> str:
    return "up" if geometry.points_up(*address) else "down"


# --- lifecycle operations ----------------------------------------------------

def apply_overload(voxel: VoxelRecord, load_n: float, envelope) -> VoxelRecord:
    """Fracture iff the load strictly exceeds min(F_y, F_cr); melted voxels flow."""
    if voxel.phase is not Phase.SOLID:
        raise ValidationError("overload applies to solid voxels only; melted alloy flows")
    if voxel.health is not Health.HEALTHY:
        raise ValidationError("overload applies to healthy voxels")
    if load_n > min(envelope.F_y, envelope.F_cr):
        return dataclasses.replace(voxel, health=Health.FRACTURED)
    return voxel


def cycle_complete(trace) -> bool:
    """True when the trace reaches full melt and then returns to full solid."""
    pf = trace.phase_fraction
    melted_at = None
    for i, f in enumerate(pf):
        if melted_at is None and f >= 1.0 - 1e-9:
            melted_at = i
        elif melted_at is not None and f <= 1e-9:
            return True
    return False


def thermal_reset(voxel: VoxelRecord, trace) -> VoxelRecord:
    """Clear a fracture after one full melt/solidify cycle; healthy is idempotent."""
    if not cycle_complete(trace):
        if voxel.health is Health.FRACTURED:
            warnings.warn("thermal reset skipped: trace holds no completed melt cycle")
        return voxel
    return dataclasses.replace(
        voxel,
        health=Health.HEALTHY if voxel.health is not Health.TRIMMED else voxel.health,
        phase=Phase.SOLID,
        phase_fraction=0.0,
        temperature=float(trace.T[-1]),
    )


def _vertex_keys(params: DesignParams, address: Address) -> set[tuple[int, int]]:
    return {
        (round(x * 1e6), round(y * 1e6))
        for x, y in geometry.tri_vertices(params, *address)
    }


def adjacency(grid: VoxelGrid, active_only: bool = True) -> dict[Address, set[Address]]:
    """Edge adjacency (two shared vertices); with h_0 > 0, row interfaces are
    bridged by stand-off connectors, so sharing a connector x-position counts."""
    params = grid.params
    addrs = [a for a, v in grid.cells.items() if (v.active or not active_only)]
    keys = {a: _vertex_keys(params, a) for a in addrs}
    neigh: dict[Address, set[Address]] = {a: set() for a in addrs}
    by_key: dict[tuple[int, int], list[Address]] = {}
    for a, ks in keys.items():
        for k in ks:
            by_key.setdefault(k, []).append(a)
    for cell_list in by_key.values():
        for i, a in enumerate(cell_list):
            for b in cell_list[i + 1:]:
                if len(keys[a] & keys[b]) >= 2:
                    neigh[a].add(b)
                    neigh[b].add(a)
    if params.h_0 > 0:
        # vertical adjacency across the stand-off gap: same x key, rows r / r+1
        pitch = round(geometry.row_pitch(params) * 1e6)
        tri_h = round(geometry.triangle_height(params) * 1e6)
        tops: dict[tuple[int, int], list[Address]] = {}
        for a in addrs:
            for kx, ky in keys[a]:
                tops.setdefault((kx, ky), []).append(a)
        for (kx, ky), cell_list in tops.items():
            partners = tops.get((kx, ky - tri_h + pitch))
            if not partners:
                continue
            for a in cell_list:
                for b in partners:
                    if b[0] == a[0] + 1:
                        neigh[a].add(b)
                        neigh[b].add(a)
    return neigh


def connected_components(grid: VoxelGrid) -> list[set[Address]]:
    neigh = adjacency(grid)
    seen: set[Address] = set()
    comps: list[set[Address]] = []
    for start in sorted(neigh):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            a = stack.pop()
            for b in neigh[a]:
                if b not in comp:
                    comp.add(b)
                    stack.append(b)
        seen |= comp
        comps.append(comp)
    return comps


def trim(grid: VoxelGrid, region: Iterable[Address]) -> VoxelGrid:
    """Mark a region trimmed; surviving addresses and calibration stay intact.

    Warns (but proceeds) when the cut splits the active lattice.
    """
    region = set(region)
    unknown = region - set(grid.cells)
    if unknown:
        raise ValidationError(f"trim region outside grid: {sorted(unknown)[:4]}")
    trimmed = [
        dataclasses.replace(grid.cells[a], health=Health.TRIMMED) for a in region
    ]
    out = grid.replace(trimmed)
    if region:
        comps = connected_components(out)
        if len(comps) > 1:
            sizes = sorted((len(c) for c in comps), reverse=True)
            warnings.warn(
                f"trim split the lattice into {len(comps)} components (sizes {sizes})",
                TrimDisconnectionWarning,
            )
    return out


# --- serialization -----------------------------------------------------------

def grid_to_dict(grid: VoxelGrid) -> dict:
    return {
        "params": grid.params.to_dict(),
        "cells": [
            {
                "address": list(a),
                "phase": grid.cells[a].phase.value,
                "health": grid.cells[a].health.value,
                "phase_fraction": grid.cells[a].phase_fraction,
            }
            for a in sorted(grid.cells)
        ],
    }


def grid_from_dict(d: dict) -> VoxelGrid:
    params = DesignParams.from_dict(d["params"])
    cells = {}
    for c in d["cells"]:
        addr = tuple(c["address"])
        cells[addr] = VoxelRecord(
            address=addr,
            phase=Phase(c["phase"]),
            health=Health(c["health"]),
            phase_fraction=float(c["phase_fraction"]),
        )
    return VoxelGrid(params=params, cells=cells)


def grid_to_json(grid: VoxelGrid) -> str:
    return json.dumps(grid_to_dict(grid), sort_keys=True)


def grid_from_json(text: str) -> VoxelGrid:
    return grid_from_dict(json.loads(text))
