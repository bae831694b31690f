"""Canonical activation patterns (virtual joints) and their evaluation.

Preset geometry on the row-column grid (widths chosen so each joint both
reproduces its qualitative behaviour and confines strain energy; see tests):

    bend_unilateral   vertical column band, full height, on one side of the
                      anchor column (small: 3 columns, large: 4)
    hinge_bilateral   horizontal full-circumference row band ending at the
                      anchor row (small: 1 row, large: 2)
    twist             circumferentially staggered double-start diagonal
                      (stagger N_cols/N_z, width 2 per start)
    shear             narrow oblique band crossing the full height
                      (stagger 2, width 4)
    axial_compress    all voxels of the bottom `rows_activated` rows

Rotational stiffness of a band joint is measured from the out-of-plane
response with the moment arm taken to the band centre, which makes softened
segments add in series as expected.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import geometry, mechanics
from .errors import ValidationError
from .mechanics import MechanicsConfig, DEFAULT_CONFIG, StiffnessReport
from .params import DesignParams
from .state import Address, VoxelGrid, adjacency

JOINT_KINDS = ("bend_unilateral", "hinge_bilateral", "twist", "shear", "axial_compress")

_MAGNITUDE_WIDTHS = {
    "bend_unilateral": {"small": 3, "large": 4},
    "hinge_bilateral": {"small": 1, "large": 2},
}

MODULATION_SERIES = (0, 2, 3, 4, 6, 12)

# site order for the nested Zero..Twelve activation sets; mid rows, low
# columns so every site carries weight in all four modes
_MODULATION_SITES = [
    (1, 2), (1, 3), (2, 2), (2, 3), (1, 4), (2, 4),
    (1, 1), (2, 1), (1, 5), (2, 5), (1, 0), (2, 0),
]


@dataclass(frozen=True)
class JointSpec:
    kind: str
    location: Address = (0, 0)
    band_width: Optional[int] = None
    magnitude: Optional[str] = None
    rows_activated: int = 1
    stagger: Optional[int] = None

    def __post_init__(self):
        if self.kind not in JOINT_KINDS:
            raise ValidationError(f"unknown joint kind {self.kind!r}")
        if self.magnitude not in (None, "small", "large"):
            raise ValidationError("magnitude must be 'small' or 'large'")

    def width(self) -> int:
        if self.band_width is not None:
            if self.band_width < 1:
                raise ValidationError("band_width must be >= 1")
            return self.band_width
        table = _MAGNITUDE_WIDTHS.get(self.kind)
        if table and self.magnitude:
            return table[self.magnitude]
        return {"twist": 2, "shear": 4}.get(self.kind, 1)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "location": list(self.location),
            "band_width": self.band_width,
            "magnitude": self.magnitude,
            "rows_activated": self.rows_activated,
            "stagger": self.stagger,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "JointSpec":
        return cls(
            kind=d["kind"],
            location=tuple(d.get("location", (0, 0))),
            band_width=d.get("band_width"),
            magnitude=d.get("magnitude"),
            rows_activated=d.get("rows_activated", 1),
            stagger=d.get("stagger"),
        )


@dataclass(frozen=True)
class ActivationPattern:
    addresses: frozenset[Address]
    spec: Optional[JointSpec] = None
    label: str = ""

    def sorted_addresses(self) -> list[Address]:
        return sorted(self.addresses)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "spec": self.spec.to_dict() if self.spec else None,
            "addresses": [list(a) for a in self.sorted_addresses()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ActivationPattern":
        return cls(
            addresses=frozenset(tuple(a) for a in d["addresses"]),
            spec=JointSpec.from_dict(d["spec"]) if d.get("spec") else None,
            label=d.get("label", ""),
        )

    @classmethod
    def from_json(cls, text: str) -> "ActivationPattern":
        return cls.from_dict(json.loads(text))


def _check_fits(grid: VoxelGrid, addrs: Iterable[Address]) -> frozenset[Address]:
    addrs = frozenset(addrs)
    active = {a for a, v in grid.cells.items() if v.active}
    bad = addrs - active
    if bad:
        raise ValidationError(f"pattern exceeds the active grid: {sorted(bad)[:4]}")
    return addrs


def synthesize_pattern(spec: JointSpec, grid: VoxelGrid) -> ActivationPattern:
    """Deterministic address set for a joint spec on a given grid."""
    rows, cols = grid.rows, grid.cols
    r0, c0 = spec.location
    w = spec.width()
    addrs: set[Address] = set()

    if spec.kind == "bend_unilateral":
        if c0 + w > cols:
            raise ValidationError("bend band exceeds grid columns")
        addrs = {(r, c) for r in range(rows) for c in range(c0, c0 + w)}
    elif spec.kind == "hinge_bilateral":
        lo = r0 - (w - 1)
        if lo < 0 or r0 >= rows:
            raise ValidationError("hinge band exceeds grid rows")
        addrs = {(r, c) for r in range(lo, r0 + 1) for c in range(cols)}
    elif spec.kind == "twist":
        stag = spec.stagger if spec.stagger is not None else max(1, cols // rows)
        half = cols // 2
        for r in range(rows):
            for i in range(w):
                addrs.add((r, (c0 + stag * r + i) % cols))
                addrs.add((r, (c0 + half + stag * r + i) % cols))
    elif spec.kind == "shear":
        stag = spec.stagger if spec.stagger is not None else 2
        if c0 + stag * (rows - 1) + w > cols:
            raise ValidationError("shear band exceeds grid columns")
        addrs = {(r, c0 + stag * r + i) for r in range(rows) for i in range(w)}
    elif spec.kind == "axial_compress":
        n = spec.rows_activated
        if not 0 <= n <= rows:
            raise ValidationError("rows_activated outside grid")
        addrs = {(r, c) for r in range(n) for c in range(cols)}

    label = spec.kind + (f"_{spec.magnitude}" if spec.magnitude else "")
    return ActivationPattern(addresses=_check_fits(grid, addrs), spec=spec, label=label)


def six_presets(grid: VoxelGrid) -> list[ActivationPattern]:
    """The six canonical joint configurations (a-f) on a reference-sized grid."""
    if grid.rows < 4 or grid.cols < 16:
        raise ValidationError("presets need at least a 4 x 16 grid")
    mid_c = grid.cols // 2 - 2
    specs = [
        JointSpec("bend_unilateral", (0, mid_c), magnitude="small"),
        JointSpec("bend_unilateral", (0, mid_c), magnitude="large"),
        JointSpec("hinge_bilateral", (2, 0), magnitude="small"),
        JointSpec("hinge_bilateral", (2, 0), magnitude="large"),
        JointSpec("twist", (0, 0)),
        JointSpec("shear", (0, grid.cols // 5)),
    ]
    return [synthesize_pattern(s, grid) for s in specs]


def modulation_pattern(grid: VoxelGrid, count: int) -> ActivationPattern:
    """Nested activation sets named by voxel count (0, 2, 3, 4, 6, 12)."""
    if count not in MODULATION_SERIES:
        raise ValidationError(f"count must be one of {MODULATION_SERIES}")
    if grid.rows < 3 or grid.cols < 6:
        raise ValidationError("modulation series needs at least a 3 x 6 grid")
    return ActivationPattern(
        addresses=_check_fits(grid, _MODULATION_SITES[:count]),
        label=f"set_{count}",
    )


def pattern_axis_deg(grid: VoxelGrid, pattern: ActivationPattern) -> float:
    """Azimuth (deg) of the pattern's anchor column; 0 for free patterns."""
    if pattern.spec is not None:
        r0, c0 = pattern.spec.location
        return math.degrees(geometry.column_azimuth(grid.params, c0, r0))
    if pattern.addresses:
        r0, c0 = min(pattern.addresses)
        return math.degrees(geometry.column_azimuth(grid.params, c0, r0))
    return 0.0


# --- evaluation ---------------------------------------------------------------


def _band_center_y(grid: VoxelGrid, pattern: ActivationPattern) -> float:
    params = grid.params
    ys = []
    for r, _ in pattern.addresses:
        ys.append(r * geometry.row_pitch(params) + geometry.triangle_height(params) / 2)
    return float(np.mean(ys))


def _band_center_x(grid: VoxelGrid, pattern: ActivationPattern) -> float:
    return float(np.mean([geometry.cell_center_x(grid.params, r, c)
                          for r, c in pattern.addresses]))


def rotational_stiffness(grid: VoxelGrid, pattern: ActivationPattern,
                         config: MechanicsConfig = DEFAULT_CONFIG) -> float:
    """Rotational stiffness about the band axis [N*mm/deg].

    Horizontal bands fold out of plane about their row line (plunge response,
    moment arm to the band centre); vertical bands fold about their column
    line (side probe, arm to the band centre).
    """
    if not pattern.addresses:
        raise ValidationError("rotational stiffness needs a nonempty pattern")
    kind = pattern.spec.kind if pattern.spec else "hinge_bilateral"
    model = mechanics.build_frame(grid, pattern.addresses, config)
    deg = math.pi / 180.0
    if kind == "bend_unilateral":
        xs = model.nodes[:, 0]
        clamp = list(np.flatnonzero(xs <= xs.min() + grid.params.S_0))
        right = model.node_set("right")
        res = mechanics.solve_point(model, clamp,
                                    {(n, 2): 1.0 / len(right) for n in right},
                                    config)
        tip = float(np.mean(res.displacements[[6 * n + 2 for n in right]]))
        arm = float(xs.max()) - _band_center_x(grid, pattern)
        return (1.0 / tip) * arm * arm * deg
    k_fold, _ = mechanics.mode_stiffness_from_model(
        mechanics.build_frame(grid, pattern.addresses, config), "fold", 0.0, config)
    arm = float(model.nodes[:, 1].max()) - _band_center_y(grid, pattern)
    return k_fold * arm * arm * deg


@dataclass(frozen=True)
class JointReport:
    pattern_label: str
    before: StiffnessReport
    after: StiffnessReport
    drops: dict
    dominant_mode: str
    axis_deg: float
    rotational_before: Optional[float] = None
    rotational_after: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern_label,
            "axis_deg": self.axis_deg,
            "before": self.before.to_dict(),
            "after": self.after.to_dict(),
            "drops": self.drops,
            "dominant_mode": self.dominant_mode,
            "rotational_before": self.rotational_before,
            "rotational_after": self.rotational_after,
        }


def evaluate_pattern(grid: VoxelGrid, pattern: ActivationPattern,
                     config: MechanicsConfig = DEFAULT_CONFIG) -> JointReport:
    """Mode stiffness before/after activation plus the dominant compliant mode.

    Shear/bending are evaluated about the joint's transverse axis when the
    kind defines one; twist and compression patterns have no such axis and
    use the default direction.
    """
    kind = pattern.spec.kind if pattern.spec else None
    if kind in ("bend_unilateral", "hinge_bilateral", "shear"):
        axis = pattern_axis_deg(grid, pattern)
    else:
        axis = 0.0
    before = mechanics.stiffness_report(grid, (), axis, config)
    after = mechanics.stiffness_report(grid, pattern.addresses, axis, config)
    drops = {
        m: 1.0 - after.value(m) / before.value(m)
        for m in ("axial", "shear", "bending", "torsion")
    }
    dominant = max(drops, key=drops.get) if pattern.addresses else "none"
    rot_b = rot_a = None
    if pattern.spec and pattern.spec.kind in ("hinge_bilateral", "bend_unilateral"):
        rot_a = rotational_stiffness(grid, pattern, config)
        rot_b = _rotational_solid(grid, pattern, config)
    return JointReport(
        pattern_label=pattern.label, before=before, after=after, drops=drops,
        dominant_mode=dominant, axis_deg=axis,
        rotational_before=rot_b, rotational_after=rot_a,
    )


def _rotational_solid(grid: VoxelGrid, pattern: ActivationPattern,
                      config: MechanicsConfig) -> float:
    """Same probe geometry as `rotational_stiffness`, nothing melted."""
    kind = pattern.spec.kind
    model = mechanics.build_frame(grid, (), config)
    deg = math.pi / 180.0
    if kind == "bend_unilateral":
        xs = model.nodes[:, 0]
        clamp = list(np.flatnonzero(xs <= xs.min() + grid.params.S_0))
        right = model.node_set("right")
        res = mechanics.solve_point(model, clamp,
                                    {(n, 2): 1.0 / len(right) for n in right},
                                    config)
        tip = float(np.mean(res.displacements[[6 * n + 2 for n in right]]))
        arm = float(xs.max()) - _band_center_x(grid, pattern)
        return (1.0 / tip) * arm * arm * deg
    k_fold, _ = mechanics.mode_stiffness_from_model(model, "fold", 0.0, config)
    arm = float(model.nodes[:, 1].max()) - _band_center_y(grid, pattern)
    return k_fold * arm * arm * deg


# --- localization --------------------------------------------------------------


@dataclass(frozen=True)
class LoadCase:
    """Canonical probe for a joint: either a ring-driver mode or a side probe."""
    mode: str                    # axial | shear | bending | torsion | fold | probe
    direction_deg: float = 0.0
    probe_component: int = 2     # dof component for probe cases (0=ux, 2=uz)


def canonical_load_case(grid: VoxelGrid, pattern: ActivationPattern) -> LoadCase:
    kind = pattern.spec.kind if pattern.spec else "hinge_bilateral"
    if kind == "bend_unilateral":
        return LoadCase(mode="probe", probe_component=2)
    if kind == "shear":
        return LoadCase(mode="probe", probe_component=0)
    if kind == "twist":
        return LoadCase(mode="torsion")
    if kind == "axial_compress":
        return LoadCase(mode="axial")
    return LoadCase(mode="bending", direction_deg=pattern_axis_deg(grid, pattern))


def localization_metric(grid: VoxelGrid, pattern: ActivationPattern,
                        load_case: Optional[LoadCase] = None,
                        config: MechanicsConfig = DEFAULT_CONFIG) -> float:
    """Fraction of strain energy inside the activated voxels and their 1-ring
    neighbours under the joint's dominant load case."""
    if not pattern.addresses:
        raise ValidationError("localization metric needs a nonempty pattern")
    case = load_case or canonical_load_case(grid, pattern)
    model = mechanics.build_frame(grid, pattern.addresses, config)
    if case.mode == "probe":
        xs = model.nodes[:, 0]
        clamp = list(np.flatnonzero(xs <= xs.min() + grid.params.S_0))
        edge = model.node_set("right")
        res = mechanics.solve_point(
            model, clamp, {(n, case.probe_component): 1.0 / len(edge) for n in edge},
            config)
    else:
        _, res = mechanics.mode_stiffness_from_model(
            model, case.mode, case.direction_deg, config)
    neigh = adjacency(grid)
    selected = set(pattern.addresses)
    for a in pattern.addresses:
        selected |= neigh.get(a, set())
    inside = sum(
        e for e, el in zip(res.element_energy, model.elements) if el.cell in selected
    )
    total = res.total_energy
    if total <= 0:
        raise ValidationError("no strain energy under the load case")
    return float(inside / total)


def predict_compression(params: DesignParams, rows_activated: int) -> float:
    """Shortening fraction when `rows_activated` full rows melt: activated rows
    contribute their full stroke, the rest stay rigid."""
    params.validate()
    if not 0 <= rows_activated <= params.N_z:
        raise ValidationError("rows_activated must lie in [0, N_z]")
    stroke = geometry.SQRT3_2 * params.S_L * rows_activated
    return stroke / geometry.band_height(params)
