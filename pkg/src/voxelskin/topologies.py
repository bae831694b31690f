"""Equal-mass lattice band comparison across candidate topologies.

Each topology tiles the same unwrapped band (width 2*pi*R*turns by height H)
with its conventional unit cell; member cross-sections are scaled so every
band carries the same metal mass, then the four cylinder modes are measured
with the shared ring-driver machinery.

The square ('cubic') band uses the running-bond (staggered) tiling: a wrapped
skin is laid up brick-fashion so no continuous cut line crosses the band, and
the aligned-column variant is not representative of a voxel skin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import ValidationError
from . import mechanics
from .mechanics import (DEFAULT_CONFIG, Element, FrameModel, MechanicsConfig,
                        make_frame, metal_material, _section)

SQRT3_2 = math.sqrt(3.0) / 2.0

TOPOLOGIES = ("cubic", "fish_scale", "hexagonal", "kagome",
              "parallelogram", "reentrant", "triangular")


@dataclass(frozen=True)
class BandGeometry:
    R: float = 30.0           # cylinder radius [mm]
    turns: int = 1
    height: float = 4 * SQRT3_2 * 18.0
    cell: float = 18.0        # target unit-cell scale [mm]
    mass_g: float = 30.0
    density_g_mm3: float = 0.0093   # Field's metal
    t_f: float = 1.0
    alpha_max: float = 1.0 / 6.0   # fabricable ligament width fraction of the cell

    @property
    def width(self) -> float:
        return 2.0 * math.pi * self.R * self.turns

    @property
    def metal_volume(self) -> float:
        return self.mass_g / self.density_g_mm3


class _Mesh:
    def __init__(self):
        self.index: dict[tuple, int] = {}
        self.coords: list[tuple[float, float]] = []
        self.segments: dict[tuple[int, int], str] = {}
        self.salt = None   # set per cell for lattices with unshared corner nodes

    def node(self, x: float, y: float) -> int:
        key = (round(x * 1e6), round(y * 1e6), self.salt)
        i = self.index.get(key)
        if i is None:
            i = len(self.coords)
            self.index[key] = i
            self.coords.append((x, y))
        return i

    def seg(self, p1: tuple[float, float], p2: tuple[float, float],
            tag: str = "member") -> None:
        a, b = self.node(*p1), self.node(*p2)
        if a == b:
            return
        self.segments[(min(a, b), max(a, b))] = tag

    def pin_ties(self) -> list[tuple[int, int]]:
        """Translation ties joining coincident salted nodes (pin joints)."""
        groups: dict[tuple[int, int], list[int]] = {}
        for (kx, ky, _salt), i in self.index.items():
            groups.setdefault((kx, ky), []).append(i)
        ties = []
        for members in groups.values():
            members.sort()
            ties.extend((members[0], m) for m in members[1:])
        return ties

    def seg_length(self, key: tuple[int, int]) -> float:
        a, b = key
        return math.hypot(self.coords[b][0] - self.coords[a][0],
                          self.coords[b][1] - self.coords[a][1])

    def length_by_tag(self) -> dict[str, float]:
        out: dict[str, float] = {}
        for key, tag in self.segments.items():
            out[tag] = out.get(tag, 0.0) + self.seg_length(key)
        return out


def _counts(span: float, step: float) -> int:
    n = round(span / step)
    if n < 1:
        raise ValidationError(
            f"topology cannot tile the band: cell {step:.1f} exceeds span {span:.1f}")
    return n


def _triangular(mesh: _Mesh, W: float, H: float, a: float):
    n_rows = _counts(H, SQRT3_2 * a)
    row_h = H / n_rows
    n_cols = _counts(W, a)
    for r in range(n_rows):
        x0 = 0.5 * a if r % 2 else 0.0
        y0, y1 = r * row_h, (r + 1) * row_h
        for j in range(n_cols):
            b0, b1 = (x0 + j * a, y0), (x0 + (j + 1) * a, y0)
            apex = (x0 + (j + 0.5) * a, y1)
            mesh.seg(b0, b1)
            mesh.seg(b0, apex)
            mesh.seg(b1, apex)
            if j + 1 < n_cols:
                nxt = (x0 + (j + 1.5) * a, y1)
                mesh.seg(apex, nxt)   # top edge of the interleaved down-triangle


def _kagome(mesh: _Mesh, W: float, H: float, a: float, neck: float = 1.0):
    """Corner-connected up-triangles.  Each triangle is inset toward its
    centroid by neck/2 and joined to its corner partners by explicit neck
    segments, which is where a cast corner joint actually deforms."""
    n_rows = _counts(H, SQRT3_2 * a)
    row_h = H / n_rows
    n_cols = _counts(W, a)
    corners: dict[tuple[int, int], list[tuple[float, float]]] = {}
    for r in range(n_rows):
        x0 = 0.5 * a if r % 2 else 0.0
        y0, y1 = r * row_h, (r + 1) * row_h
        for j in range(n_cols):
            verts = [(x0 + j * a, y0), (x0 + (j + 1) * a, y0),
                     (x0 + (j + 0.5) * a, y1)]
            cx = sum(v[0] for v in verts) / 3.0
            cy = sum(v[1] for v in verts) / 3.0
            shrunk = []
            for vx, vy in verts:
                d = math.hypot(cx - vx, cy - vy)
                f = (neck / 2.0) / d
                shrunk.append((vx + (cx - vx) * f, vy + (cy - vy) * f))
            for i, k in ((0, 1), (1, 2), (2, 0)):
                mesh.seg(shrunk[i], shrunk[k])
            for (vx, vy), s in zip(verts, shrunk):
                corners.setdefault((round(vx * 1e6), round(vy * 1e6)), []).append(s)
    for group in corners.values():
        for p1, p2 in zip(group, group[1:]):
            mesh.seg(p1, p2, tag="neck")


def _cubic(mesh: _Mesh, W: float, H: float, s: float):
    """Running-bond square tiling: continuous chords, verticals staggered."""
    n_x, n_y = _counts(W, s), _counts(H, s)
    sx, sy = W / n_x, H / n_y
    for k in range(n_y + 1):
        y = k * sy
        for j in range(2 * n_x):
            mesh.seg((j * sx / 2, y), ((j + 1) * sx / 2, y))
    for k in range(n_y):
        off = 0.5 * sx if k % 2 else 0.0
        x = off
        while x <= W + 1e-9:
            mesh.seg((x, k * sy), (x, (k + 1) * sy))
            x += sx


def _fish_scale(mesh: _Mesh, W: float, H: float, s: float):
    """Long horizontal scales with sparse staggered links (every other bay)."""
    n_x, n_y = _counts(W, s), _counts(H, s)
    sx, sy = W / n_x, H / n_y
    for k in range(n_y + 1):
        y = k * sy
        for j in range(n_x):
            mesh.seg((j * sx, y), ((j + 1) * sx, y))
    for k in range(n_y):
        x = (k % 2) * sx
        while x <= W + 1e-9:
            mesh.seg((x, k * sy), (x, (k + 1) * sy))
            x += 2 * sx


def _parallelogram(mesh: _Mesh, W: float, H: float, s: float):
    """Slanted grid: one 60-degree strut family plus horizontal chords."""
    n_y = _counts(H, s * SQRT3_2)
    h = H / n_y
    shift = h / math.tan(math.radians(60.0))
    n_x = _counts(W, s)
    for k in range(n_y + 1):
        y = k * h
        for j in range(n_x):
            mesh.seg((j * s + k * shift, y), ((j + 1) * s + k * shift, y))
    for k in range(n_y):
        for j in range(n_x + 1):
            mesh.seg((j * s + k * shift, k * h),
                     (j * s + (k + 1) * shift, (k + 1) * h))


def _honeycomb(mesh: _Mesh, W: float, H: float, a: float, reentrant: bool = False):
    """Pointy-top hexagons, or the inverted (bowtie) auxetic variant, with
    band edge rails at y = 0 and y = H.

    Zigzag level k has peaks at (j + k) odd; the regular cell links each peak
    to the trough directly above (wall length pitch - amp), while the
    reentrant cell links each trough to the peak above (pitch + amp).
    """
    amp = 0.5 * a
    pitch = 1.5 * a
    n_y = _counts(H - amp, pitch)
    scale = H / (n_y * pitch + amp)
    pitch *= scale
    amp *= scale
    dx = SQRT3_2 * a
    n_x = _counts(W, dx)

    def zig(k: int, j: int) -> tuple[float, float]:
        return j * dx, k * pitch + (amp if (j + k) % 2 else 0.0)

    for k in range(n_y + 1):
        for j in range(n_x):
            mesh.seg(zig(k, j), zig(k, j + 1))
    for k in range(n_y):
        for j in range(n_x + 1):
            peak_here = (j + k) % 2 == 1
            if not reentrant and peak_here:
                mesh.seg(zig(k, j), zig(k + 1, j))      # peak -> trough above
            elif reentrant and not peak_here:
                mesh.seg(zig(k, j), zig(k + 1, j))      # trough -> peak above


_BUILDERS: dict[str, Callable[[_Mesh, float, float, float], None]] = {
    "triangular": _triangular,
    "kagome": _kagome,
    "cubic": _cubic,
    "fish_scale": _fish_scale,
    "parallelogram": _parallelogram,
    "hexagonal": lambda m, W, H, a: _honeycomb(m, W, H, a),
    "reentrant": lambda m, W, H, a: _honeycomb(m, W, H, a, reentrant=True),
}


def build_band(topology: str, band: BandGeometry = BandGeometry(),
               config: MechanicsConfig = DEFAULT_CONFIG) -> FrameModel:
    if topology not in _BUILDERS:
        raise ValidationError(
            f"unknown topology {topology!r}; choose from {sorted(_BUILDERS)}")
    mesh = _Mesh()
    _BUILDERS[topology](mesh, band.width, band.height, band.cell)
    lengths = mesh.length_by_tag()
    l_member = lengths.get("member", 0.0)
    l_neck = lengths.get("neck", 0.0)
    # cast tip-to-tip corners taper toward zero contact; model the joint as a
    # neck of one third the ligament width
    area = band.metal_volume / (l_member + l_neck / 3.0)
    width = area / band.t_f
    # sparse lattices cannot absorb an arbitrary budget: the ligament width
    # is capped at the fabricable fraction of the cell (excess budget is
    # simply not castable into the band)
    width = min(width, band.alpha_max * band.cell)
    sections = {"member": _section(width, band.t_f),
                "neck": _section(width / 3.0, band.t_f)}
    mat = metal_material(config)
    elements = []
    for key in sorted(mesh.segments):
        A, Iy, Iz, J = sections[mesh.segments[key]]
        elements.append(Element(key[0], key[1], mat.E, mat.G, A, Iy, Iz, J,
                                kind="metal"))
    return make_frame(mesh.coords, elements, band.R)


# Flat-band proxies for the four cylinder modes.  Sinusoidal ring profiles
# would fabricate rim stretch on the planar stand-in (the dropped radial
# component compensates it on the real cylinder), so the comparison uses
# rigid top-edge measures only: band stretch (axial), out-of-plane wall
# flexure under a transverse push (shear proxy), in-plane flexure =
# differential stretch (bending) and uniform circumferential sliding
# (torsion).
_FLAT_MODES = {"axial": "axial", "shear": "fold",
               "bending": "bending", "torsion": "torsion"}


def topology_stiffness(topology: str, band: BandGeometry = BandGeometry(),
                       config: MechanicsConfig = DEFAULT_CONFIG) -> dict[str, float]:
    """Displacement-controlled (rigid fixture) mode values; an anisotropic
    band cannot relax sideways in a rigid grip, matching how bands are
    actually screened."""
    model = build_band(topology, band, config)
    K_drv = mechanics.driver_stiffness_matrix(model, config)
    out = {}
    for label, machinery in _FLAT_MODES.items():
        g = mechanics._mode_force(machinery, 0.0)
        out[label] = float(g @ K_drv @ g)
    return out


@dataclass
class TopologyComparison:
    values: dict[str, dict[str, float]]       # topology -> mode -> stiffness
    normalized: dict[str, dict[str, float]]   # per mode, divided by the max

    def ranking(self, mode: str) -> list[str]:
        return sorted(self.values, key=lambda t: -self.values[t][mode])

    def first_in_all_modes(self) -> str | None:
        leaders = {self.ranking(m)[0] for m in ("axial", "shear", "bending", "torsion")}
        return leaders.pop() if len(leaders) == 1 else None

    def to_rows(self) -> list[dict]:
        rows = []
        for topo in sorted(self.values):
            for mode in ("axial", "shear", "bending", "torsion"):
                rows.append({
                    "topology": topo, "mode": mode,
                    "value": self.values[topo][mode],
                    "normalized": self.normalized[topo][mode],
                })
        return rows


def topology_compare(topologies=TOPOLOGIES, band: BandGeometry = BandGeometry(),
                     config: MechanicsConfig = DEFAULT_CONFIG) -> TopologyComparison:
    """Equal-mass stiffness comparison, normalized per mode by the maximum."""
    values = {t: topology_stiffness(t, band, config) for t in topologies}
    normalized = {}
    for t in values:
        normalized[t] = {}
        for mode in ("axial", "shear", "bending", "torsion"):
            peak = max(v[mode] for v in values.values())
            normalized[t][mode] = values[t][mode] / peak
    return TopologyComparison(values=values, normalized=normalized)
