"""Ligament-level frame model of the lattice sheet.

Every voxel contributes three frame elements along its edges (plus an optional
parallel elastomer-membrane set of thickness t_sheet - t_f); melted or
fractured voxels contribute at the elastomer modulus.  Elements are
three-dimensional beams on the flat unwrapped sheet, so in-plane stretching
and out-of-plane (weak-axis) bending are both represented.

Mode stiffnesses are measured with the bottom row clamped and the top row
gripped by a rigid virtual ring.  On the unwrapped sheet the ring's rigid
motions become displacement profiles in the azimuth theta = x / R:

    axial    u_y = q                    torsion  u_x = q
    bending  u_y = q * sin(theta - phi) shear    u_x = q * sin(theta - phi)
    fold     u_z = q   (out-of-plane plunge; the bending-dominated case)

A mode is driven by a unit generalized force on its amplitude with every other
ring amplitude left force-free, which is how a free sleeve is actually loaded;
stiffness per degree uses the twist/tilt angle q / R.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import geometry
from .errors import SingularSystemError, ValidationError
from .params import DesignParams
from .state import Address, VoxelGrid

METAL_SOLID = "metal_solid"
ELASTOMER = "elastomer"

MODES = ("axial", "shear", "bending", "torsion", "fold", "roll", "bending_flat")

# driver amplitude slots
_AX, _TW, _TS, _TC, _SS, _SC, _PL, _RL, _BF = range(9)
_N_AMP = 9


@dataclass(frozen=True)
class MechanicsConfig:
    """Material/model constants.  Defaults are calibration-of-convenience:
    acceptance checks depend on ratios and orderings, not these values."""

    E_metal: float = 9250.0        # N/mm^2
    E_elastomer: float = 1.0       # N/mm^2
    sigma_y: float = 30.0          # N/mm^2
    nu_metal: float = 0.3
    nu_elastomer: float = 0.49
    include_membrane: bool = True
    buckling_end_factor: float = 1.0  # pinned-pinned Euler by default
    solver_tol: float = 1e-10


DEFAULT_CONFIG = MechanicsConfig()


@dataclass(frozen=True)
class MaterialState:
    E: float
    sigma_y: Optional[float] = None
    label: str = METAL_SOLID
    nu: float = 0.3

    def __post_init__(self):
        if self.E <= 0:
            raise ValidationError("elastic modulus must be positive")
        if self.label == METAL_SOLID and (self.sigma_y is None or self.sigma_y <= 0):
            raise ValidationError("metal_solid requires sigma_y > 0")

    @property
    def G(self) -> float:
        return self.E / (2.0 * (1.0 + self.nu))


def metal_material(config: MechanicsConfig = DEFAULT_CONFIG) -> MaterialState:
    return MaterialState(E=config.E_metal, sigma_y=config.sigma_y,
                         label=METAL_SOLID, nu=config.nu_metal)


def elastomer_material(config: MechanicsConfig = DEFAULT_CONFIG) -> MaterialState:
    return MaterialState(E=config.E_elastomer, label=ELASTOMER, nu=config.nu_elastomer)


def ligament_stiffness(length: float, width: float, thickness: float,
                       material: MaterialState) -> tuple[float, float]:
    """(k_s, k_b): axial E*A/L and fixed-fixed transverse 12*E*I/L^3 with
    I = width * thickness^3 / 12 (out-of-plane weak axis)."""
    if min(length, width, thickness) <= 0:
        raise ValidationError("ligament dimensions must be positive")
    k_s = material.E * width * thickness / length
    i_weak = width * thickness ** 3 / 12.0
    k_b = 12.0 * material.E * i_weak / length ** 3
    return k_s, k_b


@dataclass(frozen=True)
class LigamentElement:
    n1: tuple[float, float]
    n2: tuple[float, float]
    width: float
    thickness: float
    material: MaterialState

    @property
    def length(self) -> float:
        return math.hypot(self.n2[0] - self.n1[0], self.n2[1] - self.n1[1])

    @property
    def I(self) -> float:
        return self.width * self.thickness ** 3 / 12.0

    @property
    def k_s(self) -> float:
        return ligament_stiffness(self.length, self.width, self.thickness, self.material)[0]

    @property
    def k_b(self) -> float:
        return ligament_stiffness(self.length, self.width, self.thickness, self.material)[1]


@dataclass(frozen=True)
class FailureEnvelope:
    F_y: float
    F_cr: float
    crossover_t_f: float

    @property
    def governing(self) -> str:
        return "buckling" if self.F_cr < self.F_y else "yield"


def failure_envelope(length: float, width: float, thickness: float,
                     material: MaterialState,
                     end_factor: float = 1.0) -> FailureEnvelope:
    """Yield F_y = sigma_y*A and Euler F_cr = c*pi^2*E*I/L^2 per ligament."""
    if material.label != METAL_SOLID:
        raise ValidationError("failure envelope applies to metal_solid ligaments only")
    if min(length, width, thickness) <= 0 or end_factor <= 0:
        raise ValidationError("envelope inputs must be positive")
    f_y = material.sigma_y * width * thickness
    i_weak = width * thickness ** 3 / 12.0
    f_cr = end_factor * math.pi ** 2 * material.E * i_weak / length ** 2
    crossover = length * math.sqrt(
        12.0 * material.sigma_y / (end_factor * math.pi ** 2 * material.E)
    )
    return FailureEnvelope(F_y=f_y, F_cr=f_cr, crossover_t_f=crossover)


def fit_scaling_exponent(samples: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares slope of log k vs log x; returns (exponent, R^2)."""
    if len(samples) < 3:
        raise ValidationError("exponent fit needs at least 3 samples")
    xs = np.array([s[0] for s in samples], dtype=float)
    ks = np.array([s[1] for s in samples], dtype=float)
    if np.any(xs <= 0) or np.any(ks <= 0):
        raise ValidationError("exponent fit requires positive samples")
    lx, lk = np.log(xs), np.log(ks)
    slope, intercept = np.polyfit(lx, lk, 1)
    resid = lk - (slope * lx + intercept)
    ss_tot = float(np.sum((lk - lk.mean()) ** 2))
    r2 = 1.0 if ss_tot < 1e-30 else 1.0 - float(np.sum(resid ** 2)) / ss_tot
    return float(slope), r2


# --- frame model ---------------------------------------------------------------


def torsion_constant(width: float, thickness: float) -> float:
    """St Venant constant of a solid rectangle (Roark approximation)."""
    a, b = max(width, thickness), min(width, thickness)
    return a * b ** 3 * (1.0 / 3.0 - 0.21 * (b / a) * (1.0 - b ** 4 / (12.0 * a ** 4)))


@dataclass(frozen=True)
class Element:
    n1: int
    n2: int
    E: float
    G: float
    A: float
    Iy: float   # out-of-plane (weak) bending
    Iz: float   # in-plane bending
    J: float
    cell: Optional[Address] = None
    kind: str = "metal"


@dataclass
class FrameModel:
    nodes: np.ndarray                 # (n, 2) sheet coordinates
    elements: list[Element]
    R: float                          # azimuth radius for theta = x / R
    params: Optional[DesignParams] = None
    # translation-only node ties (master, slave): coincident pin joints that
    # transmit force but no moment
    ties: list[tuple[int, int]] = field(default_factory=list)
    _K: Optional[sp.csr_matrix] = field(default=None, repr=False)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_dof(self) -> int:
        return 6 * self.n_nodes

    def theta(self, node: int) -> float:
        return self.nodes[node, 0] / self.R

    def node_set(self, side: str, tol: float = 1e-6) -> list[int]:
        xs, ys = self.nodes[:, 0], self.nodes[:, 1]
        sel = {
            "bottom": ys < ys.min() + tol,
            "top": ys > ys.max() - tol,
            "left": xs < xs.min() + tol,
            "right": xs > xs.max() - tol,
        }[side]
        return list(np.flatnonzero(sel))

    def stiffness(self) -> sp.csr_matrix:
        if self._K is None:
            self._K = _assemble(self)
        return self._K


def _element_k_global(model: FrameModel, e: Element) -> np.ndarray:
    x1, y1 = model.nodes[e.n1]
    x2, y2 = model.nodes[e.n2]
    L = math.hypot(x2 - x1, y2 - y1)
    if L <= 0:
        raise ValidationError("zero-length element")
    cx, cy = (x2 - x1) / L, (y2 - y1) / L

    EA_L = e.E * e.A / L
    GJ_L = e.G * e.J / L
    z1b, z2b = 12 * e.E * e.Iz / L ** 3, 6 * e.E * e.Iz / L ** 2
    z3b, z4b = 4 * e.E * e.Iz / L, 2 * e.E * e.Iz / L
    y1b, y2b = 12 * e.E * e.Iy / L ** 3, 6 * e.E * e.Iy / L ** 2
    y3b, y4b = 4 * e.E * e.Iy / L, 2 * e.E * e.Iy / L

    k = np.zeros((12, 12))
    k[0, 0] = k[6, 6] = EA_L
    k[0, 6] = k[6, 0] = -EA_L
    k[3, 3] = k[9, 9] = GJ_L
    k[3, 9] = k[9, 3] = -GJ_L
    # in-plane bending (deflection along local y, rotation about local z)
    k[1, 1] = k[7, 7] = z1b
    k[1, 7] = k[7, 1] = -z1b
    k[1, 5] = k[5, 1] = k[1, 11] = k[11, 1] = z2b
    k[5, 7] = k[7, 5] = k[7, 11] = k[11, 7] = -z2b
    k[5, 5] = k[11, 11] = z3b
    k[5, 11] = k[11, 5] = z4b
    # out-of-plane bending (deflection along local z, rotation about local y)
    k[2, 2] = k[8, 8] = y1b
    k[2, 8] = k[8, 2] = -y1b
    k[2, 4] = k[4, 2] = k[2, 10] = k[10, 2] = -y2b
    k[4, 8] = k[8, 4] = k[8, 10] = k[10, 8] = y2b
    k[4, 4] = k[10, 10] = y3b
    k[4, 10] = k[10, 4] = y4b

    lam = np.array([[cx, cy, 0.0], [-cy, cx, 0.0], [0.0, 0.0, 1.0]])
    T = np.kron(np.eye(4), lam)
    return T.T @ k @ T


def _assemble(model: FrameModel) -> sp.csr_matrix:
    rows, cols, vals = [], [], []
    for e in model.elements:
        ke = _element_k_global(model, e)
        dofs = [6 * e.n1 + i for i in range(6)] + [6 * e.n2 + i for i in range(6)]
        for a in range(12):
            for b in range(12):
                v = ke[a, b]
                if v != 0.0:
                    rows.append(dofs[a])
                    cols.append(dofs[b])
                    vals.append(v)
    K = sp.coo_matrix((vals, (rows, cols)), shape=(model.n_dof, model.n_dof))
    return K.tocsr()


class _NodeTable:
    def __init__(self):
        self.index: dict[tuple[int, int], int] = {}
        self.coords: list[tuple[float, float]] = []

    def add(self, x: float, y: float) -> int:
        key = (round(x * 1e6), round(y * 1e6))
        i = self.index.get(key)
        if i is None:
            i = len(self.coords)
            self.index[key] = i
            self.coords.append((x, y))
        return i


def _section(width: float, thickness: float) -> tuple[float, float, float, float]:
    A = width * thickness
    Iy = width * thickness ** 3 / 12.0
    Iz = thickness * width ** 3 / 12.0
    J = torsion_constant(width, thickness)
    return A, Iy, Iz, J


def build_frame(grid: VoxelGrid, activation: Iterable[Address] = (),
                config: MechanicsConfig = DEFAULT_CONFIG) -> FrameModel:
    """Frame model of the active lattice under an activation pattern."""
    params = grid.params
    activation = set(activation)
    active = set()
    for a, v in grid.cells.items():
        if v.active:
            active.add(a)
    bad = activation - active
    if bad:
        raise ValidationError(f"activation references trimmed/unknown voxels: {sorted(bad)[:4]}")

    table = _NodeTable()
    elements: list[Element] = []
    top_vertex_cells: dict[int, Address] = {}
    metal = metal_material(config)
    rubber = elastomer_material(config)
    tri_h = geometry.triangle_height(params)

    for addr in sorted(active):
        rec = grid.cells[addr]
        verts = geometry.tri_vertices(params, *addr)
        ids = [table.add(*v) for v in verts]
        t_f, alpha = params.t_f, params.alpha
        if rec.geometry_override is not None:
            t_f, alpha = rec.geometry_override
        w = alpha * params.S_0
        mat = rubber if (rec.compliant or addr in activation) else metal
        A, Iy, Iz, J = _section(w, t_f)
        t_mem = params.t_sheet - t_f
        mem_sec = _section(w, t_mem) if (config.include_membrane and t_mem > 1e-12) else None
        for i, j in ((0, 1), (1, 2), (2, 0)):
            elements.append(Element(ids[i], ids[j], mat.E, mat.G, A, Iy, Iz, J,
                                    cell=addr, kind="metal"))
            if mem_sec is not None:
                mA, mIy, mIz, mJ = mem_sec
                elements.append(Element(ids[i], ids[j], rubber.E, rubber.G,
                                        mA, mIy, mIz, mJ, cell=addr, kind="membrane"))
        # remember which cell owns each top-line vertex (for connector tags)
        row_top = round((addr[0] * geometry.row_pitch(params) + tri_h) * 1e6)
        for vid, (vx, vy) in zip(ids, verts):
            if round(vy * 1e6) == row_top:
                top_vertex_cells.setdefault(vid, addr)

    model = FrameModel(nodes=np.array(table.coords), elements=elements,
                       R=params.R, params=params)

    if params.h_0 > 0 and params.rows > 1:
        # stand-off connectors: always-solid metal stubs joining coincident-x
        # node pairs across each row interface
        A, Iy, Iz, J = _section(params.ligament_width, params.t_f)
        coords = np.array(table.coords)
        pitch = geometry.row_pitch(params)
        for r in range(params.rows - 1):
            y_top = r * pitch + tri_h
            y_bot = (r + 1) * pitch
            upper = {round(x * 1e6): i for i, (x, y) in enumerate(coords)
                     if abs(y - y_bot) < 1e-6}
            for i, (x, y) in enumerate(coords):
                if abs(y - y_top) >= 1e-6:
                    continue
                partner = upper.get(round(x * 1e6))
                if partner is not None:
                    elements.append(Element(i, partner, metal.E, metal.G,
                                            A, Iy, Iz, J,
                                            cell=top_vertex_cells.get(i),
                                            kind="connector"))
        model = FrameModel(nodes=coords, elements=elements,
                           R=params.R, params=params)
    return model


def assemble_global(grid: VoxelGrid, activation: Iterable[Address] = (),
                    config: MechanicsConfig = DEFAULT_CONFIG):
    """Free-free global stiffness operator (CSR) plus the underlying model."""
    model = build_frame(grid, activation, config)
    return model.stiffness(), model


# --- solving -------------------------------------------------------------------


@dataclass
class SolveResult:
    amplitude: float                  # driven generalized displacement (driver cases)
    displacements: np.ndarray         # full dof vector
    element_energy: np.ndarray        # strain energy per element
    model: FrameModel

    @property
    def total_energy(self) -> float:
        return float(self.element_energy.sum())


def _reduction_map(model: FrameModel, fixed: set[int],
                   driven: Optional[list[int]]):
    """Master-slave reduction matrix.

    Clamped dofs vanish; driven-node translations follow the seven ring
    amplitudes; pin-tie slave translations follow their master node; every
    other dof keeps its own column.  Returns (M, q0) with q0 the first
    amplitude column (None without a driver).
    """
    driven = driven or []
    slaved = set(driven)
    tie_master = {s: m for m, s in model.ties}

    cols_free: dict[int, int] = {}
    ncol = 0
    for node in range(model.n_nodes):
        if node in fixed:
            continue
        own_translations = node not in slaved and node not in tie_master
        for comp in range(6):
            if comp < 3 and not own_translations:
                continue
            cols_free[6 * node + comp] = ncol
            ncol += 1
    q0 = None
    if driven:
        q0 = ncol
        ncol += _N_AMP

    x_mid = 0.5 * (model.nodes[:, 0].min() + model.nodes[:, 0].max())

    def translation_entries(node: int) -> dict[int, list[tuple[int, float]]]:
        if node in fixed:
            return {0: [], 1: [], 2: []}
        if node in slaved:
            th = model.theta(node)
            s, c_ = math.sin(th), math.cos(th)
            roll = (model.nodes[node, 0] - x_mid) / model.R
            return {
                0: [(q0 + _TW, 1.0), (q0 + _SS, s), (q0 + _SC, c_)],
                1: [(q0 + _AX, 1.0), (q0 + _TS, s), (q0 + _TC, c_),
                    (q0 + _BF, roll)],
                2: [(q0 + _PL, 1.0), (q0 + _RL, roll)],
            }
        if node in tie_master:
            return translation_entries(tie_master[node])
        return {comp: [(cols_free[6 * node + comp], 1.0)] for comp in range(3)}

    rows, cols, vals = [], [], []
    for dof, c in cols_free.items():
        rows.append(dof)
        cols.append(c)
        vals.append(1.0)
    for node in range(model.n_nodes):
        if node in fixed or not (node in slaved or node in tie_master):
            continue
        entries = translation_entries(node)
        for comp in range(3):
            for col, val in entries[comp]:
                rows.append(6 * node + comp)
                cols.append(col)
                vals.append(val)

    M = sp.coo_matrix((vals, (rows, cols)),
                      shape=(model.n_dof, ncol)).tocsr()
    return M, q0


def _diagnose_singular(model: FrameModel, anchored: set[int]) -> SingularSystemError:
    """Name the substructure with no load path to the anchored (clamped) nodes."""
    n = model.n_nodes
    links = ([(e.n1, e.n2) for e in model.elements] + list(model.ties))
    adj = sp.coo_matrix(
        (np.ones(2 * len(links)),
         ([a for a, _ in links] + [b for _, b in links],
          [b for _, b in links] + [a for a, _ in links])),
        shape=(n, n),
    ).tocsr()
    ncomp, labels = sp.csgraph.connected_components(adj, directed=False)
    floating = []
    for comp in range(ncomp):
        members = set(int(i) for i in np.flatnonzero(labels == comp))
        if not (members & anchored):
            floating.extend(sorted(members))
    return SingularSystemError(
        f"singular system: {ncomp} components, {len(floating)} nodes floating "
        f"without a path to the clamped boundary (e.g. {floating[:6]})",
        floating_nodes=floating)


def _solve_reduced(model: FrameModel, M: sp.csr_matrix, f_red: np.ndarray,
                   anchored: set[int], tol: float) -> np.ndarray:
    K = model.stiffness()
    K_red = (M.T @ K @ M).tocsc()
    import warnings as _warnings
    with _warnings.catch_warnings():
        _warnings.simplefilter("ignore", spla.MatrixRankWarning)
        try:
            u = spla.spsolve(K_red, f_red)
        except RuntimeError as exc:  # exactly singular factorization
            raise _diagnose_singular(model, anchored) from exc
        if not np.all(np.isfinite(u)):
            raise _diagnose_singular(model, anchored)
        # iterative refinement to the documented residual tolerance
        scale = max(float(np.linalg.norm(f_red)), 1e-30)
        resid = float("inf")
        for _ in range(4):
            r = f_red - K_red @ u
            resid = float(np.linalg.norm(r))
            if resid <= tol * scale:
                break
            u = u + spla.spsolve(K_red, r)
    if resid > 1e-6 * scale or not np.all(np.isfinite(u)):
        # an unconverged residual means the load has no path to ground
        raise _diagnose_singular(model, anchored)
    return u


def _energies(model: FrameModel, u: np.ndarray) -> np.ndarray:
    out = np.zeros(len(model.elements))
    for i, e in enumerate(model.elements):
        dofs = [6 * e.n1 + k for k in range(6)] + [6 * e.n2 + k for k in range(6)]
        ue = u[dofs]
        out[i] = 0.5 * ue @ _element_k_global(model, e) @ ue
    return out


def solve_driver(model: FrameModel, g: np.ndarray,
                 config: MechanicsConfig = DEFAULT_CONFIG) -> SolveResult:
    """Clamp the bottom edge, grip the top edge with the ring driver and apply
    the generalized force vector g (length 8) to the ring amplitudes."""
    bottom = set(model.node_set("bottom"))
    top = model.node_set("top")
    M, q0 = _reduction_map(model, bottom, top)
    f_red = np.zeros(M.shape[1])
    f_red[q0:q0 + _N_AMP] = g
    u_red = _solve_reduced(model, M, f_red, bottom, config.solver_tol)
    u = M @ u_red
    return SolveResult(amplitude=float(g @ u_red[q0:q0 + _N_AMP]),
                       displacements=u, element_energy=_energies(model, u), model=model)


def solve_point(model: FrameModel, clamp_nodes: Iterable[int],
                loads: dict[tuple[int, int], float],
                config: MechanicsConfig = DEFAULT_CONFIG) -> SolveResult:
    """Clamp the given nodes and apply point loads {(node, component): force}."""
    clamped = set(clamp_nodes)
    M, _ = _reduction_map(model, clamped, None)
    f = np.zeros(model.n_dof)
    for (node, comp), val in loads.items():
        f[6 * node + comp] += val
    f_red = M.T @ f
    u_red = _solve_reduced(model, M, f_red, clamped, config.solver_tol)
    u = M @ u_red
    return SolveResult(amplitude=float(f @ u), displacements=u,
                       element_energy=_energies(model, u), model=model)


def _mode_force(mode: str, direction_deg: float) -> np.ndarray:
    g = np.zeros(_N_AMP)
    phi = math.radians(direction_deg)
    if mode == "axial":
        g[_AX] = 1.0
    elif mode == "torsion":
        g[_TW] = 1.0
    elif mode == "bending":
        # tilt about the diameter at azimuth phi: u_y = q sin(theta - phi)
        g[_TS], g[_TC] = math.cos(phi), -math.sin(phi)
    elif mode == "shear":
        # transverse shear with sliding maximal at azimuth phi: u_x = q cos(theta - phi)
        g[_SS], g[_SC] = math.sin(phi), math.cos(phi)
    elif mode == "fold":
        g[_PL] = 1.0
    elif mode == "roll":
        # rigid rotation of the top edge about the vertical centre axis:
        # the flat band's own torsion
        g[_RL] = 1.0
    elif mode == "bending_flat":
        # rigid in-plane rotation of the top edge: differential stretch
        g[_BF] = 1.0
    else:
        raise ValidationError(f"unknown mode {mode!r}; choose from {MODES}")
    return g


def driver_stiffness_matrix(model: FrameModel,
                            config: MechanicsConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Condensed stiffness over the ring amplitudes (interior eliminated).

    Used for displacement-controlled (rigid fixture) measurements: the mode
    value under a prescribed amplitude with every other amplitude held zero
    is g^T K_drv g.
    """
    bottom = set(model.node_set("bottom"))
    top = model.node_set("top")
    M, q0 = _reduction_map(model, bottom, top)
    K_red = (M.T @ model.stiffness() @ M).tocsc()
    n = K_red.shape[0]
    qcols = np.arange(q0, q0 + _N_AMP)
    fcols = np.setdiff1d(np.arange(n), qcols)
    Kff = K_red[np.ix_(fcols, fcols)]
    Kfq = K_red[np.ix_(fcols, qcols)]
    Kqq = K_red[np.ix_(qcols, qcols)].toarray()
    X = spla.spsolve(sp.csc_matrix(Kff), Kfq.toarray())
    if X.ndim == 1:
        X = X[:, None]
    return Kqq - Kfq.T.toarray() @ X


def mode_stiffness_from_model(model: FrameModel, mode: str,
                              direction_deg: float = 0.0,
                              config: MechanicsConfig = DEFAULT_CONFIG,
                              ) -> tuple[float, SolveResult]:
    g = _mode_force(mode, direction_deg)
    res = solve_driver(model, g, config)
    if res.amplitude <= 0:
        raise SingularSystemError("non-positive compliance; system ill-posed")
    k_raw = 1.0 / res.amplitude           # N/mm per unit profile amplitude
    deg = math.pi / 180.0
    if mode in ("torsion", "roll", "bending_flat"):
        k = k_raw * model.R ** 2 * deg    # N*mm per degree of rotation
    elif mode == "bending":
        k = k_raw * model.R * deg         # N per degree of tilt (toolkit unit)
    else:
        k = k_raw                         # N/mm
    return k, res


def mode_stiffness(grid: VoxelGrid, activation: Iterable[Address], mode: str,
                   direction_deg: float = 0.0,
                   config: MechanicsConfig = DEFAULT_CONFIG) -> float:
    """Scalar stiffness of one global mode under an activation pattern."""
    model = build_frame(grid, activation, config)
    k, _ = mode_stiffness_from_model(model, mode, direction_deg, config)
    return k


@dataclass(frozen=True)
class StiffnessReport:
    axial: float      # N/mm
    shear: float      # N/mm
    bending: float    # N/deg
    torsion: float    # N*mm/deg
    axial_area: float
    shear_area: float
    bending_area: float
    torsion_area: float

    def value(self, mode: str) -> float:
        return getattr(self, mode)

    def to_rows(self, normalized_by: Optional["StiffnessReport"] = None) -> list[dict]:
        units = {"axial": "N/mm", "shear": "N/mm", "bending": "N/deg",
                 "torsion": "N*mm/deg"}
        rows = []
        for mode in ("axial", "shear", "bending", "torsion"):
            norm = getattr(self, mode + "_area")
            if normalized_by is not None:
                norm = self.value(mode) / normalized_by.value(mode)
            rows.append({"mode": mode, "value": self.value(mode),
                         "unit": units[mode], "normalized": norm})
        return rows

    def to_dict(self) -> dict:
        return {m: self.value(m) for m in ("axial", "shear", "bending", "torsion")} | {
            m + "_area": getattr(self, m + "_area")
            for m in ("axial", "shear", "bending", "torsion")
        }


def stiffness_report(grid: VoxelGrid, activation: Iterable[Address] = (),
                     direction_deg: float = 0.0,
                     config: MechanicsConfig = DEFAULT_CONFIG) -> StiffnessReport:
    model = build_frame(grid, activation, config)
    vals = {}
    for mode in ("axial", "shear", "bending", "torsion"):
        vals[mode], _ = mode_stiffness_from_model(model, mode, direction_deg, config)
    area = geometry.sheet_area(grid.params)
    return StiffnessReport(
        axial=vals["axial"], shear=vals["shear"], bending=vals["bending"],
        torsion=vals["torsion"],
        axial_area=vals["axial"] / area, shear_area=vals["shear"] / area,
        bending_area=vals["bending"] / area, torsion_area=vals["torsion"] / area,
    )


def make_frame(nodes: Sequence[tuple[float, float]], elements: list[Element],
               R: float, ties: Optional[list[tuple[int, int]]] = None) -> FrameModel:
    """Assemble a raw frame (used by topology bands and oracle tests)."""
    return FrameModel(nodes=np.array(nodes, dtype=float), elements=elements, R=R,
                      ties=list(ties or []))
