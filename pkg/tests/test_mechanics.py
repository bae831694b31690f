"""Frame mechanics: hand oracles, linearity, failure envelopes, scaling fits."""
import math

import numpy as np
import pytest

from voxelskin.errors import SingularSystemError, ValidationError
from voxelskin import geometry, mechanics as mech
from voxelskin.mechanics import (Element, MaterialState, MechanicsConfig,
                                 failure_envelope, fit_scaling_exponent,
                                 ligament_stiffness, make_frame, _section)
from voxelskin.params import DEFAULT_DESIGN, design_from_band
from voxelskin.state import build_grid

SQRT3_2 = math.sqrt(3.0) / 2.0


@pytest.fixture(scope="module")
def ref_grid():
    return build_grid(DEFAULT_DESIGN)


# --- ligament formulas --------------------------------------------------------

def test_ligament_stiffness_hand_values():
    m = MaterialState(E=1000.0, sigma_y=30.0)
    k_s, k_b = ligament_stiffness(18.0, 3.0, 1.0, m)
    assert k_s == pytest.approx(1000.0 * 3.0 * 1.0 / 18.0, rel=1e-12)   # 166.67
    assert k_b == pytest.approx(12 * 1000.0 * 0.25 / 18.0 ** 3, rel=1e-12)  # 0.5144
    assert k_b == pytest.approx(0.514403292, abs=1e-8)


def test_ligament_scaling_exponents():
    m = MaterialState(E=1000.0, sigma_y=30.0)
    k_s1, k_b1 = ligament_stiffness(18.0, 3.0, 1.0, m)
    k_s2, k_b2 = ligament_stiffness(18.0, 3.0, 2.0, m)
    assert k_s2 / k_s1 == pytest.approx(2.0, rel=1e-12)
    assert k_b2 / k_b1 == pytest.approx(8.0, rel=1e-12)


def test_failure_envelope_hand_values():
    m = MaterialState(E=1000.0, sigma_y=30.0)
    env = failure_envelope(length=18.0, width=3.0, thickness=1.0, material=m)
    assert env.F_y == pytest.approx(90.0, rel=1e-12)
    assert env.F_cr == pytest.approx(math.pi ** 2 * 1000.0 * 0.25 / 324.0,
                                     rel=1e-12)
    assert env.F_cr == pytest.approx(7.615435, abs=1e-5)
    assert env.governing == "buckling"
    assert env.crossover_t_f == pytest.approx(
        18.0 * math.sqrt(12 * 30.0 / (math.pi ** 2 * 1000.0)), rel=1e-12)
    assert env.crossover_t_f == pytest.approx(3.437747, abs=1e-5)


def test_failure_crossover_property():
    m = MaterialState(E=1000.0, sigma_y=30.0)
    t_cross = failure_envelope(18.0, 3.0, 1.0, m).crossover_t_f
    below = failure_envelope(18.0, 3.0, 0.9 * t_cross, m)
    above = failure_envelope(18.0, 3.0, 1.1 * t_cross, m)
    at = failure_envelope(18.0, 3.0, t_cross, m)
    assert below.governing == "buckling"
    assert above.governing == "yield"
    assert abs(at.F_y - at.F_cr) / at.F_y <= 1e-9


def test_failure_envelope_rejects_elastomer():
    rubber = MaterialState(E=1.0, label="elastomer")
    with pytest.raises(ValidationError, match="metal"):
        failure_envelope(18.0, 3.0, 1.0, rubber)


# --- single-triangle oracle -----------------------------------------------------

def single_triangle_model(E=1000.0, w=3.0, t=1.0, L=18.0):
    mat = MaterialState(E=E, sigma_y=30.0)
    nodes = [(0.0, 0.0), (L, 0.0), (L / 2, SQRT3_2 * L)]
    A, Iy, Iz, J = _section(w, t)
    g = E / (2 * (1 + mat.nu))
    elements = [Element(a, b, E, g, A, Iy, Iz, J)
                for a, b in ((0, 1), (1, 2), (2, 0))]
    return make_frame(nodes, elements, R=30.0)


def test_single_triangle_matches_hand_static_analysis():
    """Clamped base, vertical unit load at the apex.

    By symmetry the apex neither sways nor rotates, so each inclined bar is a
    fixed-fixed member: k = 2 (k_s sin^2 60 + 12 E I_ip / L^3 cos^2 60) with
    the in-plane inertia I_ip = t w^3 / 12.
    """
    E, w, t, L = 1000.0, 3.0, 1.0, 18.0
    model = single_triangle_model(E, w, t, L)
    res = mech.solve_point(model, clamp_nodes=[0, 1], loads={(2, 1): -1.0})
    tip = res.displacements[6 * 2 + 1]
    k_s = E * w * t / L
    i_ip = t * w ** 3 / 12.0
    k_hand = 2 * (k_s * 0.75 + 12 * E * i_ip / L ** 3 * 0.25)
    assert tip == pytest.approx(-1.0 / k_hand, rel=1e-6)
    # apex stays on the symmetry line
    assert abs(res.displacements[6 * 2 + 0]) < 1e-12
    assert abs(res.displacements[6 * 2 + 5]) < 1e-12


def test_assembled_operator_symmetry_and_nullity(ref_grid):
    K, model = mech.assemble_global(ref_grid)
    dense = K.toarray()
    assert np.max(np.abs(dense - dense.T)) <= 1e-10 * np.max(np.abs(dense))
    # nullity before boundary conditions: exactly the six rigid-body modes
    tiny = build_grid(design_from_band(N_theta=3, m=1, N_z=1))
    K2, _ = mech.assemble_global(tiny)
    w = np.linalg.eigvalsh(K2.toarray())
    scale = np.max(np.abs(w))
    assert np.sum(np.abs(w) < 1e-9 * scale) == 6
    assert np.all(w > -1e-9 * scale)      # positive semidefinite


def test_modulus_linearity(ref_grid):
    """All-elastomer grid equals the all-metal grid scaled by E ratio."""
    cfg_hi = MechanicsConfig(E_metal=9250.0, include_membrane=False)
    cfg_lo = MechanicsConfig(E_metal=92.5, include_membrane=False)
    k_hi = mech.mode_stiffness(ref_grid, (), "axial", config=cfg_hi)
    k_lo = mech.mode_stiffness(ref_grid, (), "axial", config=cfg_lo)
    assert k_hi / k_lo == pytest.approx(100.0, rel=1e-9)


def test_solid_melted_ratio_equals_modulus_ratio():
    # h_0 = 0: no always-solid stand-off connectors, so melting rescales
    # every element and the ratio is exactly the modulus contrast
    grid = build_grid(design_from_band(N_theta=10, m=2, N_z=4, h_0=0.0))
    cfg = MechanicsConfig(include_membrane=False)
    act = set(grid.cells)
    for mode in ("axial", "torsion"):
        k_solid = mech.mode_stiffness(grid, (), mode, config=cfg)
        k_melted = mech.mode_stiffness(grid, act, mode, config=cfg)
        assert k_solid / k_melted == pytest.approx(
            cfg.E_metal / cfg.E_elastomer, rel=1e-6)


def test_force_scaling_superposition(ref_grid):
    model = mech.build_frame(ref_grid)
    g1 = mech._mode_force("axial", 0.0)
    r1 = mech.solve_driver(model, g1)
    r2 = mech.solve_driver(model, 3.0 * g1)
    assert r2.amplitude == pytest.approx(9.0 * r1.amplitude, rel=1e-9)


def test_melting_monotonicity(ref_grid):
    import random
    rng = random.Random(3)
    cells = sorted(ref_grid.cells)
    small = set(rng.sample(cells, 6))
    big = small | set(rng.sample(cells, 10))
    for mode in ("axial", "shear", "bending", "torsion"):
        k_small = mech.mode_stiffness(ref_grid, small, mode)
        k_big = mech.mode_stiffness(ref_grid, big, mode)
        assert k_big <= k_small + 1e-9


def test_activation_of_trimmed_voxel_rejected(ref_grid):
    from voxelskin.state import trim
    g = trim(ref_grid, [(1, 3)])
    with pytest.raises(ValidationError, match="trimmed"):
        mech.build_frame(g, {(1, 3)})


def test_disconnected_load_path_identified():
    # trimming both middle rows severs the load path between the clamped
    # bottom row and the driven top row
    from voxelskin.state import trim
    g = build_grid(DEFAULT_DESIGN)
    with pytest.warns(Warning):
        g = trim(g, [(r, c) for r in (1, 2) for c in range(20)])
    with pytest.raises(SingularSystemError, match="floating"):
        mech.mode_stiffness(g, (), "axial")


def test_mirror_symmetry():
    """Mirroring a pattern leaves every mode unchanged on a symmetric grid.

    A single-row band with an odd column count is exactly mirror-symmetric
    (equal overhang on both lines) and the mirror maps cell c to cols-1-c.
    """
    grid = build_grid(design_from_band(N_theta=21, m=1, N_z=1))
    cols = grid.cols

    pattern = {(0, 4), (0, 7), (0, 10)}
    mirrored = {(r, cols - 1 - c) for r, c in pattern}
    # uniform-profile modes are exactly invariant
    for mode in ("axial", "torsion"):
        k1 = mech.mode_stiffness(grid, pattern, mode)
        k2 = mech.mode_stiffness(grid, mirrored, mode)
        assert k1 == pytest.approx(k2, rel=1e-9)
    # the azimuth-profile modes see the band's ragged half-edge overhang
    # (the profile phase is not mirrored exactly); they agree to a few percent
    for mode in ("shear", "bending"):
        k1 = mech.mode_stiffness(grid, pattern, mode)
        k2 = mech.mode_stiffness(grid, mirrored, mode)
        assert k1 == pytest.approx(k2, rel=0.08)


def test_stiffness_report_units_and_rows(ref_grid):
    rep = mech.stiffness_report(ref_grid)
    assert rep.axial > 0 and rep.shear > 0
    assert rep.bending > 0 and rep.torsion > 0
    area = geometry.sheet_area(ref_grid.params)
    assert rep.axial_area == pytest.approx(rep.axial / area, rel=1e-12)
    rows = rep.to_rows()
    assert [r["mode"] for r in rows] == ["axial", "shear", "bending", "torsion"]
    assert rows[2]["unit"] == "N/deg"
    assert rows[3]["unit"] == "N*mm/deg"


def test_fit_scaling_exponent():
    exp, r2 = fit_scaling_exponent([(1, 1), (2, 8), (4, 64)])
    assert exp == pytest.approx(3.0, abs=1e-12)
    assert r2 == pytest.approx(1.0, abs=1e-12)
    exp, r2 = fit_scaling_exponent([(1, 5), (2, 5), (4, 5)])
    assert exp == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValidationError):
        fit_scaling_exponent([(1, 1), (2, 8)])
    with pytest.raises(ValidationError):
        fit_scaling_exponent([(1, 1), (2, 8), (-4, 64)])


def test_pin_ties_transmit_force_not_moment():
    """A-frame with the apex joined by a translation tie: the pin transmits
    the load (apex stiffness near the truss value) but no moment, so the
    welded variant is strictly stiffer."""
    E, w, t, L = 1000.0, 3.0, 1.0, 18.0
    A, Iy, Iz, J = _section(w, t)
    g = E / 2.6
    apex = (L / 2, SQRT3_2 * L)
    nodes = [(0.0, 0.0), (L, 0.0), apex, apex]
    elements = [Element(0, 2, E, g, A, Iy, Iz, J),
                Element(1, 3, E, g, A, Iy, Iz, J)]
    pinned = make_frame(nodes, elements, R=30.0, ties=[(2, 3)])
    welded = make_frame(nodes[:3], [Element(0, 2, E, g, A, Iy, Iz, J),
                                    Element(1, 2, E, g, A, Iy, Iz, J)], R=30.0)
    res_p = mech.solve_point(pinned, [0, 1], {(2, 1): -1.0})
    res_w = mech.solve_point(welded, [0, 1], {(2, 1): -1.0})
    tip_p = -res_p.displacements[6 * 2 + 1]
    tip_w = -res_w.displacements[6 * 2 + 1]
    k_truss = 2 * (E * A / L) * 0.75
    assert 1.0 / tip_p == pytest.approx(k_truss, rel=0.05)
    assert tip_w < tip_p   # weld adds the frame (moment) path
