"""Design sweeps: scaling-law exponents and iso-stiffness pairs."""
import pytest

from voxelskin.errors import ValidationError
from voxelskin.params import DEFAULT_DESIGN
from voxelskin import sweeps
from voxelskin.sweeps import design_sweep, iso_stiffness_curve, sweep_values
from voxelskin.thermal import HeaterParams, ThermalParams


def test_t_f_exponent_is_bending_dominated():
    result = design_sweep("t_f", sweep_values(0.5, 2.0, 8), DEFAULT_DESIGN)
    assert 2.0 <= result.exponent <= 3.0
    assert result.r_squared > 0.999
    assert result.response_name == "fold"


def test_t_sheet_exponent_is_membrane_linear():
    result = design_sweep("t_sheet", sweep_values(2.0, 4.0, 6), DEFAULT_DESIGN)
    assert 1.0 - 1e-9 <= result.exponent <= 1.3
    assert result.response_name == "axial_melted"


def test_n_theta_exponent_is_nearly_quadratic():
    result = design_sweep("N_theta", [6, 8, 10, 12], DEFAULT_DESIGN)
    assert abs(result.exponent - 2.0) <= 0.3
    assert result.response_name == "axial_per_area"


def test_sweep_rows_carry_all_modes():
    from voxelskin import geometry
    result = design_sweep("t_f", [0.8, 1.0, 1.2], DEFAULT_DESIGN)
    area = geometry.sheet_area(DEFAULT_DESIGN)
    for row in result.rows:
        assert row.axial > 0 and row.shear > 0
        assert row.bending > 0 and row.torsion > 0
        assert row.k_area == pytest.approx(row.axial / area, rel=1e-9)
    # stiffness grows with ligament thickness in every mode
    assert result.rows[-1].axial > result.rows[0].axial


def test_single_point_sweep_rejected():
    with pytest.raises(ValidationError, match="3"):
        design_sweep("t_f", [1.0], DEFAULT_DESIGN)


def test_unknown_parameter_rejected():
    with pytest.raises(ValidationError, match="unknown sweep parameter"):
        design_sweep("alpha", [0.1, 0.2, 0.3], DEFAULT_DESIGN)


def test_sweep_values_helper():
    assert sweep_values(1.0, 2.0, 3) == pytest.approx([1.0, 1.5, 2.0])
    assert sweep_values(1.0, 2.0, 1) == [1.0]
    with pytest.raises(ValidationError):
        sweep_values(2.0, 1.0, 4)


def test_iso_stiffness_pairs_hold_the_level():
    from voxelskin import mechanics as mech
    from voxelskin.state import build_grid
    import dataclasses
    level = mech.mode_stiffness(build_grid(DEFAULT_DESIGN), (), "fold")
    pts = iso_stiffness_curve(level, DEFAULT_DESIGN, [0.8, 1.0, 1.2])
    assert pts, "expected at least one feasible iso point"
    for p in pts:
        params = dataclasses.replace(DEFAULT_DESIGN, t_f=p.t_f,
                                     t_sheet=p.t_sheet,
                                     phi_f=p.t_f / p.t_sheet)
        k = mech.mode_stiffness(build_grid(params), (), "fold")
        assert k == pytest.approx(level, rel=1e-3)
    # thinner ligaments need a thicker sheet to hold the level
    t_fs = [p.t_f for p in pts]
    t_sheets = [p.t_sheet for p in pts]
    assert all(a < b for a, b in zip(t_fs, t_fs[1:]))
    assert all(a > b for a, b in zip(t_sheets, t_sheets[1:]))


def test_melt_time_scaling_table():
    rows = sweeps.melt_time_scaling(ThermalParams(), HeaterParams(R_ser=0.0),
                                    [9.0, 18.0, 36.0])
    assert rows[1][1] / rows[0][1] == pytest.approx(8.0, rel=1e-12)
    assert rows[2][1] / rows[1][1] == pytest.approx(8.0, rel=1e-12)
