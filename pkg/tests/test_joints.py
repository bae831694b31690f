"""Joint synthesis, evaluation, localization, compression prediction."""
import pytest

from voxelskin.errors import ValidationError
from voxelskin import joints, mechanics as mech
from voxelskin.joints import (ActivationPattern, JointSpec, evaluate_pattern,
                              localization_metric, modulation_pattern,
                              predict_compression, rotational_stiffness,
                              six_presets, synthesize_pattern)
from voxelskin.params import DEFAULT_DESIGN
from voxelskin.state import build_grid, trim


@pytest.fixture(scope="module")
def grid():
    return build_grid(DEFAULT_DESIGN)


def test_pattern_determinism(grid):
    spec = JointSpec("hinge_bilateral", (2, 0), magnitude="small")
    a = synthesize_pattern(spec, grid)
    b = synthesize_pattern(spec, grid)
    assert a.addresses == b.addresses
    assert a.label == "hinge_bilateral_small"


def test_hinge_band_shapes(grid):
    small = synthesize_pattern(JointSpec("hinge_bilateral", (2, 0),
                                         magnitude="small"), grid)
    large = synthesize_pattern(JointSpec("hinge_bilateral", (2, 0),
                                         magnitude="large"), grid)
    assert small.addresses == frozenset((2, c) for c in range(20))
    assert large.addresses == frozenset((r, c) for r in (1, 2) for c in range(20))
    assert small.addresses < large.addresses


def test_bend_band_shapes(grid):
    small = synthesize_pattern(JointSpec("bend_unilateral", (0, 8),
                                         magnitude="small"), grid)
    large = synthesize_pattern(JointSpec("bend_unilateral", (0, 8),
                                         magnitude="large"), grid)
    assert small.addresses == frozenset((r, c) for r in range(4)
                                        for c in (8, 9, 10))
    assert small.addresses < large.addresses
    assert len(large.addresses) == 16


def test_twist_stagger_arithmetic(grid):
    tw = synthesize_pattern(JointSpec("twist", (0, 0)), grid)
    # each row's activated columns sit a fixed stagger from the row below,
    # in two circumferentially opposite starts
    stag = grid.cols // grid.rows
    expected = set()
    for r in range(4):
        for i in range(2):
            expected.add((r, (stag * r + i) % 20))
            expected.add((r, (10 + stag * r + i) % 20))
    assert tw.addresses == frozenset(expected)


def test_axial_compress_full_rows(grid):
    pat = synthesize_pattern(JointSpec("axial_compress", rows_activated=4), grid)
    assert pat.addresses == frozenset(grid.cells)
    two = synthesize_pattern(JointSpec("axial_compress", rows_activated=2), grid)
    assert two.addresses == frozenset((r, c) for r in (0, 1) for c in range(20))


def test_band_exceeding_grid_raises(grid):
    with pytest.raises(ValidationError, match="exceeds"):
        synthesize_pattern(JointSpec("bend_unilateral", (0, 19),
                                     magnitude="large"), grid)
    with pytest.raises(ValidationError, match="exceeds"):
        synthesize_pattern(JointSpec("hinge_bilateral", (0, 0),
                                     magnitude="large"), grid)


def test_pattern_on_trimmed_grid_rejected(grid):
    cut = trim(grid, [(2, 5)])
    with pytest.raises(ValidationError, match="active"):
        synthesize_pattern(JointSpec("hinge_bilateral", (2, 0),
                                     magnitude="small"), cut)


def test_six_presets_cover_the_six_kinds(grid):
    presets = six_presets(grid)
    assert len(presets) == 6
    labels = [p.label for p in presets]
    assert labels == ["bend_unilateral_small", "bend_unilateral_large",
                      "hinge_bilateral_small", "hinge_bilateral_large",
                      "twist", "shear"]
    for p in presets:
        assert p.addresses


def test_empty_pattern_evaluates_to_identity(grid):
    empty = ActivationPattern(addresses=frozenset(), label="empty")
    rep = evaluate_pattern(grid, empty)
    for mode in ("axial", "shear", "bending", "torsion"):
        assert rep.before.value(mode) == rep.after.value(mode)
    assert rep.dominant_mode == "none"


def test_hinge_rotational_ordering(grid):
    small = synthesize_pattern(JointSpec("hinge_bilateral", (2, 0),
                                         magnitude="small"), grid)
    large = synthesize_pattern(JointSpec("hinge_bilateral", (2, 0),
                                         magnitude="large"), grid)
    k_small = rotational_stiffness(grid, small)
    k_large = rotational_stiffness(grid, large)
    assert k_large < k_small
    # softened segments add in series: two melted rows ~ half the stiffness
    assert k_small / k_large == pytest.approx(2.0, rel=0.1)


def test_bend_rotational_ordering(grid):
    small = synthesize_pattern(JointSpec("bend_unilateral", (0, 8),
                                         magnitude="small"), grid)
    large = synthesize_pattern(JointSpec("bend_unilateral", (0, 8),
                                         magnitude="large"), grid)
    assert rotational_stiffness(grid, large) < rotational_stiffness(grid, small)


def test_twist_dominant_mode_is_torsion(grid):
    tw = synthesize_pattern(JointSpec("twist", (0, 0)), grid)
    rep = evaluate_pattern(grid, tw)
    assert rep.dominant_mode == "torsion"


def test_localization_entire_grid_is_one(grid):
    pat = ActivationPattern(addresses=frozenset(grid.cells), label="all")
    loc = localization_metric(grid, pat,
                              joints.LoadCase(mode="axial"))
    assert loc == pytest.approx(1.0, abs=1e-12)


def test_localization_empty_pattern_rejected(grid):
    with pytest.raises(ValidationError, match="nonempty"):
        localization_metric(grid, ActivationPattern(addresses=frozenset()))


def test_all_six_presets_localize(grid):
    for pattern in six_presets(grid):
        assert localization_metric(grid, pattern) >= 0.8


def test_two_bends_low_cross_talk(grid):
    """Two vertical bend bands separated by stiff columns each stay >= 0.8
    when probed just past their own band."""
    import numpy as np
    left = synthesize_pattern(JointSpec("bend_unilateral", (0, 3),
                                        magnitude="small"), grid)
    right = synthesize_pattern(JointSpec("bend_unilateral", (0, 12),
                                         magnitude="small"), grid)
    both = ActivationPattern(addresses=left.addresses | right.addresses,
                             label="two bends")
    from voxelskin.state import adjacency
    neigh = adjacency(grid)
    model = mech.build_frame(grid, both.addresses)
    xs = model.nodes[:, 0]

    def metric_for(band, clamp_side, probe_x):
        clamp = (list(np.flatnonzero(xs <= xs.min() + 18.0))
                 if clamp_side == "left"
                 else list(np.flatnonzero(xs >= xs.max() - 18.0)))
        cand = [i for i in range(model.n_nodes)
                if abs(model.nodes[i, 0] - probe_x) < 9.1]
        res = mech.solve_point(model, clamp,
                               {(n, 2): 1.0 / len(cand) for n in cand})
        sel = set(band.addresses)
        for a in band.addresses:
            sel |= neigh[a]
        inside = sum(e for e, el in zip(res.element_energy, model.elements)
                     if el.cell in sel)
        return inside / res.total_energy

    # probe between the bands: the load path crosses only the nearer band
    x_left_band = 4.5 * 9.0   # centre of cols 3-5 in x
    x_between = 9.0 * 9.0 + 18.0
    assert metric_for(left, "left", x_between) >= 0.8
    assert metric_for(right, "right", x_between) >= 0.8


def test_predict_compression_reference_design():
    frac = predict_compression(DEFAULT_DESIGN, 4)
    assert frac == pytest.approx(21.8238401 / 68.3538291, abs=1e-6)
    assert frac == pytest.approx(0.3193, abs=5e-4)
    assert predict_compression(DEFAULT_DESIGN, 0) == 0.0
    assert predict_compression(DEFAULT_DESIGN, 2) == pytest.approx(frac / 2,
                                                                   rel=1e-12)


def test_predict_compression_bounded_by_stroke():
    from voxelskin import geometry
    for rows in range(5):
        frac = predict_compression(DEFAULT_DESIGN, rows)
        bound = geometry.max_stroke(DEFAULT_DESIGN) / geometry.band_height(
            DEFAULT_DESIGN)
        assert frac <= bound + 1e-12
    with pytest.raises(ValidationError):
        predict_compression(DEFAULT_DESIGN, 5)


def test_modulation_sets_are_nested(grid):
    prev = frozenset()
    for n in joints.MODULATION_SERIES:
        pat = modulation_pattern(grid, n)
        assert len(pat.addresses) == n
        assert prev <= pat.addresses
        prev = pat.addresses


def test_pattern_json_round_trip(grid):
    pat = synthesize_pattern(JointSpec("shear", (0, 4)), grid)
    back = ActivationPattern.from_json(pat.to_json())
    assert back.addresses == pat.addresses
    assert back.spec.kind == "shear"
    assert back.label == pat.label
    # addresses are serialized sorted
    doc = pat.to_dict()
    assert doc["addresses"] == sorted(doc["addresses"])
