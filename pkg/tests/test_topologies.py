"""Equal-mass topology comparison on the reference band."""
import math

import pytest

from voxelskin.errors import ValidationError
from voxelskin import topologies as topo
from voxelskin.topologies import (BandGeometry, TOPOLOGIES, build_band,
                                  topology_compare, topology_stiffness)


@pytest.fixture(scope="module")
def comparison():
    return topology_compare()


def test_all_bands_have_equal_mass():
    band = BandGeometry()
    for name in TOPOLOGIES:
        model = build_band(name, band)
        volume = 0.0
        for e in model.elements:
            x1, y1 = model.nodes[e.n1]
            x2, y2 = model.nodes[e.n2]
            volume += math.hypot(x2 - x1, y2 - y1) * e.A
        # equal budget unless clipped by the fabricable-width cap
        assert volume <= band.metal_volume * (1 + 1e-6)
        if name in ("triangular", "kagome", "cubic", "parallelogram"):
            assert volume == pytest.approx(band.metal_volume, rel=1e-6)


def test_bands_are_connected_and_solvable():
    for name in TOPOLOGIES:
        vals = topology_stiffness(name)
        assert all(v > 0 for v in vals.values()), name


def test_triangular_ranks_first_in_all_modes(comparison):
    assert comparison.first_in_all_modes() == "triangular"
    for mode in ("axial", "shear", "bending", "torsion"):
        assert comparison.ranking(mode)[0] == "triangular"
        assert comparison.normalized["triangular"][mode] == pytest.approx(1.0)


def test_triangular_beats_hexagonal_everywhere(comparison):
    tri = comparison.values["triangular"]
    hexa = comparison.values["hexagonal"]
    for mode in ("axial", "shear", "bending", "torsion"):
        assert tri[mode] > hexa[mode]


def test_self_comparison_normalizes_to_one():
    cmp1 = topology_compare(topologies=("triangular",))
    for mode in ("axial", "shear", "bending", "torsion"):
        assert cmp1.normalized["triangular"][mode] == pytest.approx(1.0)


def test_reference_scenario_is_30mm_30g():
    band = BandGeometry()
    assert band.R == 30.0
    assert band.mass_g == 30.0
    assert band.metal_volume == pytest.approx(30.0 / 0.0093)


def test_unknown_topology_raises():
    with pytest.raises(ValidationError, match="unknown topology"):
        build_band("voronoi")


def test_untileable_band_raises():
    with pytest.raises(ValidationError, match="cannot tile"):
        build_band("triangular", BandGeometry(cell=500.0))


def test_comparison_rows_export(comparison):
    rows = comparison.to_rows()
    assert len(rows) == len(TOPOLOGIES) * 4
    assert {r["topology"] for r in rows} == set(TOPOLOGIES)
    assert all(0 < r["normalized"] <= 1.0 + 1e-12 for r in rows)
