"""Closed-form kinematics of the helical band and unwrapped triangle placement.

The unwrapped sheet lives in the x-y plane: x runs along the unrolled
circumference (azimuth theta = x / R), y along the cylinder axis.  Row r
occupies the strip between y_r and y_r + (sqrt(3)/2) * S_0 with rows separated
by the stand-off h_0; odd rows are shifted half an edge so that, at h_0 = 0,
adjacent rows share nodes.  Even columns point up.
"""
from __future__ import annotations

import math
from typing import NamedTuple

from .errors import ValidationError
from .params import DesignParams

SQRT3_2 = math.sqrt(3.0) / 2.0


def band_height(params: DesignParams) -> float:
    """Total band height H = (sqrt(3)/2) S_0 N_z + (N_z - 1) h_0."""
    params.validate()
    return SQRT3_2 * params.S_0 * params.N_z + (params.N_z - 1) * params.h_0


def max_stroke(params: DesignParams) -> float:
    """Kinematic stroke bound (sqrt(3)/2) S_L N_z."""
    params.validate()
    return SQRT3_2 * params.S_L * params.N_z


class CompressionRatio(NamedTuple):
    value: float
    within_regime: bool  # False once h_0 exceeds 10 % of the row height


def compression_ratio(params: DesignParams) -> CompressionRatio:
    """S_L / S_0, flagged invalid outside the h_0 << (sqrt(3)/2) S_0 regime."""
    params.validate()
    return CompressionRatio(
        value=params.S_L / params.S_0,
        within_regime=params.h_0 <= 0.1 * SQRT3_2 * params.S_0,
    )


def sheet_area(params: DesignParams) -> float:
    """Unwrapped sheet area (2 pi m R) * H in mm^2."""
    return 2.0 * math.pi * params.m * params.R * band_height(params)


def normalize_stiffness(k: float, params: DesignParams) -> float:
    """Area-normalized stiffness k / A_sheet."""
    area = sheet_area(params)
    if area <= 0.0:
        raise ValidationError("sheet area must be positive to normalize stiffness")
    return k / area


# --- triangle placement -----------------------------------------------------

def triangle_height(params: DesignParams) -> float:
    return SQRT3_2 * params.S_0


def row_pitch(params: DesignParams) -> float:
    return triangle_height(params) + params.h_0


def row_x_offset(params: DesignParams, r: int) -> float:
    return 0.5 * params.S_0 if r % 2 else 0.0


def points_up(r: int, c: int) -> bool:
    """Orientation convention: even columns point up (every row)."""
    return c % 2 == 0


def tri_vertices(params: DesignParams, r: int, c: int) -> list[tuple[float, float]]:
    """Vertex coordinates of cell (r, c) on the unwrapped sheet."""
    s = params.S_0
    x0 = row_x_offset(params, r)
    y0 = r * row_pitch(params)
    y1 = y0 + triangle_height(params)
    if points_up(r, c):
        j = c // 2
        return [(x0 + j * s, y0), (x0 + (j + 1) * s, y0), (x0 + (j + 0.5) * s, y1)]
    j = (c + 1) // 2
    return [(x0 + j * s, y0), (x0 + (j - 0.5) * s, y1), (x0 + (j + 0.5) * s, y1)]


def cell_center_x(params: DesignParams, r: int, c: int) -> float:
    return sum(x for x, _ in tri_vertices(params, r, c)) / 3.0


def column_azimuth(params: DesignParams, c: int, r: int = 0) -> float:
    """Azimuth (radians) of the centre of cell (r, c): theta = x / R."""
    return cell_center_x(params, r, c) / params.R
