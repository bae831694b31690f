"""Design parameter vector for a helical voxel band and its validation rules.

All lengths are millimetres and all angles degrees, toolkit wide.  The JSON
form is a flat object whose keys equal the field names below.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

from .errors import ValidationError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DesignParams:
    R: float          # host cylinder radius [mm]
    m: int            # helix turn count
    N_theta: int      # voxels per turn
    N_z: int          # stacked layers
    S_0: float        # nominal voxel edge length [mm]
    S_L: float        # fabricated (reduced) edge length [mm]
    h_0: float        # interlayer stand-off [mm]
    t_f: float        # metal ligament thickness [mm]
    t_sheet: float    # sheet thickness [mm]
    phi_f: float      # ligament thickness fraction t_f / t_sheet
    alpha: float      # ligament width fraction, width = alpha * S_0

    def validate(self) -> "DesignParams":
        if self.S_0 <= 0 or self.S_L <= 0:
            raise ValidationError("edge lengths must be positive (S_0 > 0, S_L > 0)")
        if not self.S_L < self.S_0:
            raise ValidationError("fabrication reduction requires S_L < S_0")
        if self.R <= 0:
            raise ValidationError("cylinder radius R must be positive")
        if int(self.m) != self.m or self.m < 1:
            raise ValidationError("turn count m must be an integer >= 1")
        if int(self.N_theta) != self.N_theta or self.N_theta < 3:
            raise ValidationError("N_theta must be an integer >= 3")
        if int(self.N_z) != self.N_z or self.N_z < 1:
            raise ValidationError("N_z must be an integer >= 1")
        if self.h_0 < 0:
            raise ValidationError("stand-off h_0 must be >= 0")
        if self.t_sheet <= 0 or self.t_f <= 0:
            raise ValidationError("thicknesses t_f, t_sheet must be positive")
        if not 0.0 < self.phi_f <= 1.0:
            raise ValidationError("phi_f must lie in (0, 1]")
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError("alpha must lie in (0, 1)")
        if abs(self.t_f - self.phi_f * self.t_sheet) > 1e-9 * self.t_sheet:
            raise ValidationError("thickness coupling violated: t_f must equal phi_f * t_sheet")
        closure = self.S_0 * self.N_theta
        if abs(closure - TWO_PI * self.R) > 1e-6 * TWO_PI * self.R:
            raise ValidationError(
                "circumferential closure violated: S_0 * N_theta must equal 2*pi*R "
                f"(got {closure:.9g} vs {TWO_PI * self.R:.9g})"
            )
        return self

    @property
    def cols(self) -> int:
        return int(self.N_theta) * int(self.m)

    @property
    def rows(self) -> int:
        return int(self.N_z)

    @property
    def ligament_width(self) -> float:
        return self.alpha * self.S_0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "DesignParams":
        fields = {k: d[k] for k in cls.__dataclass_fields__}
        fields["m"] = int(fields["m"])
        fields["N_theta"] = int(fields["N_theta"])
        fields["N_z"] = int(fields["N_z"])
        return cls(**fields).validate()

    @classmethod
    def from_json(cls, text: str) -> "DesignParams":
        return cls.from_dict(json.loads(text))


def design_from_band(
    N_theta: int,
    m: int = 1,
    N_z: int = 1,
    S_0: float = 18.0,
    compression: float = 0.35,
    h_0: float = 0.0,
    t_sheet: float = 2.0,
    phi_f: float = 0.5,
    alpha: float = 1.0 / 6.0,
) -> DesignParams:
    """Build a closed (R derived from S_0 * N_theta = 2*pi*R) parameter set."""
    return DesignParams(
        R=S_0 * N_theta / TWO_PI,
        m=m,
        N_theta=N_theta,
        N_z=N_z,
        S_0=S_0,
        S_L=compression * S_0,
        h_0=h_0,
        t_f=phi_f * t_sheet,
        t_sheet=t_sheet,
        phi_f=phi_f,
        alpha=alpha,
    ).validate()


# Reference design: 18 mm voxels, 10 per turn, two turns, four layers.  Yields
# the 4 x 20 grid used throughout the test and demo suite; full-row activation
# of all four layers predicts ~30 % axial shortening.
DEFAULT_DESIGN = design_from_band(
    N_theta=10, m=2, N_z=4, S_0=18.0, compression=0.35, h_0=2.0
)
