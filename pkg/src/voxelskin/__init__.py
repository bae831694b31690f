"""voxelskin: design, simulation and control planning for variable-stiffness
voxel lattice skins."""

__version__ = "0.1.0"

from .params import DesignParams, DEFAULT_DESIGN, design_from_band  # noqa: F401
from .state import VoxelGrid, VoxelRecord, Phase, Health, build_grid  # noqa: F401
from .errors import (ValidationError, InfeasibleError,  # noqa: F401
                     SingularSystemError, TrimDisconnectionWarning)
