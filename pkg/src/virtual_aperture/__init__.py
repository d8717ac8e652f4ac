"""Single-antenna FMCW radar imaging through a reconfigurable intelligent surface.

RIS phase programs move a virtual copy of the radar along an arc; windowed
matched-filter backprojection turns the resulting echoes into images.
"""

from .core import RisArray, Scene, Target, Vec2, element_positions, mirror_point, path_length
from .forward import PropagationMode, synthesize_ris_echo, synthesize_sar_echo
from .imaging import (
    GridSpec,
    ImageGrid,
    backproject,
    backproject_subregions,
    dirichlet_profile,
    focus,
    subregion_centers,
)
from .kernels import BACKEND
from .ris_control import (
    WindowKind,
    WindowSpec,
    far_field_program,
    gaussian_window,
    near_field_program,
    virtual_arc,
)
from .signal import ChirpParams, DataCube, add_awgn, point_response, wavenumber_grid

__version__ = "0.1.0"
