"""Limited-aperture to full-aperture recovery of 2D multi-static far-field data.

Submodules
----------
specfun    cylinder functions used by the kernels
geometry   kite / peanut / circle curves and their quadrature
forward    sound-soft Nyström solver and MSR generation
msr        MSR matrices, aperture masks, reciprocity completion, noise
recovery   Green's-formula and single-layer fits, Tikhonov, DR-MSR stepping
imaging    direct sampling and factorization indicators
io, cli    file formats and the command-line pipeline
"""

from .forward import ScatteringProblem, assemble_msr, assemble_operator, far_field
from .geometry import ParametricCurve, discretize
from .imaging import ImagingGrid, dsm_full, dsm_limited, fm_indicator, normalize
from .msr import (
    DirectionGrid,
    MsrMatrix,
    NoiseSpec,
    add_noise,
    blocks,
    error_metrics,
    reciprocity_complete,
    restrict,
)
from .recovery import RecoverySchedule, artificial_boundary, dr_msr, recover_row, tikhonov_solve

__version__ = "0.1.0"
