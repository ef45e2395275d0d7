"""Photoacoustic tomography in a rectangular reverberant cavity.

Forward simulation of boundary pressure in the sound-hard unit square or cube,
and iterative reconstruction of the initial pressure from windowed spectra of
the boundary time series.
"""

from .config import ConfigError, RunConfig, load_config, parse_config
from .estimators import CavityForwardModel, CavityReconstructor
from .forward import boundary_from_coeffs, eval_mode_series, pressure_field, simulate_boundary
from .grid import BoundarySeries, Grid, all_faces, default_faces
from .inversion import (
    CouplingOperator,
    ReconConfig,
    apply_A_dense,
    contraction_bound,
    crude_inverse,
    dense_solve,
    face_assignment,
    initial_coeffs,
    neumann_coeffs,
    reconstruct,
    reflect_boundary,
    six_face_reconstruct,
    windowed_spectrum,
)
from .io import read_boundary, read_volume, write_boundary, write_volume
from .metrics import ErrorReport, line_profile, rel_error
from .phantom import BallSpec, add_noise, ball_phantom, default_balls
from .spectral import (
    cosine_analyze,
    cosine_synth,
    eigenfrequency,
    face_cosine_analyze,
    face_cosine_synth,
    mode_norm_sq,
    omega_table,
)
from .window import WindowTable, eta_hat, coupling_bound, make_window, sufficient_T

__version__ = "0.1.0"
