"""scikit-learn style wrappers around the forward model and the reconstruction."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_volume
from .forward import simulate_boundary
from .grid import BoundarySeries, Grid
from .inversion import ReconConfig, reconstruct, six_face_reconstruct
from .metrics import rel_error


class CavityForwardModel(TransformerMixin, BaseEstimator):
    """Map initial pressure volumes to boundary time series.

    Parameters
    ----------
    T : float
        Acquisition time.
    dt : float or None
        Time step, the spatial step when None.
    faces : sequence of str or None
        Faces to record, the zero faces when None.
    backend : {"direct", "fast"}
    nufft_tol : float
        Target accuracy of the fast time-series evaluation.
    """

    def __init__(self, T=2.0, dt=None, faces=None, backend="fast", nufft_tol=1e-6):
        self.T = T
        self.dt = dt
        self.faces = faces
        self.backend = backend
        self.nufft_tol = nufft_tol

    def fit(self, X, y=None):
        X = check_volume(X)
        self.grid_ = Grid.from_T(X.ndim, X.shape[0], self.T, self.dt)
        return self

    def transform(self, X):
        check_is_fitted(self, "grid_")
        X = check_volume(X, self.grid_)
        return simulate_boundary(X, self.grid_, self.faces, self.backend, self.nufft_tol)


class CavityReconstructor(TransformerMixin, BaseEstimator):
    """Iterative reconstruction of the initial pressure from boundary data.

    ``fit(g)`` runs the iteration on `g` and stores every iterate; ``transform(g)``
    reruns it on new data with the fitted configuration and returns the final
    iterate.

    Parameters
    ----------
    n_iter : int
        Number of correction steps K.
    trunc : int or None
        Modes per axis, all grid modes when None.
    six_face : bool
        Use all faces with the jointly averaged update.
    window : {"bump", "bump4"}
    window_oversample, freq_oversample : int
        Resolution of the window table and of the fast spectrum grid.
    backend : {"direct", "fast"}
    nufft_tol : float
    early_stopping : bool
        Stop once the boundary residual grows.

    Attributes
    ----------
    grid_ : Grid
    config_ : ReconConfig
    iterates_ : list of ndarray
    coef_ : ndarray
        Final iterate.
    residual_norms_ : list of float
        Boundary residual after each iterate (three-face mode only).
    n_iter_ : int
        Correction steps actually taken.
    """

    def __init__(
        self,
        n_iter=2,
        trunc=None,
        six_face=False,
        window="bump",
        window_oversample=8,
        freq_oversample=8,
        backend="fast",
        nufft_tol=1e-6,
        early_stopping=False,
    ):
        self.n_iter = n_iter
        self.trunc = trunc
        self.six_face = six_face
        self.window = window
        self.window_oversample = window_oversample
        self.freq_oversample = freq_oversample
        self.backend = backend
        self.nufft_tol = nufft_tol
        self.early_stopping = early_stopping

    def _run(self, g):
        if self.six_face:
            return six_face_reconstruct(g, self.config_, return_iterates=True), []
        return reconstruct(g, self.config_, return_residuals=True)

    def fit(self, X, y=None):
        if not isinstance(X, BoundarySeries):
            raise TypeError(f"expected BoundarySeries, got {type(X).__name__}")
        self.grid_ = X.grid
        self.config_ = ReconConfig(
            X.grid,
            trunc=self.trunc,
            iterations=self.n_iter,
            window_kind=self.window,
            window_oversample=self.window_oversample,
            freq_oversample=self.freq_oversample,
            backend=self.backend,
            six_face=self.six_face,
            nufft_tol=self.nufft_tol,
            early_stop=self.early_stopping,
        )
        self.iterates_, self.residual_norms_ = self._run(X)
        self.coef_ = self.iterates_[-1]
        self.n_iter_ = len(self.iterates_) - 1
        return self

    def transform(self, X):
        check_is_fitted(self, "config_")
        if X.grid != self.grid_:
            raise ValueError("boundary data grid differs from the fitted grid")
        return self._run(X)[0][-1]

    def score(self, X, y):
        """Negative relative L2 error of the reconstruction of `X` against `y`."""
        return -rel_error(self.transform(X), np.asarray(y, dtype=float))
