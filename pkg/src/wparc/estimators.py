"""scikit-learn style wrappers for the coordinate changes on a fixed surface.

Rows of X are arc-length vectors.  Only the maps that are genuinely
coordinate transforms are wrapped; everything else lives in the modules.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_rows, check_surface
from .metrics import invert_widths, widths
from .wp_poisson import wp_bivector


class _SurfaceTransformer(TransformerMixin, BaseEstimator):
    def __init__(self, surface="one_holed_torus"):
        self.surface = surface

    def fit(self, X=None, y=None):
        self.surface_ = check_surface(self.surface)
        self.n_features_in_ = self.surface_.arc_count
        if X is not None:
            check_rows(X, self.n_features_in_)
        return self

    def _rows(self, X, positive=True):
        check_is_fitted(self, "surface_")
        return check_rows(X, self.n_features_in_, positive=positive)


class SLengthTransformer(_SurfaceTransformer):
    """a -> s = cosh(a / 2), and back."""

    def transform(self, X):
        return np.cosh(self._rows(X) / 2.0)

    def inverse_transform(self, X):
        S = self._rows(X)
        if np.any(S <= 1.0):
            raise ValueError("s-lengths must exceed 1")
        return 2.0 * np.arccosh(S)


class WidthTransformer(_SurfaceTransformer):
    """a -> widths; the inverse runs Newton's method from ``a0``."""

    def __init__(self, surface="one_holed_torus", a0=None, tol=1e-12):
        super().__init__(surface)
        self.a0 = a0
        self.tol = tol

    def transform(self, X):
        return np.array([widths(self.surface_, row) for row in self._rows(X)])

    def inverse_transform(self, X):
        W = self._rows(X, positive=False)
        return np.array([invert_widths(self.surface_, row, a0=self.a0, tol=self.tol)
                         for row in W])


class BracketFeatures(_SurfaceTransformer):
    """a -> the strictly upper triangle of the bivector, row-major."""

    def fit(self, X=None, y=None):
        super().fit(X, y)
        n = self.n_features_in_
        self.pairs_ = [(i, j) for i in range(n) for j in range(i + 1, n)]
        return self

    def transform(self, X):
        rows = self._rows(X)
        iu = tuple(np.array(self.pairs_, dtype=int).reshape(-1, 2).T)
        return np.array([wp_bivector(self.surface_, row)[iu] for row in rows])

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "pairs_")
        return np.array([f"{{a{i},a{j}}}" for i, j in self.pairs_], dtype=object)
