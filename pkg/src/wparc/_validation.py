"""Input checks shared by the estimator wrappers and the command line."""

from __future__ import annotations

import numpy as np

from .surface import Surface, SurfaceError, bundled_surface


def check_surface(surface) -> Surface:
    """Accept a Surface or the name of a bundled one; return it validated."""
    if isinstance(surface, str):
        return bundled_surface(surface)
    if not isinstance(surface, Surface):
        raise TypeError(f"expected a Surface or bundled surface name, got {type(surface).__name__}")
    return surface.validate()


def check_rows(X, n_cols: int, positive: bool = True, name: str = "X") -> np.ndarray:
    """2-d float array with ``n_cols`` columns; 1-d input is one row."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != n_cols:
        raise ValueError(f"{name} must have {n_cols} columns, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    if positive and np.any(X <= 0):
        raise ValueError(f"{name} entries must be positive")
    return X


def parse_arc_map(data, n_arcs: int, name: str = "lengths") -> np.ndarray:
    """Vector from an arc-id -> value mapping (JSON object keys may be strings)."""
    if not isinstance(data, dict):
        raise SurfaceError(f"{name}: expected an object mapping arc id to value")
    out = np.full(n_arcs, np.nan)
    for key, val in data.items():
        try:
            arc = int(key)
        except (TypeError, ValueError):
            raise SurfaceError(f"{name}: arc id {key!r} is not an integer") from None
        if not 0 <= arc < n_arcs:
            raise SurfaceError(f"{name}: arc id {arc} out of range 0..{n_arcs - 1}")
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise SurfaceError(f"{name}: value for arc {arc} is not a number")
        out[arc] = float(val)
    missing = [i for i in range(n_arcs) if np.isnan(out[i])]
    if missing:
        raise SurfaceError(f"{name}: missing arc id {missing[0]}")
    if np.any(out <= 0) or not np.all(np.isfinite(out)):
        raise SurfaceError(f"{name}: values must be positive and finite")
    return out
