import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from wparc.estimators import BracketFeatures, SLengthTransformer, WidthTransformer

SYM = math.acosh(2.0)


def test_s_lengths_round_trip(rng):
    X = rng.uniform(0.2, 3.0, (5, 3))
    t = SLengthTransformer().fit(X)
    assert t.n_features_in_ == 3
    assert np.allclose(t.inverse_transform(t.transform(X)), X, atol=1e-12)
    with pytest.raises(ValueError):
        t.inverse_transform(np.ones((1, 3)))


def test_width_round_trip(rng):
    X = SYM + rng.uniform(-0.2, 0.2, (3, 3))
    t = WidthTransformer().fit(X)
    W = t.transform(X)
    assert np.allclose(t.inverse_transform(W), X, atol=1e-8)


def test_bracket_features_symmetric():
    f = BracketFeatures().fit()
    assert list(f.get_feature_names_out()) == ["{a0,a1}", "{a0,a2}", "{a1,a2}"]
    assert f.transform(np.full(3, SYM))[0] == pytest.approx([0.2, -0.2, 0.2], abs=1e-12)


def test_pants_features_vanish(rng):
    f = BracketFeatures(surface="pair_of_pants").fit()
    assert np.max(np.abs(f.transform(rng.uniform(0.3, 2.0, (4, 3))))) < 1e-13


def test_validation():
    with pytest.raises(NotFittedError):
        SLengthTransformer().transform(np.ones((1, 3)))
    t = SLengthTransformer().fit()
    with pytest.raises(ValueError, match="3 columns"):
        t.transform(np.ones((1, 4)))
    with pytest.raises(ValueError, match="positive"):
        t.transform(-np.ones((1, 3)))
    with pytest.raises(TypeError):
        SLengthTransformer(surface=3).fit()


def test_clone_and_pipeline():
    t = clone(WidthTransformer(tol=1e-10))
    assert t.get_params()["tol"] == 1e-10
    pipe = make_pipeline(SLengthTransformer(), SLengthTransformer())
    out = pipe.fit_transform(np.full((1, 3), 1.0))
    assert out.shape == (1, 3)
