"""scikit-learn style wrappers.

The weights play the role of the data matrix: ``X`` is a single column of
vertex weights (each >= 1).  These estimators compose with sklearn tooling
(``get_params``/``set_params``, ``clone``, pipelines) without any new logic
of their own; the computations live in the functional modules.
"""

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from cameo import analytic, graphgen
from cameo.weights import WeightDistribution, WeightSample


def _check_weights(X):
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single column of weights, got {X.shape[1]} columns")
        X = X[:, 0]
    if np.any(X < 1.0):
        raise ValueError("weights must be >= 1")
    return X


class VisibilityTransformer(TransformerMixin, BaseEstimator):
    """Map weights ``w`` to visibilities ``y = phi(w)**-alpha``."""

    def __init__(self, distribution="powerlaw:gamma=3.0", alpha=0.0):
        self.distribution = distribution
        self.alpha = alpha

    def fit(self, X, y=None):
        _check_weights(X)
        self.dist_ = WeightDistribution.parse(self.distribution)
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "dist_")
        w = _check_weights(X)
        return np.exp(-self.alpha * self.dist_.logpdf(w)).reshape(-1, 1)


class CameoGraphSampler(BaseEstimator):
    """Fit on a weight column, then draw Cameo graphs on those vertices.

    Attributes
    ----------
    sample_ : WeightSample
    params_ : CameoParams
    expected_degree_ : ndarray of shape (n,)
    clamp_count_ : int
        Pairs whose probability is clamped at 1.
    """

    def __init__(self, c=1.0, alpha=0.0, distribution="powerlaw:gamma=3.0", method="envelope", random_state=None):
        self.c = c
        self.alpha = alpha
        self.distribution = distribution
        self.method = method
        self.random_state = random_state

    def fit(self, X, y=None):
        w = _check_weights(X)
        if w.size < 2:
            raise ValueError("need at least two vertices")
        if self.method not in graphgen.METHODS:
            raise ValueError(f"method must be one of {graphgen.METHODS}")
        dist = WeightDistribution.parse(self.distribution)
        self.sample_ = WeightSample.from_omegas(dist, w, self.alpha)
        self.params_ = graphgen.CameoParams(w.size, self.c, self.alpha)
        ys = self.sample_.ys
        self.expected_degree_ = self.c * (1.0 + (w.size - 2) * ys / self.sample_.normalizer)
        self.clamp_count_ = graphgen.clamp_count(self.params_, self.sample_)
        self.n_features_in_ = 1
        return self

    def sample(self, random_state=None):
        """Draw one graph; ``random_state`` (an int) defaults to the constructor's."""
        check_is_fitted(self, "sample_")
        seed = self.random_state if random_state is None else random_state
        if seed is None:
            seed = int(np.random.default_rng().integers(2**63))
        return graphgen.generate(self.params_, self.sample_, int(seed), self.method)


class PathThresholdEstimator(BaseEstimator):
    """Plug-in estimate of the low-alpha jump value from a weight sample.

    ``fit`` replaces the moments ``A`` and ``A2`` by the empirical means of
    ``y`` and ``y**2``; ``predict`` maps graph sizes to the predicted
    jump ``ln(n) / ln(B)``.  The analytic prediction for the named
    distribution is kept alongside in ``prediction_`` when one exists.
    """

    def __init__(self, c=1.0, alpha=0.25, distribution="powerlaw:gamma=3.0"):
        self.c = c
        self.alpha = alpha
        self.distribution = distribution

    def fit(self, X, y=None):
        w = _check_weights(X)
        if not 0.0 <= self.alpha < 0.5:
            raise ValueError("the plug-in jump estimate needs alpha in [0, 1/2)")
        dist = WeightDistribution.parse(self.distribution)
        ys = np.exp(-self.alpha * dist.logpdf(w))
        self.A_ = float(np.mean(ys))
        self.A2_ = float(np.mean(ys * ys))
        self.B_ = self.c * (1.0 + math.sqrt(self.A2_) / self.A_)
        self.regime_ = analytic.LOW_ALPHA if self.B_ > 1.0 else analytic.SUBCRITICAL
        self.prediction_ = analytic.predict_threshold(dist, self.c, self.alpha)
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "B_")
        n = check_array(X, ensure_2d=False, dtype=float).reshape(-1)
        if self.regime_ == analytic.SUBCRITICAL:
            return np.full(n.shape, np.nan)
        return np.log(n) / math.log(self.B_)
