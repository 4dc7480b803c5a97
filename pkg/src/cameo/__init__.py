"""Cameo random graphs with independent edges: generation, path combinatorics,
threshold predictions and Monte Carlo validation."""

from cameo.analytic import (
    PathCoefficients,
    ThresholdPrediction,
    path_coefficients,
    predict_threshold,
)
from cameo.exceptions import BudgetExceeded, CameoError, DomainError
from cameo.graphgen import CameoParams, Graph, generate
from cameo.weights import WeightDistribution, WeightSample, sample_weights

__all__ = [
    "BudgetExceeded",
    "CameoError",
    "CameoParams",
    "DomainError",
    "Graph",
    "PathCoefficients",
    "ThresholdPrediction",
    "WeightDistribution",
    "WeightSample",
    "generate",
    "path_coefficients",
    "predict_threshold",
    "sample_weights",
]

__version__ = "0.1.0"
