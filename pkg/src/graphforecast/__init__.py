"""Forecasting the structure of growing graphs.

Given an ordered series of graph snapshots, the library forecasts vertex
counts and per-vertex degrees with ARIMA models, builds a candidate
("hypothetical") graph of plausible future edges, and selects the predicted
edge set by maximising a weighted objective under degree and total-edge
bounds with an exact 0/1 solver.
"""

__version__ = "0.1.0"

from .graphs import Graph, GraphSeries
from .predictor import PredictParams, PredictedGraph, predict, predict_distribution

__all__ = [
    "Graph",
    "GraphSeries",
    "PredictParams",
    "PredictedGraph",
    "predict",
    "predict_distribution",
    "__version__",
]
