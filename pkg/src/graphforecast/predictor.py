"""End-to-end prediction: series -> candidates -> constraints -> selection.

A prediction is a subgraph of the hypothetical candidate graph chosen by the
exact binary solver; its vertex set is the union of the last snapshot's
vertices and the forecast new vertices (kept even when they attract no
edges, since the vertex count is a first-class forecast).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import constraints, solver
from .candidates import build_hypothetical
from .graphs import Graph, GraphSeries


@dataclass(frozen=True)
class PredictParams:
    """Knobs of the prediction distribution and the candidate construction."""

    gamma: float = 0.5  # quantile for the vertex-count forecast
    u: float = 0.8  # quantile for degree and total-edge bounds
    alpha: float = 1e-3  # objective weight of candidate new edges
    k: int = 10  # attachment fan-out per new vertex
    h: int = 1  # forecast horizon

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie strictly between 0 and 1")
        if not 0.0 < self.u < 1.0:
            raise ValueError("u must lie strictly between 0 and 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.h < 1:
            raise ValueError("h must be >= 1")


@dataclass(frozen=True)
class PredictedGraph:
    graph: Graph
    params: PredictParams
    horizon_origin: int  # T, the index of the last training snapshot
    diagnostics: dict = field(default_factory=dict)


def predict(series: GraphSeries, params: PredictParams) -> PredictedGraph:
    """Predict the snapshot at T + params.h from a training series of length T."""
    if len(series) < 4:
        raise ValueError(f"prediction needs at least 4 snapshots, got {len(series)}")
    H = build_hypothetical(series, params.h, params.gamma, params.k)
    cs = constraints.assemble(series, H, params.h, params.u, params.alpha)
    lp = solver.solve_lp(cs)
    ilp = solver.solve_ilp(cs)
    edges = [H.candidates[j].pair for j in range(cs.n_cols) if ilp.values[j]]
    vertices = set(H.base.vertices)
    vertices.update(H.new_vertex_ids)
    return PredictedGraph(
        graph=Graph(vertices, edges),
        params=params,
        horizon_origin=len(series),
        diagnostics={
            "lp_objective": lp.objective,
            "ilp_objective": ilp.objective,
            "candidate_count": cs.n_cols,
            "n_hat": H.n_hat,
            "nodes_explored": ilp.nodes_explored,
        },
    )


def predict_distribution(
    series: GraphSeries,
    gammas: list[float],
    us: list[float],
    alpha: float = 1e-3,
    k: int = 10,
    h: int = 1,
) -> list[PredictedGraph]:
    """Predictions for every (gamma, u) pair, in row-major order over the grid."""
    if not gammas or not us:
        raise ValueError("gammas and us must be non-empty")
    return [
        predict(series, PredictParams(gamma=g, u=u, alpha=alpha, k=k, h=h))
        for g in gammas
        for u in us
    ]
